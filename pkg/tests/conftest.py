import numpy as np
import pytest

from surfpde.bubble import BubbleGeometry, charts_for
from surfpde.geometry.library import standard_corpus


@pytest.fixture
def rng():
    return np.random.default_rng(20259)


@pytest.fixture(scope="session")
def reference_bubble():
    return BubbleGeometry.affine(1.0, 0.0, 1.2, 0.0, 0.8, 0.05)


@pytest.fixture(scope="session")
def chart_corpus(reference_bubble):
    """Library presets plus the five bubble charts (11 charts total)."""
    charts = standard_corpus()
    charts.extend(charts_for(reference_bubble, 0.0).values())
    return charts


def interior_points(chart, rng, n, pad=0.02):
    r_lo, r_hi, s_lo, s_hi = chart.domain
    r = rng.uniform(r_lo + pad * (r_hi - r_lo), r_hi - pad * (r_hi - r_lo), size=n)
    s = rng.uniform(s_lo + pad * (s_hi - s_lo), s_hi - pad * (s_hi - s_lo), size=n)
    return r, s
