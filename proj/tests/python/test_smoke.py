"""Smoke tests for the pybind module (built in-tree; see tests/CMakeLists.txt)."""

import math
import os
import sys

import numpy as np
import pytest

module_dir = os.environ.get("RIDGECR_MODULE_DIR")
if module_dir:
    sys.path.insert(0, module_dir)

core = pytest.importorskip("_core")


def test_kernel_constants():
    spec = core.KernelSpec(2, 5)
    c = core.kernel_constants(spec)
    assert c.a_K == pytest.approx(5.0, abs=1e-8)
    assert c.mu_K == pytest.approx(1.0 / 14.0, abs=1e-10)
    assert c.k3_satisfied
    R = np.asarray(c.R)
    assert R.shape == (3, 3)
    assert np.allclose(R, R.T)


def test_kernel_eval():
    spec = core.KernelSpec(2, 5)
    assert spec.eval([0.0, 0.0], [0, 0]) == pytest.approx(6.0 / math.pi)
    assert spec.eval([2.0, 0.0], [0, 0]) == 0.0


def test_z_alpha_and_threshold():
    assert core.z_alpha(0.05) == pytest.approx(2.970195, abs=1e-5)
    v = core.b_h_threshold(0.0, 0.0, 0.1, 1, 2)
    assert v == pytest.approx(math.sqrt(2 * math.log(10)), abs=1e-9)
    with pytest.raises(ValueError):
        core.z_alpha(1.5)


def test_model_sampling_and_kde():
    model = core.DensityModel(
        weights=[1.0],
        means=[np.zeros(2)],
        covs=[np.diag([4.0, 1.0])],
        lo=np.array([-3.0, -3.0]),
        hi=np.array([3.0, 3.0]),
    )
    pts = model.sample(2000, seed=7)
    assert pts.shape == (2000, 2)
    pack = core.kde_pack(pts, h=0.5, x=np.zeros(2), max_order=2)
    assert pack["value"] > 0.0
    assert len(pack["grad"]) == 2

    same = model.sample(2000, seed=7)
    assert np.array_equal(pts, same)


def test_find_ridge_recovers_the_axis():
    model = core.DensityModel(
        weights=[1.0],
        means=[np.zeros(2)],
        covs=[np.diag([4.0, 1.0])],
        lo=np.array([-3.0, -3.0]),
        hi=np.array([3.0, 3.0]),
    )
    pts = model.sample(4000, seed=3)
    out = core.find_ridge(
        pts, h=0.5, r=1, lo=np.array([-3.0, -3.0]), hi=np.array([3.0, 3.0]),
        seed_shape=[25, 25],
    )
    ridge = np.asarray(out["points"])
    assert ridge.shape[0] > 10
    assert np.abs(ridge[:, 1]).max() < 0.2
    assert max(out["lambda_rp1"]) < 0.0
