"""Smoke tests for the hswd python module against numpy references."""

import math
import os
import sys

import numpy as np
import pytest

module_dir = os.environ.get("HSWD_MODULE_DIR")
if module_dir:
    sys.path.insert(0, module_dir)

hswd = pytest.importorskip("hswd")


def test_wasserstein1d_matches_sorted_pairing():
    a = np.array([0.0, 1.0])
    b = np.array([-1.0, 1.0])
    assert hswd.wasserstein1d_sq(a, b) == pytest.approx(0.5, abs=1e-15)

    rng = np.random.default_rng(0)
    x = rng.normal(size=32)
    y = rng.normal(size=32)
    expected = np.mean((np.sort(x) - np.sort(y)) ** 2)
    assert hswd.wasserstein1d_sq(x, y) == pytest.approx(expected, rel=1e-12)


def test_hswd_matches_numpy_reference():
    rng = np.random.default_rng(1)
    z = rng.normal(size=(16, 4))
    b = rng.normal(size=(16, 4))
    per_col = [np.mean((np.sort(z[:, k]) - np.sort(b[:, k])) ** 2) for k in range(4)]
    expected = math.sqrt(sum(per_col) / 4)
    assert hswd.hswd(z, b) == pytest.approx(expected, rel=1e-12)


def test_swd_on_axes_equals_hswd():
    rng = np.random.default_rng(2)
    z = rng.normal(size=(10, 3))
    b = rng.normal(size=(10, 3))
    axes = np.eye(3)
    assert hswd.swd(z, b, axes) == pytest.approx(hswd.hswd(z, b), abs=1e-12)


def test_hswd_grad_matches_finite_differences():
    rng = np.random.default_rng(3)
    z = rng.normal(size=(6, 3))
    b = rng.normal(size=(6, 3))
    grad = hswd.hswd_grad(z, b)
    step = 1e-5
    for i in range(6):
        for k in range(3):
            zp = z.copy()
            zp[i, k] += step
            zm = z.copy()
            zm[i, k] -= step
            fd = (hswd.hswd(zp, b) - hswd.hswd(zm, b)) / (2 * step)
            assert grad[i, k] == pytest.approx(fd, rel=1e-4, abs=1e-8)


def test_rng_is_deterministic():
    a = hswd.Rng(42)
    b = hswd.Rng(42)
    assert [a.uniform() for _ in range(10)] == [b.uniform() for _ in range(10)]

    target = hswd.sample_binary_target(100, 4, hswd.Rng(5))
    assert set(np.unique(target)) == {-1.0, 1.0}

    slices = hswd.sample_slices(20, 5, hswd.Rng(6))
    assert np.allclose(np.linalg.norm(slices, axis=1), 1.0, atol=1e-12)


def test_binarize_hamming_and_map():
    z = np.array([[0.3, -0.7], [0.1, 0.2], [-0.5, -0.5]])
    codes = hswd.binarize(z)
    assert (codes.n, codes.m) == (3, 2)
    assert codes.bit(0, 0) and not codes.bit(0, 1)
    assert hswd.hamming(codes, 0, codes, 1) == 1
    assert hswd.hamming(codes, 0, codes, 0) == 0

    ranked = hswd.rank_all(codes, codes)
    assert ranked[0][0] == 0

    ap = hswd.mean_average_precision([[0, 1, 2]], [[1, 0, 1]])
    assert ap == pytest.approx(5.0 / 6.0, abs=1e-12)
    assert hswd.precision_at_r([[0, 1]], [[1, 0]], 2) == pytest.approx(0.5)


def test_diagnostics():
    z = np.array([[1.0, -1.0], [-1.0, 1.0]])
    codes = hswd.binarize(z)
    assert hswd.bit_entropy(codes) == pytest.approx(1.0)
    radians, zero_row = hswd.quantization_angle(z)
    assert radians == pytest.approx(0.0, abs=1e-12)
    assert not zero_row

    radians, _ = hswd.quantization_angle(np.array([[1.0, 0.0]]))
    assert radians == pytest.approx(math.pi / 4, abs=1e-12)


def test_shape_errors_raise():
    with pytest.raises(Exception):
        hswd.hswd(np.zeros((2, 2)), np.zeros((3, 2)))
    with pytest.raises(Exception):
        hswd.swd(np.zeros((2, 2)), np.zeros((2, 2)), np.full((1, 2), 5.0))
