import logging

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st
from hypothesis.extra import numpy as hnp

from kdv_reservoir.elm import (
    ShapeError,
    SingularMatrixError,
    TargetMatrix,
    TrainedModel,
    decode_boolean,
    infer,
    pseudoinverse,
    train_exact,
    train_pinv,
)
from kdv_reservoir.reference import REFERENCE_RESPONSE, REFERENCE_TARGET, REFERENCE_WEIGHTS

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


def square(n):
    return hnp.arrays(np.float64, (n, n), elements=finite)


def test_target_from_booleans():
    Y = TargetMatrix.from_booleans([False, True, True, False])
    np.testing.assert_array_equal(Y.entries, REFERENCE_TARGET)


def test_exact_identity():
    Y = np.array([[0.3, -2.0, 5.0], [1.0, 0.0, 7.5]])
    m = train_exact(np.eye(3), Y)
    np.testing.assert_array_equal(m.w_out, Y)
    assert m.mode == "exact" and np.all(m.bias == 0)


def test_exact_on_reference_matrices():
    m = train_exact(REFERENCE_RESPONSE, REFERENCE_TARGET)
    assert np.max(np.abs(m.w_out - REFERENCE_WEIGHTS)) <= 0.05
    assert m.meets_tolerance


def test_exact_rejects_equal_columns():
    X = np.array([[1.0, 1.0, 2.0], [3.0, 3.0, 1.0], [0.5, 0.5, 4.0]])
    with pytest.raises(SingularMatrixError):
        train_exact(X, np.eye(3)[:2])


def test_exact_rejects_nonsquare():
    with pytest.raises(ShapeError):
        train_exact(np.ones((3, 4)), np.ones((2, 4)))
    with pytest.raises(ShapeError):
        train_exact(np.eye(3), np.ones((2, 4)))


def test_exact_warns_when_ill_conditioned(caplog):
    X = np.diag([1.0, 1.0, 1e-10])
    with caplog.at_level(logging.WARNING, logger="kdv_reservoir.elm"):
        train_exact(X, np.eye(3))
    assert "ill-conditioned" in caplog.text


def test_pinv_matches_exact_on_invertible():
    rng = np.random.default_rng(3)
    X = rng.normal(size=(4, 4)) + 4 * np.eye(4)
    Y = rng.normal(size=(2, 4))
    np.testing.assert_allclose(train_pinv(X, Y).w_out, train_exact(X, Y).w_out, atol=1e-10)


def test_pinv_zero_matrix():
    m = train_pinv(np.zeros((3, 4)), np.ones((2, 4)))
    np.testing.assert_array_equal(m.w_out, np.zeros((2, 3)))


def test_pinv_with_bias():
    rng = np.random.default_rng(4)
    X = rng.normal(size=(3, 3)) + 3 * np.eye(3)
    b = np.array([0.3, -0.2])
    Y = rng.normal(size=(2, 3))
    m = train_pinv(X, Y, b)
    np.testing.assert_allclose(infer(m, X), Y, atol=1e-12)


def test_pinv_shape_errors():
    with pytest.raises(ShapeError):
        train_pinv(np.ones((3, 4)), np.ones((2, 5)))
    with pytest.raises(ShapeError):
        train_pinv(np.ones((3, 4)), np.ones((2, 4)), b=[1.0, 2.0, 3.0])


def test_pinv_least_squares_vs_normal_equations():
    rng = np.random.default_rng(11)
    for _ in range(20):
        X = rng.normal(size=(3, 5))
        Y = rng.normal(size=(2, 5))
        oracle = Y @ X.T @ np.linalg.inv(X @ X.T)
        np.testing.assert_allclose(train_pinv(X, Y).w_out, oracle, atol=1e-8)


@settings(max_examples=50, deadline=None)
@given(hnp.arrays(np.float64, st.tuples(st.integers(1, 6), st.integers(1, 6)), elements=finite))
def test_penrose_axioms(X):
    s = np.linalg.svd(X, compute_uv=False)
    kept = s[s > 1e-12 * s[0]] if s[0] > 0 else s[:0]
    assume(kept.size == 0 or kept[0] / kept[-1] < 1e4)
    P = pseudoinverse(X)
    np.testing.assert_allclose(X @ P @ X, X, atol=1e-8)
    np.testing.assert_allclose(P @ X @ P, P, atol=1e-8 * max(1.0, np.abs(P).max()))
    # both products are symmetric
    np.testing.assert_allclose(X @ P, (X @ P).T, atol=1e-8)
    np.testing.assert_allclose(P @ X, (P @ X).T, atol=1e-8)


@settings(max_examples=50, deadline=None)
@given(square(4), hnp.arrays(np.float64, (2, 4), elements=finite))
def test_exact_learning_identity(X, Y):
    cond = np.linalg.cond(X)
    assume(np.isfinite(cond) and cond < 1e8)
    m = train_exact(X, Y)
    err = np.max(np.abs(infer(m, X) - Y))
    assert err <= 1e3 * np.finfo(float).eps * cond * max(1.0, np.abs(Y).max())


def test_infer():
    m = TrainedModel(np.zeros((2, 3)), [0.3, 0.7])
    np.testing.assert_array_equal(infer(m, [1.0, 2.0, 3.0]), [0.3, 0.7])
    ident = TrainedModel(np.eye(3), np.zeros(3))
    np.testing.assert_array_equal(infer(ident, [1.0, -2.0, 3.0]), [1.0, -2.0, 3.0])
    with pytest.raises(ShapeError):
        infer(m, [1.0, 2.0])


def test_reference_model_reproduces_targets():
    m = train_exact(REFERENCE_RESPONSE, REFERENCE_TARGET)
    for j in range(4):
        np.testing.assert_allclose(infer(m, REFERENCE_RESPONSE[:, j]), REFERENCE_TARGET[:, j], atol=1e-3)
    y = infer(m, REFERENCE_RESPONSE[:, 1])
    assert decode_boolean(y).value is True


def test_decode():
    assert decode_boolean([1, 0]).value is False and decode_boolean([1, 0]).confidence == 1
    assert decode_boolean([0, 1]).value is True and decode_boolean([0, 1]).confidence == 1
    tie = decode_boolean([0.5, 0.5])
    assert tie.value is False and tie.confidence == 0 and tie.tie
    with pytest.raises(ShapeError):
        decode_boolean([1, 0, 0])


@given(
    y=hnp.arrays(np.float64, 2, elements=finite),
    shift=st.floats(-100, 100),
    scale=st.floats(1e-3, 1e3),
)
def test_decode_invariance(y, shift, scale):
    assume(abs(y[1] - y[0]) > 1e-6)
    base = decode_boolean(y).value
    assert decode_boolean(y + shift).value == base
    assert decode_boolean(y * scale).value == base


def test_model_roundtrip_bit_exact(tmp_path):
    rng = np.random.default_rng(5)
    m = train_pinv(rng.normal(size=(4, 6)), rng.normal(size=(2, 6)), b=rng.normal(size=2))
    path = tmp_path / "model.json"
    m.save(path)
    back = TrainedModel.load(path)
    assert np.array_equal(back.w_out, m.w_out)
    assert np.array_equal(back.bias, m.bias)
    assert back.condition_number == m.condition_number and back.residual == m.residual
    assert back.mode == "pseudoinverse"
