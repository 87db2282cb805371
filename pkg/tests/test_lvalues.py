import warnings

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sym2moment import lvalues as lv
from sym2moment import modforms as mf
from sym2moment.errors import DomainError, TruncationError
from sym2moment.precision import DEFAULT_POLICY


@pytest.fixture(scope="module")
def delta12():
    # module fixtures run before the function-level precision fixture
    with mpmath.workdps(60):
        (f,) = mf.eigenforms_with_weights(12, 400)
    return f


@pytest.fixture(scope="module")
def spec12():
    return lv.afe_spec(12)


@pytest.fixture(scope="module")
def afe12(delta12, spec12):
    with mpmath.workdps(60):
        return lv.sym2_central_afe(delta12, spec12)


@given(
    st.floats(0.2, 3),
    st.floats(-20, 20),
    st.sampled_from([12, 20, 36, 60]),
)
def test_gamma_ratio_duplication(x, t, k):
    # Gamma((a+u)/2) Gamma((a+1+u)/2) = 2^(1-a-u) sqrt(pi) Gamma(a+u)
    u = mpmath.mpc(x, t)
    assert abs(lv.r_a(u, k) - 2 ** (-u) * lv.r_b(u, k)) <= mpmath.mpf(10) ** -25 * abs(lv.r_a(u, k))


def test_v_kernel_sigma_independence():
    vals = [lv.v_kernel(3, 20, lv.afe_spec(20, sigma=s)) for s in (1.0, 1.5, 2.0)]
    assert max(vals) - min(vals) < 1e-18
    assert abs(vals[0] - mpmath.mpf("0.06428776553480087067071583818")) < 1e-25


def test_v_kernel_decay():
    v = lv.v_kernel(10**6, 20)
    assert abs(v) < 1e-15
    assert abs(v) <= lv.v_bound(10**6, 20, 4)


def test_v_kernel_below_one():
    y = mpmath.mpf("0.01")
    a = lv.v_kernel(y, 20, lv.afe_spec(20, sigma=1.0))
    b = lv.v_kernel(y, 20, lv.afe_spec(20, sigma=2.0))
    assert abs(a - b) < 1e-18
    with pytest.raises(DomainError):
        lv.v_kernel(0, 20)
    with pytest.raises(DomainError):
        lv.v_kernel_values([0.5], 20, lv.afe_spec(20))


def test_certified_cutoffs():
    tol = DEFAULT_POLICY.target_abs_tol / 10
    N12, tail, _ = lv.afe_cutoff(12, tol)
    assert N12 == lv.afe_spec(12).n_cutoff and tail <= tol
    assert N12 == 126
    assert lv.afe_spec(60).n_cutoff == 384


def test_dirichlet_coefficients(delta12):
    A = lv.dirichlet_coefficients(delta12, 50)
    assert A[1] == 1
    assert abs(A[4] - (delta12.lam[16] + 1)) < 1e-40
    assert abs(A[2] - delta12.lam[4]) < 1e-40
    assert abs(A[36] - A[4] * A[9]) < 1e-40


def test_afe_matches_oracle(delta12, afe12):
    b = lv.sym2_central_oracle(delta12)
    assert abs(afe12 - b) < 1e-18
    assert abs(afe12 - mpmath.mpf("0.5055493752227135150")) < 1e-18


def test_afe_kernel_scale_independence(delta12, afe12):
    other = lv.sym2_central_afe(delta12, lv.afe_spec(12, scale=0.05))
    assert abs(other - afe12) < 1e-12


def test_afe_doubling_cutoff_within_tail(delta12, spec12, afe12):
    doubled = lv.sym2_central_afe(delta12, lv.afe_spec(12, n_cutoff=2 * spec12.n_cutoff))
    assert abs(doubled - afe12) <= 2 * spec12.tail_estimate + 1e-45


def test_short_form_refused(spec12):
    (f,) = mf.eigenforms_with_weights(12, 20)
    with pytest.raises(TruncationError):
        lv.sym2_central_afe(f, spec12)


def test_quartic_kernel_has_no_certificate(delta12):
    with pytest.raises(TruncationError):
        lv.afe_spec(12, kernel="quartic")
    with pytest.raises(TruncationError):
        lv.sym2_central_afe(delta12, lv.quartic_spec(12, n_cutoff=200))


def test_quartic_kernel_value_is_sigma_independent():
    a = lv.v_kernel(2, 12, lv.quartic_spec(12, sigma=1.0))
    b = lv.v_kernel(2, 12, lv.quartic_spec(12, sigma=1.5))
    assert abs(a - b) < 1e-18


def test_euler_product_matches_oracle(delta12):
    s3 = lv.sym2_series(delta12, 3)
    assert abs(s3 - lv.sym2_central_oracle(delta12, 3)) < 1e-11 * s3


def test_euler_product_matches_dirichlet_series(delta12):
    # at s = 5 the Dirichlet series tail past M is below sum_{m > M} 4 m^-4
    M = 400
    A = lv.dirichlet_coefficients(delta12, M)
    partial = mpmath.fsum(A[m] * mpmath.mpf(m) ** -5 for m in range(1, M + 1))
    tail = mpmath.mpf(4) / (3 * mpmath.mpf(M) ** 3)
    assert abs(lv.sym2_series(delta12, 5) - partial) < tail + 1e-12


def test_euler_product_positive_weight_24():
    for f in mf.hecke_eigenforms(24, 40):
        assert lv.sym2_series(f, 3, rel_tol=1e-8) > 0


def test_euler_product_at_one_warns(delta12):
    with pytest.warns(lv.UncertifiedTailWarning):
        lv.sym2_series(delta12, 1, P=100)
    with pytest.raises(TruncationError):
        lv.sym2_series(delta12, 1)
    with pytest.raises(DomainError):
        lv.sym2_series(delta12, 0.5)


def test_moment_lhs_weight_12(delta12, spec12, afe12):
    v = lv.moment_lhs(12, spec=spec12, forms=[delta12])
    assert abs(v - delta12.w * afe12) < 1e-45
    detail = lv.moment_lhs(12, spec=spec12, detail=True)
    assert len(detail.per_form) == 1
    assert abs(detail.value - v) < 1e-40


def test_moment_lhs_empty_space():
    assert lv.moment_lhs(14) == 0


def test_determinism(delta12, spec12):
    with mpmath.workdps(60):
        a = lv.sym2_central_afe(delta12, spec12)
        b = lv.sym2_central_afe(delta12, spec12)
    assert a == b


@settings(max_examples=5)
@given(st.floats(1, 40))
def test_v_kernel_bounded_by_certificate(y):
    assert abs(lv.v_kernel(y, 24)) <= lv.v_bound(y, 24, 2)


def test_euler_tail_monotone():
    assert lv.euler_tail(3, 1000) < lv.euler_tail(3, 100)
    P = lv.euler_cutoff(3, 1e-8)
    assert mpmath.expm1(lv.euler_tail(3, P)) <= 1e-8


def test_spec_validation():
    with pytest.raises(Exception):
        lv.afe_spec(12, sigma=0.5)
    with pytest.raises(TruncationError):
        lv.afe_spec(12, n_cutoff=5)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        lv.afe_spec(12, n_cutoff=500)
