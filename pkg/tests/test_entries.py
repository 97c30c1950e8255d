import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from heavytail_rmt.eigen import full_spectrum
from heavytail_rmt.ensembles import beta_range, default_beta
from heavytail_rmt.entries import (
    Scope,
    epsilon_cap,
    inf_norm,
    lemma_diagnostics,
    predicted_top_eigenvalues,
    rayleigh_lower_bound,
    top_entries,
    truncated_first_moment,
    truncated_moments,
    truncated_top,
    truncated_top_scaling,
)
from heavytail_rmt.rng import Stream
from heavytail_rmt.tails import Kind, LogPower, Normalizer, Symmetry, TailLaw, normalizer

from conftest import random_symmetric


def full_sort_oracle(m, scope, k):
    if scope == "upper":
        cells = [(i, j) for i in range(m.shape[0]) for j in range(i, m.shape[1])]
    else:
        cells = [(i, j) for i in range(m.shape[0]) for j in range(m.shape[1])]
    cells.sort(key=lambda c: (-abs(m[c]), c))
    return cells[:k]


class TestTopEntries:
    def test_example(self):
        stats = top_entries(np.array([[1.0, -5], [-5, 2]]), "upper", 2)
        one_based = [(a, v, (i + 1, j + 1)) for a, v, (i, j) in stats.as_rows()]
        assert one_based == [(5.0, -5.0, (1, 2)), (2.0, 2.0, (2, 2))]

    def test_ties_lexicographic(self):
        stats = top_entries(np.full((3, 3), 7.0), Scope.UPPER, 6)
        assert stats.positions == [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)]
        stats = top_entries(np.full((2, 3), -1.0), Scope.FULL, 4)
        assert stats.positions == [(0, 0), (0, 1), (0, 2), (1, 0)]

    @given(st.integers(0, 10_000), st.integers(1, 12), st.integers(1, 12), st.booleans())
    @settings(max_examples=80)
    def test_matches_full_sort(self, seed, n, p, ties):
        rng = np.random.default_rng(seed)
        m = rng.integers(-4, 5, (n, p)).astype(float) if ties else rng.standard_normal((n, p))
        scope = "full"
        if n == p and seed % 2:
            m = m + m.T
            scope = "upper"
        k = min(5, n * p if scope == "full" else n * (n + 1) // 2)
        assert top_entries(m, scope, k).positions == full_sort_oracle(m, scope, k)

    def test_m_too_large(self):
        with pytest.raises(ValueError):
            top_entries(np.eye(2), "upper", 4)


class TestPrediction:
    def test_wigner_uses_magnitude(self):
        stats = top_entries(np.array([[0.0, -7], [-7, 0]]), "upper", 1)
        assert predicted_top_eigenvalues(stats, Kind.WIGNER, 1).tolist() == [7.0]
        assert full_spectrum([[0.0, -7], [-7, 0]]).values[0] == pytest.approx(7.0)

    def test_covariance_squares(self):
        stats = top_entries(np.array([[3.0, 1.0]]), "full", 2)
        assert predicted_top_eigenvalues(stats, Kind.COVARIANCE, 1).tolist() == [9.0]

    def test_k_zero_and_too_large(self):
        stats = top_entries(np.eye(2), "upper", 2)
        assert predicted_top_eigenvalues(stats, Kind.WIGNER, 0).size == 0
        with pytest.raises(ValueError):
            predicted_top_eigenvalues(stats, Kind.WIGNER, 3)


class TestNormsAndRayleigh:
    def test_inf_norm_examples(self):
        assert inf_norm([[1, -2], [3, 0]]) == 3
        assert inf_norm(np.eye(5)) == 1

    def test_rayleigh_examples(self):
        m = np.array([[0.0, 5], [5, 0]])
        assert rayleigh_lower_bound(m, top_entries(m, "upper", 1)) == pytest.approx(5)
        m = -m
        assert rayleigh_lower_bound(m, top_entries(m, "upper", 1)) == pytest.approx(5)
        m = np.diag([4.0, 1.0])
        assert rayleigh_lower_bound(m, top_entries(m, "upper", 1)) == 4.0

    @given(st.integers(0, 100_000), st.integers(1, 15), st.floats(0.3, 3.0))
    @settings(max_examples=80)
    def test_sandwich(self, seed, n, alpha):
        from heavytail_rmt.ensembles import generate_wigner
        m = generate_wigner(TailLaw(alpha), n, Stream(seed, n)).entries
        lam = full_spectrum(m).values[0]
        scale = max(np.abs(m).max(), 1.0)
        lower = rayleigh_lower_bound(m, top_entries(m, "upper", 1))
        assert lower <= lam + 1e-8 * scale
        assert lam <= inf_norm(m) + 1e-8 * scale


def _norm(b, kind=Kind.WIGNER, n=2, p=None):
    return Normalizer(b, kind, n, p)


class TestLemmaDiagnostics:
    def test_zero_matrix(self):
        rep = lemma_diagnostics(np.zeros((3, 3)), _norm(10.0, n=3), Kind.WIGNER, alpha=1.0)
        assert set(rep.events) == {"diagonal", "pair", "row_pair", "row_mass"}
        assert not any(rep.flags().values())
        rep = lemma_diagnostics(np.zeros((2, 3)), _norm(10.0, Kind.COVARIANCE, 2, 3),
                                Kind.COVARIANCE, alpha=1.0)
        assert set(rep.events) == {"row_pair", "row_mass", "column_mass"}
        assert not any(rep.flags().values())

    def test_row_pair_constructed(self):
        b = 100.0
        big = b**0.76 * 1.01
        m = np.zeros((3, 3))
        m[0, 1] = m[1, 0] = big
        m[0, 2] = m[2, 0] = -big
        rep = lemma_diagnostics(m, _norm(b, n=3), Kind.WIGNER, alpha=1.0, delta=0.01)
        ev = rep.events["row_pair"]
        assert ev.occurred and ev.witness == (0, 1, 2)
        i, j, k = ev.witness
        assert abs(m[i, j]) > ev.threshold and abs(m[i, k]) > ev.threshold
        assert not rep.events["diagonal"].occurred

    def test_two_by_two_single_offdiagonal_pair(self):
        # a symmetric 2x2 holds one off-diagonal value per row
        b = 100.0
        m = np.array([[0.0, 50.0], [50.0, 0.0]])
        rep = lemma_diagnostics(m, _norm(b), Kind.WIGNER, alpha=1.0)
        assert not rep.events["row_pair"].occurred

    def test_diagonal_and_pair_events(self):
        b = 1e4
        m = np.zeros((3, 3))
        m[1, 1] = b ** (11 / 20) * 1.1
        m[0, 2] = m[2, 0] = b**0.99 * 1.01
        m[0, 0] = 1.01 * b**0.1
        rep = lemma_diagnostics(m, _norm(b, n=3), Kind.WIGNER, alpha=1.0)
        assert rep.events["diagonal"].witness == (1,)
        assert rep.events["pair"].occurred and rep.events["pair"].witness == (0, 2)

    def test_row_mass_and_exponent_variant(self):
        b = 1e4
        t8 = b ** (0.75 + 1 / 8)
        t16 = b ** (0.75 + 1 / 16)
        m = np.zeros((4, 4))
        m[0, 1] = m[1, 0] = 2 * t8
        m[0, 2] = m[2, 0] = 0.6 * t8
        m[0, 3] = m[3, 0] = 0.6 * t8
        rep8 = lemma_diagnostics(m, _norm(b, n=4), Kind.WIGNER, alpha=1.0)
        assert rep8.events["row_mass"].witness == (0,)
        m[0, 2] = m[2, 0] = m[0, 3] = m[3, 0] = 0.3 * t8
        assert not lemma_diagnostics(m, _norm(b, n=4), Kind.WIGNER, 1.0).events["row_mass"].occurred
        assert 0.6 * t8 > t16
        rep16 = lemma_diagnostics(m, _norm(b, n=4), Kind.WIGNER, 1.0, mass_exponent="alpha/16")
        assert rep16.events["row_mass"].occurred

    def test_covariance_column_event(self):
        b = 1e3
        t = b ** (0.75 + 1.5 / 8)
        m = np.zeros((3, 4))
        m[0, 2] = 2 * t
        m[1, 2] = 1.5 * t
        rep = lemma_diagnostics(m, _norm(b, Kind.COVARIANCE, 3, 4), Kind.COVARIANCE, alpha=1.5)
        assert rep.events["column_mass"].witness == (2,)
        assert not rep.events["row_mass"].occurred

    def test_kind_mismatch(self):
        with pytest.raises(ValueError):
            lemma_diagnostics(np.zeros((2, 2)), _norm(3.0), Kind.COVARIANCE, alpha=1.0)

    def test_witnesses_reproduce_on_random_matrices(self):
        law = TailLaw(0.8)
        from heavytail_rmt.ensembles import generate_wigner
        for r in range(20):
            m = generate_wigner(law, 40, Stream(4, r)).entries
            norm = normalizer(law, Kind.WIGNER, 40)
            rep = lemma_diagnostics(m, norm, Kind.WIGNER, alpha=0.8)
            for name, ev in rep.events.items():
                if not ev.occurred:
                    continue
                if name == "diagonal":
                    assert abs(m[ev.witness[0], ev.witness[0]]) > ev.threshold
                elif name == "pair":
                    i, j = ev.witness
                    assert abs(m[i, j]) > ev.threshold
                    assert abs(m[i, i]) + abs(m[j, j]) > norm.value**0.1
                elif name == "row_pair":
                    i, j, k = ev.witness
                    assert j != k and min(abs(m[i, j]), abs(m[i, k])) > ev.threshold
                else:
                    row = np.abs(m[ev.witness[0]])
                    assert row.max() > ev.threshold and row.sum() - row.max() > ev.threshold


def mp_moment(alpha, order, lo, hi, shift=0.0, kappa=None):
    """Truncated moment by mpmath quadrature against the magnitude density."""
    mpmath.mp.dps = 30
    a = mpmath.mpf(alpha)
    if kappa is None:
        dens = lambda x: a * x ** (-a - 1)
    else:
        k = mpmath.mpf(kappa)
        dens = lambda x: (1 + mpmath.log(x)) ** k * x ** (-a) * (a - k / (1 + mpmath.log(x))) / x
    pts = [lo] + [p for p in (2, 10, 100, 1000) if lo < p < hi] + [hi]
    return float(mpmath.quad(lambda x: (x - shift) ** order * dens(x), pts))


class TestTruncatedMoments:
    def test_examples(self):
        assert truncated_moments(TailLaw(1.0), 2.0, 2) == pytest.approx(mp_moment(1, 2, 1, 2), rel=1e-12)
        assert truncated_moments(TailLaw(1.0), 2.0, 2) == pytest.approx(1.0)
        assert truncated_moments(TailLaw(2.5), 1.0, 2) == 0.0
        assert truncated_moments(TailLaw(3.0), math.inf, 2) == pytest.approx(3.0)
        assert mp_moment(3, 2, 1, mpmath.inf) == pytest.approx(3.0, rel=1e-10)

    @pytest.mark.parametrize("alpha", [0.7, 2.0, 2.5, 3.5])
    @pytest.mark.parametrize("order", [2, 4, 6, 8])
    def test_closed_form_against_quadrature(self, alpha, order):
        for t in (3.0, 50.0):
            got = truncated_moments(TailLaw(alpha), t, order)
            assert got == pytest.approx(mp_moment(alpha, order, 1, t), rel=1e-10)

    def test_degenerate_log_case(self):
        assert truncated_moments(TailLaw(2.0), 10.0, 2) == pytest.approx(2 * math.log(10))

    def test_logpower_by_quadrature(self):
        law = TailLaw(2.5, LogPower(1.0))
        assert truncated_moments(law, 40.0, 2) == pytest.approx(
            mp_moment(2.5, 2, 1, 40, kappa=1.0), rel=1e-8)

    def test_one_sided_centered(self):
        law = TailLaw(2.5, symmetry=Symmetry.ONE_SIDED_CENTERED)
        mu = 2.5 / 1.5
        t = 20.0
        assert truncated_moments(law, t, 2) == pytest.approx(mp_moment(2.5, 2, 1, mu + t, shift=mu), rel=1e-8)
        c = truncated_first_moment(law, t)
        assert c == pytest.approx(mp_moment(2.5, 1, 1, mu + t, shift=mu), rel=1e-7)
        # centering bound: |E a 1{|a|<=T}| = E a 1{|a|>T} ~ T**(1-alpha) up to constants
        assert abs(c) <= 2.5 / 1.5 * (t - mu) ** (1 - 2.5) * 1.01

    def test_first_moment_symmetric_is_zero(self):
        assert truncated_first_moment(TailLaw(2.5), 10.0) == 0.0

    @pytest.mark.parametrize("alpha", [2.5, 3.0, 3.5])
    @pytest.mark.parametrize("order", [4, 6, 8])
    def test_bound_shape(self, alpha, order):
        ratios = [truncated_moments(TailLaw(alpha), t, order) / t ** (order - alpha)
                  for t in (10.0, 100.0, 1000.0)]
        c = alpha / (order - alpha)
        assert all(r <= c for r in ratios)

    def test_bad_order(self):
        with pytest.raises(ValueError):
            truncated_moments(TailLaw(1.0), 2.0, 3)


class TestTruncatedTop:
    def test_single_entry(self):
        assert truncated_top(np.array([[-0.9]]), 0.5, 1) == -0.9

    def test_all_truncated(self):
        assert truncated_top(np.full((3, 3), 50.0), 0.5, 3) == 0.0

    def test_epsilon_cap_value(self):
        beta = default_beta(2.5)
        assert epsilon_cap(2.5, beta) == pytest.approx((8 / 2.5 - 1 - beta * 3.75) / 16)

    def test_parameter_checks(self):
        law = TailLaw(2.5)
        beta = default_beta(2.5)
        with pytest.raises(ValueError):
            truncated_top_scaling(TailLaw(1.5), 0.8, 0.01, [10], 2)
        with pytest.raises(ValueError):
            truncated_top_scaling(law, beta_range(2.5)[1] + 0.01, 0.01, [10], 2)
        with pytest.raises(ValueError):
            truncated_top_scaling(law, beta, epsilon_cap(2.5, beta) * 1.01, [10], 2)

    def test_small_run(self):
        law = TailLaw(2.5)
        beta = default_beta(2.5)
        eps = epsilon_cap(2.5, beta) / 2
        res = truncated_top_scaling(law, beta, eps, [20, 40], 5, seed=3)
        again = truncated_top_scaling(law, beta, eps, [20, 40], 5, seed=3)
        assert res.medians == again.medians
        assert len(res.values[20]) == 5 and len(res.consecutive_ratios) == 1
