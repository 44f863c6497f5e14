import math

import pytest
from mpmath import mp, mpf
from mpmath import log as mplog
from mpmath import sqrt as mpsqrt

from bellclone import dense
from bellclone.calculus import BellEnsemble, bxor, to_dense
from bellclone.dense import Cut
from bellclone.labels import B1, B3
from bellclone.measures import (
    MeasureReport,
    binary_entropy,
    ec_sigma1,
    ec_sigma_n,
    ed_rho2n,
    ed_rho_m,
    ed_sigma1,
    ed_sigma_n,
    irreversibility_gap,
)
from bellclone.protocols import build_sigma_n, prepare_rho_m

# Frozen 50-digit reference values (independent mpmath evaluation).
H2_QUARTER = 0.8112781244591328  # 2 - (3/4) log2(3)
EC_SIGMA1_QUARTER = 0.35457890266526987  # H2(1/2 + sqrt(3)/4)
ED_SIGMA1_QUARTER = 0.18872187554086714  # 1 - H2(1/4)
GAP_0999 = 0.0085233302225297


def h2_oracle(x: float) -> float:
    """50-digit binary entropy, evaluated independently with mpmath."""
    mp.dps = 50
    x = mpf(x)
    if x == 0 or x == 1:
        return 0.0
    return float(-x * mplog(x, 2) - (1 - x) * mplog(1 - x, 2))


class TestBinaryEntropy:
    def test_half_is_one(self):
        assert binary_entropy(0.5) == pytest.approx(1.0, abs=1e-15)

    def test_endpoints_are_zero(self):
        assert binary_entropy(0.0) == 0.0
        assert binary_entropy(1.0) == 0.0

    def test_quarter_frozen_value(self):
        assert binary_entropy(0.25) == pytest.approx(H2_QUARTER, abs=1e-15)
        assert binary_entropy(0.25) == pytest.approx(
            2.0 - 0.75 * math.log2(3.0), abs=1e-15
        )

    @pytest.mark.parametrize("x", [0.01, 0.2, 0.37, 0.5, 0.9])
    def test_against_high_precision_oracle(self, x):
        assert binary_entropy(x) == pytest.approx(h2_oracle(x), abs=1e-14)

    def test_domain(self):
        for bad in (-0.1, 1.1):
            with pytest.raises(ValueError):
                binary_entropy(bad)

    def test_symmetry(self):
        for k in range(1, 1000):
            x = k / 1000.0
            assert abs(binary_entropy(x) - binary_entropy(1.0 - x)) <= 1e-12

    def test_concavity_midpoints(self):
        xs = [k / 1000.0 for k in range(1001)]
        for a, b in zip(xs[:-2], xs[2:]):
            mid = binary_entropy((a + b) / 2.0)
            assert mid >= (binary_entropy(a) + binary_entropy(b)) / 2.0 - 1e-12


class TestSigmaFormulas:
    def test_separable_boundary(self):
        assert ec_sigma1(0.5) == pytest.approx(0.0, abs=1e-12)
        assert ed_sigma1(0.5) == pytest.approx(0.0, abs=1e-12)

    def test_pure_limit(self):
        p = 1.0 - 1e-9
        assert ec_sigma1(p) == pytest.approx(1.0, abs=1e-6)
        assert ed_sigma1(p) == pytest.approx(1.0, abs=1e-6)

    def test_quarter_frozen_values(self):
        assert ec_sigma1(0.25) == pytest.approx(EC_SIGMA1_QUARTER, abs=1e-14)
        assert ed_sigma1(0.25) == pytest.approx(ED_SIGMA1_QUARTER, abs=1e-14)
        assert ec_sigma1(0.25) > ed_sigma1(0.25)

    def test_quarter_against_oracle(self):
        mp.dps = 50
        ec = h2_oracle(float(mpf("0.5") + mpsqrt(mpf("0.25") * mpf("0.75"))))
        assert ec_sigma1(0.25) == pytest.approx(ec, abs=1e-13)
        assert ed_sigma1(0.25) == pytest.approx(1.0 - h2_oracle(0.25), abs=1e-14)

    def test_n_pair_forms(self):
        for p in (0.1, 0.25, 0.8):
            assert ec_sigma_n(p, 1) == pytest.approx(ec_sigma1(p), abs=1e-15)
            assert ed_sigma_n(p, 1) == pytest.approx(ed_sigma1(p), abs=1e-15)
            for n in (2, 4, 7):
                assert ed_sigma_n(p, n) == pytest.approx(
                    n - binary_entropy(p), abs=1e-12
                )
                assert ec_sigma_n(p, n) == pytest.approx(
                    ec_sigma1(p) + n - 1, abs=1e-12
                )

    def test_cost_dominates_distillable(self):
        for k in range(1, 1000):
            p = k / 1000.0
            if p == 0.5:
                continue
            assert ec_sigma1(p) > ed_sigma1(p)

    def test_domain(self):
        for bad in (0.0, 1.0, -0.5, 2.0):
            with pytest.raises(ValueError):
                ec_sigma1(bad)
            with pytest.raises(ValueError):
                ed_sigma1(bad)
        with pytest.raises(ValueError):
            ec_sigma_n(0.3, 0)


class TestIrreversibilityGap:
    def test_small_but_positive_near_pure(self):
        gap = irreversibility_gap(0.999)
        assert gap == pytest.approx(GAP_0999, abs=1e-13)
        assert gap > 0.0

    def test_independent_of_copies(self):
        for p in (0.1, 0.25, 0.9):
            base = irreversibility_gap(p, 1)
            for n in (2, 5, 11):
                assert irreversibility_gap(p, n) == pytest.approx(base, abs=1e-12)

    def test_half_rejected(self):
        with pytest.raises(ValueError):
            irreversibility_gap(0.5)


class TestTwoStateFamily:
    def test_values(self):
        assert ed_rho2n(1) == 0.0
        assert ed_rho2n(2) == 1.0
        assert ed_rho2n(5) == 4.0
        with pytest.raises(ValueError):
            ed_rho2n(0)

    def test_single_pair_mixture_is_separable(self):
        e = BellEnsemble({(B1,): 0.5, (B3,): 0.5})
        state = to_dense(e)
        assert dense.log_negativity(state, Cut.alice_bob(state)) <= 1e-12

    def test_distillation_cross_check_two_pairs(self):
        # Un-cloning route: one bilateral C-NOT turns the correlated
        # two-pair mixture into (unknown pair) (x) pure |B1>, yielding
        # the promised 1 ebit.
        e = BellEnsemble({(B1, B1): 0.5, (B3, B3): 0.5})
        out = bxor(e, 0, 1)
        assert all(s[1] == B1 for s in out.entries)
        assert out.entries == {(B1, B1): 0.5, (B3, B1): 0.5}
        assert ed_rho2n(2) == 1.0

    def test_log_negativity_upper_bound(self):
        for n in (1, 2, 3, 4):
            e = BellEnsemble({(B1,) * n: 0.5, (B3,) * n: 0.5})
            state = to_dense(e)
            ln = dense.log_negativity(state, Cut.alice_bob(state))
            assert ln >= ed_rho2n(n) - 1e-9


class TestRhoMFamily:
    def test_small_m_values(self):
        assert ed_rho_m(2) == 0.0
        assert ed_rho_m(3) == 2.0
        assert ed_rho_m(4) == 2.0
        with pytest.raises(ValueError):
            ed_rho_m(1)

    def test_parity_table(self):
        assert [ed_rho_m(m) for m in range(2, 9)] == [0.0, 2.0, 2.0, 4.0, 4.0, 6.0, 6.0]

    def test_matches_preparation_cost_to_64(self):
        for m in range(2, 65):
            _, ledger = prepare_rho_m(m)
            assert ledger.ebits_consumed == ed_rho_m(m)

    def test_log_negativity_upper_bound(self):
        for m in (2, 3, 4, 5):
            state = to_dense(BellEnsemble.uniform_strings(m))
            ln = dense.log_negativity(state, Cut.alice_bob(state))
            assert ln >= ed_rho_m(m) - 1e-9


class TestSigmaBoundWitness:
    @pytest.mark.parametrize("p", [0.1, 0.3, 0.7])
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_log_negativity_dominates_distillable(self, p, n):
        state = to_dense(build_sigma_n(p, n).ensemble)
        ln = dense.log_negativity(state, Cut.alice_bob(state))
        assert ln >= ed_sigma_n(p, n) - 1e-9


class TestMeasureReport:
    def test_round_trip_dict(self):
        report = MeasureReport("log-negativity", 1.0, "smolin", "A0:rest", "dense-witness")
        assert report.to_dict() == {
            "quantity": "log-negativity",
            "state": "smolin",
            "cut": "A0:rest",
            "value": 1.0,
            "provenance": "dense-witness",
        }

    def test_negative_value_rejected(self):
        with pytest.raises(ValueError):
            MeasureReport("log-negativity", -0.5, "smolin")

    def test_tiny_negative_clamped(self):
        report = MeasureReport("log-negativity", -1e-12, "smolin")
        assert report.value == 0.0

    def test_unknown_provenance_rejected(self):
        with pytest.raises(ValueError):
            MeasureReport("log-negativity", 0.5, "smolin", "alice:bob", "guess")
