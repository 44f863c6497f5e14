"""Closed-form entanglement quantities and bound witnesses.

Formulas cover the two state families built by :mod:`bellclone.protocols`:

* ``sigma_n(p)`` = p P[B1^(x)n] + (1-p) P[B2^(x)n], whose entanglement
  cost and distillable entanglement are
  E_c = H2(1/2 + sqrt(p(1-p))) + (n-1) and E_d = n - H2(p);
* the two-state clone mixture ``rho2_n`` = (P[B1^(x)n] + P[B3^(x)n])/2
  with E_d = n - 1;
* the uniform four-branch ancilla ``rho_m`` = (1/4) sum_i P[B_i^(x)m]
  with E_d = m-1 for odd m and m-2 for even m (equal to its
  preparation cost, making it reversible).

Values imported as formula constants carry provenance ``"formula"``;
log-negativity evaluations of dense states carry ``"dense-witness"``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import dense


def binary_entropy(x: float) -> float:
    """H2(x) = -x log2 x - (1-x) log2(1-x), with H2(0) = H2(1) = 0."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"binary entropy needs x in [0, 1], got {x}")
    if x in (0.0, 1.0):
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def _check_p(p: float):
    if not 0.0 < p < 1.0:
        raise ValueError(f"mixing probability must lie in (0, 1), got {p}")


def ec_sigma1(p: float) -> float:
    """Entanglement cost of sigma_1(p), H2(1/2 + sqrt(p(1-p))) ebits."""
    _check_p(p)
    return binary_entropy(min(1.0, 0.5 + math.sqrt(p * (1.0 - p))))


def ed_sigma1(p: float) -> float:
    """Distillable entanglement of sigma_1(p), 1 - H2(p) ebits."""
    _check_p(p)
    return 1.0 - binary_entropy(p)


def ec_sigma_n(p: float, n: int) -> float:
    """Entanglement cost of sigma_n(p): ec_sigma1(p) + (n - 1)."""
    _check_n(n)
    return ec_sigma1(p) + (n - 1)


def ed_sigma_n(p: float, n: int) -> float:
    """Distillable entanglement of sigma_n(p): n - H2(p)."""
    _check_n(n)
    return ed_sigma1(p) + (n - 1)


def _check_n(n: int):
    if n < 1:
        raise ValueError(f"number of pairs must be >= 1, got {n}")


def irreversibility_gap(p: float, n: int = 1) -> float:
    """ec_sigma_n - ed_sigma_n; positive for p != 1/2 and n-independent.

    Raises for p = 1/2, where the gap degenerates to 0 and witnesses
    nothing.
    """
    _check_p(p)
    _check_n(n)
    if p == 0.5:
        raise ValueError("gap vanishes at p = 1/2; not an irreversibility witness")
    return ec_sigma_n(p, n) - ed_sigma_n(p, n)


def ed_rho2n(n: int) -> float:
    """Distillable entanglement of the two-state clone mixture: n - 1."""
    _check_n(n)
    return float(n - 1)


def ed_rho_m(m: int) -> float:
    """Distillable entanglement of rho_m: m-1 for odd m, m-2 for even m."""
    if m < 2:
        raise ValueError(f"rho_m needs m >= 2, got {m}")
    return float(m - 1 if m % 2 else m - 2)


@dataclass(frozen=True)
class MeasureReport:
    """One evaluated entanglement quantity with its provenance."""

    quantity: str
    value: float
    state: str
    cut: str = "alice:bob"
    provenance: str = "formula"  # "formula" | "dense-witness"

    def __post_init__(self):
        if self.value < -dense.ATOL_EIG:
            raise ValueError(f"{self.quantity} came out negative: {self.value}")
        if self.provenance not in ("formula", "dense-witness"):
            raise ValueError(f"unknown provenance {self.provenance!r}")
        object.__setattr__(self, "value", max(0.0, float(self.value)))

    def to_dict(self) -> dict:
        return {
            "quantity": self.quantity,
            "state": self.state,
            "cut": self.cut,
            "value": self.value,
            "provenance": self.provenance,
        }


def log_negativity_report(
    state: dense.DenseState, cut: dense.Cut, state_name: str, cut_name: str
) -> MeasureReport:
    """Evaluate log-negativity across a cut and wrap it as a report."""
    value = dense.log_negativity(state, cut)
    return MeasureReport("log-negativity", value, state_name, cut_name, "dense-witness")
