"""Exact symbolic engine over Bell-label strings.

Every state handled here is a probability distribution over strings of
Bell labels (one label per shared pair).  The LOCC circuit elements used
by the protocols act as label-rewriting rules, which makes runs linear
in the ensemble size and exact for any number of pairs.  Phases are
deliberately not tracked: ensembles represent projector mixtures, and
the rewriting rules are certified against the dense oracle
(:func:`to_dense` bridges the two representations).
"""

from __future__ import annotations

import numpy as np

from . import dense
from .labels import BellLabel, BellString, LABELS, label_from_bits, string_bits

#: Probabilities below this are pruned after merging.
PRUNE_EPS = 1e-15


class BellEnsemble:
    """Probability distribution over equal-length Bell strings.

    Entries are kept canonical: merged, pruned below :data:`PRUNE_EPS`,
    and sorted lexicographically by label bits.  Instances are treated
    as immutable values; rewriting operations return new ensembles.
    """

    __slots__ = ("entries",)

    def __init__(self, entries):
        merged: dict[BellString, float] = {}
        for string, prob in dict(entries).items():
            string = tuple(string)
            if not string:
                raise ValueError("Bell strings must have at least one pair")
            if prob < 0:
                raise ValueError(f"negative probability {prob}")
            merged[string] = merged.get(string, 0.0) + float(prob)
        merged = {s: p for s, p in merged.items() if p > PRUNE_EPS}
        if not merged:
            raise ValueError("ensemble has no support")
        lengths = {len(s) for s in merged}
        if len(lengths) != 1:
            raise ValueError(f"strings of unequal length: {sorted(lengths)}")
        total = sum(merged.values())
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"probabilities sum to {total}, not 1")
        self.entries = dict(sorted(merged.items()))

    @classmethod
    def point(cls, string: BellString) -> "BellEnsemble":
        return cls({tuple(string): 1.0})

    @classmethod
    def uniform_strings(cls, n_pairs: int) -> "BellEnsemble":
        """The uniform mixture of the four constant strings of length n."""
        return cls({(label,) * n_pairs: 0.25 for label in LABELS})

    @property
    def n_pairs(self) -> int:
        return len(next(iter(self.entries)))

    def items(self) -> list[tuple[BellString, float]]:
        return list(self.entries.items())

    def probability(self, string: BellString) -> float:
        return self.entries.get(tuple(string), 0.0)

    def map_strings(self, fn) -> "BellEnsemble":
        """Rewrite every string with ``fn`` (probabilities carried over)."""
        out: dict[BellString, float] = {}
        for s, p in self.entries.items():
            t = tuple(fn(s))
            out[t] = out.get(t, 0.0) + p
        return BellEnsemble(out)

    def allclose(self, other: "BellEnsemble", tol: float = 1e-12) -> bool:
        keys = set(self.entries) | set(other.entries)
        return all(
            abs(self.entries.get(k, 0.0) - other.entries.get(k, 0.0)) <= tol
            for k in keys
        )

    def __eq__(self, other):
        return isinstance(other, BellEnsemble) and self.entries == other.entries

    def __repr__(self):
        parts = ", ".join(f"{string_bits(s)}: {p:g}" for s, p in self.entries.items())
        return f"BellEnsemble({{{parts}}})"

    def to_text(self) -> str:
        """One line per entry: ``probability a1b1 a2b2 ...`` (17 significant
        digits, lexicographic string order, LF endings)."""
        return "".join(
            f"{p:.17g} {string_bits(s)}\n" for s, p in self.entries.items()
        )

    @classmethod
    def from_text(cls, text: str) -> "BellEnsemble":
        entries = {}
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            head, *bits = line.split()
            entries[tuple(label_from_bits(b) for b in bits)] = float(head)
        return cls(entries)


def _check_pair(e: BellEnsemble, pair: int):
    if pair < 0 or pair >= e.n_pairs:
        raise ValueError(f"pair index {pair} out of range for {e.n_pairs} pairs")


def bxor(e: BellEnsemble, source: int, target: int) -> BellEnsemble:
    """Bilateral C-NOT from the source pair onto the target pair.

    Both parties apply a local C-NOT from their half of ``source`` to
    their half of ``target``.  On labels this acts per string as

        source (a_s, b_s) -> (a_s, b_s ^ b_t)
        target (a_t, b_t) -> (a_s ^ a_t, b_t)

    an involution certified gate-by-gate against the dense oracle.
    """
    _check_pair(e, source)
    _check_pair(e, target)
    if source == target:
        raise ValueError("source and target pair must differ")

    def rewrite(s: BellString) -> BellString:
        ls, lt = s[source], s[target]
        out = list(s)
        out[source] = BellLabel(ls.a, ls.b ^ lt.b)
        out[target] = BellLabel(ls.a ^ lt.a, lt.b)
        return tuple(out)

    return e.map_strings(rewrite)


def bilateral_hadamard(e: BellEnsemble, pair: int) -> BellEnsemble:
    """Hadamard on both halves of a pair: swaps the label bits (a,b) -> (b,a)."""
    _check_pair(e, pair)

    def rewrite(s: BellString) -> BellString:
        out = list(s)
        out[pair] = BellLabel(s[pair].b, s[pair].a)
        return tuple(out)

    return e.map_strings(rewrite)


def one_sided_pauli(e: BellEnsemble, pair: int, pauli_index: int, side: str) -> BellEnsemble:
    """Pauli on one party's half of a pair (projector level).

    x flips the a bit, z flips the b bit, y flips both; the action is the
    same from either side.
    """
    _check_pair(e, pair)
    if pauli_index not in (1, 2, 3):
        raise ValueError("Pauli index must be 1 (x), 2 (y) or 3 (z)")
    if side not in ("alice", "bob"):
        raise ValueError(f"unknown side {side!r}")
    da, db = {1: (1, 0), 2: (1, 1), 3: (0, 1)}[pauli_index]

    def rewrite(s: BellString) -> BellString:
        out = list(s)
        out[pair] = s[pair].flipped(da, db)
        return tuple(out)

    return e.map_strings(rewrite)


def discriminate_sets(
    e: BellEnsemble, pair: int
) -> list[tuple[int, float, BellEnsemble | None]]:
    """Locally distinguish {B1,B2} (a=0) from {B3,B4} (a=1) on a pair.

    Both parties measure their half in the computational basis and
    compare parities over the classical channel.  Returns the branches
    with positive probability as (a bit, probability, conditional); the
    measured pair is removed from the conditional and its phase bit is
    discarded (the measurement dephases it).  The conditional is None
    when no pairs remain.
    """
    _check_pair(e, pair)
    buckets: dict[int, dict[BellString, float]] = {0: {}, 1: {}}
    probs = {0: 0.0, 1: 0.0}
    for s, p in e.entries.items():
        bit = s[pair].a
        rest = s[:pair] + s[pair + 1 :]
        probs[bit] += p
        buckets[bit][rest] = buckets[bit].get(rest, 0.0) + p
    out: list[tuple[int, float, BellEnsemble | None]] = []
    for bit in (0, 1):
        if probs[bit] <= PRUNE_EPS:
            continue
        if e.n_pairs == 1:
            out.append((bit, probs[bit], None))
        else:
            cond = {s: p / probs[bit] for s, p in buckets[bit].items()}
            out.append((bit, probs[bit], BellEnsemble(cond)))
    return out


def mix(ensembles: list[BellEnsemble], weights: list[float]) -> BellEnsemble:
    """Convex combination of ensembles over the same number of pairs."""
    if len(ensembles) != len(weights):
        raise ValueError("one weight per ensemble required")
    if abs(sum(weights) - 1.0) > 1e-12:
        raise ValueError("weights must sum to 1")
    n = ensembles[0].n_pairs
    if any(e.n_pairs != n for e in ensembles):
        raise ValueError("ensembles have different string lengths")
    out: dict[BellString, float] = {}
    for e, w in zip(ensembles, weights):
        if w <= 0:
            continue
        for s, p in e.entries.items():
            out[s] = out.get(s, 0.0) + w * p
    return BellEnsemble(out)


def to_dense(e: BellEnsemble, role: str = "source") -> dense.DenseState:
    """Render an ensemble as a dense mixture of Bell-product branches.

    Qubits are laid out pair by pair, Alice before Bob within each pair;
    the register is capped at 14 qubits.
    """
    n_qubits = 2 * e.n_pairs
    if n_qubits > dense.MAX_REGISTER_QUBITS:
        raise ValueError(f"{e.n_pairs} pairs need {n_qubits} qubits; register too large")
    labels = dense.pair_register(e.n_pairs, role)
    branches = []
    for s, p in e.entries.items():
        vec = np.ones(1, dtype=complex)
        for label in s:
            vec = np.kron(vec, dense.bell_vector(label))
        branches.append(dense.PureBranch(vec, p))
    return dense.DenseState(tuple(branches), labels)


def dense_rewrite_op(state: dense.DenseState, op: tuple) -> dense.DenseState:
    """Apply the dense circuit matching a symbolic rewrite step.

    Steps are ("bxor", source, target), ("bilateral_hadamard", pair) or
    ("one_sided_pauli", pair, index, side); pair k occupies qubits
    (2k, 2k+1).  This is the oracle side of the symbolic/dense
    equivalence checks.
    """
    name = op[0]
    if name == "bxor":
        _, s, t = op
        out = dense.apply_unitary(state, dense.CNOT, (2 * s, 2 * t))
        return dense.apply_unitary(out, dense.CNOT, (2 * s + 1, 2 * t + 1))
    if name == "bilateral_hadamard":
        _, k = op
        out = dense.apply_unitary(state, dense.HADAMARD, (2 * k,))
        return dense.apply_unitary(out, dense.HADAMARD, (2 * k + 1,))
    if name == "one_sided_pauli":
        _, k, idx, side = op
        qubit = 2 * k if side == "alice" else 2 * k + 1
        return dense.apply_unitary(state, dense.pauli(idx), (qubit,))
    raise ValueError(f"unknown rewrite step {name!r}")


def apply_rewrite_op(e: BellEnsemble, op: tuple) -> BellEnsemble:
    """Apply a symbolic rewrite step given in the tuple form above."""
    name = op[0]
    if name == "bxor":
        return bxor(e, op[1], op[2])
    if name == "bilateral_hadamard":
        return bilateral_hadamard(e, op[1])
    if name == "one_sided_pauli":
        return one_sided_pauli(e, op[1], op[2], op[3])
    raise ValueError(f"unknown rewrite step {name!r}")
