"""Exact Boolean functions on {-1,+1}^n stored as dense truth tables.

Conventions used throughout the package:

* ``-1`` means True and ``+1`` means False.
* Variables are 0-indexed.
* A point of {-1,+1}^n is encoded as a table index whose bit ``i`` equals
  ``(1 - x_i) / 2``, i.e. bit set means variable ``i`` is -1.

Tables are capped at ``N_MAX`` variables so every table and spectrum stays
dense and exact; larger ambient dimensions are served by the analytic
samplers in :mod:`fsjunta.oracles`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from . import _kernels

N_MAX = 24

#: Default cap on table reads for exhaustive subset scans.
DEFAULT_SCAN_BUDGET = 10**9


class BudgetExceededError(RuntimeError):
    """An exhaustive scan would exceed its configured work budget."""


def mask_from_vars(variables: Iterable[int]) -> int:
    mask = 0
    for v in variables:
        mask |= 1 << int(v)
    return mask


def vars_from_mask(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    m = int(mask)
    while m:
        if m & 1:
            out.append(i)
        m >>= 1
        i += 1
    return tuple(out)


def _check_n(n: int) -> None:
    if not 1 <= n <= N_MAX:
        raise ValueError(f"variable count must be in 1..{N_MAX}, got {n}")


def _indices(n: int) -> np.ndarray:
    return np.arange(1 << n, dtype=np.int64)


def project_assignments(indices: np.ndarray, positions: Sequence[int]) -> np.ndarray:
    """Project table indices onto the given variable positions.

    Bit ``t`` of the result is the input's bit at ``positions[t]``, so the
    projected value indexes a table over just those variables.
    """
    proj = np.zeros(np.shape(indices), dtype=np.int64)
    for t, p in enumerate(positions):
        proj |= ((indices >> int(p)) & 1) << t
    return proj


def project_index(x: int, positions: Sequence[int]) -> int:
    proj = 0
    for t, p in enumerate(positions):
        proj |= ((x >> p) & 1) << t
    return proj


@dataclass(frozen=True, eq=False)
class TruthTable:
    """A {-1,+1}-valued function on {-1,+1}^n as a dense 2^n table."""

    n: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        _check_n(self.n)
        vals = np.asarray(self.values)
        if vals.shape != (1 << self.n,):
            raise ValueError(
                f"table for n={self.n} needs {1 << self.n} entries, got shape {vals.shape}")
        if not np.all(np.abs(vals) == 1):
            raise ValueError("table entries must all be -1 or +1")
        vals = vals.astype(np.int8, copy=True)
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def eval(self, x: int) -> int:
        if not 0 <= x < (1 << self.n):
            raise IndexError(f"input index {x} out of range for n={self.n}")
        return int(self.values[x])

    def to_text(self) -> str:
        body = "".join("+" if v > 0 else "-" for v in self.values)
        return f"n={self.n}\n{body}\n"

    @classmethod
    def from_text(cls, text: str) -> "TruthTable":
        lines = text.strip().splitlines()
        if len(lines) != 2 or not lines[0].startswith("n="):
            raise ValueError("expected 'n=<int>' then one row of +/- characters")
        n = int(lines[0][2:])
        row = lines[1].strip()
        if set(row) - {"+", "-"}:
            raise ValueError("table row may only contain '+' and '-'")
        vals = np.fromiter((1 if ch == "+" else -1 for ch in row),
                           dtype=np.int8, count=len(row))
        return cls(n, vals)


def make_constant(n: int, sign: int = 1) -> TruthTable:
    if sign not in (-1, 1):
        raise ValueError("sign must be -1 or +1")
    return TruthTable(n, np.full(1 << n, sign, dtype=np.int8))


def make_parity(n: int, subset: int) -> TruthTable:
    """Product of the variables in ``subset``; the empty product is +1."""
    _check_n(n)
    if not 0 <= subset < (1 << n):
        raise ValueError("subset mask out of range")
    parity = np.bitwise_count(np.uint64(subset) & _indices(n).astype(np.uint64))
    vals = (1 - 2 * (parity.astype(np.int8) & 1)).astype(np.int8)
    return TruthTable(n, vals)


@dataclass(frozen=True)
class JuntaSpec:
    """A function of ``n`` variables that reads only ``relevant`` ones.

    ``inner`` gives the behavior on those variables; position ``t`` of the
    inner table corresponds to ``relevant[t]``.
    """

    n: int
    relevant: tuple[int, ...]
    inner: TruthTable

    def __post_init__(self):
        rel = tuple(int(v) for v in self.relevant)
        object.__setattr__(self, "relevant", rel)
        if self.n < 1:
            raise ValueError("ambient variable count must be positive")
        if any(b <= a for a, b in zip(rel, rel[1:])):
            raise ValueError("relevant variables must be strictly increasing")
        if rel and not 0 <= rel[-1] < self.n:
            raise ValueError("relevant variable index out of range")
        if len(rel) != self.inner.n:
            raise ValueError("inner table arity must match the relevant set size")

    @property
    def k(self) -> int:
        return len(self.relevant)


def make_junta(spec: JuntaSpec) -> TruthTable:
    _check_n(spec.n)
    proj = project_assignments(_indices(spec.n), spec.relevant)
    return TruthTable(spec.n, spec.inner.values[proj])


def random_table(n: int, rng: np.random.Generator) -> TruthTable:
    _check_n(n)
    vals = (2 * rng.integers(0, 2, size=1 << n) - 1).astype(np.int8)
    return TruthTable(n, vals)


def random_junta_spec(n: int, k: int, rng: np.random.Generator) -> JuntaSpec:
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    relevant = tuple(sorted(int(v) for v in rng.choice(n, size=k, replace=False)))
    return JuntaSpec(n, relevant, random_table(k, rng))


def _addresses(idx: np.ndarray, r: int) -> np.ndarray:
    # Address bit order: variable 0 is the most significant address bit.
    addr = np.zeros(idx.shape, dtype=np.int64)
    for j in range(r):
        addr |= ((idx >> j) & 1) << (r - 1 - j)
    return addr


def make_addressing(r: int) -> TruthTable:
    """Selector on r + 2^r variables: the first r variables form an address
    and the output is the addressed variable among the remaining 2^r.

    All address variables equal to -1 selects the last addressee; all equal
    to +1 selects the first.
    """
    if r < 1:
        raise ValueError("need r >= 1")
    big_r = 1 << r
    n = r + big_r
    if n > N_MAX:
        raise ValueError(f"addressing on r={r} needs {n} > {N_MAX} variables")
    idx = _indices(n)
    addr = _addresses(idx, r)
    vals = (1 - 2 * ((idx >> (r + addr)) & 1)).astype(np.int8)
    return TruthTable(n, vals)


def _check_instance_common(r: int, n: int, tau: tuple[int, ...], leaves: int) -> None:
    if r < 1:
        raise ValueError("need r >= 1")
    if len(tau) != leaves:
        raise ValueError(f"tau must list {leaves} variable slots")
    if len(set(tau)) != len(tau):
        raise ValueError("tau entries must be distinct")
    if tau and not all(0 <= t < n - r for t in tau):
        raise ValueError("tau entries must index the non-address variables")


@dataclass(frozen=True)
class RejectInstance:
    """Addressing over r address variables with all 2^r leaves wired to
    distinct non-address variables; far from every (r + 2^{r-1})-junta."""

    r: int
    n: int
    tau: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "tau", tuple(int(t) for t in self.tau))
        _check_instance_common(self.r, self.n, self.tau, 1 << self.r)


@dataclass(frozen=True)
class AcceptInstance:
    """Addressing variant wiring leaf pairs (i, 2^r-1-i) to the same
    variable up to a per-pair sign, so only r + 2^{r-1} variables matter."""

    r: int
    n: int
    tau: tuple[int, ...]
    s: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "tau", tuple(int(t) for t in self.tau))
        object.__setattr__(self, "s", tuple(int(v) for v in self.s))
        _check_instance_common(self.r, self.n, self.tau, 1 << (self.r - 1))
        if len(self.s) != 1 << (self.r - 1):
            raise ValueError("need one sign per wired leaf pair")
        if any(v not in (-1, 1) for v in self.s):
            raise ValueError("signs must be -1 or +1")


def sample_reject_instance(r: int, n: int, rng: np.random.Generator) -> RejectInstance:
    big_r = 1 << r
    if n - r < big_r:
        raise ValueError(f"need n >= r + 2^r = {r + big_r}")
    tau = tuple(int(t) for t in rng.choice(n - r, size=big_r, replace=False))
    return RejectInstance(r, n, tau)


def sample_accept_instance(r: int, n: int, rng: np.random.Generator) -> AcceptInstance:
    half = 1 << (r - 1)
    if n - r < half:
        raise ValueError(f"need n >= r + 2^(r-1) = {r + half}")
    tau = tuple(int(t) for t in rng.choice(n - r, size=half, replace=False))
    s = tuple(int(v) for v in 2 * rng.integers(0, 2, size=half) - 1)
    return AcceptInstance(r, n, tau, s)


def realize_reject(inst: RejectInstance) -> TruthTable:
    """Full truth table of a reject instance (variable r+j carries slot j)."""
    _check_n(inst.n)
    idx = _indices(inst.n)
    addr = _addresses(idx, inst.r)
    shift = inst.r + np.asarray(inst.tau, dtype=np.int64)[addr]
    vals = (1 - 2 * ((idx >> shift) & 1)).astype(np.int8)
    return TruthTable(inst.n, vals)


def realize_accept(inst: AcceptInstance) -> TruthTable:
    """Full truth table of an accept instance; leaf 2^r-1-i carries
    ``s[i]`` times the variable wired to leaf i."""
    _check_n(inst.n)
    r = inst.r
    half = 1 << (r - 1)
    idx = _indices(inst.n)
    addr = _addresses(idx, r)
    pair = np.where(addr < half, addr, (1 << r) - 1 - addr)
    sign = np.where(addr < half, 1, np.asarray(inst.s, dtype=np.int64)[pair])
    shift = r + np.asarray(inst.tau, dtype=np.int64)[pair]
    vals = (sign * (1 - 2 * ((idx >> shift) & 1))).astype(np.int8)
    return TruthTable(inst.n, vals)


def distance(f: TruthTable, g: TruthTable) -> Fraction:
    """Fraction of inputs where the two tables disagree, exact."""
    if f.n != g.n:
        raise ValueError("tables must share the same variable count")
    return Fraction(int(np.count_nonzero(f.values != g.values)), 1 << f.n)


def influence_direct(f: TruthTable, i: int) -> Fraction:
    """Probability that flipping variable ``i`` changes the output, exact."""
    if not 0 <= i < f.n:
        raise IndexError(f"variable {i} out of range for n={f.n}")
    flipped = f.values[_indices(f.n) ^ (1 << i)]
    return Fraction(int(np.count_nonzero(f.values != flipped)), 1 << f.n)


def best_junta_on(f: TruthTable, subset: int) -> TruthTable:
    """Closest function to ``f`` among those depending only on ``subset``:
    the per-assignment majority vote, ties broken toward +1."""
    if not 0 <= subset < (1 << f.n):
        raise ValueError("subset mask out of range")
    positions = vars_from_mask(subset)
    t = len(positions)
    proj = project_assignments(_indices(f.n), positions)
    cells = 1 << t
    neg = np.bincount(proj[f.values < 0], minlength=cells)
    fiber = (1 << f.n) >> t
    majority = np.where(neg * 2 > fiber, -1, 1).astype(np.int8)
    return TruthTable(f.n, majority[proj])


def distance_to_best_junta_on(f: TruthTable, subset: int) -> Fraction:
    if not 0 <= subset < (1 << f.n):
        raise ValueError("subset mask out of range")
    positions = np.asarray(vars_from_mask(subset), dtype=np.int64)
    err = int(_kernels.junta_errors(f.values, positions))
    return Fraction(err, 1 << f.n)


def distance_to_k_junta(f: TruthTable, k: int,
                        budget: int = DEFAULT_SCAN_BUDGET) -> Fraction:
    """Distance from ``f`` to the closest function depending on at most
    ``k`` variables, by scanning every size-k subset."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if k >= f.n:
        return Fraction(0)
    size = 1 << f.n
    work = math.comb(f.n, k) * size
    if work > budget:
        raise BudgetExceededError(
            f"scan needs {work} table reads, budget is {budget}")
    best = size
    for combo in combinations(range(f.n), k):
        err = int(_kernels.junta_errors(f.values,
                                        np.asarray(combo, dtype=np.int64)))
        if err < best:
            best = err
            if best == 0:
                break
    return Fraction(best, size)
