"""Simulated information sources with exact distributions and call counting.

Three oracle kinds are provided for a target function f:

* spectral sampling (``FsOracle``): each call returns a variable subset S
  with probability exactly ``coeffs[S]^2 / 4^n``;
* uniform labeled examples (``ExOracle``): pairs (x, f(x)) with x uniform;
* black-box queries (``MqOracle``): f(x) for a chosen x.

Because the squared coefficients of a table sum to exactly 4^n, a power of
two, subset sampling reduces to one unbiased uniform integer draw plus a
binary search over integer prefix sums; no draw is ever approximate.

For the addressing-based instance families the subset distribution is known
in closed form, so ``for_reject``/``for_accept`` sample it directly without
a truth table. That is what makes experiments at large ambient dimension
possible. Subsets are plain Python int bitmasks throughout, which have no
machine-word limit.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .boolfn import (
    AcceptInstance,
    JuntaSpec,
    RejectInstance,
    TruthTable,
    sample_accept_instance,
    sample_reject_instance,
)
from .fourier import Spectrum, wht

# Batched draws come back as an int64 array when every mask fits; beyond
# that they fall back to a list of Python ints.
_MASK64_BITS = 62


def derive_seed(master: int, label: str, index: int = 0) -> int:
    """Stable 64-bit stream seed from (master seed, label, index).

    Uses BLAKE2b over a fixed byte encoding, so the derivation is identical
    across platforms, processes and thread schedules.
    """
    h = hashlib.blake2b(digest_size=8)
    h.update(int(master).to_bytes(8, "little", signed=True))
    h.update(label.encode("utf-8"))
    h.update(b"\x00")
    h.update(int(index).to_bytes(8, "little", signed=True))
    return int.from_bytes(h.digest(), "little")


def make_rng(master: int, label: str, index: int = 0) -> np.random.Generator:
    return np.random.default_rng(derive_seed(master, label, index))


@dataclass
class QueryCounter:
    """Monotone per-oracle-kind call counts; share one instance across the
    oracles of a run to get end-to-end accounting."""

    fs_calls: int = 0
    ex_calls: int = 0
    mq_calls: int = 0


class LabeledExample(NamedTuple):
    x: int
    y: int


class FsOracleError(ValueError):
    """The oracle would not sample a probability distribution."""


class FsFailure(RuntimeError):
    """A draw flagged as failed by the optional failure knob."""


class ExOracle:
    """Uniform labeled examples (x, f(x))."""

    def __init__(self, table: TruthTable, rng: np.random.Generator,
                 counter: QueryCounter | None = None):
        self.table = table
        self._rng = rng
        self.counter = counter if counter is not None else QueryCounter()

    def draw(self) -> LabeledExample:
        x = int(self._rng.integers(0, 1 << self.table.n))
        self.counter.ex_calls += 1
        return LabeledExample(x, int(self.table.values[x]))

    def draw_batch(self, m: int) -> tuple[np.ndarray, np.ndarray]:
        xs = self._rng.integers(0, 1 << self.table.n, size=m, dtype=np.int64)
        self.counter.ex_calls += m
        return xs, self.table.values[xs]

    @property
    def calls(self) -> int:
        return self.counter.ex_calls


class MqOracle:
    """Black-box queries: the label of any chosen input."""

    def __init__(self, table: TruthTable, counter: QueryCounter | None = None):
        self.table = table
        self.counter = counter if counter is not None else QueryCounter()

    def query(self, x: int) -> int:
        if not 0 <= x < (1 << self.table.n):
            raise IndexError(f"input {x} out of range for n={self.table.n}")
        self.counter.mq_calls += 1
        return int(self.table.values[x])

    @property
    def calls(self) -> int:
        return self.counter.mq_calls


def reject_transcript(inst: RejectInstance, rng: np.random.Generator,
                      m: int) -> tuple[np.ndarray, np.ndarray]:
    """m subset draws for a reject instance as (wired slot, address mask).

    The wired slot j means non-address variable j (full variable index
    r + j); the address mask is a subset of the r address variables. Every
    (leaf, address mask) pair is equally likely.
    """
    big_r = 1 << inst.r
    leaf = rng.integers(0, big_r, size=m)
    x = rng.integers(0, big_r, size=m, dtype=np.int64)
    tau = np.asarray(inst.tau, dtype=np.int64)
    return tau[leaf], x


def accept_transcript(inst: AcceptInstance, rng: np.random.Generator,
                      m: int) -> tuple[np.ndarray, np.ndarray]:
    """m subset draws for an accept instance as (wired slot, address mask).

    For leaf pair i the address mask is uniform among subsets whose size
    parity is even when s[i] = +1 and odd when s[i] = -1; a slot therefore
    only ever appears with one parity.
    """
    r = inst.r
    half = 1 << (r - 1)
    leaf = rng.integers(0, half, size=m)
    base = rng.integers(0, half, size=m, dtype=np.int64)
    want_odd = (np.asarray(inst.s, dtype=np.int64)[leaf] < 0).astype(np.int64)
    base_parity = (np.bitwise_count(base.astype(np.uint64)).astype(np.int64)) & 1
    top = base_parity ^ want_odd
    x = base | (top << (r - 1))
    tau = np.asarray(inst.tau, dtype=np.int64)
    return tau[leaf], x


def masks_from_transcript(slots: np.ndarray, x_masks: np.ndarray, r: int,
                          n: int) -> np.ndarray | list[int]:
    """Assemble full subset masks: address bits plus the wired variable."""
    if n <= _MASK64_BITS:
        return x_masks | np.left_shift(np.int64(1), r + slots)
    return [int(x) | (1 << (r + int(j))) for j, x in zip(slots, x_masks)]


def fs_draw_reject_analytic(inst: RejectInstance,
                            rng: np.random.Generator) -> int:
    """One subset draw for a reject instance, valid for any ambient n."""
    slots, xs = reject_transcript(inst, rng, 1)
    return int(xs[0]) | (1 << (inst.r + int(slots[0])))


def fs_draw_accept_analytic(inst: AcceptInstance,
                            rng: np.random.Generator) -> int:
    """One subset draw for an accept instance, valid for any ambient n."""
    slots, xs = accept_transcript(inst, rng, 1)
    return int(xs[0]) | (1 << (inst.r + int(slots[0])))


TranscriptSource = Callable[[np.random.Generator, int],
                            tuple[np.ndarray, np.ndarray]]


def transcript_source(inst: RejectInstance | AcceptInstance) -> TranscriptSource:
    """Transcript sampler bound to one fixed instance."""
    if isinstance(inst, RejectInstance):
        return lambda rng, m: reject_transcript(inst, rng, m)
    if isinstance(inst, AcceptInstance):
        return lambda rng, m: accept_transcript(inst, rng, m)
    raise TypeError(f"not an instance family member: {inst!r}")


def fresh_reject_source(r: int, n: int) -> TranscriptSource:
    """Transcript sampler that draws a fresh reject instance per call."""

    def draw(rng: np.random.Generator, m: int):
        return reject_transcript(sample_reject_instance(r, n, rng), rng, m)

    return draw


def fresh_accept_source(r: int, n: int) -> TranscriptSource:
    """Transcript sampler that draws a fresh accept instance per call."""

    def draw(rng: np.random.Generator, m: int):
        return accept_transcript(sample_accept_instance(r, n, rng), rng, m)

    return draw


def format_transcript(masks) -> str:
    """Transcript log: one ``fs<TAB><sorted variable list>`` line per draw."""
    lines = []
    for mask in masks:
        mask = int(mask)
        variables = []
        i = 0
        while mask:
            if mask & 1:
                variables.append(str(i))
            mask >>= 1
            i += 1
        lines.append("fs\t" + " ".join(variables) + "\n")
    return "".join(lines)


class FsOracle:
    """Subset sampler following the squared spectral weights of a target.

    Construct via the classmethods; every variant draws subsets with their
    exact probabilities and bumps ``counter.fs_calls`` once per draw. With
    ``failure_prob`` set, each call independently raises :class:`FsFailure`
    with that probability instead of answering (the call still counts).
    """

    def __init__(self, n: int, rng: np.random.Generator,
                 counter: QueryCounter | None, failure_prob: float,
                 sample_batch: Callable[[int], "np.ndarray | list[int]"]):
        if not 0.0 <= failure_prob <= 1.0:
            raise ValueError("failure probability must be in [0, 1]")
        self.n = n
        self._rng = rng
        self.counter = counter if counter is not None else QueryCounter()
        self.failure_prob = failure_prob
        self._sample_batch = sample_batch

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_spectrum(cls, sp: Spectrum, rng: np.random.Generator,
                      counter: QueryCounter | None = None,
                      failure_prob: float = 0.0) -> "FsOracle":
        weights = sp.coeffs.astype(np.int64) ** 2
        nonzero = np.flatnonzero(weights)
        return cls._from_weights(sp.n, nonzero.astype(np.int64),
                                 weights[nonzero], 1 << (2 * sp.n),
                                 rng, counter, failure_prob)

    @classmethod
    def from_table(cls, table: TruthTable, rng: np.random.Generator,
                   counter: QueryCounter | None = None,
                   failure_prob: float = 0.0) -> "FsOracle":
        return cls.from_spectrum(wht(table), rng, counter, failure_prob)

    @classmethod
    def from_junta(cls, spec: JuntaSpec, rng: np.random.Generator,
                   counter: QueryCounter | None = None,
                   failure_prob: float = 0.0) -> "FsOracle":
        """Sampler for a junta over any ambient n, via its inner spectrum.

        The lifted function's spectrum is the inner one with each inner
        position t moved to variable ``relevant[t]``, so sampling the inner
        subsets and remapping them is exact.
        """
        sp = wht(spec.inner)
        weights = sp.coeffs.astype(np.int64) ** 2
        inner_masks = np.flatnonzero(weights).astype(np.int64)
        if not spec.relevant or spec.relevant[-1] <= _MASK64_BITS:
            lifted = np.zeros(inner_masks.shape, dtype=np.int64)
            for t, p in enumerate(spec.relevant):
                lifted |= ((inner_masks >> t) & 1) << p
        else:
            lifted = [
                sum(((int(mask) >> t) & 1) << p
                    for t, p in enumerate(spec.relevant))
                for mask in inner_masks
            ]
        return cls._from_weights(spec.n, lifted, weights[inner_masks],
                                 1 << (2 * spec.inner.n), rng, counter,
                                 failure_prob)

    @classmethod
    def for_parity(cls, n: int, subset: int, rng: np.random.Generator,
                   counter: QueryCounter | None = None,
                   failure_prob: float = 0.0) -> "FsOracle":
        """Point mass: a parity's sampler always answers its own subset.
        ``subset=0`` covers constant targets."""
        if subset < 0 or subset >= (1 << n):
            raise FsOracleError("parity subset out of range")

        if n <= _MASK64_BITS:
            def sample_batch(m: int):
                return np.full(m, subset, dtype=np.int64)
        else:
            def sample_batch(m: int):
                return [subset] * m

        return cls(n, rng, counter, failure_prob, sample_batch)

    @classmethod
    def for_reject(cls, inst: RejectInstance, rng: np.random.Generator,
                   counter: QueryCounter | None = None,
                   failure_prob: float = 0.0) -> "FsOracle":
        def sample_batch(m: int):
            slots, xs = reject_transcript(inst, rng, m)
            return masks_from_transcript(slots, xs, inst.r, inst.n)

        return cls(inst.n, rng, counter, failure_prob, sample_batch)

    @classmethod
    def for_accept(cls, inst: AcceptInstance, rng: np.random.Generator,
                   counter: QueryCounter | None = None,
                   failure_prob: float = 0.0) -> "FsOracle":
        def sample_batch(m: int):
            slots, xs = accept_transcript(inst, rng, m)
            return masks_from_transcript(slots, xs, inst.r, inst.n)

        return cls(inst.n, rng, counter, failure_prob, sample_batch)

    @classmethod
    def _from_weights(cls, n: int, masks, weights: np.ndarray, total: int,
                      rng: np.random.Generator, counter: QueryCounter | None,
                      failure_prob: float) -> "FsOracle":
        if weights.size == 0 or np.any(weights <= 0):
            raise FsOracleError("weights must be positive")
        cum = np.cumsum(weights)
        if int(cum[-1]) != total:
            raise FsOracleError(
                f"squared weights sum to {int(cum[-1])}, expected {total}; "
                "not a valid sampling distribution")

        is_array = isinstance(masks, np.ndarray)

        def sample_batch(m: int):
            u = rng.integers(0, total, size=m, dtype=np.int64)
            picks = np.searchsorted(cum, u, side="right")
            if is_array:
                return masks[picks]
            return [masks[int(p)] for p in picks]

        return cls(n, rng, counter, failure_prob, sample_batch)

    # -- drawing -----------------------------------------------------------

    def draw(self) -> int:
        self.counter.fs_calls += 1
        if self.failure_prob and self._rng.random() < self.failure_prob:
            raise FsFailure("spectral sampling draw failed")
        got = self._sample_batch(1)
        return int(got[0])

    def draw_batch(self, m: int) -> np.ndarray | list[int]:
        if m < 0:
            raise ValueError("batch size must be non-negative")
        if self.failure_prob:
            out = []
            for _ in range(m):
                out.append(self.draw())
            return out
        self.counter.fs_calls += m
        return self._sample_batch(m)

    @property
    def calls(self) -> int:
        return self.counter.fs_calls
