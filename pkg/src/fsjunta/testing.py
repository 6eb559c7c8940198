"""The spectral-sampling junta tester and two transcript distinguishers.

``junta_test`` is the non-adaptive tester: a fixed number of subset draws,
then accept iff at most k distinct variables ever appeared. The remaining
functions probe how hard the instance families of :mod:`fsjunta.boolfn`
are to tell apart from subset transcripts alone: a union-size rule for the
two random-function scenarios, and a collision-parity rule for the
accept/reject addressing families.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .boolfn import JuntaSpec, TruthTable, make_junta, random_table, vars_from_mask
from .oracles import FsOracle, QueryCounter, TranscriptSource

ACCEPT = "accept"
REJECT = "reject"
SCENARIO_I = "I"
SCENARIO_II = "II"


@dataclass(frozen=True)
class TesterVerdict:
    decision: str
    queries_used: int
    exposed: frozenset[int]


def _union_mask(masks) -> int:
    if isinstance(masks, np.ndarray):
        if masks.size == 0:
            return 0
        return int(np.bitwise_or.reduce(masks))
    return reduce(lambda a, b: a | int(b), masks, 0)


def junta_test(fs: FsOracle, k: int, eps: float) -> TesterVerdict:
    """Non-adaptive junta tester: ceil(10(k+1)/eps) draws, accept iff the
    union of returned subsets has at most k variables.

    A function depending on at most k variables is always accepted, since
    no subset with a nonzero weight can leave its relevant set.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    if not 0 < eps <= 1:
        raise ValueError("eps must be in (0, 1]")
    m = math.ceil(10 * (k + 1) / eps)
    exposed = frozenset(vars_from_mask(_union_mask(fs.draw_batch(m))))
    decision = ACCEPT if len(exposed) <= k else REJECT
    return TesterVerdict(decision, m, exposed)


@dataclass(frozen=True)
class ScenarioFunction:
    """A function for the two-scenario distinguishing game.

    ``table`` holds the behavior on the first k+1 variables; the ambient
    function on ``n`` variables ignores everything else, so its subset
    distribution equals the table's. Scenario I is a uniform random table;
    scenario II additionally ignores the uniformly chosen variable
    ``dropped``.
    """

    which: str
    table: TruthTable
    n: int
    dropped: int | None = None


def sample_scenario(which: str, k: int, n: int,
                    rng: np.random.Generator) -> ScenarioFunction:
    if n < k + 1:
        raise ValueError("need n >= k + 1")
    if which == SCENARIO_I:
        return ScenarioFunction(which, random_table(k + 1, rng), n)
    if which == SCENARIO_II:
        dropped = int(rng.integers(0, k + 1))
        kept = tuple(i for i in range(k + 1) if i != dropped)
        inner = make_junta(JuntaSpec(k + 1, kept, random_table(k, rng)))
        return ScenarioFunction(which, inner, n, dropped)
    raise ValueError(f"unknown scenario {which!r}")


def scenario_oracle(fn: ScenarioFunction, rng: np.random.Generator,
                    counter: QueryCounter | None = None) -> FsOracle:
    """Subset sampler for the ambient function of a scenario draw."""
    relevant = tuple(range(fn.table.n))
    return FsOracle.from_junta(JuntaSpec(fn.n, relevant, fn.table), rng,
                               counter=counter)


def scenario_distinguisher(fs: FsOracle, k: int, c: float = 8.0) -> str:
    """Guess the scenario from ceil(c log2(k+2)) draws.

    Guesses I iff at least k+1 distinct variables appear. Under scenario II
    at most k variables can ever appear, so II is never misclassified;
    under scenario I every variable carries constant spectral weight with
    overwhelming probability, so a logarithmic number of draws exposes all
    k+1. The constant c is an empirically calibrated default.
    """
    if c < 1:
        raise ValueError("need c >= 1")
    m = math.ceil(c * math.log2(k + 2))
    exposed = vars_from_mask(_union_mask(fs.draw_batch(m)))
    return SCENARIO_I if len(exposed) >= k + 1 else SCENARIO_II


def collision_features(slots: np.ndarray, x_masks: np.ndarray) -> tuple[int, bool]:
    """Summarize a transcript as (repeat count, inconsistent-parity flag).

    The repeat count is draws minus distinct wired slots. The flag is set
    iff some slot appears with address masks of both size parities, which
    is impossible under an accept instance.
    """
    slots = np.asarray(slots, dtype=np.int64)
    parity = np.bitwise_count(np.asarray(x_masks).astype(np.uint64)).astype(np.int64) & 1
    distinct = np.unique(slots).size
    collisions = int(slots.size - distinct)
    pairs = np.unique(slots * 2 + parity).size
    return collisions, pairs > distinct


def collision_distinguisher(source: TranscriptSource, num_draws: int,
                            rng: np.random.Generator) -> str:
    """Guess accept/reject from one transcript of ``num_draws`` draws.

    Rejects iff some wired slot repeats with both address parities; in
    every other case (consistent collisions, or none at all) it accepts.
    Under an accept source the reject condition has probability exactly
    zero, so all the distinguishing power rides on reject-side collisions.
    """
    slots, x_masks = source(rng, num_draws)
    _, inconsistent = collision_features(slots, x_masks)
    return REJECT if inconsistent else ACCEPT


def transcript_tv_estimate(source_a: TranscriptSource,
                           source_b: TranscriptSource, num_draws: int,
                           trials: int, rng: np.random.Generator) -> float:
    """Lower-bound the total-variation distance between the two sources'
    length-``num_draws`` transcript distributions.

    Reduces each transcript to its collision features and returns the
    total-variation distance between the two empirical feature histograms.
    Any statistic of the transcript only loses distinguishing power, so
    this estimates a lower bound on the transcript-level distance rather
    than the distance itself.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    hist_a: Counter = Counter()
    hist_b: Counter = Counter()
    for _ in range(trials):
        hist_a[collision_features(*source_a(rng, num_draws))] += 1
        hist_b[collision_features(*source_b(rng, num_draws))] += 1
    keys = hist_a.keys() | hist_b.keys()
    return 0.5 * sum(abs(hist_a[z] - hist_b[z]) for z in keys) / trials
