"""Two-stage junta learner: spectral draws find the influential variables,
cheap uniform examples then fill in a table over them.

Stage 1 unions the subsets returned by ceil((10k/eps) ln(10k)) spectral
draws. With the influence threshold theta = eps/(10k) this makes
(1-theta)^N <= 1/(10k), so by a union bound every variable of influence at
least theta is found with probability at least 9/10; and every variable
returned is genuinely relevant, because subsets with nonzero weight only
contain relevant variables.

Stage 2 draws uniform labeled examples and records, for each assignment to
the found variables, the label of the first example projecting onto it. It
stops once at least a 1 - eps/3 fraction of assignments have been seen, or
at the example cap. Assignments never seen evaluate to -1 (True).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .boolfn import TruthTable, project_assignments, project_index
from .oracles import ExOracle, FsOracle

#: Entry value marking a hypothesis cell that no example ever reached.
UNSEEN = 0

SUCCESS = "success"
STAGE_ONE_OVERFLOW = "stage1-overflow"
STAGE_TWO_TIMEOUT = "stage2-timeout"


@dataclass(frozen=True)
class Hypothesis:
    """A function determined by a variable list and a partial table.

    ``entries[a]`` is the recorded label for assignment ``a`` to ``vars``
    (bit t of ``a`` is the assignment bit of ``vars[t]``), or ``UNSEEN``.
    Unseen cells evaluate to -1 (True).
    """

    vars: tuple[int, ...]
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(int(v) for v in self.vars))
        if any(b <= a for a, b in zip(self.vars, self.vars[1:])):
            raise ValueError("variables must be strictly increasing")
        arr = np.asarray(self.entries).astype(np.int8, copy=True)
        if arr.shape != (1 << len(self.vars),):
            raise ValueError("entry table must have one cell per assignment")
        if not np.all(np.isin(arr, (-1, UNSEEN, 1))):
            raise ValueError("entries must be -1, +1 or UNSEEN")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    def eval_index(self, x: int) -> int:
        cell = int(self.entries[project_index(x, self.vars)])
        return -1 if cell == UNSEEN else cell

    def values_on(self, n: int) -> np.ndarray:
        """Dense evaluation over all 2^n inputs."""
        if self.vars and self.vars[-1] >= n:
            raise ValueError("hypothesis reads variables beyond n")
        filled = np.where(self.entries == UNSEEN, -1, self.entries).astype(np.int8)
        proj = project_assignments(np.arange(1 << n, dtype=np.int64), self.vars)
        return filled[proj]

    def to_text(self) -> str:
        head = "A=" + ",".join(str(v) for v in self.vars)
        body = "".join(
            "?" if e == UNSEEN else ("+" if e > 0 else "-") for e in self.entries)
        return f"{head}\n{body}\n"

    @classmethod
    def from_text(cls, text: str) -> "Hypothesis":
        lines = text.strip().splitlines()
        if len(lines) != 2 or not lines[0].startswith("A="):
            raise ValueError("expected 'A=<indices>' then one row over +-?")
        spec = lines[0][2:].strip()
        variables = tuple(int(tok) for tok in spec.split(",")) if spec else ()
        row = lines[1].strip()
        if set(row) - {"+", "-", "?"}:
            raise ValueError("entry row may only contain '+', '-' and '?'")
        entries = np.fromiter(
            (UNSEEN if ch == "?" else (1 if ch == "+" else -1) for ch in row),
            dtype=np.int8, count=len(row))
        return cls(variables, entries)


@dataclass(frozen=True)
class LearnerReport:
    hypothesis: Hypothesis | None
    fs_calls: int
    ex_calls: int
    encountered_fraction: Fraction
    status: str


def stage_one_draws(k: int, eps: float) -> int:
    return math.ceil((10 * k / eps) * math.log(10 * k))


def default_example_cap(k: int, eps: float) -> int:
    """ceil(8 * 2^k * ln(max(1/eps, e))): the example budget with an
    explicit constant; hitting it is reported, never silent."""
    return math.ceil(8 * (1 << k) * math.log(max(1 / eps, math.e)))


def find_influential(fs: FsOracle, k: int, eps: float) -> tuple[int, ...]:
    """Union of the subsets from ceil((10k/eps) ln(10k)) spectral draws."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if not 0 < eps <= 1:
        raise ValueError("eps must be in (0, 1]")
    masks = fs.draw_batch(stage_one_draws(k, eps))
    union = 0
    if isinstance(masks, np.ndarray):
        if masks.size:
            union = int(np.bitwise_or.reduce(masks))
    else:
        for mask in masks:
            union |= int(mask)
    out = []
    i = 0
    while union:
        if union & 1:
            out.append(i)
        union >>= 1
        i += 1
    return tuple(out)


def learn_junta(fs: FsOracle, ex: ExOracle, k: int, eps: float,
                max_ex_draws: int | None = None) -> LearnerReport:
    """Run both stages against a target promised to depend on at most k
    variables; see the module docstring for the procedure.

    Statuses: ``stage1-overflow`` if more than k variables were exposed
    (impossible under the promise), ``stage2-timeout`` if the example cap
    was reached before coverage, else ``success``.
    """
    before = fs.calls
    found = find_influential(fs, k, eps)
    fs_used = fs.calls - before
    if len(found) > k:
        return LearnerReport(None, fs_used, 0, Fraction(0), STAGE_ONE_OVERFLOW)

    cap = default_example_cap(k, eps) if max_ex_draws is None else max_ex_draws
    cells = 1 << len(found)
    needed = math.ceil((1 - eps / 3) * cells)
    entries = np.zeros(cells, dtype=np.int8)
    seen = 0
    draws = 0
    while seen < needed and draws < cap:
        example = ex.draw()
        draws += 1
        cell = project_index(example.x, found)
        if entries[cell] == UNSEEN:
            entries[cell] = example.y
            seen += 1
    status = SUCCESS if seen >= needed else STAGE_TWO_TIMEOUT
    return LearnerReport(Hypothesis(found, entries), fs_used, draws,
                         Fraction(seen, cells), status)


def hypothesis_error(f: TruthTable, hypothesis: Hypothesis) -> Fraction:
    """Exact disagreement fraction between a table and a hypothesis."""
    predicted = hypothesis.values_on(f.n)
    return Fraction(int(np.count_nonzero(predicted != f.values)), 1 << f.n)
