"""Timing harness, subtraction-method profiling and analytical cost models.

Absolute times depend on the machine and the interpreter; only ratios,
orderings and limits are meaningful across platforms.
"""
from __future__ import annotations

import gc
import math
import operator
import statistics
import time
from dataclasses import dataclass
from functools import reduce
from typing import Callable, Dict, List, Sequence, Tuple

from scipy import stats

from .allocation import Designation, DesignationState, _check_agent, gen_coalition
from .dcvc import dcvc_allocate, list_length
from .increment_array import find_period, gen_inc_array
from .necklace import _fkm_raw

COMPONENTS = ("fkm", "gen_inc_array", "period", "designation", "gen_coalition")


class ChecksumMismatch(RuntimeError):
    """A repeated run produced a different checksum than the warm-up."""


@dataclass(frozen=True)
class TimingStats:
    runs: int
    mean: float  # seconds
    stddev: float
    ci95_half_width: float
    checksum: int

    @property
    def t_crit(self) -> float:
        return t_critical(self.runs)


def t_critical(runs: int) -> float:
    """Two-sided 95% Student t critical value with runs - 1 dof."""
    return float(stats.t.ppf(0.975, runs - 1))


def run_timed(task: Callable[[], int], runs: int) -> TimingStats:
    """One untimed warm-up, then ``runs`` timed calls of ``task``.

    ``task`` returns an XOR checksum of what it generated; every run must
    reproduce the warm-up value.
    """
    if runs < 2:
        raise ValueError(f"need at least 2 runs, got {runs}")
    expected = task()
    samples = []
    gc_was_enabled = gc.isenabled()
    gc.disable()
    try:
        for _ in range(runs):
            start = time.perf_counter_ns()
            got = task()
            samples.append(time.perf_counter_ns() - start)
            if got != expected:
                raise ChecksumMismatch(f"checksum {got:#x} != warm-up {expected:#x}")
    finally:
        if gc_was_enabled:
            gc.enable()
    secs = [ns * 1e-9 for ns in samples]
    mean = statistics.fmean(secs)
    sd = statistics.stdev(secs)
    return TimingStats(
        runs=runs,
        mean=mean,
        stddev=sd,
        ci95_half_width=t_critical(runs) * sd / math.sqrt(runs),
        checksum=expected,
    )


def ndca_task(x: int, n: int, variant: Designation | str = Designation.PER_SIZE) -> Callable[[], int]:
    return lambda: ndca_pipeline(x, n, level=4, variant=variant)


def dcvc_task(x: int, n: int) -> Callable[[], int]:
    def run() -> int:
        check = 0
        for c in dcvc_allocate(x, n).coalitions():
            check ^= reduce(operator.xor, c)
        return check

    return run


def all_agents_task(algorithm: str, n: int) -> Callable[[], int]:
    tasks = [
        dcvc_task(x, n) if algorithm == "dcvc" else ndca_task(x, n, algorithm)
        for x in range(1, n + 1)
    ]

    def run() -> int:
        check = 0
        for t in tasks:
            check ^= t()
        return check

    return run


def ndca_pipeline(
    x: int, n: int, level: int = 4, variant: Designation | str = Designation.PER_SIZE
) -> int:
    """N-DCA truncated after ``level`` stages; returns an XOR checksum.

    level 0 steps FKM only, 1 adds GenIncArray, 2 period detection,
    3 the designation test and 4 coalition generation (full N-DCA).
    """
    _check_agent(x, n)
    if not 0 <= level <= 4:
        raise ValueError(f"level must be 0..4, got {level}")
    check = 0
    if level == 0:
        for a in _fkm_raw(n, 2):
            check ^= a[n]
        return check
    state = DesignationState.start(n, variant)
    for a in _fkm_raw(n, 2):
        t = gen_inc_array(a[1:])
        s = len(t)
        if level == 1:
            check ^= s
            continue
        if s == 0:
            continue
        p = find_period(t)
        if level == 2:
            check ^= p
            continue
        hit = p == s or state.designate(x, s, n * p // s)
        if level == 3:
            check ^= hit
            continue
        if hit:
            check ^= reduce(operator.xor, gen_coalition(x, t, n))
    return check


@dataclass(frozen=True)
class ComponentProfile:
    """Per-level timings of the truncated pipeline, in seconds.

    Component costs and shares use the per-level minimum, the estimate
    least disturbed by other load on the machine; mean and stddev are
    kept for noise-aware comparisons.
    """

    n: int
    agent: int
    level_times: Tuple[float, ...]  # mean T_0..T_4
    level_stddevs: Tuple[float, ...]
    level_mins: Tuple[float, ...]

    @property
    def component_times(self) -> Dict[str, float]:
        t = self.level_mins
        return {
            name: t[i] - (t[i - 1] if i else 0.0) for i, name in enumerate(COMPONENTS)
        }

    @property
    def shares(self) -> Dict[str, float]:
        total = self.level_mins[-1]
        return {k: v / total for k, v in self.component_times.items()}

    def largest_component(self) -> str:
        comp = self.component_times
        return max(comp, key=comp.get)

    def monotone_within(self, k: float = 3.0) -> bool:
        """T_0 <= ... <= T_4, allowing k standard deviations of slack."""
        t, sd = self.level_times, self.level_stddevs
        return all(
            t[i] <= t[i + 1] + k * math.hypot(sd[i], sd[i + 1]) for i in range(4)
        )


def profile_components(n: int, x: int = 1, runs: int = 5) -> ComponentProfile:
    """Time levels 0..4 of the pipeline; component cost is T_i - T_(i-1).

    Levels are interleaved within each repetition so that slow drift in
    machine load hits every level alike instead of biasing one of them.
    """
    if runs < 2:
        raise ValueError(f"need at least 2 runs, got {runs}")
    expected = [ndca_pipeline(x, n, level) for level in range(5)]
    samples: List[List[int]] = [[] for _ in range(5)]
    gc_was_enabled = gc.isenabled()
    gc.disable()
    try:
        for _ in range(runs):
            for level in range(5):
                start = time.perf_counter_ns()
                got = ndca_pipeline(x, n, level)
                samples[level].append(time.perf_counter_ns() - start)
                if got != expected[level]:
                    raise ChecksumMismatch(
                        f"level {level}: checksum {got:#x} != warm-up {expected[level]:#x}"
                    )
    finally:
        if gc_was_enabled:
            gc.enable()
    secs = [[ns * 1e-9 for ns in row] for row in samples]
    return ComponentProfile(
        n,
        x,
        tuple(statistics.fmean(row) for row in secs),
        tuple(statistics.stdev(row) for row in secs),
        tuple(min(row) for row in secs),
    )


@dataclass(frozen=True)
class AmortisedInputs:
    t_ndca: float
    t_dcvc: float
    m: int
    c: float

    def __post_init__(self) -> None:
        if self.m <= 0 or self.c < 0:
            raise ValueError("need m > 0 and c >= 0")


def amortised_ratio(inputs: AmortisedInputs) -> float:
    """Total-time ratio once every generated coalition costs c to evaluate."""
    num = inputs.t_ndca + inputs.m * inputs.c
    den = inputs.t_dcvc + inputs.m * inputs.c
    if den <= 0:
        raise ValueError("denominator must be positive")
    return num / den


def memory_model(n: int) -> Tuple[int, int]:
    """Analytical per-agent working memory in bytes: (N-DCA, DCVC).

    N-DCA keeps a[n+1], t[n], h[n+1] and a dozen scalars as 4-byte ints.
    DCVC uses the linear model 40n + 64 of a recursive
    index-to-coalition mapping; this package's DCVC is iterative.
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    return 4 * (3 * n + 12), 40 * n + 64


@dataclass(frozen=True)
class OperationTally:
    n: int
    coalitions: int
    bead_inspections: int
    period_comparisons: int
    dcvc_coalitions: int
    predecessor_scan_steps: int

    @property
    def ndca_ops_per_coalition(self) -> float:
        return (self.bead_inspections + self.period_comparisons) / self.coalitions

    @property
    def dcvc_ops_per_coalition(self) -> float:
        return self.predecessor_scan_steps / self.dcvc_coalitions


def operation_tally(n: int, x: int = 1) -> OperationTally:
    """Loop-iteration counts standing in for instruction counts.

    Bead inspections count every bead GenIncArray reads; period
    comparisons count inner-loop element tests; scan steps count the
    positions DCVC's predecessor examines.
    """
    _check_agent(x, n)
    beads = comparisons = generated = 0
    state = DesignationState.start(n, Designation.PER_SIZE)
    for a in _fkm_raw(n, 2):
        beads += n
        t = gen_inc_array(a[1:])
        s = len(t)
        if s == 0:
            continue
        p_found = s
        for p in range(1, s + 1):
            if s % p:
                continue
            ok = True
            for k in range(p, s):
                comparisons += 1
                if t[k] != t[k % p]:
                    ok = False
                    break
            if ok:
                p_found = p
                break
        if p_found == s or state.designate(x, s, n * p_found // s):
            generated += 1

    steps = 0
    dcvc = dcvc_allocate(x, n)
    for s, share in dcvc.by_size.items():
        k = list_length(n, s) // n
        # The first k entries are walked by k - 1 predecessor calls.
        for c in share[: max(k - 1, 0)]:
            steps += _scan_steps(c)
    return OperationTally(n, generated, beads, comparisons, dcvc.total, steps)


def _scan_steps(c: Sequence[int]) -> int:
    steps = 0
    for i in range(len(c) - 1, -1, -1):
        steps += 1
        floor = c[i - 1] if i > 0 else 0
        if c[i] - 1 > floor:
            return steps
    return steps

