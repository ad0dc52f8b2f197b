"""Exhaustive search for single-cut full-open protocols with added clubs only.

For every arrangement of the input cards and every shift vector the
minimum-insertion ILP is solved; each optimal insertion is kept if the two
output classes stay distinguishable after insertion.

Shift vectors are walked depth-first, one class member at a time.  The
equations contributed by a member depend only on its own shift, so once a
prefix of the shift vector is infeasible every completion is infeasible too;
those instances are tallied without being rebuilt.  ``incremental=False``
builds and solves every instance separately (used to cross-check).
"""

from __future__ import annotations

import hashlib
import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from math import factorial
from typing import Iterable, Sequence

from . import __version__
from .boolfun import TruthTable, catalog_name, dual_function, named_function  # noqa: F401
from .encoding import (
    Arrangement, SegmentData, WordClassing, all_shift_vectors, build_ilp, input_words,
    instance_count, permute_classing, shift_slots,
)
from .optimize import (
    DEFAULT_MAX_POINTS, EqualitySystem, IndeterminateError, SolveOutcome, SolverStats,
    solutions_at, solve_min_insertion, solve_system,
)
from .words import (
    Word, apply_insertion, canonical_rotation, cyclically_equal, gap_vector, gaps_cyclically_equal,
    to_glyphs, to_str,
)

log = logging.getLogger(__name__)

CHUNK = 24  # arrangements per work unit; fixed so results never depend on the pool size


@dataclass(frozen=True)
class SearchOptions:
    workers: int = 1
    prune: bool = False
    first: bool = False
    explore_delta: int = 0
    incremental: bool = True
    max_points: int = DEFAULT_MAX_POINTS
    trace: bool = False

    def __post_init__(self):
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.explore_delta < 0:
            raise ValueError("explore_delta must be >= 0")


@dataclass(frozen=True, order=True)
class Entry:
    """One accepted ``(arrangement, shift vector, insertion)`` triple."""

    k0: int
    y: tuple[int, ...]
    perm: tuple[int, ...]
    shifts: tuple[int, ...]

    @property
    def arrangement(self) -> Arrangement:
        return Arrangement(self.perm)

    def classing(self, f: TruthTable) -> WordClassing:
        return permute_classing(input_words(f), self.arrangement)


@dataclass
class SearchStats:
    instances: int = 0
    infeasible: int = 0
    rejected: int = 0  # feasible, but no optimal insertion is correct
    accepted: int = 0
    arrangements: int = 0
    indeterminate: int = 0
    solver: SolverStats = field(default_factory=SolverStats)
    exploratory_accepted: int = 0
    wall_time: float = 0.0

    def merge(self, other: "SearchStats") -> None:
        for name in ("instances", "infeasible", "rejected", "accepted", "arrangements",
                     "indeterminate", "exploratory_accepted"):
            setattr(self, name, getattr(self, name) + getattr(other, name))
        self.solver.merge(other.solver)

    def to_dict(self) -> dict:
        return {
            "arrangements": self.arrangements,
            "instances": self.instances,
            "infeasible": self.infeasible,
            "feasible_correctness_failed": self.rejected,
            "accepted": self.accepted,
            "indeterminate": self.indeterminate,
            "exploratory_accepted": self.exploratory_accepted,
            "solver_layers": dict(sorted(self.solver.layers.items())),
        }


@dataclass
class SearchResultSet:
    function: TruthTable
    name: str
    options: SearchOptions
    entries: list[Entry] = field(default_factory=list)
    exploratory: list[Entry] = field(default_factory=list)
    stats: SearchStats = field(default_factory=SearchStats)
    trivial: bool = False
    complete: bool = True
    trace: list[str] = field(default_factory=list)

    @property
    def certifying(self) -> bool:
        return self.stats.indeterminate == 0

    @property
    def exists(self) -> bool:
        return self.trivial or bool(self.entries)

    def best(self) -> Entry | None:
        return min(self.entries) if self.entries else None

    @property
    def min_k0(self) -> int | None:
        e = self.best()
        return e.k0 if e else (0 if self.trivial else None)


# -- correctness ---------------------------------------------------------------


def correctness_check(y: Sequence[int], w0: Word, w1: Word) -> bool:
    """True iff the two inserted words are not cyclically equal (checked on words
    and on gap vectors, which must agree)."""
    a, b = apply_insertion(w0, y), apply_insertion(w1, y)
    by_word = cyclically_equal(a, b)
    by_gaps = sum(a) == sum(b) and gaps_cyclically_equal(gap_vector(a), gap_vector(b))[0]
    if by_word != by_gaps:
        raise AssertionError(f"word/gap disagreement on {to_str(a)} vs {to_str(b)}")
    return not by_word


# -- per-arrangement work ------------------------------------------------------


def rotation_canonical(perm: Sequence[int]) -> tuple[int, ...]:
    """Least arrangement among those that differ by rotating every target position."""
    I = len(perm)
    return min(tuple((t - r) % I for t in perm) for r in range(I))


def arrangements_for(n: int, prune: bool) -> list[tuple[int, ...]]:
    import itertools

    perms = list(itertools.permutations(range(2 * n)))
    if prune:
        perms = [p for p in perms if rotation_canonical(p) == p]
    return perms


class _Worker:
    def __init__(self, f: TruthTable, opts: SearchOptions):
        self.base = input_words(f)
        self.opts = opts
        self.cache: dict = {}

    def solve(self, system: EqualitySystem) -> SolveOutcome:
        key = system.key()
        out = self.cache.get(key)
        if out is None:
            out = solve_system(system, max_points=self.opts.max_points)
            self.cache[key] = out
        return out

    def run(self, perms: Iterable[tuple[int, ...]]):
        stats = SearchStats()
        entries: list[Entry] = []
        explored: list[Entry] = []
        self.trace: list[str] = []
        for perm in perms:
            self.arrangement(perm, stats, entries, explored)
            if self.opts.first and entries:
                break
        return entries, explored, stats, self.trace

    def arrangement(self, perm, stats: SearchStats, entries: list, explored: list) -> None:
        c = permute_classing(self.base, Arrangement(perm))
        seg = SegmentData(c)
        slots = shift_slots(c)
        J = c.n
        stats.arrangements += 1
        w0, w1 = c.class0[0], c.class1[0]
        tag = "pi=" + ",".join(str(t + 1) for t in perm)

        def note(shifts, text):
            if self.opts.trace:
                self.trace.append(f"{tag} s={''.join(map(str, shifts))} {text}")

        def leaf(shifts, outcome: SolveOutcome, system: EqualitySystem | None):
            stats.instances += 1
            stats.solver.record(outcome.layer)
            if not outcome.feasible:
                stats.infeasible += 1
                note(shifts, f"layer={outcome.layer} status=infeasible")
                return
            hit = 0
            for y in outcome.solutions:
                if correctness_check(y, w0, w1):
                    entries.append(Entry(sum(y), y, perm, tuple(shifts)))
                    hit += 1
            if hit:
                stats.accepted += 1
            else:
                stats.rejected += 1
            note(shifts, f"layer={outcome.layer} status=optimal t={outcome.objective} bound={outcome.bound} "
                         f"optima={len(outcome.solutions)} correct={hit}")
            for delta in range(1, self.opts.explore_delta + 1):
                if system is None:
                    system = EqualitySystem(seg.I)
                    system.add_all(*_rows(seg, slots, shifts))
                for y in solutions_at(system, outcome.objective + delta, self.opts.max_points):
                    if correctness_check(y, w0, w1):
                        explored.append(Entry(sum(y), y, perm, tuple(shifts)))
                        stats.exploratory_accepted += 1

        if not self.opts.incremental:
            for shifts in all_shift_vectors(c):
                inst = build_ilp(c, shifts, seg)
                try:
                    outcome = solve_min_insertion(inst, max_points=self.opts.max_points)
                except IndeterminateError as exc:
                    stats.instances += 1
                    stats.indeterminate += 1
                    note(shifts, f"status=indeterminate ({exc})")
                    continue
                leaf(shifts, outcome, None)
            return

        blocks = [[seg.block(b, k, s) for s in range(J)] for b, k in slots]
        depth = len(slots)
        shifts: list[int] = []

        def walk(system: EqualitySystem, level: int):
            if level == depth:
                try:
                    outcome = self.solve(system)
                except IndeterminateError as exc:
                    stats.instances += 1
                    stats.indeterminate += 1
                    note(shifts, f"status=indeterminate ({exc})")
                    return
                leaf(shifts, outcome, system)
                return
            for s in range(J):
                child = system.copy()
                ok = True
                for row, rhs in blocks[level][s]:
                    if not child.add(row, rhs):
                        ok = False
                        break
                shifts.append(s)
                if ok:
                    walk(child, level + 1)
                else:
                    skipped = J ** (depth - level - 1)
                    stats.instances += skipped
                    stats.infeasible += skipped
                    stats.solver.record("rational", skipped)
                    note(shifts, f"layer=rational status=infeasible prefix instances={skipped}")
                shifts.pop()
                if self.opts.first and entries:
                    return

        walk(EqualitySystem(seg.I), 0)


def _rows(seg: SegmentData, slots, shifts):
    A, d = [], []
    for (b, k), s in zip(slots, shifts):
        for row, rhs in seg.block(b, k, s):
            A.append(row)
            d.append(rhs)
    return A, d


def _run_chunk(f: TruthTable, opts: SearchOptions, perms):
    return _Worker(f, opts).run(perms)


def search_scfo(f: TruthTable, opts: SearchOptions | None = None, name: str | None = None) -> SearchResultSet:
    """Search every arrangement and shift vector for ``f``; see module docstring."""
    opts = opts or SearchOptions()
    name = name or catalog_name(f) or f.bits
    result = SearchResultSet(f, name, opts)
    t0 = time.perf_counter()
    if f.is_constant():
        result.trivial = True
        return result
    if f.n >= 4:
        log.warning("n=%d: (2n)! arrangements times n^(2^n - 2) shift vectors is likely impractical", f.n)

    perms = arrangements_for(f.n, opts.prune)
    chunks = [perms[i:i + CHUNK] for i in range(0, len(perms), CHUNK)]
    job = partial(_run_chunk, f, opts)
    if opts.workers == 1:
        results = map(job, chunks)
        pool = None
    else:
        pool = ProcessPoolExecutor(max_workers=opts.workers)
        results = pool.map(job, chunks)
    try:
        for entries, explored, stats, trace in results:
            result.entries.extend(entries)
            result.trace.extend(trace)
            result.exploratory.extend(explored)
            result.stats.merge(stats)
            if opts.first and result.entries:
                result.complete = False
                break
    finally:
        if pool is not None:
            pool.shutdown(cancel_futures=True)
    if opts.first and result.entries:
        result.entries = [min(result.entries, key=lambda e: (e.perm, e.shifts, e.y))]
        result.complete = result.stats.arrangements == len(perms) and result.complete
    result.entries.sort(key=lambda e: (e.perm, e.shifts, e.y))
    result.exploratory.sort(key=lambda e: (e.perm, e.shifts, e.y))
    result.stats.wall_time = time.perf_counter() - t0
    return result


# -- certificates and reports --------------------------------------------------


_UNSIGNED = ("digest", "search", "config")  # run metadata attached after signing


def _digest(doc: dict) -> str:
    body = {k: v for k, v in doc.items() if k not in _UNSIGNED}
    return hashlib.sha256(json.dumps(body, sort_keys=True, ensure_ascii=False).encode()).hexdigest()


def _word_doc(w: Word) -> dict:
    return {"bits": to_str(w), "cards": to_glyphs(w)}


@dataclass(frozen=True)
class ProtocolCertificate:
    name: str
    function: TruthTable
    perm: tuple[int, ...]
    y: tuple[int, ...]
    shifts: tuple[int, ...]
    pattern0: Word
    pattern1: Word

    @property
    def k0(self) -> int:
        return sum(self.y)

    @property
    def length(self) -> int:
        return 2 * self.function.n + self.k0

    def to_dict(self) -> dict:
        doc = {
            "kind": "protocol-certificate",
            "tool_version": __version__,
            "function": {"name": self.name, "n": self.function.n, "table": self.function.bits},
            "arrangement": [p + 1 for p in self.perm],
            "insertion": list(self.y),
            "shift_vector": list(self.shifts),
            "k0": self.k0,
            "k1": 0,
            "final_length": self.length,
            "opening_patterns": {"0": _word_doc(self.pattern0), "1": _word_doc(self.pattern1)},
        }
        doc["digest"] = _digest(doc)
        return doc

    @classmethod
    def from_dict(cls, doc: dict) -> "ProtocolCertificate":
        try:
            if doc.get("kind") != "protocol-certificate":
                raise ValueError(f"not a protocol certificate: kind={doc.get('kind')!r}")
            fn = doc["function"]
            f = TruthTable.from_bits(fn["table"], fn["n"])
            perm = tuple(int(p) - 1 for p in doc["arrangement"])
            Arrangement(perm)
            y = tuple(int(v) for v in doc["insertion"])
            pats = doc["opening_patterns"]
            cert = cls(fn.get("name", f.bits), f, perm, y, tuple(doc.get("shift_vector", ())),
                       tuple(int(c) for c in pats["0"]["bits"]), tuple(int(c) for c in pats["1"]["bits"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"malformed certificate: {exc}") from exc
        if len(perm) != 2 * f.n or len(y) != 2 * f.n:
            raise SchemaError("arrangement/insertion length does not match the function")
        if "digest" in doc and doc["digest"] != _digest(doc):
            raise SchemaError("digest does not match certificate contents")
        return cert


class SchemaError(ValueError):
    pass


def certificate_for(result: SearchResultSet, entry: Entry | None = None) -> ProtocolCertificate:
    entry = entry or result.best()
    if entry is None:
        raise ValueError("no accepted entry to certify")
    c = entry.classing(result.function)
    p0 = canonical_rotation(apply_insertion(c.class0[0], entry.y))
    p1 = canonical_rotation(apply_insertion(c.class1[0], entry.y))
    return ProtocolCertificate(result.name, result.function, entry.perm, entry.y, entry.shifts, p0, p1)


def impossibility_report(result: SearchResultSet, include_time: bool = False) -> dict:
    f = result.function
    c = input_words(f)
    slots = len(shift_slots(c))
    doc = {
        "kind": "impossibility-report",
        "tool_version": __version__,
        "function": {"name": result.name, "n": f.n, "table": f.bits},
        "claim": "no standard SCFO protocol with only added clubs",
        "valid": result.certifying and result.complete and not result.entries,
        "search_space": {
            "arrangements": factorial(2 * f.n),
            "arrangements_searched": result.stats.arrangements,
            "rotation_pruning": result.options.prune,
            "shift_vectors_per_arrangement": c.n ** slots,
            "instances": instance_count(c),
        },
        "tallies": result.stats.to_dict(),
        "solver_audit": {
            "indeterminate": result.stats.indeterminate,
            "exact_arithmetic": True,
            "max_points": result.options.max_points,
        },
    }
    if include_time:
        doc["runtime_seconds"] = round(result.stats.wall_time, 3)
    doc["digest"] = _digest(doc)
    return doc


def result_document(result: SearchResultSet, include_time: bool = False) -> dict:
    """The document a search run writes: certificate, trivial note, or impossibility report."""
    if result.trivial:
        doc = {"kind": "trivial", "tool_version": __version__,
               "function": {"name": result.name, "n": result.function.n, "table": result.function.bits},
               "note": "constant function: computable without any protocol"}
        doc["digest"] = _digest(doc)
        return doc
    if result.entries:
        doc = certificate_for(result).to_dict()
        doc_stats = {"tallies": result.stats.to_dict(), "accepted_entries": len(result.entries),
                     "exhaustive": result.complete}
        if include_time:
            doc_stats["runtime_seconds"] = round(result.stats.wall_time, 3)
        return {**doc, "search": doc_stats}
    return impossibility_report(result, include_time)


# -- table reproduction --------------------------------------------------------

TABLE2_ROWS = ["and2", "xor2", "and3", "xor3", "eq3", "maj3", "one3",
               "xorand3", "mux3", "andxor3", "chain3", "and_or3"]

# existence column and reference (k0, k1) of the published results table
TABLE2_EXPECTED = {
    "and2": (True, (1, 0)), "xor2": (True, (0, 0)), "and3": (False, None), "xor3": (False, None),
    "eq3": (True, (0, 0)), "maj3": (False, None), "one3": (False, None), "xorand3": (False, None),
    "mux3": (False, None), "andxor3": (False, None), "chain3": (False, None), "and_or3": (False, None),
}


@dataclass
class Table2Row:
    name: str
    label: str
    exists: bool
    k0: int | None
    certifying: bool
    stats: SearchStats

    @property
    def protocol(self) -> str:
        return f"({self.k0},0)-SCFO" if self.exists else "---"

    @property
    def matches(self) -> bool:
        exp_exists, exp_ref = TABLE2_EXPECTED[self.name]
        if exp_exists != self.exists:
            return False
        return not exp_exists or exp_ref == (self.k0, 0)


def run_table2(opts: SearchOptions | None = None, names: Sequence[str] = TABLE2_ROWS, progress=None) -> list[Table2Row]:
    from .boolfun import CATALOG

    opts = opts or SearchOptions()
    rows = []
    for name in names:
        res = search_scfo(named_function(name), opts, name)
        row = Table2Row(name, CATALOG[name].label, res.exists, res.min_k0, res.certifying, res.stats)
        rows.append(row)
        if progress:
            progress(row, res)
    return rows


def render_table2(rows: Sequence[Table2Row]) -> str:
    lines = [f"{'function':<28} {'exists':<7} {'protocol':<14} {'instances':>10} {'accepted':>9}  match"]
    for r in rows:
        mark = "✓" if r.exists else "×"
        lines.append(f"{r.label:<28} {mark:<7} {r.protocol:<14} {r.stats.instances:>10} "
                     f"{r.stats.accepted:>9}  {'yes' if r.matches else 'NO'}")
    return "\n".join(lines) + "\n"
