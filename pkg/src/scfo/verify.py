"""Brute-force protocol simulator and checker.

A random cut yields a uniformly random rotation, so the distribution of the
opened cards is fixed by the cyclic class of the face-down word.  Checking a
protocol therefore only needs one simulated word per input.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Sequence

from .boolfun import TruthTable, assignments
from .search import ProtocolCertificate, SchemaError
from .words import Word, canonical_rotation, cyclically_equal, rotate, to_str, word

CLUB, HEART = "club", "heart"


@dataclass(frozen=True)
class ProtocolTemplate:
    """Face-down card row before the cut.

    Slots are ``"x3"`` / ``"~x3"`` literals or the constants ``"club"`` and
    ``"heart"``.  ``output`` optionally fixes the opened pattern for each
    output value.
    """

    n: int
    slots: tuple[str, ...]
    output: tuple[Word, Word] | None = None

    def __post_init__(self):
        used = set()
        for s in self.slots:
            if s in (CLUB, HEART):
                continue
            var, _ = _literal(s)
            if not 1 <= var <= self.n:
                raise SchemaError(f"slot {s!r} refers to a variable outside 1..{self.n}")
            used.add(var)
        if used != set(range(1, self.n + 1)):
            raise SchemaError(f"every input must appear in a slot; missing {sorted(set(range(1, self.n + 1)) - used)}")
        if self.output is not None and cyclically_equal(*self.output):
            raise SchemaError("the two output patterns are cyclically equal")


def _literal(slot: str) -> tuple[int, bool]:
    neg = slot.startswith("~")
    body = slot[1:] if neg else slot
    if not body.startswith("x") or not body[1:].isdigit():
        raise SchemaError(f"bad slot {slot!r}")
    return int(body[1:]), neg


def simulate(t: ProtocolTemplate, x: Sequence[int]) -> Word:
    """The face-down word for input ``x`` (its cyclic class is what the cut reveals)."""
    if len(x) != t.n:
        raise ValueError(f"assignment of length {len(x)} for a {t.n}-input template")
    out = []
    for s in t.slots:
        if s == CLUB:
            out.append(0)
        elif s == HEART:
            out.append(1)
        else:
            var, neg = _literal(s)
            out.append(x[var - 1] ^ int(neg))
    return tuple(out)


@dataclass(frozen=True)
class Verdict:
    kind: str  # "valid", "correctness-violation" or "security-violation"
    witness: tuple = ()
    message: str = ""

    @property
    def valid(self) -> bool:
        return self.kind == "valid"


def verify_protocol(t: ProtocolTemplate, f: TruthTable) -> Verdict:
    if t.n != f.n:
        raise ValueError(f"template has {t.n} inputs, function has {f.n}")
    classes: tuple[list, list] = ([], [])
    for x in assignments(f.n):
        classes[f(*x)].append((x, simulate(t, x)))

    for x0, w0 in classes[0]:
        for x1, w1 in classes[1]:
            if cyclically_equal(w0, w1):
                return Verdict("correctness-violation", (x0, x1),
                               f"{to_str(w0)} ~ {to_str(w1)} but outputs differ")
    for b in (0, 1):
        if not classes[b]:
            continue
        xr, wr = classes[b][0]
        for x, w in classes[b][1:]:
            if not cyclically_equal(wr, w):
                return Verdict("security-violation", (xr, x),
                               f"{to_str(wr)} !~ {to_str(w)} for output {b}")
    if t.output is not None:
        for b in (0, 1):
            if classes[b] and not cyclically_equal(classes[b][0][1], t.output[b]):
                x, w = classes[b][0]
                return Verdict("correctness-violation", (x, to_str(t.output[b])),
                               f"output {b} opens as {to_str(canonical_rotation(w))}, "
                               f"rule expects {to_str(canonical_rotation(t.output[b]))}")
    return Verdict("valid")


def opening_distribution(w: Word) -> Counter:
    """Rotation counts of ``w``: the random-cut distribution up to a 1/L factor."""
    return Counter(rotate(w, r) for r in range(len(w)))


def verify_by_distribution(t: ProtocolTemplate, f: TruthTable) -> bool:
    """Same question as :func:`verify_protocol`, answered by comparing opened
    distributions instead of cyclic classes."""
    dists: tuple[list, list] = ([], [])
    for x in assignments(f.n):
        dists[f(*x)].append(opening_distribution(simulate(t, x)))
    for b in (0, 1):
        if any(d != dists[b][0] for d in dists[b][1:]):
            return False
        if t.output is not None and dists[b] and dists[b][0] != opening_distribution(t.output[b]):
            return False
    if dists[0] and dists[1]:
        return not (set(dists[0][0]) & set(dists[1][0]))
    return True


def template_from_certificate(c: ProtocolCertificate) -> ProtocolTemplate:
    n = c.function.n
    placed = [""] * (2 * n)
    for p, target in enumerate(c.perm):
        placed[target] = f"x{p // 2 + 1}" if p % 2 == 0 else f"~x{p // 2 + 1}"
    slots = []
    for s, k in zip(placed, c.y):
        slots.append(s)
        slots.extend([CLUB] * k)
    return ProtocolTemplate(n, tuple(slots), (c.pattern0, c.pattern1))


def verify_certificate(c: ProtocolCertificate, f: TruthTable | None = None) -> Verdict:
    f = f or c.function
    if f != c.function:
        raise ValueError("certificate was issued for a different function")
    return verify_protocol(template_from_certificate(c), f)


# -- documents -----------------------------------------------------------------


def template_from_dict(doc: dict) -> tuple[ProtocolTemplate, TruthTable, str]:
    try:
        if doc.get("kind") != "protocol-template":
            raise SchemaError(f"not a protocol template: kind={doc.get('kind')!r}")
        fn = doc["function"]
        f = TruthTable.from_bits(fn["table"], fn["n"])
        out = doc.get("output")
        output = (word(out["0"]), word(out["1"])) if out else None
        return ProtocolTemplate(f.n, tuple(doc["slots"]), output), f, fn.get("name", f.bits)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, SchemaError):
            raise
        raise SchemaError(f"malformed template: {exc}") from exc


def template_to_dict(t: ProtocolTemplate, f: TruthTable, name: str, source: str = "") -> dict:
    doc = {"kind": "protocol-template", "function": {"name": name, "n": f.n, "table": f.bits},
           "slots": list(t.slots)}
    if t.output is not None:
        doc["output"] = {"0": to_str(t.output[0]), "1": to_str(t.output[1])}
    if source:
        doc["source"] = source
    return doc


def verify_document(doc: dict) -> tuple[str, Verdict]:
    """Verify a template or certificate document; returns (function name, verdict)."""
    kind = doc.get("kind") if isinstance(doc, dict) else None
    if kind == "protocol-template":
        t, f, name = template_from_dict(doc)
        return name, verify_protocol(t, f)
    if kind == "protocol-certificate":
        c = ProtocolCertificate.from_dict(doc)
        return c.name, verify_certificate(c)
    raise SchemaError(f"unsupported document kind {kind!r}")


def verify_file(path: str | Path) -> tuple[str, Verdict]:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not JSON: {exc}") from exc
    return verify_document(doc)


PROTOCOL_FIXTURES = ("xor2_four_cards", "and2_five_cards", "eq3_six_cards", "mux3_eight_cards",
                     "xor3_eight_cards", "f4_eight_cards")
FIXTURES = PROTOCOL_FIXTURES + ("and2_without_heart",)


def fixture_path(name: str) -> Path:
    return Path(str(resources.files("scfo") / "fixtures" / f"{name}.json"))


def load_fixture(name: str) -> tuple[ProtocolTemplate, TruthTable, str]:
    return template_from_dict(json.loads(fixture_path(name).read_text()))
