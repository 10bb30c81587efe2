"""Finite interpretations, samples, fact files, manifests, types, duality.

Fact file format (UTF-8, one item per line):

    A(e)            concept fact; A starts uppercase
    r(e,f)          role fact; r starts lowercase
    element e       domain declaration for an element with no facts
    # ...           comment; blank lines ignored

A sample manifest is structured text with repeatable blocks, one per fact
file; a new block starts at each `facts =` line:

    facts = fig1_I.facts
    positive = a1 a2

    facts = fig1_J.facts
    negative = b

Multiple blocks are merged into one interpretation by disjoint union, with
elements renamed apart using a file-index prefix ("f1:", "f2:", ...).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from .concepts import Signature

__all__ = [
    "DataError", "Interpretation", "Example", "Sample", "TypeTable",
    "load_facts", "save_facts", "load_sample", "save_sample", "merge_blocks",
    "dualize_interpretation", "dualize_sample", "compute_types",
    "interpretation_signature",
]


class DataError(ValueError):
    """Raised on malformed fact files, manifests, or inconsistent samples."""


_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_PREFIXED_RE = re.compile(r"f\d+:[A-Za-z_][A-Za-z0-9_]*\Z")
_CONCEPT_FACT_RE = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)\(\s*([A-Za-z0-9_:]+)\s*\)\Z")
_ROLE_FACT_RE = re.compile(
    r"([A-Za-z_][A-Za-z0-9_]*)\(\s*([A-Za-z0-9_:]+)\s*,\s*([A-Za-z0-9_:]+)\s*\)\Z")

_RESERVED = frozenset({"top", "bot", "not", "and", "or", "exists", "forall",
                       "element"})


class Interpretation:
    """A finite labeled directed graph.

    domain: element identifiers in first-appearance order.
    concept_ext: concept name -> frozenset of elements (nonempty only).
    role_ext: role name -> frozenset of (source, target) pairs (nonempty only).

    Equality is structural.  Immutable after construction.
    """

    __slots__ = ("domain", "concept_ext", "role_ext", "index", "domain_set",
                 "_succ", "_hash")

    def __init__(self, domain, concept_ext, role_ext):
        dom = tuple(domain)
        if not dom:
            raise DataError("empty domain")
        if len(set(dom)) != len(dom):
            raise DataError("duplicate elements in domain")
        self.domain: tuple[str, ...] = dom
        self.domain_set: frozenset[str] = frozenset(dom)
        # drop empty extensions so that absent and empty are the same thing
        self.concept_ext: dict[str, frozenset[str]] = {
            a: frozenset(ext) for a, ext in sorted(concept_ext.items()) if ext}
        self.role_ext: dict[str, frozenset[tuple[str, str]]] = {
            r: frozenset(ext) for r, ext in sorted(role_ext.items()) if ext}
        for a, ext in self.concept_ext.items():
            stray = ext - self.domain_set
            if stray:
                raise DataError(f"extension of {a} mentions unknown elements: "
                                f"{', '.join(sorted(stray))}")
        for r, pairs in self.role_ext.items():
            for x, y in pairs:
                if x not in self.domain_set or y not in self.domain_set:
                    raise DataError(f"edge {r}({x},{y}) leaves the domain")
        self.index: dict[str, int] = {e: i for i, e in enumerate(dom)}
        self._succ: dict[str, dict[str, frozenset[str]]] = {}
        self._hash: int | None = None

    def successors(self, role: str) -> dict[str, frozenset[str]]:
        """Map source element -> frozenset of role-successors (cached)."""
        cached = self._succ.get(role)
        if cached is None:
            acc: dict[str, set[str]] = {}
            for x, y in self.role_ext.get(role, ()):
                acc.setdefault(x, set()).add(y)
            cached = {x: frozenset(ys) for x, ys in acc.items()}
            self._succ[role] = cached
        return cached

    def num_facts(self) -> int:
        return (sum(len(ext) for ext in self.concept_ext.values())
                + sum(len(ext) for ext in self.role_ext.values()))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Interpretation):
            return NotImplemented
        return (self.domain == other.domain
                and self.concept_ext == other.concept_ext
                and self.role_ext == other.role_ext)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.domain,
                               tuple(sorted(self.concept_ext.items())),
                               tuple(sorted(self.role_ext.items()))))
        return self._hash

    def __repr__(self) -> str:
        return (f"Interpretation(|domain|={len(self.domain)}, "
                f"names={len(self.concept_ext)}, roles={len(self.role_ext)})")


@dataclass(frozen=True, eq=False)
class Example:
    """A pointed interpretation (I, a); its size is the fact count plus one."""

    interp: Interpretation
    element: str

    def __post_init__(self) -> None:
        if self.element not in self.interp.domain_set:
            raise DataError(f"example element {self.element!r} not in domain")

    @property
    def size(self) -> int:
        return self.interp.num_facts() + 1


@dataclass(frozen=True, eq=False)
class Sample:
    """One shared interpretation with disjoint positive/negative elements."""

    interp: Interpretation
    positives: tuple[str, ...]
    negatives: tuple[str, ...]

    def __post_init__(self) -> None:
        pos, neg = set(self.positives), set(self.negatives)
        both = pos & neg
        if both:
            raise DataError(
                f"elements listed positive and negative: {', '.join(sorted(both))}")
        stray = (pos | neg) - self.interp.domain_set
        if stray:
            raise DataError(f"examples not in domain: {', '.join(sorted(stray))}")

    @property
    def num_examples(self) -> int:
        return len(self.positives) + len(self.negatives)


@dataclass(frozen=True, eq=False)
class TypeTable:
    """Distinct element types (sets of concept names) with a per-element index.

    Types are indexed lexicographically by their sorted member names, so the
    numbering is deterministic for a given interpretation.
    """

    types: tuple[frozenset[str], ...]
    type_of: dict[str, int] = field(repr=False)

    def __len__(self) -> int:
        return len(self.types)


# ---------------------------------------------------------------------------
# fact files

def _check_ident(name: str, what: str, lineno: int) -> None:
    if not _IDENT_RE.match(name):
        raise DataError(f"line {lineno}: bad {what} identifier {name!r}")
    if name in _RESERVED:
        raise DataError(f"line {lineno}: {what} identifier {name!r} is reserved")


def load_facts(text: str) -> Interpretation:
    """Parse fact-file text; element order is first appearance."""
    domain: list[str] = []
    seen: set[str] = set()
    concept_ext: dict[str, set[str]] = {}
    role_ext: dict[str, set[tuple[str, str]]] = {}

    def touch(elem: str, lineno: int) -> None:
        if not _IDENT_RE.match(elem) and not _PREFIXED_RE.match(elem):
            raise DataError(f"line {lineno}: bad element identifier {elem!r}")
        if elem not in seen:
            seen.add(elem)
            domain.append(elem)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("element "):
            elem = line[len("element "):].strip()
            touch(elem, lineno)
            continue
        m = _ROLE_FACT_RE.match(line)
        if m:
            role, x, y = m.groups()
            if not role[0].islower():
                raise DataError(
                    f"line {lineno}: role names start lowercase: {role!r}")
            _check_ident(role, "role", lineno)
            touch(x, lineno)
            touch(y, lineno)
            role_ext.setdefault(role, set()).add((x, y))
            continue
        m = _CONCEPT_FACT_RE.match(line)
        if m:
            name, elem = m.groups()
            if not name[0].isupper():
                raise DataError(
                    f"line {lineno}: concept names start uppercase: {name!r}")
            _check_ident(name, "concept", lineno)
            touch(elem, lineno)
            concept_ext.setdefault(name, set()).add(elem)
            continue
        raise DataError(f"line {lineno}: cannot parse {raw.strip()!r}")

    if not domain:
        raise DataError("empty domain: no facts or element declarations")
    return Interpretation(domain, concept_ext, role_ext)


def save_facts(interp: Interpretation) -> str:
    """Canonical fact-file text; load_facts inverts it exactly.

    All elements are declared up front (preserving domain order), then
    concept facts sorted, then role facts sorted.
    """
    lines = [f"element {e}" for e in interp.domain]
    for name in sorted(interp.concept_ext):
        for e in sorted(interp.concept_ext[name]):
            lines.append(f"{name}({e})")
    for role in sorted(interp.role_ext):
        for x, y in sorted(interp.role_ext[role]):
            lines.append(f"{role}({x},{y})")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# manifests and merging

def merge_blocks(blocks: list[tuple[Interpretation, list[str], list[str]]]) -> Sample:
    """Disjoint union of (interpretation, positives, negatives) blocks."""
    # single block keeps its element names; several get "f<i>:" prefixes
    if len(blocks) == 1:
        interp, pos, neg = blocks[0]
        return Sample(interp, tuple(pos), tuple(neg))
    domain: list[str] = []
    concept_ext: dict[str, set[str]] = {}
    role_ext: dict[str, set[tuple[str, str]]] = {}
    positives: list[str] = []
    negatives: list[str] = []
    for idx, (interp, pos, neg) in enumerate(blocks, start=1):
        pre = f"f{idx}:"
        domain.extend(pre + e for e in interp.domain)
        for name, ext in interp.concept_ext.items():
            concept_ext.setdefault(name, set()).update(pre + e for e in ext)
        for role, pairs in interp.role_ext.items():
            role_ext.setdefault(role, set()).update(
                (pre + x, pre + y) for x, y in pairs)
        positives.extend(pre + e for e in pos)
        negatives.extend(pre + e for e in neg)
    merged = Interpretation(domain, concept_ext, role_ext)
    return Sample(merged, tuple(positives), tuple(negatives))


def load_sample(manifest_path: str | Path) -> Sample:
    """Read a manifest and its fact files into one merged Sample."""
    path = Path(manifest_path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read manifest {path}: {exc}") from exc
    base = path.parent

    blocks: list[dict[str, str]] = []
    current: dict[str, str] | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DataError(f"{path}:{lineno}: expected key = value")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key == "facts":
            current = {"facts": value}
            blocks.append(current)
        elif key in ("positive", "negative"):
            if current is None:
                raise DataError(f"{path}:{lineno}: {key} before any facts entry")
            current[key] = (current.get(key, "") + " " + value).strip()
        else:
            raise DataError(f"{path}:{lineno}: unknown key {key!r}")
    if not blocks:
        raise DataError(f"{path}: no facts entries")

    parsed: list[tuple[Interpretation, list[str], list[str]]] = []
    for block in blocks:
        facts_path = base / block["facts"]
        try:
            facts_text = facts_path.read_text(encoding="utf-8")
        except OSError as exc:
            raise DataError(f"cannot read fact file {facts_path}: {exc}") from exc
        try:
            interp = load_facts(facts_text)
        except DataError as exc:
            raise DataError(f"{facts_path}: {exc}") from exc
        pos = block.get("positive", "").split()
        neg = block.get("negative", "").split()
        for e in pos + neg:
            if e not in interp.domain_set:
                raise DataError(
                    f"{path}: example element {e!r} not in {facts_path.name}")
        parsed.append((interp, pos, neg))
    return merge_blocks(parsed)


def save_sample(sample: Sample, out_dir: str | Path, stem: str = "sample") -> Path:
    """Write sample as <stem>.facts plus <stem>.manifest; returns manifest path."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    facts_name = f"{stem}.facts"
    (out / facts_name).write_text(save_facts(sample.interp), encoding="utf-8")
    lines = [f"facts = {facts_name}"]
    if sample.positives:
        lines.append("positive = " + " ".join(sample.positives))
    if sample.negatives:
        lines.append("negative = " + " ".join(sample.negatives))
    manifest = out / f"{stem}.manifest"
    manifest.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return manifest


# ---------------------------------------------------------------------------
# dualization and types

def interpretation_signature(interp: Interpretation) -> Signature:
    """Names and roles with nonempty extensions in interp."""
    return Signature(frozenset(interp.concept_ext), frozenset(interp.role_ext))


def dualize_interpretation(interp: Interpretation, sigma: Signature) -> Interpretation:
    """Complement the extensions of concept names in sigma; keep roles.

    Involution for a fixed sigma: dualizing twice returns an equal
    interpretation.
    """
    concept_ext: dict[str, frozenset[str]] = {}
    touched = set(sigma.concept_names)
    for name, ext in interp.concept_ext.items():
        if name in touched:
            concept_ext[name] = interp.domain_set - ext
        else:
            concept_ext[name] = ext
    for name in touched - set(interp.concept_ext):
        concept_ext[name] = interp.domain_set  # complement of empty
    return Interpretation(interp.domain, concept_ext, interp.role_ext)


def dualize_sample(sample: Sample, sigma: Signature) -> Sample:
    """Dualize the interpretation and swap the roles of P and N."""
    dual = dualize_interpretation(sample.interp, sigma)
    return Sample(dual, sample.negatives, sample.positives)


def compute_types(interp: Interpretation) -> TypeTable:
    """Group elements by the exact set of concept names they satisfy."""
    membership: dict[str, set[str]] = {e: set() for e in interp.domain}
    for name, ext in interp.concept_ext.items():
        for e in ext:
            membership[e].add(name)
    distinct = {frozenset(names) for names in membership.values()}
    types = tuple(sorted(distinct, key=lambda t: tuple(sorted(t))))
    position = {t: i for i, t in enumerate(types)}
    type_of = {e: position[frozenset(names)] for e, names in membership.items()}
    return TypeTable(types, type_of)
