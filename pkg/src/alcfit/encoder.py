"""CNF encoding of "some concept of exact size k fits the sample".

Propositional variables, with node indices i, j ranging over 1..k:

    x[i,v]    node i of the syntax tree carries label v
    y1[i,j]   unary node i has the single child j          (i < j <= k)
    y2[i,j]   binary node i has the children j and j+1     (i < j <= k-1)
    z[i,a]    element a satisfies the subconcept rooted at node i
    xt[i,t]   typed mode: node i's label, read as a name, belongs to type t
    l[i]      typed mode: node i is labeled by some concept name
    s[q,m]    cardinality: at least m of the first q example literals hold
    sel[t]    templates: the tree has canonical topology t

Node 1 is the root, children strictly follow their parent, and a binary
node's children sit at consecutive indices, so every syntax tree admits a
level-order numbering that the encoding accepts.  The label alphabet is
{top, bot} + concept names + the operator labels permitted by the operator
set (quantifier and role fused into one label, matching the size measure).

Clause groups: "syntax", "semantics" (with subgroups "semantics.names" for
name-label semantics and "semantics.namehood" for the l[i] definitions),
"fitting", "cardinality", "template".
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass, field

from .concepts import (And, Bot, Concept, Exists, Forall, Name, Not, Or,
                       O_ALL, OperatorSet, Signature, Top)
from .data import Interpretation, Sample, TypeTable

__all__ = [
    "EncodingError", "Cnf", "VarMap",
    "encode_syntax", "encode_semantics_base", "encode_semantics_typed",
    "encode_fitting", "encode_coverage_at_least", "encode_templates",
    "decode_model", "pattern_bans_active", "count_topologies",
]

Label = tuple  # ("top",) ("bot",) ("name", A) ("not",) ("and",) ("or",)
               # ("exists", r) ("forall", r)

_ARITY = {"top": 0, "bot": 0, "name": 0, "not": 1, "exists": 1, "forall": 1,
          "and": 2, "or": 2}


class EncodingError(RuntimeError):
    """Internal inconsistency: bad model shape or misused variable map."""


class Cnf:
    """Clause store: flat literal buffer with 0 terminators, plus group
    counts.  With store=False only the counts are kept (for clause
    arithmetic on encodings too large to hold).

    num_vars is declared by the encoding functions, not inferred per
    literal; hand-built instances should call declare_vars.
    """

    __slots__ = ("lits", "num_clauses", "num_vars", "groups", "store")

    def __init__(self, store: bool = True):
        self.lits = array("i")
        self.num_clauses = 0
        self.num_vars = 0
        self.groups: dict[str, int] = {}
        self.store = store

    def add(self, tag: str, lits) -> None:
        if not lits:
            raise EncodingError("empty clause")
        if self.store:
            self.lits.extend(lits)
            self.lits.append(0)
        self.num_clauses += 1
        self.groups[tag] = self.groups.get(tag, 0) + 1

    def declare_vars(self, n: int) -> None:
        if n > self.num_vars:
            self.num_vars = n

    def clauses(self):
        """Iterate clauses as lists of signed ints."""
        buf = self.lits
        start = 0
        for pos, lit in enumerate(buf):
            if lit == 0:
                yield list(buf[start:pos])
                start = pos + 1

    def group_total(self, prefix: str) -> int:
        dotted = prefix + "."
        return sum(n for tag, n in self.groups.items()
                   if tag == prefix or tag.startswith(dotted))

    def absorb(self, other: "Cnf") -> "Cnf":
        if self.store and not other.store:
            raise EncodingError("cannot absorb counted-only clauses")
        self.lits.extend(other.lits)
        self.num_clauses += other.num_clauses
        self.declare_vars(other.num_vars)
        for tag, n in other.groups.items():
            self.groups[tag] = self.groups.get(tag, 0) + n
        return self


@dataclass
class _CoverageState:
    literals: tuple[int, ...]
    svar: dict[tuple[int, int], int] = field(default_factory=dict)
    built_columns: int = 0
    asserted: set[int] = field(default_factory=set)


class VarMap:
    """Bijection between solver variable ids and tagged encoding variables."""

    def __init__(self, k: int, ops: OperatorSet, sigma: Signature):
        if k < 1:
            raise ValueError("size bound k must be at least 1")
        self.k = k
        self.ops = frozenset(ops)
        self.sigma = sigma
        labels: list[Label] = [("top",), ("bot",)]
        labels += [("name", a) for a in sorted(sigma.concept_names)]
        if "neg" in ops:
            labels.append(("not",))
        if "and" in ops:
            labels.append(("and",))
        if "or" in ops:
            labels.append(("or",))
        if "exists" in ops:
            labels += [("exists", r) for r in sorted(sigma.role_names)]
        if "forall" in ops:
            labels += [("forall", r) for r in sorted(sigma.role_names)]
        self.labels: tuple[Label, ...] = tuple(labels)
        self._label_pos = {lab: p for p, lab in enumerate(labels)}

        self._next = 1
        self._tags: list[tuple] = [()]  # index 0 unused
        self._x = [[self._alloc(("x", i, lab)) for lab in labels]
                   for i in range(1, k + 1)]
        self._y1 = {(i, j): self._alloc(("y1", i, j))
                    for i in range(1, k + 1) for j in range(i + 1, k + 1)}
        self._y2 = {(i, j): self._alloc(("y2", i, j))
                    for i in range(1, k + 1) for j in range(i + 1, k)}
        self.interp: Interpretation | None = None
        self._z: list[list[int]] = []
        self._xt: list[list[int]] = []
        self._ell: list[int] = []
        self._types: TypeTable | None = None
        self._coverage: _CoverageState | None = None
        self._selectors: list[int] = []
        self._topologies: list[tuple[int, ...]] = []

    def _alloc(self, tag: tuple) -> int:
        var = self._next
        self._next += 1
        self._tags.append(tag)
        return var

    @property
    def num_vars(self) -> int:
        return self._next - 1

    # -- variable lookups ---------------------------------------------------

    def x(self, i: int, label: Label) -> int:
        pos = self._label_pos.get(label)
        if pos is None:
            raise EncodingError(f"label {label!r} not in alphabet")
        return self._x[i - 1][pos]

    def y1(self, i: int, j: int) -> int:
        return self._y1[(i, j)]

    def y2(self, i: int, j: int) -> int:
        return self._y2[(i, j)]

    def bind(self, interp: Interpretation) -> None:
        """Attach the interpretation and allocate the z block (first call)."""
        if self.interp is not None:
            if self.interp is not interp and self.interp != interp:
                raise EncodingError("variable map already bound to a "
                                    "different interpretation")
            return
        self.interp = interp
        n = len(interp.domain)
        self._z = [[self._alloc(("z", i, interp.domain[e]))
                    for e in range(n)]
                   for i in range(1, self.k + 1)]

    def z(self, i: int, element: str) -> int:
        if self.interp is None:
            raise EncodingError("no interpretation bound")
        return self._z[i - 1][self.interp.index[element]]

    def z_row(self, i: int) -> list[int]:
        return self._z[i - 1]

    def ensure_typed(self, types: TypeTable) -> None:
        if self._types is not None:
            return
        self._types = types
        num = len(types.types)
        self._xt = [[self._alloc(("xt", i, t)) for t in range(num)]
                    for i in range(1, self.k + 1)]
        self._ell = [self._alloc(("l", i)) for i in range(1, self.k + 1)]

    def xt(self, i: int, type_index: int) -> int:
        return self._xt[i - 1][type_index]

    def ell(self, i: int) -> int:
        return self._ell[i - 1]

    # -- DIMACS commentary ---------------------------------------------------

    def describe(self, var: int) -> str:
        kind, *rest = self._tags[var]
        if kind == "x":
            i, lab = rest
            return f"x[{i},{'.'.join(str(p) for p in lab)}]"
        return f"{kind}[{','.join(str(p) for p in rest)}]"

    def comment_lines(self):
        for var in range(1, self._next):
            yield f"c {var} = {self.describe(var)}"


# ---------------------------------------------------------------------------
# syntax

def encode_syntax(k: int, ops: OperatorSet, sigma: Signature,
                  ) -> tuple[Cnf, VarMap]:
    """Well-formed exact-size-k syntax trees over the fragment's alphabet."""
    vm = VarMap(k, ops, sigma)
    cnf = Cnf()
    add = cnf.add
    SYN = "syntax"

    for i in range(1, k + 1):
        xi = vm._x[i - 1]
        add(SYN, xi)  # some label
        for p in range(len(xi)):
            for q in range(p + 1, len(xi)):
                add(SYN, (-xi[p], -xi[q]))

        y1_here = [vm._y1[(i, j)] for j in range(i + 1, k + 1)]
        y2_here = [vm._y2[(i, j)] for j in range(i + 1, k)]
        for pos, lab in enumerate(vm.labels):
            xv = xi[pos]
            arity = _ARITY[lab[0]]
            if arity == 0:
                for yv in y1_here:
                    add(SYN, (-xv, -yv))
                for yv in y2_here:
                    add(SYN, (-xv, -yv))
            elif arity == 1:
                add(SYN, [-xv] + y1_here)  # unit -xv when no slot remains
                for yv in y2_here:
                    add(SYN, (-xv, -yv))
            else:
                add(SYN, [-xv] + y2_here)
                for yv in y1_here:
                    add(SYN, (-xv, -yv))

        succ = y1_here + y2_here
        for p in range(len(succ)):
            for q in range(p + 1, len(succ)):
                add(SYN, (-succ[p], -succ[q]))

    # every node but the root has exactly one incoming edge slot
    for j in range(2, k + 1):
        parents = [vm._y1[(i, j)] for i in range(1, j)]
        if j < k:
            parents += [vm._y2[(i, j)] for i in range(1, j)]
        if j > 2:
            parents += [vm._y2[(i, j - 1)] for i in range(1, j - 1)]
        add(SYN, parents)
        for p in range(len(parents)):
            for q in range(p + 1, len(parents)):
                add(SYN, (-parents[p], -parents[q]))

    cnf.declare_vars(vm.num_vars)
    return cnf, vm


# ---------------------------------------------------------------------------
# semantics

def _non_name_semantics(cnf: Cnf, vm: VarMap, interp: Interpretation) -> None:
    """Semantics clauses for top/bot and all operator labels (shared by the
    base and typed encodings)."""
    add = cnf.add
    SEM = "semantics"
    k = vm.k
    n = len(interp.domain)
    dom = interp.domain

    succ_masks = {}  # (role) -> list of successor index tuples per element
    for lab in vm.labels:
        if lab[0] in ("exists", "forall") and lab[1] not in succ_masks:
            role = lab[1]
            succs = interp.successors(role)
            succ_masks[role] = [
                tuple(sorted(interp.index[b] for b in succs.get(dom[e], ())))
                for e in range(n)]

    for i in range(1, k + 1):
        zi = vm.z_row(i)
        xtop = vm.x(i, ("top",))
        xbot = vm.x(i, ("bot",))
        for e in range(n):
            add(SEM, (-xtop, zi[e]))
            add(SEM, (-xbot, -zi[e]))

        for lab in vm.labels:
            kind = lab[0]
            if kind in ("top", "bot", "name"):
                continue
            xv = vm.x(i, lab)
            if kind in ("and", "or"):
                for j in range(i + 1, k):
                    yv = vm.y2(i, j)
                    zj, zjj = vm.z_row(j), vm.z_row(j + 1)
                    if kind == "and":
                        for e in range(n):
                            add(SEM, (-xv, -yv, -zi[e], zj[e]))
                            add(SEM, (-xv, -yv, -zi[e], zjj[e]))
                            add(SEM, (-xv, -yv, zi[e], -zj[e], -zjj[e]))
                    else:
                        for e in range(n):
                            add(SEM, (-xv, -yv, zi[e], -zj[e]))
                            add(SEM, (-xv, -yv, zi[e], -zjj[e]))
                            add(SEM, (-xv, -yv, -zi[e], zj[e], zjj[e]))
                continue
            for j in range(i + 1, k + 1):
                yv = vm.y1(i, j)
                zj = vm.z_row(j)
                if kind == "not":
                    for e in range(n):
                        add(SEM, (-xv, -yv, -zi[e], -zj[e]))
                        add(SEM, (-xv, -yv, zi[e], zj[e]))
                elif kind == "exists":
                    rows = succ_masks[lab[1]]
                    for e in range(n):
                        targets = rows[e]
                        if not targets:
                            add(SEM, (-xv, -yv, -zi[e]))
                            continue
                        add(SEM, [-xv, -yv, -zi[e]] + [zj[b] for b in targets])
                        for b in targets:
                            add(SEM, (-xv, -yv, -zj[b], zi[e]))
                else:  # forall
                    rows = succ_masks[lab[1]]
                    for e in range(n):
                        targets = rows[e]
                        if not targets:
                            add(SEM, (-xv, -yv, zi[e]))
                            continue
                        add(SEM, [-xv, -yv, zi[e]] + [-zj[b] for b in targets])
                        for b in targets:
                            add(SEM, (-xv, -yv, -zi[e], zj[b]))


def encode_semantics_base(k: int, interp: Interpretation, vm: VarMap,
                          count_only: bool = False) -> Cnf:
    """Per-element name semantics: one clause per (node, name, element)."""
    if vm.k != k:
        raise EncodingError("variable map built for a different size bound")
    vm.bind(interp)
    cnf = Cnf(store=not count_only)
    add = cnf.add
    NAMES = "semantics.names"
    n = len(interp.domain)
    name_labels = [lab for lab in vm.labels if lab[0] == "name"]
    in_ext = {lab: [False] * n for lab in name_labels}
    for lab in name_labels:
        row = in_ext[lab]
        for a in interp.concept_ext.get(lab[1], ()):
            row[interp.index[a]] = True
    for i in range(1, k + 1):
        zi = vm.z_row(i)
        for lab in name_labels:
            xv = vm.x(i, lab)
            row = in_ext[lab]
            for e in range(n):
                add(NAMES, (-xv, zi[e]) if row[e] else (-xv, -zi[e]))
    _non_name_semantics(cnf, vm, interp)
    cnf.declare_vars(vm.num_vars)
    return cnf


def encode_semantics_typed(k: int, interp: Interpretation, vm: VarMap,
                           types: TypeTable, count_only: bool = False) -> Cnf:
    """Name semantics through element types: k*|T|*|names| label-to-type
    clauses plus 2*k*|domain| type-row clauses."""
    if vm.k != k:
        raise EncodingError("variable map built for a different size bound")
    if set(types.type_of) != interp.domain_set:
        raise EncodingError("type table does not cover the interpretation")
    vm.bind(interp)
    vm.ensure_typed(types)
    cnf = Cnf(store=not count_only)
    add = cnf.add
    NAMES = "semantics.names"
    NAMEHOOD = "semantics.namehood"
    n = len(interp.domain)
    name_labels = [lab for lab in vm.labels if lab[0] == "name"]
    type_of = [types.type_of[a] for a in interp.domain]

    for i in range(1, k + 1):
        xts = vm._xt[i - 1]
        for t, members in enumerate(types.types):
            xtv = xts[t]
            for lab in name_labels:
                xv = vm.x(i, lab)
                add(NAMES, (-xv, xtv) if lab[1] in members else (-xv, -xtv))
        zi = vm.z_row(i)
        lv = vm.ell(i)
        for e in range(n):
            xtv = xts[type_of[e]]
            add(NAMES, (-xtv, zi[e]))
            add(NAMES, (xtv, -zi[e], -lv))
        # l[i] <-> node i carries some concept name
        name_vars = [vm.x(i, lab) for lab in name_labels]
        add(NAMEHOOD, [-lv] + name_vars)
        for xv in name_vars:
            add(NAMEHOOD, (-xv, lv))
    _non_name_semantics(cnf, vm, interp)
    cnf.declare_vars(vm.num_vars)
    return cnf


# ---------------------------------------------------------------------------
# fitting and coverage

def _example_literals(sample: Sample, vm: VarMap) -> list[int]:
    if vm.interp is None or vm.interp != sample.interp:
        raise EncodingError("fitting requires the sample's interpretation "
                            "to be the bound one")
    return ([vm.z(1, a) for a in sample.positives]
            + [-vm.z(1, b) for b in sample.negatives])


def encode_fitting(sample: Sample, vm: VarMap) -> Cnf:
    """Unit clauses: root satisfied at positives, violated at negatives."""
    cnf = Cnf()
    for lit in _example_literals(sample, vm):
        cnf.add("fitting", (lit,))
    cnf.declare_vars(vm.num_vars)
    return cnf


def encode_coverage_at_least(sample: Sample, m: int, vm: VarMap) -> Cnf:
    """At least m example literals hold, via a sequential counter.

    The counter columns are built lazily and cached on the variable map, so
    raising m within one solver session only adds new clauses (column m plus
    one unit) — never retracts anything.
    """
    cnf = Cnf()
    add = cnf.add
    CARD = "cardinality"
    state = vm._coverage
    if state is None:
        state = vm._coverage = _CoverageState(
            tuple(_example_literals(sample, vm)))
    lits = state.literals
    q = len(lits)
    if not 1 <= m <= q:
        raise ValueError(f"coverage target {m} outside 1..{q}")
    svar = state.svar
    for col in range(state.built_columns + 1, m + 1):
        for i in range(col, q + 1):
            sv = svar[(i, col)] = vm._alloc(("s", i, col))
            below = svar.get((i - 1, col))
            if below is None:
                add(CARD, (-sv, lits[i - 1]))
            else:
                add(CARD, (-sv, below, lits[i - 1]))
            if col > 1:
                diag = svar[(i - 1, col - 1)]
                if below is None:
                    add(CARD, (-sv, diag))
                else:
                    add(CARD, (-sv, below, diag))
    state.built_columns = max(state.built_columns, m)
    if m not in state.asserted:
        add(CARD, (svar[(q, m)],))
        state.asserted.add(m)
    cnf.declare_vars(vm.num_vars)
    return cnf


# ---------------------------------------------------------------------------
# templates and pattern bans

def pattern_bans_active(ops: OperatorSet, sigma: Signature) -> bool:
    """Bans are proven satisfiability-preserving only for the full operator
    set over data with at least one role name (every banned pattern then has
    an equal-size rewrite); anywhere else they could cut off a size class."""
    return ops == O_ALL and bool(sigma.role_names)


def _arity_menu(ops: OperatorSet, sigma: Signature) -> tuple[int, ...]:
    menu = [0]
    if "neg" in ops or (sigma.role_names and ops & {"exists", "forall"}):
        menu.append(1)
    if ops & {"and", "or"}:
        menu.append(2)
    return tuple(menu)

def _sequences(length: int, k: int, menu: tuple[int, ...], exact: bool,
               ) -> list[tuple[int, ...]]:
    """Level-order arity sequences (a_1..a_length) of k-node trees.

    Writing s_i = 1 + a_1 + ... + a_i for the number of nodes allocated
    after assigning children to nodes 1..i, a sequence is consistent iff
    s_i >= i+1 for i < k (node i+1 must exist before its turn) and s_i <= k.
    With exact=True additionally s_length = k: the sequence describes the
    whole tree.  Otherwise it describes the first `length` nodes of some
    larger tree.
    """
    out: list[tuple[int, ...]] = []
    seq: list[int] = []
    grow = max(menu)

    def rec(i: int, s: int) -> None:
        if i > length:
            if not exact or s == k:
                out.append(tuple(seq))
            return
        for a in menu:
            s2 = s + a
            if s2 > k:
                continue
            if i < k and s2 < i + 1:
                continue
            if exact and s2 + grow * (length - i) < k:
                continue
            seq.append(a)
            rec(i + 1, s2)
            seq.pop()

    rec(1, 1)
    return out


def count_topologies(k: int, menu: tuple[int, ...] = (0, 1, 2)) -> int:
    return len(_sequences(k, k, menu, exact=True))


def encode_templates(k: int, vm: VarMap, threshold: int = 10,
                     max_selectors: int = 5000,
                     bans: bool | None = None) -> Cnf:
    """Restrict trees to canonical level-order numberings, one selector per
    topology (or per topology prefix when k exceeds the threshold), and ban
    locally rewritable syntax patterns where that is satisfiability-safe."""
    if threshold < 1:
        raise ValueError("threshold must be at least 1")
    cnf = Cnf()
    add = cnf.add
    TMP = "template"
    menu = _arity_menu(vm.ops, vm.sigma)

    exact = k <= threshold
    length = k if exact else threshold
    seqs = _sequences(length, k, menu, exact=exact)
    # zero topologies means the arity menu cannot build k nodes at all; the
    # syntax clauses are already unsatisfiable then, so add nothing
    if seqs and len(seqs) <= max_selectors:
        vm._topologies = seqs
        selectors = [vm._alloc(("sel", t)) for t in range(len(seqs))]
        vm._selectors = selectors
        for sel, seq in zip(selectors, seqs):
            allocated = 1
            for i, a in enumerate(seq, start=1):
                if a == 1:
                    add(TMP, (-sel, vm.y1(i, allocated + 1)))
                elif a == 2:
                    add(TMP, (-sel, vm.y2(i, allocated + 1)))
                allocated += a
        add(TMP, selectors)

    if bans is None:
        bans = pattern_bans_active(vm.ops, vm.sigma)
    if bans:
        xof = vm.x
        for (i, j), yv in vm._y2.items():
            # y2 implies a binary label at i, so the constant ban needs no x
            for child in (j, j + 1):
                add(TMP, (-yv, -xof(child, ("top",))))
                add(TMP, (-yv, -xof(child, ("bot",))))
            for lab in (("and",), ("or",)):
                add(TMP, (-xof(i, lab), -yv, -xof(j, lab), -xof(j + 1, lab)))
        for (i, j), yv in vm._y1.items():
            # y1 parents are negation or quantifier nodes; a negation child
            # is always rewritable there
            add(TMP, (-yv, -xof(j, ("not",))))
    cnf.declare_vars(vm.num_vars)
    return cnf


# ---------------------------------------------------------------------------
# decoding

def decode_model(model, vm: VarMap) -> Concept:
    """Rebuild the concept from the x / y1 / y2 assignment of a model.

    `model` is indexable by variable id (index 0 unused) with truthy values
    for true variables.
    """
    k = vm.k
    node_label: list[Label] = []
    for i in range(1, k + 1):
        chosen = [lab for lab in vm.labels if model[vm.x(i, lab)]]
        if len(chosen) != 1:
            raise EncodingError(
                f"node {i} carries {len(chosen)} labels; expected exactly 1")
        node_label.append(chosen[0])

    seen: set[int] = set()

    def build(i: int) -> Concept:
        if i in seen:
            raise EncodingError(f"node {i} reached twice")
        seen.add(i)
        lab = node_label[i - 1]
        kind = lab[0]
        if kind == "top":
            return Top()
        if kind == "bot":
            return Bot()
        if kind == "name":
            return Name(lab[1])
        if kind in ("not", "exists", "forall"):
            kids = [j for j in range(i + 1, k + 1) if model[vm.y1(i, j)]]
            if len(kids) != 1:
                raise EncodingError(f"unary node {i} has {len(kids)} children")
            child = build(kids[0])
            if kind == "not":
                return Not(child)
            ctor = Exists if kind == "exists" else Forall
            return ctor(lab[1], child)
        kids = [j for j in range(i + 1, k) if model[vm.y2(i, j)]]
        if len(kids) != 1:
            raise EncodingError(f"binary node {i} has {len(kids)} child pairs")
        j = kids[0]
        left, right = build(j), build(j + 1)
        return And(left, right) if kind == "and" else Or(left, right)

    concept = build(1)
    if len(seen) != k:
        raise EncodingError(f"model tree uses {len(seen)} of {k} nodes")
    return concept
