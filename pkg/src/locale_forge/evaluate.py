"""Brute-force evaluation of finite presentations.

``eval_frame`` builds the presented frame as the closed subsets of a
finite meet-semilattice of formal generator meets: relations become
covering rules ``a <| B`` (a is covered by the joins of B), the rules are
stabilised under meets with generators, and the carrier is the family of
downsets closed under all rules, i.e. the fixed points of the least
nucleus forcing the relations.  Joins are computed by re-closing unions.

``eval_suplattice`` / ``eval_preframe`` / ``eval_dcpo`` present the same
data in the corresponding weaker category: downsets / upsets / the
generator poset itself, quotiented by the least congruence containing the
relations.  ``verify_coverage`` then asserts the canonical comparison with
the frame evaluation is an order isomorphism.

Everything here is oracle-scale: carriers are capped (default 2**12) and
the algorithms favour being obviously exhaustive over being clever.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

from .generators import GeneratorDomain
from .lattice import (
    FiniteLattice,
    FinitePoset,
    LatticeError,
    OperatorReport,
    _bits,
    poset_isomorphism,
)
from .presentation import (
    Presentation,
    PresentationError,
    PresentationKind,
    Relation,
    instantiate_schemas,
)
from .rationals import ExtRat
from .terms import Meet, Term


class EvaluationError(PresentationError):
    pass


class KindCheckError(EvaluationError):
    def __init__(self, report):
        super().__init__("presentation failed its kind check")
        self.report = report


@dataclass
class PresentedObject:
    """A presentation evaluated in some category.

    ``carrier`` is a FiniteLattice except for dcpo results, which may be a
    bare FinitePoset.  ``interp`` maps generator keys to carrier indices.
    """

    category: str
    carrier: Union[FiniteLattice, FinitePoset]
    interp: dict[str, int]
    domain: GeneratorDomain = None  # type: ignore[assignment]
    _term_value: Optional[Callable[[Term], int]] = field(default=None, repr=False)
    _dcpo_order: Optional[tuple[tuple[int, ...], dict[str, int]]] = field(
        default=None, repr=False
    )

    @property
    def carrier_poset(self) -> FinitePoset:
        return self.carrier.poset if isinstance(self.carrier, FiniteLattice) else self.carrier

    def term_value(self, t: Term) -> int:
        if self._term_value is None:
            raise EvaluationError(f"term evaluation unsupported for {self.category}")
        return self._term_value(t)

    def relation_holds(self, rel: Relation) -> bool:
        if self.category == "dcpo":
            return self._dcpo_relation_holds(rel)
        l, r = self.term_value(rel.lhs), self.term_value(rel.rhs)
        if rel.op == "=":
            return l == r
        return self.carrier.leq(l, r)

    def _dcpo_relation_holds(self, rel: Relation) -> bool:
        reach, gen_idx = self._dcpo_order

        def side(t: Term) -> Optional[int]:
            idxs = []
            for cl in t.clauses:
                if not isinstance(cl, Meet) or len(cl.gens) > 1:
                    return None
                idxs.append(gen_idx[cl.gens[0]] if cl.gens else gen_idx["__top__"])
            if not t.clauses:
                return gen_idx.get("__bottom__")
            for m in idxs:
                if all((reach[a] >> m) & 1 for a in idxs):
                    return m
            return None

        l, r = side(rel.lhs), side(rel.rhs)
        if l is None or r is None:
            return False
        le = bool((reach[l] >> r) & 1)
        ge = bool((reach[r] >> l) & 1)
        return (le and ge) if rel.op == "=" else le


# ---------------------------------------------------------------------------
# the meet-semilattice of formal generator meets


class _MeetCarrier:
    """Either the generator domain itself (when its meets are semantic for
    the evaluation) or its completion by finitely generated upsets of the
    generator poset, whose unions are formal meets."""

    def __init__(self, domain: GeneratorDomain, use_domain_meets: bool):
        gens = sorted(domain.enumerate_gens(), key=domain.sort_key)
        self.gen_keys = gens
        g_n = len(gens)
        if use_domain_meets and domain.meet_semilattice:
            self.labels = list(gens)
            self.n = g_n
            self._direct = True
            self._domain = domain
            self._idx = {g: i for i, g in enumerate(gens)}
            self.gen_index = dict(self._idx)
            self.top = self._idx[domain.top()]
            self._meet_cache: dict[tuple[int, int], int] = {}
            return
        self._direct = False
        up = [0] * g_n
        for i, a in enumerate(gens):
            for j, b in enumerate(gens):
                if domain.leq(a, b):
                    up[i] |= 1 << j
        masks = {0}
        frontier = [0]
        while frontier:
            m = frontier.pop()
            for i in range(g_n):
                nm = m | up[i]
                if nm not in masks:
                    if len(masks) >= (1 << 15):
                        raise LatticeError(
                            "formal meet semilattice exceeds oracle scale"
                        )
                    masks.add(nm)
                    frontier.append(nm)
        ordered = sorted(masks, key=lambda m: (bin(m).count("1"), m))
        self._masks = ordered
        self._mask_idx = {m: i for i, m in enumerate(ordered)}
        self.n = len(ordered)
        self.top = self._mask_idx[0]
        self.gen_index = {g: self._mask_idx[up[i]] for i, g in enumerate(gens)}

        def label(mask: int) -> str:
            mins = [
                gens[i]
                for i in _bits(mask)
                if all(not ((up[j] >> i) & 1) or j == i for j in _bits(mask))
            ]
            if not mins:
                return "1"
            return "^".join(sorted(mins))

        self.labels = [label(m) for m in ordered]
        self._meet_cache = {}

    def meet(self, i: int, j: int) -> int:
        if i == j:
            return i
        key = (i, j) if i < j else (j, i)
        got = self._meet_cache.get(key)
        if got is None:
            if self._direct:
                got = self._idx[self._domain.meet(self.labels[i], self.labels[j])]
            else:
                got = self._mask_idx[self._masks[i] | self._masks[j]]
            self._meet_cache[key] = got
        return got

    def leq(self, i: int, j: int) -> bool:
        return self.meet(i, j) == i


# ---------------------------------------------------------------------------
# the covering engine


class _FrameEngine:
    def __init__(
        self,
        M: _MeetCarrier,
        covers: list[tuple[int, frozenset[int]]],
        meet_eqs: list[tuple[int, int]],
        max_carrier: int,
    ):
        self.max_carrier = max_carrier
        gen_idxs = sorted(set(M.gen_index.values()))

        # 1. meet-congruence pre-collapse (pure meet equations)
        parent = list(range(M.n))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        work = list(meet_eqs)
        while work:
            x, y = work.pop()
            rx, ry = find(x), find(y)
            if rx == ry:
                continue
            parent[max(rx, ry)] = min(rx, ry)
            for g in gen_idxs:
                work.append((M.meet(rx, g), M.meet(ry, g)))

        reps = sorted({find(i) for i in range(M.n)})
        self.rep_pos = {r: k for k, r in enumerate(reps)}
        self.n = len(reps)
        self.reps = reps
        self._M = M
        self._find = find
        self._meet_cache: dict[tuple[int, int], int] = {}
        self.gen_pos = sorted({self.pos(g) for g in gen_idxs})
        self.top = self.pos(M.top)

        # labels: smallest original label in the class
        by_class: dict[int, list[str]] = {}
        for i in range(M.n):
            by_class.setdefault(find(i), []).append(M.labels[i])
        self.labels = [min(by_class[r], key=lambda s: (len(s), s)) for r in reps]

        # 2. covers onto class representatives, B normalised below a
        base = []
        for a, B in covers:
            a2 = self.pos(self._find(a))
            B2 = frozenset(self.cmeet(self.pos(self._find(b)), a2) for b in B)
            if a2 in B2:
                continue
            base.append((a2, B2))

        # 3. closure of the cover set under meets with generators
        seen = set(base)
        queue = list(base)
        while queue:
            a, B = queue.pop()
            for g in self.gen_pos:
                a2 = self.cmeet(a, g)
                B2 = frozenset(self.cmeet(b, a2) for b in B)
                if a2 in B2:
                    continue
                inst = (a2, B2)
                if inst not in seen:
                    seen.add(inst)
                    queue.append(inst)
        self.instances = sorted(seen, key=lambda ab: (ab[0], sorted(ab[1])))

        # 4. downward closure masks on the class semilattice
        self.down = [0] * self.n
        for i in range(self.n):
            m = 0
            for j in range(self.n):
                if self.cmeet(i, j) == j:
                    m |= 1 << j
            self.down[i] = m

        # 5. trigger index for the closure operator
        self.by_elem: list[list[int]] = [[] for _ in range(self.n)]
        self.inst_bmask = []
        self.inst_a = []
        self.always = 0
        for k, (a, B) in enumerate(self.instances):
            bm = 0
            for b in B:
                bm |= 1 << b
            self.inst_bmask.append(bm)
            self.inst_a.append(a)
            if not B:
                self.always |= self.down[a]
            for b in B:
                self.by_elem[b].append(k)

    def pos(self, m_index: int) -> int:
        return self.rep_pos[self._find(m_index)]

    def cmeet(self, i: int, j: int) -> int:
        if i == j:
            return i
        key = (i, j) if i < j else (j, i)
        got = self._meet_cache.get(key)
        if got is None:
            got = self.pos(self._M.meet(self.reps[i], self.reps[j]))
            self._meet_cache[key] = got
        return got

    def close(self, mask: int) -> int:
        u = self.always
        for e in _bits(mask):
            u |= self.down[e]
        queue = list(_bits(u))
        fired = set()
        while queue:
            e = queue.pop()
            for k in self.by_elem[e]:
                if k in fired:
                    continue
                if self.inst_bmask[k] & ~u == 0:
                    fired.add(k)
                    add = self.down[self.inst_a[k]] & ~u
                    if add:
                        u |= add
                        queue.extend(_bits(add))
        return u

    def enumerate_carrier(self) -> list[int]:
        fixed = {self.close(0)}
        for i in range(self.n):
            fixed.add(self.close(1 << i))
        elements = sorted(fixed, key=lambda m: (bin(m).count("1"), m))
        k = 0
        while k < len(elements):
            cur = elements[k]
            for other in elements[: k + 1]:
                u = cur | other
                if u in fixed:
                    continue
                c = self.close(u)
                if c not in fixed:
                    fixed.add(c)
                    elements.append(c)
                    if len(fixed) > self.max_carrier:
                        raise LatticeError("presented frame exceeds oracle scale")
            k += 1
        return sorted(fixed, key=lambda m: (bin(m).count("1"), m))


def _structural_rules(p: Presentation, M: _MeetCarrier):
    """Covering rules that force the domain structure the kind declares."""
    domain = p.domain
    covers: list[tuple[int, frozenset[int]]] = []
    kind = p.kind
    force_joins = (
        kind in (PresentationKind.PREFRAME, PresentationKind.DCPO)
        or (kind == PresentationKind.PLAIN and domain.has_join)
    )
    if force_joins and domain.has_join:
        gens = M.gen_keys
        for a, b in itertools.combinations(gens, 2):
            j = domain.join(a, b)
            covers.append((M.gen_index[j], frozenset((M.gen_index[a], M.gen_index[b]))))
        bot = domain.bottom()
        if bot is not None:
            covers.append((M.gen_index[bot], frozenset()))
    return covers


def _relation_rules(p: Presentation, M: _MeetCarrier):
    covers: list[tuple[int, frozenset[int]]] = []
    meet_eqs: list[tuple[int, int]] = []

    def clause_elem(cl: Meet) -> int:
        acc = M.top
        for g in cl.gens:
            acc = M.meet(acc, M.gen_index[g])
        return acc

    for rel in p.concrete_relations():
        if rel.lhs.has_family() or rel.rhs.has_family():
            raise EvaluationError(
                "presentation has schematic content; instantiate on a grid first"
            )
        lhs = [clause_elem(c) for c in rel.lhs.clauses]
        rhs = [clause_elem(c) for c in rel.rhs.clauses]
        if rel.op == "=" and len(lhs) == 1 and len(rhs) == 1:
            meet_eqs.append((lhs[0], rhs[0]))
            continue
        for a in lhs:
            covers.append((a, frozenset(rhs)))
        if rel.op == "=":
            for b in rhs:
                covers.append((b, frozenset(lhs)))
    return covers, meet_eqs


_KIND_DOMAIN_ERRORS = {
    PresentationKind.SUP: ("meet_semilattice", "a meet-semilattice with top"),
    PresentationKind.PREFRAME: ("join_semilattice", "a join-semilattice with bottom"),
    PresentationKind.DCPO: ("distributive_lattice", "a bounded distributive lattice"),
}


def _require_kind_domain(p: Presentation):
    if not p.domain.finite:
        raise EvaluationError("evaluation needs a finite domain; instantiate first")
    need = _KIND_DOMAIN_ERRORS.get(p.kind)
    if need and not getattr(p.domain, need[0]):
        raise EvaluationError(f"{p.kind.value} evaluation needs {need[1]}")


def eval_frame(p: Presentation, max_carrier: int = 1 << 12) -> PresentedObject:
    """The presented frame: formal meets of generators, quotiented by the
    least nucleus forcing the relations and the kind's structure.

    Generator meets are semantic exactly when the domain declares meet
    structure; preframe generators only carry join structure, so their
    meets stay formal."""
    _require_kind_domain(p)
    use_meets = p.domain.meet_semilattice and p.kind is not PresentationKind.PREFRAME
    M = _MeetCarrier(p.domain, use_meets)
    covers, meet_eqs = _relation_rules(p, M)
    covers.extend(_structural_rules(p, M))
    eng = _FrameEngine(M, covers, meet_eqs, max_carrier)
    masks = eng.enumerate_carrier()
    index = {m: i for i, m in enumerate(masks)}

    def elem_label(mask: int) -> str:
        maxs = [
            e
            for e in _bits(mask)
            if all(not ((eng.down[f] >> e) & 1) or f == e for f in _bits(mask))
        ]
        if not maxs:
            return "0"
        return " | ".join(sorted(eng.labels[e] for e in maxs))

    labels = []
    taken: set[str] = set()
    for m in masks:
        lab = elem_label(m)
        while lab in taken:
            lab += "'"
        taken.add(lab)
        labels.append(lab)
    pairs = [
        (i, j)
        for i, mi in enumerate(masks)
        for j, mj in enumerate(masks)
        if mi & ~mj == 0
    ]
    carrier = FiniteLattice.from_poset(
        FinitePoset.from_pairs(labels, pairs), distributive_hint=True
    )
    if not carrier.frame:
        raise EvaluationError("presented carrier failed the frame check")

    def gen_value(g: str) -> int:
        return index[eng.close(1 << eng.pos(M.gen_index[g]))]

    interp = {g: gen_value(g) for g in M.gen_keys}

    def term_value(t: Term) -> int:
        u = 0
        for cl in t.clauses:
            if not isinstance(cl, Meet):
                raise EvaluationError("schematic clause reached the evaluator")
            acc = M.top
            for g in cl.gens:
                acc = M.meet(acc, M.gen_index[g])
            u |= 1 << eng.pos(acc)
        return index[eng.close(u)]

    obj = PresentedObject("frame", carrier, interp, p.domain, term_value)
    for rel in p.concrete_relations():
        if not obj.relation_holds(rel):
            raise EvaluationError(f"internal: relation {rel} fails in its own frame")
    return obj


# ---------------------------------------------------------------------------
# suplattice / preframe / dcpo evaluations


def _gen_poset(domain: GeneratorDomain) -> tuple[list[str], list[int]]:
    gens = sorted(domain.enumerate_gens(), key=domain.sort_key)
    n = len(gens)
    if n > 16:
        raise EvaluationError("generator poset exceeds oracle scale for this category")
    down = [0] * n
    for i, a in enumerate(gens):
        for j, b in enumerate(gens):
            if domain.leq(b, a):
                down[i] |= 1 << j
    return gens, down


def _all_closed(seed_masks: list[int], n: int) -> list[int]:
    """All unions of the seed masks (including the empty union)."""
    out = {0}
    for s in seed_masks:
        out |= {m | s for m in out}
    return sorted(out, key=lambda m: (bin(m).count("1"), m))


class _UnionFindQuotient:
    """Congruence closure on a family of subsets closed under union, where
    merging x ~ y forces (x u s) ~ (y u s) for every seed s."""

    def __init__(self, family: list[int], seeds: list[int]):
        self.family = family
        self.index = {m: i for i, m in enumerate(family)}
        self.parent = list(range(len(family)))
        self.seeds = seeds

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def merge_all(self, pairs: list[tuple[int, int]]):
        work = list(pairs)
        while work:
            x, y = work.pop()
            rx, ry = self.find(x), self.find(y)
            if rx == ry:
                continue
            self.parent[max(rx, ry)] = min(rx, ry)
            mx, my = self.family[rx], self.family[ry]
            for s in self.seeds:
                work.append((self.index[mx | s], self.index[my | s]))

    def class_unions(self) -> dict[int, int]:
        agg: dict[int, int] = {}
        for i, m in enumerate(self.family):
            r = self.find(i)
            agg[r] = agg.get(r, 0) | m
        return agg


def _quotient_object(
    category: str,
    family: list[int],
    uf: _UnionFindQuotient,
    gen_masks: dict[str, int],
    reverse_order: bool,
    label_of_mask,
) -> PresentedObject:
    cls = uf.class_unions()
    closure = {i: cls[uf.find(i)] for i in range(len(family))}
    fixed = sorted(set(closure.values()), key=lambda m: (bin(m).count("1"), m))
    pos = {m: i for i, m in enumerate(fixed)}

    def le(a: int, b: int) -> bool:
        return (a & ~b == 0) if not reverse_order else (b & ~a == 0)

    labels = []
    taken: set[str] = set()
    for m in fixed:
        lab = label_of_mask(m)
        while lab in taken:
            lab += "'"
        taken.add(lab)
        labels.append(lab)
    pairs = [
        (i, j) for i, mi in enumerate(fixed) for j, mj in enumerate(fixed) if le(mi, mj)
    ]
    carrier = FiniteLattice.from_poset(FinitePoset.from_pairs(labels, pairs))
    interp = {g: pos[closure[uf.index[m]]] for g, m in gen_masks.items()}

    def nu(mask: int) -> int:
        return pos[closure[uf.index[mask]]]

    return PresentedObject(category, carrier, interp, None, None), nu, pos, closure


def eval_suplattice(p: Presentation) -> PresentedObject:
    """Downsets of the generator poset modulo the least join-congruence
    containing the relations.  A bare poset of generators suffices."""
    if not p.domain.finite:
        raise EvaluationError("evaluation needs a finite domain; instantiate first")
    gens, down = _gen_poset(p.domain)
    gen_masks = {g: down[i] for i, g in enumerate(gens)}
    family = _all_closed(list(down), len(gens))
    if len(family) > (1 << 12):
        raise EvaluationError("free suplattice exceeds oracle scale")
    uf = _UnionFindQuotient(family, list(down))
    full = 0
    for m in down:
        full |= m

    def term_mask(t: Term) -> int:
        u = 0
        for cl in t.clauses:
            if not isinstance(cl, Meet):
                raise EvaluationError("schematic clause reached the evaluator")
            if not cl.gens:
                u |= full
            elif len(cl.gens) == 1:
                u |= gen_masks[cl.gens[0]]
            else:
                raise EvaluationError("suplattice evaluation needs joins of generators")
        return u

    pairs = []
    for rel in p.concrete_relations():
        l, r = term_mask(rel.lhs), term_mask(rel.rhs)
        if rel.op == "=":
            pairs.append((uf.index[l], uf.index[r]))
        else:
            pairs.append((uf.index[l | r], uf.index[r]))
    uf.merge_all(pairs)

    def label_of(mask: int) -> str:
        if not mask:
            return "0"
        maxs = [
            gens[i]
            for i in _bits(mask)
            if all(not ((down[j] >> i) & 1) or j == i for j in _bits(mask))
        ]
        return " | ".join(sorted(maxs))

    obj, nu, pos, closure = _quotient_object(
        "suplattice", family, uf, gen_masks, False, label_of
    )
    obj.domain = p.domain

    def term_value(t: Term) -> int:
        return nu(term_mask(t))

    obj._term_value = term_value
    return obj


def eval_preframe(p: Presentation) -> PresentedObject:
    """Upsets of the generator poset under reverse inclusion, modulo the
    least finite-meet congruence containing the relations."""
    if not p.domain.finite:
        raise EvaluationError("evaluation needs a finite domain; instantiate first")
    gens, down = _gen_poset(p.domain)
    n = len(gens)
    up = [0] * n
    for i in range(n):
        for j in _bits(down[i]):
            up[j] |= 1 << i
    gen_masks = {g: up[i] for i, g in enumerate(gens)}
    family = _all_closed(list(up), n)
    if len(family) > (1 << 12):
        raise EvaluationError("free preframe exceeds oracle scale")
    uf = _UnionFindQuotient(family, list(up))
    full = 0
    for m in up:
        full |= m

    def clause_mask(cl: Meet) -> int:
        u = 0
        for g in cl.gens:
            u |= gen_masks[g]
        return u  # empty meet = empty upset = top

    def term_mask(t: Term) -> int:
        if not t.clauses:
            return full  # bottom is the largest upset
        acc = None
        for cl in t.clauses:
            if not isinstance(cl, Meet):
                raise EvaluationError("schematic clause reached the evaluator")
            m = clause_mask(cl)
            acc = m if acc is None else (acc & m)
        return acc

    pairs = []
    for rel in p.concrete_relations():
        l, r = term_mask(rel.lhs), term_mask(rel.rhs)
        if rel.op == "=":
            pairs.append((uf.index[l], uf.index[r]))
        else:
            # l <= r in the reverse order means l contains r
            pairs.append((uf.index[l | r], uf.index[l]))
    uf.merge_all(pairs)

    def label_of(mask: int) -> str:
        if not mask:
            return "1"
        mins = [
            gens[i]
            for i in _bits(mask)
            if all(not ((up[j] >> i) & 1) or j == i for j in _bits(mask))
        ]
        return " & ".join(sorted(mins))

    obj, nu, pos, closure = _quotient_object(
        "preframe", family, uf, gen_masks, True, label_of
    )
    obj.domain = p.domain

    def term_value(t: Term) -> int:
        return nu(term_mask(t))

    obj._term_value = term_value
    return obj


def eval_dcpo(p: Presentation) -> PresentedObject:
    """The generator poset modulo the preorder collapse generated by the
    relations; each directed-join side is interpreted through its greatest
    element, recomputed as the preorder grows."""
    if not p.domain.finite:
        raise EvaluationError("evaluation needs a finite domain; instantiate first")
    gens, down = _gen_poset(p.domain)
    n = len(gens)
    gen_idx = {g: i for i, g in enumerate(gens)}
    reach = [0] * n
    for i in range(n):
        for j in _bits(down[i]):
            reach[j] |= 1 << i  # j <= i

    top = p.domain.top()
    bottom = p.domain.bottom()
    if top is not None:
        gen_idx["__top__"] = gen_idx[top]
    if bottom is not None:
        gen_idx["__bottom__"] = gen_idx[bottom]

    def transitive_close():
        changed = True
        while changed:
            changed = False
            for i in range(n):
                acc = reach[i]
                for j in _bits(reach[i]):
                    acc |= reach[j]
                if acc != reach[i]:
                    reach[i] = acc
                    changed = True

    def side(t: Term) -> Optional[list[int]]:
        out = []
        for cl in t.clauses:
            if not isinstance(cl, Meet):
                raise EvaluationError("schematic clause reached the evaluator")
            if not cl.gens:
                if top is None:
                    raise EvaluationError("term 1 needs a domain top in dcpo evaluation")
                out.append(gen_idx[top])
            elif len(cl.gens) == 1:
                out.append(gen_idx[cl.gens[0]])
            else:
                raise EvaluationError("dcpo evaluation needs directed joins of generators")
        if not out:
            if bottom is None:
                raise EvaluationError("term 0 needs a domain bottom in dcpo evaluation")
            out.append(gen_idx[bottom])
        return out

    def max_of(idxs: list[int]) -> Optional[int]:
        for m in idxs:
            if all((reach[a] >> m) & 1 for a in idxs):
                return m
        return None

    rels = [(side(r.lhs), side(r.rhs), r.op) for r in p.concrete_relations()]
    changed = True
    rounds = 0
    while changed:
        rounds += 1
        if rounds > 2 * n * max(1, len(rels)) + 4:
            raise EvaluationError("dcpo preorder saturation failed to stabilise")
        changed = False
        for lhs, rhs, op in rels:
            for a_side, b_side in ((lhs, rhs),) + (((rhs, lhs),) if op == "=" else ()):
                mb = max_of(b_side)
                if mb is None:
                    continue
                for a in a_side:
                    if not (reach[a] >> mb) & 1:
                        reach[a] |= 1 << mb
                        changed = True
        if changed:
            transitive_close()
    for lhs, rhs, op in rels:
        if max_of(rhs) is None or (op == "=" and max_of(lhs) is None):
            raise EvaluationError(
                "a directed-join side has no greatest element; the presentation "
                "is not interpretable at oracle scale"
            )

    classes: list[list[int]] = []
    assigned = {}
    for i in range(n):
        for k, cl in enumerate(classes):
            j = cl[0]
            if (reach[i] >> j) & 1 and (reach[j] >> i) & 1:
                assigned[i] = k
                cl.append(i)
                break
        else:
            assigned[i] = len(classes)
            classes.append([i])
    labels = [" ~ ".join(sorted(gens[i] for i in cl)) for cl in classes]
    pairs = [
        (assigned[i], assigned[j]) for i in range(n) for j in _bits(reach[i])
    ]
    poset = FinitePoset.from_pairs(labels, pairs)
    interp = {g: assigned[i] for g, i in gen_idx.items() if not g.startswith("__")}
    reach_q = [0] * len(classes)
    for i in range(n):
        for j in _bits(reach[i]):
            reach_q[assigned[i]] |= 1 << assigned[j]
    gi = {g: assigned[i] for g, i in gen_idx.items()}
    return PresentedObject("dcpo", poset, interp, p.domain, None, (tuple(reach_q), gi))


_EVALUATORS = {
    PresentationKind.SUP: eval_suplattice,
    PresentationKind.PREFRAME: eval_preframe,
    PresentationKind.DCPO: eval_dcpo,
}


def verify_coverage(
    p: Presentation,
    grid: Optional[Sequence[ExtRat]] = None,
    oracle: bool = True,
) -> OperatorReport:
    """Check that the frame evaluation and the kind's own evaluation are
    order isomorphic over an isomorphism matching generator images."""
    if p.kind == PresentationKind.PLAIN:
        raise PresentationError("coverage applies to sup/preframe/dcpo presentations")
    from .presentation import check_kind

    report = check_kind(p, grid=grid, oracle=oracle)
    if not report.ok:
        raise KindCheckError(report)
    if p.schematic:
        p = instantiate_schemas(p, grid)
    frame = eval_frame(p)
    other = _EVALUATORS[p.kind](p)
    pa, pb = frame.carrier_poset, other.carrier_poset
    pinned = [(frame.interp[g], other.interp[g]) for g in frame.interp]
    iso = poset_isomorphism(pa, pb, pinned)
    notes = (
        f"frame carrier {pa.n} elements",
        f"{other.category} carrier {pb.n} elements",
    )
    if iso is None:
        return OperatorReport(False, (("coverage-isomorphism", ()),), notes)
    return OperatorReport(True, (), notes)
