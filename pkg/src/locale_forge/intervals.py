"""Builtin symbolic generator domains and the two circle derivations.

* ``interval-R``: rational open intervals OI(p,q), p in Q u {-inf},
  q in Q u {+inf}; a meet-semilattice under intersection with all empty
  intervals collapsed to one canonical bottom OI().
* ``interval-01``: complements CC(p,q) of closed rational subintervals of
  [0,1]; a join-semilattice under CC(p,q) v CC(p',q') = CC(p v p', q ^ q')
  with bottom CC(0,1).  Pairs with p > q are kept as formal generators
  (they are forced to 1 by a relation, not by the domain).
* ``nat-reverse``: the opens of N under the reverse order topology, in the
  three-constructor normal form N() < N(<=0) < N(<=1) < ... < N(all).

The circle is derived twice: as an open quotient of the reals by the shift
action, and as a proper quotient of [0,1] gluing the endpoints.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .generators import DOMAIN_REGISTRY, DomainError, GeneratorDomain
from .lattice import OperatorReport, QuotientMode
from .presentation import (
    Presentation,
    PresentationKind,
    Relation,
    RelationSchema,
)
from .rationals import NEG_INF, POS_INF, ExtRat, emax, emin, parse_extrat, rat
from .terms import (
    Cond,
    EAtom,
    EExpr,
    EOp,
    FamilyJoin,
    GenPattern,
    Meet,
    SchemaClause,
    SchemaTerm,
    Term,
    TermError,
    TERM_ONE,
    TERM_ZERO,
    cmp_cond,
    econst,
    eparam,
    gen_term,
)
from .transform import (
    QuotientSpec,
    SchematicCase,
    TransformedPresentation,
    present_open,
    present_proper,
)


def _sortable(x: ExtRat):
    return (x.sign, x.value)


# ---------------------------------------------------------------------------
# endpoint expression simplification


def _expr_range(e: EExpr, lo: ExtRat, hi: ExtRat) -> tuple[ExtRat, ExtRat]:
    if isinstance(e, EOp):
        l1, h1 = _expr_range(e.left, lo, hi)
        l2, h2 = _expr_range(e.right, lo, hi)
        if e.op == "max":
            return emax(l1, l2), emax(h1, h2)
        return emin(l1, l2), emin(h1, h2)
    if e.with_index:
        return NEG_INF, POS_INF
    if e.param is None:
        v = e.const + e.offset
        return v, v
    if e.offset:
        return NEG_INF, POS_INF
    return lo, hi


def _simplify_expr(e: EExpr, lo: ExtRat, hi: ExtRat) -> EExpr:
    """Prune max/min branches that the parameter range makes redundant."""
    if not isinstance(e, EOp):
        if e.param is None and e.offset and not e.with_index:
            return EAtom(None, e.const + e.offset)
        return e
    a = _simplify_expr(e.left, lo, hi)
    b = _simplify_expr(e.right, lo, hi)
    la, ha = _expr_range(a, lo, hi)
    lb, hb = _expr_range(b, lo, hi)
    if e.op == "max":
        if ha <= lb:
            return b
        if hb <= la:
            return a
    else:
        if ha <= lb:
            return a
        if hb <= la:
            return b
    return EOp(e.op, a, b)


# ---------------------------------------------------------------------------
# interval-R


class OpenIntervalDomain(GeneratorDomain):
    """Rational open intervals under intersection."""

    name = "interval-R"
    finite = False
    has_meet = True
    has_join = False
    pattern_params = ("p", "q")
    ctor = "OI"

    BOTTOM = "OI()"

    def key(self, lo: ExtRat, hi: ExtRat) -> str:
        if not lo < hi:
            return self.BOTTOM
        return f"OI({lo},{hi})"

    def key_endpoints(self, key: str) -> Optional[tuple[ExtRat, ExtRat]]:
        if key == self.BOTTOM:
            return None
        m = re.fullmatch(r"OI\(([^,]+),([^,)]+)\)", key)
        if not m:
            raise TermError(f"not an interval generator: {key!r}")
        return parse_extrat(m.group(1)), parse_extrat(m.group(2))

    def contains(self, key: str) -> bool:
        if key == self.BOTTOM:
            return True
        try:
            lo, hi = self.key_endpoints(key)
        except (TermError, ValueError):
            return False
        return lo < hi

    def leq(self, a: str, b: str) -> bool:
        if a == self.BOTTOM:
            return True
        if b == self.BOTTOM:
            return False
        (la, ha), (lb, hb) = self.key_endpoints(a), self.key_endpoints(b)
        return lb <= la and ha <= hb

    def meet(self, a: str, b: str) -> str:
        if a == self.BOTTOM or b == self.BOTTOM:
            return self.BOTTOM
        (la, ha), (lb, hb) = self.key_endpoints(a), self.key_endpoints(b)
        return self.key(emax(la, lb), emin(ha, hb))

    def top(self) -> Optional[str]:
        return "OI(-inf,+inf)"

    def bottom(self) -> Optional[str]:
        return self.BOTTOM

    def sort_key(self, key: str):
        if key == self.BOTTOM:
            return (0, (0, 0), (0, 0))
        lo, hi = self.key_endpoints(key)
        return (1, _sortable(lo), _sortable(hi))

    def enumerate_gens(self, limit: Optional[int] = None) -> list[str]:
        limit = limit or 24
        points = [NEG_INF] + [rat(Fraction(n, 2)) for n in range(-4, 5)] + [POS_INF]
        out = [self.BOTTOM]
        for lo, hi in itertools.combinations(points, 2):
            out.append(self.key(lo, hi))
            if len(out) >= limit:
                break
        return out[:limit]

    def generic_pattern(self) -> GenPattern:
        return GenPattern("OI", (eparam("p"), eparam("q")))

    def instantiate_pattern(self, pat: GenPattern, env, n: Optional[int] = None) -> str:
        if pat.tags or pat.ctor != "OI" or len(pat.args) != 2:
            raise TermError(f"not an interval pattern: {pat}")
        lo = pat.args[0].evaluate(env, n)
        hi = pat.args[1].evaluate(env, n)
        return self.key(lo, hi)

    def meet_patterns(self, a: GenPattern, b: GenPattern) -> GenPattern:
        lo = _simplify_expr(EOp("max", a.args[0], b.args[0]), NEG_INF, POS_INF)
        hi = _simplify_expr(EOp("min", a.args[1], b.args[1]), NEG_INF, POS_INF)
        return GenPattern("OI", (lo, hi))

    def grid_values(self, grid: Sequence[ExtRat]) -> list[ExtRat]:
        vals = {rat(v) if not isinstance(v, ExtRat) else v for v in grid}
        vals |= {NEG_INF, POS_INF}
        return sorted(vals, key=_sortable)

    def descriptor(self) -> dict:
        return {"type": "interval-R"}


# ---------------------------------------------------------------------------
# interval-01


class ClosedComplementDomain(GeneratorDomain):
    """Complements of closed rational subintervals of [0,1]."""

    name = "interval-01"
    finite = False
    has_meet = False
    has_join = True
    pattern_params = ("p", "q")
    ctor = "CC"

    def key(self, p: ExtRat, q: ExtRat) -> str:
        return f"CC({p},{q})"

    def key_endpoints(self, key: str) -> tuple[ExtRat, ExtRat]:
        m = re.fullmatch(r"CC\(([^,]+),([^,)]+)\)", key)
        if not m:
            raise TermError(f"not a closed-complement generator: {key!r}")
        return parse_extrat(m.group(1)), parse_extrat(m.group(2))

    @staticmethod
    def _in_range(x: ExtRat) -> bool:
        return x.finite and 0 <= x.value <= 1

    def contains(self, key: str) -> bool:
        try:
            p, q = self.key_endpoints(key)
        except (TermError, ValueError):
            return False
        return self._in_range(p) and self._in_range(q)

    def join(self, a: str, b: str) -> str:
        (pa, qa), (pb, qb) = self.key_endpoints(a), self.key_endpoints(b)
        return self.key(emax(pa, pb), emin(qa, qb))

    def leq(self, a: str, b: str) -> bool:
        return self.join(a, b) == b

    def top(self) -> Optional[str]:
        return "CC(1,0)"

    def bottom(self) -> Optional[str]:
        return "CC(0,1)"

    def sort_key(self, key: str):
        p, q = self.key_endpoints(key)
        return (_sortable(p), _sortable(q))

    def enumerate_gens(self, limit: Optional[int] = None) -> list[str]:
        limit = limit or 25
        pts = [rat(Fraction(n, 4)) for n in range(5)]
        out = [self.key(p, q) for p in pts for q in pts]
        return out[:limit]

    def generic_pattern(self) -> GenPattern:
        return GenPattern("CC", (eparam("p"), eparam("q")))

    def instantiate_pattern(self, pat: GenPattern, env, n: Optional[int] = None) -> str:
        if pat.tags or pat.ctor != "CC" or len(pat.args) != 2:
            raise TermError(f"not a closed-complement pattern: {pat}")
        p = pat.args[0].evaluate(env, n)
        q = pat.args[1].evaluate(env, n)
        if not (self._in_range(p) and self._in_range(q)):
            raise TermError(f"endpoints {p},{q} outside [0,1]")
        return self.key(p, q)

    def join_patterns(self, a: GenPattern, b: GenPattern) -> GenPattern:
        zero, one = rat(0), rat(1)
        p = _simplify_expr(EOp("max", a.args[0], b.args[0]), zero, one)
        q = _simplify_expr(EOp("min", a.args[1], b.args[1]), zero, one)
        return GenPattern("CC", (p, q))

    def grid_values(self, grid: Sequence[ExtRat]) -> list[ExtRat]:
        vals = {rat(v) if not isinstance(v, ExtRat) else v for v in grid}
        vals |= {rat(0), rat(1)}
        for v in vals:
            if not self._in_range(v):
                raise DomainError(f"interval-01 grid value {v} outside [0,1]")
        return sorted(vals, key=_sortable)

    def descriptor(self) -> dict:
        return {"type": "interval-01"}


# ---------------------------------------------------------------------------
# nat-reverse


class NatReverseDomain(GeneratorDomain):
    """Downsets of N in three-constructor normal form: every open of the
    reverse order topology is empty, a finite initial segment, or all."""

    name = "nat-reverse"
    finite = False
    has_meet = True
    has_join = True

    EMPTY = "N()"
    ALL = "N(all)"

    @staticmethod
    def down_to(k: int) -> str:
        return f"N(<={k})"

    def _rank(self, key: str):
        if key == self.EMPTY:
            return (-1,)
        if key == self.ALL:
            return (float("inf"),)
        m = re.fullmatch(r"N\(<=(\d+)\)", key)
        if not m:
            raise TermError(f"not a nat-reverse generator: {key!r}")
        return (int(m.group(1)),)

    def contains(self, key: str) -> bool:
        try:
            self._rank(key)
            return True
        except TermError:
            return False

    def leq(self, a: str, b: str) -> bool:
        return self._rank(a) <= self._rank(b)

    def meet(self, a: str, b: str) -> str:
        return a if self.leq(a, b) else b

    def join(self, a: str, b: str) -> str:
        return b if self.leq(a, b) else a

    def top(self) -> Optional[str]:
        return self.ALL

    def bottom(self) -> Optional[str]:
        return self.EMPTY

    def sort_key(self, key: str):
        return self._rank(key)

    def enumerate_gens(self, limit: Optional[int] = None) -> list[str]:
        limit = limit or 8
        return [self.EMPTY] + [self.down_to(k) for k in range(max(0, limit - 2))] + [self.ALL]

    def descriptor(self) -> dict:
        return {"type": "nat-reverse"}


DOMAIN_REGISTRY["interval-R"] = OpenIntervalDomain
DOMAIN_REGISTRY["interval-01"] = ClosedComplementDomain
DOMAIN_REGISTRY["nat-reverse"] = NatReverseDomain


# ---------------------------------------------------------------------------
# the real line and its circle quotient (open route)


def real_presentation() -> Presentation:
    """The frame of reals over interval generators, in meet-stable form:
    the top interval is the unit, bounded joins of overlapping intervals
    concatenate, and every interval is the join of its strict
    subintervals.  Empty intervals are the domain bottom, so no separate
    collapse relation is emitted."""
    dom = OpenIntervalDomain()
    p, q, p2, q2 = eparam("p"), eparam("q"), eparam("p'"), eparam("q'")
    oi = lambda a, b: GenPattern("OI", (a, b))
    top_rel = Relation(gen_term("OI(-inf,+inf)"), TERM_ONE)
    join_rule = RelationSchema(
        ("p", "q", "p'", "q'"),
        (cmp_cond(p, "<=", p2), cmp_cond(p2, "<", q), cmp_cond(q, "<=", q2)),
        SchemaTerm((SchemaClause((oi(p, q),)), SchemaClause((oi(p2, q2),)))),
        SchemaTerm((SchemaClause((oi(p, q2),)),)),
    )
    refinement = RelationSchema(
        ("p", "q"),
        (),
        SchemaTerm((SchemaClause((oi(p, q),)),)),
        SchemaTerm(
            (
                SchemaClause(
                    (oi(p2, q2),),
                    bound=("p'", "q'"),
                    conds=(cmp_cond(p, "<", p2), cmp_cond(p2, "<", q2), cmp_cond(q2, "<", q)),
                ),
            )
        ),
    )
    return Presentation(PresentationKind.SUP, dom, (top_rel, join_rule, refinement))


def circle_open_spec() -> QuotientSpec:
    """The closure operator of the integer shift action, restricted to
    generators: OI(p,q) goes to the join over n of OI(p+n, q+n)."""
    dom = OpenIntervalDomain()
    body = GenPattern(
        "OI", (EAtom("p", with_index=True), EAtom("q", with_index=True))
    )
    case = SchematicCase(
        (), (), SchemaTerm((SchemaClause((body,), int_var="n"),))
    )
    return QuotientSpec(QuotientMode.OPEN, dom, (), (case,))


def circle_open_presentation() -> TransformedPresentation:
    """The circle as the open quotient of the reals by the shift action."""
    out = present_open(real_presentation(), circle_open_spec(), check=False)
    assert len(out.relations) == 4, "circle presentation should display four relation families"
    return out


def expand_family_meet(s: str, fam: FamilyJoin, domain: Optional[OpenIntervalDomain] = None) -> Term:
    """Materialise the meet of a concrete generator with a Z-indexed family.

    Bounded generators meet only finitely many shifts, returned as a plain
    join; unbounded generators keep a schematic family with the
    non-emptiness condition attached.
    """
    domain = domain or OpenIntervalDomain()
    if s == domain.BOTTOM:
        return TERM_ZERO
    lo, hi = domain.key_endpoints(s)
    s_pat = GenPattern("OI", (econst(lo), econst(hi)))
    meets = [domain.meet_patterns(s_pat, b) for b in fam.body]
    if not any(
        a.with_index for m in meets for arg in m.args for a in _atoms(arg)
    ):
        keys = [domain.instantiate_pattern(m, {}, None) for m in meets]
        keys = [k for k in keys if k != domain.BOTTOM]
        return Term(tuple(Meet((k,)) for k in sorted(set(keys))))
    consts = [
        a.const + a.offset
        for m in fam.body
        for arg in m.args
        for a in _atoms(arg)
        if a.param is None and (a.const + a.offset).finite
    ]
    if lo.finite and hi.finite:
        span_lo = min([lo.value] + [c.value for c in consts])
        span_hi = max([hi.value] + [c.value for c in consts])
        width = int(span_hi - span_lo) + 2
        keys = []
        for n in range(-width, width + 1):
            if not all(c.holds({}, n) for c in fam.conds):
                continue
            for m in meets:
                k = domain.instantiate_pattern(m, {}, n)
                if k != domain.BOTTOM:
                    keys.append(k)
        return Term(tuple(Meet((k,)) for k in sorted(set(keys), key=domain.sort_key)))
    conds = list(fam.conds)
    for m in meets:
        conds.append(cmp_cond(m.args[0], "<", m.args[1]))
    return Term((FamilyJoin(fam.var, tuple(meets), tuple(conds)),))


def _atoms(e: EExpr):
    if isinstance(e, EOp):
        yield from _atoms(e.left)
        yield from _atoms(e.right)
    else:
        yield e


# ---------------------------------------------------------------------------
# the unit interval and its circle quotient (proper route)


def unit_interval_presentation() -> Presentation:
    """The frame of [0,1] over closed-complement generators, in join-stable
    form: overlapping complements meet to the spanning one, complements of
    empty intervals are the unit, and every generator is the directed join
    of its strict approximations."""
    dom = ClosedComplementDomain()
    p, q, p2, q2 = eparam("p"), eparam("q"), eparam("p'"), eparam("q'")
    cc = lambda a, b: GenPattern("CC", (a, b))
    one = rat(1)
    zero = rat(0)
    bottom_rel = Relation(gen_term("CC(0,1)"), TERM_ZERO)
    meet_rule = RelationSchema(
        ("p", "q", "p'", "q'"),
        (cmp_cond(p, "<=", p2), cmp_cond(p2, "<=", q), cmp_cond(q, "<=", q2)),
        SchemaTerm((SchemaClause((cc(p, q), cc(p2, q2))),)),
        SchemaTerm((SchemaClause((cc(p, q2),)),)),
    )
    unit_rule = RelationSchema(
        ("p", "q"),
        (cmp_cond(p, ">", q),),
        SchemaTerm((SchemaClause((cc(p, q),)),)),
        SchemaTerm((SchemaClause(()),)),
    )
    approx_hi = RelationSchema(
        ("p", "q"),
        (cmp_cond(p, "<", econst(one)), cmp_cond(q, "<", econst(one))),
        SchemaTerm((SchemaClause((cc(p, q),)),)),
        SchemaTerm(
            (
                SchemaClause(
                    (cc(p, q2),),
                    bound=("q'",),
                    conds=(cmp_cond(q2, ">", q),),
                    directed=True,
                ),
            )
        ),
    )
    approx_lo = RelationSchema(
        ("p", "q"),
        (cmp_cond(p, ">", econst(zero)), cmp_cond(q, ">", econst(zero))),
        SchemaTerm((SchemaClause((cc(p, q),)),)),
        SchemaTerm(
            (
                SchemaClause(
                    (cc(p2, q),),
                    bound=("p'",),
                    conds=(cmp_cond(p2, "<", p),),
                    directed=True,
                ),
            )
        ),
    )
    return Presentation(
        PresentationKind.PREFRAME, dom, (bottom_rel, meet_rule, unit_rule, approx_hi, approx_lo)
    )


def _cc(p, q) -> GenPattern:
    to_expr = lambda x: x if isinstance(x, (EAtom, EOp)) else econst(rat(x))
    return GenPattern("CC", (to_expr(p), to_expr(q)))


def circle_proper_spec() -> QuotientSpec:
    """The interior operator of the endpoint gluing, by cases on where the
    complemented closed interval touches the boundary: intervals touching
    an endpoint absorb the opposite one."""
    dom = ClosedComplementDomain()
    p, q = eparam("p"), eparam("q")
    one, zero = rat(1), rat(0)
    cases = (
        SchematicCase(
            (),
            (cmp_cond(p, ">", econst(zero)), cmp_cond(q, "<", econst(one))),
            SchemaTerm((SchemaClause((_cc(p, q),)),)),
        ),
        SchematicCase(
            (("p", zero),),
            (cmp_cond(q, "<", econst(one)),),
            SchemaTerm((SchemaClause((_cc(zero, q), _cc(one, one))),)),
        ),
        SchematicCase(
            (("q", one),),
            (cmp_cond(p, ">", econst(zero)),),
            SchemaTerm((SchemaClause((_cc(p, one), _cc(zero, zero))),)),
        ),
        SchematicCase(
            (("p", zero), ("q", one)),
            (),
            SchemaTerm((SchemaClause((_cc(zero, one),)),)),
        ),
    )
    return QuotientSpec(QuotientMode.PROPER, dom, (), cases)


def _circle_proper_display_spec() -> QuotientSpec:
    """The case split re-cut to match the displayed relation list: the two
    endpoint cases are stated without their interior-side restriction
    (valid because the boundary instances hold as well), absorbing the
    doubly-degenerate case."""
    dom = ClosedComplementDomain()
    p, q = eparam("p"), eparam("q")
    one, zero = rat(1), rat(0)
    cases = (
        SchematicCase(
            (),
            (cmp_cond(p, ">", econst(zero)), cmp_cond(q, "<", econst(one))),
            SchemaTerm((SchemaClause((_cc(p, q),)),)),
        ),
        SchematicCase(
            (("p", zero),),
            (),
            SchemaTerm((SchemaClause((_cc(zero, q), _cc(one, one))),)),
        ),
        SchematicCase(
            (("q", one),),
            (),
            SchemaTerm((SchemaClause((_cc(p, one), _cc(zero, zero))),)),
        ),
    )
    return QuotientSpec(QuotientMode.PROPER, dom, (), cases)


def circle_proper_presentation(simplify: bool = False) -> TransformedPresentation:
    """The circle as the proper quotient of [0,1] gluing the endpoints.

    Raw mode shows the unit relation, the three pair-relation cases and
    the transported interval relations; simplify mode extends the interior
    pair case to everything except the two mixed boundary configurations
    and merges the residual endpoint cases into a single rule."""
    out = present_proper(unit_interval_presentation(), _circle_proper_display_spec(), check=False)
    assert len(out.relations) == 8
    if not simplify:
        return out
    rels = list(out.relations)
    p, q, p2, q2 = eparam("p"), eparam("q"), eparam("p'"), eparam("q'")
    zero, one = econst(rat(0)), econst(rat(1))
    box = lambda pat: pat.tagged("box")
    extended = RelationSchema(
        ("p", "q", "p'", "q'"),
        (
            Cond("pairneq", (p2, q), (zero, one)),
            Cond("pairneq", (p, q2), (zero, one)),
        ),
        rels[1].lhs,
        rels[1].rhs,
        "=",
    )
    merged = RelationSchema(
        ("q", "p'"),
        (),
        SchemaTerm((SchemaClause((box(_cc(rat(0), q)),)), SchemaClause((box(_cc(p2, rat(1))),)))),
        SchemaTerm(
            (
                SchemaClause(
                    (box(_cc(p2, q)), box(_cc(rat(0), rat(0))), box(_cc(rat(1), rat(1))))
                ),
            )
        ),
    )
    new_rels = (rels[0], extended, merged) + tuple(rels[4:])
    return TransformedPresentation(out.kind, out.domain, new_rels, out.provenance)


# ---------------------------------------------------------------------------
# the natural numbers counterexample


def successor_pullback(key: str) -> str:
    """Inverse image of an open under the successor map: initial segments
    shrink by one."""
    dom = NatReverseDomain()
    if key in (dom.EMPTY, dom.ALL):
        return key
    (k,) = dom._rank(key)
    return dom.EMPTY if k == 0 else dom.down_to(k - 1)


def point_map_right_adjoint(key: str) -> str:
    """Direct image under the unique map to the point, read on 2 = {0,1}:
    an open maps to 1 exactly when it is everything."""
    return "1" if key == NatReverseDomain.ALL else "0"


def nat_reverse_counterexample() -> OperatorReport:
    """Symbolic verification that gluing N along the successor map yields
    the terminal locale whose quotient map cannot be semi-proper.

    Checks, by case analysis on the three-constructor normal form:
    the coinserter carrier {u : u <= s*(u)} is exactly {N(), N(all)},
    and the right adjoint of the point map sends the directed family
    N(<=0) <= N(<=1) <= ... to 0 while sending its join N(all) to 1.
    """
    dom = NatReverseDomain()
    witnesses = []
    # successor pullback sanity on the sampled chain and symbolically at 0
    if successor_pullback(dom.down_to(0)) != dom.EMPTY:
        witnesses.append(("successor-pullback-at-0", (dom.down_to(0),)))
    for k in range(1, 64):
        if successor_pullback(dom.down_to(k)) != dom.down_to(k - 1):
            witnesses.append(("successor-pullback", (dom.down_to(k),)))
    # coinserter membership by constructor case
    members = []
    for key in (dom.EMPTY, dom.ALL):
        if dom.leq(key, successor_pullback(key)):
            members.append(key)
        else:
            witnesses.append(("coinserter-extremes", (key,)))
    # a segment N(<=k) never satisfies u <= s*(u): s*(u) = N(<=k-1) < u
    for k in range(0, 64):
        if dom.leq(dom.down_to(k), successor_pullback(dom.down_to(k))):
            witnesses.append(("coinserter-segment", (dom.down_to(k),)))
    # Scott-continuity failure of the point map's right adjoint
    family = [dom.down_to(k) for k in range(0, 64)]
    join_of_family = dom.ALL  # no segment bounds all of them
    images = {point_map_right_adjoint(u) for u in family}
    image_of_join = point_map_right_adjoint(join_of_family)
    scott_fails = images == {"0"} and image_of_join == "1"
    if not scott_fails:
        witnesses.append(("scott-continuity-should-fail", (dom.ALL,)))
    verdict = not witnesses and len(members) == 2
    notes = (
        "coinserter carrier: N() < N(all)  (size 2, the terminal locale)",
        "s*(N(<=k)) = N(<=k-1), s*(N(<=0)) = N()",
        "witness family: N(<=0) <= N(<=1) <= ... with join N(all); "
        "right adjoint sends every member to 0 but the join to 1",
    )
    if verdict:
        return OperatorReport(
            True,
            (("scott-continuity-failure", ("N(<=k), k in N", "N(all)")),),
            notes,
        )
    return OperatorReport(False, tuple(witnesses), notes)
