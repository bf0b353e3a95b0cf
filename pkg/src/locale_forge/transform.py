"""Presentation-to-presentation quotient transformers.

Given a presentation of a frame and the restriction of a quotient operator
to generators (a QuotientSpec), these emit the presentation of the
quotient frame over tagged generators: the original relations transported
verbatim, the unit relation(s), and one meet/join relation per generator
pair expanded through the chosen representations.  The six entry points
differ only in which relation family they emit and which side expands.

``derive_spec_from_coinserter`` goes the other way: it computes the
quotient operator of a coinserter or coequaliser of finite frame maps,
verifies its laws, and reads the operator back off the generators.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

from .evaluate import KindCheckError, PresentedObject
from .generators import GeneratorDomain, TaggedDomain
from .lattice import (
    MonotoneMap,
    OperatorLawError,
    QuotientMode,
    check_quotient_operator,
    compose,
    interior_from_pair,
    kleene_closure,
    left_adjoint,
    right_adjoint,
)
from .presentation import (
    Presentation,
    PresentationError,
    PresentationKind,
    Relation,
    RelationSchema,
    check_kind,
)
from .rationals import ExtRat
from .terms import (
    Cond,
    FamilyJoin,
    Meet,
    SchemaClause,
    SchemaTerm,
    Term,
    gen_term,
    join_of,
    normalize,
    rename_clause,
    rename_cond,
    rename_pattern,
    TERM_ONE,
    TERM_ZERO,
)


class TransformError(PresentationError):
    pass


@dataclass(frozen=True)
class SchematicCase:
    """One case of a schematic image: applies to the generic generator when
    ``pin`` fixes some of its parameters and ``conds`` hold; ``term`` is
    the image written over the (pinned) parameters."""

    pin: tuple[tuple[str, ExtRat], ...]
    conds: tuple[Cond, ...]
    term: SchemaTerm


@dataclass(frozen=True)
class QuotientSpec:
    """The generator-level data of a quotient operator.

    ``image`` lists the operator's value on each generator as a term over
    generators; the required shape depends on the mode (joins of
    generators for the open modes, joins of finite meets for the proper
    modes, single generators for the triquotient modes).  Symbolic domains
    use ``cases`` instead.
    """

    mode: QuotientMode
    domain: GeneratorDomain
    image: tuple[tuple[str, Term], ...] = ()
    cases: tuple[SchematicCase, ...] = ()

    def __post_init__(self):
        for g, t in self.image:
            if not self.domain.contains(g):
                raise TransformError(f"image key {g!r} not a generator")
            _check_image_shape(self.mode, t)

    @property
    def schematic(self) -> bool:
        return bool(self.cases)

    def image_of(self, g: str) -> Term:
        for k, t in self.image:
            if k == g:
                return t
        raise TransformError(f"no image recorded for generator {g!r}")


def _check_image_shape(mode: QuotientMode, t: Term):
    singles = mode in (
        QuotientMode.SEMI_OPEN,
        QuotientMode.OPEN,
        QuotientMode.SEMI_TRIQUOTIENT,
        QuotientMode.TRIQUOTIENT,
    )
    for cl in t.clauses:
        if isinstance(cl, FamilyJoin):
            if singles and len(cl.body) > 1:
                raise TransformError("image family must join single generators")
            continue
        if singles and len(cl.gens) != 1:
            raise TransformError(
                f"{mode.value} image must be a join of generators, got meet {cl}"
            )
    if mode in (QuotientMode.SEMI_TRIQUOTIENT, QuotientMode.TRIQUOTIENT):
        if len(t.clauses) != 1:
            raise TransformError(
                f"{mode.value} image must be a single generator (finite directed join)"
            )


def identity_spec(domain: GeneratorDomain, mode: QuotientMode) -> QuotientSpec:
    image = tuple((g, gen_term(g)) for g in sorted(domain.enumerate_gens(), key=domain.sort_key))
    return QuotientSpec(mode, domain, image)


@dataclass(frozen=True)
class Provenance:
    parent_hash: str
    mode: str
    image: tuple[tuple[str, str], ...]


@dataclass(frozen=True)
class TransformedPresentation(Presentation):
    provenance: Provenance = None  # type: ignore[assignment]


_MODE_TAG = {
    QuotientMode.SEMI_OPEN: "dia",
    QuotientMode.OPEN: "dia",
    QuotientMode.SEMI_PROPER: "box",
    QuotientMode.PROPER: "box",
    QuotientMode.SEMI_TRIQUOTIENT: "boxtimes",
    QuotientMode.TRIQUOTIENT: "boxtimes",
}

_MODE_KIND = {
    QuotientMode.SEMI_OPEN: PresentationKind.SUP,
    QuotientMode.OPEN: PresentationKind.SUP,
    QuotientMode.SEMI_PROPER: PresentationKind.PREFRAME,
    QuotientMode.PROPER: PresentationKind.PREFRAME,
    QuotientMode.SEMI_TRIQUOTIENT: PresentationKind.DCPO,
    QuotientMode.TRIQUOTIENT: PresentationKind.DCPO,
}


def _transport_relation(rel, tagged: TaggedDomain):
    def wrap_term(t: Term) -> Term:
        out = []
        for cl in t.clauses:
            if isinstance(cl, Meet):
                out.append(Meet(tuple(tagged.wrap(g) for g in cl.gens)))
            else:
                out.append(
                    FamilyJoin(cl.var, tuple(p.tagged(tagged.tag) for p in cl.body), cl.conds, cl.directed)
                )
        return Term(tuple(out))

    if isinstance(rel, Relation):
        return Relation(wrap_term(rel.lhs), wrap_term(rel.rhs), rel.op)

    def wrap_clause(cl: SchemaClause) -> SchemaClause:
        return SchemaClause(
            tuple(p.tagged(tagged.tag) for p in cl.meet),
            cl.bound,
            cl.conds,
            cl.int_var,
            cl.directed,
        )

    return RelationSchema(
        rel.params,
        rel.conds,
        SchemaTerm(tuple(wrap_clause(c) for c in rel.lhs.clauses)),
        SchemaTerm(tuple(wrap_clause(c) for c in rel.rhs.clauses)),
        rel.op,
    )


def _parent_hash(p: Presentation) -> str:
    from .serialize import presentation_to_jsonable

    blob = json.dumps(presentation_to_jsonable(p), sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _image_lists(spec: QuotientSpec, g: str) -> list[tuple[str, ...]]:
    """The image of g as a list of generator meets."""
    out = []
    for cl in spec.image_of(g).clauses:
        if not isinstance(cl, Meet):
            raise TransformError("finite expansion over a schematic image clause")
        out.append(cl.gens)
    return out


def _finite_pair_relations(
    p: Presentation, spec: QuotientSpec, tagged: TaggedDomain
) -> list[Relation]:
    # The symmetric (semi) relation families are emitted once per unordered
    # pair; the asymmetric ones expand only the second slot, and dropping
    # the mirrored relation loses forcing on small finite instances, so
    # both orders are kept there.
    domain = p.domain
    gens = sorted(domain.enumerate_gens(), key=domain.sort_key)
    mode = spec.mode
    symmetric = mode in (
        QuotientMode.SEMI_OPEN,
        QuotientMode.SEMI_PROPER,
        QuotientMode.SEMI_TRIQUOTIENT,
    )
    out = []
    for i, s in enumerate(gens):
        partners = gens[i:] if symmetric else gens
        for t in partners:
            lhs_join_modes = mode in (QuotientMode.SEMI_PROPER, QuotientMode.PROPER)
            if lhs_join_modes:
                lhs = normalize(join_of([tagged.wrap(s), tagged.wrap(t)]), tagged)
            else:
                lhs = normalize(Term((Meet(tuple(sorted({tagged.wrap(s), tagged.wrap(t)}))),)), tagged)
            rels = []
            if mode in (QuotientMode.SEMI_OPEN, QuotientMode.OPEN):
                if mode is QuotientMode.SEMI_OPEN:
                    keys = [
                        domain.meet(a[0], b[0])
                        for a in _image_lists(spec, s)
                        for b in _image_lists(spec, t)
                    ]
                else:
                    keys = [domain.meet(s, b[0]) for b in _image_lists(spec, t)]
                rhs = normalize(join_of([tagged.wrap(k) for k in keys]), tagged)
                rels.append(Relation(lhs, rhs))
            elif lhs_join_modes:
                clauses = []
                if mode is QuotientMode.SEMI_PROPER:
                    pairs = [
                        (a, b)
                        for a in _image_lists(spec, s)
                        for b in _image_lists(spec, t)
                    ]
                    for a, b in pairs:
                        ms = [domain.join(x, y) for x in a for y in b]
                        clauses.append(Meet(tuple(sorted(set(tagged.wrap(k) for k in ms)))))
                else:
                    for b in _image_lists(spec, t):
                        ms = [domain.join(s, y) for y in b]
                        clauses.append(Meet(tuple(sorted(set(tagged.wrap(k) for k in ms)))))
                rhs = normalize(Term(tuple(clauses)), tagged)
                rels.append(Relation(lhs, rhs))
            else:
                # triquotient modes: a meet family and a join family
                img_s = [c[0] for c in _image_lists(spec, s)]
                img_t = [c[0] for c in _image_lists(spec, t)]
                if mode is QuotientMode.SEMI_TRIQUOTIENT:
                    meets = [domain.meet(a, b) for a in img_s for b in img_t]
                    joins = [domain.join(a, b) for a in img_s for b in img_t]
                else:
                    meets = [domain.meet(s, b) for b in img_t]
                    joins = [domain.join(s, b) for b in img_t]
                lhs_meet = normalize(
                    Term((Meet(tuple(sorted({tagged.wrap(s), tagged.wrap(t)}))),)), tagged
                )
                lhs_join = normalize(join_of([tagged.wrap(s), tagged.wrap(t)]), tagged)
                rels.append(
                    Relation(lhs_meet, normalize(join_of([tagged.wrap(k) for k in meets]), tagged))
                )
                rels.append(
                    Relation(lhs_join, normalize(join_of([tagged.wrap(k) for k in joins]), tagged))
                )
            out.extend(r for r in rels if not r.trivial())
    return out


def _symbolic_pair_schemas(
    p: Presentation, spec: QuotientSpec, tagged: TaggedDomain
) -> list[RelationSchema]:
    domain = p.domain
    pp = domain.pattern_params
    mode = spec.mode
    t_names = {name: name + "'" for name in pp}
    s_generic = domain.generic_pattern()
    s_pat = s_generic.tagged(tagged.tag)
    out = []

    if mode not in (QuotientMode.OPEN, QuotientMode.PROPER):
        raise TransformError(
            f"schematic images are supported for the open and proper transformers, not {mode.value}"
        )

    for case in spec.cases:
        pin = {t_names[k]: v for k, v in case.pin}
        t_pat = rename_pattern(domain.generic_pattern(), t_names, pin).tagged(tagged.tag)
        conds = tuple(rename_cond(c, t_names, pin) for c in case.conds)
        rhs_clauses = []
        for cl in case.term.clauses:
            renamed = rename_clause(cl, t_names, pin)
            if mode is QuotientMode.OPEN:
                body = tuple(
                    domain.meet_patterns(s_generic, pat).tagged(tagged.tag)
                    for pat in renamed.meet
                )
            else:
                body = tuple(
                    domain.join_patterns(s_generic, pat).tagged(tagged.tag)
                    for pat in renamed.meet
                )
            rhs_clauses.append(
                SchemaClause(body, renamed.bound, renamed.conds, renamed.int_var, renamed.directed)
            )
        if mode is QuotientMode.OPEN:
            lhs = SchemaTerm((SchemaClause((s_pat, t_pat)),))
        else:
            lhs = SchemaTerm((SchemaClause((s_pat,)), SchemaClause((t_pat,))))
        params = tuple(pp) + tuple(t_names[x] for x in pp if t_names[x] not in pin)
        out.append(RelationSchema(params, conds, lhs, SchemaTerm(tuple(rhs_clauses)), "="))
    return out


def _present(p: Presentation, spec: QuotientSpec, mode: QuotientMode, check: bool) -> TransformedPresentation:
    if spec.mode is not mode:
        raise TransformError(f"spec mode {spec.mode.value} does not match transformer {mode.value}")
    want_kind = _MODE_KIND[mode]
    if p.kind is not want_kind:
        raise TransformError(f"{mode.value} transformer needs a {want_kind.value} presentation")
    if spec.domain != p.domain:
        raise TransformError("spec and presentation disagree on the generator domain")
    if check and not p.schematic and p.domain.finite:
        report = check_kind(p)
        if not report.ok:
            raise KindCheckError(report)

    tagged = TaggedDomain(_MODE_TAG[mode], p.domain)
    rels: list = []
    if mode in (QuotientMode.SEMI_OPEN, QuotientMode.OPEN, QuotientMode.SEMI_TRIQUOTIENT, QuotientMode.TRIQUOTIENT):
        top = p.domain.top()
        if top is None:
            raise TransformError("domain top needed for the unit relation")
        rels.append(Relation(gen_term(tagged.wrap(top)), TERM_ONE))
    if mode in (QuotientMode.SEMI_PROPER, QuotientMode.PROPER, QuotientMode.SEMI_TRIQUOTIENT, QuotientMode.TRIQUOTIENT):
        bottom = p.domain.bottom()
        if bottom is None:
            raise TransformError("domain bottom needed for the zero relation")
        rels.append(Relation(gen_term(tagged.wrap(bottom)), TERM_ZERO))

    if spec.schematic:
        rels.extend(_symbolic_pair_schemas(p, spec, tagged))
    else:
        rels.extend(_finite_pair_relations(p, spec, tagged))

    rels.extend(_transport_relation(r, tagged) for r in p.relations)

    seen = set()
    uniq = []
    for r in rels:
        key = r.key() if isinstance(r, Relation) else ("schema", str(r))
        if key not in seen:
            seen.add(key)
            uniq.append(r)

    if spec.schematic:
        image = tuple((f"case{i}", str(c.term)) for i, c in enumerate(spec.cases))
    else:
        image = tuple((g, str(t)) for g, t in spec.image)
    prov = Provenance(_parent_hash(p), mode.value, image)
    return TransformedPresentation(PresentationKind.PLAIN, tagged, tuple(uniq), prov)


def present_semi_open(p: Presentation, spec: QuotientSpec, check: bool = True) -> TransformedPresentation:
    return _present(p, spec, QuotientMode.SEMI_OPEN, check)


def present_open(p: Presentation, spec: QuotientSpec, check: bool = True) -> TransformedPresentation:
    return _present(p, spec, QuotientMode.OPEN, check)


def present_semi_proper(p: Presentation, spec: QuotientSpec, check: bool = True) -> TransformedPresentation:
    return _present(p, spec, QuotientMode.SEMI_PROPER, check)


def present_proper(p: Presentation, spec: QuotientSpec, check: bool = True) -> TransformedPresentation:
    return _present(p, spec, QuotientMode.PROPER, check)


def present_semi_triquotient(p: Presentation, spec: QuotientSpec, check: bool = True) -> TransformedPresentation:
    return _present(p, spec, QuotientMode.SEMI_TRIQUOTIENT, check)


def present_triquotient(p: Presentation, spec: QuotientSpec, check: bool = True) -> TransformedPresentation:
    return _present(p, spec, QuotientMode.TRIQUOTIENT, check)


# ---------------------------------------------------------------------------
# operator derivation from coinserter / coequaliser data


def _readback_join(parent: PresentedObject, target: int) -> Term:
    """target as a join of generators, preferring fine generators: redundant
    members are pruned from the top of the carrier order down."""
    X = parent.carrier
    domain = parent.domain
    cands = [g for g in parent.interp if X.leq(parent.interp[g], target)]
    if X.join_all(parent.interp[g] for g in cands) != target:
        raise TransformError("carrier element is not a join of generators")
    down = X.poset.down

    def height(g: str) -> int:
        return bin(down[parent.interp[g]]).count("1")

    kept = sorted(cands, key=lambda g: (-height(g), domain.sort_key(g)))
    i = 0
    while i < len(kept):
        rest = kept[:i] + kept[i + 1:]
        if rest and X.join_all(parent.interp[g] for g in rest) == target:
            kept = rest
        else:
            i += 1
    return join_of(sorted(kept, key=domain.sort_key))


def _readback_meet(parent: PresentedObject, target: int) -> Term:
    X = parent.carrier
    domain = parent.domain
    cands = [g for g in parent.interp if X.leq(target, parent.interp[g])]
    if X.meet_all(parent.interp[g] for g in cands) != target:
        raise TransformError("carrier element is not a meet of generators")
    down = X.poset.down

    def height(g: str) -> int:
        return bin(down[parent.interp[g]]).count("1")

    kept = sorted(cands, key=lambda g: (height(g), domain.sort_key(g)))
    i = 0
    while i < len(kept):
        rest = kept[:i] + kept[i + 1:]
        if rest and X.meet_all(parent.interp[g] for g in rest) == target:
            kept = rest
        else:
            i += 1
    return Term((Meet(tuple(sorted(kept, key=domain.sort_key))),))


def _readback_generator(parent: PresentedObject, target: int) -> Term:
    domain = parent.domain
    hits = sorted(
        (g for g, v in parent.interp.items() if v == target), key=domain.sort_key
    )
    if not hits:
        raise TransformError(
            "carrier element is not a generator image; no directed-join representation"
        )
    return gen_term(hits[0])


def derive_spec_from_coinserter(
    parent: PresentedObject,
    fstar: MonotoneMap,
    gstar: MonotoneMap,
    mode: QuotientMode,
    coequaliser: bool = False,
) -> QuotientSpec:
    """Compute the quotient operator of the (co)inserter of f, g out of the
    presented frame, verify its laws for the mode, and read its generator
    images back as terms.

    Open modes use the Kleene closure of f_! g* (joined with g_! f* for a
    coequaliser); proper modes use g_* f* ^ id (met with f_* g* for a
    coequaliser), whose idempotence is checked directly.
    """
    X = parent.carrier
    if fstar.source.poset.elements != X.poset.elements:
        raise TransformError("fstar must start at the parent carrier")
    if gstar.source.poset.elements != X.poset.elements:
        raise TransformError("gstar must start at the parent carrier")

    if mode in (QuotientMode.SEMI_OPEN, QuotientMode.OPEN):
        f_sh = left_adjoint(fstar)
        if f_sh is None:
            raise TransformError("missing adjoint: f* has no left adjoint")
        j = compose(f_sh, gstar)
        if coequaliser:
            g_sh = left_adjoint(gstar)
            if g_sh is None:
                raise TransformError("missing adjoint: g* has no left adjoint")
            other = compose(g_sh, fstar)
            j = MonotoneMap(X, X, tuple(X.join(j(x), other(x)) for x in range(X.n)))
        op = kleene_closure(j)
    elif mode in (QuotientMode.SEMI_PROPER, QuotientMode.PROPER):
        g_st = right_adjoint(gstar)
        if g_st is None:
            raise TransformError("missing adjoint: g* has no right adjoint")
        if coequaliser:
            f_st = right_adjoint(fstar)
            if f_st is None:
                raise TransformError("missing adjoint: f* has no right adjoint")
            a, b = compose(g_st, fstar), compose(f_st, gstar)
            table = tuple(X.meet(X.meet(a(x), b(x)), x) for x in range(X.n))
            op = MonotoneMap(X, X, table)
            rep = check_quotient_operator(op, QuotientMode.SEMI_PROPER)
            if not rep:
                raise OperatorLawError(rep)
        else:
            op, rep = interior_from_pair(g_st, fstar)
            if not rep:
                raise OperatorLawError(rep)
    else:
        raise TransformError(
            "triquotient specs are caller data; derivation covers the open and proper modes"
        )

    rep = check_quotient_operator(op, mode)
    if not rep:
        raise OperatorLawError(rep)

    return spec_from_operator(parent, op, mode)


def spec_from_operator(
    parent: PresentedObject, op: MonotoneMap, mode: QuotientMode, check: bool = True
) -> QuotientSpec:
    """Read a verified quotient operator back off the generators."""
    if check:
        rep = check_quotient_operator(op, mode)
        if not rep:
            raise OperatorLawError(rep)
    domain = parent.domain
    image = []
    for g in sorted(parent.interp, key=domain.sort_key):
        target = op(parent.interp[g])
        if target == parent.interp[g]:
            term = gen_term(g)
        elif mode in (QuotientMode.SEMI_OPEN, QuotientMode.OPEN):
            term = _readback_join(parent, target)
        elif mode in (QuotientMode.SEMI_PROPER, QuotientMode.PROPER):
            term = _readback_meet(parent, target)
        else:
            term = _readback_generator(parent, target)
        fold = mode not in (QuotientMode.SEMI_PROPER, QuotientMode.PROPER)
        image.append((g, normalize(term, domain, fold)))
    return QuotientSpec(mode, domain, tuple(image))
