"""JSON forms of every serializable object.

JSON is the machine format: deterministic (sorted keys, canonical element
order) and round-trips bit-exactly for presentations and quotient specs.
"""

from __future__ import annotations

from typing import Any

from .generators import domain_from_descriptor
from .lattice import FiniteLattice, FinitePoset, MonotoneMap, OperatorReport, QuotientMode, Role, _bits
from .presentation import (
    Presentation,
    PresentationKind,
    Relation,
    RelationSchema,
    StabilityReport,
)
from .rationals import parse_extrat
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
)


def _expr_to_jsonable(e: EExpr) -> Any:
    if isinstance(e, EOp):
        return {"op": e.op, "left": _expr_to_jsonable(e.left), "right": _expr_to_jsonable(e.right)}
    out: dict[str, Any] = {}
    if e.param is not None:
        out["param"] = e.param
    else:
        out["const"] = str(e.const)
    if e.with_index:
        out["index"] = True
    if e.offset:
        out["offset"] = e.offset
    return out


def _expr_from_jsonable(d: dict) -> EExpr:
    if "op" in d:
        return EOp(d["op"], _expr_from_jsonable(d["left"]), _expr_from_jsonable(d["right"]))
    if "param" in d:
        return EAtom(d["param"], with_index=d.get("index", False), offset=d.get("offset", 0))
    return EAtom(None, parse_extrat(d["const"]), d.get("index", False), d.get("offset", 0))


def _pattern_to_jsonable(p: GenPattern) -> Any:
    out: dict[str, Any] = {}
    if p.ctor:
        out["ctor"] = p.ctor
        out["args"] = [_expr_to_jsonable(a) for a in p.args]
    else:
        out["name"] = p.name
    if p.tags:
        out["tags"] = list(p.tags)
    return out


def _pattern_from_jsonable(d: dict) -> GenPattern:
    tags = tuple(d.get("tags", ()))
    if "ctor" in d:
        return GenPattern(d["ctor"], tuple(_expr_from_jsonable(a) for a in d["args"]), "", tags)
    return GenPattern("", (), d["name"], tags)


def _cond_to_jsonable(c: Cond) -> Any:
    return {
        "op": c.op,
        "left": [_expr_to_jsonable(e) for e in c.left],
        "right": [_expr_to_jsonable(e) for e in c.right],
    }


def _cond_from_jsonable(d: dict) -> Cond:
    return Cond(
        d["op"],
        tuple(_expr_from_jsonable(e) for e in d["left"]),
        tuple(_expr_from_jsonable(e) for e in d["right"]),
    )


def term_to_jsonable(t: Term) -> Any:
    clauses = []
    for c in t.clauses:
        if isinstance(c, Meet):
            clauses.append({"meet": list(c.gens)})
        else:
            clauses.append(
                {
                    "family": {
                        "var": c.var,
                        "body": [_pattern_to_jsonable(p) for p in c.body],
                        "conds": [_cond_to_jsonable(x) for x in c.conds],
                        "directed": c.directed,
                    }
                }
            )
    return {"join": clauses}


def term_from_jsonable(d: dict) -> Term:
    clauses = []
    for c in d["join"]:
        if "meet" in c:
            clauses.append(Meet(tuple(c["meet"])))
        else:
            f = c["family"]
            clauses.append(
                FamilyJoin(
                    f["var"],
                    tuple(_pattern_from_jsonable(p) for p in f["body"]),
                    tuple(_cond_from_jsonable(x) for x in f["conds"]),
                    f.get("directed", False),
                )
            )
    return Term(tuple(clauses))


def _schema_clause_to_jsonable(cl: SchemaClause) -> Any:
    out: dict[str, Any] = {"meet": [_pattern_to_jsonable(p) for p in cl.meet]}
    if cl.bound:
        out["bound"] = list(cl.bound)
    if cl.conds:
        out["conds"] = [_cond_to_jsonable(c) for c in cl.conds]
    if cl.int_var is not None:
        out["intVar"] = cl.int_var
    if cl.directed:
        out["directed"] = True
    return out


def _schema_clause_from_jsonable(d: dict) -> SchemaClause:
    return SchemaClause(
        tuple(_pattern_from_jsonable(p) for p in d["meet"]),
        tuple(d.get("bound", ())),
        tuple(_cond_from_jsonable(c) for c in d.get("conds", ())),
        d.get("intVar"),
        d.get("directed", False),
    )


def relation_to_jsonable(r) -> Any:
    if isinstance(r, Relation):
        return {
            "rel": {
                "lhs": term_to_jsonable(r.lhs),
                "rhs": term_to_jsonable(r.rhs),
                "op": r.op,
            }
        }
    return {
        "schema": {
            "params": list(r.params),
            "conds": [_cond_to_jsonable(c) for c in r.conds],
            "lhs": [_schema_clause_to_jsonable(c) for c in r.lhs.clauses],
            "rhs": [_schema_clause_to_jsonable(c) for c in r.rhs.clauses],
            "op": r.op,
        }
    }


def relation_from_jsonable(d: dict):
    if "rel" in d:
        r = d["rel"]
        return Relation(term_from_jsonable(r["lhs"]), term_from_jsonable(r["rhs"]), r["op"])
    s = d["schema"]
    return RelationSchema(
        tuple(s["params"]),
        tuple(_cond_from_jsonable(c) for c in s["conds"]),
        SchemaTerm(tuple(_schema_clause_from_jsonable(c) for c in s["lhs"])),
        SchemaTerm(tuple(_schema_clause_from_jsonable(c) for c in s["rhs"])),
        s["op"],
    )


def presentation_to_jsonable(p: Presentation) -> Any:
    out = {
        "kind": p.kind.value,
        "domain": p.domain.descriptor(),
        "relations": [relation_to_jsonable(r) for r in p.relations],
    }
    prov = getattr(p, "provenance", None)
    if prov is not None:
        out["provenance"] = {
            "parentHash": prov.parent_hash,
            "mode": prov.mode,
            "imageTable": [list(x) for x in prov.image],
        }
    return out


def presentation_from_jsonable(d: dict) -> Presentation:
    kind = PresentationKind(d["kind"])
    domain = domain_from_descriptor(d["domain"])
    rels = tuple(relation_from_jsonable(r) for r in d["relations"])
    if "provenance" in d:
        from .transform import Provenance, TransformedPresentation

        pv = d["provenance"]
        prov = Provenance(pv["parentHash"], pv["mode"], tuple(tuple(x) for x in pv["imageTable"]))
        return TransformedPresentation(kind, domain, rels, prov)
    return Presentation(kind, domain, rels)


def spec_to_jsonable(spec) -> Any:
    from .transform import QuotientSpec

    out: dict[str, Any] = {
        "mode": spec.mode.value,
        "domain": spec.domain.descriptor(),
    }
    if spec.image:
        out["image"] = {g: term_to_jsonable(t) for g, t in spec.image}
    if spec.cases:
        out["cases"] = [
            {
                "pin": [[k, str(v)] for k, v in c.pin],
                "conds": [_cond_to_jsonable(x) for x in c.conds],
                "term": [_schema_clause_to_jsonable(cl) for cl in c.term.clauses],
            }
            for c in spec.cases
        ]
    return out


def spec_from_jsonable(d: dict):
    from .transform import QuotientSpec, SchematicCase

    domain = domain_from_descriptor(d["domain"])
    image = tuple(
        sorted(
            ((g, term_from_jsonable(t)) for g, t in d.get("image", {}).items()),
            key=lambda kv: domain.sort_key(kv[0]),
        )
    )
    cases = tuple(
        SchematicCase(
            tuple((k, parse_extrat(v)) for k, v in c["pin"]),
            tuple(_cond_from_jsonable(x) for x in c["conds"]),
            SchemaTerm(tuple(_schema_clause_from_jsonable(cl) for cl in c["term"])),
        )
        for c in d.get("cases", ())
    )
    return QuotientSpec(QuotientMode(d["mode"]), domain, image, cases)


# ---------------------------------------------------------------------------
# finite lattices and maps


def poset_to_jsonable(p: FinitePoset) -> Any:
    pairs = sorted((i, j) for i in range(p.n) for j in _bits(p.up[i]))
    return {"elements": list(p.elements), "leq": [list(x) for x in pairs]}


def poset_from_jsonable(d: dict) -> FinitePoset:
    return FinitePoset.from_pairs(d["elements"], [tuple(x) for x in d["leq"]])


def lattice_to_jsonable(l: FiniteLattice) -> Any:
    out = poset_to_jsonable(l.poset)
    out["flags"] = {
        "hasAllMeets": True,
        "hasAllJoins": True,
        "distributive": l.distributive,
        "frame": l.frame,
    }
    return out


def lattice_from_jsonable(d: dict) -> FiniteLattice:
    return FiniteLattice.from_poset(poset_from_jsonable(d))


def map_to_jsonable(f: MonotoneMap) -> Any:
    return {"table": list(f.table), "role": f.role.value}


def map_from_jsonable(d: dict, source: FiniteLattice, target: FiniteLattice) -> MonotoneMap:
    return MonotoneMap(source, target, tuple(d["table"]), Role(d.get("role", "plain")))


def presented_to_jsonable(obj) -> Any:
    if isinstance(obj.carrier, FiniteLattice):
        carrier = lattice_to_jsonable(obj.carrier)
    else:
        carrier = poset_to_jsonable(obj.carrier)
    return {
        "category": obj.category,
        "carrier": carrier,
        "interp": {g: i for g, i in sorted(obj.interp.items())},
    }


def report_to_jsonable(rep: OperatorReport) -> Any:
    return {
        "verdict": "pass" if rep.verdict else "fail",
        "witnesses": [{"law": law, "elements": list(els)} for law, els in rep.witnesses],
        "notes": list(rep.notes),
    }


def stability_to_jsonable(rep: StabilityReport) -> Any:
    return {
        "policy": rep.policy,
        "verdicts": [
            {
                "relation": v.relation_index,
                "verdict": v.verdict,
                **(
                    {
                        "witnessGenerator": v.witness_generator,
                        "missing": relation_to_jsonable(v.missing),
                    }
                    if v.verdict == "fail"
                    else {}
                ),
            }
            for v in rep.verdicts
        ],
    }
