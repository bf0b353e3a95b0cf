"""Terms and relation schemas over generator domains.

Concrete terms are joins of finite meets of generators in canonical form;
a join clause may also be a Z-indexed family of meets (used by the shift
operators on the symbolic interval domains).  Schematic terms add rational
parameters with side conditions and are turned into concrete terms by grid
instantiation.

Generators are carried everywhere as their canonical string encodings; the
owning domain gives them meaning.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Union

from .rationals import ExtRat, rat, emax, emin


class TermError(Exception):
    pass


# ---------------------------------------------------------------------------
# endpoint expressions (shared by patterns and schema conditions)


@dataclass(frozen=True)
class EAtom:
    """``param + k`` or ``const + k``, optionally plus the family index."""

    param: Optional[str] = None
    const: ExtRat = rat(0)
    with_index: bool = False
    offset: int = 0

    def free_params(self) -> frozenset[str]:
        return frozenset() if self.param is None else frozenset([self.param])

    def evaluate(self, env: dict[str, ExtRat], n: Optional[int] = None) -> ExtRat:
        base = env[self.param] if self.param is not None else self.const
        shift = self.offset + ((n or 0) if self.with_index else 0)
        if self.with_index and n is None:
            raise TermError("family index not bound")
        return base + shift

    def __str__(self) -> str:
        base = self.param if self.param is not None else str(self.const)
        out = base
        if self.with_index:
            out += "+n"
        if self.offset > 0:
            out += f"+{self.offset}"
        elif self.offset < 0:
            out += f"-{-self.offset}"
        return out


@dataclass(frozen=True)
class EOp:
    """Pointwise max (``v``) or min (``^``) of two endpoint expressions."""

    op: str  # "max" | "min"
    left: "EExpr"
    right: "EExpr"

    def free_params(self) -> frozenset[str]:
        return self.left.free_params() | self.right.free_params()

    def evaluate(self, env: dict[str, ExtRat], n: Optional[int] = None) -> ExtRat:
        l, r = self.left.evaluate(env, n), self.right.evaluate(env, n)
        return emax(l, r) if self.op == "max" else emin(l, r)

    def __str__(self) -> str:
        def wrap(e: "EExpr") -> str:
            if isinstance(e, EOp) or (isinstance(e, EAtom) and (e.with_index or e.offset)):
                return f"({e})"
            return str(e)

        sym = "v" if self.op == "max" else "^"
        return f"{wrap(self.left)} {sym} {wrap(self.right)}"


EExpr = Union[EAtom, EOp]


def eparam(name: str, offset: int = 0, with_index: bool = False) -> EAtom:
    return EAtom(param=name, offset=offset, with_index=with_index)


def econst(x, offset: int = 0, with_index: bool = False) -> EAtom:
    return EAtom(const=rat(x), offset=offset, with_index=with_index)


# ---------------------------------------------------------------------------
# side conditions


@dataclass(frozen=True)
class Cond:
    """A single comparison, or a pair-disequality ``(a,b) != (c,d)``."""

    op: str  # one of < <= = != > >= pairneq
    left: tuple[EExpr, ...]
    right: tuple[EExpr, ...]

    def free_params(self) -> frozenset[str]:
        out: frozenset[str] = frozenset()
        for e in self.left + self.right:
            out |= e.free_params()
        return out

    def holds(self, env: dict[str, ExtRat], n: Optional[int] = None) -> bool:
        lv = tuple(e.evaluate(env, n) for e in self.left)
        rv = tuple(e.evaluate(env, n) for e in self.right)
        if self.op == "pairneq":
            return lv != rv
        l, r = lv[0], rv[0]
        return {
            "<": l < r,
            "<=": l <= r,
            "=": l == r,
            "!=": l != r,
            ">": l > r,
            ">=": l >= r,
        }[self.op]

    def __str__(self) -> str:
        if self.op == "pairneq":
            l = ", ".join(str(e) for e in self.left)
            r = ", ".join(str(e) for e in self.right)
            return f"({l}) != ({r})"
        return f"{self.left[0]} {self.op} {self.right[0]}"


def cmp_cond(left: EExpr, op: str, right: EExpr) -> Cond:
    return Cond(op, (left,), (right,))


# ---------------------------------------------------------------------------
# generator patterns


@dataclass(frozen=True)
class GenPattern:
    """A parametric generator, e.g. ``OI(p v (p'+n), q)``.

    ``ctor`` names the owning domain's constructor; plain named generators
    (finite domains) use ctor ``""`` with the name in ``name``.
    """

    ctor: str = ""
    args: tuple[EExpr, ...] = ()
    name: str = ""
    tags: tuple[str, ...] = ()

    def free_params(self) -> frozenset[str]:
        out: frozenset[str] = frozenset()
        for e in self.args:
            out |= e.free_params()
        return out

    def tagged(self, tag: str) -> "GenPattern":
        return GenPattern(self.ctor, self.args, self.name, (tag,) + self.tags)

    def __str__(self) -> str:
        core = self.name if not self.ctor else f"{self.ctor}({', '.join(str(a) for a in self.args)})"
        for t in self.tags:
            core = f"{t} {core}"
        return core


# ---------------------------------------------------------------------------
# concrete terms


@dataclass(frozen=True)
class Meet:
    """A finite meet of generators; the empty meet is the term 1."""

    gens: tuple[str, ...]

    def __str__(self) -> str:
        if not self.gens:
            return "1"
        return " ^ ".join(self.gens)


@dataclass(frozen=True)
class FamilyJoin:
    """Join over an integer index of a meet of affine generator patterns."""

    var: str
    body: tuple[GenPattern, ...]
    conds: tuple[Cond, ...] = ()
    directed: bool = False

    def __str__(self) -> str:
        head = "dirsup" if self.directed else "bigvee"
        body = " ^ ".join(str(p) for p in self.body)
        cond = ""
        if self.conds:
            cond = " where " + " & ".join(str(c) for c in self.conds)
        return f"{head} {self.var} in Z{cond} . {body}"


Clause = Union[Meet, FamilyJoin]


@dataclass(frozen=True)
class Term:
    """Canonical join of clauses; the empty join is the term 0."""

    clauses: tuple[Clause, ...]

    def __str__(self) -> str:
        if not self.clauses:
            return "0"
        return " v ".join(str(c) for c in self.clauses)

    @property
    def is_zero(self) -> bool:
        return not self.clauses

    @property
    def is_unit(self) -> bool:
        return len(self.clauses) == 1 and isinstance(self.clauses[0], Meet) and not self.clauses[0].gens

    def gens_used(self) -> frozenset[str]:
        out = set()
        for c in self.clauses:
            if isinstance(c, Meet):
                out.update(c.gens)
        return frozenset(out)

    def has_family(self) -> bool:
        return any(isinstance(c, FamilyJoin) for c in self.clauses)


TERM_ZERO = Term(())
TERM_ONE = Term((Meet(()),))


def gen_term(key: str) -> Term:
    return Term((Meet((key,)),))


def join_of(keys: Iterable[str]) -> Term:
    return Term(tuple(Meet((k,)) for k in keys))


def meet_of(keys: Iterable[str]) -> Term:
    return Term((Meet(tuple(keys)),))


def _clause_sort_key(c: Clause):
    if isinstance(c, Meet):
        return (0, len(c.gens) == 0, c.gens)
    return (1, False, str(c))


def normalize(raw: Term, domain, fold_meets: bool = True) -> Term:
    """Canonical form: duplicates removed, clauses in canonical order, and
    meets folded through the domain's meet operation when it has one.

    ``fold_meets=False`` keeps generator meets formal; preframe-style
    presentations need this, since there the frame meet of two generators
    is not a generator operation.  Raises on foreign generators.
    Idempotent either way.
    """
    clauses: list[Clause] = []
    for c in raw.clauses:
        if isinstance(c, FamilyJoin):
            clauses.append(c)
            continue
        gens = list(dict.fromkeys(c.gens))
        for g in gens:
            if not domain.contains(g):
                raise TermError(f"generator {g!r} does not belong to domain {domain.name!r}")
        if fold_meets and domain.has_meet and gens:
            acc = gens[0]
            for g in gens[1:]:
                acc = domain.meet(acc, g)
            gens = [acc]
        clauses.append(Meet(tuple(sorted(gens))))
    # a clause equal to 1 absorbs the whole join
    for c in clauses:
        if isinstance(c, Meet) and not c.gens:
            return TERM_ONE
    uniq = sorted(set(clauses), key=_clause_sort_key)
    return Term(tuple(uniq))


# ---------------------------------------------------------------------------
# schematic terms (relation schemas)


@dataclass(frozen=True)
class SchemaClause:
    """One join clause of a schematic term.

    ``bound`` rational parameters (with conditions) and/or an integer index
    may be bound by the clause; the meet body is a tuple of patterns.
    """

    meet: tuple[GenPattern, ...]
    bound: tuple[str, ...] = ()
    conds: tuple[Cond, ...] = ()
    int_var: Optional[str] = None
    directed: bool = False

    def __str__(self) -> str:
        body = " ^ ".join(str(p) for p in self.meet) if self.meet else "1"
        if not self.bound and self.int_var is None:
            return body
        head = "dirsup" if self.directed else "bigvee"
        if self.int_var is not None:
            binder = f"{self.int_var} in Z"
        else:
            binder = "(" + ", ".join(self.bound) + ")" if len(self.bound) > 1 else self.bound[0]
        cond = " where " + " & ".join(str(c) for c in self.conds) if self.conds else ""
        return f"{head} {binder}{cond} . {body}"


@dataclass(frozen=True)
class SchemaTerm:
    clauses: tuple[SchemaClause, ...]

    def __str__(self) -> str:
        if not self.clauses:
            return "0"
        return " v ".join(str(c) for c in self.clauses)


def rename_expr(e: EExpr, mapping: dict[str, str], pin: dict[str, ExtRat]) -> EExpr:
    """Rename parameters and/or pin some of them to constants."""
    if isinstance(e, EOp):
        return EOp(e.op, rename_expr(e.left, mapping, pin), rename_expr(e.right, mapping, pin))
    if e.param is None:
        return e
    name = mapping.get(e.param, e.param)
    if name in pin:
        return EAtom(None, pin[name], e.with_index, e.offset)
    if e.param in pin:
        return EAtom(None, pin[e.param], e.with_index, e.offset)
    return EAtom(name, e.const, e.with_index, e.offset)


def rename_pattern(p: GenPattern, mapping: dict[str, str], pin: dict[str, ExtRat]) -> GenPattern:
    return GenPattern(p.ctor, tuple(rename_expr(a, mapping, pin) for a in p.args), p.name, p.tags)


def rename_cond(c: Cond, mapping: dict[str, str], pin: dict[str, ExtRat]) -> Cond:
    return Cond(
        c.op,
        tuple(rename_expr(e, mapping, pin) for e in c.left),
        tuple(rename_expr(e, mapping, pin) for e in c.right),
    )


def rename_clause(cl: SchemaClause, mapping: dict[str, str], pin: dict[str, ExtRat]) -> SchemaClause:
    return SchemaClause(
        tuple(rename_pattern(p, mapping, pin) for p in cl.meet),
        cl.bound,
        tuple(rename_cond(c, mapping, pin) for c in cl.conds),
        cl.int_var,
        cl.directed,
    )


def concrete_schema_term(term: Term) -> SchemaTerm:
    """View a concrete generator term as a (parameterless) schema term."""
    out = []
    for c in term.clauses:
        if isinstance(c, FamilyJoin):
            out.append(SchemaClause(c.body, conds=c.conds, int_var=c.var, directed=c.directed))
        else:
            out.append(SchemaClause(tuple(GenPattern(name=g) for g in c.gens)))
    return SchemaTerm(tuple(out))
