"""Seeded random verification suites.

Each suite draws random finite presentations and quotient operators,
pushes them through the symbolic transformers and compares the result
against the exact kernel: the presented frame of the transformed
presentation must be order isomorphic (matching generator images) to the
fixed points of the operator on the parent frame.  Coverage suites settle
the frame-vs-suplattice/preframe/dcpo comparisons the same way.

All randomness comes from an explicit seed; results are deterministic.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional

from .evaluate import PresentedObject, eval_frame, verify_coverage
from .generators import FiniteGeneratorDomain
from .lattice import (
    FiniteLattice,
    FinitePoset,
    MonotoneMap,
    QuotientMode,
    check_laws,
    check_quotient_operator,
    fixed_points,
    kleene_closure,
    poset_isomorphism,
)
from .presentation import (
    Presentation,
    PresentationKind,
    Relation,
    saturate,
)
from .terms import Meet, Term, TERM_ONE, TERM_ZERO
from .transform import (
    TransformedPresentation,
    present_open,
    present_proper,
    present_semi_open,
    present_semi_proper,
    present_semi_triquotient,
    present_triquotient,
    spec_from_operator,
)

DEFAULT_SEED = 271828


@dataclass
class SuiteResult:
    name: str
    total: int = 0
    passed: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.passed == self.total and not self.failures

    def record(self, instance: int, ok: bool, detail: str = ""):
        self.total += 1
        if ok:
            self.passed += 1
        else:
            self.failures.append(f"instance {instance}: {detail}")

    def summary(self) -> str:
        status = "pass" if self.ok else "FAIL"
        lines = [f"{self.name}: {self.passed}/{self.total} {status}"]
        lines.extend("  " + f for f in self.failures[:10])
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# random structures


def rand_poset(rng: random.Random, n: int) -> FinitePoset:
    labels = [f"g{i}" for i in range(n)]
    pairs = [
        (i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.4
    ]
    return FinitePoset.from_pairs(labels, pairs)


def _subset_domain(rng: random.Random, max_gens: int, closed_under: str) -> FiniteGeneratorDomain:
    universe = frozenset(range(3))
    for _ in range(64):
        fams = {universe, frozenset()} if closed_under == "join" else {universe}
        for _ in range(rng.randint(1, 3)):
            fams.add(frozenset(x for x in universe if rng.random() < 0.5))
        changed = True
        while changed:
            changed = False
            for a in list(fams):
                for b in list(fams):
                    c = (a & b) if closed_under == "meet" else (a | b)
                    if c not in fams:
                        fams.add(c)
                        changed = True
        if len(fams) <= max_gens:
            break
    ordered = sorted(fams, key=lambda s: (len(s), sorted(s)))
    labels = {s: f"g{i}" for i, s in enumerate(ordered)}
    pairs = [
        (i, j)
        for i, a in enumerate(ordered)
        for j, b in enumerate(ordered)
        if a <= b
    ]
    poset = FinitePoset.from_pairs([labels[s] for s in ordered], pairs)
    if closed_under == "meet":
        return FiniteGeneratorDomain(poset, use_meet=True, use_join=False)
    return FiniteGeneratorDomain(poset, use_meet=False, use_join=True)


def rand_meet_semilattice_domain(rng: random.Random, max_gens: int = 5) -> FiniteGeneratorDomain:
    return _subset_domain(rng, max_gens, "meet")


def rand_join_semilattice_domain(rng: random.Random, max_gens: int = 5) -> FiniteGeneratorDomain:
    return _subset_domain(rng, max_gens, "join")


def rand_distributive_domain(rng: random.Random, max_gens: int = 8) -> FiniteGeneratorDomain:
    for _ in range(64):
        base = rand_poset(rng, rng.randint(1, 3))
        down = base.down
        masks = {0}
        frontier = [0]
        while frontier:
            m = frontier.pop()
            for g in range(base.n):
                nm = m | down[g]
                if nm not in masks:
                    masks.add(nm)
                    frontier.append(nm)
        if len(masks) <= max_gens:
            break
    ordered = sorted(masks, key=lambda m: (bin(m).count("1"), m))
    labels = [f"g{i}" for i in range(len(ordered))]
    pairs = [
        (i, j)
        for i, a in enumerate(ordered)
        for j, b in enumerate(ordered)
        if a & ~b == 0
    ]
    return FiniteGeneratorDomain(
        FinitePoset.from_pairs(labels, pairs), use_meet=True, use_join=True
    )


def _rand_join_term(rng: random.Random, gens: list[str]) -> Term:
    k = rng.randint(0, 2)
    if k == 0:
        return TERM_ZERO
    picks = rng.sample(gens, min(k, len(gens)))
    return Term(tuple(Meet((g,)) for g in sorted(set(picks))))


def rand_sup_presentation(rng: random.Random) -> Presentation:
    domain = rand_meet_semilattice_domain(rng)
    gens = domain.enumerate_gens()
    rels = []
    for _ in range(rng.randint(0, 4)):
        op = rng.choice(["=", "<="])
        rels.append(Relation(_rand_join_term(rng, gens), _rand_join_term(rng, gens), op))
    p = Presentation(PresentationKind.SUP, domain, tuple(rels))
    return saturate(p, PresentationKind.SUP)


def rand_preframe_presentation(rng: random.Random) -> Presentation:
    domain = rand_join_semilattice_domain(rng)
    gens = domain.enumerate_gens()

    def meets_term() -> Term:
        clauses = []
        for _ in range(rng.randint(0, 2)):
            size = rng.randint(1, 2)
            clauses.append(Meet(tuple(sorted(rng.sample(gens, min(size, len(gens)))))))
        return Term(tuple(clauses))

    rels = []
    for _ in range(rng.randint(0, 3)):
        rels.append(Relation(meets_term(), meets_term(), rng.choice(["=", "<="])))
    p = Presentation(PresentationKind.PREFRAME, domain, tuple(rels))
    return saturate(p, PresentationKind.PREFRAME)


def rand_dcpo_presentation(rng: random.Random) -> Presentation:
    domain = rand_distributive_domain(rng)
    gens = domain.enumerate_gens()

    def chain_term() -> Term:
        # a chain in the domain order, so the directed join is interpretable
        g = rng.choice(gens)
        chain = {g}
        for h in rng.sample(gens, len(gens)):
            if all(domain.leq(h, x) or domain.leq(x, h) for x in chain):
                chain.add(h)
            if len(chain) >= 3:
                break
        return Term(tuple(Meet((x,)) for x in sorted(chain)))

    rels = []
    for _ in range(rng.randint(0, 3)):
        rels.append(Relation(chain_term(), chain_term(), rng.choice(["=", "<="])))
    p = Presentation(PresentationKind.DCPO, domain, tuple(rels))
    return saturate(p, PresentationKind.DCPO)


# ---------------------------------------------------------------------------
# random operators


def join_irreducibles(L: FiniteLattice) -> list[int]:
    out = []
    for x in range(L.n):
        below = [y for y in range(L.n) if y != x and L.leq(y, x)]
        if L.join_all(below) != x:
            out.append(x)
    return out


def rand_join_endo(rng: random.Random, L: FiniteLattice) -> MonotoneMap:
    ji = join_irreducibles(L)
    target = {x: rng.randrange(L.n) for x in ji}
    table = tuple(
        L.join_all(target[x] for x in ji if L.leq(x, u)) for u in range(L.n)
    )
    return MonotoneMap(L, L, table)


def rand_sublattice(rng: random.Random, L: FiniteLattice) -> list[int]:
    keep = {L.top, L.bottom}
    for x in range(L.n):
        if rng.random() < 0.5:
            keep.add(x)
    changed = True
    while changed:
        changed = False
        for a in list(keep):
            for b in list(keep):
                for c in (L.meet(a, b), L.join(a, b)):
                    if c not in keep:
                        keep.add(c)
                        changed = True
    return sorted(keep)


def closure_onto_sublattice(L: FiniteLattice, keep: list[int]) -> MonotoneMap:
    table = tuple(
        L.meet_all(s for s in keep if L.leq(x, s)) for x in range(L.n)
    )
    return MonotoneMap(L, L, table)


def interior_onto_sublattice(L: FiniteLattice, keep: list[int]) -> MonotoneMap:
    table = tuple(
        L.join_all(s for s in keep if L.leq(s, x)) for x in range(L.n)
    )
    return MonotoneMap(L, L, table)


def rand_monotone_idempotent(rng: random.Random, L: FiniteLattice) -> Optional[MonotoneMap]:
    """A random monotone retraction fixing a random sublattice pointwise.

    Off the sublattice the value may land above or below the argument, so
    these are genuinely mixed idempotents (neither closures nor
    interiors), yet the weak quotient laws hold: the image is closed under
    meets and joins, so re-applying the operator to a meet or join of
    values is the identity."""
    keep = set(rand_sublattice(rng, L))
    table: list[int] = []
    for x in range(L.n):
        if x in keep:
            table.append(x)
            continue
        floor = L.join_all(table[j] for j in range(x) if L.leq(j, x))
        cands = [s for s in keep if L.leq(floor, s)]
        # bias toward the tightest retracts but allow wild values
        cands.sort(key=lambda s: bin(L.poset.down[s]).count("1"))
        table.append(cands[0] if rng.random() < 0.6 else rng.choice(cands))
    try:
        return MonotoneMap(L, L, tuple(table))
    except Exception:
        return None


def rand_quotient_operator(
    rng: random.Random, L: FiniteLattice, mode: QuotientMode, tries: int = 40
) -> MonotoneMap:
    """A random operator passing the mode's law suite; falls back to the
    retraction onto a random sublattice (which always passes).

    The triquotient modes also draw bare monotone idempotents, so the suite
    sees operators that are neither inflationary nor deflationary."""
    closure_modes = (QuotientMode.SEMI_OPEN, QuotientMode.OPEN)
    interior_modes = (QuotientMode.SEMI_PROPER, QuotientMode.PROPER)
    for _ in range(tries):
        style = rng.randrange(3)
        if mode in closure_modes:
            cand = (
                kleene_closure(rand_join_endo(rng, L))
                if style == 0
                else closure_onto_sublattice(L, rand_sublattice(rng, L))
            )
        elif mode in interior_modes:
            cand = interior_onto_sublattice(L, rand_sublattice(rng, L))
        elif style >= 1:
            cand = rand_monotone_idempotent(rng, L)
            if cand is None:
                continue
        else:
            keep = rand_sublattice(rng, L)
            cand = (
                closure_onto_sublattice(L, keep)
                if rng.random() < 0.5
                else interior_onto_sublattice(L, keep)
            )
        if check_quotient_operator(cand, mode):
            return cand
    keep = rand_sublattice(rng, L)
    cand = closure_onto_sublattice(L, keep) if mode in closure_modes else interior_onto_sublattice(L, keep)
    if not check_quotient_operator(cand, mode):
        raise AssertionError("sublattice retraction failed its own laws")
    return cand


_PRESENTERS = {
    QuotientMode.SEMI_OPEN: present_semi_open,
    QuotientMode.OPEN: present_open,
    QuotientMode.SEMI_PROPER: present_semi_proper,
    QuotientMode.PROPER: present_proper,
    QuotientMode.SEMI_TRIQUOTIENT: present_semi_triquotient,
    QuotientMode.TRIQUOTIENT: present_triquotient,
}

_RAND_PRESENTATION = {
    QuotientMode.SEMI_OPEN: rand_sup_presentation,
    QuotientMode.OPEN: rand_sup_presentation,
    QuotientMode.SEMI_PROPER: rand_preframe_presentation,
    QuotientMode.PROPER: rand_preframe_presentation,
    QuotientMode.SEMI_TRIQUOTIENT: rand_dcpo_presentation,
    QuotientMode.TRIQUOTIENT: rand_dcpo_presentation,
}


def check_equivalence(
    p: Presentation, parent: PresentedObject, e: MonotoneMap, mode: QuotientMode
) -> tuple[bool, str, Optional[TransformedPresentation]]:
    """The executable main theorem for one instance: transform then evaluate,
    against the fixed points of the operator.  Also asserts the size
    bounds: generator count preserved, schema count grows by at most 3."""
    spec = spec_from_operator(parent, e, mode)
    out = _PRESENTERS[mode](p, spec)
    if p.domain.finite:
        if len(out.domain.enumerate_gens()) != len(p.domain.enumerate_gens()):
            return False, "generator count changed", out
    if out.schema_count() > p.schema_count() + 3:
        return False, "schema count grew by more than 3", out
    sub, retr = fixed_points(e)
    quotient = eval_frame(out)
    tag = out.domain.tag
    pinned = [
        (quotient.interp[f"{tag} {g}"], retr(parent.interp[g])) for g in parent.interp
    ]
    iso = poset_isomorphism(quotient.carrier.poset, sub.poset, pinned)
    if iso is None:
        return (
            False,
            f"no interp-matching iso: quotient {quotient.carrier.n} elements, "
            f"fixed points {sub.n}",
            out,
        )
    return True, "", out


def suite_oracle_equivalence(mode: QuotientMode, seed: int, count: int) -> SuiteResult:
    rng = random.Random(seed)
    res = SuiteResult(f"oracle-equivalence[{mode.cli_name}]")
    for k in range(count):
        p = _RAND_PRESENTATION[mode](rng)
        parent = eval_frame(p)
        e = rand_quotient_operator(rng, parent.carrier, mode)
        ok, why, _ = check_equivalence(p, parent, e, mode)
        # mode coherence: the semi variant of a strict mode presents the
        # same frame
        strict_pairs = {
            QuotientMode.OPEN: QuotientMode.SEMI_OPEN,
            QuotientMode.PROPER: QuotientMode.SEMI_PROPER,
            QuotientMode.TRIQUOTIENT: QuotientMode.SEMI_TRIQUOTIENT,
        }
        if ok and mode in strict_pairs:
            ok2, why2, _ = check_equivalence(p, parent, e, strict_pairs[mode])
            ok, why = ok and ok2, why2
        res.record(k, ok, why)
    return res


def suite_cross_mode(seed: int, count: int) -> SuiteResult:
    """Replay open and proper operators through the triquotient
    transformers over a distributive-lattice domain presented both ways."""
    rng = random.Random(seed)
    res = SuiteResult("oracle-equivalence[cross-mode]")
    for k in range(count):
        domain = rand_distributive_domain(rng)
        gens = domain.enumerate_gens()
        sup_rels = [Relation(Term((Meet((domain.bottom(),)),)), TERM_ZERO)]
        for i, a in enumerate(gens):
            for b in gens[i + 1:]:
                sup_rels.append(
                    Relation(
                        Term((Meet((a,)), Meet((b,)))),
                        Term((Meet((domain.join(a, b),)),)),
                    )
                )
        p_sup = saturate(
            Presentation(PresentationKind.SUP, domain, tuple(sup_rels)),
            PresentationKind.SUP,
        )
        pre_rels = [Relation(Term((Meet((domain.top(),)),)), TERM_ONE)]
        for i, a in enumerate(gens):
            for b in gens[i + 1:]:
                pre_rels.append(
                    Relation(
                        Term((Meet((a, b)),)),
                        Term((Meet((domain.meet(a, b),)),)),
                    )
                )
        p_pre = saturate(
            Presentation(PresentationKind.PREFRAME, domain, tuple(pre_rels)),
            PresentationKind.PREFRAME,
        )
        p_dcpo = Presentation(PresentationKind.DCPO, domain, ())
        frame_dcpo = eval_frame(p_dcpo)
        views = {QuotientMode.OPEN: p_sup, QuotientMode.PROPER: p_pre}
        ok_all, why_all = True, ""
        for strict_mode, p_view in views.items():
            frame_view = eval_frame(p_view)
            base = poset_isomorphism(
                frame_view.carrier.poset,
                frame_dcpo.carrier.poset,
                [(frame_view.interp[g], frame_dcpo.interp[g]) for g in gens],
            )
            if base is None:
                ok_all, why_all = False, "parent views disagree on the frame"
                break
            e = rand_quotient_operator(rng, frame_dcpo.carrier, strict_mode)
            e_view = MonotoneMap(
                frame_view.carrier,
                frame_view.carrier,
                tuple(
                    base.index(e(base[x])) for x in range(frame_view.carrier.n)
                ),
            )
            ok1, why1, _ = check_equivalence(p_view, frame_view, e_view, strict_mode)
            ok2, why2, _ = check_equivalence(
                p_dcpo, frame_dcpo, e, QuotientMode.TRIQUOTIENT
            )
            ok3, why3, _ = check_equivalence(
                p_dcpo, frame_dcpo, e, QuotientMode.SEMI_TRIQUOTIENT
            )
            ok_all = ok_all and ok1 and ok2 and ok3
            why_all = why_all or why1 or why2 or why3
        res.record(k, ok_all, why_all)
    return res


_RAND_BY_KIND = {
    PresentationKind.SUP: rand_sup_presentation,
    PresentationKind.PREFRAME: rand_preframe_presentation,
    PresentationKind.DCPO: rand_dcpo_presentation,
}


def suite_coverage(kind: PresentationKind, seed: int, count: int) -> SuiteResult:
    rng = random.Random(seed)
    res = SuiteResult(f"coverage[{kind.value}]")
    for k in range(count):
        p = _RAND_BY_KIND[kind](rng)
        rep = verify_coverage(p)
        res.record(k, rep.verdict, "; ".join(rep.notes) if not rep.verdict else "")
    return res


def suite_kleene(seed: int, count: int) -> SuiteResult:
    """Closure construction on random join-preserving endomorphisms of
    random downset frames: inflationary, idempotent, join-preserving, and
    fixed points equal the pre-fixed points of the input."""
    from .lattice import downsets

    rng = random.Random(seed)
    res = SuiteResult("kleene-closure")
    for k in range(count):
        L = downsets(rand_poset(rng, rng.randint(1, 5)))
        j = rand_join_endo(rng, L)
        c = kleene_closure(j)
        rep = check_laws(
            c,
            ["inflationary", "idempotent", "preserves-empty-join", "preserves-binary-join"],
        )
        prefixed = {u for u in range(L.n) if L.leq(j(u), u)}
        fixed = {u for u in range(L.n) if c(u) == u}
        ok = rep.verdict and prefixed == fixed
        res.record(k, ok, "laws or fixed-point mismatch" if not ok else "")
    return res
