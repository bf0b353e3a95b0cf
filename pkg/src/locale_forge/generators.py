"""Generator domains: the carriers that presentations are written over.

A domain knows its generators by canonical string keys, their order, and
whatever semilattice/lattice structure it declares.  Finite domains derive
structure from their poset (declared meets/joins are verified against
greatest lower / least upper bounds); the symbolic interval domains live in
``intervals`` and register themselves in ``DOMAIN_REGISTRY``.

Meets of generators written inside terms always mean the domain's meet
(they fold when the domain has one); joins of generators are formal frame
joins and never fold.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

from .lattice import FinitePoset, _bits
from .rationals import ExtRat
from .terms import GenPattern, TermError


class DomainError(Exception):
    pass


class GeneratorDomain:
    """Interface; see FiniteGeneratorDomain and the interval domains."""

    name: str = "abstract"
    finite: bool = False
    has_meet: bool = False
    has_join: bool = False

    # -- structure flags -------------------------------------------------
    @property
    def meet_semilattice(self) -> bool:
        return self.has_meet and self.top() is not None

    @property
    def join_semilattice(self) -> bool:
        return self.has_join and self.bottom() is not None

    @property
    def distributive_lattice(self) -> bool:
        return self.meet_semilattice and self.join_semilattice and self._distributive()

    def _distributive(self) -> bool:
        return False

    # -- generator algebra ------------------------------------------------
    def contains(self, key: str) -> bool:
        raise NotImplementedError

    def leq(self, a: str, b: str) -> bool:
        raise NotImplementedError

    def meet(self, a: str, b: str) -> str:
        raise DomainError(f"domain {self.name!r} has no meet operation")

    def join(self, a: str, b: str) -> str:
        raise DomainError(f"domain {self.name!r} has no join operation")

    def top(self) -> Optional[str]:
        return None

    def bottom(self) -> Optional[str]:
        return None

    def enumerate_gens(self, limit: Optional[int] = None) -> list[str]:
        raise NotImplementedError

    def sort_key(self, key: str):
        return key

    # -- schematic support --------------------------------------------------
    def instantiate_pattern(self, pat: GenPattern, env: dict[str, ExtRat], n: Optional[int] = None) -> str:
        raise DomainError(f"domain {self.name!r} has no pattern constructors")

    def meet_patterns(self, a: GenPattern, b: GenPattern) -> GenPattern:
        raise DomainError(f"domain {self.name!r} cannot meet patterns symbolically")

    def join_patterns(self, a: GenPattern, b: GenPattern) -> GenPattern:
        raise DomainError(f"domain {self.name!r} cannot join patterns symbolically")

    def grid_values(self, grid: Sequence[ExtRat]) -> list[ExtRat]:
        """Values a schema parameter ranges over when instantiated."""
        raise DomainError(f"domain {self.name!r} is not parametric")

    def descriptor(self) -> dict:
        raise NotImplementedError

    # equality by descriptor keeps dataclass containers comparable
    def __eq__(self, other) -> bool:
        return isinstance(other, GeneratorDomain) and self.descriptor() == other.descriptor()

    def __hash__(self) -> int:
        import json

        return hash(json.dumps(self.descriptor(), sort_keys=True))


class FiniteGeneratorDomain(GeneratorDomain):
    """An explicit finite poset of generators.

    Meets and joins are the glb/lub of the poset when these are total;
    declared partial operations (from the DSL) are verified against them.
    """

    def __init__(
        self,
        poset: FinitePoset,
        verify_decls: Iterable[tuple[str, str, str, str]] = (),
        use_meet: Optional[bool] = None,
        use_join: Optional[bool] = None,
    ):
        self.poset = poset
        self.name = "finite"
        self.finite = True
        self._index = {e: i for i, e in enumerate(poset.elements)}
        n = poset.n
        up, down = poset.up, poset.down
        full = (1 << n) - 1

        def table(cover):
            rows: list[Optional[int]] = []
            for i in range(n):
                for j in range(n):
                    common = cover[i] & cover[j]
                    found = None
                    for c in _bits(common):
                        if common & ~cover[c] == 0:
                            found = c
                            break
                    rows.append(found)
            return rows

        meets = table(down)
        joins = table(up)
        self._meets = meets if all(x is not None for x in meets) else None
        self._joins = joins if all(x is not None for x in joins) else None
        # structure can be suppressed: a poset whose glbs exist need not mean
        # the generators carry meet structure (the frame meet of generators
        # can differ from their order-theoretic glb)
        if use_meet is False:
            self._meets = None
        elif use_meet is True and self._meets is None:
            raise DomainError("meet structure required but some glb is missing")
        if use_join is False:
            self._joins = None
        elif use_join is True and self._joins is None:
            raise DomainError("join structure required but some lub is missing")
        self.has_meet = self._meets is not None
        self.has_join = self._joins is not None
        tops = [i for i in range(n) if down[i] == full]
        bots = [i for i in range(n) if up[i] == full]
        self._top = poset.elements[tops[0]] if tops else None
        self._bottom = poset.elements[bots[0]] if bots else None
        for op, a, b, c in verify_decls:
            want = self.meet(a, b) if op == "meet" else self.join(a, b)
            if want != c:
                raise DomainError(
                    f"declared {op} {a} {b} = {c} conflicts with the order (expected {want})"
                )
        self._check_structure()

    def _check_structure(self):
        # exhaustive law check at small sizes, deterministic sampling above
        els = self.poset.elements
        step = max(1, len(els) // 24)
        sample = els[::step]
        for opname, has, op in (("meet", self.has_meet, self.meet), ("join", self.has_join, self.join)):
            if not has:
                continue
            for a in els:
                if op(a, a) != a:
                    raise DomainError(f"{opname} not idempotent at {a!r}")
            pair_pool = els if len(els) <= 64 else sample
            for a, b in itertools.combinations(pair_pool, 2):
                if op(a, b) != op(b, a):
                    raise DomainError(f"{opname} not commutative at {a!r},{b!r}")
            triple_pool = els if len(els) <= 24 else sample
            for a, b, c in itertools.combinations(triple_pool, 3):
                if op(op(a, b), c) != op(a, op(b, c)):
                    raise DomainError(f"{opname} not associative at {a!r},{b!r},{c!r}")

    def _distributive(self) -> bool:
        els = self.poset.elements
        return all(
            self.meet(a, self.join(b, c)) == self.join(self.meet(a, b), self.meet(a, c))
            for a in els
            for b in els
            for c in els
        )

    def contains(self, key: str) -> bool:
        return key in self._index

    def _idx(self, key: str) -> int:
        try:
            return self._index[key]
        except KeyError:
            raise TermError(f"generator {key!r} not in finite domain") from None

    def leq(self, a: str, b: str) -> bool:
        return self.poset.leq(self._idx(a), self._idx(b))

    def meet(self, a: str, b: str) -> str:
        if self._meets is None:
            raise DomainError("finite domain is not meet-closed")
        return self.poset.elements[self._meets[self._idx(a) * self.poset.n + self._idx(b)]]

    def join(self, a: str, b: str) -> str:
        if self._joins is None:
            raise DomainError("finite domain is not join-closed")
        return self.poset.elements[self._joins[self._idx(a) * self.poset.n + self._idx(b)]]

    def top(self) -> Optional[str]:
        return self._top

    def bottom(self) -> Optional[str]:
        return self._bottom

    def enumerate_gens(self, limit: Optional[int] = None) -> list[str]:
        return list(self.poset.elements)

    def instantiate_pattern(self, pat: GenPattern, env: dict[str, ExtRat], n: Optional[int] = None) -> str:
        if pat.ctor or pat.tags or pat.args:
            raise TermError("finite domains only admit plain named generators")
        if not self.contains(pat.name):
            raise TermError(f"generator {pat.name!r} not in finite domain")
        return pat.name

    def descriptor(self) -> dict:
        up = self.poset.up
        pairs = sorted(
            (i, j) for i in range(self.poset.n) for j in _bits(up[i])
        )
        return {
            "type": "finite",
            "elements": list(self.poset.elements),
            "leq": [list(p) for p in pairs],
            "structure": {"meet": self.has_meet, "join": self.has_join},
        }


class TaggedDomain(GeneratorDomain):
    """Wrapper generators ``tag parent-generator`` with the parent's order
    and no algebraic structure (the quotient relations supply it)."""

    def __init__(self, tag: str, parent: GeneratorDomain):
        if tag not in ("dia", "box", "boxtimes"):
            raise DomainError(f"unknown generator tag {tag!r}")
        self.tag = tag
        self.parent = parent
        self.name = f"tagged-{tag}-{parent.name}"
        self.finite = parent.finite
        self.has_meet = False
        self.has_join = False

    def wrap(self, key: str) -> str:
        return f"{self.tag} {key}"

    def unwrap(self, key: str) -> str:
        prefix = self.tag + " "
        if not key.startswith(prefix):
            raise TermError(f"generator {key!r} lacks tag {self.tag!r}")
        return key[len(prefix):]

    def contains(self, key: str) -> bool:
        prefix = self.tag + " "
        return key.startswith(prefix) and self.parent.contains(key[len(prefix):])

    def leq(self, a: str, b: str) -> bool:
        return self.parent.leq(self.unwrap(a), self.unwrap(b))

    def enumerate_gens(self, limit: Optional[int] = None) -> list[str]:
        return [self.wrap(g) for g in self.parent.enumerate_gens(limit)]

    def sort_key(self, key: str):
        return self.parent.sort_key(self.unwrap(key))

    def instantiate_pattern(self, pat: GenPattern, env: dict[str, ExtRat], n: Optional[int] = None) -> str:
        if pat.tags:
            if pat.tags[0] != self.tag:
                raise TermError(f"pattern tag {pat.tags[0]!r} does not match domain tag {self.tag!r}")
            inner = GenPattern(pat.ctor, pat.args, pat.name, pat.tags[1:])
            return self.wrap(self.parent.instantiate_pattern(inner, env, n))
        raise TermError("untagged pattern in tagged domain")

    def key_endpoints(self, key: str):
        inner = getattr(self.parent, "key_endpoints", None)
        if inner is None:
            return None
        return inner(self.unwrap(key))

    def grid_values(self, grid):
        return self.parent.grid_values(grid)

    def descriptor(self) -> dict:
        return {"type": "tagged", "tag": self.tag, "parent": self.parent.descriptor()}


# populated by the builtin symbolic domains on import
DOMAIN_REGISTRY: dict[str, Callable[[], GeneratorDomain]] = {}


def domain_from_descriptor(desc: dict) -> GeneratorDomain:
    kind = desc.get("type")
    if kind == "finite":
        structure = desc.get("structure", {})
        return FiniteGeneratorDomain(
            FinitePoset.from_pairs(desc["elements"], [tuple(p) for p in desc["leq"]]),
            use_meet=structure.get("meet"),
            use_join=structure.get("join"),
        )
    if kind == "tagged":
        return TaggedDomain(desc["tag"], domain_from_descriptor(desc["parent"]))
    if kind in DOMAIN_REGISTRY:
        return DOMAIN_REGISTRY[kind]()
    raise DomainError(f"unknown domain descriptor {kind!r}")
