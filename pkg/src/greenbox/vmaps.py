"""Exact symbolic algebra of partial bijections on X = Z x N0.

The carrier sets are X itself and the staircase regions
V(r, s) = {(x, y) : s <= y <= x + s - r}.  This family, with X adjoined, is
closed under intersection and under translation clipped to X, so the maps
generated by the unit up-shift on V(0,0) and the unit right-shift on X stay
representable as (domain, shift) pairs and compose in constant time.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

WHOLE_X = "X"
EMPTY = "empty"


@dataclass(frozen=True)
class VSet:
    """V(r, s); s >= 0.  Every V-set contains its corner (r, s)."""

    r: int
    s: int

    def __post_init__(self):
        if self.s < 0:
            raise ValueError("s must be >= 0")

    def contains(self, x: int, y: int) -> bool:
        return self.s <= y <= x + self.s - self.r

    def __str__(self) -> str:
        return f"V({self.r},{self.s})"


def vset_contains(dom, x: int, y: int) -> bool:
    if dom == WHOLE_X:
        return y >= 0
    if dom == EMPTY:
        return False
    return dom.contains(x, y)


def v_intersect(u, v):
    """Intersection within the family; V-sets always meet, so the empty
    marker only passes through when an operand is already empty."""
    if u == EMPTY or v == EMPTY:
        return EMPTY
    if u == WHOLE_X:
        return v
    if v == WHOLE_X:
        return u
    if u.s > v.s:
        u, v = v, u
    # s' >= s: V(r,s) cut to height s' is V(r + s' - s, s').
    return VSet(max(u.r + v.s - u.s, v.r), v.s)


def translate(u, by: tuple):
    """Exact image of the set under the shift, intersected with X."""
    dx, dy = by
    if u == EMPTY:
        return EMPTY
    if u == WHOLE_X:
        if dy <= 0:
            return WHOLE_X
        # Z x [dy, inf) has no diagonal bound and is not representable.
        raise ValueError("translate of X upward leaves the V-set family")
    if u.s + dy >= 0:
        return VSet(u.r + dx, u.s + dy)
    # Bottom rows fall below y = 0: clip back to height 0.
    return VSet(u.r + dx - (u.s + dy), 0)


@dataclass(frozen=True)
class VMap:
    """Partial bijection given by a translation restricted to a domain.

    The image, domain translated by the shift, must lie within X: a V(r,s)
    domain needs s + dy >= 0 and a WholeX domain needs dy = 0.  The empty
    map is the reserved (EMPTY, (0,0)) value.
    """

    domain: object
    shift: tuple

    def __post_init__(self):
        dx, dy = self.shift
        if self.domain == EMPTY:
            if self.shift != (0, 0):
                raise ValueError("the empty map carries the zero shift")
        elif self.domain == WHOLE_X:
            if dy != 0:
                raise ValueError("a map defined on all of X must keep y fixed")
        elif isinstance(self.domain, VSet):
            if self.domain.s + dy < 0:
                raise ValueError("image would leave X")
        else:
            raise ValueError(f"bad domain {self.domain!r}")

    @property
    def is_empty(self) -> bool:
        return self.domain == EMPTY

    def image(self):
        if self.is_empty:
            return EMPTY
        return translate(self.domain, self.shift)

    def apply(self, x: int, y: int) -> Optional[tuple]:
        if not vset_contains(self.domain, x, y):
            return None
        return (x + self.shift[0], y + self.shift[1])

    def __str__(self) -> str:
        if self.is_empty:
            return "empty"
        dom = "X" if self.domain == WHOLE_X else str(self.domain)
        return f"{dom} + ({self.shift[0]},{self.shift[1]})"


EMPTY_MAP = VMap(EMPTY, (0, 0))


def phi() -> VMap:
    """Unit up-shift defined on V(0,0)."""
    return VMap(VSet(0, 0), (0, 1))


def psi() -> VMap:
    """Unit right-shift defined on all of X."""
    return VMap(WHOLE_X, (1, 0))


def identity_map() -> VMap:
    return VMap(WHOLE_X, (0, 0))


def compose(f: VMap, g: VMap) -> VMap:
    """f then g: the domain is the f-preimage of im(f) meet dom(g)."""
    if f.is_empty or g.is_empty:
        return EMPTY_MAP
    meet = v_intersect(f.image(), g.domain)
    if meet == EMPTY:
        return EMPTY_MAP
    dom = translate(meet, (-f.shift[0], -f.shift[1]))
    return VMap(dom, (f.shift[0] + g.shift[0], f.shift[1] + g.shift[1]))


def compose_all(maps: Iterable[VMap]) -> VMap:
    out = identity_map()
    for m in maps:
        out = compose(out, m)
    return out


def invert(f: VMap) -> VMap:
    if f.is_empty:
        return EMPTY_MAP
    return VMap(f.image(), (-f.shift[0], -f.shift[1]))


def power(f: VMap, n: int) -> VMap:
    """f^n; negative exponents invert first, f^0 is the identity on X."""
    if n == 0:
        return identity_map()
    base = f if n > 0 else invert(f)
    out = base
    for _ in range(abs(n) - 1):
        out = compose(out, base)
    return out


def restrict(f: VMap, dom) -> VMap:
    return compose(VMap(dom, (0, 0)), f)


def idempotent_check(f: VMap) -> bool:
    return not f.is_empty and f.shift == (0, 0)


def idempotent_formula(r: int, s: int) -> VMap:
    """phi^-r phi^(r+s) phi^-s, the canonical idempotent of the monogenic
    part; equals the identity on V(r+s-1, r)."""
    if r < 0 or s < 0 or r + s < 1:
        raise ValueError("need r, s >= 0, not both 0")
    return compose_all([power(phi(), -r), power(phi(), r + s),
                        power(phi(), -s)])


def vset_idempotent_witness(r: int, s: int) -> VMap:
    """A product of generators equal to the identity on V(r, s).

    For s >= 1 this is psi^(s-r-1) phi^-s phi^s psi^(-s+r+1).  At s = 0
    that chain degenerates to the identity on all of X, so the conjugate
    psi^-r (phi phi^-1) psi^r is used instead.
    """
    if s < 0:
        raise ValueError("s must be >= 0")
    if s == 0:
        return compose_all([power(psi(), -r), phi(), invert(phi()),
                            power(psi(), r)])
    return compose_all([power(psi(), s - r - 1), power(phi(), -s),
                        power(phi(), s), power(psi(), -s + r + 1)])


def j_chain(r: int, s: int) -> VMap:
    """The route V(r,s) -> V(s-1,s) -> V(s-1,0) -> V(0,0) by psi and phi
    powers, restricted to V(r,s).

    The restriction matters only in degenerate cases (s = 0, where the bare
    chain is a global shift); elsewhere the chain's domain is already
    exactly V(r, s).  The result is a total bijection onto V(0, 0).
    """
    if s < 0:
        raise ValueError("s must be >= 0")
    chain = compose_all([power(psi(), s - r - 1), power(phi(), -s),
                         power(psi(), 1 - s)])
    return restrict(chain, VSet(r, s))


# ---------------------------------------------------------------------------
# balls of the generated inverse semigroups


@dataclass
class VBall:
    generators: list           # (name, VMap) pairs
    cap: int
    maps: list                 # distinct VMaps in discovery order
    words: list                # witness: tuple of generator positions
    closed: bool

    def idempotents(self) -> list:
        return [m for m in self.maps if idempotent_check(m)]

    def witness(self, i: int) -> str:
        return " ".join(self.generators[k][0] for k in self.words[i])


def generate_ball(generators: Sequence, cap: int) -> VBall:
    """All distinct maps expressible as products of at most cap generators.

    Generators are (name, VMap) pairs; include inverses explicitly to build
    balls of inverse subsemigroups.  Distinctness is by (domain, shift).
    """
    if cap < 1 or cap > 12:
        raise ValueError("word length cap must be between 1 and 12")
    gens = list(generators)
    maps: list = []
    words: list = []
    index: dict = {}

    def push(m: VMap, word: tuple) -> bool:
        key = (m.domain, m.shift)
        if key in index:
            return False
        index[key] = len(maps)
        maps.append(m)
        words.append(word)
        return True

    frontier = []
    for k, (_, g) in enumerate(gens):
        if push(g, (k,)):
            frontier.append(len(maps) - 1)
    closed = False
    for _ in range(cap - 1):
        nxt = []
        for i in frontier:
            for k, (_, g) in enumerate(gens):
                m = compose(maps[i], g)
                if push(m, words[i] + (k,)):
                    nxt.append(len(maps) - 1)
        if not nxt:
            closed = True
            break
        frontier = nxt
    if not closed and frontier:
        closed = all(
            (compose(maps[i], g).domain, compose(maps[i], g).shift) in index
            for i in frontier for _, g in gens)
    return VBall(gens, cap, maps, words, closed)


def phi_ball(cap: int) -> VBall:
    f = phi()
    return generate_ball([("f", f), ("f'", invert(f))], cap)


def phi_psi_ball(cap: int) -> VBall:
    f, p = phi(), psi()
    return generate_ball([("f", f), ("f'", invert(f)),
                          ("p", p), ("p'", invert(p))], cap)


def fis_injectivity_check(bound: int) -> bool:
    """Domains of the canonical idempotents are pairwise distinct for all
    (r, s) with 1 <= r + s <= bound."""
    if bound < 1:
        raise ValueError("bound must be >= 1")
    seen = set()
    count = 0
    for total in range(1, bound + 1):
        for r in range(total + 1):
            s = total - r
            dom = idempotent_formula(r, s).domain
            seen.add(dom)
            count += 1
    return len(seen) == count


# ---------------------------------------------------------------------------
# brute-force partial-function model (the sampling oracle)


class BruteMap:
    """Dictionary-free exact model: a predicate domain plus a shift,
    evaluated pointwise.  Used by tests to validate the symbolic algebra."""

    def __init__(self, defined, shift: tuple):
        self.defined = defined
        self.shift = shift

    @classmethod
    def from_vmap(cls, m: VMap) -> "BruteMap":
        return cls(lambda x, y, d=m.domain: vset_contains(d, x, y), m.shift)

    def apply(self, x: int, y: int) -> Optional[tuple]:
        if y < 0 or not self.defined(x, y):
            return None
        return (x + self.shift[0], y + self.shift[1])

    def then(self, other: "BruteMap") -> "BruteMap":
        def defined(x, y):
            z = self.apply(x, y)
            return z is not None and other.apply(*z) is not None
        return BruteMap(defined,
                        (self.shift[0] + other.shift[0],
                         self.shift[1] + other.shift[1]))

    def inverse(self) -> "BruteMap":
        dx, dy = self.shift

        def defined(x, y):
            return self.apply(x - dx, y - dy) is not None
        return BruteMap(defined, (-dx, -dy))
