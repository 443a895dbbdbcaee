"""Concrete semigroups: construction oracles and closed-form Green answers.

Every structure the test suite analyzes is built here, either as an explicit
multiplication table or as an Oracle for the engine's enumerator.  Where a
closed-form Green criterion is known, it is exposed next to the construction
so the engine's two general algorithms can be cross-validated against it.
"""

from __future__ import annotations

import random
from typing import Optional, Sequence

from .engine import (BallEnumeration, BudgetError, FiniteSemigroup, Oracle,
                     adjoin_identity, ball_enumerate, direct_product,
                     enumerate_oracle)
from .munn import FisTriple

# ---------------------------------------------------------------------------
# bicyclic monoid


def bicyclic_mult(x: tuple, y: tuple) -> tuple:
    """(m,n)(p,q) = (m - n + max(n,p), q - p + max(n,p))."""
    m, n = x
    p, q = y
    k = max(n, p)
    return (m - n + k, q - p + k)


def bicyclic_invert(x: tuple) -> tuple:
    m, n = x
    return (n, m)


def bicyclic_green(x: tuple, y: tuple, relation: str) -> bool:
    """Closed form: L compares second coordinates, R first; the monoid is
    bisimple, so D and J relate everything."""
    relation = relation.upper()
    if relation == "L":
        return x[1] == y[1]
    if relation == "R":
        return x[0] == y[0]
    if relation == "H":
        return x == y
    if relation in ("D", "J"):
        return True
    raise ValueError(f"unknown relation {relation!r}")


def bicyclic_oracle() -> Oracle:
    return Oracle(bicyclic_mult, unary=bicyclic_invert,
                  name=lambda e: f"({e[0]},{e[1]})")


def bicyclic_ball(radius: int) -> BallEnumeration:
    """Ball of the bicyclic monoid on generators (1,0), (0,1); the identity
    (0,0) is seeded as the empty product."""
    return ball_enumerate(bicyclic_oracle(), [(1, 0), (0, 1)], radius,
                          seeds=[(0, 0)])


# ---------------------------------------------------------------------------
# five-element Brandt semigroup


def b2() -> FiniteSemigroup:
    """B2 = {a, a', aa', a'a, 0} with a^2 = 0, realized by 2x2 matrix units.

    Elements are coded as (i, j) pairs with (i,j)(k,l) = (i,l) when j = k
    and 0 otherwise; the unary operation transposes.
    """
    elems = [(1, 2), (2, 1), (1, 1), (2, 2), None]
    names = ["a", "a'", "aa'", "a'a", "0"]
    pos = {e: i for i, e in enumerate(elems)}

    def mul(x, y):
        if x is None or y is None:
            return None
        return (x[0], y[1]) if x[1] == y[0] else None

    table = [[pos[mul(x, y)] for y in elems] for x in elems]
    unary = [pos[None if x is None else (x[1], x[0])] for x in elems]
    return FiniteSemigroup(table, names=names, keys=elems, unary=unary,
                           generators=[0, 1])


def b2_with_identity() -> FiniteSemigroup:
    return adjoin_identity(b2())


# ---------------------------------------------------------------------------
# monogenic monoids N_p


def monogenic_monoid(p: int) -> FiniteSemigroup:
    """N_p: p + 1 elements 1, a, ..., a^p with a^i a^j = a^min(i+j, p)."""
    if p < 1:
        raise ValueError("index must be >= 1")
    n = p + 1
    table = [[min(i + j, p) for j in range(n)] for i in range(n)]
    names = ["1"] + [f"a^{i}" if i > 1 else "a" for i in range(1, n)]
    return FiniteSemigroup(table, names=names, generators=[0, 1])


def natural_numbers_ball(radius: int) -> BallEnumeration:
    """Ball of the free monogenic semigroup (N, +) on the generator 1."""
    oracle = Oracle(lambda x, y: x + y)
    return ball_enumerate(oracle, [1], radius)


# ---------------------------------------------------------------------------
# P = (Z, o): completely regular, L-finite, not R-finite


def p_mult(m: int, n: int) -> int:
    """m o n = m + n when m is even, m when m is odd."""
    return m + n if m % 2 == 0 else m


def p_unary(m: int) -> int:
    """x' is -x for even x and x for odd x; then x o x' is the idempotent
    of the H-class of x."""
    return -m if m % 2 == 0 else m


def p_green(a: int, b: int, relation: str) -> bool:
    """Closed form: the L-classes are the evens and the odds; the R- and
    H-classes are the evens and odd singletons; D = J = L."""
    relation = relation.upper()
    even = a % 2 == 0 and b % 2 == 0
    if relation in ("L", "D", "J"):
        return even or (a % 2 == 1 and b % 2 == 1)
    if relation in ("R", "H"):
        return even or a == b
    raise ValueError(f"unknown relation {relation!r}")


class PWindow:
    """A finite window of P = (Z, o) usable as an identity-check structure.

    The operation is total on Z so term evaluation never leaves the
    semigroup; the window only bounds the assignments quantified over.
    """

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("window bound must be >= 1")
        self.n = n
        self.elements = list(range(-n, n + 1))
        self.completely_regular = True
        self.zero_element = None

    def mult(self, a: int, b: int) -> int:
        return p_mult(a, b)

    def unary(self, a: int) -> int:
        return p_unary(a)

    def __repr__(self) -> str:
        return f"PWindow({self.n})"


def p_witnessed_related(a: int, b: int, relation: str, window: int,
                        margin: int = 3) -> Optional[dict]:
    """Witness search for P with multipliers from [-margin*window, ...]."""
    relation = relation.upper()
    lo, hi = -margin * window, margin * window

    def one_sided(x, y, left: bool):
        if x == y:
            return ("identity",)
        for u in range(lo, hi + 1):
            z = p_mult(u, x) if left else p_mult(x, u)
            if z == y:
                return (u,)
        return None

    def mutual(x, y, left: bool):
        fwd = one_sided(x, y, left)
        bwd = one_sided(y, x, left)
        if fwd is not None and bwd is not None:
            return {"u": fwd, "v": bwd}
        return None

    if relation == "L":
        return mutual(a, b, True)
    if relation == "R":
        return mutual(a, b, False)
    if relation == "H":
        lw = mutual(a, b, True)
        rw = mutual(a, b, False)
        if lw and rw:
            return {"L": lw, "R": rw}
        return None
    if relation == "D":
        for c in range(lo, hi + 1):
            lw = mutual(a, c, True)
            if lw is None:
                continue
            rw = mutual(c, b, False)
            if rw is not None:
                return {"via": c, "L": lw, "R": rw}
        return None
    raise ValueError(f"unsupported relation {relation!r}")


def p_window_green_counts(window: int, relation: str, margin: int = 3) -> int:
    """Number of witnessed classes among the window elements."""
    elems = list(range(-window, window + 1))
    labels = []
    classes: list = []
    for x in elems:
        for ci, rep in enumerate(classes):
            if p_witnessed_related(rep, x, relation, window, margin):
                labels.append(ci)
                break
        else:
            labels.append(len(classes))
            classes.append(x)
    return len(classes)


# ---------------------------------------------------------------------------
# trivial families


def right_zero(n: int) -> FiniteSemigroup:
    """x y = y; one R-class, singleton L-classes.  Bands carry x' = x."""
    if n < 1:
        raise ValueError("size must be >= 1")
    table = [[j for j in range(n)] for _ in range(n)]
    return FiniteSemigroup(table, names=[f"r{i + 1}" for i in range(n)],
                           unary=list(range(n)), generators=range(n))


def left_zero(n: int) -> FiniteSemigroup:
    """x y = x; one L-class, singleton R-classes."""
    if n < 1:
        raise ValueError("size must be >= 1")
    table = [[i for _ in range(n)] for i in range(n)]
    return FiniteSemigroup(table, names=[f"l{i + 1}" for i in range(n)],
                           unary=list(range(n)), generators=range(n))


def null_semigroup(n: int) -> FiniteSemigroup:
    """All products are the zero; n counts the zero element."""
    if n < 1:
        raise ValueError("size must be >= 1")
    table = [[0] * n for _ in range(n)]
    names = ["0"] + [f"b{i}" for i in range(1, n)]
    return FiniteSemigroup(table, names=names, generators=range(1, n) or [0])


# ---------------------------------------------------------------------------
# transformation semigroups


def transformation_oracle(n: int) -> Oracle:
    # Right action: x (fg) = (x f) g.
    return Oracle(lambda f, g: tuple(g[f[i]] for i in range(n)),
                  name=lambda f: "".join(str(x) for x in f))


def transformation_semigroup(n: int, maps: Sequence[Sequence[int]],
                             max_elements: int = 10_000):
    """Closure of total maps on [n] under composition."""
    if n > 5:
        raise BudgetError("transformation domain capped at 5 points")
    maps = [tuple(m) for m in maps]
    for m in maps:
        if len(m) != n or any(not (0 <= x < n) for x in m):
            raise ValueError("maps must be total on the domain")
    return enumerate_oracle(transformation_oracle(n), maps,
                            max_elements=max_elements)


def random_transformation_semigroup(n: int, seed: int, k: int,
                                    max_elements: int = 10_000):
    rng = random.Random(seed)
    maps = [tuple(rng.randrange(n) for _ in range(n)) for _ in range(k)]
    return transformation_semigroup(n, maps, max_elements=max_elements)


# ---------------------------------------------------------------------------
# square-free machinery


_MORPHISM = {"a": "abc", "b": "ac", "c": "b"}


def squarefree_word(length: int) -> str:
    """Prefix of the ternary square-free fixed point of a->abc, b->ac, c->b.

    The morphism is prolongable on 'a', so each iterate is a prefix of the
    next and prefixes of the fixed point are obtained by iterating until
    long enough.
    """
    if length < 1:
        raise ValueError("length must be >= 1")
    w = "a"
    while len(w) < length:
        w = "".join(_MORPHISM[ch] for ch in w)
    return w[:length]


def has_square_factor(w: str) -> bool:
    n = len(w)
    for half in range(1, n // 2 + 1):
        for i in range(n - 2 * half + 1):
            if w[i:i + half] == w[i + half:i + 2 * half]:
                return True
    return False


def _stable_factor_set(cap: int) -> set:
    """Factors of the reference word of length <= cap, collected from
    doubling prefixes until two successive rounds agree."""
    base = max(64, 8 * cap)
    prev = None
    k = 0
    while True:
        prefix = squarefree_word(base * (2 ** k))
        factors = {prefix[i:i + l]
                   for l in range(1, cap + 1)
                   for i in range(len(prefix) - l + 1)}
        if prev is not None and factors == prev:
            return factors
        prev = factors
        k += 1


def sw_semigroup(cap: int) -> FiniteSemigroup:
    """Finite stand-in for the square-free-factor semigroup: the factors of
    the reference word of length <= cap plus a zero, with u * v = uv when
    the concatenation is again an element and 0 otherwise."""
    if cap < 1:
        raise ValueError("cap must be >= 1")
    factors = sorted(_stable_factor_set(cap), key=lambda w: (len(w), w))
    elems = factors + ["0"]
    pos = {w: i for i, w in enumerate(elems)}
    zero = pos["0"]
    n = len(elems)
    table = [[zero] * n for _ in range(n)]
    fset = set(factors)
    for i, u in enumerate(factors):
        for j, v in enumerate(factors):
            w = u + v
            if w in fset:
                table[i][j] = pos[w]
    gens = [pos[c] for c in "abc" if c in pos]
    return FiniteSemigroup(table, names=elems, generators=gens or range(n))


# ---------------------------------------------------------------------------
# pattern instances and free objects of [u = 0]


MAX_PATTERN_WORD = 24
MAX_PATTERN_LEN = 6


def pattern_instance_free(w: str, pattern: str) -> bool:
    """True when no factor of w is the image of the pattern under a
    substitution sending each variable to a nonempty word.

    Backtracking over factor splittings with repeated-variable consistency;
    exponential in the worst case, so desk-scale caps are enforced.
    """
    if not pattern:
        raise ValueError("pattern must be nonempty")
    if len(w) > MAX_PATTERN_WORD or len(pattern) > MAX_PATTERN_LEN:
        raise BudgetError("pattern matching capped at |w| <= 24, |pattern| <= 6")

    def match(f: str, k: int, binding: dict) -> bool:
        if k == len(pattern):
            return not f
        var = pattern[k]
        bound = binding.get(var)
        if bound is not None:
            if f.startswith(bound):
                return match(f[len(bound):], k + 1, binding)
            return False
        for cut in range(1, len(f) + 1):
            binding[var] = f[:cut]
            if match(f[cut:], k + 1, binding):
                del binding[var]
                return True
            del binding[var]
        return False

    n = len(w)
    for i in range(n):
        for j in range(i + len(pattern), n + 1):
            if match(w[i:j], 0, {}):
                return False
    return True


def free_nil(pattern: str, letters: int, cap: int, *,
             max_elements: int = 5_000) -> FiniteSemigroup:
    """Capped n-generated free object of the variety [u = 0].

    Nonzero elements are the pattern-instance-free words of length <= cap;
    products concatenate, falling to 0 on a pattern instance.  Words longer
    than the cap also map to 0, so the cap acts as a Rees quotient of the
    true free object (recorded in the name).
    """
    if letters < 1 or letters > 26:
        raise ValueError("letters out of range")
    alphabet = [chr(ord("a") + i) for i in range(letters)]
    words: list = []
    frontier = [c for c in alphabet if pattern_instance_free(c, pattern)]
    words.extend(frontier)
    for _ in range(cap - 1):
        nxt = []
        for w in frontier:
            for c in alphabet:
                wc = w + c
                if pattern_instance_free(wc, pattern):
                    nxt.append(wc)
        words.extend(nxt)
        frontier = nxt
        if len(words) > max_elements:
            raise BudgetError(
                f"free object exceeds {max_elements} nonzero elements")
    elems = words + ["0"]
    pos = {w: i for i, w in enumerate(elems)}
    zero = pos["0"]
    n = len(elems)
    table = [[zero] * n for _ in range(n)]
    for i, u in enumerate(words):
        for j, v in enumerate(words):
            w = u + v
            if len(w) <= cap and w in pos:
                table[i][j] = pos[w]
    gens = [pos[c] for c in alphabet if c in pos] or [zero]
    return FiniteSemigroup(table, names=elems, generators=gens)


# ---------------------------------------------------------------------------
# M_n: Rees quotients of the free monogenic inverse semigroup


def mn_size(n: int) -> int:
    return 1 + sum((span + 1) ** 2 for span in range(1, n))


def mn_table(n: int) -> FiniteSemigroup:
    """M_n: the one-letter Munn triples of span < n plus a zero.

    An element lies in the collapsed ideal exactly when its span reaches n:
    the generator of the ideal has span n and left or right multiplication
    never shrinks the span.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    triples = [FisTriple(r, span - r, t)
               for span in range(1, n)
               for r in range(span + 1)
               for t in range(-r, span - r + 1)]
    triples.sort(key=lambda x: (x.span, x.r, x.t))
    elems: list = list(triples) + ["0"]
    pos = {e: i for i, e in enumerate(elems)}
    zero = pos["0"]
    m = len(elems)
    table = [[zero] * m for _ in range(m)]
    for i, x in enumerate(triples):
        for j, y in enumerate(triples):
            z = x.multiply(y)
            if z.span < n:
                table[i][j] = pos[z]
    unary = [pos[x.inverse()] for x in triples] + [zero]
    names = [f"({x.r},{x.s},{x.t})" for x in triples] + ["0"]
    gens = [pos[FisTriple(0, 1, 1)], pos[FisTriple(1, 0, -1)]]
    return FiniteSemigroup(table, names=names, keys=elems, unary=unary,
                           generators=gens)


def mn_size_brute(n: int) -> int:
    """Independent count of |M_n| by walking one-letter words.

    States are (low, high, position) walk profiles, exactly the one-letter
    Munn trees; breadth-first closure over the two unit steps enumerates
    every element of span below n without using the triple product law.
    """
    start = (0, 0, 0)
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for lo, hi, pos in frontier:
            for step in (1, -1):
                p = pos + step
                state = (min(lo, p), max(hi, p), p)
                if state[1] - state[0] >= n:
                    continue
                if state not in seen:
                    seen.add(state)
                    nxt.append(state)
        frontier = nxt
    # The empty-walk start state is not an element; the adjoined zero is.
    return (len(seen) - 1) + 1


# ---------------------------------------------------------------------------
# zoo spec strings


def parse_zoo(spec: str):
    """CLI construction strings.

    b2, b2^1, mn:<n>, np:<p>, pz:<window>, rz:<n>, lz:<n>, null:<n>,
    sw:<cap>, freenil:<pattern>:<letters>:<cap>, bicyclic:<radius>,
    prod:<spec>,<spec>,..., transf:<n>:<seed>:<k>.
    """
    spec = spec.strip()
    if spec == "b2":
        return b2()
    if spec == "b2^1":
        return b2_with_identity()
    head, _, rest = spec.partition(":")
    try:
        if head == "mn":
            return mn_table(int(rest))
        if head == "np":
            return monogenic_monoid(int(rest))
        if head == "pz":
            return PWindow(int(rest))
        if head == "rz":
            return right_zero(int(rest))
        if head == "lz":
            return left_zero(int(rest))
        if head == "null":
            return null_semigroup(int(rest))
        if head == "sw":
            return sw_semigroup(int(rest))
        if head == "bicyclic":
            return bicyclic_ball(int(rest))
        if head == "freenil":
            pattern, letters, cap = rest.split(":")
            return free_nil(pattern, int(letters), int(cap))
        if head == "transf":
            n, seed, k = (int(x) for x in rest.split(":"))
            return random_transformation_semigroup(n, seed, k)
        if head == "prod":
            parts = _split_product(rest)
            factors = []
            for part in parts:
                f = parse_zoo(part)
                if not isinstance(f, FiniteSemigroup):
                    raise ValueError(
                        f"product factor {part!r} is not a closed table")
                factors.append(f)
            return direct_product(factors)
    except (ValueError, BudgetError) as exc:
        raise ValueError(f"bad zoo spec {spec!r}: {exc}") from None
    raise ValueError(f"unknown zoo spec {spec!r}")


def _split_product(rest: str) -> list:
    # prod factors are comma separated; nested prod is not supported.
    parts = [p for p in rest.split(",") if p]
    if not parts:
        raise ValueError("empty product")
    return parts
