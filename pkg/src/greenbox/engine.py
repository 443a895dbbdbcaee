"""Finite semigroup engine.

Enumerates finitely generated semigroups from a multiplication oracle,
computes Green's relations by two independent methods (strong connectivity
on Cayley graphs, and direct principal-ideal comparison), and provides the
standard constructions: direct products, Rees quotients, adjoined identity
and zero, table isomorphism, eggbox pictures, and bounded "witnessed"
Green analysis for semigroups that do not close within budget.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

RELATIONS = ("H", "L", "R", "D", "J")


class OracleError(RuntimeError):
    """The multiplication oracle contradicted itself during enumeration."""


class BudgetError(ValueError):
    """A requested computation exceeds its declared desk-scale budget."""


# ---------------------------------------------------------------------------
# core structures


class FiniteSemigroup:
    """Indexed element set with a full multiplication table.

    ``table[i][j]`` is the index of the product of elements i and j.
    ``unary`` is an optional involution-style unary operation (element
    index array).  ``generators`` must genuinely generate: the Cayley-graph
    Green computation relies on it.
    """

    def __init__(self, table: Sequence[Sequence[int]], *,
                 names: Optional[Sequence[str]] = None,
                 keys: Optional[Sequence] = None,
                 unary: Optional[Sequence[int]] = None,
                 generators: Optional[Iterable[int]] = None):
        self.table = [list(row) for row in table]
        n = len(self.table)
        for row in self.table:
            if len(row) != n or any(not (0 <= x < n) for x in row):
                raise ValueError("table is not a square matrix of element indices")
        self.keys = list(keys) if keys is not None else list(range(n))
        self.names = [str(x) for x in (names if names is not None else self.keys)]
        self.unary = list(unary) if unary is not None else None
        gens = sorted(set(generators)) if generators is not None else list(range(n))
        if not gens:
            raise ValueError("generator set must be nonempty")
        if len(gens) < n:
            # The Cayley-graph Green computation silently depends on this.
            missed = n - len(_closure(self.table, gens))
            if missed:
                raise ValueError(
                    f"declared generators miss {missed} element(s)")
        self.generators = gens
        self.identity = find_identity(self.table)
        self.zero = find_zero(self.table)
        self._cr = None

    def __len__(self) -> int:
        return len(self.table)

    def mult(self, i: int, j: int) -> int:
        return self.table[i][j]

    def unary_of(self, i: int) -> int:
        if self.unary is None:
            raise ValueError("no unary operation on this semigroup")
        return self.unary[i]

    def idempotents(self) -> list:
        return [i for i in range(len(self)) if self.table[i][i] == i]

    def is_completely_regular(self) -> bool:
        """Unary present and x x' = x' x, x x' x = x for every element."""
        if self._cr is None:
            if self.unary is None:
                self._cr = False
            else:
                t, u = self.table, self.unary
                self._cr = all(
                    t[x][u[x]] == t[u[x]][x] and t[t[x][u[x]]][x] == x
                    for x in range(len(self)))
        return self._cr

    def element_index(self, key) -> int:
        return self.keys.index(key)

    def __repr__(self) -> str:
        return f"FiniteSemigroup(n={len(self)}, generators={self.generators})"


def _closure(table, seed) -> set:
    """Subsemigroup generated by the seed indices."""
    closed = set(seed)
    frontier = list(closed)
    while frontier:
        fresh = []
        for x in frontier:
            for y in list(closed):
                for z in (table[x][y], table[y][x]):
                    if z not in closed:
                        closed.add(z)
                        fresh.append(z)
        frontier = fresh
    return closed


def find_identity(table) -> Optional[int]:
    n = len(table)
    for e in range(n):
        if all(table[e][x] == x == table[x][e] for x in range(n)):
            return e
    return None


def find_zero(table) -> Optional[int]:
    n = len(table)
    for z in range(n):
        if all(table[z][x] == z == table[x][z] for x in range(n)):
            return z
    return None


def verify_associative(table, *, sample: int = 100_000, seed: int = 0,
                       exhaustive_limit: int = 200) -> Optional[tuple]:
    """Return a witness triple (x, y, z) with x(yz) != (xy)z, or None.

    Exhaustive up to ``exhaustive_limit`` elements (n^3 products), randomly
    sampled above.  Oracle-built tables are associative by construction;
    this guards hand-entered ones.
    """
    n = len(table)
    if n <= exhaustive_limit:
        for x in range(n):
            tx = table[x]
            for y in range(n):
                txy = table[tx[y]]
                ty = table[y]
                for z in range(n):
                    if txy[z] != tx[ty[z]]:
                        return (x, y, z)
        return None
    rng = random.Random(seed)
    for _ in range(sample):
        x, y, z = rng.randrange(n), rng.randrange(n), rng.randrange(n)
        if table[table[x][y]][z] != table[x][table[y][z]]:
            return (x, y, z)
    return None


# ---------------------------------------------------------------------------
# enumeration from an oracle


class Oracle:
    """Behavioral element interface for enumeration.

    ``mult`` is the binary operation, ``key`` maps an element to a hashable
    canonical value (identity by default), ``unary`` is an optional unary
    operation, ``name`` an optional display renderer.
    """

    def __init__(self, mult: Callable, *, key: Optional[Callable] = None,
                 unary: Optional[Callable] = None,
                 name: Optional[Callable] = None):
        self.mult = mult
        self.key = key if key is not None else (lambda e: e)
        self.unary = unary
        self.name = name if name is not None else (lambda e: str(e))


class BallEnumeration:
    """Elements of word length <= radius in the generators.

    ``closed`` is True when the ball is multiplication-closed, i.e. it is
    the whole generated semigroup.  ``words`` hold one shortest witness per
    element as a tuple of generator indices; seeds get the empty word.
    """

    def __init__(self, oracle: Oracle, generators: Sequence, seeds: Sequence,
                 radius: int, elements: list, words: list, lengths: list,
                 closed: bool):
        self.oracle = oracle
        self.generators = list(generators)
        self.seeds = list(seeds)
        self.radius = radius
        self.elements = elements
        self.words = words
        self.lengths = lengths
        self.closed = closed
        self.index = {oracle.key(e): i for i, e in enumerate(elements)}
        self._extensions: dict = {}

    def __len__(self) -> int:
        return len(self.elements)

    def extend(self, radius: int, max_elements: int = 1_000_000) -> "BallEnumeration":
        if radius <= self.radius or self.closed:
            return self
        if radius not in self._extensions:
            self._extensions[radius] = ball_enumerate(
                self.oracle, self.generators, radius,
                seeds=self.seeds, max_elements=max_elements)
        return self._extensions[radius]

    def __repr__(self) -> str:
        return (f"BallEnumeration(radius={self.radius}, n={len(self)}, "
                f"closed={self.closed})")


def ball_enumerate(oracle: Oracle, generators: Sequence, radius: int,
                   *, seeds: Sequence = (),
                   max_elements: int = 1_000_000) -> BallEnumeration:
    """Breadth-first ball of the generated semigroup, one radius at a time.

    Elements appear in word-length order with ties broken by generator index,
    which makes all downstream reports deterministic.
    """
    if not generators:
        raise ValueError("generator set must be nonempty")
    key = oracle.key
    elements: list = []
    words: list = []
    lengths: list = []
    index: dict = {}

    def push(e, word, length) -> bool:
        k = key(e)
        if k in index:
            stored = elements[index[k]]
            if stored != e:
                # Key collision across structurally distinct elements: spot
                # check multiplication behavior before trusting the key.
                for g in generators:
                    if (key(oracle.mult(e, g)) != key(oracle.mult(stored, g))
                            or key(oracle.mult(g, e))
                            != key(oracle.mult(g, stored))):
                        raise OracleError(
                            f"canonical key {k!r} collides across elements "
                            f"with different multiplication behavior")
            return False
        index[k] = len(elements)
        elements.append(e)
        words.append(word)
        lengths.append(length)
        return True

    for s in seeds:
        push(s, (), 0)
    frontier = []
    for gi, g in enumerate(generators):
        if push(g, (gi,), 1):
            frontier.append(len(elements) - 1)
    closed = False
    level = 1
    while level < radius:
        nxt = []
        for i in frontier:
            for gi, g in enumerate(generators):
                z = oracle.mult(elements[i], g)
                if push(z, words[i] + (gi,), level + 1):
                    nxt.append(len(elements) - 1)
                    if len(elements) > max_elements:
                        raise BudgetError(
                            f"ball exceeded {max_elements} elements")
        if not nxt:
            closed = True
            break
        frontier = nxt
        level += 1
    if not closed and frontier:
        # Peek one more level to detect closure exactly at the radius.
        closed = all(
            key(oracle.mult(elements[i], g)) in index
            for i in frontier for g in generators)
    elif not frontier:
        closed = True
    return BallEnumeration(oracle, generators, seeds, radius,
                           elements, words, lengths, closed)


def enumerate_oracle(oracle: Oracle, generators: Sequence, *,
                     seeds: Sequence = (), max_elements: int = 10_000,
                     max_word_length: int = 1_000_000):
    """Close the generators under the oracle.

    Returns a FiniteSemigroup when the closure is reached within budget,
    otherwise the BallEnumeration at the budget boundary (a normal result,
    not an error).  An oracle whose canonical keys collide across distinct
    multiplication behavior raises OracleError.
    """
    try:
        ball = ball_enumerate(oracle, generators, max_word_length,
                              seeds=seeds, max_elements=max_elements)
    except BudgetError:
        # Re-enumerate up to the largest radius that stayed within budget.
        radius = 1
        ball = ball_enumerate(oracle, generators, radius, seeds=seeds,
                              max_elements=max_elements)
        while not ball.closed:
            try:
                bigger = ball_enumerate(oracle, generators, radius + 1,
                                        seeds=seeds, max_elements=max_elements)
            except BudgetError:
                break
            ball = bigger
            radius += 1
        return ball
    if not ball.closed:
        return ball
    return table_from_ball(ball)


def table_from_ball(ball: BallEnumeration) -> FiniteSemigroup:
    if not ball.closed:
        raise ValueError("ball is not closed")
    oracle = ball.oracle
    key = oracle.key
    n = len(ball.elements)
    table = []
    for x in ball.elements:
        row = []
        for y in ball.elements:
            k = key(oracle.mult(x, y))
            if k not in ball.index:
                raise OracleError(
                    f"product key {k!r} not in the closed element set")
            row.append(ball.index[k])
        table.append(row)
    unary = None
    if oracle.unary is not None:
        unary = []
        for x in ball.elements:
            k = key(oracle.unary(x))
            if k not in ball.index:
                raise OracleError(f"unary image key {k!r} not enumerated")
            unary.append(ball.index[k])
    gen_idx = {ball.index[key(g)] for g in ball.generators}
    gen_idx.update(ball.index[key(s)] for s in ball.seeds)
    names = [oracle.name(e) for e in ball.elements]
    return FiniteSemigroup(table, names=names,
                           keys=[key(e) for e in ball.elements],
                           unary=unary, generators=gen_idx)


# ---------------------------------------------------------------------------
# Green's relations


@dataclass
class GreenStructure:
    """Five partitions of the element set, as dense class-id arrays."""

    h: list
    l: list
    r: list
    d: list
    j: list

    def partition(self, relation: str) -> list:
        return getattr(self, relation.lower())

    def count(self, relation: str) -> int:
        p = self.partition(relation)
        return len(set(p)) if p else 0

    def counts(self) -> dict:
        return {k: self.count(k) for k in RELATIONS}

    def classes(self, relation: str) -> list:
        p = self.partition(relation)
        out: dict = {}
        for i, c in enumerate(p):
            out.setdefault(c, []).append(i)
        return [out[c] for c in sorted(out)]

    def related(self, relation: str, x: int, y: int) -> bool:
        p = self.partition(relation)
        return p[x] == p[y]


def _dense(labels: Sequence) -> list:
    """Renumber arbitrary labels to dense ids ordered by first occurrence."""
    seen: dict = {}
    out = []
    for lab in labels:
        if lab not in seen:
            seen[lab] = len(seen)
        out.append(seen[lab])
    return out


def _sccs(n: int, succ: Callable) -> list:
    """Iterative Tarjan; returns a dense component-id array."""
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    comp = [-1] * n
    stack: list = []
    counter = 0
    ncomp = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, iter(succ(root)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, iter(succ(w))))
                    advanced = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                pv = work[-1][0]
                low[pv] = min(low[pv], low[v])
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = ncomp
                    if w == v:
                        break
                ncomp += 1
    return _dense(comp)


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, x: int, y: int) -> None:
        x, y = self.find(x), self.find(y)
        if x != y:
            if x > y:
                x, y = y, x
            self.parent[y] = x

    def labels(self) -> list:
        return [self.find(x) for x in range(len(self.parent))]


def _join(p1: Sequence, p2: Sequence) -> list:
    uf = _UnionFind(len(p1))
    first: dict = {}
    for i, c in enumerate(p1):
        if c in first:
            uf.union(first[c], i)
        else:
            first[c] = i
    first = {}
    for i, c in enumerate(p2):
        if c in first:
            uf.union(first[c], i)
        else:
            first[c] = i
    return _dense(uf.labels())


def green_scc(fs: FiniteSemigroup) -> GreenStructure:
    """Green's relations via mutual reachability on Cayley graphs.

    Right Cayley edges x -> x g give R, left edges x -> g x give L, the
    union of both edge kinds gives J.  H is the meet of L and R, D their
    join.
    """
    n = len(fs)
    t = fs.table
    gens = fs.generators
    r = _sccs(n, lambda x: (t[x][g] for g in gens))
    l = _sccs(n, lambda x: (t[g][x] for g in gens))

    def both(x):
        for g in gens:
            yield t[x][g]
            yield t[g][x]

    j = _sccs(n, both)
    h = _dense(list(zip(l, r)))
    d = _join(l, r)
    return GreenStructure(h=h, l=l, r=r, d=d, j=j)


def green_definitional(fs: FiniteSemigroup) -> GreenStructure:
    """Green's relations by comparing principal ideals as element sets.

    Independent of green_scc; the two must agree on every closed table,
    which the test suite asserts as the cross-validation oracle.
    """
    n = len(fs)
    t = fs.table
    rng_n = range(n)
    left_ideals = [frozenset([x] + [t[y][x] for y in rng_n]) for x in rng_n]
    right_ideals = [frozenset([x] + [t[x][y] for y in rng_n]) for x in rng_n]
    l = _dense(left_ideals)
    r = _dense(right_ideals)
    # Two-sided ideal: union of u S^1 over u in S^1 x.
    two_sided: dict = {}
    j_labels = []
    for x in rng_n:
        lid = l[x]
        if lid not in two_sided:
            acc: set = set()
            for u in left_ideals[x]:
                acc.update(right_ideals[u])
            two_sided[lid] = frozenset(acc)
        j_labels.append(two_sided[lid])
    j = _dense(j_labels)
    h = _dense(list(zip(l, r)))
    # D = L o R: x D z iff some y shares the L-class of x and the R-class
    # of z.  Link L-class lc to R-class rc whenever some y realizes the
    # pair; D-classes are the components of that bipartite graph.
    n_l = len(set(l))
    uf = _UnionFind(n_l + len(set(r)))
    for y in rng_n:
        uf.union(l[y], n_l + r[y])
    d = _dense([uf.find(l[x]) for x in rng_n])
    return GreenStructure(h=h, l=l, r=r, d=d, j=j)


# ---------------------------------------------------------------------------
# eggbox picture


@dataclass
class DClassBox:
    d_class: int
    r_classes: list
    l_classes: list
    h_sizes: list          # grid indexed [r][l]
    regular: bool


def eggbox(fs: FiniteSemigroup, gs: Optional[GreenStructure] = None) -> list:
    gs = gs if gs is not None else green_scc(fs)
    idem = set(fs.idempotents())
    boxes = []
    for members in gs.classes("D"):
        rs = sorted({gs.r[x] for x in members})
        ls = sorted({gs.l[x] for x in members})
        grid = [[0] * len(ls) for _ in rs]
        rpos = {c: i for i, c in enumerate(rs)}
        lpos = {c: i for i, c in enumerate(ls)}
        for x in members:
            grid[rpos[gs.r[x]]][lpos[gs.l[x]]] += 1
        boxes.append(DClassBox(
            d_class=gs.d[members[0]],
            r_classes=rs, l_classes=ls, h_sizes=grid,
            regular=any(x in idem for x in members)))
    return boxes


def format_eggbox(fs: FiniteSemigroup, gs: Optional[GreenStructure] = None) -> str:
    gs = gs if gs is not None else green_scc(fs)
    c = gs.counts()
    lines = [f"{len(fs)} elements; "
             + " ".join(f"{k}={c[k]}" for k in RELATIONS)]
    for box in eggbox(fs, gs):
        tag = "regular" if box.regular else "non-regular"
        lines.append(f"D-class {box.d_class} ({tag}): "
                     f"{len(box.r_classes)}x{len(box.l_classes)}")
        for row in box.h_sizes:
            lines.append("  " + " ".join(str(x) for x in row))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# constructions


def direct_product(factors: Sequence[FiniteSemigroup], *,
                   max_size: int = 20_000) -> FiniteSemigroup:
    """Componentwise product.  Generators are all elements: the product of
    the factor generating sets does not generate in general, and Cayley
    reachability needs a true generating set."""
    if not factors:
        raise ValueError("need at least one factor")
    size = 1
    for f in factors:
        size *= len(f)
    if size > max_size:
        raise BudgetError(f"product size {size} exceeds bound {max_size}")
    import itertools
    tuples = list(itertools.product(*[range(len(f)) for f in factors]))
    pos = {t: i for i, t in enumerate(tuples)}
    table = [[pos[tuple(f.table[a[k]][b[k]] for k, f in enumerate(factors))]
              for b in tuples] for a in tuples]
    unary = None
    if all(f.unary is not None for f in factors):
        unary = [pos[tuple(f.unary[a[k]] for k, f in enumerate(factors))]
                 for a in tuples]
    names = ["(" + ",".join(factors[k].names[i] for k, i in enumerate(t)) + ")"
             for t in tuples]
    return FiniteSemigroup(table, names=names, keys=tuples, unary=unary,
                           generators=range(len(tuples)))


def rees_quotient(fs: FiniteSemigroup, ideal: Iterable[int]) -> FiniteSemigroup:
    """Collapse a two-sided ideal to a single zero."""
    ideal = set(ideal)
    n = len(fs)
    if not ideal or not ideal <= set(range(n)):
        raise ValueError("ideal must be a nonempty set of element indices")
    for s in range(n):
        for i in ideal:
            for bad in (fs.table[s][i], fs.table[i][s]):
                if bad not in ideal:
                    raise ValueError(
                        f"not an ideal: witness pair ({fs.names[s]}, {fs.names[i]})")
    keep = [x for x in range(n) if x not in ideal]
    new_index = {x: i for i, x in enumerate(keep)}
    zero = len(keep)
    m = zero + 1

    def image(x: int) -> int:
        return new_index[x] if x not in ideal else zero

    table = [[0] * m for _ in range(m)]
    for i, x in enumerate(keep):
        for jj, y in enumerate(keep):
            table[i][jj] = image(fs.table[x][y])
        table[i][zero] = zero
        table[zero][i] = zero
    table[zero][zero] = zero
    unary = None
    if fs.unary is not None:
        unary = [image(fs.unary[x]) for x in keep] + [zero]
    names = [fs.names[x] for x in keep] + ["0"]
    gens = sorted({image(g) for g in fs.generators})
    return FiniteSemigroup(table, names=names, unary=unary, generators=gens)


def _adjoin(fs: FiniteSemigroup, as_identity: bool) -> FiniteSemigroup:
    n = len(fs)
    table = [row + [0] for row in fs.table]
    for i in range(n):
        table[i][n] = i if as_identity else n
    table.append([i if as_identity else n for i in range(n)] + [n])
    unary = None
    if fs.unary is not None:
        unary = list(fs.unary) + [n]
    label = "1" if as_identity else "0"
    while label in fs.names:
        label += "*"
    names = list(fs.names) + [label]
    gens = sorted(set(fs.generators) | {n})
    return FiniteSemigroup(table, names=names, unary=unary, generators=gens)


def adjoin_identity(fs: FiniteSemigroup) -> FiniteSemigroup:
    """Adjoin a fresh identity even when one is already present."""
    return _adjoin(fs, True)


def adjoin_zero(fs: FiniteSemigroup) -> FiniteSemigroup:
    return _adjoin(fs, False)


def subsemigroup(fs: FiniteSemigroup, seed: Iterable[int]) -> tuple:
    """Closure of ``seed`` under multiplication (and unary when present).

    Returns (sub, embedding) where embedding[i] is the index in fs of
    element i of the subsemigroup.
    """
    closure = sorted(set(seed))
    current = set(closure)
    frontier = list(closure)
    while frontier:
        new = []
        for x in frontier:
            candidates = [fs.table[x][y] for y in current]
            candidates += [fs.table[y][x] for y in current]
            if fs.unary is not None:
                candidates.append(fs.unary[x])
            for z in candidates:
                if z not in current:
                    current.add(z)
                    new.append(z)
        frontier = new
    embedding = sorted(current)
    pos = {x: i for i, x in enumerate(embedding)}
    table = [[pos[fs.table[x][y]] for y in embedding] for x in embedding]
    unary = [pos[fs.unary[x]] for x in embedding] if fs.unary is not None else None
    names = [fs.names[x] for x in embedding]
    sub = FiniteSemigroup(table, names=names, unary=unary,
                          generators=[pos[x] for x in sorted(set(seed))])
    return sub, embedding


# ---------------------------------------------------------------------------
# table isomorphism


def iso_tables(fs1: FiniteSemigroup, fs2: FiniteSemigroup,
               *, max_size: int = 64) -> tuple:
    """Multiplication-preserving bijection search, or (False, None).

    A unary-preserving bijection is required when both tables carry a unary
    operation.  Invariant pruning (order profile, idempotency, Green class
    sizes) keeps the backtracking shallow at desk scale.
    """
    n = len(fs1)
    if n > max_size or len(fs2) > max_size:
        raise BudgetError(f"isomorphism search refused above {max_size} elements")
    if len(fs2) != n:
        return False, None
    use_unary = fs1.unary is not None and fs2.unary is not None

    def profiles(fs: FiniteSemigroup) -> list:
        gs = green_scc(fs)
        sizes = {k: {} for k in RELATIONS}
        for k in RELATIONS:
            for cls in gs.classes(k):
                for x in cls:
                    sizes[k][x] = len(cls)
        out = []
        for x in range(len(fs)):
            seen = {x: 1}
            y = x
            while True:
                y = fs.table[y][x]
                if y in seen:
                    idx, per = seen[y], len(seen) + 1 - seen[y]
                    break
                seen[y] = len(seen) + 1
            out.append((fs.table[x][x] == x, idx, per,
                        len(set(fs.table[x])),
                        len({fs.table[y][x] for y in range(len(fs))}),
                        tuple(sizes[k][x] for k in RELATIONS)))
        return out

    p1, p2 = profiles(fs1), profiles(fs2)
    if sorted(p1) != sorted(p2):
        return False, None
    candidates = [[y for y in range(n) if p2[y] == p1[x]] for x in range(n)]
    order = sorted(range(n), key=lambda x: len(candidates[x]))
    mapping = [-1] * n
    used = [False] * n

    def consistent(x: int, y: int) -> bool:
        if use_unary:
            ux = fs1.unary[x]
            if mapping[ux] != -1 and mapping[ux] != fs2.unary[y]:
                return False
        for z in range(n):
            mz = mapping[z]
            if mz == -1:
                continue
            p = mapping[fs1.table[x][z]]
            if p != -1 and fs2.table[y][mz] != p:
                return False
            p = mapping[fs1.table[z][x]]
            if p != -1 and fs2.table[mz][y] != p:
                return False
        return True

    def backtrack(k: int) -> bool:
        if k == n:
            return True
        x = order[k]
        for y in candidates[x]:
            if used[y] or not consistent(x, y):
                continue
            mapping[x] = y
            used[y] = True
            if backtrack(k + 1):
                return True
            mapping[x] = -1
            used[y] = False
        return False

    if backtrack(0):
        # Full verification: pruning above only checks assigned pairs.
        ok = all(mapping[fs1.table[x][y]] == fs2.table[mapping[x]][mapping[y]]
                 for x in range(n) for y in range(n))
        if ok and use_unary:
            ok = all(mapping[fs1.unary[x]] == fs2.unary[mapping[x]]
                     for x in range(n))
        if ok:
            return True, list(mapping)
    return False, None


# ---------------------------------------------------------------------------
# witnessed Green analysis on balls


@dataclass
class WitnessedGreen:
    """Bounded evidence about an infinite (or unconfirmed) semigroup.

    Witnessed relatedness is a lower bound on true relatedness: two
    elements are related only when explicit multiplier witnesses exist in
    the extended ball.  Nothing here is certified unless the ball closed.
    """

    relation: str
    margin: int
    counts_by_radius: dict
    classes: list
    apparently_infinite: bool
    certified: bool


def _mult_key(ball: BallEnumeration, x, y):
    return ball.oracle.key(ball.oracle.mult(x, y))


def witnessed_green(ball: BallEnumeration, relation: str,
                    margin: int = 3) -> WitnessedGreen:
    """Per-radius witnessed class counts for one Green relation.

    Multiplier witnesses for radius k are drawn from the ball of radius
    k * margin.  "Apparently infinite" means three consecutive strict
    count increases, a labeled heuristic, never a certificate.
    """
    if margin < 1:
        raise ValueError("margin must be >= 1")
    relation = relation.upper()
    if relation not in RELATIONS:
        raise ValueError(f"unknown relation {relation!r}")
    ext = ball.extend(ball.radius * margin)
    counts = {}
    classes_final: list = []
    for radius in range(1, ball.radius + 1):
        sub = [i for i in range(len(ball)) if ball.lengths[i] <= radius]
        ext_elems = [ext.elements[i] for i in range(len(ext))
                     if ext.lengths[i] <= radius * margin]
        labels = _witnessed_partition(ball, sub, ext_elems, relation)
        counts[radius] = len(set(labels))
        if radius == ball.radius:
            classes_final = labels
    radii = sorted(counts)
    increases = [counts[radii[i]] < counts[radii[i + 1]]
                 for i in range(len(radii) - 1)]
    apparently_infinite = any(
        all(increases[i + k] for k in range(3))
        for i in range(len(increases) - 2))
    return WitnessedGreen(relation=relation, margin=margin,
                          counts_by_radius=counts, classes=classes_final,
                          apparently_infinite=apparently_infinite,
                          certified=ball.closed)


def _witnessed_partition(ball: BallEnumeration, sub: list, multipliers: list,
                         relation: str) -> list:
    """Union-find closure of witnessed related pairs among ``sub``."""
    oracle = ball.oracle
    key = oracle.key
    sub_keys = [key(ball.elements[i]) for i in sub]
    uf = _UnionFind(len(sub))

    def reach_sets(left: bool) -> list:
        out = []
        for i in sub:
            e = ball.elements[i]
            acc = {key(e)}
            for u in multipliers:
                z = oracle.mult(u, e) if left else oracle.mult(e, u)
                acc.add(key(z))
            out.append(acc)
        return out

    def relate(reach: list) -> None:
        for i in range(len(sub)):
            for j in range(i + 1, len(sub)):
                if sub_keys[j] in reach[i] and sub_keys[i] in reach[j]:
                    uf.union(i, j)

    if relation == "L":
        relate(reach_sets(left=True))
    elif relation == "R":
        relate(reach_sets(left=False))
    elif relation == "H":
        left = reach_sets(left=True)
        right = reach_sets(left=False)
        for i in range(len(sub)):
            for j in range(i + 1, len(sub)):
                if (sub_keys[j] in left[i] and sub_keys[i] in left[j]
                        and sub_keys[j] in right[i] and sub_keys[i] in right[j]):
                    uf.union(i, j)
    elif relation == "D":
        # Join of witnessed L and R over the extended ball, restricted to sub.
        lab = _join_witnessed_lr(ball, multipliers)
        labels = [lab[key(ball.elements[i])] for i in sub]
        return _dense(labels)
    elif relation == "J":
        # Mutual membership of u x v forms, u and v optional multipliers.
        reach = []
        for i in sub:
            e = ball.elements[i]
            rights = [e] + [oracle.mult(e, v) for v in multipliers]
            acc = set()
            for w in rights:
                acc.add(key(w))
                for u in multipliers:
                    acc.add(key(oracle.mult(u, w)))
            reach.append(acc)
        for i in range(len(sub)):
            for j in range(i + 1, len(sub)):
                if sub_keys[j] in reach[i] and sub_keys[i] in reach[j]:
                    uf.union(i, j)
    return _dense(uf.labels())


def _join_witnessed_lr(ball: BallEnumeration, multipliers: list) -> dict:
    oracle = ball.oracle
    key = oracle.key
    elems = multipliers
    keys = [key(e) for e in elems]
    uf = _UnionFind(len(elems))
    for left in (True, False):
        reach = []
        for e in elems:
            acc = {key(e)}
            for u in elems:
                z = oracle.mult(u, e) if left else oracle.mult(e, u)
                acc.add(key(z))
            reach.append(acc)
        for i in range(len(elems)):
            for j in range(i + 1, len(elems)):
                if keys[j] in reach[i] and keys[i] in reach[j]:
                    uf.union(i, j)
    labels = uf.labels()
    return {keys[i]: labels[i] for i in range(len(elems))}


def witnessed_related(ball: BallEnumeration, x, y, relation: str,
                      margin: int = 3) -> Optional[dict]:
    """Explicit witnesses that x and y are related, or None if none found
    within the margin.  For D, returns the intermediate element c together
    with both witness pairs."""
    relation = relation.upper()
    oracle = ball.oracle
    key = oracle.key
    ext = ball.extend(ball.radius * margin)

    def one_sided(a, b, left: bool):
        if key(a) == key(b):
            return ("identity",)
        for i, u in enumerate(ext.elements):
            z = oracle.mult(u, a) if left else oracle.mult(a, u)
            if key(z) == key(b):
                return (u, ext.words[i])
        return None

    def l_witness(a, b):
        fwd = one_sided(a, b, True)
        bwd = one_sided(b, a, True)
        if fwd is not None and bwd is not None:
            return {"u": fwd, "v": bwd}
        return None

    def r_witness(a, b):
        fwd = one_sided(a, b, False)
        bwd = one_sided(b, a, False)
        if fwd is not None and bwd is not None:
            return {"u": fwd, "v": bwd}
        return None

    if relation == "L":
        return l_witness(x, y)
    if relation == "R":
        return r_witness(x, y)
    if relation == "H":
        lw = l_witness(x, y)
        rw = r_witness(x, y)
        if lw and rw:
            return {"L": lw, "R": rw}
        return None
    if relation == "D":
        for i, c in enumerate(ext.elements):
            lw = l_witness(x, c)
            if lw is None:
                continue
            rw = r_witness(c, y)
            if rw is not None:
                return {"via": c, "via_word": ext.words[i], "L": lw, "R": rw}
        return None
    if relation == "J":
        def two_sided(a, b):
            if key(a) == key(b):
                return ("identity",)
            for u in [None] + list(ext.elements):
                ua = a if u is None else oracle.mult(u, a)
                if key(ua) == key(b):
                    return (u, None)
                for v in ext.elements:
                    if key(oracle.mult(ua, v)) == key(b):
                        return (u, v)
            return None
        fwd = two_sided(x, y)
        bwd = two_sided(y, x)
        if fwd is not None and bwd is not None:
            return {"u": fwd, "v": bwd}
        return None
    raise ValueError(f"unknown relation {relation!r}")


# ---------------------------------------------------------------------------
# table text format


def parse_table(text: str) -> FiniteSemigroup:
    """Line-oriented table format.

    ``elements: e a b`` then one ``row x: ...`` line per element listing
    products in element order; optional ``unary x: y`` lines (all or none);
    optional ``generators: ...``.  Non-associative tables are rejected with
    a witness triple.
    """
    names: list = []
    rows: dict = {}
    unary: dict = {}
    gens: Optional[list] = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(":")
        head = head.strip()
        fields = rest.split()
        if head == "elements":
            names = fields
        elif head.startswith("row "):
            rows[head[4:].strip()] = fields
        elif head.startswith("unary "):
            if len(fields) != 1:
                raise ValueError(f"line {lineno}: unary needs one image")
            unary[head[6:].strip()] = fields[0]
        elif head == "generators":
            gens = fields
        else:
            raise ValueError(f"line {lineno}: unrecognized directive {head!r}")
    if not names:
        raise ValueError("missing 'elements:' line")
    index = {nm: i for i, nm in enumerate(names)}
    if len(index) != len(names):
        raise ValueError("duplicate element names")
    n = len(names)
    table = []
    for nm in names:
        if nm not in rows:
            raise ValueError(f"missing row for element {nm!r}")
        row = rows[nm]
        if len(row) != n:
            raise ValueError(f"row {nm!r} has {len(row)} entries, expected {n}")
        try:
            table.append([index[x] for x in row])
        except KeyError as exc:
            raise ValueError(f"row {nm!r} mentions unknown element {exc}") from None
    witness = verify_associative(table)
    if witness is not None:
        x, y, z = witness
        raise ValueError(
            "table is not associative: witness triple "
            f"({names[x]}, {names[y]}, {names[z]})")
    unary_arr = None
    if unary:
        missing = [nm for nm in names if nm not in unary]
        if missing:
            raise ValueError(f"unary given for some elements but not {missing}")
        unary_arr = [index[unary[nm]] for nm in names]
    gen_idx = None
    if gens is not None:
        gen_idx = [index[g] for g in gens]
    return FiniteSemigroup(table, names=names, unary=unary_arr,
                           generators=gen_idx)


def format_table(fs: FiniteSemigroup) -> str:
    lines = ["elements: " + " ".join(fs.names)]
    for i, nm in enumerate(fs.names):
        lines.append(f"row {nm}: " + " ".join(fs.names[x] for x in fs.table[i]))
    if fs.unary is not None:
        for i, nm in enumerate(fs.names):
            lines.append(f"unary {nm}: {fs.names[fs.unary[i]]}")
    lines.append("generators: " + " ".join(fs.names[g] for g in fs.generators))
    return "\n".join(lines) + "\n"
