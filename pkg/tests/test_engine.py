import pytest

from greenbox import zoo
from greenbox.engine import (BallEnumeration, BudgetError, FiniteSemigroup,
                             Oracle, adjoin_identity, adjoin_zero,
                             ball_enumerate, direct_product, eggbox,
                             enumerate_oracle, format_table,
                             green_definitional, green_scc, iso_tables,
                             parse_table, rees_quotient, subsemigroup,
                             table_from_ball, verify_associative, witnessed_green,
                             witnessed_related)


def matrix_unit_oracle():
    # 2x2 matrix units plus zero: the B2 multiplication, element-level.
    def mul(x, y):
        if x is None or y is None:
            return None
        return (x[0], y[1]) if x[1] == y[0] else None
    return Oracle(mul, unary=lambda x: None if x is None else (x[1], x[0]))


def assert_green_agree(fs):
    a = green_scc(fs)
    b = green_definitional(fs)
    assert (a.h, a.l, a.r, a.d, a.j) == (b.h, b.l, b.r, b.d, b.j)
    return a


# enumeration


def test_enumerate_b2_oracle():
    fs = enumerate_oracle(matrix_unit_oracle(), [(1, 2), (2, 1)])
    assert isinstance(fs, FiniteSemigroup)
    assert len(fs) == 5


def test_enumerate_monogenic_monoid_oracle():
    oracle = Oracle(lambda i, j: min(i + j, 3))
    fs = enumerate_oracle(oracle, [1], seeds=[0])
    assert isinstance(fs, FiniteSemigroup)
    assert len(fs) == 4


def test_enumerate_bicyclic_does_not_close():
    ball = enumerate_oracle(zoo.bicyclic_oracle(), [(1, 0), (0, 1)],
                            seeds=[(0, 0)], max_word_length=4)
    assert isinstance(ball, BallEnumeration)
    assert not ball.closed
    # Brute closure check at this radius: some product escapes the ball.
    escapes = [zoo.bicyclic_mult(x, y)
               for x in ball.elements for y in ball.elements
               if zoo.bicyclic_mult(x, y) not in ball.index]
    assert escapes


def test_enumeration_order_is_breadth_first_deterministic():
    ball = zoo.bicyclic_ball(3)
    assert ball.elements[0] == (0, 0)
    assert ball.elements[1:3] == [(1, 0), (0, 1)]
    assert ball.lengths == sorted(ball.lengths)


# Green's relations, both ways


def test_b2_green_counts():
    gs = assert_green_agree(zoo.b2())
    assert gs.counts() == {"H": 5, "L": 3, "R": 3, "D": 2, "J": 2}


def test_monogenic_counts_all_singletons():
    for p in (1, 2, 4):
        gs = assert_green_agree(zoo.monogenic_monoid(p))
        assert gs.counts() == {k: p + 1 for k in "HLRDJ"}


def test_one_element_semigroup():
    gs = assert_green_agree(FiniteSemigroup([[0]]))
    assert gs.counts() == {k: 1 for k in "HLRDJ"}


def test_right_zero_green():
    # x y = y: one R-class, singleton L-classes (and so singleton H).
    gs = assert_green_agree(zoo.right_zero(5))
    assert gs.counts() == {"H": 5, "L": 5, "R": 1, "D": 1, "J": 1}


def test_left_zero_green():
    gs = assert_green_agree(zoo.left_zero(5))
    assert gs.counts() == {"H": 5, "L": 1, "R": 5, "D": 1, "J": 1}


def test_transformation_closures_cross_validate():
    for seed in range(5):
        fs = zoo.random_transformation_semigroup(4, seed, 2)
        gs = assert_green_agree(fs)
        assert gs.d == gs.j


def test_h_is_meet_of_l_and_r():
    for fs in (zoo.b2(), zoo.mn_table(3), zoo.right_zero(4)):
        gs = green_scc(fs)
        for x in range(len(fs)):
            for y in range(len(fs)):
                assert (gs.h[x] == gs.h[y]) == (
                    gs.l[x] == gs.l[y] and gs.r[x] == gs.r[y])


def test_d_equals_j_on_finite_tables():
    for fs in (zoo.b2(), zoo.b2_with_identity(), zoo.mn_table(4),
               zoo.sw_semigroup(4)):
        gs = green_scc(fs)
        assert gs.d == gs.j


# products


def test_product_b2_b2():
    prod = direct_product([zoo.b2(), zoo.b2()])
    assert len(prod) == 25
    gs = assert_green_agree(prod)
    assert gs.count("J") == 4


def test_product_with_trivial_is_isomorphic():
    trivial = FiniteSemigroup([[0]], unary=[0])
    fs = zoo.b2()
    iso, _ = iso_tables(direct_product([fs, trivial]), fs)
    assert iso


def test_product_counts_multiply_for_regular_or_monoid_factors():
    pairs = [(zoo.b2(), zoo.b2()),
             (zoo.monogenic_monoid(2), zoo.monogenic_monoid(3))]
    for s, t in pairs:
        cs = green_scc(s).counts()
        ct = green_scc(t).counts()
        cp = green_scc(direct_product([s, t])).counts()
        assert all(cp[k] == cs[k] * ct[k] for k in "HLRDJ")


def test_product_right_zero_null():
    prod = direct_product([zoo.right_zero(3), zoo.null_semigroup(2)])
    gs = assert_green_agree(prod)
    assert gs.count("R") == 4


def test_product_size_guard():
    with pytest.raises(BudgetError):
        direct_product([zoo.right_zero(200), zoo.right_zero(200)])


# Rees quotients and adjunctions


def test_rees_quotient_whole_ideal_is_trivial():
    fs = zoo.b2()
    q = rees_quotient(fs, range(len(fs)))
    assert len(q) == 1


def test_rees_quotient_monogenic():
    fs = zoo.monogenic_monoid(3)          # 1, a, a^2, a^3
    q = rees_quotient(fs, {2, 3})
    assert len(q) == 3
    assert q.zero is not None


def test_rees_quotient_rejects_non_ideal_with_witness():
    fs = zoo.b2()
    with pytest.raises(ValueError, match="witness pair"):
        rees_quotient(fs, {0})            # {a} is not an ideal


def test_rees_quotient_is_homomorphic_image():
    fs = zoo.monogenic_monoid(4)
    q = rees_quotient(fs, {3, 4, 2})
    cs = green_scc(fs).counts()
    cq = green_scc(q).counts()
    assert all(cq[k] <= cs[k] for k in "HLRDJ")


def test_adjoin_identity_b2():
    one = adjoin_identity(zoo.b2())
    assert len(one) == 6
    assert one.identity == 5
    assert len(one.idempotents()) == 4


def test_adjoin_identity_even_if_present():
    fs = zoo.monogenic_monoid(1)
    bigger = adjoin_identity(fs)
    assert len(bigger) == 3
    assert bigger.identity == 2


def test_adjoin_zero_to_trivial_gives_semilattice():
    two = adjoin_zero(FiniteSemigroup([[0]], unary=[0]))
    assert len(two) == 2
    assert all(two.table[i][i] == i for i in range(2))
    assert two.table[0][1] == two.table[1][0]


# witnessed analysis


def test_witnessed_bicyclic_l_r():
    ball = zoo.bicyclic_ball(6)
    wl = witnessed_green(ball, "L")
    wr = witnessed_green(ball, "R")
    for wg in (wl, wr):
        radii = sorted(wg.counts_by_radius)
        assert all(wg.counts_by_radius[radii[i]]
                   < wg.counts_by_radius[radii[i + 1]]
                   for i in range(len(radii) - 1))
        assert wg.apparently_infinite
        assert not wg.certified
    labels_l = wl.classes
    for i, x in enumerate(ball.elements):
        for j, y in enumerate(ball.elements):
            assert (labels_l[i] == labels_l[j]) == (x[1] == y[1])


def test_witnessed_bicyclic_d_single_class():
    ball = zoo.bicyclic_ball(5)
    wd = witnessed_green(ball, "D")
    assert all(c == 1 for c in wd.counts_by_radius.values())


def test_witnessed_d_has_explicit_witnesses():
    ball = zoo.bicyclic_ball(5)
    for e in ball.elements:
        w = witnessed_related(ball, e, (0, 0), "D")
        assert w is not None


def test_witnessed_free_monogenic_j_apparently_infinite():
    ball = zoo.natural_numbers_ball(8)
    wj = witnessed_green(ball, "J")
    radii = sorted(wj.counts_by_radius)
    assert all(wj.counts_by_radius[radii[i]] < wj.counts_by_radius[radii[i + 1]]
               for i in range(len(radii) - 1))
    assert wj.apparently_infinite


def test_witnessed_margin_validation():
    with pytest.raises(ValueError):
        witnessed_green(zoo.bicyclic_ball(3), "L", margin=0)


# isomorphism


def test_iso_reflexive():
    fs = zoo.mn_table(3)
    ok, mapping = iso_tables(fs, fs)
    assert ok
    assert sorted(mapping) == list(range(len(fs)))


def test_iso_b2_vs_chain_semilattice():
    n = 5
    chain = FiniteSemigroup([[min(i, j) for j in range(n)] for i in range(n)],
                            unary=list(range(n)))
    ok, _ = iso_tables(zoo.b2(), chain)
    assert not ok


def test_iso_size_guard():
    big = zoo.right_zero(65)
    with pytest.raises(BudgetError):
        iso_tables(big, big)


def test_iso_respects_unary():
    # Same table, different unary: B2's inverse vs the identity map.
    fs = zoo.b2()
    twisted = FiniteSemigroup(fs.table, names=fs.names,
                              unary=list(range(5)), generators=fs.generators)
    ok, _ = iso_tables(fs, twisted)
    assert not ok


# idempotents, eggbox, subsemigroups


def test_idempotents_b2():
    assert zoo.b2().idempotents() == [2, 3, 4]


def test_idempotents_band_and_group():
    band = zoo.right_zero(4)
    assert band.idempotents() == list(range(4))
    z3 = FiniteSemigroup([[(i + j) % 3 for j in range(3)] for i in range(3)])
    assert z3.idempotents() == [0]


def test_eggbox_grid_sizes():
    fs = zoo.b2()
    gs = green_scc(fs)
    boxes = eggbox(fs, gs)
    assert sorted(sum(sum(row) for row in box.h_sizes) for box in boxes) \
        == sorted(len(c) for c in gs.classes("D"))
    assert all(box.regular for box in boxes)


def test_regular_subsemigroup_restriction():
    # Inverse subsemigroups inherit L, R, H by restriction.
    fs = zoo.b2_with_identity()
    gs = green_scc(fs)
    sub, embedding = subsemigroup(fs, [2, 4])   # aa', 0
    gt = green_scc(sub)
    for rel in ("L", "R", "H"):
        for i in range(len(sub)):
            for j in range(len(sub)):
                assert gt.related(rel, i, j) == gs.related(
                    rel, embedding[i], embedding[j])


# table text format


def test_table_round_trip():
    fs = zoo.b2()
    again = parse_table(format_table(fs))
    assert again.table == fs.table
    assert again.unary == fs.unary
    assert again.generators == fs.generators


def test_parse_table_rejects_non_associative():
    text = """
elements: x y
row x: y y
row y: x x
"""
    with pytest.raises(ValueError, match="witness"):
        parse_table(text)


def test_parse_table_rejects_partial_unary():
    text = """
elements: x y
row x: x y
row y: y x
unary x: y
"""
    with pytest.raises(ValueError, match="unary"):
        parse_table(text)


def test_verify_associative_finds_witness():
    bad = [[0, 1], [1, 0]]
    bad[1][1] = 1  # x*x=x? build a genuinely non-associative table
    table = [[0, 0], [1, 0]]
    witness = verify_associative(table)
    assert witness is not None
    x, y, z = witness
    assert table[table[x][y]][z] != table[x][table[y][z]]


def test_oracle_key_collision_detection():
    # A key function that conflates distinct bicyclic elements breaks the
    # closure and must surface as an OracleError, not silent corruption.
    from greenbox.engine import OracleError
    oracle = Oracle(zoo.bicyclic_mult, key=lambda e: min(e, (1, 1)))
    with pytest.raises(OracleError):
        enumerate_oracle(oracle, [(1, 0), (0, 1)], seeds=[(0, 0)],
                         max_word_length=6)


def test_ball_monotone_in_radius():
    small = zoo.bicyclic_ball(3)
    large = zoo.bicyclic_ball(5)
    assert set(small.index) <= set(large.index)
    assert len(small) < len(large)


def test_enumerate_element_budget_returns_partial_ball():
    ball = enumerate_oracle(zoo.bicyclic_oracle(), [(1, 0), (0, 1)],
                            seeds=[(0, 0)], max_elements=20)
    assert isinstance(ball, BallEnumeration)
    assert not ball.closed
    assert len(ball) <= 20


def test_rees_quotient_realizes_m2_from_m3():
    m3 = zoo.mn_table(3)
    ideal = [i for i, key in enumerate(m3.keys)
             if key == "0" or key.span >= 2]
    q = rees_quotient(m3, ideal)
    assert len(q) == 5
    ok, _ = iso_tables(q, zoo.b2())
    assert ok


def test_non_generating_set_rejected():
    table = zoo.b2().table
    with pytest.raises(ValueError, match="generators miss"):
        FiniteSemigroup(table, generators=[0])   # {a} only reaches {a, 0}


def test_witnessed_matches_exact_green_on_closed_ball():
    # When the ball closes, witnessed classes with a generous margin are
    # exactly the Green classes of the finished table.
    ball = ball_enumerate(Oracle(lambda x, y: tuple(y[i] for i in x)),
                          [(1, 0, 2, 3), (1, 1, 2, 2)], 12)
    assert ball.closed
    fs = table_from_ball(ball)
    exact = green_scc(fs)
    for relation in ("H", "L", "R", "D", "J"):
        wg = witnessed_green(ball, relation, margin=3)
        assert wg.certified
        witnessed_parts = {}
        for i, label in enumerate(wg.classes):
            witnessed_parts.setdefault(label, set()).add(i)
        exact_parts = {frozenset(c) for c in exact.classes(relation)}
        assert {frozenset(c) for c in witnessed_parts.values()} == exact_parts


def test_quotient_preserves_green_relatedness():
    # Green's relations are preserved by morphisms: related elements stay
    # related in any Rees quotient, so the induced class map is well defined.
    cases = [(zoo.monogenic_monoid(4), {3, 4}),
             (zoo.b2_with_identity(), {0, 1, 2, 3, 4})]
    for fs, ideal in cases:
        q = rees_quotient(fs, ideal)
        keep = [i for i in range(len(fs)) if i not in ideal]
        zero = len(keep)

        def image(x):
            return keep.index(x) if x not in ideal else zero

        gs = green_scc(fs)
        gq = green_scc(q)
        for rel in "HLRDJ":
            for x in range(len(fs)):
                for y in range(len(fs)):
                    if gs.related(rel, x, y):
                        assert gq.related(rel, image(x), image(y))
