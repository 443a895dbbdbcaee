import pytest

from greenbox import zoo
from greenbox.engine import FiniteSemigroup, rees_quotient
from greenbox.identities import (IdPow, Inv, Mul, Var, ZeroC,
                                 catalogue, catalogue_entry,
                                 check_identity_exhaustive,
                                 check_identity_window, classify, eval_term,
                                 parse_identity, parse_term)


def trivial_semigroup():
    return FiniteSemigroup([[0]], unary=[0])


# parsing and printing


def test_parse_variable_and_product():
    t = parse_term("x y x")
    assert t == Mul(Mul(Var("x"), Var("y")), Var("x"))


def test_parse_glued():
    assert parse_term("xx'yy'") == parse_term("x x' y y'")


def test_parse_powers():
    assert parse_term("x^3") == Mul(Mul(Var("x"), Var("x")), Var("x"))
    assert parse_term("x^-2") == Mul(Inv(Var("x")), Inv(Var("x")))
    assert parse_term("x^0") == IdPow(Var("x"))
    assert parse_term("0") == ZeroC()


def test_parse_parentheses():
    t = parse_term("(xy)'")
    assert t == Inv(Mul(Var("x"), Var("y")))


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        parse_term("x +")
    with pytest.raises(ValueError):
        parse_identity("x = y = z")


def test_term_print_round_trip():
    for text in ["x y x", "(xy)'", "x(y^0z)^0x", "x'x(xx')'", "x^2", "0"]:
        t = parse_term(text)
        assert parse_term(str(t)) == t


def test_catalogue_entries_parse_and_round_trip():
    cat = catalogue()
    assert len(cat["inverse"]) == 1
    assert len(cat["si"]) == 4
    assert str(cat["c2"][0]) == "x x = x x x"
    for ids in cat.values():
        for ident in ids:
            reparsed = parse_identity(str(ident))
            assert (reparsed.lhs, reparsed.rhs) == (ident.lhs, ident.rhs)


def test_catalogue_parametric_keys():
    assert str(catalogue_entry("c5")[0].lhs) == str(parse_term("x^5"))
    assert catalogue_entry("burnside-2-3")[0].rhs == parse_term("x^5")
    assert catalogue_entry("nil-4")[0].rhs == ZeroC()
    with pytest.raises(KeyError):
        catalogue_entry("mystery")


# evaluation


def test_eval_variable():
    fs = zoo.b2()
    assert eval_term(fs, Var("x"), {"x": 3}) == 3


def test_eval_idempotent_power_on_p():
    window = zoo.PWindow(10)
    assert eval_term(window, parse_term("x^0"), {"x": 4}) == 0
    assert eval_term(window, parse_term("x^0"), {"x": 5}) == 5


def test_eval_idempotent_power_refused_outside_cr():
    fs = zoo.b2()          # inverse but not completely regular
    with pytest.raises(ValueError, match="completely regular"):
        eval_term(fs, parse_term("x^0"), {"x": 0})


def test_eval_unary_refused_without_operation():
    fs = zoo.null_semigroup(2)
    with pytest.raises(ValueError):
        eval_term(fs, parse_term("x'"), {"x": 1})


def test_eval_zero_constant():
    fs = zoo.null_semigroup(3)
    assert eval_term(fs, ZeroC(), {}) == fs.zero


def test_eval_respects_quotient_maps():
    fs = zoo.monogenic_monoid(4)
    ideal = {3, 4}
    q = rees_quotient(fs, ideal)

    def image(x):
        keep = [i for i in range(len(fs)) if i not in ideal]
        return keep.index(x) if x not in ideal else len(keep)

    term = parse_term("x y x x")
    for x in range(len(fs)):
        for y in range(len(fs)):
            direct = image(eval_term(fs, term, {"x": x, "y": y}))
            mapped = eval_term(q, term, {"x": image(x), "y": image(y)})
            assert direct == mapped


# checking


def test_b2_satisfies_inverse_identity():
    result = check_identity_exhaustive(zoo.b2(), catalogue()["inverse"][0])
    assert result.holds


def test_left_zero_fails_inverse_identity():
    result = check_identity_exhaustive(zoo.left_zero(2),
                                       catalogue()["inverse"][0])
    assert not result.holds
    assert result.counterexample == {"x": 0, "y": 1}


def test_x_equals_x_always_holds():
    for fs in (zoo.b2(), zoo.right_zero(3)):
        assert check_identity_exhaustive(fs, parse_identity("x = x")).holds


def test_budget_refusal():
    fs = zoo.mn_table(4)   # 30 elements; 30^5 assignments is over budget
    ident = parse_identity("v w x y z = z y x w v")
    with pytest.raises(ValueError, match="budget"):
        check_identity_exhaustive(fs, ident)


def test_rolstar_on_p_window():
    window = zoo.PWindow(15)
    result = check_identity_window(window, catalogue_entry("rolstar")[0],
                                   window.elements)
    assert result.holds
    assert result.window_verified
    assert result.checked == 31 ** 3


def test_cr_axioms_on_p_window():
    window = zoo.PWindow(15)
    for text in ["x(yz) = (xy)z", "(x')' = x", "xx'x = x", "xx' = x'x",
                 "x = xx'x"]:
        assert check_identity_window(window, parse_identity(text),
                                     window.elements).holds


def test_inverse_identity_fails_on_p():
    window = zoo.PWindow(6)
    result = check_identity_window(window, catalogue()["inverse"][0],
                                   window.elements)
    assert not result.holds


def test_r_congruence_probe():
    assert zoo.p_green(0, 2, "R")
    assert (zoo.p_mult(0, 1), zoo.p_mult(2, 1)) == (1, 3)
    assert not zoo.p_green(1, 3, "R")


# classification


def test_classify_b2():
    report = {e.key: e for e in classify(zoo.b2())}
    for key in ("i-semigroup", "inverse", "inverse-alt", "si", "c2"):
        assert report[key].status == "holds", key
    assert report["cr"].status == "fails"
    assert report["rolstar"].status == "skipped"
    # The idempotents of B2 square to themselves, not to zero.
    assert report["nil-2"].status == "fails"


def test_classify_sw_without_unary():
    report = {e.key: e for e in classify(zoo.sw_semigroup(4))}
    assert report["c2"].status == "holds"
    assert report["inverse"].status == "skipped"
    assert report["zero-mult"].status == "fails"


def test_classify_trivial_satisfies_everything():
    report = classify(trivial_semigroup())
    assert all(e.status == "holds" for e in report)


def test_inverse_axiomatizations_agree_on_inverse_zoo():
    cat = catalogue()
    for fs in (zoo.b2(), zoo.b2_with_identity(), zoo.mn_table(2),
               zoo.mn_table(3)):
        primary = check_identity_exhaustive(fs, cat["inverse"][0]).holds
        alt = all(check_identity_exhaustive(fs, ident).holds
                  for ident in cat["inverse-alt"])
        assert primary and alt


def test_identity_with_disjoint_variable_sides():
    # x x' = y y' fails on B2 (sided idempotents differ).
    result = check_identity_exhaustive(zoo.b2(), parse_identity("xx' = yy'"))
    assert not result.holds
