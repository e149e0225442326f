"""Term orders, polynomial arithmetic, parsing, s-polynomials, normal forms."""

import itertools
import random

import pytest

from f5gb.ring import (
    NFBasis,
    ParseError,
    PolyRing,
    TermOrder,
    m_deg,
    m_div,
    m_divides,
    m_lcm,
    m_mul,
)


@pytest.fixture
def R():
    return PolyRing(32003, ["x", "y", "z"])


def random_monomial(rng, nvars, maxdeg=6):
    m = [0] * nvars
    for _ in range(rng.randrange(maxdeg + 1)):
        m[rng.randrange(nvars)] += 1
    return tuple(m)


def random_poly(R, rng, nterms=5, maxdeg=6):
    pairs = [
        (random_monomial(rng, R.nvars, maxdeg), rng.randrange(R.field.p))
        for _ in range(nterms)
    ]
    return R.poly(pairs)


# -- term orders ------------------------------------------------------------

def test_degrevlex_frozen_comparisons(R):
    key = R.key
    assert key((1, 0, 0)) > key((0, 1, 0)) > key((0, 0, 1))
    assert key((1, 1, 0)) > key((0, 2, 0))        # x*y > y^2
    assert key((2, 1, 1)) > key((1, 2, 1))        # x^2*y*z > x*y^2*z
    assert key((0, 3, 1)) > key((2, 0, 2))        # y^3*z > x^2*z^2
    assert key((1, 0, 3)) > key((0, 1, 3))        # x*z^3 > y*z^3
    assert key((2, 0, 0)) > key((0, 1, 1))        # degree wins first


def test_lex_order():
    R = PolyRing(7, ["x", "y"], order="lex")
    key = R.key
    assert key((1, 0)) > key((0, 5))              # x > y^5 under lex
    assert key((2, 0)) > key((1, 3))
    f = R.parse("x + y^5")
    assert R.format_monomial(f.lm) == "x"


def test_order_admissibility_properties():
    rng = random.Random(7)
    for kind in ("degrevlex", "lex"):
        order = TermOrder(kind, 4)
        unit = (0, 0, 0, 0)
        for _ in range(300):
            a = random_monomial(rng, 4)
            b = random_monomial(rng, 4)
            c = random_monomial(rng, 4)
            # 1 is minimal
            if a != unit:
                assert order.key(a) > order.key(unit)
            # multiplication preserves comparisons
            if order.key(a) > order.key(b):
                assert order.key(m_mul(a, c)) > order.key(m_mul(b, c))
            # keys are additive
            ka, kc = order.key(a), order.key(c)
            assert order.key(m_mul(a, c)) == tuple(
                u + v for u, v in zip(ka, kc)
            )


def test_order_totality():
    order = TermOrder("degrevlex", 3)
    mons = [m for m in itertools.product(range(3), repeat=3)]
    keys = [order.key(m) for m in mons]
    assert len(set(keys)) == len(mons)  # injective, so the order is total


def test_monomial_helpers():
    assert m_mul((1, 2), (0, 3)) == (1, 5)
    assert m_lcm((1, 2), (0, 3)) == (1, 3)
    assert m_divides((1, 2), (1, 3))
    assert not m_divides((2, 0), (1, 3))
    assert m_div((1, 3), (1, 2)) == (0, 1)
    assert m_div((1, 0), (0, 1)) is None
    assert m_deg((2, 3, 1)) == 6


# -- construction and arithmetic ---------------------------------------------

def test_poly_canonicalization(R):
    f = R.poly([((1, 0, 0), 5), ((1, 0, 0), 32000), ((0, 0, 0), 0)])
    assert len(f.terms) == 1
    assert f.lc == 2
    g = R.poly([((1, 0, 0), 3), ((1, 0, 0), 32000)])
    assert g.is_zero


def test_terms_sorted_descending(R):
    rng = random.Random(3)
    for _ in range(50):
        f = random_poly(R, rng, nterms=8)
        keys = [k for k, _, _ in f.terms]
        assert keys == sorted(keys, reverse=True)
        assert all(c % 32003 for _, _, c in f.terms)


def test_add_sub_neg_random(R):
    rng = random.Random(4)
    for _ in range(100):
        f = random_poly(R, rng)
        g = random_poly(R, rng)
        h = random_poly(R, rng)
        assert f + g == g + f
        assert (f + g) + h == f + (g + h)
        assert f - f == R.zero
        assert f + (-f) == R.zero
        assert f - g == f + (-g)


def test_term_mul_matches_naive(R):
    rng = random.Random(5)
    for _ in range(50):
        f = random_poly(R, rng)
        m = random_monomial(rng, 3)
        c = rng.randrange(1, 32003)
        fast = R.term_mul(f, c, m)
        naive = R.poly([(m_mul(mm, m), cc * c) for _, mm, cc in f.terms])
        assert fast == naive


def test_monic(R):
    f = R.parse("5*x^2 + 10*y")
    g = f.monic()
    assert g.lc == 1
    assert g == R.parse("x^2 + 2*y")
    assert R.zero.monic() == R.zero


def test_degree_and_homogeneous(R):
    assert R.zero.degree == -1
    assert R.one.degree == 0
    f = R.parse("x^2*y + z")
    assert f.degree == 3
    assert not f.is_homogeneous
    assert R.parse("x^2*y + y^2*z").is_homogeneous


# -- parsing and formatting ---------------------------------------------------

def test_parse_basic(R):
    f = R.parse("3x^2*y - 7*z + 1")
    assert str(f) == "3*x^2*y + 31996*z + 1"
    assert R.parse(str(f)) == f
    assert R.parse("-x + x").is_zero
    assert R.parse("0").is_zero
    assert R.parse("x*x") == R.parse("x^2")
    assert R.parse("2*2*x") == R.parse("4x")


def test_parse_comment_and_whitespace(R):
    assert R.parse("  x + y  # trailing note") == R.parse("x+y")


def test_parse_errors(R):
    for bad in ("", "x + ", "x y", "w + 1", "x^", "x^y", "@", "+", "3*"):
        with pytest.raises(ParseError):
            R.parse(bad)
    try:
        R.parse_poly("x + q", line=4)
    except ParseError as e:
        assert e.line == 4
        assert e.col == 4
    else:
        raise AssertionError("expected ParseError")


def test_format_round_trip_random(R):
    rng = random.Random(6)
    for _ in range(100):
        f = random_poly(R, rng, nterms=6)
        assert R.parse(str(f)) == f


# -- s-polynomials ------------------------------------------------------------

def test_spol_frozen(R):
    p1 = R.parse("x*y*z - y^2*z")
    p2 = R.parse("x^2 - y*z")
    p3 = R.parse("y^2 - x*z")
    assert str(R.spol(p2, p3)) == "x^3*z + 32002*y^3*z"
    s13 = R.spol(p1, p3)
    assert [(m, c) for _, m, c in s13.terms] == [
        ((0, 3, 1), 1),
        ((2, 0, 2), 32002),
    ]


def test_spol_top_cancellation(R):
    rng = random.Random(8)
    checked = 0
    for _ in range(200):
        f = random_poly(R, rng)
        g = random_poly(R, rng)
        if f.is_zero or g.is_zero:
            continue
        s = R.spol(f, g)
        gamma = m_lcm(f.lm, g.lm)
        if not s.is_zero:
            assert R.key(s.lm) < R.key(gamma)
        checked += 1
    assert checked > 150


def test_spol_is_monic(R):
    f = R.parse("7*x^2 + y")
    g = R.parse("11*y^2 + z")
    s = R.spol(f, g)
    assert s.lc == 1


# -- normal forms --------------------------------------------------------------

def test_normal_form_frozen(R):
    p1 = R.parse("x*y*z - y^2*z")
    p2 = R.parse("x^2 - y*z")
    p3 = R.parse("y^2 - x*z")
    nf = R.normal_form(R.parse("x^2*z^2 - y^3*z"), [p1, p2, p3])
    assert str(nf) == "x*z^3 + 32002*y*z^3"


def test_normal_form_no_divisible_monomials(R):
    g = [R.parse("x^2 - y*z"), R.parse("y^2 - x*z")]
    nf = R.normal_form(R.parse("x^5 + x*y^3*z"), g)
    for _, m, _ in nf.terms:
        assert not m_divides((2, 0, 0), m)
        assert not m_divides((0, 2, 0), m)


def test_normal_form_idempotent(R):
    rng = random.Random(9)
    gens = [R.parse("x^2 - y*z"), R.parse("y^3 - z^3"), R.parse("x*y*z - z^3")]
    ctx = R.nf_context(gens)
    for _ in range(60):
        f = random_poly(R, rng, nterms=7)
        r = ctx.reduce(f)
        assert ctx.reduce(r) == r


def test_normal_form_is_linear(R):
    rng = random.Random(10)
    gens = [R.parse("x^2 - y*z"), R.parse("y^3 - z^3")]
    ctx = R.nf_context(gens)
    for _ in range(40):
        f = random_poly(R, rng)
        g = random_poly(R, rng)
        lhs = ctx.reduce(f + g, monic=False)
        rhs = ctx.reduce(f, monic=False) + ctx.reduce(g, monic=False)
        assert lhs == rhs


def test_normal_form_cofactor_identity(R):
    rng = random.Random(11)
    gens = [R.parse("x^2 - y*z"), R.parse("y^3 - z^3"), R.parse("x*y*z - z^3")]
    ctx = R.nf_context(gens)
    for _ in range(40):
        f = random_poly(R, rng, nterms=7)
        trace = []
        r = R.from_terms(ctx.reduce_terms(f.terms, trace=trace))
        total = r
        for gi, u, _, c in trace:
            total = total + R.term_mul(ctx.polys[gi], c, u)
        assert total == f


def test_normal_form_of_member_is_zero(R):
    gens = [R.parse("x - y"), R.parse("y - z")]
    assert R.normal_form(R.parse("x - z"), gens).is_zero


def test_nf_first_divisor_in_insertion_order(R):
    # both reducers divide x^2*y; the first listed must win
    a = R.parse("x^2 - z^2")
    b = R.parse("x*y - z^2")
    f = R.parse("x^2*y")
    r_ab = R.normal_form(f, [a, b])
    r_ba = R.normal_form(f, [b, a])
    assert str(r_ab) == str(R.normal_form(R.parse("y*z^2"), [a, b]))
    assert str(r_ba) == str(R.normal_form(R.parse("x*z^2"), [b, a]))


# -- interreduction -------------------------------------------------------------

def test_interreduce_empty(R):
    assert R.interreduce([]) == []
    assert R.interreduce([R.zero]) == []


def test_interreduce_frozen_demo(R):
    p1 = R.parse("x*y*z - y^2*z")
    p2 = R.parse("x^2 - y*z")
    p3 = R.parse("y^2 - x*z")
    out = R.interreduce([p1, p2, p3, R.parse("x^2")])
    lms = [R.format_monomial(q.lm) for q in out]
    assert lms == ["y*z", "y^2", "x^2", "x*z^2"]


def test_interreduce_properties(R):
    rng = random.Random(13)
    for _ in range(30):
        polys = [random_poly(R, rng, nterms=4, maxdeg=4) for _ in range(5)]
        out = R.interreduce(polys)
        # monic, lm-ascending, head-minimal
        keys = [q.lm_key for q in out]
        assert keys == sorted(keys)
        for q in out:
            assert q.lc == 1
        for i, q in enumerate(out):
            for j, w in enumerate(out):
                if i != j:
                    assert not m_divides(w.lm, q.lm)


def test_interreduce_duplicates(R):
    f = R.parse("x + y")
    out = R.interreduce([f, f, R.parse("2x + 2y")])
    assert out == [f]


def test_interreduce_keeps_reduced_tails(R):
    # nothing divides anything: set comes back unchanged apart from order
    f = R.parse("x^3 + y^2*z")  # tail reducible by y^2 - z, but head minimal
    g = R.parse("y^2 - z")
    out = R.interreduce([f, g])
    assert f in out and g in out


# -- packing ---------------------------------------------------------------------

def test_packed_divisibility_matches_naive(R):
    rng = random.Random(14)
    guard = R.pack_guard
    for _ in range(500):
        a = random_monomial(rng, 3, maxdeg=9)
        b = random_monomial(rng, 3, maxdeg=9)
        packed = ((R.pack(b) | guard) - R.pack(a)) & guard == guard
        assert packed == m_divides(a, b)


def test_exponent_bounds(R):
    with pytest.raises(ValueError):
        R.poly([((2048, 0, 0), 1)])
    with pytest.raises(ParseError):
        R.parse("x^2048")
    f = R.parse("x^2047")
    assert f.degree == 2047


# -- ring identity -----------------------------------------------------------------

def test_ring_equality_and_validation():
    assert PolyRing(7, ["x"]) == PolyRing(7, ["x"])
    assert PolyRing(7, ["x"]) != PolyRing(11, ["x"])
    assert PolyRing(7, ["x"], "lex") != PolyRing(7, ["x"], "degrevlex")
    with pytest.raises(ValueError):
        PolyRing(7, ["x", "x"])
    with pytest.raises(ValueError):
        PolyRing(7, [])
    with pytest.raises(ValueError):
        PolyRing(7, ["x"], order="weird")
