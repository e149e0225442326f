"""Oracle checks: Buchberger completion, reduced bases, Groebner tests."""

import random

import pytest

from f5gb.buchberger import (
    buchberger,
    ideal_equal,
    is_groebner,
    lcm_criterion,
    pair_key,
    reduced_basis,
)
from f5gb.ring import PolyRing, m_divides


@pytest.fixture
def R():
    return PolyRing(32003, ["x", "y", "z"])


def demo_gens(R):
    return [
        R.parse("x*y*z - y^2*z"),
        R.parse("x^2 - y*z"),
        R.parse("y^2 - x*z"),
    ]


def test_pair_key():
    assert pair_key(3, 1) == (1, 3)
    assert pair_key(1, 3) == (1, 3)


def test_lcm_criterion_direct():
    lms = [(2, 0), (0, 2), (1, 1)]
    # lcm(x^2, y^2) = x^2y^2, divisible by xy; both side pairs settled
    assert lcm_criterion(lms, 0, 1, lambda a, b: True)
    assert not lcm_criterion(lms, 0, 1, lambda a, b: False)
    # no third element at all
    assert not lcm_criterion(lms[:2], 0, 1, lambda a, b: True)


def test_buchberger_demo_frozen(R):
    G = buchberger(R, demo_gens(R))
    red = reduced_basis(R, G)
    lms = {R.format_monomial(g.lm) for g in red}
    assert lms == {"x^2", "y^2", "x*y*z", "x*z^3"}
    assert [str(g) for g in red] == [
        "y^2 + 32002*x*z",
        "x^2 + 32002*y*z",
        "x*y*z + 32002*x*z^2",
        "x*z^3 + 32002*y*z^3",
    ]
    assert is_groebner(R, G)


def test_is_groebner_frozen_negative():
    R2 = PolyRing(32003, ["x", "y"])
    assert not is_groebner(R2, [R2.parse("x*y - 1"), R2.parse("x^2")])
    G = buchberger(R2, [R2.parse("x*y - 1"), R2.parse("x^2")])
    assert is_groebner(R2, G)


def test_is_groebner_trivia(R):
    assert is_groebner(R, [])
    assert is_groebner(R, [R.zero])
    assert is_groebner(R, [R.parse("x + y")])
    # monomial ideals are always Groebner
    assert is_groebner(R, [R.parse("x^2"), R.parse("y^3"), R.parse("x*z")])


def test_buchberger_single_and_empty(R):
    assert buchberger(R, []) == []
    assert buchberger(R, [R.zero]) == []
    f = R.parse("3*x^2 - y")
    out = buchberger(R, [f])
    assert out == [f.monic()]


def test_criteria_equivalence_demo(R):
    gens = demo_gens(R)
    a = reduced_basis(R, buchberger(R, gens, use_criteria=True))
    b = reduced_basis(R, buchberger(R, gens, use_criteria=False))
    assert a == b


def random_small_system(ring, rng, ngens=3, maxdeg=3, nterms=3):
    out = []
    for _ in range(ngens):
        pairs = []
        for _ in range(nterms):
            m = [0] * ring.nvars
            for _ in range(rng.randrange(maxdeg + 1)):
                m[rng.randrange(ring.nvars)] += 1
            pairs.append((tuple(m), rng.randrange(1, ring.field.p)))
        f = ring.poly(pairs)
        if not f.is_zero:
            out.append(f)
    return out


def test_criteria_equivalence_random():
    rng = random.Random(21)
    R2 = PolyRing(7, ["x", "y"])
    R3 = PolyRing(32003, ["x", "y", "z"])
    for trial in range(25):
        ring = R2 if trial % 2 else R3
        gens = random_small_system(ring, rng)
        if not gens:
            continue
        fast = buchberger(ring, gens, use_criteria=True)
        slow = buchberger(ring, gens, use_criteria=False)
        assert reduced_basis(ring, fast) == reduced_basis(ring, slow)
        assert is_groebner(ring, fast)


def test_buchberger_contains_input_ideal(R):
    gens = demo_gens(R)
    G = buchberger(R, gens)
    ctx = R.nf_context(G)
    for f in gens:
        assert ctx.reduce(f).is_zero


def test_reduced_basis_fully_reduced(R):
    G = buchberger(R, demo_gens(R))
    red = reduced_basis(R, G)
    lms = [g.lm for g in red]
    keys = [g.lm_key for g in red]
    assert keys == sorted(keys)
    for i, g in enumerate(red):
        assert g.lc == 1
        for _, m, _ in g.terms:
            for j, lm in enumerate(lms):
                if j != i:
                    assert not m_divides(lm, m)
                elif m != g.lm:
                    assert not m_divides(lm, m)


def test_reduced_basis_canonical_under_permutation(R):
    G = buchberger(R, demo_gens(R))
    red = reduced_basis(R, G)
    rng = random.Random(22)
    for _ in range(5):
        perm = G[:]
        rng.shuffle(perm)
        assert reduced_basis(R, perm) == red


def test_ideal_equal(R):
    gens = demo_gens(R)
    G1 = buchberger(R, gens)
    G2 = buchberger(R, list(reversed(gens)))
    assert ideal_equal(R, G1, G2)
    G3 = buchberger(R, gens[:2])
    assert not ideal_equal(R, G1, G3)


def test_linear_system(R):
    # pure linear algebra case: basis is the row echelon form
    gens = [R.parse("x + y + z"), R.parse("x - y"), R.parse("y - z")]
    red = reduced_basis(R, buchberger(R, gens))
    assert [str(g) for g in red] == ["z", "y", "x"]


def test_elimination_known_result():
    # twisted cubic: x = t, y = t^2, z = t^3 intersected with k[x,y,z]
    R4 = PolyRing(32003, ["t", "x", "y", "z"], order="lex")
    gens = [R4.parse("x - t"), R4.parse("y - t^2"), R4.parse("z - t^3")]
    red = reduced_basis(R4, buchberger(R4, gens))
    no_t = [g for g in red if all(m[0] == 0 for _, m, _ in g.terms)]
    strs = {str(g) for g in no_t}
    assert strs == {
        "x^2 + 32002*y",
        "x*y + 32002*z",
        "x*z + 32002*y^2",
        "y^3 + 32002*z^2",
    }
