"""Classical Buchberger completion, used as the independent oracle.

Shares only the polynomial layer with the signature-based engine; pair
handling, criteria and bookkeeping are entirely separate, so agreement
between the two is meaningful evidence of correctness.
"""

import heapq

from .ring import NFBasis, Poly, m_coprime, m_divides, m_lcm


def pair_key(a, b):
    """Canonical symmetric key for an index pair."""
    return (a, b) if a < b else (b, a)


def lcm_criterion(lms, a, b, settled, gamma=None):
    """Chain test for pair (a, b) against a list of leading monomials.

    True when some third index c has lm dividing lcm(lm_a, lm_b) and both
    subsidiary pairs (a, c) and (b, c) are settled per the supplied
    predicate.  The caller decides what "settled" means; soundness needs the
    certified-by relation to stay acyclic.
    """
    if gamma is None:
        gamma = m_lcm(lms[a], lms[b])
    for c in range(len(lms)):
        if c == a or c == b:
            continue
        if m_divides(lms[c], gamma) and settled(a, c) and settled(b, c):
            return True
    return False


def buchberger(ring, gens, use_criteria=True):
    """Groebner basis by pair completion with the normal selection strategy.

    With use_criteria the product criterion and the chain criterion prune
    pairs; the chain test only cites pairs that were popped strictly
    earlier, which keeps the certification order well founded.  Without
    criteria every s-polynomial is reduced, the plain textbook loop.
    Returns the raw (non-reduced) basis, monic, in discovery order.
    """
    G = [f.monic() for f in gens if not f.is_zero]
    if not G:
        return []
    order_key = ring.key
    lms = [g.lm for g in G]
    pending = set()
    heap = []

    def push_pairs(t):
        lt = lms[t]
        for i in range(t):
            gamma = m_lcm(lms[i], lt)
            heapq.heappush(heap, (sum(gamma), order_key(gamma), i, t))
            pending.add((i, t))

    for t in range(1, len(G)):
        push_pairs(t)

    def settled(a, b):
        return pair_key(a, b) not in pending

    ctx = NFBasis(ring, G)
    while heap:
        _, _, i, j = heapq.heappop(heap)
        pending.discard((i, j))
        if use_criteria:
            if m_coprime(lms[i], lms[j]):
                continue
            if lcm_criterion(lms, i, j, settled):
                continue
        r = ctx.reduce(ring.spol(G[i], G[j]))
        if r.is_zero:
            continue
        G.append(r)
        lms.append(r.lm)
        push_pairs(len(G) - 1)
        ctx.add(r)
    return G


def reduced_basis(ring, polys):
    """Head-minimal set with every tail fully reduced, monic, lm-ascending.

    For a Groebner basis input this is the reduced Groebner basis, the
    canonical form used for cross-checking two computations of the same
    ideal.  An element whose lm another element's lm divides is dropped
    outright (for a Groebner basis it reduces to zero against the rest,
    so there is nothing to keep); ascending lm order puts divisors first.
    """
    work = sorted(
        (ring.monic(f) for f in polys if f.terms),
        key=lambda q: q.terms[0][0],
    )
    keep = []
    for f in work:
        flm = f.lm
        if any(m_divides(g.lm, flm) for g in keep):
            continue
        keep.append(f)
    out = []
    for i, f in enumerate(keep):
        rest = keep[:i] + keep[i + 1 :]
        r = ring.normal_form(f, rest)
        assert not r.is_zero and r.lm == f.lm
        out.append(r)
    return out


def is_groebner(ring, polys):
    """Criterion-free check: every pairwise s-polynomial reduces to zero."""
    G = [g for g in polys if not g.is_zero]
    if len(G) < 2:
        return True
    ctx = NFBasis(ring, G)
    for i in range(len(G)):
        for j in range(i + 1, len(G)):
            s = ring.spol(G[i], G[j])
            if s.is_zero:
                continue
            if ctx.reduce(s).terms:
                return False
    return True


def ideal_equal(ring, basis_a, basis_b):
    """Same-ideal test for two Groebner bases via their reduced forms."""
    ra = reduced_basis(ring, basis_a)
    rb = reduced_basis(ring, basis_b)
    return ra == rb
