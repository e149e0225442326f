"""Multivariate polynomial arithmetic over a prime field.

Monomials are dense exponent tuples.  A term order maps a monomial to a flat
integer tuple ("key") that sorts ascending with the order and is additive
under monomial multiplication, so merges, heaps and comparisons all run on
plain tuple comparison.  A polynomial stores (key, monomial, coefficient)
triples in strictly decreasing key order with no zero coefficients.

Divisibility tests on hot paths use a packed-integer representation: each
exponent sits in a 12-bit field with a guard bit, and ``u | v`` holds iff the
guarded difference clears no guard bit.  Exponents must stay below 2048.
"""

import heapq

from .field import PrimeField

PACK_SHIFT = 12
PACK_MAX_EXP = 2047  # 11 bits of value + 1 guard bit per field
OPACK_SHIFT = 24

ORDER_NAMES = ("degrevlex", "lex")


class ParseError(ValueError):
    """Syntax error in polynomial or system text; carries line/column."""

    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        where = ""
        if line is not None:
            where += f" at line {line}"
        if col is not None:
            where += f"{',' if line is not None else ' at'} column {col + 1}"
        super().__init__(message + where)


# ---------------------------------------------------------------------------
# monomial helpers (exponent tuples)

def m_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def m_lcm(a, b):
    return tuple(x if x > y else y for x, y in zip(a, b))


def m_divides(a, b):
    """True iff monomial a divides monomial b."""
    return all(x <= y for x, y in zip(a, b))


def m_div(a, b):
    """a / b as a monomial, or None when b does not divide a."""
    q = tuple(x - y for x, y in zip(a, b))
    return q if all(x >= 0 for x in q) else None


def m_deg(a):
    return sum(a)


def m_coprime(a, b):
    return all(x == 0 or y == 0 for x, y in zip(a, b))


class TermOrder:
    """degrevlex or lex on a fixed number of variables."""

    __slots__ = ("kind", "nvars")

    def __init__(self, kind, nvars):
        if kind not in ORDER_NAMES:
            raise ValueError(f"unknown term order {kind!r}")
        self.kind = kind
        self.nvars = nvars

    def key(self, m):
        """Flat int tuple, ascending with the order and additive under m_mul."""
        if self.kind == "degrevlex":
            return (sum(m),) + tuple(-e for e in reversed(m))
        return m

    def cmp(self, a, b):
        ka, kb = self.key(a), self.key(b)
        return (ka > kb) - (ka < kb)

    def __eq__(self, other):
        return (
            isinstance(other, TermOrder)
            and other.kind == self.kind
            and other.nvars == self.nvars
        )

    def __hash__(self):
        return hash((self.kind, self.nvars))

    def __repr__(self):
        return f"TermOrder({self.kind!r}, {self.nvars})"


class Poly:
    """Immutable polynomial: (key, monomial, coefficient) terms, key-descending."""

    __slots__ = ("ring", "terms", "_packed")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms  # tuple of (key, monom, coeff)
        self._packed = None  # lazy packed-term cache for reductions

    @property
    def is_zero(self):
        return not self.terms

    @property
    def lm(self):
        return self.terms[0][1]

    @property
    def lc(self):
        return self.terms[0][2]

    @property
    def lm_key(self):
        return self.terms[0][0]

    @property
    def degree(self):
        """Total degree, -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(m) for _, m, _ in self.terms)

    @property
    def is_homogeneous(self):
        if not self.terms:
            return True
        d = sum(self.terms[0][1])
        return all(sum(m) == d for _, m, _ in self.terms)

    def monic(self):
        return self.ring.monic(self)

    def __add__(self, other):
        return self.ring.add(self, other)

    def __sub__(self, other):
        return self.ring.sub(self, other)

    def __neg__(self):
        return self.ring.neg(self)

    def __eq__(self, other):
        return (
            isinstance(other, Poly)
            and other.ring == self.ring
            and other.terms == self.terms
        )

    def __hash__(self):
        return hash((self.ring, self.terms))

    def __str__(self):
        return self.ring.format_poly(self)

    def __repr__(self):
        return f"<Poly {self.ring.format_poly(self)}>"


class PolyRing:
    """Polynomial ring over a prime field with a fixed term order."""

    def __init__(self, field, names, order="degrevlex"):
        if isinstance(field, int):
            field = PrimeField(field)
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names")
        if not names:
            raise ValueError("need at least one variable")
        self.field = field
        self.names = names
        self.nvars = len(names)
        self.order = order if isinstance(order, TermOrder) else TermOrder(order, len(names))
        self._name_index = {nm: i for i, nm in enumerate(names)}
        self._shifts = tuple(PACK_SHIFT * i for i in range(self.nvars))
        self.pack_guard = 0
        for s in self._shifts:
            self.pack_guard |= (PACK_MAX_EXP + 1) << s
        # order pack: an integer encoding whose natural comparison matches
        # the term order, additive in the sense opack(ab) = opack(a) +
        # opack(b) - opack(1).  Wide 24-bit fields so sums never carry.
        if self.order.kind == "degrevlex":
            self._op_shifts = tuple(OPACK_SHIFT * i for i in range(self.nvars))
            self._op_deg_shift = OPACK_SHIFT * self.nvars
        else:
            self._op_shifts = tuple(
                OPACK_SHIFT * (self.nvars - 1 - i) for i in range(self.nvars)
            )
            self._op_deg_shift = None
        self.zero = Poly(self, ())
        unit = (0,) * self.nvars
        self.one = Poly(self, ((self.order.key(unit), unit, 1),))
        self.unit_monomial = unit
        self._op_one = self.opack(unit)

    # -- construction -------------------------------------------------------

    def pack(self, m):
        total = 0
        for e, s in zip(m, self._shifts):
            total += e << s
        return total

    def unpack(self, packed):
        return tuple((packed >> s) & PACK_MAX_EXP for s in self._shifts)

    def opack(self, m):
        if self._op_deg_shift is not None:
            total = sum(m) << self._op_deg_shift
            for e, s in zip(m, self._op_shifts):
                total += (PACK_MAX_EXP - e) << s
            return total
        total = 0
        for e, s in zip(m, self._op_shifts):
            total += e << s
        return total

    def key(self, m):
        return self.order.key(m)

    def poly(self, pairs):
        """Canonical polynomial from (monomial, coefficient) pairs."""
        p = self.field.p
        acc = {}
        for m, c in pairs:
            m = tuple(m)
            if len(m) != self.nvars:
                raise ValueError("monomial arity mismatch")
            if any(e < 0 or e > PACK_MAX_EXP for e in m):
                raise ValueError(f"exponent out of range in {m}")
            acc[m] = (acc.get(m, 0) + c) % p
        key = self.order.key
        terms = sorted(
            ((key(m), m, c) for m, c in acc.items() if c),
            reverse=True,
        )
        return Poly(self, tuple(terms))

    def from_terms(self, terms):
        """Trusted constructor: terms already canonical (descending, nonzero)."""
        return Poly(self, tuple(terms))

    def monomial_poly(self, m, c=1):
        return self.poly([(m, c)])

    # -- arithmetic ---------------------------------------------------------

    def _merge_sub(self, t1, t2):
        """t1 - t2 on canonical term lists; returns a canonical list."""
        p = self.field.p
        out = []
        i = j = 0
        n1, n2 = len(t1), len(t2)
        while i < n1 and j < n2:
            k1 = t1[i][0]
            k2 = t2[j][0]
            if k1 > k2:
                out.append(t1[i])
                i += 1
            elif k1 < k2:
                k, m, c = t2[j]
                out.append((k, m, p - c))
                j += 1
            else:
                c = (t1[i][2] - t2[j][2]) % p
                if c:
                    out.append((k1, t1[i][1], c))
                i += 1
                j += 1
        out.extend(t1[i:])
        for k, m, c in t2[j:]:
            out.append((k, m, p - c))
        return out

    def _merge_add(self, t1, t2):
        p = self.field.p
        out = []
        i = j = 0
        n1, n2 = len(t1), len(t2)
        while i < n1 and j < n2:
            k1 = t1[i][0]
            k2 = t2[j][0]
            if k1 > k2:
                out.append(t1[i])
                i += 1
            elif k1 < k2:
                out.append(t2[j])
                j += 1
            else:
                c = (t1[i][2] + t2[j][2]) % p
                if c:
                    out.append((k1, t1[i][1], c))
                i += 1
                j += 1
        out.extend(t1[i:])
        out.extend(t2[j:])
        return out

    def add(self, f, g):
        assert f.ring == self and g.ring == self
        return Poly(self, tuple(self._merge_add(f.terms, g.terms)))

    def sub(self, f, g):
        assert f.ring == self and g.ring == self
        return Poly(self, tuple(self._merge_sub(f.terms, g.terms)))

    def neg(self, f):
        p = self.field.p
        return Poly(self, tuple((k, m, p - c) for k, m, c in f.terms))

    def scale(self, f, c):
        c %= self.field.p
        if c == 0:
            return self.zero
        p = self.field.p
        return Poly(self, tuple((k, m, (cc * c) % p) for k, m, cc in f.terms))

    def term_mul_terms(self, terms, c, m, mkey=None):
        """c * x^m * terms as a term list (order preserved: keys are additive)."""
        p = self.field.p
        if mkey is None:
            mkey = self.order.key(m)
        out = []
        for k, mm, cc in terms:
            nc = (cc * c) % p
            if nc:
                out.append(
                    (
                        tuple(a + b for a, b in zip(k, mkey)),
                        tuple(a + b for a, b in zip(mm, m)),
                        nc,
                    )
                )
        return out

    def term_mul(self, f, c, m):
        return Poly(self, tuple(self.term_mul_terms(f.terms, c, m)))

    def monic(self, f):
        if not f.terms:
            return f
        lc = f.terms[0][2]
        if lc == 1:
            return f
        return self.scale(f, self.field.inv(lc))

    def mul(self, f, g):
        """Full product, schoolbook style.  Fine off the hot path."""
        p = self.field.p
        acc = {}
        for _, mf, cf in f.terms:
            for _, mg, cg in g.terms:
                m = tuple(a + b for a, b in zip(mf, mg))
                acc[m] = (acc.get(m, 0) + cf * cg) % p
        key = self.order.key
        terms = sorted(
            ((key(m), m, c) for m, c in acc.items() if c), reverse=True
        )
        return Poly(self, tuple(terms))

    def spol(self, f, g):
        """S-polynomial lc(g)*(gamma/lm f)*f - lc(f)*(gamma/lm g)*g, made monic."""
        assert f.terms and g.terms, "spol of zero polynomial"
        gamma = m_lcm(f.lm, g.lm)
        uf = tuple(a - b for a, b in zip(gamma, f.lm))
        ug = tuple(a - b for a, b in zip(gamma, g.lm))
        left = self.term_mul_terms(f.terms, g.lc, uf)
        right = self.term_mul_terms(g.terms, f.lc, ug)
        s = Poly(self, tuple(self._merge_sub(left, right)))
        return self.monic(s)

    # -- normal forms -------------------------------------------------------

    def nf_context(self, polys):
        return NFBasis(self, polys)

    def normal_form(self, f, basis):
        """Full normal form of f against an iterable of polynomials, monic."""
        if isinstance(basis, NFBasis):
            ctx = basis
        else:
            ctx = NFBasis(self, basis)
        return self.monic(Poly(self, tuple(ctx.reduce_terms(f.terms))))

    def interreduce(self, polys):
        """Head-minimal form of a polynomial set.

        Any element whose lm is divisible by another element's lm is replaced
        by its normal form against the rest (dropped when that is zero);
        surviving elements keep their tails.  Output is monic, sorted with lm
        ascending.  Deterministic.
        """
        work = [self.monic(f) for f in polys if f.terms]
        while True:
            victim = -1
            for idx, f in enumerate(work):
                flm = f.lm
                if any(
                    j != idx and m_divides(g.lm, flm)
                    for j, g in enumerate(work)
                ):
                    victim = idx
                    break
            if victim < 0:
                break
            f = work.pop(victim)
            r = self.normal_form(f, work)
            if r.terms:
                work.append(r)
        work.sort(key=lambda q: q.terms[0][0])
        return work

    # -- text ----------------------------------------------------------------

    def format_monomial(self, m):
        factors = [
            self.names[i] + (f"^{e}" if e > 1 else "")
            for i, e in enumerate(m)
            if e
        ]
        return "*".join(factors) if factors else "1"

    def format_poly(self, f):
        if not f.terms:
            return "0"
        parts = []
        for _, m, c in f.terms:
            factors = []
            if c != 1 or not any(m):
                factors.append(str(c))
            for i, e in enumerate(m):
                if e:
                    factors.append(self.names[i] + (f"^{e}" if e > 1 else ""))
            parts.append("*".join(factors))
        return " + ".join(parts)

    def parse_poly(self, text, line=None):
        """Parse ``[coeff][*]var[^exp][*var[^exp]...]`` terms joined by +/-."""
        toks = _tokenize(text, line)
        pos = 0
        pairs = []
        p = self.field.p

        def peek():
            return toks[pos] if pos < len(toks) else (None, None, len(text))

        if not toks:
            raise ParseError("empty polynomial", line, 0)
        first = True
        while pos < len(toks):
            sign = 1
            kind, val, col = peek()
            if kind in ("+", "-"):
                sign = -1 if kind == "-" else 1
                pos += 1
            elif not first:
                raise ParseError(f"expected '+' or '-', got {val!r}", line, col)
            first = False
            kind, val, col = peek()
            if kind is None:
                raise ParseError("dangling sign", line, col)
            coeff = 1
            mono = [0] * self.nvars
            saw = False
            # optional leading integer coefficient, then '*'-joined variables
            if kind == "int":
                coeff = int(val) % p
                saw = True
                pos += 1
                kind, val, col = peek()
                if kind == "*":
                    pos += 1
                    kind, val, col = peek()
                    if kind not in ("name", "int"):
                        raise ParseError("expected variable after '*'", line, col)
            while kind in ("name", "int"):
                if kind == "int":
                    coeff = (coeff * int(val)) % p
                else:
                    vi = self._name_index.get(val)
                    if vi is None:
                        raise ParseError(f"unknown variable {val!r}", line, col)
                    exp = 1
                    if pos + 1 < len(toks) and toks[pos + 1][0] == "^":
                        if pos + 2 >= len(toks) or toks[pos + 2][0] != "int":
                            raise ParseError("expected integer exponent", line, col)
                        exp = int(toks[pos + 2][1])
                        pos += 2
                    if exp < 0 or mono[vi] + exp > PACK_MAX_EXP:
                        raise ParseError("exponent out of range", line, col)
                    mono[vi] += exp
                saw = True
                pos += 1
                kind, val, col = peek()
                if kind == "*":
                    pos += 1
                    kind, val, col = peek()
                    if kind not in ("name", "int"):
                        raise ParseError("expected variable after '*'", line, col)
                elif kind in ("name", "int"):
                    raise ParseError("missing '*' between factors", line, col)
            if not saw:
                raise ParseError(f"expected term, got {val!r}", line, col)
            pairs.append((tuple(mono), coeff if sign > 0 else p - coeff))
        return self.poly(pairs)

    def parse(self, text):
        return self.parse_poly(text)

    # -- identity ------------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and other.field == self.field
            and other.names == self.names
            and other.order == self.order
        )

    def __hash__(self):
        return hash((self.field, self.names, self.order))

    def __repr__(self):
        return (
            f"PolyRing(GF({self.field.p}), vars={','.join(self.names)}, "
            f"order={self.order.kind})"
        )


def _tokenize(text, line=None):
    toks = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch in " \t\r":
            i += 1
            continue
        if ch == "#":
            break
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(("int", text[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(("name", text[i:j], i))
            i = j
            continue
        if ch in "+-*^":
            toks.append((ch, ch, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", line, i)
    return toks


class NFBasis:
    """Prepared reducer set for repeated full normal forms.

    Reduction strategy: scan the working polynomial's monomials largest
    first (max-heap with a dict accumulator; reducer tails only introduce
    strictly smaller monomials, so one pass suffices).  Among reducers the
    first one in insertion order whose lm divides wins.
    """

    __slots__ = ("ring", "polys", "_prep", "_guard")

    def __init__(self, ring, polys):
        self.ring = ring
        self.polys = []
        self._guard = ring.pack_guard
        self._prep = []
        for g in polys:
            self.add(g)

    def add(self, g):
        """Append one reducer (zero polynomials are ignored)."""
        if not g.terms:
            return
        ring = self.ring
        pk = g._packed
        if pk is None:
            pk = g._packed = tuple(
                (ring.pack(m), ring.opack(m), sum(m), c)
                for _, m, c in g.terms
            )
        gp, gop, gd, lc = pk[0]
        self.polys.append(g)
        self._prep.append((gd, gp, gop, ring.field.inv(lc), pk[1:]))

    def reduce_terms(self, terms, trace=None):
        """Canonical reduced term list; optionally records reduction steps.

        When ``trace`` is a list, appends (reducer_index, u, ukey, coeff) for
        every subtraction performed, enough to rebuild the cofactors.

        Works on packed monomials throughout: the heap holds negated order
        packs (a max-heap of monomials), the accumulator keys divisibility
        packs, and reducer multiples are plain integer additions.
        """
        ring = self.ring
        pack = ring.pack
        opack = ring.opack
        acc = {}
        known = {}
        heap = []
        for k, m, c in terms:
            dp = pack(m)
            acc[dp] = c
            known[dp] = (k, m)
            heap.append((-opack(m), sum(m), dp))
        return self._drain(acc, heap, known, trace)

    def reduce_multiple(self, f, u, trace=None):
        """Normal form of x^u * f as a canonical term list.

        The multiple is fed to the reducer in packed form straight from
        f's term cache, so it is never materialized as tuples.
        """
        ring = self.ring
        pk = f._packed
        if pk is None:
            pk = f._packed = tuple(
                (ring.pack(m), ring.opack(m), sum(m), c)
                for _, m, c in f.terms
            )
        up = ring.pack(u)
        uo = ring.opack(u) - ring._op_one
        ud = sum(u)
        acc = {}
        heap = []
        for tp, to, td, tc in pk:
            dp = up + tp
            acc[dp] = tc
            heap.append((-(uo + to), ud + td, dp))
        return self._drain(acc, heap, {}, trace)

    def _drain(self, acc, heap, known, trace):
        ring = self.ring
        p = ring.field.p
        guard = self._guard
        prep = self._prep
        key = ring.key
        unpack = ring.unpack
        heapq.heapify(heap)
        pop = heapq.heappop
        push = heapq.heappush
        out = []
        while heap:
            nop, md, dp = pop(heap)
            # accumulator values stay unreduced (plain signed ints); one
            # mod here replaces one per subtraction
            c = acc.pop(dp, 0) % p
            if not c:
                continue
            mp = dp | guard
            hit = -1
            for i, (gd, gp, gop, ginv, gtail) in enumerate(prep):
                if gd <= md and (mp - gp) & guard == guard:
                    hit = i
                    break
            if hit < 0:
                km = known.get(dp)
                if km is None:
                    m = unpack(dp)
                    out.append((key(m), m, c))
                else:
                    out.append((km[0], km[1], c))
                continue
            gd, gp, gop, ginv, gtail = prep[hit]
            base_d = dp - gp
            base_o = -nop - gop
            ud = md - gd
            cc = (c * ginv) % p
            if trace is not None:
                u = unpack(base_d)
                trace.append((hit, u, key(u), cc))
            for td, to, tdeg, tc in gtail:
                nd = base_d + td
                prev = acc.get(nd)
                if prev is None:
                    acc[nd] = -cc * tc
                    push(heap, (-(base_o + to), ud + tdeg, nd))
                else:
                    acc[nd] = prev - cc * tc
        return out

    def reduce(self, f, monic=True):
        r = Poly(self.ring, tuple(self.reduce_terms(f.terms)))
        return self.ring.monic(r) if monic else r
