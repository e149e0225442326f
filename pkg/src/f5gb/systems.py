"""Benchmark system generators and the plain-text system format.

Generators return the standard polynomial sets verbatim (no tidying, no
interreduction) so degrees and term counts match the usual references; any
normalization happens at run time.

Text format: one header line ``ring char=<p> vars=<v1,v2,...>
order=<degrevlex|lex>`` followed by one polynomial per line.  ``#`` starts
a comment, blank lines are skipped.
"""

from itertools import combinations_with_replacement
from math import ceil, floor

from .field import DEFAULT_PRIME
from .ring import ParseError, PolyRing

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """Tiny deterministic generator, same sequence on every platform.

    state += 0x9E3779B97F4A7C15; z = state; z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9; z ^= z >> 27; z *= 0x94D049BB133111EB;
    z ^= z >> 31.
    """

    __slots__ = ("state",)

    def __init__(self, seed):
        self.state = seed & _MASK64

    def next(self):
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & _MASK64
        z = (z ^ (z >> 27)) * 0x94D049BB133111EB & _MASK64
        return z ^ (z >> 31)

    def below(self, n):
        assert n > 0
        return self.next() % n


def katsura(n, char=DEFAULT_PRIME):
    """Katsura-n: n+1 variables u0..un, one linear and n quadratic equations."""
    assert n >= 1
    names = [f"u{i}" for i in range(n + 1)]
    ring = PolyRing(char, names)
    nv = n + 1

    def mono(*pairs):
        m = [0] * nv
        for idx, e in pairs:
            m[idx] += e
        return tuple(m)

    polys = []
    # u0 + 2*u1 + ... + 2*un - 1
    lin = [(mono((0, 1)), 1)] + [(mono((i, 1)), 2) for i in range(1, nv)]
    lin.append((mono(), -1))
    polys.append(ring.poly(lin))
    # sum over l of u_|l| * u_|m-l| = u_m, for m = 0..n-1
    for m in range(n):
        pairs = []
        for l in range(-n, n + 1):
            if abs(m - l) <= n:
                pairs.append((mono((abs(l), 1), (abs(m - l), 1)), 1))
        pairs.append((mono((m, 1)), -1))
        polys.append(ring.poly(pairs))
    return ring, polys


def cyclic(n, char=DEFAULT_PRIME):
    """Cyclic-n: the n cyclic symmetric functions, last one minus 1."""
    assert n >= 2
    names = [f"x{i}" for i in range(1, n + 1)]
    ring = PolyRing(char, names)
    polys = []
    for k in range(1, n):
        pairs = []
        for i in range(n):
            m = [0] * n
            for j in range(i, i + k):
                m[j % n] += 1
            pairs.append((tuple(m), 1))
        polys.append(ring.poly(pairs))
    polys.append(ring.poly([(tuple([1] * n), 1), (tuple([0] * n), -1)]))
    return ring, polys


def eco(n, char=DEFAULT_PRIME):
    """Eco-n: economics model equations in n variables."""
    assert n >= 2
    names = [f"x{i}" for i in range(1, n + 1)]
    ring = PolyRing(char, names)
    nv = n

    def mono(*pairs):
        m = [0] * nv
        for idx, e in pairs:
            m[idx] += e
        return tuple(m)

    polys = []
    # (x_k + sum_{i} x_i x_{i+k}) x_n = k, for k = 1..n-1
    for k in range(1, n):
        pairs = [(mono((k - 1, 1), (n - 1, 1)), 1)]
        for i in range(1, n - k):
            pairs.append((mono((i - 1, 1), (i + k - 1, 1), (n - 1, 1)), 1))
        pairs.append((mono(), -k))
        polys.append(ring.poly(pairs))
    # x_1 + ... + x_{n-1} = -1
    pairs = [(mono((i, 1)), 1) for i in range(n - 1)]
    pairs.append((mono(), 1))
    polys.append(ring.poly(pairs))
    return ring, polys


def gen_random(nvars, ngens, maxdeg, seed, char=DEFAULT_PRIME):
    """Sparse random system: ngens homogeneous polynomials in nvars variables.

    Each polynomial picks a degree in 1..maxdeg, then 10-15% of the
    monomials of that degree (at least one), distinct, with nonzero
    coefficients.  Everything is driven by one SplitMix64 stream, so a
    (nvars, ngens, maxdeg, seed) tuple always gives the same system.
    """
    assert nvars >= 1 and ngens >= 1 and maxdeg >= 1
    names = [f"x{i}" for i in range(1, nvars + 1)]
    ring = PolyRing(char, names)
    rng = SplitMix64(seed)
    p = ring.field.p
    polys = []
    for _ in range(ngens):
        deg = 1 + rng.below(maxdeg)
        univ = list(combinations_with_replacement(range(nvars), deg))
        total = len(univ)
        lo = max(1, ceil(0.10 * total))
        hi = max(lo, floor(0.15 * total))
        count = lo + rng.below(hi - lo + 1)
        # partial Fisher-Yates: the first `count` slots become the sample
        idx = list(range(total))
        for i in range(count):
            j = i + rng.below(total - i)
            idx[i], idx[j] = idx[j], idx[i]
        pairs = []
        for i in idx[:count]:
            m = [0] * nvars
            for v in univ[i]:
                m[v] += 1
            pairs.append((tuple(m), 1 + rng.below(p - 1)))
        polys.append(ring.poly(pairs))
    return ring, polys


def gen_named(spec, char=DEFAULT_PRIME):
    """Build a system from a spec string like ``katsura:5`` or
    ``random:3,3,3,42``.  Returns (ring, polys, canonical name)."""
    name, _, arg = spec.partition(":")
    name = name.strip().lower()
    try:
        if name == "katsura":
            n = int(arg)
            ring, polys = katsura(n, char)
        elif name == "cyclic":
            n = int(arg)
            ring, polys = cyclic(n, char)
        elif name == "eco":
            n = int(arg)
            ring, polys = eco(n, char)
        elif name == "random":
            # random:a,b,c,seed = a generators of max degree b in c variables
            parts = [int(x) for x in arg.split(",")]
            if len(parts) != 4:
                raise ValueError("random takes gens,maxdeg,vars,seed")
            a, b, c, seed = parts
            ring, polys = gen_random(c, a, b, seed, char=char)
            return ring, polys, f"random:{a},{b},{c},{seed}"
        else:
            raise ValueError(f"unknown system family {name!r}")
    except ValueError as e:
        raise ValueError(f"bad system spec {spec!r}: {e}") from None
    return ring, polys, f"{name}:{int(arg)}"


def _fresh_name(taken, base="h"):
    if base not in taken:
        return base
    i = 0
    while f"{base}{i}" in taken:
        i += 1
    return f"{base}{i}"


def homogenize(ring, polys):
    """Append a fresh variable (last, hence smallest in degrevlex) and pad
    every term of every polynomial up to its polynomial's total degree."""
    hname = _fresh_name(set(ring.names))
    new_ring = PolyRing(ring.field, ring.names + (hname,), ring.order.kind)
    out = []
    for f in polys:
        d = f.degree
        pairs = [(m + (d - sum(m),), c) for _, m, c in f.terms]
        out.append(new_ring.poly(pairs))
    return new_ring, out


def dehomogenize(ring, polys):
    """Set the last variable to 1 and drop it from the ring."""
    assert ring.nvars >= 2
    new_ring = PolyRing(ring.field, ring.names[:-1], ring.order.kind)
    out = []
    for f in polys:
        out.append(new_ring.poly([(m[:-1], c) for _, m, c in f.terms]))
    return new_ring, out


def parse_system(text):
    """Parse header + polynomial lines into (ring, polys)."""
    ring = None
    polys = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ring is None:
            ring = _parse_header(line, lineno)
            continue
        polys.append(ring.parse_poly(line, line=lineno))
    if ring is None:
        raise ParseError("missing ring header line")
    return ring, polys


def _parse_header(line, lineno):
    fields = line.split()
    if not fields or fields[0] != "ring":
        raise ParseError("expected 'ring char=... vars=...' header",
                         line=lineno)
    char = None
    names = None
    order = "degrevlex"
    for item in fields[1:]:
        key, eq, value = item.partition("=")
        if not eq:
            raise ParseError(f"bad header item {item!r}", line=lineno)
        if key == "char":
            try:
                char = int(value)
            except ValueError:
                raise ParseError(f"bad characteristic {value!r}",
                                 line=lineno) from None
        elif key == "vars":
            names = [v for v in value.split(",") if v]
            if not names:
                raise ParseError("empty variable list", line=lineno)
        elif key == "order":
            order = value
        else:
            raise ParseError(f"unknown header key {key!r}", line=lineno)
    if char is None or names is None:
        raise ParseError("header needs char= and vars=", line=lineno)
    try:
        return PolyRing(char, names, order)
    except ValueError as e:
        raise ParseError(str(e), line=lineno) from None


def format_system(ring, polys, comment=None):
    lines = []
    if comment:
        lines.append(f"# {comment}")
    lines.append(
        f"ring char={ring.field.p} vars={','.join(ring.names)} "
        f"order={ring.order.kind}"
    )
    for f in polys:
        lines.append(ring.format_poly(f))
    return "\n".join(lines) + "\n"
