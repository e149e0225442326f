"""Prime-field coefficient arithmetic.

Field elements are plain Python ints in [0, p), reduced eagerly after every
operation.  The field object only carries the modulus; skipping a per-element
wrapper class keeps the polynomial layers fast.
"""

DEFAULT_PRIME = 32003


class FieldError(ValueError):
    """Raised for invalid moduli."""


def is_prime(n):
    """Trial-division primality check, adequate for word-sized moduli."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def xgcd(a, b):
    """Extended Euclid: returns (g, s, t) with s*a + t*b == g == gcd(a, b)."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    return a, s0, t0


class PrimeField:
    """The field Z/p for a prime p.

    p must fit comfortably in a machine word (p < 2**31) so products of two
    residues stay inside cheap int arithmetic.
    """

    __slots__ = ("p",)

    def __init__(self, p=DEFAULT_PRIME):
        if not isinstance(p, int) or isinstance(p, bool):
            raise FieldError(f"modulus must be an int, got {p!r}")
        if p >= 2**31:
            raise FieldError(f"modulus {p} too large (need p < 2**31)")
        if not is_prime(p):
            raise FieldError(f"modulus {p} is not prime")
        self.p = p

    def element(self, a):
        """Canonical residue of an arbitrary int."""
        return a % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        """Multiplicative inverse via extended Euclid; error on zero."""
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("inverse of zero in prime field")
        g, s, _ = xgcd(a, self.p)
        assert g == 1
        return s % self.p

    def div(self, a, b):
        return (a * self.inv(b)) % self.p

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))

    def __repr__(self):
        return f"PrimeField({self.p})"
