"""Arithmetic in GF(p^m) with deterministic modulus and generator choices.

Elements are stored as coefficient tuples over Z_p, constant term first.
"Smallest" always means smallest integer encoding ``sum(c_i * p**i)``, so the
highest-degree coefficient is the most significant digit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .config import MAX_FIELD_SIZE
from .errors import DegreeMismatch, NotPrime, NotPrimePower, NotPrimitive, Overflow


def is_prime(n: int) -> bool:
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


def factorize(n: int) -> dict[int, int]:
    """Trial-division factorization of a positive integer."""
    factors: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            factors[d] = factors.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, m)`` with ``q == p**m``, or raise NotPrimePower."""
    if q < 2:
        raise NotPrimePower(f"q={q} is not a prime power")
    f = factorize(q)
    if len(f) != 1:
        raise NotPrimePower(f"q={q} is not a prime power")
    ((p, m),) = f.items()
    return p, m


# -- polynomials over Z_p, lists with constant term first ---------------------


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_sub(a: list[int], b: list[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return _trim(out)


def _poly_mul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return _trim([c % p for c in out])


def _poly_mod(a: list[int], f: list[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    df = len(f) - 1
    inv_lead = pow(f[-1], p - 2, p)
    while len(a) - 1 >= df and a:
        shift = len(a) - 1 - df
        c = (a[-1] * inv_lead) % p
        for i, fi in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fi) % p
        _trim(a)
    return a


def _poly_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _poly_mod(a, b, p)
    return a


def _poly_powmod(base: list[int], e: int, f: list[int], p: int) -> list[int]:
    result = [1]
    base = _poly_mod(base, f, p)
    while e:
        if e & 1:
            result = _poly_mod(_poly_mul(result, base, p), f, p)
        base = _poly_mod(_poly_mul(base, base, p), f, p)
        e >>= 1
    return result


def is_irreducible(f: list[int], p: int) -> bool:
    """Rabin's irreducibility test for a monic polynomial over Z_p."""
    f = _trim(list(f))
    m = len(f) - 1
    if m < 1:
        return False
    if m == 1:
        return True
    x = [0, 1]
    if _poly_sub(_poly_powmod(x, p**m, f, p), x, p):
        return False
    for r in factorize(m):
        h = _poly_sub(_poly_powmod(x, p ** (m // r), f, p), x, p)
        if len(_poly_gcd(f, h, p)) != 1:
            return False
    return True


def _digits(v: int, p: int, m: int) -> tuple[int, ...]:
    out = []
    for _ in range(m):
        v, r = divmod(v, p)
        out.append(r)
    return tuple(out)


# -- fields -------------------------------------------------------------------


@dataclass(frozen=True)
class FieldSpec:
    p: int
    m: int
    modulus: tuple[int, ...]  # monic, degree m, constant term first

    @property
    def order(self) -> int:
        return self.p**self.m

    def element(self, value) -> GFElement:
        """Build an element from an integer encoding or a coefficient sequence."""
        if isinstance(value, int):
            if not 0 <= value < self.order:
                raise ValueError(f"{value} out of range for GF({self.order})")
            return GFElement(self, _digits(value, self.p, self.m))
        coeffs = [c % self.p for c in value]
        if len(coeffs) > self.m:
            coeffs = _poly_mod(coeffs, list(self.modulus), self.p)
        coeffs = list(coeffs) + [0] * (self.m - len(coeffs))
        return GFElement(self, tuple(coeffs))

    @property
    def zero(self) -> GFElement:
        return self.element(0)

    @property
    def one(self) -> GFElement:
        return self.element(1)

    def elements(self):
        """All field elements in increasing integer encoding."""
        for v in range(self.order):
            yield self.element(v)

    def __repr__(self):
        return f"FieldSpec(p={self.p}, m={self.m}, modulus={self.modulus})"


@dataclass(frozen=True)
class GFElement:
    spec: FieldSpec = field(repr=False)
    coeffs: tuple[int, ...]

    def _check(self, other) -> GFElement:
        if isinstance(other, int):
            return self.spec.element([other])
        if other.spec != self.spec:
            raise ValueError("elements belong to different fields")
        return other

    def __add__(self, other):
        other = self._check(other)
        p = self.spec.p
        return GFElement(self.spec, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.spec.p
        return GFElement(self.spec, tuple((-a) % p for a in self.coeffs))

    def __sub__(self, other):
        return self + (-self._check(other))

    def __mul__(self, other):
        other = self._check(other)
        prod = _poly_mul(list(self.coeffs), list(other.coeffs), self.spec.p)
        return self.spec.element(_poly_mod(prod, list(self.spec.modulus), self.spec.p))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result, base = self.spec.one, self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self) -> GFElement:
        if self.is_zero():
            raise ZeroDivisionError("zero has no inverse in a field")
        return self ** (self.spec.order - 2)

    def __truediv__(self, other):
        return self * self._check(other).inverse()

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def to_int(self) -> int:
        return sum(c * self.spec.p**i for i, c in enumerate(self.coeffs))

    def __int__(self):
        return self.to_int()

    def __repr__(self):
        return f"GF({self.spec.order})[{self.to_int()}]"


def make_field(p: int, m: int, max_size: int = MAX_FIELD_SIZE) -> FieldSpec:
    """Field GF(p^m) over the smallest monic irreducible modulus of degree m.

    For m == 1 the modulus is ``x`` and the field is Z_p itself.
    """
    if not is_prime(p):
        raise NotPrime(f"p={p} is not prime")
    if m < 1:
        raise ValueError(f"extension degree must be positive, got {m}")
    if p**m > max_size:
        raise Overflow(f"GF({p}^{m}) exceeds field size cap {max_size}")
    return _make_field(p, m)


@lru_cache(maxsize=None)
def _make_field(p: int, m: int) -> FieldSpec:
    for low in range(p**m):
        f = list(_digits(low, p, m)) + [1]
        if is_irreducible(f, p):
            return FieldSpec(p, m, tuple(f))
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


def multiplicative_order(x: GFElement) -> int:
    if x.is_zero():
        raise ValueError("zero has no multiplicative order")
    n = x.spec.order - 1
    order = n
    for r in factorize(n):
        while order % r == 0 and (x ** (order // r)) == x.spec.one:
            order //= r
    return order


def primitive_element(spec: FieldSpec) -> GFElement:
    """Smallest nonzero element generating the multiplicative group."""
    return _primitive_element(spec)


@lru_cache(maxsize=None)
def _primitive_element(spec: FieldSpec) -> GFElement:
    n = spec.order - 1
    for v in range(1, spec.order):
        x = spec.element(v)
        if multiplicative_order(x) == n:
            return x
    raise AssertionError("multiplicative group is not cyclic")  # pragma: no cover


def discrete_log_table(spec: FieldSpec, alpha: GFElement) -> dict[GFElement, int]:
    n = spec.order - 1
    if alpha.spec != spec:
        raise ValueError("alpha is not an element of spec")
    if alpha.is_zero() or multiplicative_order(alpha) != n:
        raise NotPrimitive(f"{alpha!r} does not generate GF({spec.order})*")
    table = {}
    x = spec.one
    for i in range(n):
        table[x] = i
        x = x * alpha
    return table


@lru_cache(maxsize=None)
def _subfield_embedding(big: FieldSpec, sub_degree: int) -> dict[GFElement, GFElement]:
    """Map from the copy of GF(p^d) inside ``big`` to ``make_field(p, d)``.

    The small field's generator x is sent to the smallest root of its modulus
    lying in the subfield, which fixes the isomorphism deterministically.
    """
    p = big.p
    small = _make_field(p, sub_degree)
    q = p**sub_degree
    gamma = _primitive_element(big)
    step = (big.order - 1) // (q - 1)
    subfield = [big.zero] + [gamma ** (step * k) for k in range(q - 1)]
    subfield.sort(key=GFElement.to_int)

    def evaluate(coeffs, at):
        acc = big.zero
        for c in reversed(coeffs):
            acc = acc * at + c
        return acc

    beta = next(y for y in subfield if evaluate(small.modulus, y).is_zero())
    powers = [beta**i for i in range(sub_degree)]
    mapping = {}
    for s in small.elements():
        image = big.zero
        for c, b in zip(s.coeffs, powers):
            image = image + b * c
        mapping[image] = s
    if len(mapping) != q:
        raise AssertionError("subfield embedding is not injective")  # pragma: no cover
    return mapping


def relative_trace(x: GFElement, sub_degree: int) -> GFElement:
    """Trace from GF(q^k) down to GF(q), q = p^sub_degree, as an element of GF(q)."""
    spec = x.spec
    if sub_degree < 1 or spec.m % sub_degree:
        raise DegreeMismatch(f"sub_degree {sub_degree} does not divide extension degree {spec.m}")
    q = spec.p**sub_degree
    total, term = x, x
    for _ in range(spec.m // sub_degree - 1):
        term = term**q
        total = total + term
    return _subfield_embedding(spec, sub_degree)[total]
