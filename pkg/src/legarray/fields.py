"""Arithmetic over GF(p) and GF(p^n) for array construction.

Everything here is exact integer arithmetic sized for desk-scale parameters
(p^n well below 2**63): deterministic trial division for primality and
factoring, dense little-endian polynomial arithmetic, a multiplicative-order
test for primitivity, and enumeration of the powers of the generator.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

FieldElement = tuple[int, ...]

# Antilog tables are cached up to this field order; larger fields fall back
# to on-demand exponentiation.
_POWER_TABLE_LIMIT = 1 << 22


def is_prime(u: int) -> bool:
    """Deterministic trial-division primality test (fine for u < 2**32)."""
    if u < 2:
        return False
    if u < 4:
        return True
    if u % 2 == 0:
        return False
    d = 3
    while d * d <= u:
        if u % d == 0:
            return False
        d += 2
    return True


def factorize(u: int) -> list[int]:
    """Prime factors of u with multiplicity, ascending. Requires u >= 2."""
    if u < 2:
        raise ValueError(f"factorize requires u >= 2, got {u}")
    out = []
    d = 2
    while d * d <= u:
        while u % d == 0:
            out.append(d)
            u //= d
        d += 1 if d == 2 else 2
    if u > 1:
        out.append(u)
    return out


def _check_odd_prime(p: int) -> int:
    if not is_prime(p) or p == 2:
        raise ValueError(f"p must be an odd prime, got {p}")
    return p


@lru_cache(maxsize=None)
def quadratic_residues(p: int) -> frozenset[int]:
    """The (p-1)/2 nonzero quadratic residues mod an odd prime p."""
    _check_odd_prime(p)
    return frozenset(pow(k, 2, p) for k in range(1, p))


@dataclass(frozen=True)
class Poly:
    """Polynomial over GF(p), little-endian: coeffs[j] multiplies x**j.

    Normalized so the leading coefficient is nonzero (the zero polynomial
    is stored as (0,)).
    """

    coeffs: tuple[int, ...]
    p: int

    def __post_init__(self):
        _check_odd_prime(self.p)
        if not self.coeffs:
            raise ValueError("empty coefficient list")
        reduced = tuple(c % self.p for c in self.coeffs)
        while len(reduced) > 1 and reduced[-1] == 0:
            reduced = reduced[:-1]
        object.__setattr__(self, "coeffs", reduced)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_monic(self) -> bool:
        return self.coeffs[-1] == 1

    @property
    def is_zero(self) -> bool:
        return self.coeffs == (0,)

    @classmethod
    def parse(cls, text: str, p: int) -> "Poly":
        """Parse a comma-separated coefficient list, constant term first."""
        try:
            coeffs = tuple(int(tok) for tok in text.split(","))
        except ValueError:
            raise ValueError(f"bad polynomial string {text!r}") from None
        return cls(coeffs, p)

    def format(self) -> str:
        """Inverse of parse: 'c0,c1,...' constant term first."""
        return ",".join(str(c) for c in self.coeffs)

    def monic_reciprocal(self) -> "Poly":
        """The reversed-coefficient polynomial, scaled monic.

        Requires a nonzero constant term. The roots of the result are the
        inverses of the roots of self, so primitivity is preserved.
        """
        if self.coeffs[0] == 0:
            raise ValueError("reciprocal undefined for zero constant term")
        rev = tuple(reversed(self.coeffs))
        inv_lead = pow(rev[-1], self.p - 2, self.p)
        return Poly(tuple(c * inv_lead % self.p for c in rev), self.p)

    def __str__(self) -> str:
        terms = []
        for j in range(self.degree, -1, -1):
            c = self.coeffs[j]
            if c == 0 and self.degree > 0:
                continue
            if j == 0:
                terms.append(str(c))
            elif j == 1:
                terms.append("x" if c == 1 else f"{c}x")
            else:
                terms.append(f"x^{j}" if c == 1 else f"{c}x^{j}")
        return " + ".join(terms) if terms else "0"


def _mul_mod(a: tuple, b: tuple, modulus: tuple, p: int) -> tuple:
    """Multiply little-endian coefficient tuples mod (modulus, p).

    modulus must be monic; operands must already have degree < deg(modulus).
    """
    n = len(modulus) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            prod[i + j] = (prod[i + j] + ai * bj) % p
    for k in range(len(prod) - 1, n - 1, -1):
        c = prod[k]
        if c:
            prod[k] = 0
            for j in range(n):
                prod[k - n + j] = (prod[k - n + j] - c * modulus[j]) % p
    prod = prod[: max(n, 1)]
    return tuple(prod) + (0,) * (n - len(prod))


def _pow_mod(base: tuple, e: int, modulus: tuple, p: int) -> tuple:
    n = len(modulus) - 1
    result = (1,) + (0,) * (n - 1)
    acc = base
    while e:
        if e & 1:
            result = _mul_mod(result, acc, modulus, p)
        acc = _mul_mod(acc, acc, modulus, p)
        e >>= 1
    return result


def is_primitive(poly: Poly, n: int | None = None) -> bool:
    """True iff x generates the multiplicative group of GF(p)[x]/(poly).

    Tests that the order of x is exactly p**n - 1: x**(p**n - 1) == 1 and
    x**((p**n - 1)/q) != 1 for every prime q dividing p**n - 1. When the
    order is maximal the quotient ring is necessarily a field, so no
    separate irreducibility check is needed.
    """
    if n is None:
        n = poly.degree
    if n < 1:
        raise ValueError("degree must be >= 1")
    if poly.degree != n or not poly.is_monic:
        raise ValueError(
            f"expected a monic polynomial of degree {n}, got {poly}"
        )
    p = poly.p
    order = p**n - 1
    modulus = poly.coeffs
    if n == 1:
        # x == -c0 in GF(p); test the residue's order directly
        g = (-modulus[0]) % p
        if g == 0 or pow(g, order, p) != 1:
            return False
        return all(pow(g, order // q, p) != 1 for q in set(factorize(order)))
    x = tuple(1 if j == 1 else 0 for j in range(n))
    one = (1,) + (0,) * (n - 1)
    if _pow_mod(x, order, modulus, p) != one:
        return False
    return all(
        _pow_mod(x, order // q, modulus, p) != one
        for q in set(factorize(order))
    )


def find_primitive_poly(p: int, n: int) -> Poly:
    """Smallest monic primitive polynomial of degree n over GF(p).

    Candidates x**n + c_{n-1} x**(n-1) + ... + c_0 are scanned in
    lexicographic order of (c_0, ..., c_{n-1}), so the result is
    deterministic across runs.
    """
    _check_odd_prime(p)
    if n < 1:
        raise ValueError(f"degree must be >= 1, got {n}")
    for tail in itertools.product(range(p), repeat=n):
        cand = Poly(tail + (1,), p)
        if is_primitive(cand, n):
            return cand
    raise RuntimeError(f"no primitive polynomial of degree {n} over GF({p})")


class ExtField:
    """GF(p^n) presented as GF(p)[x]/(modulus) with generator alpha = x.

    Elements are little-endian coefficient tuples of length n. The full
    antilog table (all p**n - 1 powers of alpha) is built lazily and cached
    for fields small enough to enumerate.
    """

    def __init__(self, p: int, n: int, modulus: Poly | None = None):
        _check_odd_prime(p)
        if n < 1:
            raise ValueError(f"extension degree must be >= 1, got {n}")
        if modulus is None:
            modulus = find_primitive_poly(p, n)
        if modulus.p != p:
            raise ValueError("modulus characteristic does not match p")
        if not is_primitive(modulus, n):
            raise ValueError(f"{modulus} is not primitive of degree {n} over GF({p})")
        self.p = p
        self.n = n
        self.modulus = modulus
        self.order = p**n - 1
        self._table: list[FieldElement] | None = None

    def _coerce(self, a) -> tuple:
        coeffs = tuple(a.coeffs) if isinstance(a, Poly) else tuple(int(c) % self.p for c in a)
        if len(coeffs) > self.n and any(c % self.p for c in coeffs[self.n:]):
            raise ValueError(f"operand degree must be < {self.n}")
        coeffs = coeffs[: self.n]
        return coeffs + (0,) * (self.n - len(coeffs))

    def mul(self, a, b) -> FieldElement:
        """Product of two field elements (coefficient tuples or Polys)."""
        return _mul_mod(self._coerce(a), self._coerce(b), self.modulus.coeffs, self.p)

    def power(self, i: int) -> FieldElement:
        """Coefficient tuple of alpha**i for 0 <= i < p**n - 1."""
        if not 0 <= i < self.order:
            raise ValueError(f"exponent {i} out of range [0, {self.order})")
        if self._table is not None:
            return self._table[i]
        if self.order <= _POWER_TABLE_LIMIT:
            return self.powers()[i]
        x = tuple(1 if j == 1 else 0 for j in range(self.n))
        if self.n == 1:
            x = ((-self.modulus.coeffs[0]) % self.p,)
        return _pow_mod(x, i, self.modulus.coeffs, self.p)

    def powers(self) -> list[FieldElement]:
        """Antilog table: [alpha**0, alpha**1, ..., alpha**(p**n - 2)].

        Built by repeated multiplication by x with monic reduction, which
        visits every nonzero field element exactly once.
        """
        if self._table is None:
            if self.order > _POWER_TABLE_LIMIT:
                raise ValueError(f"field order {self.order + 1} too large to tabulate")
            p, n, mod = self.p, self.n, self.modulus.coeffs
            cur = [1] + [0] * (n - 1)
            table = [tuple(cur)]
            for _ in range(self.order - 1):
                carry = cur[-1]
                for j in range(n - 1, 0, -1):
                    cur[j] = (cur[j - 1] - carry * mod[j]) % p
                cur[0] = (-carry * mod[0]) % p
                table.append(tuple(cur))
            self._table = table
        return self._table

    def __repr__(self) -> str:
        return f"ExtField(p={self.p}, n={self.n}, modulus={self.modulus})"
