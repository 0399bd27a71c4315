"""Sparse exact multilinear algebra: monomials, elements, tensor powers.

Elements of the symmetric algebra are finite maps monomial -> coefficient
over a pluggable ring; tensors of any rank are keyed by monomial tuples.
All values are immutable after construction and all operations are pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Sequence, Tuple

from .errors import HopfError, RankMismatchError, RingMismatchError
from .rings import Ring


@dataclass(frozen=True, order=True)
class Generator:
    """A schema generator: homogeneous of strictly positive degree.

    Ordering is lexicographic on (degree, name), which fixes the canonical
    monomial order used everywhere.
    """

    degree: int
    name: str

    def __post_init__(self):
        if self.degree < 1:
            raise HopfError(
                f"generator {self.name!r} has degree {self.degree}; generators "
                "must be homogeneous of degree >= 1"
            )


@dataclass(frozen=True)
class Monomial:
    """A commutative word in generators: sorted powers with exponents >= 1."""

    powers: Tuple[Tuple[Generator, int], ...]

    @staticmethod
    def unit() -> "Monomial":
        return _UNIT

    @staticmethod
    def of(gen: Generator, exp: int = 1) -> "Monomial":
        if exp < 1:
            raise HopfError("monomial exponents must be >= 1")
        return Monomial(((gen, exp),))

    @staticmethod
    def from_powers(pairs: Iterable[Tuple[Generator, int]]) -> "Monomial":
        acc: dict = {}
        for gen, exp in pairs:
            acc[gen] = acc.get(gen, 0) + exp
        cleaned = tuple(sorted((g, e) for g, e in acc.items() if e != 0))
        for _, e in cleaned:
            if e < 0:
                raise HopfError("monomial exponents must be >= 1")
        return Monomial(cleaned)

    @property
    def is_unit(self) -> bool:
        return not self.powers

    @property
    def y_degree(self) -> int:
        return sum(e * g.degree for g, e in self.powers)

    @property
    def poly_degree(self) -> int:
        return sum(e for _, e in self.powers)

    def __mul__(self, other: "Monomial") -> "Monomial":
        if self.is_unit:
            return other
        if other.is_unit:
            return self
        return Monomial.from_powers(self.powers + other.powers)

    def sort_key(self):
        return (self.y_degree, self.powers)

    def generators(self) -> Iterator[Generator]:
        for g, _ in self.powers:
            yield g

    def single_generator(self):
        """The generator when this monomial is one, else None."""
        if len(self.powers) == 1 and self.powers[0][1] == 1:
            return self.powers[0][0]
        return None

    def __str__(self) -> str:
        if self.is_unit:
            return "1"
        parts = []
        for g, e in self.powers:
            parts.append(g.name if e == 1 else f"{g.name}^{e}")
        return "*".join(parts)


_UNIT = Monomial(())


class Element:
    """A finite linear combination of monomials over a coefficient ring."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: Ring, terms: dict):
        self.ring = ring
        self.terms = terms  # Monomial -> ring value, no zeros; never mutated

    # -- constructors --------------------------------------------------------

    @staticmethod
    def zero(ring: Ring) -> "Element":
        return Element(ring, {})

    @staticmethod
    def unit(ring: Ring) -> "Element":
        return Element(ring, {Monomial.unit(): ring.one()})

    @staticmethod
    def from_terms(ring: Ring, pairs: Iterable[Tuple[Monomial, object]]) -> "Element":
        acc: dict = {}
        for m, c in pairs:
            cur = acc.get(m)
            acc[m] = c if cur is None else ring.add(cur, c)
        return Element(ring, {m: c for m, c in acc.items() if not ring.is_zero(c)})

    @staticmethod
    def of_monomial(ring: Ring, m: Monomial, coeff=None) -> "Element":
        c = ring.one() if coeff is None else coeff
        if ring.is_zero(c):
            return Element(ring, {})
        return Element(ring, {m: c})

    # -- ring structure ------------------------------------------------------

    def _check_ring(self, other: "Element"):
        if self.ring is not other.ring and self.ring.tag != other.ring.tag:
            raise RingMismatchError(
                f"elements over different rings: {self.ring.tag} vs {other.ring.tag}"
            )

    def __add__(self, other: "Element") -> "Element":
        self._check_ring(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            cur = out.get(m)
            s = c if cur is None else self.ring.add(cur, c)
            if self.ring.is_zero(s):
                out.pop(m, None)
            else:
                out[m] = s
        return Element(self.ring, out)

    def __neg__(self) -> "Element":
        return Element(self.ring, {m: self.ring.neg(c) for m, c in self.terms.items()})

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def __mul__(self, other: "Element") -> "Element":
        self._check_ring(other)
        acc: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = m1 * m2
                c = self.ring.mul(c1, c2)
                cur = acc.get(m)
                acc[m] = c if cur is None else self.ring.add(cur, c)
        return Element(self.ring, {m: c for m, c in acc.items() if not self.ring.is_zero(c)})

    def scale(self, coeff) -> "Element":
        if self.ring.is_zero(coeff):
            return Element(self.ring, {})
        out = {}
        for m, c in self.terms.items():
            v = self.ring.mul(coeff, c)
            if not self.ring.is_zero(v):
                out[m] = v
        return Element(self.ring, out)

    def scale_rational(self, q: Fraction) -> "Element":
        return self.scale(self.ring.from_rational(q))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Element):
            return NotImplemented
        if self.ring is not other.ring and self.ring.tag != other.ring.tag:
            return False
        if set(self.terms) != set(other.terms):
            return False
        return all(self.ring.eq(c, other.terms[m]) for m, c in self.terms.items())

    def __hash__(self):
        raise TypeError("Element is not hashable")

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, m: Monomial):
        return self.terms.get(m, self.ring.zero())

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0].sort_key())

    def map_coefficients(self, fn: Callable, ring: Ring) -> "Element":
        out = {}
        for m, c in self.terms.items():
            v = fn(c)
            if not ring.is_zero(v):
                out[m] = v
        return Element(ring, out)

    def graded_components(self) -> dict:
        """Split into homogeneous pieces, keyed by degree."""
        out: dict = {}
        for m, c in self.terms.items():
            out.setdefault(m.y_degree, {})[m] = c
        return {d: Element(self.ring, t) for d, t in sorted(out.items())}

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            cs = self.ring.format_value(c)
            ms = str(m)
            if ms == "1":
                parts.append(cs)
            elif cs == "1":
                parts.append(ms)
            elif cs == "-1":
                parts.append(f"-{ms}")
            else:
                parts.append(f"{cs}*{ms}")
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__


class TensorElement:
    """A finite linear combination of rank-n monomial tensors."""

    __slots__ = ("ring", "rank", "terms")

    def __init__(self, ring: Ring, rank: int, terms: dict):
        self.ring = ring
        self.rank = rank
        self.terms = terms  # tuple[Monomial,...] -> value, no zeros

    @staticmethod
    def zero(ring: Ring, rank: int) -> "TensorElement":
        return TensorElement(ring, rank, {})

    @staticmethod
    def unit(ring: Ring, rank: int) -> "TensorElement":
        key = tuple(Monomial.unit() for _ in range(rank))
        return TensorElement(ring, rank, {key: ring.one()})

    @staticmethod
    def from_terms(ring: Ring, rank: int, pairs) -> "TensorElement":
        acc: dict = {}
        for key, c in pairs:
            if len(key) != rank:
                raise RankMismatchError(f"expected rank-{rank} keys, got {key}")
            cur = acc.get(key)
            acc[key] = c if cur is None else ring.add(cur, c)
        return TensorElement(ring, rank, {k: c for k, c in acc.items() if not ring.is_zero(c)})

    def _check(self, other: "TensorElement"):
        if self.rank != other.rank:
            raise RankMismatchError(f"rank mismatch: {self.rank} vs {other.rank}")
        if self.ring is not other.ring and self.ring.tag != other.ring.tag:
            raise RingMismatchError(
                f"tensors over different rings: {self.ring.tag} vs {other.ring.tag}"
            )

    def __add__(self, other: "TensorElement") -> "TensorElement":
        self._check(other)
        out = dict(self.terms)
        for key, c in other.terms.items():
            cur = out.get(key)
            s = c if cur is None else self.ring.add(cur, c)
            if self.ring.is_zero(s):
                out.pop(key, None)
            else:
                out[key] = s
        return TensorElement(self.ring, self.rank, out)

    def __neg__(self) -> "TensorElement":
        return TensorElement(
            self.ring, self.rank, {k: self.ring.neg(c) for k, c in self.terms.items()}
        )

    def __sub__(self, other: "TensorElement") -> "TensorElement":
        return self + (-other)

    def __mul__(self, other: "TensorElement") -> "TensorElement":
        """Componentwise product: legs multiply leg by leg."""
        self._check(other)
        acc: dict = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                key = tuple(a * b for a, b in zip(k1, k2))
                c = self.ring.mul(c1, c2)
                cur = acc.get(key)
                acc[key] = c if cur is None else self.ring.add(cur, c)
        return TensorElement(
            self.ring, self.rank, {k: c for k, c in acc.items() if not self.ring.is_zero(c)}
        )

    def scale(self, coeff) -> "TensorElement":
        if self.ring.is_zero(coeff):
            return TensorElement(self.ring, self.rank, {})
        out = {}
        for k, c in self.terms.items():
            v = self.ring.mul(coeff, c)
            if not self.ring.is_zero(v):
                out[k] = v
        return TensorElement(self.ring, self.rank, out)

    def scale_rational(self, q: Fraction) -> "TensorElement":
        return self.scale(self.ring.from_rational(q))

    def swap(self) -> "TensorElement":
        """Exchange the two legs of a rank-2 tensor (an involution)."""
        if self.rank != 2:
            raise RankMismatchError("swap is defined for rank-2 tensors")
        return TensorElement(
            self.ring, 2, {(b, a): c for (a, b), c in self.terms.items()}
        )

    def outer(self, other: "TensorElement") -> "TensorElement":
        """Concatenate legs: rank j x rank k -> rank j+k."""
        if self.ring is not other.ring and self.ring.tag != other.ring.tag:
            raise RingMismatchError("outer product needs a common ring")
        acc: dict = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                key = k1 + k2
                c = self.ring.mul(c1, c2)
                cur = acc.get(key)
                acc[key] = c if cur is None else self.ring.add(cur, c)
        return TensorElement(
            self.ring,
            self.rank + other.rank,
            {k: c for k, c in acc.items() if not self.ring.is_zero(c)},
        )

    def apply_to_leg(self, index: int, fn: Callable[[Monomial], "TensorElement"], rank_delta: int) -> "TensorElement":
        """Replace leg ``index`` by the tensor expansion ``fn(leg)``.

        ``fn`` maps a monomial to a rank-(1+rank_delta) tensor; coefficients
        distribute multilinearly.
        """
        acc: dict = {}
        for key, c in self.terms.items():
            expanded = fn(key[index])
            for ekey, ec in expanded.terms.items():
                new_key = key[:index] + ekey + key[index + 1 :]
                v = self.ring.mul(c, ec)
                cur = acc.get(new_key)
                acc[new_key] = v if cur is None else self.ring.add(cur, v)
        return TensorElement(
            self.ring,
            self.rank + rank_delta,
            {k: c for k, c in acc.items() if not self.ring.is_zero(c)},
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, TensorElement):
            return NotImplemented
        if self.ring is not other.ring and self.ring.tag != other.ring.tag:
            return False
        if self.rank != other.rank or set(self.terms) != set(other.terms):
            return False
        return all(self.ring.eq(c, other.terms[k]) for k, c in self.terms.items())

    def __hash__(self):
        raise TypeError("TensorElement is not hashable")

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def sorted_terms(self):
        return sorted(
            self.terms.items(), key=lambda kv: tuple(m.sort_key() for m in kv[0])
        )

    def map_coefficients(self, fn: Callable, ring: Ring) -> "TensorElement":
        out = {}
        for k, c in self.terms.items():
            v = fn(c)
            if not ring.is_zero(v):
                out[k] = v
        return TensorElement(ring, self.rank, out)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for key, c in self.sorted_terms():
            cs = self.ring.format_value(c)
            ks = " (x) ".join(str(m) for m in key)
            parts.append(ks if cs == "1" else f"{cs}*[{ks}]")
        return " + ".join(parts)

    __repr__ = __str__


def tensor_of_elements(*elements: Element) -> TensorElement:
    """Outer product of elements, as a rank-len(elements) tensor."""
    if not elements:
        raise RankMismatchError("need at least one element")
    ring = elements[0].ring
    acc = TensorElement(ring, 1, {(m,): c for m, c in elements[0].terms.items()})
    for e in elements[1:]:
        nxt = TensorElement(ring, 1, {(m,): c for m, c in e.terms.items()})
        acc = acc.outer(nxt)
    return acc


def pair(functionals: Sequence[Callable[[Monomial], object]], tensor: TensorElement, ring: Ring):
    """Multilinear duality contraction <f_1 (x) ... (x) f_n, tensor>.

    Each functional maps a monomial to a ring value; the contraction is
    sum_terms coeff * prod_i f_i(leg_i).
    """
    if len(functionals) != tensor.rank:
        raise RankMismatchError(
            f"{len(functionals)} functionals against a rank-{tensor.rank} tensor"
        )
    total = ring.zero()
    for key, c in tensor.terms.items():
        prod = c
        for f, leg in zip(functionals, key):
            if ring.is_zero(prod):
                break
            prod = ring.mul(prod, f(leg))
        total = ring.add(total, prod)
    return total
