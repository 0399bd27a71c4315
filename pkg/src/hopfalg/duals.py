"""The dual side: functionals on H, characters, convolution calculus.

Functionals are closed-form evaluation rules rather than infinite tables:
characters are determined by generator values (multiplicativity), and
infinitesimal characters vanish on the unit and on every product of two
augmentation-ideal elements.  Convolutions evaluate lazily through iterated
coproducts and are materialized back to closed forms only when the result
type is known.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Dict, Optional, Sequence, Tuple

from .algebra import Generator, Monomial
from .errors import (
    CutoffExceededError,
    DomainError,
    RingMismatchError,
    UnsupportedRingError,
    VerificationError,
)
from .hopf import HopfAlgebra
from .rings import QQ, Ring


class Functional:
    """A linear form on H, valued in a coefficient ring."""

    def __init__(self, ctx: HopfAlgebra, ring: Ring):
        self.ctx = ctx
        self.ring = ring

    def value_on(self, m: Monomial):
        raise NotImplementedError

    def __call__(self, h):
        """Evaluate on an Element (over Q) or a single Monomial."""
        if isinstance(h, Monomial):
            return self.value_on(h)
        if h.ring is not QQ and h.ring.tag != QQ.tag:
            raise RingMismatchError(
                "functionals evaluate elements with rational coefficients; "
                f"got an element over {h.ring.tag}"
            )
        total = self.ring.zero()
        for m, c in h.terms.items():
            total = self.ring.add(total, self.ring.scale(c, self.value_on(m)))
        return total

    def _check_compatible(self, other: "Functional"):
        if self.ctx is not other.ctx:
            raise DomainError("functionals live on different Hopf algebras")
        if self.ring is not other.ring and self.ring.tag != other.ring.tag:
            raise RingMismatchError(
                f"functionals over different rings: {self.ring.tag} vs {other.ring.tag}"
            )


class CounitFunctional(Functional):
    """The convolution unit: h -> counit(h)."""

    def value_on(self, m: Monomial):
        return self.ring.one() if m.is_unit else self.ring.zero()


def counit_functional(ctx: HopfAlgebra, ring: Ring) -> CounitFunctional:
    return CounitFunctional(ctx, ring)


class TableFunctional(Functional):
    """Explicit finite table with default value zero."""

    def __init__(self, ctx, ring, table: Dict[Monomial, object]):
        super().__init__(ctx, ring)
        self.table = {m: v for m, v in table.items() if not ring.is_zero(v)}

    def value_on(self, m: Monomial):
        return self.table.get(m, self.ring.zero())


class Character(Functional):
    """Multiplicative unital functional, stored by its generator values.

    Generators missing from the table take the value zero.  When ``cutoff``
    is set, the character was only materialized up to that degree and
    evaluating beyond it is an error rather than a silent zero.
    """

    def __init__(self, ctx, ring, gen_values: Dict[Generator, object], cutoff: Optional[int] = None):
        super().__init__(ctx, ring)
        self.gen_values = dict(gen_values)
        self.cutoff = cutoff

    def value_on(self, m: Monomial):
        if self.cutoff is not None and m.y_degree > self.cutoff:
            raise CutoffExceededError(
                f"character materialized to degree {self.cutoff}; "
                f"value on degree-{m.y_degree} monomial requested"
            )
        acc = self.ring.one()
        for g, e in m.powers:
            v = self.gen_values.get(g)
            if v is None:
                return self.ring.zero()
            for _ in range(e):
                acc = self.ring.mul(acc, v)
        return acc


class InfinitesimalCharacter(Functional):
    """A derivation-like functional: zero on 1 and on products."""

    def __init__(self, ctx, ring, gen_values: Dict[Generator, object], cutoff: Optional[int] = None):
        super().__init__(ctx, ring)
        self.gen_values = dict(gen_values)
        self.cutoff = cutoff

    def value_on(self, m: Monomial):
        if self.cutoff is not None and m.y_degree > self.cutoff:
            raise CutoffExceededError(
                f"infinitesimal character materialized to degree {self.cutoff}; "
                f"value on degree-{m.y_degree} monomial requested"
            )
        g = m.single_generator()
        if g is None:
            return self.ring.zero()
        return self.gen_values.get(g, self.ring.zero())


class ConvolutionProduct(Functional):
    """Lazy convolution of finitely many functionals.

    Evaluation goes through the flat iterated coproduct, so it is
    independent of any association order by construction.
    """

    def __init__(self, factors: Sequence[Functional]):
        if not factors:
            raise DomainError("convolution needs at least one factor")
        first = factors[0]
        flat = []
        for f in factors:
            first._check_compatible(f)
            if isinstance(f, ConvolutionProduct):
                flat.extend(f.factors)
            else:
                flat.append(f)
        super().__init__(first.ctx, first.ring)
        self.factors: Tuple[Functional, ...] = tuple(flat)

    def value_on(self, m: Monomial):
        n = len(self.factors)
        if n == 1:
            return self.factors[0].value_on(m)
        tensor = self.ctx.iterated_coproduct_monomial(m, n - 1)
        total = self.ring.zero()
        for key, c in tensor.terms.items():
            prod = self.ring.from_rational(c)
            for f, leg in zip(self.factors, key):
                if self.ring.is_zero(prod):
                    break
                prod = self.ring.mul(prod, f.value_on(leg))
            total = self.ring.add(total, prod)
        return total


class LinearCombination(Functional):
    """A finite rational linear combination of functionals."""

    def __init__(self, terms: Sequence[Tuple[Fraction, Functional]]):
        if not terms:
            raise DomainError("empty linear combination")
        first = terms[0][1]
        for _, f in terms:
            first._check_compatible(f)
        super().__init__(first.ctx, first.ring)
        self.combo = tuple((Fraction(q), f) for q, f in terms)

    def value_on(self, m: Monomial):
        total = self.ring.zero()
        for q, f in self.combo:
            total = self.ring.add(total, self.ring.scale(q, f.value_on(m)))
        return total


def convolve(*factors: Functional) -> ConvolutionProduct:
    return ConvolutionProduct(factors)


def character_inverse(chi: Character, max_degree: Optional[int] = None) -> Character:
    """The convolution inverse chi o S, materialized on generators.

    The inverse of a finitely-supported character is generally supported in
    every degree, so the materialization bound must come from somewhere: an
    explicit ``max_degree``, or the character's own cutoff.
    """
    ctx, ring = chi.ctx, chi.ring
    bound = max_degree if max_degree is not None else chi.cutoff
    if bound is None:
        if not chi.gen_values:
            return Character(ctx, ring, {}, cutoff=None)  # the counit
        raise DomainError(
            "character_inverse needs a materialization bound (max_degree) for "
            "characters without a cutoff"
        )
    values = {}
    for g in ctx.schema.generators_up_to(bound):
        v = chi(ctx.antipode_monomial(Monomial.of(g)))
        if not ring.is_zero(v):
            values[g] = v
    return Character(ctx, ring, values, cutoff=bound)


def materialize_character(ctx: HopfAlgebra, f: Functional, max_degree: int, verify: bool = False) -> Character:
    """Read a known-multiplicative functional back into character closed form."""
    ring = f.ring
    values = {}
    for g in ctx.schema.generators_up_to(max_degree):
        v = f.value_on(Monomial.of(g))
        if not ring.is_zero(v):
            values[g] = v
    chi = Character(ctx, ring, values, cutoff=max_degree)
    if verify:
        for m in ctx.basis_up_to(max_degree):
            if not ring.eq(chi.value_on(m), f.value_on(m)):
                raise VerificationError(
                    "functional is not multiplicative; materialization as a "
                    f"character fails on {m}",
                    witness=str(m),
                )
    return chi


def lie_bracket(z1: InfinitesimalCharacter, z2: InfinitesimalCharacter, max_degree: int) -> InfinitesimalCharacter:
    """[Z1, Z2] = Z1 * Z2 - Z2 * Z1, materialized on generators."""
    z1._check_compatible(z2)
    ctx, ring = z1.ctx, z1.ring
    forward = ConvolutionProduct([z1, z2])
    backward = ConvolutionProduct([z2, z1])
    values = {}
    for g in ctx.schema.generators_up_to(max_degree):
        m = Monomial.of(g)
        v = ring.sub(forward.value_on(m), backward.value_on(m))
        if not ring.is_zero(v):
            values[g] = v
    return InfinitesimalCharacter(ctx, ring, values, cutoff=max_degree)


def convolution_power_value(f: Functional, m: Monomial, n: int):
    """<f^{*n}, m> with the empty product the convolution unit."""
    ring = f.ring
    if n == 0:
        return ring.one() if m.is_unit else ring.zero()
    return ConvolutionProduct([f] * n).value_on(m)


def exp_star(z: InfinitesimalCharacter, max_degree: int) -> Character:
    """The convolution exponential, a character.

    On any h of degree d the series stops at n = d, because a convolution of
    more than d functionals vanishing on 1 kills h.  The materialized
    character is checked against the raw series on the whole basis up to the
    cutoff.
    """
    if max_degree < 1:
        raise DomainError("max_degree must be >= 1")
    ctx, ring = z.ctx, z.ring

    def series_value(m: Monomial):
        total = ring.one() if m.is_unit else ring.zero()
        for n in range(1, m.y_degree + 1):
            term = convolution_power_value(z, m, n)
            total = ring.add(total, ring.scale(Fraction(1, factorial(n)), term))
        return total

    values = {}
    for g in ctx.schema.generators_up_to(max_degree):
        v = series_value(Monomial.of(g))
        if not ring.is_zero(v):
            values[g] = v
    chi = Character(ctx, ring, values, cutoff=max_degree)
    for m in ctx.basis_up_to(max_degree):
        if not ring.eq(chi.value_on(m), series_value(m)):
            raise VerificationError(
                f"exponential failed multiplicativity on {m}", witness=str(m)
            )
    return chi


def log_star(chi: Character, max_degree: int) -> InfinitesimalCharacter:
    """The convolution logarithm sum_n (-1)^(n+1) (chi - 1_*)^{*n} / n.

    Finite on each monomial because chi - 1_* vanishes on 1; the n-th term is
    asserted to vanish once n exceeds the degree, and the result is verified
    to vanish on products (an infinitesimal character) up to the cutoff.
    """
    ctx, ring = chi.ctx, chi.ring
    delta = LinearCombination(
        [(Fraction(1), chi), (Fraction(-1), counit_functional(ctx, ring))]
    )

    def series_value(m: Monomial):
        if m.is_unit:
            return ring.zero()
        total = ring.zero()
        for n in range(1, m.y_degree + 1):
            term = convolution_power_value(delta, m, n)
            total = ring.add(total, ring.scale(Fraction((-1) ** (n + 1), n), term))
        # One step beyond the degree must vanish (the termination argument).
        beyond = convolution_power_value(delta, m, m.y_degree + 1)
        if not ring.is_zero(beyond):
            raise VerificationError(
                f"logarithm series failed to terminate on {m}", witness=str(m)
            )
        return total

    values = {}
    for g in ctx.schema.generators_up_to(max_degree):
        v = series_value(Monomial.of(g))
        if not ring.is_zero(v):
            values[g] = v
    result = InfinitesimalCharacter(ctx, ring, values, cutoff=max_degree)
    for m in ctx.basis_up_to(max_degree):
        if m.is_unit or m.single_generator() is not None:
            continue
        if not ring.is_zero(series_value(m)):
            raise VerificationError(
                f"logarithm is not infinitesimal: nonzero on the product {m}",
                witness=str(m),
            )
    return result


class GradingScaledFunctional(Functional):
    """<Y_* f, h> = <f, Y h>: scales the degree-n component by n (or 1/n)."""

    def __init__(self, f: Functional, inverse: bool = False):
        super().__init__(f.ctx, f.ring)
        self.f = f
        self.inverse = inverse

    def value_on(self, m: Monomial):
        d = m.y_degree
        if d == 0:
            if self.inverse:
                v = self.f.value_on(m)
                if not self.ring.is_zero(v):
                    raise DomainError(
                        "inverse grading transpose is only defined on "
                        "functionals vanishing at the unit"
                    )
            return self.ring.zero()
        q = Fraction(1, d) if self.inverse else Fraction(d)
        return self.ring.scale(q, self.f.value_on(m))


def y_star(f: Functional) -> Functional:
    if isinstance(f, InfinitesimalCharacter):
        ring = f.ring
        values = {
            g: ring.scale(Fraction(g.degree), v) for g, v in f.gen_values.items()
        }
        return InfinitesimalCharacter(f.ctx, ring, values, cutoff=f.cutoff)
    return GradingScaledFunctional(f)


def y_star_inverse(f: Functional) -> Functional:
    if isinstance(f, InfinitesimalCharacter):
        ring = f.ring
        values = {
            g: ring.scale(Fraction(1, g.degree), v) for g, v in f.gen_values.items()
        }
        return InfinitesimalCharacter(f.ctx, ring, values, cutoff=f.cutoff)
    return GradingScaledFunctional(f, inverse=True)


class ThetaScaledFunctional(Functional):
    """<theta_*z f, h> = <f, theta_z h>: degree-n values pick up exp(n z)."""

    def __init__(self, f: Functional, z, ring):
        super().__init__(f.ctx, ring)
        self.f = f
        self.z = z

    def value_on(self, m: Monomial):
        factor = self.ring.exp(self.ring.scale(Fraction(m.y_degree), self.z))
        return self.ring.mul(factor, self.f.value_on(m))


def theta_star(f: Functional, z) -> Functional:
    """Transpose of theta_z; z must be a positive-valuation series in f's ring."""
    if not hasattr(f.ring, "exp"):
        raise UnsupportedRingError(
            "the scaling transpose needs a truncated-series ring with an "
            f"exponential; {f.ring.tag} has none"
        )
    return ThetaScaledFunctional(f, z, f.ring)


def metric_distance(f1: Functional, f2: Functional, basis_cutoff: int) -> Tuple[Fraction, Fraction]:
    """Truncated dual-space distance plus its exact tail bound.

    Sums 2^(-i) min(|<f1 - f2, x_i>|, 1) over the first ``basis_cutoff``
    monomials, enumerated in non-decreasing degree (canonical order within a
    degree); the discarded tail is bounded by 2^(1 - basis_cutoff).
    """
    f1._check_compatible(f2)
    if f1.ring is not QQ and f1.ring.tag != QQ.tag:
        raise UnsupportedRingError(
            "the dual metric needs rational values (absolute values are "
            "not defined over this ring)"
        )
    if basis_cutoff < 1:
        raise DomainError("basis_cutoff must be >= 1")
    ctx = f1.ctx
    total = Fraction(0)
    index = 0
    # Any degree-k generator yields monomials in all multiples of k, so the
    # first basis_cutoff monomials live within this degree bound.
    max_scan = 4 * basis_cutoff + 4
    for degree in range(max_scan + 1):
        if index >= basis_cutoff:
            break
        for m in ctx.monomials_of_degree(degree):
            if index >= basis_cutoff:
                break
            diff = abs(f1.value_on(m) - f2.value_on(m))
            total += Fraction(1, 2**index) * min(diff, Fraction(1))
            index += 1
    tail = Fraction(2) / Fraction(2**basis_cutoff)
    return total, tail
