"""Characters, infinitesimal characters, convolution calculus, dual metric."""

import random
from fractions import Fraction
from itertools import permutations

import pytest

from hopfalg.algebra import Monomial
from hopfalg.duals import (
    Character,
    ConvolutionProduct,
    InfinitesimalCharacter,
    TableFunctional,
    character_inverse,
    convolve,
    counit_functional,
    exp_star,
    lie_bracket,
    log_star,
    materialize_character,
    metric_distance,
    theta_star,
    y_star,
    y_star_inverse,
)
from hopfalg.errors import CutoffExceededError, UnsupportedRingError
from hopfalg.hopf import HopfAlgebra
from hopfalg.instances import ladder_schema, rooted_tree_schema
from hopfalg.rings import QQ, LaurentRing


@pytest.fixture(scope="module")
def ladder():
    return HopfAlgebra(ladder_schema(), validate_to=6)


@pytest.fixture(scope="module")
def trees():
    return HopfAlgebra(rooted_tree_schema(4))


def gen(ladder, n):
    return ladder.schema.generator(n)


def t(ladder, n, exp=1):
    return Monomial.of(gen(ladder, n), exp)


def ladder_char(ladder, values, cutoff=None):
    return Character(
        ladder, QQ, {gen(ladder, n): Fraction(v) for n, v in values.items()}, cutoff
    )


def ladder_inf(ladder, values, cutoff=None):
    return InfinitesimalCharacter(
        ladder, QQ, {gen(ladder, n): Fraction(v) for n, v in values.items()}, cutoff
    )


def random_inf(ladder, rng, max_degree=5):
    return ladder_inf(
        ladder, {n: rng.randint(-5, 5) for n in range(1, max_degree + 1)}
    )


def test_unit_functional_is_counit(ladder):
    one_star = counit_functional(ladder, QQ)
    assert one_star(ladder.unit_element()) == 1
    assert one_star.value_on(t(ladder, 3)) == 0
    h = ladder.monomial_element(t(ladder, 1)).scale_rational(Fraction(7))
    assert one_star(h) == 0


def test_character_multiplicativity(ladder):
    chi = ladder_char(ladder, {1: 2})
    assert chi.value_on(t(ladder, 1, 2)) == 4


def test_infinitesimal_kills_products(ladder):
    z = ladder_inf(ladder, {1: 1})
    assert z.value_on(t(ladder, 1, 2)) == 0
    assert z.value_on(Monomial.unit()) == 0
    assert z.value_on(t(ladder, 1)) == 1


def test_convolution_unit_law(ladder):
    chi = ladder_char(ladder, {1: 3, 2: -1, 3: 5})
    one_star = counit_functional(ladder, QQ)
    for m in ladder.basis_up_to(5):
        assert convolve(chi, one_star).value_on(m) == chi.value_on(m)
        assert convolve(one_star, chi).value_on(m) == chi.value_on(m)


def test_convolution_of_infinitesimals(ladder):
    z1 = ladder_inf(ladder, {1: 2})
    z2 = ladder_inf(ladder, {1: 5})
    # Only the t1 (x) t1 term of the reduced coproduct of t2 survives.
    assert convolve(z1, z2).value_on(t(ladder, 2)) == 10
    # On a degree-1 element every cross term hits <Z, 1> = 0.
    assert convolve(z1, z2).value_on(t(ladder, 1)) == 0


def test_convolution_associativity(ladder):
    rng = random.Random(5)
    f = ladder_char(ladder, {1: 2, 2: 1})
    g = ladder_inf(ladder, {1: -1, 3: 2})
    h = ladder_char(ladder, {1: 1, 2: 3})
    for m in ladder.basis_up_to(4):
        v1 = convolve(convolve(f, g), h).value_on(m)
        v2 = convolve(f, convolve(g, h)).value_on(m)
        assert v1 == v2


def test_character_inverse_examples(ladder):
    eps = Character(ladder, QQ, {})
    inv = character_inverse(eps)
    assert inv.gen_values == {}
    a, b = Fraction(3), Fraction(-2)
    chi = ladder_char(ladder, {1: a, 2: b})
    inv = character_inverse(chi, max_degree=5)
    assert inv.value_on(t(ladder, 1)) == -a
    # chi(S t2) with S t2 = -t2 + t1^2.
    assert inv.value_on(t(ladder, 2)) == -b + a * a


def test_character_inverse_is_convolution_inverse(ladder):
    chi = ladder_char(ladder, {1: 2, 2: 7, 3: -3})
    inv = character_inverse(chi, max_degree=5)
    one_star = counit_functional(ladder, QQ)
    for m in ladder.basis_up_to(5):
        assert convolve(inv, chi).value_on(m) == one_star.value_on(m)
        assert convolve(chi, inv).value_on(m) == one_star.value_on(m)


def test_character_convolution_is_character(ladder):
    chi1 = ladder_char(ladder, {1: 2, 2: 1})
    chi2 = ladder_char(ladder, {1: -1, 2: 4})
    prod = materialize_character(ladder, convolve(chi1, chi2), 5, verify=True)
    assert isinstance(prod, Character)


def test_lie_bracket_antisymmetry_and_ladder_commutativity(ladder):
    rng = random.Random(2)
    for _ in range(5):
        z1, z2 = random_inf(ladder, rng), random_inf(ladder, rng)
        b11 = lie_bracket(z1, z1, 5)
        assert not b11.gen_values
        # The ladder coproduct is cocommutative, so all brackets vanish.
        b12 = lie_bracket(z1, z2, 5)
        assert not b12.gen_values


def test_lie_bracket_trees_two_routes_agree(trees):
    dot = trees.schema.generator_by_name("[]")
    ell2 = trees.schema.generator_by_name("[[]]")
    z1 = InfinitesimalCharacter(trees, QQ, {dot: Fraction(1)})
    z2 = InfinitesimalCharacter(trees, QQ, {ell2: Fraction(1)})
    bracket = lie_bracket(z1, z2, 4)
    for g in trees.schema.generators_up_to(4):
        m = Monomial.of(g)
        direct = QQ.sub(
            convolve(z1, z2).value_on(m), convolve(z2, z1).value_on(m)
        )
        assert bracket.value_on(m) == direct
    # Trees are genuinely non-cocommutative: the 3-vertex cherry witnesses it.
    cherry = trees.schema.generator_by_name("[[][]]")
    assert bracket.value_on(Monomial.of(cherry)) == 2


def test_lie_bracket_jacobi(trees):
    rng = random.Random(9)
    gens = trees.schema.generators_up_to(3)
    def rand_inf():
        return InfinitesimalCharacter(
            trees, QQ, {g: Fraction(rng.randint(-3, 3)) for g in gens}
        )
    z1, z2, z3 = rand_inf(), rand_inf(), rand_inf()
    jacobi = {}
    for g in gens:
        m = Monomial.of(g)
        total = Fraction(0)
        for a, b, c in ((z1, z2, z3), (z2, z3, z1), (z3, z1, z2)):
            inner = lie_bracket(b, c, 3)
            total += lie_bracket(a, inner, 3).value_on(m)
        jacobi[g.name] = total
    assert all(v == 0 for v in jacobi.values())


def test_exp_star_examples(ladder):
    a = Fraction(3)
    z = ladder_inf(ladder, {1: a})
    chi = exp_star(z, 4)
    assert chi.value_on(Monomial.unit()) == 1
    # Z*Z(t2) = a^2 divided by 2!.
    assert chi.value_on(t(ladder, 2)) == a * a / 2
    assert chi.value_on(t(ladder, 1, 2)) == a * a


def test_exp_beyond_cutoff_raises(ladder):
    chi = exp_star(ladder_inf(ladder, {1: 1}), 3)
    with pytest.raises(CutoffExceededError):
        chi.value_on(t(ladder, 4))


def test_log_star_examples(ladder):
    assert log_star(Character(ladder, QQ, {}), 4).gen_values == {}
    a = Fraction(5)
    chi = ladder_char(ladder, {1: a})
    assert log_star(chi, 4).value_on(t(ladder, 1)) == a


def test_exp_log_round_trip(ladder):
    rng = random.Random(31)
    for _ in range(6):
        z = random_inf(ladder, rng)
        chi = exp_star(z, 5)
        back = log_star(chi, 5)
        for n in range(1, 6):
            assert back.value_on(t(ladder, n)) == z.value_on(t(ladder, n))
        again = exp_star(back, 5)
        for m in ladder.basis_up_to(5):
            assert again.value_on(m) == chi.value_on(m)


def test_y_star(ladder):
    z = ladder_inf(ladder, {1: 2, 2: 3, 4: -1})
    yz = y_star(z)
    for n in (1, 2, 4):
        assert yz.value_on(t(ladder, n)) == n * z.value_on(t(ladder, n))
    back = y_star_inverse(yz)
    for n in (1, 2, 4):
        assert back.value_on(t(ladder, n)) == z.value_on(t(ladder, n))


def test_y_star_derivation_property(ladder):
    rng = random.Random(12)
    z1, z2 = random_inf(ladder, rng), random_inf(ladder, rng)
    m = t(ladder, 3)
    lhs = y_star(convolve(z1, z2)).value_on(m)
    rhs = QQ.add(
        convolve(y_star(z1), z2).value_on(m), convolve(z1, y_star(z2)).value_on(m)
    )
    assert lhs == rhs


def test_theta_star(ladder):
    ring = LaurentRing(QQ, "z")
    z = ring.monomial(1, trunc=4)
    chi = Character(
        ladder,
        ring,
        {gen(ladder, 1): ring.from_rational(Fraction(2)),
         gen(ladder, 2): ring.from_rational(Fraction(5))},
    )
    shifted = theta_star(chi, z)
    expect = ring.mul(
        ring.exp(ring.scale(Fraction(2), z)), chi.value_on(t(ladder, 2))
    )
    assert ring.eq(shifted.value_on(t(ladder, 2)), expect)


def test_metric_distance(ladder):
    zero = TableFunctional(ladder, QQ, {})
    xi = TableFunctional(ladder, QQ, {Monomial.unit(): Fraction(1)})
    d, tail = metric_distance(xi, zero, 5)
    assert d == 1  # only x_0 = 1 contributes, with weight 2^0
    assert tail == Fraction(2, 2**5)
    assert metric_distance(xi, xi, 5)[0] == 0
    rng = random.Random(8)
    for _ in range(5):
        f = TableFunctional(
            ladder,
            QQ,
            {m: Fraction(rng.randint(-3, 3)) for m in ladder.basis_up_to(3)},
        )
        g = TableFunctional(
            ladder,
            QQ,
            {m: Fraction(rng.randint(-3, 3)) for m in ladder.basis_up_to(3)},
        )
        assert metric_distance(f, g, 8) == metric_distance(g, f, 8)
        # triangle inequality at matching cutoffs
        h = TableFunctional(ladder, QQ, {})
        dfg = metric_distance(f, g, 8)[0]
        assert dfg <= metric_distance(f, h, 8)[0] + metric_distance(h, g, 8)[0]


def test_metric_needs_rationals(ladder):
    ring = LaurentRing(QQ, "eps")
    f = Character(ladder, ring, {})
    with pytest.raises(UnsupportedRingError):
        metric_distance(f, f, 3)


def test_functional_rejects_foreign_coefficients(ladder):
    from hopfalg.errors import RingMismatchError
    from hopfalg.algebra import Element

    ring = LaurentRing(QQ, "z")
    chi = ladder_char(ladder, {1: 2})
    foreign = Element.unit(ring)
    with pytest.raises(RingMismatchError):
        chi(foreign)


def test_nilpotence_of_convolution_powers(ladder):
    rng = random.Random(77)
    for _ in range(10):
        for n in range(1, 5):
            zs = [random_inf(ladder, rng) for _ in range(n + 1)]
            conv = ConvolutionProduct(zs)
            for m in ladder.basis_up_to(n):
                assert conv.value_on(m) == 0


def test_permanent_formula_against_brute_force(ladder):
    # Route A: evaluate the convolution through the flat iterated coproduct.
    # Route B: the permutation-sum formula. They must agree exactly.
    rng = random.Random(41)
    gens = [gen(ladder, n) for n in (1, 2, 3)]
    for _ in range(10):
        for n in (2, 3, 4):
            zs = [random_inf(ladder, rng, max_degree=4) for _ in range(n)]
            for picks in _products(gens, n):
                m = Monomial.from_powers((g, 1) for g in picks)
                brute = ConvolutionProduct(zs).value_on(m)
                formula = Fraction(0)
                for sigma in permutations(range(n)):
                    prod = Fraction(1)
                    for j, g in enumerate(picks):
                        prod *= zs[sigma[j]].value_on(Monomial.of(g))
                    formula += prod
                assert brute == formula


def _products(gens, n):
    if n == 0:
        yield ()
        return
    for rest in _products(gens, n - 1):
        for g in gens:
            yield rest + (g,)


def test_vanishing_on_longer_products(ladder):
    rng = random.Random(13)
    g1 = gen(ladder, 1)
    for n in (1, 2, 3):
        zs = [random_inf(ladder, rng) for _ in range(n)]
        for m_len in range(n + 1, n + 3):
            m = Monomial.of(g1, m_len)
            assert ConvolutionProduct(zs).value_on(m) == 0


def test_separation(ladder):
    # For each basis monomial, the dual-basis infinitesimal characters of its
    # factors give a convolution product that does not vanish on it.
    for m in ladder.basis_up_to(4):
        if m.is_unit:
            continue
        factors = []
        for g, e in m.powers:
            factors.extend([g] * e)
        zs = [
            InfinitesimalCharacter(ladder, QQ, {g: Fraction(1)}) for g in factors
        ]
        assert ConvolutionProduct(zs).value_on(m) != 0


def test_s_star_antihomomorphism(ladder):
    rng = random.Random(19)
    chi1 = ladder_char(ladder, {1: 2, 2: -1, 3: 4})
    chi2 = ladder_char(ladder, {1: 1, 2: 3, 3: -2})

    def s_star(f):
        return TableFunctional(
            ladder,
            QQ,
            {m: f(ladder.antipode_monomial(m)) for m in ladder.basis_up_to(4)},
        )

    lhs = s_star(convolve(chi1, chi2))
    rhs = convolve(s_star(chi2), s_star(chi1))
    for m in ladder.basis_up_to(4):
        assert lhs.value_on(m) == rhs.value_on(m)


def test_group_like_and_primitive_characterizations(ladder):
    # Multiplicativity as the testable group-like property.
    chi = ladder_char(ladder, {1: 2, 2: 3})
    z = ladder_inf(ladder, {1: 4, 2: -1})
    eps = counit_functional(ladder, QQ)
    for m1 in ladder.basis_up_to(3):
        for m2 in ladder.basis_up_to(3):
            assert chi.value_on(m1 * m2) == chi.value_on(m1) * chi.value_on(m2)
            lhs = z.value_on(m1 * m2)
            rhs = z.value_on(m1) * eps.value_on(m2) + eps.value_on(m1) * z.value_on(m2)
            assert lhs == rhs
