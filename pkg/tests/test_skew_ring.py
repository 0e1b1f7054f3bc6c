import random
from itertools import product

import pytest

from moritakit import CapacityError, InvalidInputError, ModularRing, QQ, SkewRing, SubactionMap
from moritakit import absorbing_unit, unit_join, unit_join_identity
from moritakit.groups import parse_word
from moritakit.skew_ring import add, generators_over, multiply, negate

from instances import shift_action, t, t_inv

e = parse_word("e")


@pytest.fixture
def R():
    return SkewRing(shift_action())


def cells(x, g):
    """Component at ``g`` as ``{frozenset(atoms): coef}`` per block."""
    U = x.ring.base.universe
    return {U.atoms_of(b): c for b, c in x.component(g).items()}


def test_add_examples(R):
    x = R.generator([2], t) + R.generator([3], t)
    assert cells(x, t) == {frozenset({2}): 1, frozenset({3}): 1}
    assert x == R.generator([2, 3], t)
    R2 = SkewRing(shift_action(), ModularRing(2))
    U = R2.generator([2, 3], t)
    assert not (U + U)
    y = add(R.generator([1, 2]), R.generator([2, 3]))
    assert cells(y, e) == {frozenset({1}): 1, frozenset({2}): 2, frozenset({3}): 1}


def test_generator_outside_ideal(R):
    with pytest.raises(InvalidInputError):
        R.generator([1], t)


def test_multiply_examples(R):
    assert multiply(R.generator([1, 2]), R.generator([2, 3])) == R.generator([2])
    lhs = R.generator([2, 3], t) * R.generator([1, 2], t_inv)
    assert lhs == R.generator([2, 3])
    assert R.generator([2, 3], t) * R.zero == R.zero


def test_multiply_beyond_bound():
    R = SkewRing(shift_action(bound=1))
    with pytest.raises(CapacityError):
        R.generator([2, 3], t) * R.generator([2, 3], t)


def test_parse(R):
    x = R.parse("2*{1,2}d[e] + 1*{2,3}d[t]")
    assert x == R.generator([1, 2], e, 2) + R.generator([2, 3], t)
    assert R.parse("{3}d[t] - {3}d[t]") == R.zero
    with pytest.raises(InvalidInputError):
        R.parse("{9}d[e]")


def test_unit_join_examples(R):
    assert unit_join(R.unit([1]), R.unit([2])).U.atoms == {1, 2}
    u = R.unit([1, 3])
    assert unit_join(u, u) == u
    e1, e2 = R.unit([1, 2]), R.unit([2, 3])
    assert unit_join(e1, e2).U.atoms == {1, 2, 3}
    a, b = e1.element(), e2.element()
    assert add(add(a, b), negate(multiply(a, b))) == unit_join(e1, e2).element()
    assert unit_join_identity(e1, e2)


def test_absorbing_unit_examples(R):
    x = R.generator([1, 3])
    assert absorbing_unit(x).U.atoms == {1, 3}
    for x in (R.generator([2], t), R.generator([2, 3], t) + R.generator([1], t_inv, 3)):
        u = absorbing_unit(x).element()
        assert u * x == x == x * u


def all_generators(R):
    return list(generators_over(R, max_atoms=3))


def test_associativity_and_distributivity_exhaustive(R):
    gens = all_generators(R)
    assert len(gens) == 15
    for x, y, z in product(gens, repeat=3):
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z
        assert (x + y) * z == x * z + y * z


def test_grading(R):
    gens = all_generators(R)
    G = R.group
    for x, y in product(gens, repeat=2):
        (g,) = x.components
        (h,) = y.components
        assert set((x * y).components) <= {G.mul(g, h)}


def random_element(R, rng, gens):
    x = R.zero
    for _ in range(rng.randint(1, 4)):
        x = x + rng.choice(gens).scale(rng.randint(-3, 3))
    return x


def test_local_units_random(R):
    rng = random.Random(7)
    gens = all_generators(R)
    n = 0
    while n < 100:
        x = random_element(R, rng, gens)
        if not x:
            continue
        u = absorbing_unit(x).element()
        assert u * x == x and x * u == x
        n += 1


def test_rational_coefficients():
    R = SkewRing(shift_action(), QQ)
    x = R.parse("1/2*{1}d[e]")
    assert x + x == R.generator([1])


def test_subalgebra_span():
    a = shift_action()
    b1 = a.base.ideal_below(a.base.element([2, 3]))
    s = SubactionMap.inclusion(b1, a)
    assert s.valid
    R = SkewRing(a)
    G = a.group
    gens = [R.generator(m, g) for g in s.source.support
            for m in [x.mask for x in b1.members if x.mask and x.mask & ~s.source.ideal(g) == 0]]
    for x, y in product(gens, repeat=2):
        for z in (x * y, x + y):
            for g in z.components:
                assert z.support(g) & ~s.source.ideal(g) == 0
                assert G.within(g, a.bound)
