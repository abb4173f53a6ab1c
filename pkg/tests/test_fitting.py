"""Tests for finite commutative algebras, ideal handles, finitely presented
modules, Fitting ideals, duals, and the executable lemmas."""

import random

import pytest

from iwasawa_kit.abelian import FiniteAbelianGroup
from iwasawa_kit.fitting import (
    AlgebraMorphism,
    FinPresModule,
    GroupAlgebra,
    IdealHandle,
    ModuleMap,
    base_change_fitting,
    dual_presentation,
    e1_sharp_check,
    four_term_check,
    group_algebra_morphism,
    identity_map,
    minus_quotient,
    multiplication_map,
    nilpotent_extension,
    pontryagin_dual,
    principal_module,
    subquotient_presentation,
    tower_fitting_check,
    unit_ideal,
    zero_ideal,
    zmod_algebra,
)
from iwasawa_kit.oracles import (
    ideal_equal_oracle,
    ideal_member_oracle,
    module_size,
)

C2 = FiniteAbelianGroup((2,))
C3 = FiniteAbelianGroup((3,))
C2C2 = FiniteAbelianGroup((2, 2))


def A_z8c2():
    return GroupAlgebra(2, 3, C2)


def A_z9c3():
    return GroupAlgebra(3, 2, C3)


def A_z9c2():
    return GroupAlgebra(3, 2, C2)


def test_algebra_validation():
    for alg in (A_z8c2(), A_z9c3(), zmod_algebra(5, 2), nilpotent_extension(zmod_algebra(3, 2), 3)):
        alg.validate()


def test_minus_quotient_structure():
    alg = A_z9c2()
    quo, proj = minus_quotient(alg, (1,))
    quo.validate()
    proj.check_homomorphism()
    assert quo.dim == 1
    # sigma maps to -1
    sig = alg.group_element_vector((1,))
    assert proj.apply(sig) == ((-1) % 9,)
    # 1 + j dies
    onej = alg.add(alg.one, sig)
    assert proj.apply(onej) == (0,)


def test_ideal_membership_examples():
    alg = A_z9c2()
    three = alg.scalar(3, alg.one)
    I3 = IdealHandle(alg, [three])
    assert I3.contains_element(three)
    assert not I3.contains_element(alg.one)
    assert IdealHandle(alg, [alg.zero()]).contains_element(alg.zero())
    # over (Z/8)[C_2]: (1+sigma) not in (1-sigma)
    alg8 = A_z8c2()
    sig = alg8.group_element_vector((1,))
    plus = alg8.add(alg8.one, sig)
    minus = alg8.sub(alg8.one, sig)
    Iminus = IdealHandle(alg8, [minus])
    assert not Iminus.contains_element(plus)
    assert ideal_member_oracle(plus, Iminus) is False
    assert Iminus.contains_element(alg8.scalar(2, alg8.one)) == ideal_member_oracle(
        alg8.scalar(2, alg8.one), Iminus
    )


def test_ideal_product_examples():
    alg = zmod_algebra(2, 3)  # Z/8
    two = alg.scalar(2, alg.one)
    four = alg.scalar(4, alg.one)
    I2 = IdealHandle(alg, [two])
    assert I2.product(unit_ideal(alg)) == I2
    assert I2.product(I2) == IdealHandle(alg, [four])
    assert ideal_equal_oracle(I2.product(I2), IdealHandle(alg, [four]))
    # (p, T)(p, T) = (p^2, pT, T^2) over (Z/p^N)[T]/(T^M)
    ext = nilpotent_extension(zmod_algebra(3, 2), 3)
    p_vec = ext.scalar(3, ext.one)
    t_vec = ext.basis_element(1)  # T
    I = IdealHandle(ext, [p_vec, t_vec])
    sq = I.product(I)
    expect = IdealHandle(
        ext,
        [ext.scalar(9, ext.one), ext.mul(p_vec, t_vec), ext.mul(t_vec, t_vec)],
    )
    assert sq == expect


def test_fitting_ideal_examples():
    alg = A_z9c3()
    a = alg.add(alg.one, alg.scalar(3, alg.group_element_vector((1,))))
    # R/(a) -> (a)
    assert principal_module(alg, a).fitting_ideal == IdealHandle(alg, [a])
    # diag(a, b) -> (ab)
    b = alg.group_element_vector((2,))
    M = FinPresModule(alg, 2, [[a, alg.zero()], [alg.zero(), b]])
    assert M.fitting_ideal == IdealHandle(alg, [alg.mul(a, b)])
    # 2 generators, 1 relation -> zero ideal
    M0 = FinPresModule(alg, 2, [[a, b]])
    assert M0.fitting_ideal == zero_ideal(alg)
    # 0 generators -> unit ideal
    assert FinPresModule(alg, 0, []).fitting_ideal == unit_ideal(alg)


def test_fitting_contained_in_annihilator():
    rng = random.Random(17)
    for alg in (A_z8c2(), A_z9c3()):
        for _ in range(25):
            n = rng.randint(1, 2)
            k = rng.randint(n, n + 1)
            rels = [
                [tuple(rng.randrange(alg.q) for _ in range(alg.dim)) for _ in range(n)]
                for _ in range(k)
            ]
            M = FinPresModule(alg, n, rels)
            for gen in M.fitting_ideal.generators:
                assert M.annihilator_check(gen)


def test_module_size_and_realization():
    alg = A_z9c2()
    three = alg.scalar(3, alg.one)
    M = principal_module(alg, three)  # R/(3): size 3^2 over two basis coords
    assert M.size() == 9
    assert module_size(M) == 9


def test_dual_presentation_examples():
    alg = A_z9c2()
    sig = alg.group_element_vector((1,))
    a = alg.add(alg.one, alg.scalar(2, sig))  # 1 + 2 sigma, regular
    M = principal_module(alg, a)
    D = dual_presentation(M)
    assert D.relations == [[alg.sharp_of(a)]]
    # diag
    b = alg.add(alg.scalar(2, alg.one), sig)
    M2 = FinPresModule(alg, 2, [[a, alg.zero()], [alg.zero(), b]])
    D2 = dual_presentation(M2)
    assert D2.relations == [
        [alg.sharp_of(a), alg.zero()],
        [alg.zero(), alg.sharp_of(b)],
    ]
    # the worked example: [[1+sigma, 3], [0, 3]] -> [[1+sigma, 0], [3, 3]]
    three = alg.scalar(3, alg.one)
    h = [[alg.add(alg.one, sig), three], [alg.zero(), three]]
    D3 = dual_presentation(FinPresModule(alg, 2, h))
    assert D3.relations == [
        [alg.add(alg.one, sig), alg.zero()],
        [three, three],
    ]
    # zero determinant rejected, as is a non-square presentation
    with pytest.raises(ValueError):
        dual_presentation(FinPresModule(alg, 2, [[alg.one, alg.one]]))
    zero_det = [[alg.add(alg.one, sig), alg.zero()], [alg.add(alg.one, sig), alg.zero()]]
    with pytest.raises(ValueError):
        dual_presentation(FinPresModule(alg, 2, zero_det))


def test_e1_sharp_examples_and_random():
    rng = random.Random(23)
    alg = A_z9c3()
    for _ in range(40):
        n = rng.randint(1, 3)
        while True:
            h = [
                [tuple(rng.randrange(alg.q) for _ in range(alg.dim)) for _ in range(n)]
                for _ in range(n)
            ]
            M = FinPresModule(alg, n, h)
            if M.has_square_regular_presentation():
                break
        assert e1_sharp_check(M)


def test_pontryagin_dual_basics():
    alg = A_z9c2()
    sig = alg.group_element_vector((1,))
    # M = R/(1+sigma, 3): the minus line Z/3 with sigma = -1 ... over the full
    # algebra. |M| = 3; the dual must also have 3 elements and sharp-dual Fitt.
    M = FinPresModule(alg, 1, [[alg.add(alg.one, sig)], [alg.scalar(3, alg.one)]])
    assert M.size() == 3
    D = pontryagin_dual(M)
    assert D.size() == 3
    assert D.fitting_ideal == M.fitting_ideal.sharp()
    # Ann-dual relation: Ann(M) = Ann(M^dual)^# tested by exhaustive annihilators
    annM = {x for x in alg.elements() if M.annihilator_check(x)}
    annD = {x for x in alg.elements() if D.annihilator_check(x)}
    assert annM == {alg.sharp_of(x) for x in annD}


def test_pontryagin_dual_matches_dual_presentation_fitting():
    rng = random.Random(31)
    alg = A_z9c2()
    for _ in range(20):
        n = rng.randint(1, 2)
        while True:
            h = [
                [tuple(rng.randrange(alg.q) for _ in range(alg.dim)) for _ in range(n)]
                for _ in range(n)
            ]
            M = FinPresModule(alg, n, h)
            if M.has_square_regular_presentation():
                break
        # transpose-sharp route and generic-dual route agree on Fitting ideals
        assert pontryagin_dual(M).fitting_ideal == dual_presentation(M).fitting_ideal
        assert pontryagin_dual(M).size() == M.size()


def test_base_change_examples():
    alg = A_z9c2()
    sig = alg.group_element_vector((1,))
    quo, proj = minus_quotient(alg, (1,))
    M = principal_module(alg, alg.add(alg.one, sig))
    assert base_change_fitting(M, proj)
    # aug map (Z/9)[C_3] -> Z/9 on R/(gamma - 1): both routes give (0)
    alg3 = A_z9c3()
    target = zmod_algebra(3, 2)
    aug = AlgebraMorphism(alg3, target, [target.one] * 3)
    gamma = alg3.group_element_vector((1,))
    M2 = principal_module(alg3, alg3.sub(gamma, alg3.one))
    assert base_change_fitting(M2, aug)
    pushed = FinPresModule(target, 1, [[aug.apply(alg3.sub(gamma, alg3.one))]])
    assert pushed.fitting_ideal == zero_ideal(target)


def test_base_change_rejects_non_homomorphism():
    alg3 = A_z9c3()
    target = zmod_algebra(3, 2)
    bad = AlgebraMorphism(alg3, target, [target.one, target.one, target.zero()])
    M = principal_module(alg3, alg3.one)
    with pytest.raises(ValueError):
        base_change_fitting(M, bad)


def _kernel_module_of_multiplication(C, z):
    """Kernel of z: C -> C as a subquotient presentation."""
    f = multiplication_map(C, z)
    ker = f.kernel_span
    return subquotient_presentation(C.algebra, C.ngens, ker, C.relation_span)


def test_four_term_exactness_and_lemma():
    # 0 -> ker(z) -> C -z-> C -> cok(z) -> 0 over (Z/9)[C_2]
    rng = random.Random(41)
    alg = A_z9c2()
    sig = alg.group_element_vector((1,))
    trials = 0
    while trials < 15:
        h = [
            [tuple(rng.randrange(alg.q) for _ in range(alg.dim)) for _ in range(2)]
            for _ in range(2)
        ]
        C = FinPresModule(alg, 2, h)
        if not C.has_square_regular_presentation():
            continue
        z = tuple(rng.randrange(alg.q) for _ in range(alg.dim))
        trials += 1
        sub = _kernel_module_of_multiplication(C, z)
        Mker = sub.module
        # build the four maps
        alpha = ModuleMap(Mker, C, sub.gens_ambient)
        beta = multiplication_map(C, z)
        Mcok = FinPresModule(alg, C.ngens, C.relations + beta.matrix)
        gamma = ModuleMap(C, Mcok, identity_map(C).matrix)
        assert four_term_check(Mker, C, C, Mcok, alpha, beta, gamma)


def test_four_term_spec_example():
    # C = C' = (Z/9)[C_2]/(3), M = M' = ker/cok of a sigma-twisted unit times 3-divisor
    alg = A_z9c2()
    sig = alg.group_element_vector((1,))
    three = alg.scalar(3, alg.one)
    C = principal_module(alg, three)
    z = alg.mul(alg.add(alg.one, alg.scalar(2, sig)), alg.scalar(1, alg.one))  # unit
    z3 = alg.scalar(3, z)
    sub = _kernel_module_of_multiplication(C, z3)
    alpha = ModuleMap(sub.module, C, sub.gens_ambient)
    beta = multiplication_map(C, z3)
    Mcok = FinPresModule(alg, 1, C.relations + beta.matrix)
    gamma = ModuleMap(C, Mcok, identity_map(C).matrix)
    assert four_term_check(sub.module, C, C, Mcok, alpha, beta, gamma)


def test_four_term_trivial_ends():
    # M = M' = 0 and C = C' via a unit multiplication: both sides Fitt(C)^2
    alg = A_z9c2()
    sig = alg.group_element_vector((1,))
    C = principal_module(alg, alg.add(alg.scalar(3, alg.one), sig))
    unit = alg.add(alg.one, alg.scalar(3, sig))
    beta = multiplication_map(C, unit)
    sub = _kernel_module_of_multiplication(C, unit)
    assert sub.module.size() == 1
    Mcok = FinPresModule(alg, 1, C.relations + beta.matrix)
    alpha = ModuleMap(sub.module, C, sub.gens_ambient)
    gamma = ModuleMap(C, Mcok, identity_map(C).matrix)
    assert four_term_check(sub.module, C, C, Mcok, alpha, beta, gamma)


def test_base_change_identity_is_trivial():
    alg = A_z9c3()
    ident = AlgebraMorphism(alg, alg, [alg.basis_element(i) for i in range(alg.dim)])
    M = principal_module(alg, alg.scalar(3, alg.one))
    assert base_change_fitting(M, ident)


def test_four_term_rejects_non_exact():
    alg = A_z9c2()
    three = alg.scalar(3, alg.one)
    C = principal_module(alg, alg.add(alg.one, alg.scalar(2, alg.group_element_vector((1,)))))
    beta = multiplication_map(C, alg.one)
    M0 = FinPresModule(alg, 0, [])
    alpha = ModuleMap(M0, C, [])
    # claim cokernel is C itself (wrong: beta is onto)
    gamma = identity_map(C)
    with pytest.raises(ValueError):
        four_term_check(M0, C, C, C, alpha, beta, gamma)


def test_tower_fitting_check_principal():
    # A_n = Lambda_n/(theta_n) for a coherent Stickelberger tower: equality.
    from iwasawa_kit.abelian import AbelianFieldSpec
    from iwasawa_kit.tower import theta_tower

    Z5 = AbelianFieldSpec.cyclotomic(5)
    t = theta_tower(Z5, [5, "oo"], [2], 5, 2, 1, 0)
    algs = [GroupAlgebra(5, 2, lvl.group) for lvl in t.levels]
    mods = [
        principal_module(algs[n], algs[n].from_group_ring(t.entries[n]))
        for n in range(2)
    ]
    proj = group_algebra_morphism(
        algs[1], algs[0], lambda g: t.levels[1].project(g, 0)
    )
    transitions = [ModuleMap(mods[1], mods[0], [[algs[0].one]])]
    # transition is semilinear over proj; check well-definedness by hand:
    # theta_1 maps to theta_0 under proj (coherence), so the map is legitimate.
    report = tower_fitting_check(mods, [proj])
    assert report["ok"] and all(report["equal"])


def test_tower_fitting_check_constant_system():
    alg0 = A_z9c3()
    # constant system: same algebra at both levels, identity projection
    ident = AlgebraMorphism(alg0, alg0, [alg0.basis_element(i) for i in range(alg0.dim)])
    a = alg0.scalar(3, alg0.one)
    M = principal_module(alg0, a)
    report = tower_fitting_check([M, M], [ident])
    assert report["ok"] and all(report["equal"])


def test_tower_fitting_rejects_bad_transitions():
    alg = A_z9c3()
    ident = AlgebraMorphism(alg, alg, [alg.basis_element(i) for i in range(alg.dim)])
    M = principal_module(alg, alg.scalar(3, alg.one))
    bad = ModuleMap(M, M, [[alg.scalar(3, alg.one)]])  # not surjective
    with pytest.raises(ValueError):
        tower_fitting_check([M, M], [ident], [bad])


def test_lemma_6_4_integral_extension_cancellation():
    # Ra <= Rb, b regular, equal component valuations => Ra = Rb, tested over
    # (Z/9)[C_2] against the character-component algebra Z/9 x Z/9.
    rng = random.Random(53)
    alg = A_z9c2()
    sig = alg.group_element_vector((1,))

    def components(x):
        # chi(x) for the two characters of C_2
        a, b = x[0], x[1]
        return ((a + b) % 9, (a - b) % 9)

    R3 = alg.R
    found = 0
    while found < 30:
        b = tuple(rng.randrange(9) for _ in range(2))
        if not all(c % 3 for c in components(b)):
            continue  # need b regular: both components units
        r = tuple(rng.randrange(9) for _ in range(2))
        a = alg.mul(r, b)
        # hypothesis: Sa = Sb iff components of a are unit multiples of b's
        if not all(c % 3 for c in components(r)):
            continue
        found += 1
        Ia, Ib = IdealHandle(alg, [a]), IdealHandle(alg, [b])
        assert Ib.contains(Ia)  # Ra <= Rb by construction
        assert Ia == Ib  # the cancellation conclusion


def test_subquotient_presentation_roundtrip():
    # H = ker/im machinery: present (3)/(1+sigma)(3)-ish subquotients and
    # verify sizes by enumeration.
    alg = A_z9c2()
    sig = alg.group_element_vector((1,))
    C = principal_module(alg, alg.scalar(9, alg.one))  # free of rank 1
    f = multiplication_map(C, alg.scalar(3, alg.one))
    ker = f.kernel_span
    sub = subquotient_presentation(alg, 1, ker, C.relation_span)
    # kernel of multiplication by 3 on (Z/9)[C_2] is (3), of size 9
    assert sub.module.size() == 9
