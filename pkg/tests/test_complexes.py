"""Tests for bounded complexes: cohomology, shift parity, Euler-Fitting
invariants, quasi-isomorphisms, cones, and additivity over exact sequences."""

import random

import pytest

from iwasawa_kit.abelian import FiniteAbelianGroup
from iwasawa_kit.complexes import (
    BoundedComplex,
    ChainMap,
    ComplexSES,
    EulerFittingInvariant,
    cone,
    euler_fitting_additivity_check,
    quasi_iso_check,
    single_module_complex,
)
from iwasawa_kit.fitting import (
    FinPresModule,
    GroupAlgebra,
    IdealHandle,
    ModuleMap,
    identity_map,
    principal_module,
    unit_ideal,
    zmod_algebra,
)

C2 = FiniteAbelianGroup((2,))


def free_module(alg, n):
    return FinPresModule(alg, n, [])


def two_term(alg, a):
    """0 -> A -(a)-> A -> 0 in degrees 0, 1."""
    F0, F1 = free_module(alg, 1), free_module(alg, 1)
    d = ModuleMap(F0, F1, [[a]])
    return BoundedComplex(alg, 0, [F0, F1], [d])


def test_cohomology_two_term_multiplication_by_p():
    alg = zmod_algebra(3, 2)  # Z/9
    C = two_term(alg, alg.scalar(3, alg.one))
    # H^1 = R/(3), H^0 = ker(3) = (3), both of size 3
    assert C.cohomology_size(1) == 3
    assert C.cohomology_size(0) == 3
    H1 = C.cohomology(1)
    assert H1.fitting_ideal == IdealHandle(alg, [alg.scalar(3, alg.one)])
    H0 = C.cohomology(0)
    assert H0.size() == 3
    assert H0.fitting_ideal == IdealHandle(alg, [alg.scalar(3, alg.one)])


def test_cohomology_identity_complex_acyclic():
    alg = GroupAlgebra(3, 2, C2)
    C = two_term(alg, alg.one)
    assert C.is_acyclic()
    assert all(C.cohomology(i).size() == 1 for i in (0, 1))


def test_single_module_concentration():
    alg = GroupAlgebra(3, 2, C2)
    a = alg.add(alg.one, alg.scalar(2, alg.group_element_vector((1,))))
    M = principal_module(alg, a)
    for k in (-1, 0, 1, 2):
        C = single_module_complex(M, k)
        for i in (k - 1, k, k + 1):
            expect = M.size() if i == k else 1
            assert C.cohomology_size(i) == expect
        inv = C.euler_fitting()
        fitt = M.fitting_ideal
        if k % 2 == 0:
            assert inv == EulerFittingInvariant(fitt, unit_ideal(alg))
        else:
            assert inv == EulerFittingInvariant(unit_ideal(alg), fitt)


def test_euler_fitting_examples():
    alg = GroupAlgebra(3, 2, C2)
    # acyclic complex -> ((1), (1))
    acyclic = two_term(alg, alg.one)
    triv = EulerFittingInvariant(unit_ideal(alg), unit_ideal(alg))
    assert acyclic.euler_fitting() == triv
    # concentrated module with Fitt (a)
    a = alg.scalar(3, alg.one)
    M = principal_module(alg, a)
    inv0 = single_module_complex(M, 0).euler_fitting()
    assert inv0 == EulerFittingInvariant(IdealHandle(alg, [a]), unit_ideal(alg))
    inv1 = single_module_complex(M, 1).euler_fitting()
    assert inv1 == inv0.inverse()


def test_shift_parity_law():
    alg = GroupAlgebra(3, 2, C2)
    sig = alg.group_element_vector((1,))
    C = two_term(alg, alg.add(alg.scalar(3, alg.one), sig))
    inv = C.euler_fitting()
    assert C.shift(0).euler_fitting() == inv
    s1 = C.shift(1)
    assert s1.lo == -1
    assert s1.euler_fitting() == inv.inverse()
    assert s1.shift(1).euler_fitting() == inv
    assert C.shift(2).euler_fitting() == inv


def test_shift_validates_signs():
    # the shifted differential still squares to zero in a 3-term complex
    alg = zmod_algebra(3, 2)
    F = [free_module(alg, 1) for _ in range(3)]
    three = alg.scalar(3, alg.one)
    d0 = ModuleMap(F[0], F[1], [[three]])
    d1 = ModuleMap(F[1], F[2], [[three]])
    C = BoundedComplex(alg, 0, F, [d0, d1])
    assert C.shift(1).lo == -1
    assert C.shift(-3).hi == 5


def test_quasi_iso_examples():
    alg = GroupAlgebra(3, 2, C2)
    C = two_term(alg, alg.scalar(3, alg.one))
    ident = ChainMap(C, C, {0: identity_map(C.modules[0]), 1: identity_map(C.modules[1])})
    assert quasi_iso_check(ident)
    # identity two-term complex is quasi-isomorphic to the zero complex
    acyclic = two_term(alg, alg.one)
    zero_cx = BoundedComplex(alg, 0, [FinPresModule(alg, 0, [])], [])
    to_zero = ChainMap(
        acyclic,
        zero_cx,
        {
            0: ModuleMap(acyclic.modules[0], zero_cx.modules[0], [[]]),
            1: ModuleMap(acyclic.modules[1], FinPresModule(alg, 0, []), [[]]),
        },
    )
    # level 1 of the target is missing: use a 2-term zero complex instead
    zero2 = BoundedComplex(
        alg,
        0,
        [FinPresModule(alg, 0, []), FinPresModule(alg, 0, [])],
        [ModuleMap(FinPresModule(alg, 0, []), FinPresModule(alg, 0, []), [])],
    )
    to_zero = ChainMap(
        acyclic,
        zero2,
        {0: ModuleMap(acyclic.modules[0], zero2.modules[0], [[]]),
         1: ModuleMap(acyclic.modules[1], zero2.modules[1], [[]])},
    )
    assert quasi_iso_check(to_zero)


def test_quasi_iso_detects_difference():
    # inclusion (p) -> R over Z/p^2 in degree 0: H^0 differs
    alg = zmod_algebra(3, 2)
    R_mod = free_module(alg, 1)
    sub = FinPresModule(alg, 1, [[alg.scalar(3, alg.one)]])  # R/(3) = image of (3)
    CR = BoundedComplex(alg, 0, [R_mod], [])
    Csub = BoundedComplex(alg, 0, [sub], [])
    f = ChainMap(Csub, CR, {0: ModuleMap(sub, R_mod, [[alg.scalar(3, alg.one)]])})
    assert not quasi_iso_check(f)


def test_quasi_iso_invariance_of_euler_fitting():
    # C sim C + (acyclic): inclusion is a quasi-iso and invariants agree
    alg = GroupAlgebra(3, 2, C2)
    sig = alg.group_element_vector((1,))
    C = two_term(alg, alg.add(alg.scalar(3, alg.one), sig))
    acyclic = two_term(alg, alg.one)
    sum0 = C.modules[0].direct_sum(acyclic.modules[0])
    sum1 = C.modules[1].direct_sum(acyclic.modules[1])
    dmat = [
        [C.differentials[0].matrix[0][0], alg.zero()],
        [alg.zero(), alg.one],
    ]
    D = BoundedComplex(alg, 0, [sum0, sum1], [ModuleMap(sum0, sum1, dmat)])
    inc = ChainMap(
        C,
        D,
        {
            0: ModuleMap(C.modules[0], sum0, [[alg.one, alg.zero()]]),
            1: ModuleMap(C.modules[1], sum1, [[alg.one, alg.zero()]]),
        },
    )
    assert quasi_iso_check(inc)
    assert C.euler_fitting() == D.euler_fitting()


def test_quasi_iso_projection_direction():
    # levelwise surjective, non-injective projection off an acyclic summand
    # is still a quasi-isomorphism; scaling 3-torsion cohomology by 3 is not
    alg = GroupAlgebra(3, 2, C2)
    sig = alg.group_element_vector((1,))
    a = alg.add(alg.one, alg.scalar(2, sig))
    C = two_term(alg, a)
    acy = two_term(alg, alg.one)
    sum0 = C.modules[0].direct_sum(acy.modules[0])
    sum1 = C.modules[1].direct_sum(acy.modules[1])
    D = BoundedComplex(
        alg, 0, [sum0, sum1],
        [ModuleMap(sum0, sum1, [[a, alg.zero()], [alg.zero(), alg.one]])],
    )
    proj = ChainMap(
        D, C,
        {0: ModuleMap(sum0, C.modules[0], [[alg.one], [alg.zero()]]),
         1: ModuleMap(sum1, C.modules[1], [[alg.one], [alg.zero()]])},
    )
    assert quasi_iso_check(proj)
    times3 = ChainMap(
        C, C,
        {0: ModuleMap(C.modules[0], C.modules[0], [[alg.scalar(3, alg.one)]]),
         1: ModuleMap(C.modules[1], C.modules[1], [[alg.scalar(3, alg.one)]])},
    )
    assert not quasi_iso_check(times3)
    non_chain = ChainMap(
        C, C,
        {0: ModuleMap(C.modules[0], C.modules[0], [[alg.one]]),
         1: ModuleMap(C.modules[1], C.modules[1], [[alg.scalar(3, alg.one)]])},
    )
    with pytest.raises(ValueError):
        quasi_iso_check(non_chain)


def test_cone_of_identity_is_acyclic():
    alg = GroupAlgebra(3, 2, C2)
    sig = alg.group_element_vector((1,))
    for a in (alg.one, alg.scalar(3, alg.one), alg.add(alg.scalar(3, alg.one), sig)):
        C = two_term(alg, a)
        ident = ChainMap(
            C, C, {0: identity_map(C.modules[0]), 1: identity_map(C.modules[1])}
        )
        K = cone(ident)
        assert K.is_acyclic()


def test_cone_is_valid_complex():
    alg = zmod_algebra(3, 2)
    C = two_term(alg, alg.scalar(3, alg.one))
    D = two_term(alg, alg.scalar(3, alg.one))
    f = ChainMap(
        C,
        D,
        {
            0: ModuleMap(C.modules[0], D.modules[0], [[alg.scalar(2, alg.one)]]),
            1: ModuleMap(C.modules[1], D.modules[1], [[alg.scalar(2, alg.one)]]),
        },
    )
    K = cone(f)  # construction validates d o d = 0
    assert K.lo == -1 and K.hi == 1
    # multiplication by a unit is a quasi-isomorphism, so the cone is acyclic
    assert K.is_acyclic()


def test_cone_triangle_identity():
    # [cone(f)] = [D] - [C]: the Euler-Fitting invariant of the cone equals
    # invariant(D) . invariant(C)^(-1) for any chain map (from the split
    # sequence 0 -> D -> cone(f) -> C[1] -> 0)
    import random

    alg = GroupAlgebra(3, 2, C2)
    rng = random.Random(17)
    for _ in range(12):
        a = tuple(rng.randrange(9) for _ in range(2))
        z = tuple(rng.randrange(9) for _ in range(2))
        C = two_term(alg, a)
        D = two_term(alg, a)
        f = ChainMap(
            C, D,
            {0: ModuleMap(C.modules[0], D.modules[0], [[z]]),
             1: ModuleMap(C.modules[1], D.modules[1], [[z]])},
        )
        K = cone(f)
        assert K.euler_fitting() == D.euler_fitting().product(C.euler_fitting().inverse())


def _split_ses(alg, C1, C3, rng):
    """Degreewise split SES with twisted middle differential: d2 =
    [[d1, h], [0, d3]] where h = d1 phi - phi d3 for random degree-0 phi."""
    assert C1.lo == C3.lo and C1.hi == C3.hi
    lo = C1.lo
    phis = []
    for i in range(lo, C1.hi + 1):
        M1, M3 = C1.module_at(i), C3.module_at(i)
        phis.append(
            [
                [tuple(rng.randrange(alg.q) for _ in range(alg.dim)) for _ in range(M1.ngens)]
                for _ in range(M3.ngens)
            ]
        )
    mids = []
    for i in range(lo, C1.hi + 1):
        mids.append(C1.module_at(i).direct_sum(C3.module_at(i)))
    diffs = []
    for i in range(lo, C1.hi):
        M1, M3 = C1.module_at(i), C3.module_at(i)
        N1, N3 = C1.module_at(i + 1), C3.module_at(i + 1)
        d1 = C1.differential_at(i).matrix
        d3 = C3.differential_at(i).matrix
        phi_i, phi_next = phis[i - lo], phis[i - lo + 1]
        # h = phi_i . d1  -  d3 . phi_next  as maps M3 -> N1
        h = []
        for c in range(M3.ngens):
            row = [alg.zero()] * N1.ngens
            for t in range(M1.ngens):
                for d in range(N1.ngens):
                    row[d] = alg.add(row[d], alg.mul(phi_i[c][t], d1[t][d]))
            for t in range(N3.ngens):
                for d in range(N1.ngens):
                    row[d] = alg.sub(row[d], alg.mul(d3[c][t], phi_next[t][d]))
            h.append(row)
        mat = []
        for a in range(M1.ngens):
            mat.append(list(d1[a]) + [alg.zero()] * N3.ngens)
        for c in range(M3.ngens):
            mat.append(list(h[c]) + list(d3[c]))
        diffs.append(ModuleMap(mids[i - lo], mids[i - lo + 1], mat))
    C2x = BoundedComplex(alg, lo, mids, diffs)
    inc_maps, quo_maps = {}, {}
    for i in range(lo, C1.hi + 1):
        M1, M3 = C1.module_at(i), C3.module_at(i)
        mid = C2x.module_at(i)
        inc_maps[i] = ModuleMap(
            M1,
            mid,
            [
                [alg.one if d == c else alg.zero() for d in range(mid.ngens)]
                for c in range(M1.ngens)
            ],
        )
        quo_maps[i] = ModuleMap(
            mid,
            M3,
            [[alg.zero()] * M3.ngens for _ in range(M1.ngens)]
            + [
                [alg.one if d == c else alg.zero() for d in range(M3.ngens)]
                for c in range(M3.ngens)
            ],
        )
    return ComplexSES(C1, C2x, C3, ChainMap(C1, C2x, inc_maps), ChainMap(C2x, C3, quo_maps))


def test_cone_of_quasi_iso_is_acyclic():
    # the mapping cone of a quasi-isomorphism has no cohomology; C itself must
    # carry cohomology (1 + 2 sigma has the zero divisor component 3)
    alg = GroupAlgebra(3, 2, C2)
    sig = alg.group_element_vector((1,))
    C = two_term(alg, alg.add(alg.one, alg.scalar(2, sig)))
    assert not C.is_acyclic()
    acyclic = two_term(alg, alg.one)
    sum0 = C.modules[0].direct_sum(acyclic.modules[0])
    sum1 = C.modules[1].direct_sum(acyclic.modules[1])
    dmat = [
        [C.differentials[0].matrix[0][0], alg.zero()],
        [alg.zero(), alg.one],
    ]
    D = BoundedComplex(alg, 0, [sum0, sum1], [ModuleMap(sum0, sum1, dmat)])
    inc = ChainMap(
        C,
        D,
        {
            0: ModuleMap(C.modules[0], sum0, [[alg.one, alg.zero()]]),
            1: ModuleMap(C.modules[1], sum1, [[alg.one, alg.zero()]]),
        },
    )
    assert quasi_iso_check(inc)
    assert cone(inc).is_acyclic()
    # and a non-quasi-iso has a non-acyclic cone
    zero_map = ChainMap(
        C,
        D,
        {
            0: ModuleMap(C.modules[0], sum0, [[alg.zero(), alg.zero()]]),
            1: ModuleMap(C.modules[1], sum1, [[alg.zero(), alg.zero()]]),
        },
    )
    assert not quasi_iso_check(zero_map)
    assert not cone(zero_map).is_acyclic()


def test_additivity_split_and_twisted():
    rng = random.Random(77)
    alg = GroupAlgebra(3, 2, C2)
    sig = alg.group_element_vector((1,))
    for _ in range(10):
        a = tuple(rng.randrange(9) for _ in range(2))
        b = tuple(rng.randrange(9) for _ in range(2))
        C1 = two_term(alg, a)
        C3 = two_term(alg, b)
        ses = _split_ses(alg, C1, C3, rng)
        assert euler_fitting_additivity_check(ses)


def test_additivity_with_zero_first_term():
    alg = GroupAlgebra(3, 2, C2)
    zero2 = BoundedComplex(
        alg,
        0,
        [FinPresModule(alg, 0, []), FinPresModule(alg, 0, [])],
        [ModuleMap(FinPresModule(alg, 0, []), FinPresModule(alg, 0, []), [])],
    )
    C = two_term(alg, alg.scalar(3, alg.one))
    rng = random.Random(3)
    ses = _split_ses(alg, zero2, C, rng)
    assert euler_fitting_additivity_check(ses)


def test_additivity_rejects_non_exact():
    alg = GroupAlgebra(3, 2, C2)
    C = two_term(alg, alg.scalar(3, alg.one))
    D = two_term(alg, alg.one)
    ident_like = ChainMap(
        C, C, {0: identity_map(C.modules[0]), 1: identity_map(C.modules[1])}
    )
    bogus = ComplexSES(C, C, D, ident_like, ChainMap(C, D, {
        0: ModuleMap(C.modules[0], D.modules[0], [[alg.one]]),
        1: ModuleMap(C.modules[1], D.modules[1], [[alg.one]]),
    }))
    with pytest.raises(ValueError):
        euler_fitting_additivity_check(bogus)


def test_d_squared_enforced():
    alg = zmod_algebra(3, 2)
    F = [free_module(alg, 1) for _ in range(3)]
    one = alg.one
    with pytest.raises(ValueError):
        BoundedComplex(
            alg,
            0,
            F,
            [ModuleMap(F[0], F[1], [[one]]), ModuleMap(F[1], F[2], [[one]])],
        )
