"""Abelian fields over Q as class-field data.

A field L/Q is pinned by a modulus m and a fixing subgroup H of (Z/m)^x: L is
the fixed field of H inside Q(zeta_m), so Gal(L/Q) = (Z/m)^x / H. This module
computes the Galois group in invariant-factor form with its Frobenius map, the
conductor, CM structure (complex conjugation j and the idempotents e_r), roots
of unity, cyclotomic-tower layers, the Hyp(S,T) admissibility test, and the
character table with exact decomposition/reconstruction.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .exact import CyclotomicInt, teichmuller
from .groupring import GroupRingElement
from .numutil import (
    crt,
    divisors,
    euler_phi,
    factorize,
    is_prime,
    unit_group_generators,
    unit_residues,
)

INFINITE_PLACE = "oo"


# ---------------------------------------------------------------------------
# Finite abelian groups with exponent-vector elements.

@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Product of cyclic groups; elements are exponent tuples, lex-ordered.

    galois_group always produces the invariant-factor form (orders dividing
    successively); tower layers use the product form H x Z/p^n.
    """

    orders: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(d < 1 for d in self.orders):
            raise ValueError(f"cyclic orders must be positive, got {self.orders}")

    @property
    def size(self) -> int:
        return math.prod(self.orders)

    @property
    def identity(self) -> tuple[int, ...]:
        return (0,) * len(self.orders)

    @property
    def exponent(self) -> int:
        return math.lcm(*self.orders) if self.orders else 1

    def reduce(self, g) -> tuple[int, ...]:
        return tuple(e % d for e, d in zip(g, self.orders))

    def mul(self, g, h) -> tuple[int, ...]:
        return tuple((a + b) % d for a, b, d in zip(g, h, self.orders))

    def inv(self, g) -> tuple[int, ...]:
        return tuple((-a) % d for a, d in zip(g, self.orders))

    def power(self, g, k: int) -> tuple[int, ...]:
        return tuple((a * k) % d for a, d in zip(g, self.orders))

    def element_order(self, g) -> int:
        return math.lcm(*(d // math.gcd(a, d) for a, d in zip(g, self.orders))) if self.orders else 1

    def elements(self):
        return itertools.product(*(range(d) for d in self.orders))

    def generators(self) -> list[tuple[int, ...]]:
        n = len(self.orders)
        return [tuple(int(i == j) for j in range(n)) for i in range(n)]

    def is_invariant_factor_form(self) -> bool:
        return all(
            self.orders[i + 1] % self.orders[i] == 0 for i in range(len(self.orders) - 1)
        )

    def to_json(self) -> dict:
        return {"orders": list(self.orders)}

    @classmethod
    def from_json(cls, obj: dict) -> "FiniteAbelianGroup":
        return cls(tuple(int(d) for d in obj["orders"]))


# ---------------------------------------------------------------------------
# Integer Smith normal form (small matrices; right transform tracked).

def smith_normal_form(rows: list[list[int]], ncols: int) -> tuple[list[int], list[list[int]]]:
    """Diagonalize the row lattice: returns (diag, V) with V unimodular and
    rowspan(A.V) = rowspan(diag). diag entries are >= 0 with the divisibility
    chain d_1 | d_2 | ... among the nonzero ones.
    """
    A = [list(r) + [0] * (ncols - len(r)) for r in rows]
    nr = len(A)
    V = [[int(i == j) for j in range(ncols)] for i in range(ncols)]

    def col_op(j: int, k: int, q: int) -> None:  # col_j -= q * col_k
        for i in range(nr):
            A[i][j] -= q * A[i][k]
        for i in range(ncols):
            V[i][j] -= q * V[i][k]

    def col_swap(j: int, k: int) -> None:
        for i in range(nr):
            A[i][j], A[i][k] = A[i][k], A[i][j]
        for i in range(ncols):
            V[i][j], V[i][k] = V[i][k], V[i][j]

    def col_negate(j: int) -> None:
        for i in range(nr):
            A[i][j] = -A[i][j]
        for i in range(ncols):
            V[i][j] = -V[i][j]

    def eliminate() -> int:
        t = 0
        while t < nr and t < ncols:
            best = None
            for i in range(t, nr):
                for j in range(t, ncols):
                    v = abs(A[i][j])
                    if v and (best is None or v < best[0]):
                        best = (v, i, j)
            if best is None:
                break
            _, bi, bj = best
            if bi != t:
                A[bi], A[t] = A[t], A[bi]
            if bj != t:
                col_swap(bj, t)
            while True:
                clean = True
                for i in range(nr):
                    if i == t or A[i][t] == 0:
                        continue
                    q = A[i][t] // A[t][t]
                    if q:
                        for j in range(ncols):
                            A[i][j] -= q * A[t][j]
                    if A[i][t]:
                        A[i], A[t] = A[t], A[i]
                        clean = False
                for j in range(ncols):
                    if j == t or A[t][j] == 0:
                        continue
                    q = A[t][j] // A[t][t]
                    if q:
                        col_op(j, t, q)
                    if A[t][j]:
                        col_swap(j, t)
                        clean = False
                if clean:
                    break
            if A[t][t] < 0:
                col_negate(t)
            t += 1
        return t

    rank = eliminate()
    # Enforce the divisibility chain, re-eliminating after each fix-up.
    while True:
        bad = None
        for i in range(rank - 1):
            if A[i][i] and A[i + 1][i + 1] % A[i][i] != 0:
                bad = i
                break
        if bad is None:
            break
        col_op(bad, bad + 1, -1)  # col_bad += col_{bad+1}
        rank = eliminate()
    diag = [A[i][i] if i < nr else 0 for i in range(ncols)]
    return diag, V


# ---------------------------------------------------------------------------
# Field specifications.

@dataclass(frozen=True)
class AbelianFieldSpec:
    """The fixed field of `fixing` inside Q(zeta_modulus)."""

    modulus: int
    fixing: frozenset[int]
    label: str = ""

    def __post_init__(self) -> None:
        m = self.modulus
        if m < 1:
            raise ValueError(f"modulus must be >= 1, got {m}")
        units = set(unit_residues(m))
        fix = frozenset(a % m for a in self.fixing)
        if not fix <= units:
            raise ValueError(f"fixing subgroup {sorted(fix)} not inside (Z/{m})^x")
        if (1 % m) not in fix:
            raise ValueError("fixing subgroup must contain 1")
        for a in fix:
            for b in fix:
                if (a * b) % m not in fix:
                    raise ValueError("fixing set is not closed under multiplication")
        object.__setattr__(self, "fixing", fix)

    @classmethod
    def cyclotomic(cls, m: int, label: str = "") -> "AbelianFieldSpec":
        return cls(m, frozenset({1 % m}), label or f"Q(zeta_{m})")

    @classmethod
    def rationals(cls) -> "AbelianFieldSpec":
        return cls(1, frozenset({0}), "Q")

    @property
    def degree(self) -> int:
        return euler_phi(self.modulus) // len(self.fixing)

    def to_json(self) -> dict:
        return {
            "modulus": self.modulus,
            "fixing": sorted(self.fixing),
            "label": self.label,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "AbelianFieldSpec":
        return cls(
            int(obj["modulus"]),
            frozenset(int(a) for a in obj["fixing"]),
            str(obj.get("label", "")),
        )


@lru_cache(maxsize=None)
def conductor(spec: AbelianFieldSpec) -> tuple[int, frozenset[int]]:
    """Minimal modulus f with L inside Q(zeta_f), plus the image fixing subgroup."""
    m = spec.modulus
    for f in divisors(m):
        kernel = {a for a in unit_residues(m) if (a - 1) % f == 0}
        if kernel <= spec.fixing:
            return f, frozenset(a % f for a in spec.fixing)
    raise AssertionError("conductor search failed")  # f = m always works


def ramified_primes(spec: AbelianFieldSpec) -> set[int]:
    f, _ = conductor(spec)
    return set(factorize(f)) if f > 1 else set()


# ---------------------------------------------------------------------------
# The Galois group with its Frobenius map.

class GaloisData:
    """Gal(L/Q) = (Z/m)^x / H in invariant-factor coordinates.

    element_of(a) is defined for every integer a coprime to the conductor
    (residues coprime to m directly; others through the CRT lift, well defined
    by the conductor property). frobenius rejects ramified primes.
    """

    def __init__(self, spec: AbelianFieldSpec):
        self.spec = spec
        m = spec.modulus
        self.conductor, self.fixing_at_conductor = conductor(spec)
        gens = unit_group_generators(m)
        dlog = self._dlog_table(m, gens)
        rows = [[gens[i][1] if j == i else 0 for j in range(len(gens))] for i in range(len(gens))]
        rows += [list(dlog[h]) for h in sorted(spec.fixing)]
        diag, V = smith_normal_form(rows, len(gens))
        keep = [j for j, d in enumerate(diag) if d != 1]
        if any(diag[j] == 0 for j in keep):
            raise AssertionError("quotient of a finite group cannot be infinite")
        self.group = FiniteAbelianGroup(tuple(diag[j] for j in keep))
        self._V = V
        self._keep = keep
        self._diag = diag
        self._elt: dict[int, tuple[int, ...]] = {}
        self.representatives: dict[tuple[int, ...], int] = {}
        for a in unit_residues(m):
            x = dlog[a]
            y = tuple(
                sum(x[i] * V[i][j] for i in range(len(x))) % diag[j] for j in keep
            )
            self._elt[a] = y
            self.representatives.setdefault(y, a if m > 1 else 1)
        if len(self.representatives) != self.group.size:
            raise AssertionError("element map is not onto the quotient group")

    @staticmethod
    def _dlog_table(m: int, gens) -> dict[int, tuple[int, ...]]:
        one = 1 % m
        table = {one: (0,) * len(gens)}
        frontier = [one]
        while frontier:
            nxt = []
            for a in frontier:
                x = table[a]
                for i, (g, d) in enumerate(gens):
                    b = (a * g) % m
                    if b not in table:
                        table[b] = tuple(
                            (e + 1) % d if j == i else e for j, e in enumerate(x)
                        )
                        nxt.append(b)
            frontier = nxt
        assert len(table) == len(unit_residues(m))
        return table

    def element_of(self, a: int) -> tuple[int, ...]:
        """Class of a in Gal(L/Q); a must be coprime to the conductor."""
        m = self.spec.modulus
        f = self.conductor
        if math.gcd(a, f) != 1 and f > 1:
            raise ValueError(f"{a} is not coprime to the conductor {f}")
        r = a % m if m > 1 else 0
        if r in self._elt:
            return self._elt[r]
        # a shares a factor with m but not with f: lift off the extra primes.
        res, mods = [], []
        for p, e in factorize(m).items():
            q = p**e
            res.append(a % q if f % p == 0 else 1)
            mods.append(q)
        return self._elt[crt(res, mods) % m]

    def frobenius(self, ell: int) -> tuple[int, ...]:
        if not is_prime(ell):
            raise ValueError(f"frobenius expects a prime, got {ell}")
        if self.conductor % ell == 0 and self.conductor > 1:
            raise ValueError(
                f"{ell} ramifies in the field of conductor {self.conductor}"
            )
        return self.element_of(ell)

    def projection_to(self, sub: "GaloisData"):
        """Quotient map Gal(L/Q) -> Gal(L'/Q) for L' a subfield of L.

        Needs conductor(L') | modulus(L); acts on representatives.
        """
        def phi(g: tuple[int, ...]) -> tuple[int, ...]:
            return sub.element_of(self.representatives[g])

        return phi


@lru_cache(maxsize=None)
def galois_group(spec: AbelianFieldSpec) -> GaloisData:
    return GaloisData(spec)


# ---------------------------------------------------------------------------
# CM structure.

@dataclass(frozen=True)
class CMStructure:
    group: FiniteAbelianGroup
    j: tuple[int, ...]
    e_plus: GroupRingElement = field(compare=False)
    e_minus: GroupRingElement = field(compare=False)

    def e_r(self, r: int) -> GroupRingElement:
        """The idempotent (1 - (-1)^r j)/2: e_minus for even r, e_plus for odd."""
        return self.e_minus if r % 2 == 0 else self.e_plus


def cm_data(spec: AbelianFieldSpec) -> CMStructure | None:
    """CM structure of L, or None when L is totally real (-1 in fixing)."""
    m = spec.modulus
    if (-1) % m in spec.fixing or m <= 2:
        return None
    gal = galois_group(spec)
    j = gal.element_of(-1 % m)
    grp = gal.group
    half = Fraction(1, 2)
    one = GroupRingElement.scalar(grp, Fraction(1))
    jj = GroupRingElement.of_element(grp, j)
    e_plus = (one + jj).scale(half)
    e_minus = (one - jj).scale(half)
    return CMStructure(grp, j, e_plus, e_minus)


def roots_of_unity_order(spec: AbelianFieldSpec) -> int:
    """w_L: the largest k with Q(zeta_k) inside L."""
    m = spec.modulus
    best = 1
    for k in divisors(2 * m):
        if k % 4 == 2 and (k // 2) % 2 == 1 and m % (k // 2) == 0:
            kp = k // 2  # zeta_k = -zeta_kp, fixed iff h = 1 mod kp
        elif m % k == 0:
            kp = k
        else:
            continue
        if all((h - 1) % kp == 0 for h in spec.fixing) or kp == 1:
            best = max(best, k)
    return best


# ---------------------------------------------------------------------------
# Layers of the cyclotomic Z_p-tower.

def layer(spec: AbelianFieldSpec, p: int, n: int) -> AbelianFieldSpec:
    """The n-th layer L_n = L.Q_n inside Q(zeta_{m' p^(n+1)}), m' the
    prime-to-p part of the modulus. Requires v_p(modulus) <= 1 so that
    L and the tower are linearly disjoint (Gal(L_n/Q) = G x Z/p^n).
    """
    if p == 2 or not is_prime(p):
        raise ValueError(f"layer needs an odd prime, got p={p}")
    if n < 0:
        raise ValueError(f"layer index must be >= 0, got {n}")
    m = spec.modulus
    vp = 0
    while m % p == 0:
        m //= p
        vp += 1
    if vp >= 2:
        raise ValueError(
            f"v_{p}(modulus) = {vp} >= 2: the field presentation does not pin a tower base"
        )
    mprime = m
    q = p ** (n + 1)
    big = mprime * q
    torsion = {pow(x, p**n, q) for x in unit_residues(q)}
    fixing = frozenset(
        x
        for x in unit_residues(big)
        if (x % spec.modulus if spec.modulus > 1 else 0) in spec.fixing
        and x % q in torsion
    )
    lbl = spec.label or f"m{spec.modulus}"
    return AbelianFieldSpec(big, fixing, f"{lbl}.layer({p},{n})")


# ---------------------------------------------------------------------------
# Hyp(S, T).

def normalize_places(S) -> tuple[set[int], bool]:
    """Split a place list into (finite primes, has infinite place)."""
    finite: set[int] = set()
    has_inf = False
    for v in S:
        if v == INFINITE_PLACE or v == "inf":
            has_inf = True
        elif isinstance(v, int) and is_prime(v):
            finite.add(v)
        else:
            raise ValueError(f"malformed place {v!r}")
    return finite, has_inf


def check_hyp(spec: AbelianFieldSpec, S, T) -> tuple[bool, str]:
    """Hyp(S,T): S contains the ramified and infinite places, S and T are
    disjoint, and no nontrivial root of unity of L is 1 mod every prime of T.

    The last condition holds iff every prime ell dividing w_L sees some v in T
    of residue characteristic != ell (mu_ell injects into residue fields away
    from ell).
    """
    s_fin, s_inf = normalize_places(S)
    t_fin, t_inf = normalize_places(T)
    if t_inf:
        return False, "T must consist of finite places"
    if not s_inf:
        return False, "S must contain the infinite place"
    ram = ramified_primes(spec)
    if not ram <= s_fin:
        return False, f"S misses ramified primes {sorted(ram - s_fin)}"
    if s_fin & t_fin:
        return False, f"S and T meet at {sorted(s_fin & t_fin)}"
    w = roots_of_unity_order(spec)
    for ell in factorize(w):
        if not any(v != ell for v in t_fin):
            return False, f"every prime of T has residue characteristic {ell} | w_L = {w}"
    return True, "ok"


# ---------------------------------------------------------------------------
# Characters.

class CharacterTable:
    """All characters of a finite abelian group, stored as logs base zeta_e.

    Characters are labelled by exponent vectors c: chi_c(g) = zeta_e^log with
    log = sum_i c_i g_i (e / d_i) mod e, e the exponent of the group.
    """

    def __init__(self, group: FiniteAbelianGroup):
        self.group = group
        self.e = group.exponent
        self.labels = list(group.elements())

    def log(self, label, g) -> int:
        e = self.e
        return sum(
            c * x * (e // d) for c, x, d in zip(label, g, self.group.orders)
        ) % e if self.group.orders else 0

    def value(self, label, g) -> CyclotomicInt:
        return CyclotomicInt.zeta(self.e, self.log(label, g))

    def component(self, x: GroupRingElement, label) -> CyclotomicInt:
        """component_chi(x) = sum_g coeff_g(x) chi(g)."""
        powers: dict[int, Fraction] = {}
        general = None
        for g, c in x.coeffs.items():
            t = self.log(label, g)
            if isinstance(c, CyclotomicInt):
                term = c.embed(self.e) if c.n != self.e else c
                term = term * CyclotomicInt.zeta(self.e, t)
                general = term if general is None else general + term
            else:
                powers[t] = powers.get(t, Fraction(0)) + Fraction(c)
        out = CyclotomicInt.from_powers(self.e, powers)
        return out if general is None else out + general

    def decompose(self, x: GroupRingElement) -> dict:
        return {label: self.component(x, label) for label in self.labels}

    def idempotent(self, label) -> GroupRingElement:
        """e(chi) = (1/|G|) sum_g chi(g^(-1)) g."""
        grp = self.group
        inv_size = Fraction(1, grp.size)
        coeffs = {
            g: CyclotomicInt.zeta(self.e, -self.log(label, g)) * inv_size
            for g in grp.elements()
        }
        return GroupRingElement(grp, coeffs)

    def reconstruct(self, components: dict) -> GroupRingElement:
        """sum_chi component_chi e(chi); exact inverse of decompose."""
        grp = self.group
        inv_size = Fraction(1, grp.size)
        out: dict = {}
        for g in grp.elements():
            acc = CyclotomicInt.from_rational(self.e, Fraction(0))
            for label, comp in components.items():
                if isinstance(comp, (int, Fraction)):
                    comp = CyclotomicInt.from_rational(self.e, Fraction(comp))
                acc = acc + comp * CyclotomicInt.zeta(self.e, -self.log(label, g))
            if not acc.is_zero():
                out[g] = acc * inv_size
        return GroupRingElement(grp, out)

    def demote_rational(self, x: GroupRingElement) -> GroupRingElement:
        """Replace rational-valued CyclotomicInt coefficients by Fractions."""
        def demote(c):
            return c.as_rational() if isinstance(c, CyclotomicInt) and c.is_rational() else c

        return x.map_coefficients(demote)


@dataclass(frozen=True)
class DirichletCharacter:
    """A character of Gal(L/Q) as a primitive Dirichlet character.

    Values are zeta_order^logs[a] on residues a coprime to the conductor and 0
    elsewhere; `order` is the exponent of the ambient character table so that
    values from different characters of one group compare directly.
    """

    conductor: int
    order: int
    logs: dict[int, int] = field(compare=False)

    def log_of(self, a: int) -> int | None:
        f = self.conductor
        if f == 1:
            return 0
        if math.gcd(a, f) != 1:
            return None
        return self.logs[a % f]

    def value(self, a: int) -> CyclotomicInt:
        t = self.log_of(a)
        if t is None:
            return CyclotomicInt.from_rational(self.order, Fraction(0))
        return CyclotomicInt.zeta(self.order, t)

    def is_odd(self) -> bool:
        t = self.log_of(-1)
        return t is not None and t != 0

    def contragredient(self) -> "DirichletCharacter":
        return DirichletCharacter(
            self.conductor, self.order, {a: (-t) % self.order for a, t in self.logs.items()}
        )


def dirichlet_character(gal: GaloisData, table: CharacterTable, label) -> DirichletCharacter:
    """Primitivize the character chi_label of Gal(L/Q) to its own conductor."""
    f = gal.conductor
    log_f = {a: table.log(label, gal.element_of(a)) for a in unit_residues(f)} if f > 1 else {}
    fchi = f
    for d in divisors(f):
        if all(log_f[a] == 0 for a in unit_residues(f) if (a - 1) % d == 0):
            fchi = d
            break
    if fchi == 1:
        return DirichletCharacter(1, table.e, {})
    logs = {}
    for b in unit_residues(fchi):
        res, mods = [], []
        for p, e in factorize(f).items():
            q = p**e
            res.append(b % q if fchi % p == 0 else 1)
            mods.append(q)
        logs[b] = log_f[crt(res, mods) % f]
    return DirichletCharacter(fchi, table.e, logs)


# ---------------------------------------------------------------------------
# Tower presentation: Gal(L_n/Q) = G x Z/p^n with the gamma coordinate split off.

class TowerLevelData:
    """Level-n Galois data in product coordinates (g, k): g in Gal(L/Q),
    k the cyclotomic coordinate (gamma^k, gamma the fixed generator with
    cyclotomic character 1+p).

    Also records, when zeta_p lies in L, the finite-level cyclotomic character
    chi_cyc: G_n -> (Z/p^(n+1))^x.
    """

    def __init__(self, spec: AbelianFieldSpec, p: int, n: int):
        self.base_spec = spec
        self.p = p
        self.n = n
        self.spec = layer(spec, p, n)
        self.base = galois_group(spec)
        self.conductor, _ = conductor(self.spec)
        q = p ** (n + 1)
        self.q = q
        base_orders = self.base.group.orders
        self.group = FiniteAbelianGroup(base_orders + (p**n,))
        # Discrete logs of 1-units mod p^(n+1) base (1+p).
        self._dlog1: dict[int, int] = {}
        x = 1
        for k in range(p**n):
            self._dlog1[x] = k
            x = (x * (1 + p)) % q
        self._elt: dict[int, tuple[int, ...]] = {}
        self.representatives: dict[tuple[int, ...], int] = {}
        fixing = self.spec.fixing
        for a in unit_residues(self.spec.modulus):
            g = self._classify(a)
            self._elt[a] = g
            self.representatives.setdefault(g, a)
        if len(self.representatives) != self.group.size:
            raise AssertionError("tower product coordinates are not bijective")
        self.has_chi_cyc = all((h - 1) % q == 0 for h in fixing) or self.spec.modulus <= 2
        self.chi_cyc: dict[tuple[int, ...], int] | None = None
        if self.has_chi_cyc:
            self.chi_cyc = {g: a % q for g, a in self.representatives.items()}

    def _classify(self, a: int) -> tuple[int, ...]:
        p, q = self.p, self.q
        w = teichmuller(a, p, self.n + 1).residue
        one_unit = (a * pow(w, -1, q)) % q
        k = self._dlog1[one_unit]
        return self.base.element_of(a) + (k,)

    def element_of(self, a: int) -> tuple[int, ...]:
        f = self.conductor
        if f > 1 and math.gcd(a, f) != 1:
            raise ValueError(f"{a} is not coprime to the layer conductor {f}")
        m = self.spec.modulus
        r = a % m
        if r in self._elt:
            return self._elt[r]
        res, mods = [], []
        for pp, e in factorize(m).items():
            qq = pp**e
            res.append(a % qq if f % pp == 0 else 1)
            mods.append(qq)
        return self._elt[crt(res, mods) % m]

    def frobenius(self, ell: int) -> tuple[int, ...]:
        if not is_prime(ell):
            raise ValueError(f"frobenius expects a prime, got {ell}")
        if self.conductor > 1 and self.conductor % ell == 0:
            raise ValueError(f"{ell} ramifies in layer {self.n}")
        return self.element_of(ell)

    def chi_cyc_of(self, g: tuple[int, ...]) -> int:
        """chi_cyc(g) mod p^(n+1); defined only when zeta_p is in L."""
        if self.chi_cyc is None:
            raise ValueError(
                "the cyclotomic character does not descend to this layer "
                "(zeta_p is not in the base field)"
            )
        return self.chi_cyc[g]

    def project(self, g: tuple[int, ...], target_n: int) -> tuple[int, ...]:
        """The quotient map G_n -> G_target: (g, k) -> (g, k mod p^target)."""
        if target_n > self.n:
            raise ValueError("can only project to a lower layer")
        return g[:-1] + (g[-1] % self.p**target_n,)
