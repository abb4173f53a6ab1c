"""Finite-level model of the Iwasawa algebra: truncated group rings
(Z/p^N)[G_n] along the cyclotomic tower, aug projections, the # involution,
cyclotomic twists, and coherent Stickelberger towers.

Lambda(G) is represented only through coherent families of finite-level
elements: a tower is accepted exactly when adjacent aug projections match,
and the equivariant Kummer congruence compares a twisted tower against the
untwisted one at the effective precision p^min(N, n+1).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .abelian import AbelianFieldSpec, TowerLevelData, check_hyp, cm_data, conductor
from .exact import PadicInt, padic_from_rational
from .groupring import GroupRingElement
from .lvalues import is_p_integral, theta
from .numutil import factorize, is_prime
from .abelian import normalize_places


class PrecisionBudgetError(ValueError):
    """Twist requested beyond the p^(n+1) range where chi_cyc descends."""


class TowerIntegralityError(ValueError):
    def __init__(self, layer: int, message: str):
        super().__init__(f"layer {layer}: {message}")
        self.layer = layer


@lru_cache(maxsize=None)
def tower_level(spec: AbelianFieldSpec, p: int, n: int) -> TowerLevelData:
    return TowerLevelData(spec, p, n)


@dataclass(frozen=True)
class FiniteLevelAlgebra:
    """(Z/p^N)[G_n] with G_n = Gal(L/Q) x Z/p^n in product coordinates and
    the finite-level cyclotomic character data (u = chi_cyc(gamma) = 1+p)."""

    p: int
    N: int
    level: TowerLevelData

    @property
    def n(self) -> int:
        return self.level.n

    @property
    def group(self):
        return self.level.group

    @property
    def u(self) -> int:
        return (1 + self.p) % self.p**self.N

    def chi_of(self, g, precision: int | None = None) -> int:
        prec = self.N if precision is None else precision
        if prec > self.n + 1:
            raise PrecisionBudgetError(
                f"chi_cyc at layer {self.n} is canonical only mod p^{self.n + 1}, "
                f"requested p^{prec}"
            )
        return self.level.chi_cyc_of(self.level.group.reduce(g)) % self.p**prec

    def reduce_from_rational(self, x: GroupRingElement) -> GroupRingElement:
        return x.map_coefficients(lambda c: padic_from_rational(Fraction(c), self.p, self.N))


def aug_project(
    x: GroupRingElement, src: TowerLevelData, target: TowerLevelData
) -> GroupRingElement:
    """Coefficientwise pushforward along G_m -> G_n, (g, k) -> (g, k mod p^n)."""
    if src.p != target.p or src.base_spec != target.base_spec:
        raise ValueError("aug projection needs levels of one tower")
    if target.n > src.n:
        raise ValueError(f"cannot project layer {src.n} up to layer {target.n}")
    return x.pushforward(target.group, lambda g: src.project(g, target.n))


def sharp(x: GroupRingElement) -> GroupRingElement:
    return x.sharp()


def twist(x: GroupRingElement, r: int, alg: FiniteLevelAlgebra) -> GroupRingElement:
    """t_cyc^r at finite level: g -> chi_cyc(g)^r g. Requires N <= n+1 (the
    exact range where u^(r p^n) = 1 mod p^N makes this well defined on G_n)
    and a level where chi_cyc descends (zeta_p in the base field)."""
    p, N = alg.p, alg.N
    if N > alg.n + 1:
        raise PrecisionBudgetError(
            f"twist needs N <= n+1, got N={N} at layer n={alg.n}"
        )
    if r == 0:
        return x
    out: dict = {}
    for g, c in x.coeffs.items():
        chi = alg.chi_of(g, N)
        if not isinstance(c, PadicInt):
            c = padic_from_rational(Fraction(c), p, N)
        unit = PadicInt(p, min(N, c.N), chi)
        out[g] = c * unit**r
    return GroupRingElement(x.group, out)


# ---------------------------------------------------------------------------
# Stickelberger towers.

@dataclass
class TowerElement:
    """Coherent family of elements of (Z/p^N)[G_n], levels 0..n_max."""

    p: int
    N: int
    spec: AbelianFieldSpec
    S: tuple
    T: tuple
    r: int
    entries: list[GroupRingElement]
    levels: list[TowerLevelData]
    hyp_verdicts: list[bool]

    @property
    def n_max(self) -> int:
        return len(self.entries) - 1

    def algebra(self, n: int) -> FiniteLevelAlgebra:
        return FiniteLevelAlgebra(self.p, self.N, self.levels[n])

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "N": self.N,
            "levels": [
                {"n": n, "coeffs": entry.to_json()}
                for n, entry in enumerate(self.entries)
            ],
            "meta": {
                "spec": self.spec.to_json(),
                "S": [str(v) for v in self.S],
                "T": [str(v) for v in self.T],
                "r": self.r,
                "hyp": self.hyp_verdicts,
            },
        }

    @classmethod
    def from_json(cls, obj: dict) -> "TowerElement":
        p, N = int(obj["p"]), int(obj["N"])
        spec = AbelianFieldSpec.from_json(obj["meta"]["spec"])
        S = tuple(_parse_place(v) for v in obj["meta"]["S"])
        T = tuple(_parse_place(v) for v in obj["meta"]["T"])
        entries, levels = [], []
        for lvl in obj["levels"]:
            n = int(lvl["n"])
            data = tower_level(spec, p, n)
            entries.append(GroupRingElement.from_json(data.group, lvl["coeffs"], p=p, N=N))
            levels.append(data)
        return cls(
            p, N, spec, S, T, int(obj["meta"]["r"]), entries, levels,
            [bool(b) for b in obj["meta"].get("hyp", [True] * len(entries))],
        )


def _parse_place(v):
    return v if v in ("oo", "inf") else int(v)


def theta_tower(
    spec: AbelianFieldSpec,
    S,
    T,
    p: int,
    N: int,
    n_max: int,
    r: int,
    strict_hyp: bool = False,
) -> TowerElement:
    """Theta_{S,T}(L_n/Q, r) mod p^N for n = 0..n_max.

    Preconditions: p odd, v_p(modulus) <= 1, S contains the primes ramified
    in the tower (those of the base conductor, p, and the infinite place),
    S and T disjoint. Every layer value must be exactly p-integral before
    reduction; a non-integral layer aborts with its index. Hyp(S,T) is
    evaluated per layer and recorded (enforced under strict_hyp).
    """
    if p == 2 or not is_prime(p):
        raise ValueError(f"theta_tower needs an odd prime, got {p}")
    if N < 1 or n_max < 0:
        raise ValueError("need N >= 1 and n_max >= 0")
    s_fin, s_inf = normalize_places(S)
    t_fin, _ = normalize_places(T)
    if not s_inf:
        raise ValueError("S must contain the infinite place")
    if p not in s_fin:
        raise ValueError(f"S must contain p = {p} (it ramifies in the tower)")
    f, _ = conductor(spec)
    ram = set(factorize(f)) if f > 1 else set()
    if not ram - {p} <= s_fin:
        raise ValueError(f"S misses base ramified primes {sorted(ram - s_fin)}")
    if s_fin & t_fin:
        raise ValueError(f"S and T meet at {sorted(s_fin & t_fin)}")

    entries, levels, hyps = [], [], []
    for n in range(n_max + 1):
        lvl = tower_level(spec, p, n)
        ok, why = check_hyp(lvl.spec, S, T)
        hyps.append(ok)
        if strict_hyp and not ok:
            raise TowerIntegralityError(n, f"Hyp(S,T) fails: {why}")
        th = theta(lvl, S, T, r)
        if not is_p_integral(th, p):
            raise TowerIntegralityError(
                n, f"theta has a coefficient denominator divisible by {p}"
            )
        alg = FiniteLevelAlgebra(p, N, lvl)
        entries.append(alg.reduce_from_rational(th.value))
        levels.append(lvl)
    return TowerElement(p, N, spec, tuple(S), tuple(T), r, entries, levels, hyps)


def coherence_check(t: TowerElement) -> tuple[bool, int | None]:
    """True iff all adjacent aug projections match exactly; on failure,
    returns the lower index of the first mismatching pair."""
    for n in range(t.n_max):
        projected = aug_project(t.entries[n + 1], t.levels[n + 1], t.levels[n])
        if projected != t.entries[n]:
            return False, n
    return True, None


def twist_congruence_check(t_r: TowerElement, t_0: TowerElement) -> tuple[bool, int | None]:
    """Equivariant Kummer congruence: Theta(L_n, r) = twist(Theta(L_n, 0), r)
    mod p^min(N, n+1) at every level (exact at that precision)."""
    if (t_r.p, t_r.spec, t_r.S, t_r.T) != (t_0.p, t_0.spec, t_0.S, t_0.T):
        raise ValueError("towers must share (spec, S, T, p)")
    if t_0.r != 0:
        raise ValueError("the reference tower must be at r = 0")
    if t_r.n_max != t_0.n_max:
        raise ValueError("towers must have the same number of levels")
    for n in range(t_r.n_max + 1):
        ne = min(t_r.N, t_0.N, n + 1)
        alg = FiniteLevelAlgebra(t_r.p, ne, t_r.levels[n])
        lhs = t_r.entries[n].map_coefficients(lambda c: c.truncate(ne))
        base = t_0.entries[n].map_coefficients(lambda c: c.truncate(ne))
        rhs = twist(base, t_r.r, alg)
        if lhs != rhs:
            return False, n
    return True, None


def parity_projector_annihilates(t: TowerElement, n: int) -> bool:
    """(1 + (-1)^r j) kills the level-n entry (minus-part consistency for the
    CM corpus); j is complex conjugation lifted to G_n."""
    cm = cm_data(t.spec)
    if cm is None:
        raise ValueError("parity check needs a CM base field")
    entry = t.entries[n]
    grp = t.levels[n].group
    j_n = cm.j + (0,)
    sign = 1 if t.r % 2 == 0 else -1
    one = GroupRingElement.scalar(grp, PadicInt(t.p, t.N, 1))
    jj = GroupRingElement.of_element(grp, j_n, PadicInt(t.p, t.N, sign))
    return ((one + jj) * entry).is_zero()
