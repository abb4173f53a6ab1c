"""Elementary number theory helpers (desk scale: trial division everywhere)."""

from __future__ import annotations

import math


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def factorize(n: int) -> dict[int, int]:
    """Prime factorization {p: e} of n >= 1."""
    if n < 1:
        raise ValueError(f"factorize expects n >= 1, got {n}")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def divisors(n: int) -> list[int]:
    """Sorted list of positive divisors of n >= 1."""
    divs = [1]
    for p, e in factorize(n).items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def euler_phi(n: int) -> int:
    phi = 1
    for p, e in factorize(n).items():
        phi *= p ** (e - 1) * (p - 1)
    return phi


def crt(residues: list[int], moduli: list[int]) -> int:
    """x mod prod(moduli) with x = residues[i] mod moduli[i] (moduli coprime)."""
    x, m = 0, 1
    for r, q in zip(residues, moduli):
        g = math.gcd(m, q)
        if g != 1:
            raise ValueError("crt moduli must be pairwise coprime")
        # x' = x + m*t with x + m*t = r mod q
        t = ((r - x) * pow(m, -1, q)) % q
        x += m * t
        m *= q
    return x % m


def multiplicative_order(a: int, m: int) -> int:
    if m == 1:
        return 1
    if math.gcd(a, m) != 1:
        raise ValueError(f"{a} is not a unit mod {m}")
    order = 1
    x = a % m
    while x != 1:
        x = (x * a) % m
        order += 1
    return order


def primitive_root(q: int) -> int:
    """Smallest primitive root modulo q = p^e (p odd prime) or q in {1, 2, 4}."""
    if q in (1, 2):
        return 1
    if q == 4:
        return 3
    fac = factorize(q)
    if len(fac) != 1 or 2 in fac:
        raise ValueError(f"{q} has no primitive root (need an odd prime power)")
    phi = euler_phi(q)
    prime_divs = list(factorize(phi))
    for g in range(2, q):
        if math.gcd(g, q) != 1:
            continue
        if all(pow(g, phi // ell, q) != 1 for ell in prime_divs):
            return g
    raise AssertionError(f"no primitive root found mod {q}")


def unit_residues(m: int) -> list[int]:
    """Residues of (Z/m)^x in [0, m). For m = 1 this is [0]."""
    if m == 1:
        return [0]
    return [a for a in range(m) if math.gcd(a, m) == 1]


def unit_group_generators(m: int) -> list[tuple[int, int]]:
    """Generators (residue, order) of (Z/m)^x, one or two per prime power of m.

    Odd prime powers contribute a primitive root; 2^e contributes -1 (e >= 2)
    and 5 (e >= 3). Each generator is lifted by CRT to be 1 mod the cofactor.
    """
    if m <= 2:
        return []
    gens: list[tuple[int, int]] = []
    fac = factorize(m)
    prime_powers = [p**e for p, e in fac.items()]
    for p, e in fac.items():
        q = p**e
        cof = m // q
        if p == 2:
            if e >= 2:
                gens.append((crt([q - 1, 1], [q, cof]) if cof > 1 else q - 1, 2))
            if e >= 3:
                gens.append((crt([5, 1], [q, cof]) if cof > 1 else 5, 2 ** (e - 2)))
        else:
            g = primitive_root(q)
            gens.append((crt([g, 1], [q, cof]) if cof > 1 else g, euler_phi(q)))
    assert math.prod(o for _, o in gens) == euler_phi(m)
    return gens
