"""Exact real-root isolation and high-precision complex root approximation.

Real roots: Sturm sequences over exact rationals, computed on the
square-free part and scaled to primitive integer polynomials at every step
so sign evaluations reduce to pure integer arithmetic.  Enclosures are
half-open intervals (lo, hi] certified to contain exactly one root.

Complex roots: Aberth-Ehrlich simultaneous iteration in mpmath
extended-precision floats with deterministic initial guesses (fixed angles
on a coefficient-scaled circle, no RNG), so reports are bit-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

import mpmath as mp

from .charpoly import Polynomial, phi, poly_gcd, squarefree_decomposition, squarefree_part

DEFAULT_DPS = 50
ABERTH_MAX_ITER = 1000
ABERTH_STEP_TOL = Fraction(1, 10**20)
CLUSTER_SUSPECT = 1e-12


class RootFindingError(RuntimeError):
    """Root computation failed; partial results may be attached."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class ChainFailure(RuntimeError):
    """The root chain broke down at some index j."""

    def __init__(self, j: int, message: str):
        super().__init__(f"chain failure at j={j}: {message}")
        self.j = j


@dataclass(frozen=True)
class RootEnclosure:
    """Half-open interval (lo, hi] holding exactly one real root."""

    lo: Fraction
    hi: Fraction
    multiplicity_simple: bool = True

    def width(self) -> Fraction:
        return self.hi - self.lo

    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def disjoint_from(self, other: "RootEnclosure") -> bool:
        return self.hi <= other.lo or other.hi <= self.lo


@dataclass(frozen=True)
class ComplexRoot:
    """One approximate root with a residual certificate |p(root)|."""

    re: mp.mpf
    im: mp.mpf
    residual: mp.mpf


# ---------------------------------------------------------------------------
# Sturm machinery (integer chains, exact sign evaluation)


def _int_coeffs(p: Polynomial) -> tuple[int, ...]:
    """Scale by a positive rational to coprime integer coefficients."""
    den = lcm(*(c.denominator for c in p.coeffs))
    ints = [int(c * den) for c in p.coeffs]
    g = 0
    for v in ints:
        g = gcd(g, v)
    return tuple(v // g for v in ints)


def _int_sign_at(coeffs: tuple[int, ...], x: Fraction) -> int:
    # sign of sum c_i x^i = sign of sum c_i num^i den^(d-i), integer Horner
    num, den = x.numerator, x.denominator
    acc = coeffs[-1]
    dp = 1
    for c in reversed(coeffs[:-1]):
        dp *= den
        acc = acc * num + c * dp
    return (acc > 0) - (acc < 0)


def _int_sign_at_inf(coeffs: tuple[int, ...], positive: bool) -> int:
    lead = coeffs[-1]
    s = (lead > 0) - (lead < 0)
    if positive or (len(coeffs) - 1) % 2 == 0:
        return s
    return -s


@lru_cache(maxsize=256)
def _sturm_chain(p: Polynomial) -> tuple[tuple[int, ...], ...]:
    """Sturm chain of the square-free part, as primitive integer tuples.

    Each link is rescaled by a positive rational to coprime integers; positive
    scaling preserves all sign patterns, so variation counts are unaffected
    and evaluation stays in integer arithmetic.
    """
    sqf = squarefree_part(p)
    if sqf.degree < 1:
        return (_int_coeffs(sqf),) if not sqf.is_zero else ()
    chain = [_int_coeffs(sqf), _int_coeffs(sqf.derivative())]
    while True:
        a = Polynomial(chain[-2])
        b = Polynomial(chain[-1])
        _, r = a.divmod(b)
        if r.is_zero:
            break
        chain.append(_int_coeffs(-r))
    return tuple(chain)


def _variations(signs: list[int]) -> int:
    count = 0
    prev = 0
    for s in signs:
        if s == 0:
            continue
        if prev != 0 and s != prev:
            count += 1
        prev = s
    return count


def count_real_roots(p: Polynomial, lo: Fraction | None = None, hi: Fraction | None = None) -> int:
    """Number of distinct real roots of p in (lo, hi]; None means +-infinity."""
    if p.is_zero:
        raise ValueError("zero polynomial")
    if p.degree < 1:
        return 0
    chain = _sturm_chain(p)
    if lo is None:
        v_lo = _variations([_int_sign_at_inf(q, positive=False) for q in chain])
    else:
        v_lo = _variations([_int_sign_at(q, Fraction(lo)) for q in chain])
    if hi is None:
        v_hi = _variations([_int_sign_at_inf(q, positive=True) for q in chain])
    else:
        v_hi = _variations([_int_sign_at(q, Fraction(hi)) for q in chain])
    return v_lo - v_hi


def cauchy_bound(p: Polynomial) -> Fraction:
    """B with all real roots of p inside (-B, B]."""
    if p.degree < 1:
        return Fraction(1)
    lead = abs(p.leading())
    return 1 + max(abs(c) for c in p.coeffs[:-1]) / lead


def _isolate_squarefree(p: Polynomial, lo: Fraction, hi: Fraction, simple: bool) -> list[RootEnclosure]:
    chain = _sturm_chain(p)

    def count(a: Fraction, b: Fraction) -> int:
        va = _variations([_int_sign_at(q, a) for q in chain])
        vb = _variations([_int_sign_at(q, b) for q in chain])
        return va - vb

    out: list[RootEnclosure] = []
    stack = [(lo, hi, count(lo, hi))]
    while stack:
        a, b, n = stack.pop()
        if n == 0:
            continue
        if n == 1:
            out.append(RootEnclosure(a, b, simple))
            continue
        mid = (a + b) / 2
        left = count(a, mid)
        stack.append((mid, b, n - left))
        stack.append((a, mid, left))
    return sorted(out, key=lambda e: e.lo)


def sturm_isolate(p: Polynomial, lo: Fraction | None = None, hi: Fraction | None = None) -> list[RootEnclosure]:
    """Disjoint enclosures covering exactly the real roots of p in (lo, hi].

    Isolation runs on the square-free factors from Yun's decomposition;
    multiplicities are read off the factor exponents, so each enclosure knows
    whether its root is simple.
    """
    if p.is_zero:
        raise ValueError("zero polynomial")
    if p.degree < 1:
        return []
    bound = cauchy_bound(p)
    lo = Fraction(lo) if lo is not None else -bound
    hi = Fraction(hi) if hi is not None else bound
    if lo >= hi:
        return []
    groups: list[tuple[Polynomial, list[RootEnclosure]]] = []
    for factor, mult in squarefree_decomposition(p):
        encl = _isolate_squarefree(factor, lo, hi, simple=(mult == 1))
        groups.append((factor, encl))
    # enclosures from distinct coprime factors hold distinct roots; refine
    # until all are pairwise disjoint
    for gi in range(len(groups)):
        for gj in range(gi + 1, len(groups)):
            fi, ei = groups[gi]
            fj, ej = groups[gj]
            for a in range(len(ei)):
                for b in range(len(ej)):
                    while not ei[a].disjoint_from(ej[b]):
                        ei[a] = _bisect_once(ei[a], fi)
                        ej[b] = _bisect_once(ej[b], fj)
    out = [e for _, encl in groups for e in encl]
    return sorted(out, key=lambda e: e.lo)


def _bisect_once(e: RootEnclosure, p: Polynomial) -> RootEnclosure:
    mid = e.midpoint()
    if count_real_roots(p, e.lo, mid) == 1:
        return RootEnclosure(e.lo, mid, e.multiplicity_simple)
    return RootEnclosure(mid, e.hi, e.multiplicity_simple)


def refine(e: RootEnclosure, p: Polynomial, width: Fraction) -> RootEnclosure:
    """Bisect the enclosure against p until its width is <= width."""
    width = Fraction(width)
    while e.width() > width:
        e = _bisect_once(e, p)
    return e


def compare_roots_refining(
    e1: RootEnclosure, p1: Polynomial, e2: RootEnclosure, p2: Polynomial
) -> tuple[int, RootEnclosure, RootEnclosure]:
    """Exact order of the enclosed roots, plus the refined enclosures.

    While the intervals overlap, equality is tested via the gcd of the
    square-free parts (a common root inside the overlap forces equality);
    otherwise both enclosures are bisected until disjoint.
    """
    s1 = squarefree_part(p1)
    s2 = squarefree_part(p2)
    g = poly_gcd(s1, s2)
    while not e1.disjoint_from(e2):
        if g.degree >= 1:
            a = max(e1.lo, e2.lo)
            b = min(e1.hi, e2.hi)
            if a < b and count_real_roots(g, a, b) >= 1:
                return 0, e1, e2
        e1 = _bisect_once(e1, s1)
        e2 = _bisect_once(e2, s2)
    return (-1 if e1.hi <= e2.lo else 1), e1, e2


def compare_roots(e1: RootEnclosure, p1: Polynomial, e2: RootEnclosure, p2: Polynomial) -> int:
    """Exact order of the roots enclosed by (e1, p1) and (e2, p2): -1, 0, or 1."""
    return compare_roots_refining(e1, p1, e2, p2)[0]


# ---------------------------------------------------------------------------
# the chain of minimal positive roots


@dataclass(frozen=True)
class LambdaChain:
    """Minimal positive roots of the leading-block charpolys, j = 1..k+1."""

    k: int
    t: Fraction
    enclosures: tuple[RootEnclosure, ...]
    strictly_decreasing: bool


def lambda_chain(k: int, t: Fraction) -> LambdaChain:
    """Isolate the minimal root in (0, 1] of each phi(k, t, j), j = 1..k+1.

    Each root must exist and be simple; otherwise ChainFailure carries the
    offending j.  Adjacent enclosures are refined until disjoint so the
    strict-decrease verdict is certified, not numeric.
    """
    t = Fraction(t)
    enclosures: list[RootEnclosure] = []
    polys: list[Polynomial] = []
    for j in range(1, k + 2):
        p = phi(k, t, j)
        found = sturm_isolate(p, Fraction(0), Fraction(1))
        if not found:
            raise ChainFailure(j, "no root in (0, 1]")
        e = found[0]
        if not e.multiplicity_simple:
            raise ChainFailure(j, "minimal root in (0, 1] is not simple")
        enclosures.append(e)
        polys.append(p)
    decreasing = True
    for j in range(1, len(enclosures)):
        c, enclosures[j], enclosures[j - 1] = compare_roots_refining(
            enclosures[j], polys[j], enclosures[j - 1], polys[j - 1]
        )
        if c >= 0:
            decreasing = False
            break
    return LambdaChain(k, t, tuple(enclosures), decreasing)


# ---------------------------------------------------------------------------
# complex roots (Aberth-Ehrlich, extended precision)


def _pair_conjugates(roots: list[mp.mpc]) -> list[mp.mpc]:
    """Force the multiset to be exactly closed under conjugation.

    Greedy nearest matching of each root against the conjugated list; a root
    matched to itself is snapped onto the real axis, a pair is replaced by
    (u, conj(u)) with u the average of the two estimates.
    """
    n = len(roots)
    unused = set(range(n))
    out: list[mp.mpc] = []
    for i in range(n):
        if i not in unused:
            continue
        unused.discard(i)
        zi = roots[i]
        best, best_d = None, None
        for j in unused | {i}:
            d = abs(mp.conj(roots[j]) - zi)
            if best_d is None or d < best_d:
                best, best_d = j, d
        if best == i:
            out.append(mp.mpc(zi.real, 0))
        else:
            unused.discard(best)
            u = (zi + mp.conj(roots[best])) / 2
            out.append(u)
            out.append(mp.conj(u))
    return out


def _aberth(coeffs: list[Fraction]) -> list[mp.mpc]:
    """Simultaneous-iteration roots of a square-free polynomial.

    Initial guesses sit at fixed angles on a circle scaled by the
    constant/leading coefficient ratio: deterministic, no RNG.
    """
    zeros_at_origin = 0
    while coeffs[0] == 0:
        zeros_at_origin += 1
        coeffs = coeffs[1:]
    cs = [mp.mpf(c.numerator) / mp.mpf(c.denominator) for c in coeffs]
    n = len(cs) - 1
    roots = [mp.mpc(0)] * zeros_at_origin
    if n == 1:
        roots.append(mp.mpc(-cs[0] / cs[1]))
    elif n >= 2:
        radius = (abs(cs[0] / cs[n])) ** (mp.mpf(1) / n)
        if radius == 0:
            radius = mp.mpf(1)
        zs = [
            radius * mp.exp(mp.mpc(0, 2 * mp.pi * i / n + mp.mpf("0.4")))
            for i in range(n)
        ]
        dcs = [i * c for i, c in enumerate(cs)][1:]

        def horner(coefs, z):
            acc = mp.mpc(0)
            for c in reversed(coefs):
                acc = acc * z + c
            return acc

        step_tol = mp.mpf(ABERTH_STEP_TOL.numerator) / mp.mpf(ABERTH_STEP_TOL.denominator)
        converged = False
        for _ in range(ABERTH_MAX_ITER):
            max_step = mp.mpf(0)
            for i in range(n):
                zi = zs[i]
                pv = horner(cs, zi)
                dv = horner(dcs, zi)
                if dv == 0:
                    zs[i] = zi + mp.mpf("1e-6") * (1 + abs(zi))
                    max_step = mp.mpf(1)
                    continue
                w = pv / dv
                s = mp.mpc(0)
                for j in range(n):
                    if j != i:
                        s += 1 / (zi - zs[j])
                denom = 1 - w * s
                delta = w if denom == 0 else w / denom
                zs[i] = zi - delta
                rel = abs(delta) / max(mp.mpf(1), abs(zs[i]))
                if rel > max_step:
                    max_step = rel
            if max_step < step_tol:
                converged = True
                break
        if not converged:
            raise RootFindingError(
                f"no convergence after {ABERTH_MAX_ITER} iterations",
                partial=roots + zs,
            )
        roots.extend(_pair_conjugates(zs))
    return roots


def complex_roots(p: Polynomial, tol: float = 1e-20, dps: int = DEFAULT_DPS) -> list[ComplexRoot]:
    """All deg(p) roots with residual certificates.

    Multiple roots are deflated exactly first (Yun square-free
    decomposition); the Aberth-Ehrlich iteration then only ever sees simple
    roots, and each root is replicated with its multiplicity.  Residuals
    |p(root)| are checked against tol * (sum |c_i| |root|^i); a failed
    certificate or a stalled iteration raises RootFindingError with partial
    results attached.  Output is sorted by (Re, Im) and exactly closed under
    conjugation.
    """
    if p.degree < 1:
        raise ValueError("need degree >= 1")
    with mp.workdps(dps):
        roots: list[mp.mpc] = []
        for factor, mult in squarefree_decomposition(p):
            roots.extend(_aberth(list(factor.coeffs)) * mult)

        def residual(z) -> mp.mpf:
            acc = mp.mpc(0)
            for c in reversed(p.coeffs):
                acc = acc * z + mp.mpf(c.numerator) / mp.mpf(c.denominator)
            return abs(acc)

        out = []
        for z in sorted(roots, key=lambda z: (z.real, z.imag)):
            res = residual(z)
            scale = mp.mpf(0)
            zp = mp.mpf(1)
            az = abs(z)
            for c in p.coeffs:
                scale += abs(mp.mpf(c.numerator) / mp.mpf(c.denominator)) * zp
                zp *= az
            if res > mp.mpf(tol) * scale:
                raise RootFindingError(
                    f"residual {mp.nstr(res, 8)} exceeds tolerance at root {mp.nstr(z, 12)}",
                    partial=roots,
                )
            out.append(ComplexRoot(re=z.real, im=z.imag, residual=res))
        return out


def suspected_clusters(roots: list[ComplexRoot]) -> list[tuple[int, int]]:
    """Index pairs of distinct roots closer than the cluster threshold.

    Exactly coincident entries are known multiples (they come from the
    exact deflation), so only strictly positive gaps count as suspicious.
    """
    out = []
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            d = mp.hypot(roots[i].re - roots[j].re, roots[i].im - roots[j].im)
            if 0 < d < CLUSTER_SUSPECT:
                out.append((i, j))
    return out


def root_strings(roots: list[ComplexRoot], digits: int = 25) -> list[dict]:
    """Serialize roots as decimal strings at the requested precision."""
    return [
        {
            "re": mp.nstr(r.re, digits),
            "im": mp.nstr(r.im, digits),
            "residual": mp.nstr(r.residual, 8),
        }
        for r in roots
    ]
