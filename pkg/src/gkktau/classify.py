"""Certification of matrix positivity classes, with witnesses on failure.

Brute-force sweeps (principal minors, almost-principal pairs, the
generalized Hadamard-Fischer inequality, the eigenvalue-monotonicity
lattice) are capped because they scale like 4^n; Toeplitz Hessenberg
matrices bypass the caps through structured reductions: window minors
determine every principal minor, and eigenvalue monotonicity reduces to the
chain of leading principal blocks.

Reports are deterministic: sweeps run in lexicographic order and return the
first witness; every witness carries enough data to re-verify the violated
inequality independently.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp

from .charpoly import Polynomial, charpoly, leading_charpolys
from .exact import IndexSet, RatMatrix, det, frac_str, leading_principal_minors, minor, submatrix
from .family import FamilyParams, build_A, minor_formula, pos_part, window
from .hurwitz import routh_stable
from .rootfind import (
    ChainFailure,
    RootEnclosure,
    cauchy_bound,
    compare_roots,
    complex_roots,
    count_real_roots,
    lambda_chain,
    refine,
    sturm_isolate,
)

P_SWEEP_CAP = 14
PAIR_SWEEP_CAP = 12
REFINE_WIDTH = Fraction(1, 2**80)
VERTEX_EPS = 1e-18


class SweepCapExceeded(ValueError):
    """Matrix order above the brute-force sweep cap for this property."""


@dataclass
class ClassReport:
    """Outcome of one class certification, with a re-verifiable witness."""

    property: str
    holds: bool
    witness: dict | None = None
    n: int | None = None
    params: dict | None = None
    details: dict | None = None

    def to_dict(self) -> dict:
        return {
            "property": self.property,
            "holds": self.holds,
            "witness": self.witness,
            "n": self.n,
            "params": self.params,
            "details": self.details,
        }


@dataclass
class MinRealEig:
    """Least real eigenvalue as an exact isolating interval, or infinite."""

    finite: bool
    enclosure: RootEnclosure | None = None
    poly: Polynomial | None = None

    @property
    def value(self) -> tuple[Fraction, Fraction] | None:
        if not self.finite:
            return None
        return (self.enclosure.lo, self.enclosure.hi)

    def to_dict(self) -> dict:
        if not self.finite:
            return {"finite": False}
        return {"finite": True, "lo": frac_str(self.enclosure.lo), "hi": frac_str(self.enclosure.hi)}


def subsets_lex(n: int):
    """All nonempty subsets of {1..n} as tuples, in lexicographic order."""

    def rec(prefix: tuple[int, ...], start: int):
        for v in range(start, n + 1):
            cur = prefix + (v,)
            yield cur
            yield from rec(cur, v + 1)

    yield from rec((), 1)


def _mask_of(subset: tuple[int, ...]) -> int:
    m = 0
    for v in subset:
        m |= 1 << (v - 1)
    return m


def _subset_of(mask: int, n: int) -> tuple[int, ...]:
    return tuple(v for v in range(1, n + 1) if mask & (1 << (v - 1)))


def principal_minor_table(a: RatMatrix) -> list[Fraction]:
    """det of every principal submatrix, indexed by bitmask; empty set -> 1."""
    n = a.rows
    table = [Fraction(1)] * (1 << n)
    for subset in subsets_lex(n):
        idx = IndexSet(n, subset)
        table[_mask_of(subset)] = det(submatrix(a, idx, idx))
    return table


def is_P_matrix(a: RatMatrix, cap: int = P_SWEEP_CAP) -> ClassReport:
    """All 2^n - 1 principal minors positive; witness = first failure in lex order."""
    _require_square(a)
    if a.rows > cap:
        raise SweepCapExceeded(f"P-matrix sweep capped at n <= {cap}, got {a.rows}")
    for subset in subsets_lex(a.rows):
        idx = IndexSet(a.rows, subset)
        value = det(submatrix(a, idx, idx))
        if value <= 0:
            return ClassReport(
                "P",
                False,
                witness={"alpha": list(subset), "minor": frac_str(value)},
                n=a.rows,
            )
    return ClassReport("P", True, n=a.rows)


def is_weakly_sign_symmetric(a: RatMatrix, cap: int = PAIR_SWEEP_CAP) -> ClassReport:
    """A[alpha,beta] * A[beta,alpha] >= 0 over all almost-principal pairs.

    Pairs are generated as gamma minus one index each: alpha = gamma \\ {q},
    beta = gamma \\ {p} for p < q in gamma.
    """
    _require_square(a)
    n = a.rows
    if n > cap:
        raise SweepCapExceeded(f"sign-symmetry sweep capped at n <= {cap}, got {n}")
    for gamma in subsets_lex(n):
        if len(gamma) < 2:
            continue
        for pi in range(len(gamma)):
            for qi in range(pi + 1, len(gamma)):
                p, q = gamma[pi], gamma[qi]
                alpha = tuple(v for v in gamma if v != q)
                beta = tuple(v for v in gamma if v != p)
                ab = minor(a, IndexSet(n, alpha), IndexSet(n, beta))
                ba = minor(a, IndexSet(n, beta), IndexSet(n, alpha))
                if ab * ba < 0:
                    return ClassReport(
                        "WSS",
                        False,
                        witness={
                            "alpha": list(alpha),
                            "beta": list(beta),
                            "product": frac_str(ab * ba),
                        },
                        n=n,
                    )
    return ClassReport("WSS", True, n=n)


def _hf_chunk(args) -> tuple[int, dict] | None:
    table, masks, n, start, end = args
    m = len(masks)
    for idx in range(start, end):
        i, j = divmod(idx, m)
        am, bm = masks[i], masks[j]
        lhs = table[am] * table[bm]
        rhs = table[am | bm] * table[am & bm]
        if lhs < rhs:
            return idx, {
                "alpha": list(_subset_of(am, n)),
                "beta": list(_subset_of(bm, n)),
                "lhs": frac_str(lhs),
                "rhs": frac_str(rhs),
            }
    return None


def is_GKK(a: RatMatrix, cap: int = PAIR_SWEEP_CAP, jobs: int = 1) -> ClassReport:
    """P-matrix check, then the Hadamard-Fischer sweep over all subset pairs.

    A[alpha] A[beta] >= A[alpha|beta] A[alpha&beta] for all alpha, beta;
    the 4^n pair sweep is data-parallel when jobs > 1, with the first
    witness in lexicographic pair order regardless of schedule.
    """
    _require_square(a)
    n = a.rows
    if n > cap:
        raise SweepCapExceeded(f"Hadamard-Fischer sweep capped at n <= {cap}, got {n}")
    p_report = is_P_matrix(a, cap=max(cap, P_SWEEP_CAP))
    if not p_report.holds:
        return ClassReport(
            "GKK", False, witness={"failed_precondition": "P", **p_report.witness}, n=n
        )
    table = principal_minor_table(a)
    masks = [0] + [_mask_of(s) for s in subsets_lex(n)]
    total = len(masks) * len(masks)
    if jobs <= 1:
        hit = _hf_chunk((table, masks, n, 0, total))
    else:
        chunk = max(1, total // (jobs * 4))
        ranges = [(s, min(s + chunk, total)) for s in range(0, total, chunk)]
        hit = None
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_hf_chunk, (table, masks, n, s, e)) for s, e in ranges]
            for fut in futures:
                result = fut.result()
                if result is not None:
                    hit = result
                    for other in futures:
                        other.cancel()
                    break
    if hit is not None:
        return ClassReport("GKK", False, witness=hit[1], n=n)
    return ClassReport("GKK", True, n=n, details={"pairs_checked": total})


def gkk_structured(params: FamilyParams) -> ClassReport:
    """Structured certificate that a family matrix satisfies the
    Hadamard-Fischer inequality, without the 4^n sweep.

    Checks, all exact: the matrix is Toeplitz and Hessenberg (so minors over
    unions of separated windows factor into window minors); every window
    minor equals t^((len-k-1)_+) (leading blocks computed, the rest follow
    from Toeplitz structure, spot-verified on sampled windows and sampled
    separated unions); the exponent inequality behind overlapping-window
    comparisons holds for all 0 <= x, y, z <= n; and the Hadamard-Fischer
    inequality holds for every pair of windows.  With window pairs settled,
    induction over the separated components of general index sets yields the
    inequality for arbitrary pairs.
    """
    a = build_A(params)
    n, k, t = params.n, params.k, params.t
    report_params = {"n": n, "k": k, "t": frac_str(t)}

    def fail(reason: str, **extra) -> ClassReport:
        return ClassReport(
            "GKK", False, witness={"reason": reason, **extra}, n=n, params=report_params
        )

    if not a.is_toeplitz():
        return fail("matrix is not Toeplitz")
    if not a.is_hessenberg():
        return fail("matrix is not Hessenberg")

    leading = leading_principal_minors(a)
    for m, value in enumerate(leading, start=1):
        expected = minor_formula(n, k, t, 1, m)
        if value != expected:
            return fail("leading window minor off-formula", order=m, value=frac_str(value))

    # window minors off the leading diagonal: Toeplitz shifts, spot-verified
    spot_windows = [(2, min(3, n - 1)), (max(1, n // 2), max(1, n // 3))]
    for i, j in spot_windows:
        if i >= 1 and j >= 1 and i + j - 1 <= n:
            w = window(n, i, j)
            if minor(a, w, w) != minor_formula(n, k, t, i, j):
                return fail("shifted window minor off-formula", i=i, j=j)

    for x in range(n + 1):
        for y in range(n + 1):
            for z in range(n + 1):
                lhs = pos_part(x + y - k - 1) + pos_part(x + z - k - 1)
                rhs = pos_part(x - k - 1) + pos_part(x + y + z - k - 1)
                if lhs > rhs:
                    return fail("exponent inequality violated", x=x, y=y, z=z)

    tpow = {e: t**e for e in range(2 * n + 2)}

    def window_value(length: int) -> Fraction:
        return tpow[pos_part(length - k - 1)]

    def union_value(blocks: list[tuple[int, int]]) -> Fraction:
        # blocks are (start, stop) inclusive; value factors over the blocks
        v = Fraction(1)
        for start, stop in blocks:
            v *= window_value(stop - start + 1)
        return v

    for i in range(1, n + 1):
        for j in range(1, n - i + 2):
            for l in range(1, n + 1):
                for m_ in range(1, n - l + 2):
                    e1, e2 = i + j - 1, l + m_ - 1
                    lhs = window_value(j) * window_value(m_)
                    if max(i, l) <= min(e1, e2) + 1:
                        un = union_value([(min(i, l), max(e1, e2))])
                    else:
                        un = union_value([(i, e1), (l, e2)])
                    inter_lo, inter_hi = max(i, l), min(e1, e2)
                    iv = window_value(inter_hi - inter_lo + 1) if inter_lo <= inter_hi else Fraction(1)
                    if lhs < un * iv:
                        return fail(
                            "window Hadamard-Fischer violated", i=i, j=j, l=l, m=m_
                        )

    # spot-check the separated-union factorization with real determinants
    samples = _separated_union_samples(n)
    for blocks in samples:
        members = [v for s, e in blocks for v in range(s, e + 1)]
        idx = IndexSet.of(members, n)
        direct = det(submatrix(a, idx, idx))
        if direct != union_value(blocks):
            return fail("separated-union factorization violated", blocks=blocks)

    return ClassReport(
        "GKK",
        True,
        n=n,
        params=report_params,
        details={
            "method": "structured",
            "window_minors": n,
            "exponent_triples": (n + 1) ** 3,
            "union_samples": len(samples),
        },
    )


def _separated_union_samples(n: int) -> list[list[tuple[int, int]]]:
    """A few deterministic unions of separated consecutive blocks in {1..n}."""
    out = []
    if n >= 5:
        out.append([(1, 2), (4, n)])
        out.append([(1, n // 2 - 1), (n // 2 + 1, n)])
    if n >= 9:
        out.append([(2, 3), (5, 6), (8, n)])
        out.append([(1, n // 3), (n // 3 + 2, 2 * n // 3), (2 * n // 3 + 2, n)])
    return [b for b in out if all(s <= e for s, e in b)]


def min_real_eig(a: RatMatrix) -> MinRealEig:
    """Least real eigenvalue via exact root isolation of the charpoly."""
    _require_square(a)
    p = charpoly(a)
    enclosures = sturm_isolate(p)
    if not enclosures:
        return MinRealEig(finite=False)
    return MinRealEig(finite=True, enclosure=enclosures[0], poly=p)


def _is_structured(a: RatMatrix) -> bool:
    return a.is_toeplitz() and (a.is_hessenberg() or a.transpose().is_hessenberg())


def is_omega(a: RatMatrix, cap: int = PAIR_SWEEP_CAP, structured: bool | None = None) -> ClassReport:
    """Eigenvalue monotonicity across the principal-submatrix lattice.

    Toeplitz Hessenberg input (auto-detected, override with `structured`)
    reduces to the chain of leading principal blocks: the spectrum of any
    principal submatrix is the union of leading-block spectra over its
    separated components.  General input sweeps covering pairs of the
    lattice, capped at n <= cap.
    """
    _require_square(a)
    if structured is None:
        structured = _is_structured(a)
    if structured:
        return _omega_structured(a)
    return _omega_brute(a, cap)


def _omega_structured(a: RatMatrix) -> ClassReport:
    n = a.rows
    polys = leading_charpolys(a)
    encl: list[RootEnclosure | None] = []
    for m, p in enumerate(polys, start=1):
        roots = sturm_isolate(p)
        if not roots:
            return ClassReport(
                "OMEGA",
                False,
                witness={"alpha": list(range(1, m + 1)), "reason": "no real eigenvalue"},
                n=n,
                details={"method": "toeplitz-hessenberg-reduction"},
            )
        encl.append(roots[0])
    for m in range(1, n):
        # need l(A_{m+1}) <= l(A_m)
        c = compare_roots(encl[m], polys[m], encl[m - 1], polys[m - 1])
        if c > 0:
            return ClassReport(
                "OMEGA",
                False,
                witness={
                    "alpha": list(range(1, m + 2)),
                    "beta": list(range(1, m + 1)),
                    "l_alpha": [frac_str(encl[m].lo), frac_str(encl[m].hi)],
                    "l_beta": [frac_str(encl[m - 1].lo), frac_str(encl[m - 1].hi)],
                },
                n=n,
                details={"method": "toeplitz-hessenberg-reduction"},
            )
    return ClassReport(
        "OMEGA", True, n=n, details={"method": "toeplitz-hessenberg-reduction"}
    )


def _omega_brute(a: RatMatrix, cap: int) -> ClassReport:
    n = a.rows
    if n > cap:
        raise SweepCapExceeded(f"monotonicity sweep capped at n <= {cap}, got {n}")
    ls: dict[tuple[int, ...], tuple[RootEnclosure, Polynomial]] = {}
    for subset in subsets_lex(n):
        idx = IndexSet(n, subset)
        p = charpoly(submatrix(a, idx, idx))
        roots = sturm_isolate(p)
        if not roots:
            return ClassReport(
                "OMEGA",
                False,
                witness={"alpha": list(subset), "reason": "no real eigenvalue"},
                n=n,
            )
        ls[subset] = (roots[0], p)
    # monotonicity over covering pairs implies the full lattice by transitivity
    for alpha in subsets_lex(n):
        if len(alpha) < 2:
            continue
        ea, pa = ls[alpha]
        for drop in alpha:
            beta = tuple(v for v in alpha if v != drop)
            eb, pb = ls[beta]
            if compare_roots(ea, pa, eb, pb) > 0:
                return ClassReport(
                    "OMEGA",
                    False,
                    witness={
                        "alpha": list(alpha),
                        "beta": list(beta),
                        "l_alpha": [frac_str(ea.lo), frac_str(ea.hi)],
                        "l_beta": [frac_str(eb.lo), frac_str(eb.hi)],
                    },
                    n=n,
                )
    return ClassReport("OMEGA", True, n=n)


def is_tau(a: RatMatrix, cap: int = PAIR_SWEEP_CAP, structured: bool | None = None) -> ClassReport:
    """Eigenvalue monotonicity plus a nonnegative least real eigenvalue.

    The sign condition is exact: the charpoly has no root in (-B, 0), with a
    root exactly at 0 still admissible.
    """
    omega = is_omega(a, cap=cap, structured=structured)
    if not omega.holds:
        return ClassReport(
            "TAU",
            False,
            witness={"failed_precondition": "OMEGA", **(omega.witness or {})},
            n=a.rows,
            details=omega.details,
        )
    p = charpoly(a)
    bound = cauchy_bound(p)
    negatives = count_real_roots(p, -bound, Fraction(0))
    if p(Fraction(0)) == 0:
        negatives -= 1
    if negatives > 0:
        e = sturm_isolate(p)[0]
        while e.hi >= 0:
            e = refine(e, p, e.width() / 2)
        return ClassReport(
            "TAU",
            False,
            witness={"l_value": [frac_str(e.lo), frac_str(e.hi)]},
            n=a.rows,
            details=omega.details,
        )
    return ClassReport("TAU", True, n=a.rows, details=omega.details)


def is_positive_stable(a: RatMatrix) -> ClassReport:
    """Exact decision that every eigenvalue has positive real part.

    The eigenvalues of A are the roots of its charpoly p; A is positive
    stable iff p(-x), sign-normalized, has all roots in the open left
    half-plane, which the exact Routh-Hurwitz decision settles.  Roots
    exactly on the imaginary axis report holds=False with a boundary flag.
    """
    _require_square(a)
    p = charpoly(a)
    reflected = p.compose_neg()
    if reflected.leading() < 0:
        reflected = -reflected
    verdict = routh_stable(reflected)
    if verdict == "stable":
        return ClassReport("POS_STABLE", True, n=a.rows)
    roots = complex_roots(p)
    worst = min(roots, key=lambda r: r.re)
    witness = {
        "eigenvalue_re": mp.nstr(worst.re, 25),
        "eigenvalue_im": mp.nstr(worst.im, 25),
    }
    return ClassReport(
        "POS_STABLE",
        False,
        witness=witness,
        n=a.rows,
        details={"boundary": verdict == "boundary"},
    )


def varga_wedge_check(a: RatMatrix, tol: float = 1e-12) -> ClassReport:
    """The wedge condition |arg(eig - l(A))| <= pi/2 - pi/n on the spectrum.

    l(A) is exact, refined below 2^-80 and used at extended precision;
    eigenvalues are numeric.  Eigenvalues within a tiny radius of l(A)
    (the wedge vertex, where the angle is ill-defined) count as angle 0.
    """
    _require_square(a)
    n = a.rows
    mre = min_real_eig(a)
    if not mre.finite:
        raise ValueError("wedge check needs a finite least real eigenvalue")
    e = refine(mre.enclosure, mre.poly, REFINE_WIDTH)
    roots = complex_roots(mre.poly)
    with mp.workdps(50):
        lval = (mp.mpf(e.lo.numerator) / e.lo.denominator + mp.mpf(e.hi.numerator) / e.hi.denominator) / 2
        bound = mp.pi / 2 - mp.pi / n
        max_angle = mp.mpf(0)
        worst = None
        for r in roots:
            d = mp.mpc(r.re - lval, r.im)
            angle = mp.mpf(0) if abs(d) <= VERTEX_EPS else abs(mp.arg(d))
            if angle > max_angle:
                max_angle = angle
                worst = r
        holds = max_angle <= bound + mp.mpf(tol)
        details = {
            "max_angle": mp.nstr(max_angle, 16),
            "bound": mp.nstr(bound, 16),
            "margin": mp.nstr(bound - max_angle, 16),
        }
        witness = None
        if not holds and worst is not None:
            witness = {
                "eigenvalue_re": mp.nstr(worst.re, 25),
                "eigenvalue_im": mp.nstr(worst.im, 25),
                "angle": mp.nstr(max_angle, 16),
            }
        return ClassReport("VARGA_WEDGE", holds, witness=witness, n=n, details=details)


def find_tau_parameter(k: int, m_max: int = 20) -> tuple[int, Fraction]:
    """Smallest m <= m_max with t = 2^-m certifying the tau property.

    Grows m until the chain of minimal positive roots is strictly decreasing
    (disjoint exact enclosures) and every member of order n <= 2k+2 passes
    is_tau.  No closed form for the admissible range of t is available, so
    the working exponent is found empirically and recorded.
    """
    for m in range(1, m_max + 1):
        t = Fraction(1, 2**m)
        try:
            chain = lambda_chain(k, t)
        except ChainFailure:
            continue
        if not chain.strictly_decreasing:
            continue
        if all(is_tau(build_A(FamilyParams(n, k, t))).holds for n in range(1, 2 * k + 3)):
            return m, t
    raise ValueError(f"no exponent m <= {m_max} certifies the tau property for k={k}")


def _require_square(a: RatMatrix):
    if not a.is_square:
        raise ValueError(f"square matrix required, got {a.rows}x{a.cols}")
