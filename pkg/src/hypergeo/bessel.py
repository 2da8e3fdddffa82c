"""Multivariate Bessel functions and the Jack polynomials behind them.

The series is indexed by partitions and built from Jack polynomials in
the C normalization, which is the one satisfying the binomial identity
sum_{|m|=k} C_m(x) = (x_1 + ... + x_q)^k.  Coefficient tables come from
the eigenvalue recurrence of the Laplace-Beltrami operator in the
monomial basis and are cached per (weight, alpha, rank).
"""

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import algebra, sampling
from .algebra import field_dim, normalize_field
from .hyper_bc import McEstimate


@dataclass(frozen=True)
class BesselIndex:
    """Index pair (mu, alpha) of a multivariate Bessel function."""

    mu: float
    alpha: float


@dataclass(frozen=True)
class SeriesResult:
    """A truncated series value with a geometric tail estimate."""

    value: complex
    truncation_degree: int
    tail_bound: float
    converged: bool


def bessel_index(field, p):
    """Bessel index attached to the matrix cone of parameter p."""
    d = field_dim(normalize_field(field))
    return BesselIndex(0.5 * p * d, 2.0 / d)


def partitions_of_weight(k, q):
    """Partitions of k into at most q parts, in descending lex order."""
    assert k >= 0 and q >= 1

    def rec(rem, cap, slots):
        if rem == 0:
            yield ()
            return
        if slots == 0:
            return
        lo = -(-rem // slots)
        for first in range(min(cap, rem), lo - 1, -1):
            for rest in rec(rem - first, first, slots - 1):
                yield (first,) + rest

    return list(rec(k, k, q))


def _conjugate(lam):
    if not lam:
        return ()
    return tuple(sum(1 for part in lam if part >= j)
                 for j in range(1, lam[0] + 1))


def _dominates(lam, mu):
    """Whether lam >= mu in the dominance order (equal weights assumed)."""
    a = b = 0
    for i in range(max(len(lam), len(mu))):
        a += lam[i] if i < len(lam) else 0
        b += mu[i] if i < len(mu) else 0
        if a < b:
            return False
    return True


def _lb_eigenvalue(lam, alpha, n):
    return 0.5 * alpha * sum(x * (x - 1) for x in lam) \
        + sum((n - i) * x for i, x in enumerate(lam, 1))


@lru_cache(maxsize=None)
def _jack_tables(weight, alpha, q):
    """Monomial expansions {lam: {mu: coeff}} of the Jack P at one weight.

    Coefficients solve u_mu = sum (mu_i - mu_j + 2r) u_nu / (d_lam - d_mu)
    where nu is mu with r units moved from slot j up to slot i < j.  The
    targets are processed in descending lex order, a linear extension of
    dominance, so every source coefficient is already known.
    """
    parts = partitions_of_weight(weight, q)
    tables = {}
    for idx, lam in enumerate(parts):
        d_lam = _lb_eigenvalue(lam, alpha, q)
        coeffs = {lam: 1.0}
        for mu in parts[idx + 1:]:
            if not _dominates(lam, mu):
                continue
            padded = mu + (0,) * (q - len(mu))
            total = 0.0
            for j in range(1, q):
                for r in range(1, padded[j] + 1):
                    for i in range(j):
                        nu = list(padded)
                        nu[i] += r
                        nu[j] -= r
                        nu = tuple(sorted(nu, reverse=True))
                        src = coeffs.get(tuple(x for x in nu if x))
                        if src:
                            total += (padded[i] - padded[j] + 2 * r) * src
            coeffs[mu] = total / (d_lam - _lb_eigenvalue(mu, alpha, q))
        tables[lam] = coeffs
    return tables


def _c_scale(lam, alpha):
    """Factor turning P_lam into C_lam: alpha^|lam| |lam|! / c'_lam."""
    weight = sum(lam)
    conj = _conjugate(lam)
    hooks = 1.0
    for i, part in enumerate(lam, 1):
        for j in range(1, part + 1):
            arm = part - j
            leg = conj[j - 1] - i
            hooks *= alpha * (arm + 1) + leg
    return alpha ** weight * math.factorial(weight) / hooks


def _monomial(mu, xi):
    q = len(xi)
    padded = mu + (0,) * (q - len(mu))
    total = 0.0
    for perm in set(itertools.permutations(padded)):
        total = total + np.prod(xi ** np.asarray(perm))
    return total


def jack_C(m, alpha, xi):
    """Jack polynomial C_m at the point xi (a length-q vector)."""
    m = tuple(int(x) for x in m)
    xi = np.asarray(xi)
    q = xi.shape[0]
    assert len(m) <= q, "partition has more parts than variables"
    if not m:
        return 1.0
    coeffs = _jack_tables(sum(m), float(alpha), q)[m]
    return _c_scale(m, alpha) * sum(c * _monomial(mu, xi)
                                    for mu, c in coeffs.items())


def gen_pochhammer(x, m, alpha):
    """Generalized Pochhammer symbol (x)_m^alpha."""
    out = 1.0
    for j, part in enumerate(m):
        for l in range(part):
            out = out * (x - j / alpha + l)
    return out


def bessel_series(idx, xi, eta, max_degree=30, rel_tol=1e-12):
    """Partition series of the Bessel function J_idx(xi, eta).

    Terms are summed shell by shell in the partition weight; summation
    stops once three consecutive shells fall below rel_tol relative to
    the running total.  The tail bound extrapolates the last shell
    geometrically from the observed shell ratios.
    """
    xi = np.atleast_1d(np.asarray(xi))
    eta = np.atleast_1d(np.asarray(eta))
    if xi.shape != eta.shape or xi.ndim != 1:
        raise ValueError("xi and eta must be vectors of a common length")
    q = xi.shape[0]
    ones = np.ones(q)
    shells = [1.0]
    total = 1.0
    quiet = 0
    degree = max_degree
    converged = False
    for k in range(1, max_degree + 1):
        s = 0.0
        for m in partitions_of_weight(k, q):
            poch = gen_pochhammer(idx.mu, m, idx.alpha)
            if poch == 0:
                raise ValueError(
                    "Pochhammer symbol (mu)_m vanishes at m=%s" % (m,))
            s = s + (-1.0) ** k * jack_C(m, idx.alpha, xi) \
                * jack_C(m, idx.alpha, eta) \
                / (poch * math.factorial(k) * jack_C(m, idx.alpha, ones))
        total = total + s
        shells.append(s)
        if abs(s) < rel_tol * max(1.0, abs(total)):
            quiet += 1
            if quiet == 3:
                degree = k
                converged = True
                break
        else:
            quiet = 0
    ratios = [abs(shells[j]) / abs(shells[j - 1])
              for j in range(max(1, len(shells) - 3), len(shells))
              if abs(shells[j - 1]) > 0]
    rho = min(max(ratios), 0.99) if ratios else 0.0
    last = abs(shells[-1])
    tail = last * rho / (1.0 - rho)
    return SeriesResult(total, degree, tail, converged)


def _phase_sums(field, q, p, lam, t, seed, shard, count):
    gen_b = sampling.shard_stream(seed, shard, sampling.ROLE_BALL).generator()
    if p == 2 * q - 1:
        w = sampling._mp_degenerate_batch(field, q, count, gen_b)
    else:
        w = sampling._mp_batch(field, q, p, count, gen_b)
    gen_u = sampling.shard_stream(seed, shard, sampling.ROLE_UNITARY).generator()
    u = sampling._haar_batch(field, q, count, gen_u)
    tt, ll = t, lam
    if field == "h":
        tt, ll = np.repeat(t, 2), np.repeat(lam, 2)
    tr = np.einsum("nij,nji->n", w * tt, u * ll)
    phase = tr.real if field != "h" else 0.5 * tr.real
    vals = np.exp(-1j * phase)
    return vals.sum(), float((np.abs(vals) ** 2).sum())


def bessel_phi_tilde(field, p, lam, t, mode="series", samples=100000,
                     max_degree=30, seed=0, workers=1, rel_tol=1e-12):
    """Bessel-Fourier transform phi-tilde of the cone with parameter p.

    mode "series" evaluates J_{pd/2}(lam^2/2, t^2/2) by the partition
    series and returns a SeriesResult.  mode "integral" averages the
    unitary-twisted phase exp(-i Re tr(w diag(t) u diag(lam))) over the
    ball and the unitary group and returns a McEstimate.
    """
    field = normalize_field(field)
    d = field_dim(field)
    t = np.asarray(t, float).reshape(-1)
    q = t.size
    if mode == "series":
        lam = np.asarray(lam, complex).reshape(-1)
        if lam.size != q:
            raise ValueError("lam must have length q")
        if np.all(lam.imag == 0.0):
            lam = lam.real
        idx = bessel_index(field, p)
        return bessel_series(idx, 0.5 * lam ** 2, 0.5 * t ** 2,
                             max_degree=max_degree, rel_tol=rel_tol)
    if mode != "integral":
        raise ValueError("mode must be 'series' or 'integral'")
    lam = np.asarray(lam)
    if np.iscomplexobj(lam):
        if np.any(lam.imag != 0.0):
            raise ValueError("integral mode needs a real lam")
        lam = lam.real
    lam = np.asarray(lam, float).reshape(-1)
    if lam.size != q:
        raise ValueError("lam must have length q")
    if p < 2 * q - 1:
        raise ValueError("integral mode needs p >= 2q - 1")
    if np.all(t == 0.0) or np.all(lam == 0.0):
        return McEstimate(1.0 + 0.0j, 0.0, samples, seed)

    def fn(i, n):
        return _phase_sums(field, q, p, lam, t, seed, i, n)

    (tot, tot2), _ = sampling.mc_run(fn, samples, workers=workers)
    mean = tot / samples
    var = max(tot2 / samples - abs(mean) ** 2, 0.0)
    return McEstimate(complex(mean), float(np.sqrt(var / samples)),
                      samples, seed)
