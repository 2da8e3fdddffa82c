"""Evaluators for the matrix-cone hypergeometric functions phi_lambda^p.

phi is the mean of a power function of g_t(u, w) over a Haar unitary u
and a matrix-ball draw w, with spectral exponent (i lam - rho)/2.  The
module also provides the half-sum vectors, the normalized c-function,
the deterministic rank-one quadrature, the boundary evaluator at
p = 2q - 1, and the polynomial special values.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import loggamma, roots_jacobi

from . import algebra, sampling
from .algebra import field_dim, normalize_field


@dataclass(frozen=True)
class McEstimate:
    """A Monte-Carlo value with its standard error and provenance."""

    value: object
    stderr: object
    samples: int
    seed: int


class PoleError(ValueError):
    """A Gamma factor of the c-function hit a nonpositive integer."""

    def __init__(self, root, argument):
        self.root = root
        self.argument = argument
        super().__init__(
            "c-function pole at root %s (Gamma argument %s)" % (root, argument)
        )


def multiplicity_bc(p, d, q):
    """Multiplicity triple (k1, k2, k3) of the p-series."""
    return (0.5 * d * (p - q), 0.5 * (d - 1), 0.5 * d)


def rho_bc(p, d, q):
    """Half-sum vector rho_i = d(p + q + 2 - 2i)/2 - 1."""
    i = np.arange(1, q + 1)
    return 0.5 * d * (p + q + 2 - 2 * i) - 1.0


def rho_k(k, q):
    """Half-sum vector for a general multiplicity triple."""
    k1, k2, k3 = k
    i = np.arange(1, q + 1)
    return k1 + 2.0 * k2 + 2.0 * k3 * (q - i)


def rho_shift(lam, rho):
    """Convert a rho-shifted spectral parameter to the plain convention.

    Evaluating phi at rho_shift(lam, rho) gives the function written
    phi_{lam - i rho} in the shifted convention.
    """
    return np.asarray(lam, complex) - 1j * np.asarray(rho, float)


def _c_factors(lam, k, q):
    """(numerator, denominator, root label) triples of the Gamma product.

    Factors whose multiplicity vanishes are omitted entirely, which
    implements the convention that their Gamma ratios collapse to 1.
    """
    k1, k2, k3 = (float(x) for x in k)
    lam = np.asarray(lam, complex).reshape(-1)
    assert lam.size == q
    out = []
    for i in range(q):
        li = lam[i]
        if k1 != 0.0:
            out.append((li, li + k1, "2e_%d" % (i + 1,)))
        if k2 != 0.0:
            out.append(
                (0.5 * li + 0.5 * k1, 0.5 * li + 0.5 * k1 + k2, "4e_%d" % (i + 1,))
            )
        if k3 != 0.0:
            for j in range(i + 1, q):
                lj = lam[j]
                half = 0.5 * (li - lj)
                out.append((half, half + k3, "2e_%d-2e_%d" % (i + 1, j + 1)))
                half = 0.5 * (li + lj)
                out.append((half, half + k3, "2e_%d+2e_%d" % (i + 1, j + 1)))
    return out


def _nonpositive_integer(z):
    z = complex(z)
    if abs(z.imag) > 1e-12:
        return False
    r = round(z.real)
    return r <= 0 and abs(z.real - r) < 1e-12


def c_function(lam, k, q):
    """Normalized c-function: the Gamma product over positive roots of the
    doubled BC system, divided by its value at rho_k(k).

    At lam = rho_k(k) the two products cancel factor by factor, so the
    value is exactly 1.  A numerator pole raises PoleError carrying the
    offending root; a denominator pole is a legitimate zero.
    """
    facs = _c_factors(lam, k, q)
    ref = _c_factors(rho_k(k, q), k, q)
    for num, _den, root in facs:
        if _nonpositive_integer(num):
            raise PoleError(root, num)
    for rnum, rden, root in ref:
        if _nonpositive_integer(rnum) or _nonpositive_integer(rden):
            raise PoleError(root, rnum)
    for num, den, _root in facs:
        if _nonpositive_integer(den):
            return 0.0 + 0.0j
    total = 0.0 + 0.0j
    for (num, den, _), (rnum, rden, _) in zip(facs, ref):
        total += loggamma(num) - loggamma(den)
        total -= loggamma(rnum) - loggamma(rden)
    return complex(np.exp(total))


def _check_chamber(t):
    if np.any(np.diff(t) > 1e-12) or (t.size and t[-1] < -1e-12):
        raise ValueError("t must lie in the chamber t1 >= ... >= tq >= 0")


def _nu_matrix(lam, q, rho):
    """Spectral exponents (i lam - rho)/2 as a (q, batch) matrix."""
    lam = np.asarray(lam, dtype=complex)
    if lam.shape == () and q == 1:
        lam = lam.reshape(1)
    if lam.shape[-1] != q:
        raise ValueError("lam must have length q along its last axis")
    nu = 0.5 * (1j * lam - rho)
    return nu.reshape(-1, q).T, lam.shape[:-1]


def _integrand_sums(field, q, nu_mat, t, seed, shard, count, p, degenerate, variant):
    """Per-shard sums of the integrand and of its squared modulus."""
    gen_b = sampling.shard_stream(seed, shard, sampling.ROLE_BALL).generator()
    if degenerate:
        w = sampling._mp_degenerate_batch(field, q, count, gen_b)
    else:
        w = sampling._mp_batch(field, q, p, count, gen_b)
    if q > 1:
        gen_u = sampling.shard_stream(seed, shard, sampling.ROLE_UNITARY).generator()
        u = sampling._haar_batch(field, q, count, gen_u)
    else:
        u = None
    g = algebra._build_g_embedded(t, u, w, field, variant)
    logs = algebra._log_minors_embedded(g, field)
    dlog = np.diff(logs, axis=-1, prepend=0.0)
    vals = np.exp(dlog @ nu_mat)
    return vals.sum(axis=0), (np.abs(vals) ** 2).sum(axis=0)


def _mc_phi(field, q, nu_mat, t, samples, seed, workers, p=None, degenerate=False,
            variant="g", keep_parts=False):
    """Mean and standard error of the power-function integrand.

    At t = 0 the integrand is identically 1, so the exact constant is
    returned without consuming any random stream.
    """
    m = nu_mat.shape[1]
    if np.all(t == 0.0):
        ones = np.ones(m, dtype=complex)
        return ones, np.zeros(m), None
    def fn(i, n):
        return _integrand_sums(
            field, q, nu_mat, t, seed, i, n, p, degenerate, variant
        )
    (tot, tot2), parts = sampling.mc_run(fn, samples, workers=workers,
                                         keep_parts=keep_parts)
    mean = tot / samples
    var = np.maximum(tot2 / samples - np.abs(mean) ** 2, 0.0)
    return mean, np.sqrt(var / samples), parts


def _shape_estimate(mean, err, batch, samples, seed):
    if batch == ():
        return McEstimate(complex(mean[0]), float(err[0]), samples, seed)
    return McEstimate(mean.reshape(batch), err.reshape(batch), samples, seed)


def eval_phi_bc(field, p, lam, t, samples=100000, seed=0, variant="g", workers=1):
    """Monte-Carlo value of phi_lam^p(t) for p > 2q - 1.

    lam is a length-q complex vector in the plain spectral convention,
    or a batch of shape (..., q); the whole batch shares every random
    draw, which is what makes common-random-number comparisons work.
    """
    field = normalize_field(field)
    t = np.asarray(t, float).reshape(-1)
    q = t.size
    _check_chamber(t)
    if not p > 2 * q - 1:
        raise ValueError("eval_phi_bc needs p > 2q - 1")
    if variant not in ("g", "g-tilde"):
        raise ValueError("variant must be 'g' or 'g-tilde'")
    nu_mat, batch = _nu_matrix(lam, q, rho_bc(p, field_dim(field), q))
    mean, err, _ = _mc_phi(field, q, nu_mat, t, samples, seed, workers,
                           p=p, variant=variant)
    return _shape_estimate(mean, err, batch, samples, seed)


def eval_phi_bc_degenerate(field, q, lam, t, samples=100000, seed=0, workers=1):
    """Monte-Carlo value of phi_lam at the boundary parameter p = 2q - 1."""
    field = normalize_field(field)
    t = np.asarray(t, float).reshape(-1)
    assert t.size == q, "t must have length q"
    nu_mat, batch = _nu_matrix(lam, q, rho_bc(2 * q - 1, field_dim(field), q))
    mean, err, _ = _mc_phi(field, q, nu_mat, t, samples, seed, workers,
                           degenerate=True)
    return _shape_estimate(mean, err, batch, samples, seed)


def eval_phi_bc_quadrature_q1(p, lam, t, nodes=256, field="r"):
    """Deterministic rank-one value of phi over the reals.

    Gauss quadrature with weight (1 - x^2)^((p-3)/2) of the integrand
    (cosh t + x sinh t)^(i lam - rho), rho = (p - 1)/2.  Weights are
    normalized by their total mass, which encodes the density constant.
    lam and t broadcast together; scalars give a complex scalar.
    """
    if normalize_field(field) != "r":
        raise ValueError("the quadrature path supports the real field only")
    if nodes < 8:
        raise ValueError("nodes must be at least 8")
    if not p > 1:
        raise ValueError("the rank-one quadrature needs p > 1")
    x, wts = roots_jacobi(nodes, 0.5 * (p - 3.0), 0.5 * (p - 3.0))
    wts = wts / wts.sum()
    lam = np.asarray(lam, dtype=complex)
    t = np.asarray(t, float)
    lam, t = np.broadcast_arrays(lam, t)
    nu = 1j * lam - 0.5 * (p - 1.0)
    logs = np.log(np.cosh(t)[..., None] + np.sinh(t)[..., None] * x)
    vals = np.exp(nu[..., None] * logs) @ wts
    vals = np.where(t == 0.0, 1.0 + 0.0j, vals)
    return vals if vals.shape else complex(vals)


def eval_ho_polynomial(field, p, mu, t, samples=100000, seed=0, workers=1):
    """Polynomial special value at the even dominant weight mu.

    The spectral point lam = -i(mu + rho) makes the integrand exponent
    mu/2; dividing the integral by c_function(mu + rho_k, k_p) fixes the
    normalization through the c-function identity itself.
    """
    field = normalize_field(field)
    d = field_dim(field)
    t = np.asarray(t, float).reshape(-1)
    q = t.size
    mu = np.asarray(mu)
    if mu.shape != (q,) or np.any(mu != np.floor(mu)) or np.any(mu % 2 != 0) \
            or np.any(np.diff(mu) > 0) or np.any(mu < 0):
        raise ValueError("mu must be a weakly decreasing vector of even "
                         "nonnegative integers of length q")
    if not p > 2 * q - 1:
        raise ValueError("eval_ho_polynomial needs p > 2q - 1")
    k = multiplicity_bc(p, d, q)
    norm = c_function(mu + rho_k(k, q), k, q)
    nu_mat = 0.5 * mu.astype(complex).reshape(q, 1)
    mean, err, _ = _mc_phi(field, q, nu_mat, t, samples, seed, workers, p=p)
    return McEstimate(complex(mean[0]) / norm, float(err[0]) / abs(norm),
                      samples, seed)
