"""Spherical functions psi_lam of the compact-quotient A-type family.

psi is the Haar-unitary average of the power function of u* cosh^2(t) u.
At q = 1 the average is trivial and psi_lam(t) = (cosh t)^(i lam) holds
exactly, so that case bypasses the sampler.
"""

import numpy as np

from . import algebra, sampling
from .algebra import field_dim, normalize_field
from .hyper_bc import McEstimate, _nu_matrix, _shape_estimate


def rho_a(d, q):
    """Half-sum vector rho_i = d(q + 1 - 2i)/2."""
    i = np.arange(1, q + 1)
    return 0.5 * d * (q + 1 - 2 * i)


def _psi_sums(field, q, nu_mat, t, seed, shard, count):
    gen = sampling.shard_stream(seed, shard, sampling.ROLE_UNITARY).generator()
    u = sampling._haar_batch(field, q, count, gen)
    tt = np.repeat(t, 2) if field == "h" else t
    m = (algebra._ct(u) * np.cosh(tt) ** 2) @ u
    m = 0.5 * (m + algebra._ct(m))
    logs = algebra._log_minors_embedded(m, field)
    dlog = np.diff(logs, axis=-1, prepend=0.0)
    vals = np.exp(dlog @ nu_mat)
    return vals.sum(axis=0), (np.abs(vals) ** 2).sum(axis=0)


def eval_psi(field, lam, t, samples=100000, seed=0, workers=1, _force_mc=False):
    """Monte-Carlo value of psi_lam(t); exact at q = 1.

    lam is a length-q complex vector (or batch of shape (..., q)) in
    the plain convention, so the power-function exponent is i lam / 2.
    """
    field = normalize_field(field)
    t = np.asarray(t, float).reshape(-1)
    q = t.size
    lam = np.asarray(lam, dtype=complex)
    if lam.shape == () and q == 1:
        lam = lam.reshape(1)
    if lam.shape[-1] != q:
        raise ValueError("lam must have length q along its last axis")
    if q == 1 and not _force_mc:
        val = np.cosh(t[0]) ** (1j * lam[..., 0])
        if lam.shape == (1,):
            return McEstimate(complex(val), 0.0, 0, seed)
        return McEstimate(val, np.zeros(lam.shape[:-1]), 0, seed)
    nu_mat, batch = _nu_matrix(lam, q, rho_a(field_dim(field), q))
    if np.all(t == 0.0):
        mean = np.ones(nu_mat.shape[1], dtype=complex)
        err = np.zeros(nu_mat.shape[1])
    else:
        def fn(i, n):
            return _psi_sums(field, q, nu_mat, t, seed, i, n)
        (tot, tot2), _ = sampling.mc_run(fn, samples, workers=workers)
        mean = tot / samples
        err = np.sqrt(np.maximum(tot2 / samples - np.abs(mean) ** 2, 0.0)
                      / samples)
    return _shape_estimate(mean, err, batch, samples, seed)
