"""Hot inner loops, compiled with numba when available.

Every kernel has two implementations with identical signatures:

* ``<name>_numba``: an ``@njit`` loop nest;
* ``<name>_numpy``: a vectorized numpy path (or, for the Jacobi solver, the
  uncompiled body of the same function).

The public name ``<name>`` is bound to one of them at import time.  Set
``EXOBASIS_DISABLE_NUMBA=1`` to force the numpy path; it is also used when
numba cannot be imported.
"""

from __future__ import annotations

import os

import numpy as np

_FLAG = os.environ.get("EXOBASIS_DISABLE_NUMBA", "").strip().lower()

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and _FLAG not in {"1", "true", "yes", "on"}
BACKEND = "numba" if USE_NUMBA else "numpy"


def _njit(fn):
    if not HAVE_NUMBA:
        return fn
    return numba.njit(cache=True)(fn)


TWO_PI = 2.0 * np.pi


# ---------------------------------------------------------------------------
# first certificate (n, w) whose residues are distinct on every class


@_njit
def _first_admissible_numba(points, class_ptr, cands, n):
    n_cls = class_ptr.shape[0] - 1
    d = points.shape[1]
    seen = np.zeros(n, dtype=np.int64)
    stamp = 0
    for c in range(cands.shape[0]):
        ok = True
        for k in range(n_cls):
            a = class_ptr[k]
            b = class_ptr[k + 1]
            if b - a < 2:
                continue
            if b - a > n:
                ok = False
                break
            stamp += 1
            for p in range(a, b):
                s = 0
                for i in range(d):
                    s += points[p, i] * cands[c, i]
                r = s % n
                if r < 0:
                    r += n
                if seen[r] == stamp:
                    ok = False
                    break
                seen[r] = stamp
            if not ok:
                break
        if ok:
            return c
    return -1


def _first_admissible_numpy(points, class_ptr, cands, n):
    if cands.shape[0] == 0:
        return -1
    residues = np.mod(points @ cands.T, n)
    valid = np.ones(cands.shape[0], dtype=bool)
    for k in range(class_ptr.shape[0] - 1):
        a, b = class_ptr[k], class_ptr[k + 1]
        if b - a < 2:
            continue
        block = np.sort(residues[a:b], axis=0)
        valid &= ~np.any(block[1:] == block[:-1], axis=0)
    hits = np.flatnonzero(valid)
    return int(hits[0]) if hits.size else -1


# ---------------------------------------------------------------------------
# Kronecker translate scan: smallest |m| with the phase pair within eps of target


@_njit
def _kronecker_scan_numba(x1, x2, b1, b2, eps, m_max):
    eps2 = eps * eps
    for t in range(m_max + 1):
        for sgn in (1, -1):
            if t == 0 and sgn == -1:
                continue
            m = sgn * t
            p1 = x1 * m
            p2 = x2 * m
            p1 -= np.floor(p1)
            p2 -= np.floor(p2)
            d2 = 4.0 - 2.0 * np.cos(TWO_PI * (p1 - b1)) - 2.0 * np.cos(TWO_PI * (p2 - b2))
            if d2 < eps2:
                return True, m
    return False, 0


def _kronecker_scan_numpy(x1, x2, b1, b2, eps, m_max, chunk=1 << 16):
    eps2 = eps * eps
    start = 0
    while start <= m_max:
        t = np.arange(start, min(start + chunk, m_max + 1), dtype=np.int64)
        # interleave +t, -t so the first hit is the smallest |m|, positive first
        m = np.empty(2 * t.size, dtype=np.int64)
        m[0::2] = t
        m[1::2] = -t
        if start == 0:
            m = m[np.r_[0, 2 : m.size]]
        p1 = x1 * m.astype(np.float64)
        p2 = x2 * m.astype(np.float64)
        p1 -= np.floor(p1)
        p2 -= np.floor(p2)
        d2 = 4.0 - 2.0 * np.cos(TWO_PI * (p1 - b1)) - 2.0 * np.cos(TWO_PI * (p2 - b2))
        hits = np.flatnonzero(d2 < eps2)
        if hits.size:
            return True, int(m[hits[0]])
        start += chunk
    return False, 0


# ---------------------------------------------------------------------------
# cyclic Jacobi eigenvalues of a complex Hermitian matrix


def _jacobi_eigvalsh_body(g, tol, max_sweeps):
    a = g.copy()
    n = a.shape[0]
    scale = 0.0
    for i in range(n):
        for j in range(n):
            scale += abs(a[i, j]) ** 2
    scale = np.sqrt(scale)
    if scale == 0.0:
        return np.zeros(n)
    for _ in range(max_sweeps):
        off = 0.0
        for p in range(n):
            for q in range(p + 1, n):
                off += abs(a[p, q]) ** 2
        if np.sqrt(off) <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= 1e-300:
                    continue
                phase = apq / mag
                app = a[p, p].real
                aqq = a[q, q].real
                tau = (aqq - app) / (2.0 * mag)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # J = diag(1, conj(phase)) @ [[c, s], [-s, c]] on the (p, q) plane
                jpp = c + 0j
                jpq = s + 0j
                jqp = -s * np.conj(phase)
                jqq = c * np.conj(phase)
                colp = a[:, p].copy()
                colq = a[:, q].copy()
                a[:, p] = colp * jpp + colq * jqp
                a[:, q] = colp * jpq + colq * jqq
                rowp = a[p, :].copy()
                rowq = a[q, :].copy()
                a[p, :] = np.conj(jpp) * rowp + np.conj(jqp) * rowq
                a[q, :] = np.conj(jpq) * rowp + np.conj(jqq) * rowq
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
    out = np.empty(n)
    for i in range(n):
        out[i] = a[i, i].real
    return np.sort(out)


_jacobi_eigvalsh_compiled = _njit(_jacobi_eigvalsh_body)
_jacobi_eigvalsh_numpy = _jacobi_eigvalsh_body

# Below this size the interpreted sweep finishes in milliseconds, well under
# the one-off compile cost, so only large matrices go through numba.
JACOBI_JIT_MIN = 33


def _jacobi_eigvalsh_numba(g, tol, max_sweeps):
    if g.shape[0] < JACOBI_JIT_MIN:
        return _jacobi_eigvalsh_body(g, tol, max_sweeps)
    return _jacobi_eigvalsh_compiled(g, tol, max_sweeps)


# ---------------------------------------------------------------------------
# vector-valued exponential sums: out[i, c] = sum_k coeffs[k, c] e(freqs[k] . nodes[i])


@_njit
def _exp_sums_numba(nodes, freqs, coeffs):
    n_nodes, d = nodes.shape
    n_freq, n_out = coeffs.shape
    out = np.zeros((n_nodes, n_out), dtype=np.complex128)
    for i in range(n_nodes):
        for k in range(n_freq):
            ph = 0.0
            for a in range(d):
                ph += freqs[k, a] * nodes[i, a]
            e = np.cos(TWO_PI * ph) + 1j * np.sin(TWO_PI * ph)
            for c in range(n_out):
                out[i, c] += coeffs[k, c] * e
    return out


def _exp_sums_numpy(nodes, freqs, coeffs):
    return np.exp(1j * TWO_PI * (nodes @ freqs.T)) @ coeffs


if USE_NUMBA:
    first_admissible = _first_admissible_numba
    kronecker_scan = _kronecker_scan_numba
    jacobi_eigvalsh = _jacobi_eigvalsh_numba
    exp_sums = _exp_sums_numba
else:
    first_admissible = _first_admissible_numpy
    kronecker_scan = _kronecker_scan_numpy
    jacobi_eigvalsh = _jacobi_eigvalsh_numpy
    exp_sums = _exp_sums_numpy

IMPLEMENTATIONS = {
    "numba": {
        "first_admissible": _first_admissible_numba,
        "kronecker_scan": _kronecker_scan_numba,
        "jacobi_eigvalsh": _jacobi_eigvalsh_compiled,
        "exp_sums": _exp_sums_numba,
    },
    "numpy": {
        "first_admissible": _first_admissible_numpy,
        "kronecker_scan": _kronecker_scan_numpy,
        "jacobi_eigvalsh": _jacobi_eigvalsh_numpy,
        "exp_sums": _exp_sums_numpy,
    },
}
