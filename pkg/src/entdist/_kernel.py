"""Compiled objective for the per-qubit inner minimization.

The rotated mixture is written as ``rho_U = W W^dagger`` where column ``a`` of
``W`` is ``sqrt(weight_a) (U_{owner(a)} x I) e_a``. Everything the objective
needs is a function of the 2x2 blocks

    M_ab = U_b K_ab U_a^dagger,   K_ab = Tr_rest |e_b><e_a|   (on qubit mu)

because ``(W^dagger W)_ab = tr M_ab`` and ``(W^dagger s_i W)_ab = tr(s_i M_ab)``:

    tr(rho_U^2) = sum_ab |tr M_ab|^2,    A_ij = Re sum_ab tr(s_i M_ab) conj(tr(s_j M_ab)).
"""

from __future__ import annotations

import numba
import numpy as np


def pair_blocks(columns: np.ndarray, mu: int, m: int) -> np.ndarray:
    """``K[a, b] = Tr_rest |c_b><c_a|`` restricted to qubit ``mu``.

    ``columns`` has shape ``(n, 2**m)`` and already carries the sqrt weights.
    """
    n = columns.shape[0]
    t = columns.reshape((n,) + (2,) * m)
    t = np.moveaxis(t, 1 + mu, 1).reshape(n, 2, -1)
    return np.ascontiguousarray(np.einsum("bsk,atk->abst", t, t.conj()), dtype=np.complex128)


@numba.njit(cache=True)
def _su2(a, b, c):
    h_b = 0.5 * b
    ep = np.exp(-0.5j * (a + c))
    em = np.exp(-0.5j * (a - c))
    cb = np.cos(h_b)
    sb = np.sin(h_b)
    return ep * cb, -em * sb, np.conj(em) * sb, np.conj(ep) * cb


@numba.njit(cache=True)
def rotated_qcd(x, k, owner):
    """``tr(rho_U^2) - lambda_max(A^mu(rho_U))`` for ZYZ angles ``x``."""
    n_members = x.shape[0] // 3
    u = np.empty((n_members, 4), dtype=np.complex128)
    for j in range(n_members):
        u00, u01, u10, u11 = _su2(x[3 * j], x[3 * j + 1], x[3 * j + 2])
        u[j, 0] = u00
        u[j, 1] = u01
        u[j, 2] = u10
        u[j, 3] = u11
    n = k.shape[0]
    pur = 0.0
    a = np.zeros((3, 3))
    for ia in range(n):
        ua = u[owner[ia]]
        # U_a^dagger entries
        d00 = np.conj(ua[0])
        d01 = np.conj(ua[2])
        d10 = np.conj(ua[1])
        d11 = np.conj(ua[3])
        for ib in range(n):
            ub = u[owner[ib]]
            kk = k[ia, ib]
            # T = U_b K
            t00 = ub[0] * kk[0, 0] + ub[1] * kk[1, 0]
            t01 = ub[0] * kk[0, 1] + ub[1] * kk[1, 1]
            t10 = ub[2] * kk[0, 0] + ub[3] * kk[1, 0]
            t11 = ub[2] * kk[0, 1] + ub[3] * kk[1, 1]
            # M = T U_a^dagger
            m00 = t00 * d00 + t01 * d10
            m01 = t00 * d01 + t01 * d11
            m10 = t10 * d00 + t11 * d10
            m11 = t10 * d01 + t11 * d11
            g = m00 + m11
            pur += g.real * g.real + g.imag * g.imag
            vx = m01 + m10
            vy = 1j * (m01 - m10)
            vz = m00 - m11
            a[0, 0] += vx.real * vx.real + vx.imag * vx.imag
            a[1, 1] += vy.real * vy.real + vy.imag * vy.imag
            a[2, 2] += vz.real * vz.real + vz.imag * vz.imag
            a[0, 1] += (vx * np.conj(vy)).real
            a[0, 2] += (vx * np.conj(vz)).real
            a[1, 2] += (vy * np.conj(vz)).real
    a[1, 0] = a[0, 1]
    a[2, 0] = a[0, 2]
    a[2, 1] = a[1, 2]
    return pur - np.linalg.eigvalsh(a)[2]
