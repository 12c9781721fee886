"""Compiled inner loops for batched simulation."""
from __future__ import annotations

import math

import numba as nb
import numpy as np

# gate codes shared with statevector.compile_template
RX, RY, RZ, CRX, CRZ = 0, 1, 2, 3, 4


@nb.njit(cache=True)
def _apply(psi, code, target, control, theta):
    N = psi.shape[0]
    c = math.cos(0.5 * theta)
    s = math.sin(0.5 * theta)
    tbit = 1 << target
    if control < 0:
        # a dummy "control" on the target itself leaves the loop nest below
        # enumerating every index whose target bit is 0
        cbit = 0
        lobit = tbit
        hibit = tbit
    else:
        cbit = 1 << control
        lobit = min(tbit, cbit)
        hibit = max(tbit, cbit)
    diagonal = code == RZ or code == CRZ
    if code == RX or code == CRX:
        u00 = complex(c, 0.0)
        u01 = complex(0.0, -s)
        u10 = u01
    elif code == RY:
        u00 = complex(c, 0.0)
        u01 = complex(-s, 0.0)
        u10 = complex(s, 0.0)
    else:
        u00 = complex(c, -s)   # phase on |0>
        u01 = complex(c, s)    # phase on |1>
        u10 = 0j

    outer_step = 2 * hibit
    inner_step = 2 * lobit if hibit != lobit else outer_step
    if diagonal:
        for a in range(0, N, outer_step):
            for b in range(a, a + hibit, inner_step):
                for i0 in range(b, b + lobit):
                    i = i0 | cbit
                    psi[i] *= u00
                    psi[i | tbit] *= u01
        return
    for a in range(0, N, outer_step):
        for b in range(a, a + hibit, inner_step):
            for i0 in range(b, b + lobit):
                i = i0 | cbit
                j = i | tbit
                x = psi[i]
                y = psi[j]
                psi[i] = u00 * x + u01 * y
                psi[j] = u10 * x + u00 * y


@nb.njit(cache=True)
def simulate_batch(n, codes, targets, controls, pidx, angles):
    """Run one gate list from |0...0> for every row of ``angles``."""
    B = angles.shape[0]
    N = 1 << n
    out = np.empty((B, N), dtype=np.complex128)
    psi = np.empty(N, dtype=np.complex128)
    for r in range(B):
        psi[:] = 0.0
        psi[0] = 1.0
        for g in range(codes.shape[0]):
            _apply(psi, codes[g], targets[g], controls[g], angles[r, pidx[g]])
        out[r, :] = psi
    return out


@nb.njit(cache=True)
def mw_distance_sums(states, n):
    """Per row, the sum over qubits j of ``|u|^2 |v|^2 - |<u|v>|^2`` where u, v
    are the amplitudes with bit j equal to 0 and 1."""
    B, N = states.shape
    out = np.zeros(B)
    for r in range(B):
        acc = 0.0
        for j in range(n):
            bit = 1 << j
            uu = 0.0
            vv = 0.0
            re = 0.0
            im = 0.0
            for a in range(0, N, 2 * bit):
                for i in range(a, a + bit):
                    x = states[r, i]
                    y = states[r, i + bit]
                    uu += x.real * x.real + x.imag * x.imag
                    vv += y.real * y.real + y.imag * y.imag
                    # conj(x) * y
                    re += x.real * y.real + x.imag * y.imag
                    im += x.real * y.imag - x.imag * y.real
            acc += uu * vv - (re * re + im * im)
        out[r] = acc
    return out
