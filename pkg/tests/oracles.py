"""Independent reference implementations used only to cross-check results."""

from __future__ import annotations

import numpy as np


def jacobi_eigh(h: np.ndarray, tol: float = 1e-13, max_sweeps: int = 60):
    """Cyclic Jacobi eigensolver for Hermitian matrices.

    Deliberately independent of LAPACK: plane rotations only.  Returns
    eigenvalues ascending and the accumulated unitary.
    """
    a = np.array(h, dtype=complex)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.abs(a - np.diag(np.diag(a))) ** 2))
        if off < tol * max(np.linalg.norm(a), 1.0):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) < 1e-300:
                    continue
                phase = apq / abs(apq)
                tau = (a[q, q].real - a[p, p].real) / (2.0 * abs(apq))
                t = np.sign(tau) / (abs(tau) + np.sqrt(1.0 + tau * tau)) if tau != 0 else 1.0
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                j = np.eye(n, dtype=complex)
                j[p, p] = c
                j[q, q] = c
                j[p, q] = s * phase
                j[q, p] = -s * np.conj(phase)
                a = j.conj().T @ a @ j
                v = v @ j
    w = np.diag(a).real
    order = np.argsort(w)
    return w[order], v[:, order]


def jacobi_singular_values(m: np.ndarray) -> np.ndarray:
    """Singular values via the Jacobi eigensolver applied to m^† m."""
    w, _ = jacobi_eigh(m.conj().T @ m)
    return np.sqrt(np.clip(w, 0.0, None))[::-1]


def partial_trace_indexsum(m: np.ndarray, da: int, db: int, keep: str) -> np.ndarray:
    """Partial trace by explicit index loops."""
    if keep == "A":
        out = np.zeros((da, da), dtype=complex)
        for i in range(da):
            for j in range(da):
                out[i, j] = sum(m[i * db + b, j * db + b] for b in range(db))
    else:
        out = np.zeros((db, db), dtype=complex)
        for i in range(db):
            for j in range(db):
                out[i, j] = sum(m[a * db + i, a * db + j] for a in range(da))
    return out


def vn_entropy_scalar(p) -> float:
    """Shannon entropy of a probability vector, natural log."""
    import math

    return -sum(x * math.log(x) for x in p if x > 0)
