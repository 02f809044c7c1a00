"""Minimal dense complex-matrix kernel.

All operations are pure functions on 2-D ``numpy.ndarray`` inputs with
``complex128`` entries (real inputs are promoted).  Only the operations the
SINR formulas need are exposed: Hermitian transpose, products, guarded
inversion, trace, PSD determinants (linear and log domain), the Hermitian
square root, and orthonormal projection complements.
"""

import numpy as np

__all__ = [
    "conj_transpose",
    "matmul",
    "invert",
    "trace",
    "det_hermitian_psd",
    "logdet_hermitian_psd",
    "psd_sqrt",
    "orthonormal_projection_complement",
    "is_hermitian",
]

# Reject inversion when the 2-norm condition number exceeds this.
COND_LIMIT = 1e12

# Relative tolerance for Hermitian / PSD checks.
HERM_TOL = 1e-10


def _as_matrix(a):
    a = np.asarray(a)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got ndim={a.ndim}")
    if a.shape[0] < 1 or a.shape[1] < 1:
        raise ValueError(f"matrix dimensions must be >= 1, got {a.shape}")
    return a.astype(np.complex128, copy=False)


def _require_square(a, op):
    a = _as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"{op} requires a square matrix, got {a.shape}")
    return a


def is_hermitian(a, tol=HERM_TOL):
    """Return True if ``a`` equals its conjugate transpose within ``tol``."""
    a = _as_matrix(a)
    if a.shape[0] != a.shape[1]:
        return False
    scale = max(1.0, float(np.abs(a).max()))
    return bool(np.abs(a - a.conj().T).max() <= tol * scale)


def conj_transpose(a):
    """Hermitian (conjugate) transpose."""
    return _as_matrix(a).conj().T


def matmul(a, b):
    """Matrix product ``a @ b`` with an explicit dimension check."""
    a = _as_matrix(a)
    b = _as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise ValueError(
            f"dimension mismatch in matmul: {a.shape} @ {b.shape}"
        )
    return a @ b


def invert(a):
    """Inverse of a square matrix, rejecting near-singular inputs.

    Raises
    ------
    ValueError
        If the matrix is not square, or its 2-norm condition number
        exceeds ``COND_LIMIT`` (treated as singular).
    """
    a = _require_square(a, "invert")
    cond = np.linalg.cond(a)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise ValueError(
            f"matrix is singular or ill-conditioned (cond={cond:.3e})"
        )
    return np.linalg.inv(a)


def trace(a):
    """Sum of the diagonal entries of a square matrix."""
    a = _require_square(a, "trace")
    return complex(np.trace(a))


def _psd_eigvals(a, op, tol=HERM_TOL):
    a = _require_square(a, op)
    if not is_hermitian(a, tol):
        raise ValueError(f"{op} requires a Hermitian matrix")
    w = np.linalg.eigvalsh(a)
    scale = max(1.0, float(w[-1])) if w.size else 1.0
    if w[0] < -tol * scale:
        raise ValueError(
            f"{op} requires a PSD matrix (min eigenvalue {w[0]:.3e})"
        )
    return np.clip(w, 0.0, None)


def det_hermitian_psd(a):
    """Determinant of a Hermitian PSD matrix (product of eigenvalues).

    Always real and non-negative.  Use :func:`logdet_hermitian_psd` when
    the result may under- or overflow.
    """
    return float(np.prod(_psd_eigvals(a, "det_hermitian_psd")))


def logdet_hermitian_psd(a):
    """Log-determinant of a Hermitian PSD matrix.

    Returns ``-inf`` for a singular PSD matrix.
    """
    w = _psd_eigvals(a, "logdet_hermitian_psd")
    if np.any(w == 0.0):
        return float("-inf")
    return float(np.sum(np.log(w)))


def psd_sqrt(a):
    """Hermitian square root of a Hermitian PSD matrix.

    The result ``S`` is Hermitian PSD with ``S @ S == a`` (within
    numerical tolerance) and commutes with ``a``.
    """
    a = _require_square(a, "psd_sqrt")
    if not is_hermitian(a):
        raise ValueError("psd_sqrt requires a Hermitian matrix")
    w, v = np.linalg.eigh(a)
    scale = max(1.0, float(w[-1])) if w.size else 1.0
    if w[0] < -HERM_TOL * scale:
        raise ValueError(
            f"psd_sqrt requires a PSD matrix (min eigenvalue {w[0]:.3e})"
        )
    s = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    # Re-symmetrize to keep round-off from breaking downstream Hermitian checks.
    return 0.5 * (s + s.conj().T)


def orthonormal_projection_complement(a):
    """Projector onto the orthogonal complement of the column span of ``a``.

    The columns of ``a`` are orthonormalized internally (QR), so the input
    need not be orthonormal, only full column rank.  The result ``P``
    satisfies ``P == P^H``, ``P @ P == P``, ``P @ a == 0`` and
    ``trace(P) == rows - cols``.

    Raises
    ------
    ValueError
        If ``a`` has more columns than rows or is column-rank deficient.
    """
    a = _as_matrix(a)
    n, m = a.shape
    if m > n:
        raise ValueError(f"cannot project out {m} directions in dimension {n}")
    q, r = np.linalg.qr(a)
    diag = np.abs(np.diag(r))
    tol = max(n, m) * np.finfo(float).eps * max(1.0, float(np.abs(a).max()))
    if np.any(diag <= tol):
        raise ValueError("input is column-rank deficient")
    p = np.eye(n, dtype=np.complex128) - q @ q.conj().T
    return 0.5 * (p + p.conj().T)
