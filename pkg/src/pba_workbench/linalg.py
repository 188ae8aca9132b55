"""Matrix primitives used throughout the belief machinery.

Conventions: all computation is 64-bit floating point; tolerances are
relative to the scale of the matrix at hand. Matrices assembled from
elicited triangles may carry tiny asymmetries, so symmetric inputs are
folded to (M + M')/2 before use, with a warning when the asymmetry is
larger than rounding noise.
"""

from __future__ import annotations

import warnings

import numpy as np

# Singular values below RANK_TOL * sigma_max are treated as exact zeros.
RANK_TOL = 1e-10
# Relative asymmetry above SYM_TOL triggers a warning before symmetrizing.
SYM_TOL = 1e-9
# Eigenvalue floor: lambda_min >= -PSD_TOL * lambda_max counts as PSD.
PSD_TOL = 1e-8


def as_matrix(m, name: str = "matrix") -> np.ndarray:
    """Coerce to a finite 2-d float array, raising InvalidMatrix otherwise."""
    from .errors import InvalidMatrix

    a = np.asarray(m, dtype=float)
    if a.ndim != 2:
        raise InvalidMatrix(f"{name} must be 2-dimensional, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidMatrix(f"{name} contains non-finite entries")
    return a


def symmetrize(m, name: str = "matrix", tol: float = SYM_TOL, warn: bool = True) -> np.ndarray:
    """Return (M + M')/2, warning if the asymmetry exceeds tol * max|entry|.

    Internal call sites that fold rounding noise out of computed results
    pass ``warn=False``; the warning is meant for elicited inputs.
    """
    a = as_matrix(m, name)
    if a.shape[0] != a.shape[1]:
        from .errors import ShapeError

        raise ShapeError(f"{name} must be square, got shape {a.shape}")
    scale = np.abs(a).max() if a.size else 0.0
    asym = np.abs(a - a.T).max() if a.size else 0.0
    if warn and scale > 0 and asym > tol * scale:
        warnings.warn(
            f"{name} asymmetry {asym:.3e} exceeds tolerance {tol * scale:.3e}; symmetrizing",
            stacklevel=2,
        )
    return (a + a.T) / 2.0


def pseudo_inverse(m, rank_tol: float = RANK_TOL) -> np.ndarray:
    """Moore-Penrose generalised inverse via SVD.

    Singular values below ``rank_tol * sigma_max`` are treated as zero, so
    rank-deficient matrices are handled without amplifying noise. The output
    satisfies the four Moore-Penrose identities to relative tolerance ~1e-8
    for reasonably conditioned inputs.
    """
    a = as_matrix(m, "matrix")
    if a.size == 0:
        return a.T.copy()
    u, s, vt = np.linalg.svd(a, full_matrices=False)
    cutoff = rank_tol * (s[0] if s.size else 0.0)
    inv = np.where(s > cutoff, np.divide(1.0, s, where=s > 0), 0.0)
    return (vt.T * inv) @ u.T


def eig_range(m) -> tuple[float, float]:
    """(smallest, largest) eigenvalue of a symmetric matrix."""
    w = np.linalg.eigvalsh(symmetrize(m))
    return float(w[0]), float(w[-1])


def psd_margin(m) -> float:
    """Signed PSD margin: lambda_min / max(lambda_max, 1).

    Non-negative means PSD; small negative values (within -PSD_TOL) are
    numerically PSD.
    """
    lo, hi = eig_range(m)
    return lo / max(hi, 1.0)


def is_psd(m, tol: float = PSD_TOL) -> bool:
    return psd_margin(m) >= -tol


def nearest_psd_clip(m) -> tuple[np.ndarray, float]:
    """Clip negative eigenvalues to zero.

    Returns the repaired matrix and the Frobenius distance of the repair.
    This is an explicit opt-in: validation never applies it silently.
    """
    a = symmetrize(m)
    w, v = np.linalg.eigh(a)
    repaired = (v * np.maximum(w, 0.0)) @ v.T
    repaired = (repaired + repaired.T) / 2.0
    return repaired, float(np.linalg.norm(repaired - a))


def in_range_of(a, c, tol: float = PSD_TOL) -> bool:
    """Whether every column of ``c`` lies in the range (column space) of ``a``.

    Tested via the projection identity A A+ C = C, which characterises
    range membership exactly in exact arithmetic.
    """
    a = as_matrix(a, "a")
    c = as_matrix(c, "c")
    proj = a @ (pseudo_inverse(a) @ c)
    scale = max(float(np.abs(c).max()), float(np.abs(a).max()), 1.0)
    return bool(np.abs(proj - c).max() <= tol * scale)


def rel_close(x, y, rtol: float = 1e-8) -> bool:
    """Closeness relative to the joint scale of the operands (not entrywise)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    scale = max(float(np.abs(x).max(initial=0.0)), float(np.abs(y).max(initial=0.0)), 1.0)
    return bool(np.abs(x - y).max(initial=0.0) <= rtol * scale)
