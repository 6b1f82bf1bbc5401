"""Dense complex linear algebra for small Hilbert spaces.

Everything operates on plain numpy arrays (complex128). Matrices here are
tiny (dimension <= ~64), so all routines favour clarity and strict
validation over speed.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Tolerances used throughout the package.
HERM_TOL = 1e-10
TRACE_TOL = 1e-9
PSD_TOL = 1e-9

# Refuse kron products beyond this total entry count.
_MAX_ENTRIES = 2**26


@dataclass(frozen=True)
class Dims:
    """Ordered list of named subsystem dimensions, e.g. A:2, B:3, D:2."""

    names: tuple[str, ...]
    sizes: tuple[int, ...]

    def __post_init__(self):
        if len(self.names) != len(self.sizes):
            raise ValueError("names and sizes must have equal length")
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate subsystem names: {self.names}")
        if any(s < 1 for s in self.sizes):
            raise ValueError(f"subsystem sizes must be >= 1, got {self.sizes}")

    @classmethod
    def of(cls, *pairs: tuple[str, int]) -> "Dims":
        return cls(tuple(n for n, _ in pairs), tuple(s for _, s in pairs))

    @property
    def total(self) -> int:
        return int(np.prod(self.sizes))

    def size(self, name: str) -> int:
        return self.sizes[self.names.index(name)]

    def keep(self, names) -> "Dims":
        names = set(names)
        pairs = [(n, s) for n, s in zip(self.names, self.sizes) if n in names]
        return Dims(tuple(n for n, _ in pairs), tuple(s for _, s in pairs))


def dagger(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def is_hermitian(m: np.ndarray, tol: float = HERM_TOL) -> bool:
    return np.max(np.abs(m - dagger(m))) <= tol


def require_hermitian(m: np.ndarray, tol: float = HERM_TOL) -> None:
    dev = float(np.max(np.abs(m - dagger(m))))
    if dev > tol:
        raise ValueError(f"matrix is not Hermitian (max deviation {dev:.3e} > {tol:.0e})")


def check_density_matrix(rho: np.ndarray, *, herm_tol: float = HERM_TOL,
                         trace_tol: float = TRACE_TOL, psd_tol: float = PSD_TOL) -> None:
    """Raise ValueError unless rho is Hermitian, unit trace and PSD within tolerance."""
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"density matrix must be square, got shape {rho.shape}")
    if not np.all(np.isfinite(rho.view(float))):
        raise ValueError("density matrix has non-finite entries")
    require_hermitian(rho, herm_tol)
    tr = complex(np.trace(rho))
    if abs(tr - 1.0) > trace_tol:
        raise ValueError(f"trace is {tr:.12g}, not 1 within {trace_tol:.0e}")
    lo = float(np.linalg.eigvalsh((rho + dagger(rho)) / 2).min())
    if lo < -psd_tol:
        raise ValueError(f"matrix is not PSD: min eigenvalue {lo:.3e} < -{psd_tol:.0e}")


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Tensor (Kronecker) product of two matrices."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.size * b.size > _MAX_ENTRIES:
        raise ValueError(f"kron result too large: {a.shape} x {b.shape}")
    return np.kron(a, b)


def partial_trace(rho: np.ndarray, dims: Dims, keep) -> np.ndarray:
    """Trace out every subsystem not named in `keep`.

    Kept subsystems stay in their original relative order; the trace is
    preserved.
    """
    keep = {keep} if isinstance(keep, str) else set(keep)
    if not keep:
        raise ValueError("keep must name at least one subsystem")
    unknown = keep - set(dims.names)
    if unknown:
        raise ValueError(f"unknown subsystem names: {sorted(unknown)}")
    rho = np.asarray(rho)
    d = dims.total
    if rho.shape != (d, d):
        raise ValueError(f"dims {dims.sizes} imply shape {(d, d)}, got {rho.shape}")

    n = len(dims.sizes)
    t = rho.reshape(dims.sizes + dims.sizes)
    # Trace out the highest axis index first so earlier positions stay valid.
    traced = 0
    for idx in reversed(range(n)):
        if dims.names[idx] not in keep:
            t = np.trace(t, axis1=idx, axis2=idx + n - traced)
            traced += 1
    kd = dims.keep(keep).total
    return t.reshape(kd, kd)


def eigh(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns (eigenvalues ascending, eigenvector columns). Raises on
    non-Hermitian input.
    """
    require_hermitian(h)
    w, v = np.linalg.eigh((h + dagger(h)) / 2)
    return w, v


def trace_norm(m: np.ndarray) -> float:
    """Trace norm of a Hermitian matrix: sum of absolute eigenvalues."""
    w, _ = eigh(m)
    return float(np.sum(np.abs(w)))


def purity(rho: np.ndarray) -> float:
    """Tr(rho^2)."""
    rho = np.asarray(rho)
    return float(np.trace(rho @ rho).real)


def clip_spectrum(w: np.ndarray, tol: float = PSD_TOL) -> np.ndarray:
    """Clip eigenvalues in [-tol, 0) to 0; anything below -tol is an error."""
    w = np.asarray(w, dtype=float)
    lo = float(w.min()) if w.size else 0.0
    if lo < -tol:
        raise ValueError(f"genuinely negative eigenvalue {lo:.3e} (below -{tol:.0e})")
    return np.clip(w, 0.0, None)


def shannon_entropy(p) -> float:
    """Shannon entropy in bits; 0 log 0 := 0."""
    p = clip_spectrum(np.asarray(p, dtype=float))
    nz = p[p > 0.0]
    return float(-np.sum(nz * np.log2(nz)))


def von_neumann_entropy(rho: np.ndarray) -> float:
    """Von Neumann entropy in bits, -sum lambda log2 lambda."""
    w, _ = eigh(rho)
    w = np.clip(clip_spectrum(w), 0.0, 1.0)
    return shannon_entropy(w)
