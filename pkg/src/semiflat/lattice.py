"""Rank-2 and rank-4 lattice arithmetic and polarized-family normal forms.

A polarized family is the linear-algebra core of a torus fibration over a
point: an m x 2m complex period matrix T whose columns span a lattice in
C^m over the reals, together with a constant antisymmetric real pairing Q.
The operations here put (T, Q) into Siegel normal form TS = R(I, Z) with Z
in the Siegel upper half-plane, and produce the fiberwise Hermitian metric
coefficient H with

    H^{-1} = 2 conj(R) Im(Z) R^t = i conj(T) Q^{-1} T^t,

computed both ways as a cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotPositive, SingularPolarization

STD_TOL = 1e-12          # exact identities in double precision
INV_TOL = 1e-10          # identities passing through one inversion


def _maxabs(a: np.ndarray) -> float:
    return float(np.max(np.abs(a))) if a.size else 0.0


@dataclass(frozen=True)
class PolarizedFamily:
    """Period matrix T (m x 2m) with constant antisymmetric polarization Q."""

    T: np.ndarray
    Q: np.ndarray
    m: int

    def __post_init__(self):
        T = np.asarray(self.T, dtype=complex)
        Q = np.asarray(self.Q, dtype=float)
        if self.m not in (1, 2):
            raise ValueError("only fiber dimensions m=1 and m=2 are supported")
        if T.shape != (self.m, 2 * self.m):
            raise ValueError(f"T must be {self.m}x{2 * self.m}, got {T.shape}")
        if Q.shape != (2 * self.m, 2 * self.m):
            raise ValueError(f"Q must be {2 * self.m}x{2 * self.m}, got {Q.shape}")
        if not np.array_equal(Q, -Q.T):
            raise SingularPolarization("Q is not exactly antisymmetric")
        if abs(np.linalg.det(Q)) < 1e-300:
            raise SingularPolarization("Q is singular")
        object.__setattr__(self, "T", T)
        object.__setattr__(self, "Q", Q)

    def stacked(self) -> np.ndarray:
        """The 2m x 2m matrix (T; conj T)."""
        return np.vstack([self.T, self.T.conj()])


@dataclass(frozen=True)
class SiegelData:
    """Output of the Siegel normalization: S real symplectic-izing, TS = R(I, Z)."""

    S: np.ndarray
    R: np.ndarray
    Z: np.ndarray


@dataclass(frozen=True)
class HermitianForm:
    """Hermitian coefficient matrix of the fiberwise Kahler form."""

    H: np.ndarray


def standard_symplectic(m: int) -> np.ndarray:
    J = np.zeros((2 * m, 2 * m))
    J[:m, m:] = np.eye(m)
    J[m:, :m] = -np.eye(m)
    return J


def siegel_normalize(fam: PolarizedFamily) -> SiegelData:
    """Bring (T, Q) to Siegel normal form.

    S is produced by a symplectic Gram-Schmidt over the reals with
    largest-pivot selection (ties broken by lowest index), which makes the
    result reproducible across runs and platforms.  Raises NotPositive when
    Im Z fails to be symmetric positive definite, which signals a
    non-Kahler polarization or a wrongly oriented basis.
    """
    m, Q = fam.m, fam.Q
    n = 2 * m
    cand = [np.eye(n)[:, i] for i in range(n)]
    es: list[np.ndarray] = []
    fs: list[np.ndarray] = []
    for _ in range(m):
        best, pivot = None, 0.0
        for i in range(len(cand)):
            for j in range(len(cand)):
                if i == j:
                    continue
                val = float(cand[i] @ Q @ cand[j])
                if abs(val) > pivot + 1e-15 * pivot:
                    best, pivot = (i, j), abs(val)
        if best is None or pivot < 1e-14:
            raise SingularPolarization("symplectic Gram-Schmidt ran out of pivots")
        i, j = best
        e = cand[i]
        f = cand[j] / float(cand[i] @ Q @ cand[j])
        keep = [v for idx, v in enumerate(cand) if idx not in (i, j)]
        cand = [v - float(e @ Q @ v) * f + float(f @ Q @ v) * e for v in keep]
        es.append(e)
        fs.append(f)
    S = np.column_stack(es + fs)
    if _maxabs(S.T @ Q @ S - standard_symplectic(m)) > STD_TOL:
        raise SingularPolarization("S^t Q S does not reach the standard symplectic form")

    TS = fam.T @ S
    R = TS[:, :m]
    if abs(np.linalg.det(R)) < 1e-300:
        raise NotPositive("leading m x m block of TS is singular")
    Z = np.linalg.solve(R, TS[:, m:])
    if _maxabs(Z - Z.T) > 1e-9:
        raise NotPositive("Z is not symmetric: Riemann relations fail for this (T, Q)")
    Z = 0.5 * (Z + Z.T)
    w = np.linalg.eigvalsh(0.5 * (Z.imag + Z.imag.T))
    if w.min() <= 0:
        raise NotPositive(f"Im Z is not positive definite (min eigenvalue {w.min():.3e})")
    return SiegelData(S=S, R=R, Z=Z)


def siegel_residual(fam: PolarizedFamily, sd: SiegelData) -> float:
    """max-abs reconstruction residual of TS = R (I, Z)."""
    recon = sd.R @ np.hstack([np.eye(fam.m), sd.Z])
    return _maxabs(fam.T @ sd.S - recon)


def hermitian_h(fam: PolarizedFamily) -> HermitianForm:
    """Fiber metric coefficient H, computed along both routes.

    H^{-1} is evaluated via the Siegel data (2 conj(R) Im(Z) R^t) and via
    i conj(T) Q^{-1} T^t; the two must agree to STD_TOL.  The returned H is
    the symmetrized inverse.
    """
    sd = siegel_normalize(fam)
    hinv_siegel = 2.0 * sd.R.conj() @ sd.Z.imag @ sd.R.T
    hinv_direct = 1j * fam.T.conj() @ np.linalg.solve(fam.Q, fam.T.T)
    if _maxabs(hinv_siegel - hinv_direct) > STD_TOL * max(1.0, _maxabs(hinv_direct)):
        raise NotPositive("the two routes to H^{-1} disagree beyond tolerance")
    w = np.linalg.eigvalsh(0.5 * (hinv_direct + hinv_direct.conj().T))
    if w.min() <= 0:
        raise NotPositive("H^{-1} is not positive definite")
    H = np.linalg.inv(hinv_direct)
    H = 0.5 * (H + H.conj().T)
    return HermitianForm(H=H)


def scaled_h(H: HermitianForm, Q: np.ndarray, eps: float, m: int) -> HermitianForm:
    """Volume normalization H(eps) = eps * det(Q)^(-1/2m) * H.

    The scale is fixed so that each elliptic-curve factor of a fiber with a
    principal polarization (det Q = 1) acquires area exactly eps; for m = 1
    it coincides with (eps / sqrt(det Q)) * H.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    detq = float(np.linalg.det(np.asarray(Q, dtype=float)))
    if detq <= 0:
        raise SingularPolarization("det Q must be positive")
    return HermitianForm(H=eps * detq ** (-0.5 / m) * H.H)


def reduce_mod_lattice(v: np.ndarray | complex, fam: PolarizedFamily) -> np.ndarray:
    """Reduce v modulo the lattice spanned by the columns of T.

    Returns v' with v - v' in the integer span and real lattice coordinates
    of v' in [0, 1).
    """
    v = np.atleast_1d(np.asarray(v, dtype=complex))
    stack = fam.stacked()
    coeff = np.linalg.solve(stack, np.concatenate([v, v.conj()]))
    c = coeff.real  # imaginary parts are roundoff by conjugation symmetry
    frac = c - np.floor(c + 1e-13)
    return fam.T @ frac


def type_one_one_residual(fam: PolarizedFamily) -> float:
    """max-abs of Pi^t Q Pi, the obstruction to the polarization being (1,1)."""
    m = fam.m
    pi = np.linalg.inv(fam.stacked())[:, :m]
    return _maxabs(pi.T @ fam.Q @ pi)


def product_family(taus: tuple[complex, complex, complex, complex]) -> PolarizedFamily:
    """Rank-4 family of a fiber product: block-diagonal T and block J polarization."""
    t1, t2, t3, t4 = taus
    T = np.array([[t1, t2, 0, 0], [0, 0, t3, t4]], dtype=complex)
    j2 = np.array([[0.0, 1.0], [-1.0, 0.0]])
    Q = np.zeros((4, 4))
    Q[:2, :2] = j2
    Q[2:, 2:] = j2
    return PolarizedFamily(T=T, Q=Q, m=2)


def stacked_inverse_block(taus: tuple[complex, complex, complex, complex]) -> np.ndarray:
    """Closed-form inverse of (T; conj T) for a block product family.

    Gaussian elimination applied once by hand; kept as an independent check
    against the generic numerical inverse.
    """
    t1, t2, t3, t4 = taus
    i12 = (np.conj(t1) * t2).imag
    i34 = (np.conj(t3) * t4).imag
    out = np.zeros((4, 4), dtype=complex)
    out[0, 0] = 1j * np.conj(t2) / (2 * i12)
    out[1, 0] = -1j * np.conj(t1) / (2 * i12)
    out[0, 2] = -1j * t2 / (2 * i12)
    out[1, 2] = 1j * t1 / (2 * i12)
    out[2, 1] = 1j * np.conj(t4) / (2 * i34)
    out[3, 1] = -1j * np.conj(t3) / (2 * i34)
    out[2, 3] = -1j * t4 / (2 * i34)
    out[3, 3] = 1j * t3 / (2 * i34)
    return out
