"""Iwasawa, polar and KAK decompositions of Sp(4, R) elements (float64).

Coordinates follow the block form ``g = [[A, B], [C, D]]`` for the form
``J = [[0, I], [-I, 0]]``.  The unipotent radical of the minimal parabolic is
parameterised by ``n(x1, x2, x3, x4) = [[I, S], [0, I]] . diag(N, N^{-T})`` with
``S = [[x1, x2], [x2, x3]]`` and ``N = [[1, x4], [0, 1]]``; the split torus is
``a(t1, t2) = diag(t1, t2, 1/t1, 1/t2)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exact_linalg import DEFAULT_TOL, ExactMatrix

J = np.array([[0.0, 0.0, 1.0, 0.0],
              [0.0, 0.0, 0.0, 1.0],
              [-1.0, 0.0, 0.0, 0.0],
              [0.0, -1.0, 0.0, 0.0]])


class NotSymplecticError(ValueError):
    pass


class DecompositionError(ArithmeticError):
    pass


def as_array(g) -> np.ndarray:
    if isinstance(g, ExactMatrix):
        if g.mode == "gaussian":
            raise TypeError("decompositions need a real matrix")
        return g.to_numpy().astype(float)
    a = np.asarray(g, dtype=float)
    if a.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got shape {a.shape}")
    return a


def symplectic_defect(g: np.ndarray) -> float:
    return float(np.max(np.abs(g.T @ J @ g - J)))


def orthogonal_defect(g: np.ndarray) -> float:
    return float(np.max(np.abs(g.T @ g - np.eye(4))))


def sp_inv(g: np.ndarray) -> np.ndarray:
    """Inverse of a symplectic matrix, ``-J g^T J``."""
    return -J @ g.T @ J


def _check_symplectic(g: np.ndarray, tol: float):
    # relative to the entry scale: products of O(s) entries carry O(s^2 eps) error
    scale = max(1.0, float(np.max(np.abs(g)))) ** 2
    d = symplectic_defect(g)
    if d > max(tol, 1e-13) * scale * 10:
        raise NotSymplecticError(f"input is not symplectic (defect {d:.3e})")


# -- group generators ----------------------------------------------------------

def unipotent(x1: float, x2: float, x3: float, x4: float) -> np.ndarray:
    s = np.array([[x1, x2], [x2, x3]], dtype=float)
    n = np.array([[1.0, x4], [0.0, 1.0]])
    left = np.eye(4)
    left[:2, 2:] = s
    right = np.eye(4)
    right[:2, :2] = n
    right[2:, 2:] = np.linalg.inv(n).T
    return left @ right


def torus(t1: float, t2: float) -> np.ndarray:
    return np.diag([t1, t2, 1.0 / t1, 1.0 / t2])


def rotation(theta1: float, theta2: float) -> np.ndarray:
    """``r(theta1) r(theta2)``, the compact Cartan element."""
    c1, s1, c2, s2 = np.cos(theta1), np.sin(theta1), np.cos(theta2), np.sin(theta2)
    return np.array([[c1, 0.0, s1, 0.0],
                     [0.0, c2, 0.0, s2],
                     [-s1, 0.0, c1, 0.0],
                     [0.0, -s2, 0.0, c2]])


def k_of_unitary(u: np.ndarray) -> np.ndarray:
    """Embed ``U = X + iY`` in U(2) as ``[[X, Y], [-Y, X]]`` in K."""
    x, y = u.real, u.imag
    return np.block([[x, y], [-y, x]])


def unitary_of_k(k: np.ndarray) -> np.ndarray:
    return k[:2, :2] + 1j * k[:2, 2:]


def random_unitary(rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_k(rng: np.random.Generator) -> np.ndarray:
    return k_of_unitary(random_unitary(rng))


def random_symplectic(rng: np.random.Generator, length: int = 3, spread: float = 0.5) -> np.ndarray:
    """Random word in unipotent, split-torus and K generators."""
    g = np.eye(4)
    for _ in range(length):
        choice = rng.integers(3)
        if choice == 0:
            g = g @ unipotent(*rng.uniform(-spread, spread, size=4))
        elif choice == 1:
            g = g @ torus(*np.exp(rng.uniform(-spread, spread, size=2)))
        else:
            g = g @ random_k(rng)
    return g


# -- Iwasawa -------------------------------------------------------------------

@dataclass(frozen=True)
class IwasawaFactors:
    u: np.ndarray
    a: np.ndarray
    k: np.ndarray
    x: tuple[float, float, float, float]
    t: tuple[float, float]

    def product(self) -> np.ndarray:
        return self.u @ self.a @ self.k

    def reconstruction_error(self, g) -> float:
        return float(np.max(np.abs(self.product() - as_array(g))))


def siegel_action(g: np.ndarray, z: np.ndarray) -> np.ndarray:
    """``g . Z = (A Z + B)(C Z + D)^{-1}`` on the Siegel upper half-space."""
    a, b, c, d = g[:2, :2], g[:2, 2:], g[2:, :2], g[2:, 2:]
    return (a @ z + b) @ np.linalg.inv(c @ z + d)


def iwasawa(g, tol: float = DEFAULT_TOL) -> IwasawaFactors:
    """Factor ``g = u a k`` with ``u`` unipotent, ``a`` positive diagonal, ``k`` in K.

    ``g . iI = X + iY``; then ``X = S`` and ``Y = N T^2 N^T`` with ``N`` upper
    unitriangular, which is a reversed Cholesky factorisation of ``Y``.
    """
    g = as_array(g)
    _check_symplectic(g, tol)
    w = siegel_action(g, 1j * np.eye(2))
    x = 0.5 * (w.real + w.real.T)
    y = 0.5 * (w.imag + w.imag.T)
    if not np.all(np.isfinite(y)) or y[1, 1] <= 0:
        raise DecompositionError("imaginary part of g.iI is not positive definite")
    t2sq = y[1, 1]
    x4 = y[0, 1] / t2sq
    t1sq = y[0, 0] - x4 * x4 * t2sq
    if t1sq <= tol * max(1.0, abs(y[0, 0])):
        raise DecompositionError("imaginary part of g.iI is numerically singular")
    t1, t2 = float(np.sqrt(t1sq)), float(np.sqrt(t2sq))
    coords = (float(x[0, 0]), float(x[0, 1]), float(x[1, 1]), float(x4))
    u = unipotent(*coords)
    a = torus(t1, t2)
    k = sp_inv(u @ a) @ g
    return IwasawaFactors(u=u, a=a, k=k, x=coords, t=(t1, t2))


# -- polar / KAK ---------------------------------------------------------------

@dataclass(frozen=True)
class PolarFactors:
    k1: np.ndarray
    p: np.ndarray

    def product(self) -> np.ndarray:
        return self.k1 @ self.p


def _sym_sqrt(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    w, v = np.linalg.eigh(0.5 * (m + m.T))
    if np.min(w) <= 0:
        raise DecompositionError("g^T g is not positive definite")
    r = np.sqrt(w)
    return (v * r) @ v.T, (v / r) @ v.T


def polar(g, tol: float = DEFAULT_TOL) -> PolarFactors:
    """``g = k1 p`` with ``p = (g^T g)^{1/2}`` positive definite symplectic, ``k1`` in K."""
    g = as_array(g)
    _check_symplectic(g, tol)
    p, p_inv = _sym_sqrt(g.T @ g)
    return PolarFactors(k1=g @ p_inv, p=p)


@dataclass(frozen=True)
class KAKFactors:
    k1: np.ndarray
    a: np.ndarray
    k2: np.ndarray
    t: tuple[float, float]

    def product(self) -> np.ndarray:
        return self.k1 @ self.a @ self.k2


def kak(g, tol: float = DEFAULT_TOL) -> KAKFactors:
    """Cartan decomposition ``g = k1 a k2`` with ``a = diag(t1, t2, 1/t1, 1/t2)``, ``t1 >= t2 >= 1``.

    ``p`` from :func:`polar` is diagonalised by a K-conjugation.  Eigenvectors
    for ``t`` and ``1/t`` are exchanged by ``J``, so picking two orthonormal
    eigenvectors ``v1, v2`` for the two largest eigenvalues with
    ``<v2, J v1> = 0`` gives ``k = [v1, v2, -J v1, -J v2]``.
    """
    pf = polar(g, tol)
    w, v = np.linalg.eigh(0.5 * (pf.p + pf.p.T))
    order = np.argsort(w)[::-1]
    chosen: list[np.ndarray] = []
    for idx in order:
        c = v[:, idx].copy()
        for b in chosen:
            c -= (b @ c) * b
            jb = J @ b
            c -= (jb @ c) * jb
        nrm = np.linalg.norm(c)
        if nrm > 0.5:
            chosen.append(c / nrm)
        if len(chosen) == 2:
            break
    v1, v2 = chosen
    k = np.column_stack([v1, v2, -J @ v1, -J @ v2])
    d = k.T @ pf.p @ k
    t1, t2 = float(d[0, 0]), float(d[1, 1])
    a = torus(t1, t2)
    return KAKFactors(k1=pf.k1 @ k, a=a, k2=k.T, t=(t1, t2))
