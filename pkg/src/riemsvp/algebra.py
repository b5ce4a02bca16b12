"""Inner products, curvature contractions, Weyl split, and null-tetrad scalars.

Complex arithmetic is confined to :func:`np_scalars` and
:func:`invariant_i`; every other operation stays real.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import BadTetrad, DimensionTooSmall, InvalidInput
from .geometry import CurvatureData


def inner(g: np.ndarray, u: np.ndarray, v: np.ndarray) -> float:
    """Symmetric bilinear pairing ``g_ij u^i v^j``."""
    u = np.asarray(u)
    v = np.asarray(v)
    if u.shape != (g.shape[0],) or v.shape != (g.shape[0],):
        raise InvalidInput("vector length does not match metric dimension")
    return float(u @ g @ v)


def ricci(cd: CurvatureData) -> np.ndarray:
    """Ricci tensor ``R_ik = g^hj R_hijk``."""
    return np.einsum("hj,hijk->ik", cd.g_inv, cd.riemann_lowered)


def ricci_scalar(cd: CurvatureData) -> float:
    """Scalar curvature ``R = g^ik R_ik``."""
    return float(np.einsum("ik,ik->", cd.g_inv, ricci(cd)))


def kretschmann(cd: CurvatureData) -> float:
    """Full self-contraction ``R_abcd R^abcd``."""
    up = _raise_all(cd.riemann_lowered, cd.g_inv)
    return float(np.einsum("ijkl,ijkl->", cd.riemann_lowered, up))


def _raise_all(t: np.ndarray, g_inv: np.ndarray) -> np.ndarray:
    return np.einsum("ia,jb,kc,ld,abcd->ijkl", g_inv, g_inv, g_inv, g_inv, t)


def weyl(cd: CurvatureData) -> np.ndarray:
    """Trace-free part ``C_ijkl`` of the curvature tensor.

    Satisfies all curvature symmetries and ``g^ik C_ijkl = 0``; adding back
    the Ricci and scalar trace terms reproduces the input tensor.
    """
    n = cd.n
    if n < 3:
        raise DimensionTooSmall("Weyl split requires dimension >= 3")
    g = cd.g
    ric = ricci(cd)
    scal = ricci_scalar(cd)
    trace_part = (np.einsum("il,jk->ijkl", ric, g)
                  - np.einsum("ik,jl->ijkl", ric, g)
                  + np.einsum("il,jk->ijkl", g, ric)
                  - np.einsum("ik,jl->ijkl", g, ric)) / (n - 2)
    scalar_part = (np.einsum("il,jk->ijkl", g, g)
                   - np.einsum("ik,jl->ijkl", g, g)) * (scal / ((n - 1) * (n - 2)))
    return cd.riemann_lowered + trace_part - scalar_part


def weyl_self_contraction(cd: CurvatureData, c: Optional[np.ndarray] = None) -> float:
    """Signed contraction ``C_ijkl C^ijkl``.

    Can be negative in Lorentz signature, so the value is returned as-is
    rather than as a norm.
    """
    if c is None:
        c = weyl(cd)
    return float(np.einsum("ijkl,ijkl->", c, _raise_all(c, cd.g_inv)))


@dataclass(frozen=True)
class NPTetrad:
    """Newman-Penrose null tetrad ``(l, n, m, conj(m))``.

    ``l`` and ``n`` are real null vectors with ``<l, n> = ln_sign``;
    ``m`` is complex null with ``<m, conj(m)> = 1``; all other pairings
    vanish.
    """

    l: np.ndarray
    n: np.ndarray
    m: np.ndarray
    ln_sign: int = -1

    def normalization_defect(self, g: np.ndarray) -> float:
        """Largest violation of the tetrad inner-product conditions."""
        lv = np.asarray(self.l, dtype=float)
        nv = np.asarray(self.n, dtype=float)
        mv = np.asarray(self.m, dtype=complex)
        mb = np.conj(mv)
        checks = [
            lv @ g @ lv,
            nv @ g @ nv,
            lv @ g @ nv - self.ln_sign,
            mv @ g @ mv,
            mv @ g @ mb - 1.0,
            lv @ g @ mv,
            nv @ g @ mv,
        ]
        return float(max(abs(complex(c)) for c in checks))


def np_scalars(cd: CurvatureData, tetrad: NPTetrad,
               tol: float = 1e-8) -> tuple[complex, complex, complex, complex, complex]:
    """The five complex Weyl curvature scalars for a null tetrad.

    The overall sign convention is pinned by a regression test against the
    known rotating-black-hole values; with it, the Schwarzschild tetrad gives
    a positive real middle scalar ``M / r**3``.
    """
    defect = tetrad.normalization_defect(cd.g)
    if defect > tol:
        raise BadTetrad(f"tetrad normalization defect {defect:.3e} exceeds {tol:.1e}")
    c = weyl(cd).astype(complex)
    lv = np.asarray(tetrad.l, dtype=complex)
    nv = np.asarray(tetrad.n, dtype=complex)
    mv = np.asarray(tetrad.m, dtype=complex)
    mb = np.conj(mv)

    # Sign fixed so the static black hole gives a positive real psi2.
    def contract(a, b, u, v):
        return -complex(np.einsum("ijkl,i,j,k,l->", c, a, b, u, v))

    psi0 = contract(lv, mv, lv, mv)
    psi1 = contract(lv, nv, lv, mv)
    psi2 = contract(lv, mv, mb, nv)
    psi3 = contract(lv, nv, mb, nv)
    psi4 = contract(mb, nv, mb, nv)
    return (psi0, psi1, psi2, psi3, psi4)


def invariant_i(psis) -> complex:
    """Quadratic curvature invariant ``psi0*psi4 - 4*psi1*psi3 + 3*psi2**2``."""
    p0, p1, p2, p3, p4 = psis
    return p0 * p4 - 4.0 * p1 * p3 + 3.0 * p2 * p2


@dataclass(frozen=True)
class InvariantReport:
    """Scalar invariants of the curvature at a point."""

    ricci_scalar: float
    kretschmann: float
    weyl_sq: float
    weyl_norm: Optional[float]
    np_scalars: Optional[tuple] = None
    invariant_i: Optional[complex] = None


def compute_invariants(cd: CurvatureData,
                       tetrad: Optional[NPTetrad] = None) -> InvariantReport:
    """Assemble the invariant report; tetrad scalars only when one is given."""
    if cd.n < 3:
        wsq = 0.0  # the trace-free part vanishes identically below n = 3
    else:
        wsq = weyl_self_contraction(cd)
    wnorm = float(np.sqrt(wsq)) if wsq >= 0.0 else None
    psis = None
    inv_i = None
    if tetrad is not None:
        psis = np_scalars(cd, tetrad)
        inv_i = invariant_i(psis)
    return InvariantReport(ricci_scalar=ricci_scalar(cd),
                           kretschmann=kretschmann(cd),
                           weyl_sq=wsq, weyl_norm=wnorm,
                           np_scalars=psis, invariant_i=inv_i)
