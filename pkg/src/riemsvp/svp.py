"""Singular value problem of the Riemann tensor at a point.

The unknowns are four tangent vectors ``(W, X, Y, Z)`` and a scalar
``sigma`` satisfying

    R(Y, Z) X = sigma W        R(Z, Y) W = sigma X
    R(W, X) Z = sigma Y        R(X, W) Y = sigma Z

together with the normalizations ``<V, V> = +-1`` for each vector.  The
residual of this system (4n tensor equations plus 4 constraints) is driven
to zero by a damped least-squares Newton iteration; a multistart driver
samples feasible random starts and clusters the converged solutions by
``sigma``.  Orbit equivalence under the structural transforms is exposed
separately as a membership predicate.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from . import catalog as _catalog_mod
from .algebra import inner, np_scalars
from .errors import (BadCase, InvalidInput, NoConvergence, OutOfDomain,
                     SingularJacobian, WrongSignature)
from .geometry import CurvatureData, riemann

Signs = tuple[int, int, int, int]

ALL_PLUS: Signs = (1, 1, 1, 1)


@dataclass(frozen=True)
class Quadruple:
    """Four tangent vectors with the signs of their unit constraints."""

    w: np.ndarray
    x: np.ndarray
    y: np.ndarray
    z: np.ndarray
    signs: Signs = ALL_PLUS

    @property
    def vectors(self) -> tuple[np.ndarray, ...]:
        return (self.w, self.x, self.y, self.z)

    def flat(self) -> np.ndarray:
        return np.concatenate([self.w, self.x, self.y, self.z])


@dataclass
class SVPSolution:
    """A solved 5-tuple ``(W, X, Y, Z, sigma)`` plus provenance."""

    q: Quadruple
    sigma: float
    residual: float
    origin: str = "multistart"
    seed: Optional[int] = None
    trivial: Optional[str] = None
    count: int = 1
    tetrad_components: Optional[np.ndarray] = None


@dataclass(frozen=True)
class SolverConfig:
    """Newton and multistart parameters."""

    tol: float = 1e-11
    max_newton_iters: int = 60
    n_starts: int = 200
    cluster_eps: float = 1e-7
    sign_pattern: str = "++++"
    rng_seed: int = 0

    def __post_init__(self):
        if self.tol <= 0:
            raise InvalidInput("tol must be positive")
        if self.n_starts < 1:
            raise InvalidInput("n_starts must be at least 1")
        parse_sign_pattern(self.sign_pattern)


def parse_sign_pattern(pattern) -> Optional[Signs]:
    """Normalize a sign pattern; ``None`` means enumerate all patterns."""
    if pattern is None:
        return None
    if isinstance(pattern, str):
        text = pattern.strip().lower()
        if text in ("all", "enumerate-all"):
            return None
        text = text.replace("\u2212", "-")
        if len(text) == 4 and set(text) <= {"+", "-"}:
            return tuple(1 if ch == "+" else -1 for ch in text)
        raise InvalidInput(f"bad sign pattern '{pattern}'")
    signs = tuple(int(s) for s in pattern)
    if len(signs) != 4 or any(s not in (-1, 1) for s in signs):
        raise InvalidInput(f"bad sign pattern '{pattern}'")
    return signs


def sigma_from_tensor(cd: CurvatureData, q: Quadruple) -> float:
    """The scalar ``R(W, X, Y, Z)``; equals sigma on all-plus solutions."""
    return float(np.einsum("ijkl,i,j,k,l->", cd.riemann_lowered,
                           q.w, q.x, q.y, q.z))


def _tensor_maps(cd: CurvatureData, q: Quadruple):
    """The four curvature actions appearing on the left-hand sides."""
    r = cd.riemann_mixed
    w, x, y, z = q.vectors
    return (np.einsum("ijkl,j,k,l->i", r, x, y, z),
            np.einsum("ijkl,j,k,l->i", r, w, z, y),
            np.einsum("ijkl,j,k,l->i", r, z, w, x),
            np.einsum("ijkl,j,k,l->i", r, y, x, w))


def residual(cd: CurvatureData, q: Quadruple, sigma: float) -> np.ndarray:
    """Full residual vector, length ``4n + 4``.

    Blocks: the four tensor equations (n entries each), then the four
    normalization constraints ``<V, V> - sign_V``.
    """
    mw, mx, my, mz = _tensor_maps(cd, q)
    w, x, y, z = q.vectors
    cons = [inner(cd.g, v, v) - s for v, s in zip(q.vectors, q.signs)]
    return np.concatenate([mw - sigma * w, mx - sigma * x,
                           my - sigma * y, mz - sigma * z,
                           np.array(cons)])


def residual_norm(cd: CurvatureData, q: Quadruple, sigma: float) -> float:
    return float(np.abs(residual(cd, q, sigma)).max())


def _jacobian(cd: CurvatureData, q: Quadruple, sigma: float) -> np.ndarray:
    """Analytic Jacobian of :func:`residual` w.r.t. ``(w, x, y, z, sigma)``."""
    n = cd.n
    r = cd.riemann_mixed
    g = cd.g
    w, x, y, z = q.vectors
    eye = np.eye(n)

    # d/dv of einsum('ijkl,j,k,l->i', r, p, q, s) for each slot
    def d_j(qv, sv):
        return np.einsum("ijkl,k,l->ij", r, qv, sv)

    def d_k(pv, sv):
        return np.einsum("ijkl,j,l->ik", r, pv, sv)

    def d_l(pv, qv):
        return np.einsum("ijkl,j,k->il", r, pv, qv)

    jac = np.zeros((4 * n + 4, 4 * n + 1))
    blocks = {
        # equation block -> {vector slot -> derivative matrix}
        0: {1: d_j(y, z), 2: d_k(x, z), 3: d_l(x, y), 0: -sigma * eye},
        1: {0: d_j(z, y), 3: d_k(w, y), 2: d_l(w, z), 1: -sigma * eye},
        2: {3: d_j(w, x), 0: d_k(z, x), 1: d_l(z, w), 2: -sigma * eye},
        3: {2: d_j(x, w), 1: d_k(y, w), 0: d_l(y, x), 3: -sigma * eye},
    }
    vecs = q.vectors
    for eq, cols in blocks.items():
        rows = slice(eq * n, (eq + 1) * n)
        for slot, mat in cols.items():
            jac[rows, slot * n:(slot + 1) * n] += mat
        jac[rows, 4 * n] = -vecs[eq]
    for c, v in enumerate(vecs):
        jac[4 * n + c, c * n:(c + 1) * n] = 2.0 * (g @ v)
    return jac


def _unpack(u: np.ndarray, n: int, signs: Signs) -> tuple[Quadruple, float]:
    q = Quadruple(w=u[0:n], x=u[n:2 * n], y=u[2 * n:3 * n], z=u[3 * n:4 * n],
                  signs=signs)
    return q, float(u[4 * n])


def normalize_sign(sol: SVPSolution) -> SVPSolution:
    """Flip ``(W, sigma) -> (-W, -sigma)`` so the reported sigma is >= 0."""
    if sol.sigma >= 0.0:
        return sol
    q = sol.q
    return replace(sol, q=Quadruple(-q.w, q.x, q.y, q.z, q.signs),
                   sigma=-sol.sigma)


def trivial_pattern(q: Quadruple, atol: float = 1e-6) -> Optional[str]:
    """Classify the degenerate repeated-vector families, if any."""
    w, x, y, z = q.vectors

    def same(a, b):
        return bool(np.abs(a - b).max() < atol or np.abs(a + b).max() < atol)

    if same(w, x) and same(y, z) and same(w, y):
        return "all-equal"
    if same(w, x):
        return "w=x"
    if same(y, z):
        return "y=z"
    return None


def solve_newton(cd: CurvatureData, q0: Quadruple, sigma0: float,
                 cfg: SolverConfig) -> SVPSolution:
    """Damped least-squares Newton on the full residual system.

    The system has ``4n + 4`` equations in ``4n + 1`` unknowns but is
    consistent at genuine solutions, so a QR-based least-squares step
    converges to exact roots.  Raises :class:`NoConvergence` at the
    iteration cap and :class:`SingularJacobian` when the linearization
    degenerates.
    """
    n = cd.n
    u = np.concatenate([q0.flat(), [sigma0]])
    if not np.all(np.isfinite(u)):
        raise InvalidInput("non-finite start")
    signs = q0.signs
    q, sigma = _unpack(u, n, signs)
    f = residual(cd, q, sigma)
    fnorm = float(np.abs(f).max())

    def finish(quad, sig):
        sol = normalize_sign(SVPSolution(q=quad, sigma=sig, residual=fnorm))
        sol.residual = residual_norm(cd, sol.q, sol.sigma)
        sol.trivial = trivial_pattern(sol.q)
        return sol

    for _ in range(cfg.max_newton_iters):
        if fnorm < cfg.tol:
            return finish(q, sigma)
        jac = _jacobian(cd, q, sigma)
        try:
            step, *_ = np.linalg.lstsq(jac, -f, rcond=None)
        except np.linalg.LinAlgError as exc:
            raise SingularJacobian(str(exc)) from exc
        if not np.all(np.isfinite(step)):
            raise SingularJacobian("non-finite Newton step")
        # backtracking keeps wilder starts from diverging
        accepted = False
        for t in (1.0, 0.5, 0.25, 0.125, 1.0 / 16.0):
            u_new = u + t * step
            q_new, sigma_new = _unpack(u_new, n, signs)
            f_new = residual(cd, q_new, sigma_new)
            fnorm_new = float(np.abs(f_new).max())
            if fnorm_new < fnorm:
                u, q, sigma, f, fnorm = u_new, q_new, sigma_new, f_new, fnorm_new
                accepted = True
                break
        if not accepted:
            raise NoConvergence(f"stalled at residual {fnorm:.3e}")
    if fnorm < cfg.tol:
        return finish(q, sigma)
    raise NoConvergence(f"no convergence after {cfg.max_newton_iters} iterations"
                        f" (residual {fnorm:.3e})")


def sample_unit_vector(rng: np.random.Generator, g: np.ndarray, sign: int,
                       max_tries: int = 2000) -> np.ndarray:
    """Gaussian direction rescaled onto the quadric ``<v, v> = sign``.

    Near-null draws (``|<v, v>| < 1e-6``) are rejected, as are draws whose
    causal character does not match the requested sign.
    """
    n = g.shape[0]
    for _ in range(max_tries):
        v = rng.standard_normal(n)
        qv = float(v @ g @ v)
        if abs(qv) < 1e-6:
            continue
        if sign * qv > 0:
            return v / math.sqrt(abs(qv))
    raise WrongSignature(
        f"could not sample a vector with <v,v> sign {sign:+d}; "
        "the metric signature may not admit it")


def feasible_patterns(cd: CurvatureData) -> list[Signs]:
    """Sign patterns compatible with the metric signature."""
    if all(s > 0 for s in cd.signature):
        return [ALL_PLUS]
    return [p for p in itertools.product((1, -1), repeat=4)]


def multistart(cd: CurvatureData, cfg: SolverConfig) -> list[SVPSolution]:
    """Random-start search over the SVP solution set.

    Deterministic for a fixed ``rng_seed``.  Returns one representative per
    cluster, sorted by sigma; trivial zero-sigma families are labeled, never
    filtered.  An empty nonzero set is a legitimate outcome.
    """
    pattern = parse_sign_pattern(cfg.sign_pattern)
    if pattern is None:
        patterns = feasible_patterns(cd)
    else:
        if any(s < 0 for s in pattern) and all(s > 0 for s in cd.signature):
            raise WrongSignature("negative unit constraints are infeasible "
                                 "for a Riemannian metric")
        patterns = [pattern]
    rng = np.random.default_rng(cfg.rng_seed)
    found: list[SVPSolution] = []
    start_index = 0
    for signs in patterns:
        for _ in range(cfg.n_starts):
            start_index += 1
            try:
                vecs = [sample_unit_vector(rng, cd.g, s) for s in signs]
            except WrongSignature:
                break
            q0 = Quadruple(*vecs, signs=signs)
            sigma0 = sigma_from_tensor(cd, q0)
            try:
                sol = solve_newton(cd, q0, sigma0, cfg)
            except (NoConvergence, SingularJacobian):
                continue
            sol.seed = start_index
            found.append(sol)
    clusters = _cluster(found, cfg)
    clusters = _ensure_trivial(clusters, cd, cfg, patterns)
    clusters.sort(key=lambda s: (s.sigma, s.seed if s.seed is not None else -1))
    return clusters


def sigma_values(solutions, eps: float = 1e-7) -> list[float]:
    """Distinct sigma values among solutions, merged within ``eps``."""
    out: list[float] = []
    for s in sorted(sol.sigma for sol in solutions):
        if not out or abs(s - out[-1]) > eps:
            out.append(s)
    return out


def canonical_quadruple(q: Quadruple) -> np.ndarray:
    """Flip vector signs so each leading significant component is positive."""
    vecs = []
    for v in q.vectors:
        idx = np.flatnonzero(np.abs(v) > 1e-9)
        if len(idx) and v[idx[0]] < 0:
            v = -v
        vecs.append(v)
    return np.stack(vecs)


def orbit_equivalent(a: SVPSolution, b: SVPSolution, cd: CurvatureData,
                     atol: float = 1e-5) -> bool:
    """True when the two solutions are related by the structural transforms."""
    try:
        members_a = [a] + orbit(a, cd, tol=max(10 * a.residual, 1e-9))
        members_b = [b] + orbit(b, cd, tol=max(10 * b.residual, 1e-9))
    except InvalidInput:
        return False
    canon_b = [canonical_quadruple(m.q) for m in members_b]
    for ma in members_a:
        ca = canonical_quadruple(ma.q)
        for cb in canon_b:
            if np.abs(ca - cb).max() < atol:
                return True
    return False


def _cluster(solutions: list[SVPSolution],
             cfg: SolverConfig) -> list[SVPSolution]:
    # Group by sigma value only.  Solution sets of the SVP are typically
    # continuous manifolds (the zero family always is), so grouping by
    # discrete orbit equivalence would splinter them into singletons;
    # orbit_equivalent() remains available for membership tests.
    reps: list[SVPSolution] = []
    for sol in sorted(solutions, key=lambda s: s.sigma):
        merged = False
        for rep in reps:
            if abs(rep.sigma - sol.sigma) >= cfg.cluster_eps:
                continue
            rep.count += 1
            if sol.residual < rep.residual:
                rep.q, rep.sigma = sol.q, sol.sigma
                rep.residual = sol.residual
                rep.seed = sol.seed
            rep.trivial = rep.trivial or sol.trivial
            merged = True
            break
        if not merged:
            reps.append(sol)
    return reps


def _ensure_trivial(clusters: list[SVPSolution], cd: CurvatureData,
                    cfg: SolverConfig, patterns: list[Signs]) -> list[SVPSolution]:
    if any(s.trivial for s in clusters):
        return clusters
    rng = np.random.default_rng(cfg.rng_seed + 1)
    for signs in patterns:
        if signs[0] != signs[1] or signs[2] != signs[3]:
            continue
        try:
            v = sample_unit_vector(rng, cd.g, signs[0])
            u = sample_unit_vector(rng, cd.g, signs[2])
        except WrongSignature:
            continue
        q = Quadruple(v, v.copy(), u, u.copy(), signs=signs)
        res = residual_norm(cd, q, 0.0)
        if res < cfg.tol * 10:
            clusters.append(SVPSolution(q=q, sigma=0.0, residual=res,
                                        origin="analytic",
                                        trivial=trivial_pattern(q)))
            break
    return clusters


# ---------------------------------------------------------------------------
# Solution orbit: sign flips, swaps, and plane rotations
# ---------------------------------------------------------------------------

_SWAPS = [
    # (slot permutation applied to (w, x, y, z), sigma sign)
    ((1, 0, 2, 3), -1.0),
    ((0, 1, 3, 2), -1.0),
    ((1, 0, 3, 2), +1.0),
    ((2, 3, 0, 1), +1.0),
    ((3, 2, 0, 1), -1.0),
    ((2, 3, 1, 0), -1.0),
    ((3, 2, 1, 0), +1.0),
]


def orbit(sol: SVPSolution, cd: CurvatureData, tol: float = 1e-10,
          include_rotations: bool = True) -> list[SVPSolution]:
    """All solutions generated from ``sol`` by the structural transforms.

    Emits the 16 per-vector sign patterns (sigma flips with the parity of
    the number of minus signs), the 7 vector swaps, and, when the pairs are
    orthogonal unit pairs of equal constraint sign, the 3 plane rotations
    by ``1/sqrt(2)``.  Sigma values are reported signed, before any
    non-negativity normalization.  Each member's residual stays below
    ``10 * tol``.
    """
    if sol.residual >= tol:
        raise InvalidInput(
            f"orbit requires a converged solution (residual {sol.residual:.3e} "
            f">= {tol:.1e})")
    q, sigma = sol.q, sol.sigma
    members: list[SVPSolution] = []

    def emit(quad: Quadruple, sig: float):
        members.append(SVPSolution(
            q=quad, sigma=sig, residual=residual_norm(cd, quad, sig),
            origin="orbit", seed=sol.seed))

    for signs4 in itertools.product((1.0, -1.0), repeat=4):
        parity = 1.0 if np.prod(signs4) > 0 else -1.0
        emit(Quadruple(*(s * v for s, v in zip(signs4, q.vectors)),
                       signs=q.signs), parity * sigma)

    for perm, sig in _SWAPS:
        emit(Quadruple(*(q.vectors[i] for i in perm),
                       signs=tuple(q.signs[i] for i in perm)), sig * sigma)

    if include_rotations and _rotations_valid(cd, q):
        w, x, y, z = q.vectors
        rt = 1.0 / math.sqrt(2.0)
        emit(Quadruple(rt * (w - x), rt * (w + x), y, z, q.signs), sigma)
        emit(Quadruple(w, x, rt * (y - z), rt * (y + z), q.signs), sigma)
        emit(Quadruple(rt * (w + x), rt * (w - x), rt * (y + z), rt * (y - z),
                       q.signs), sigma)
    return members


def _rotations_valid(cd: CurvatureData, q: Quadruple, atol: float = 1e-9) -> bool:
    """Plane rotations preserve the constraints only for orthogonal pairs."""
    if q.signs[0] != q.signs[1] or q.signs[2] != q.signs[3]:
        return False
    return (abs(inner(cd.g, q.w, q.x)) < atol
            and abs(inner(cd.g, q.y, q.z)) < atol)


def check_proposition1(sol: SVPSolution, cd: CurvatureData,
                       atol: float = 1e-8) -> bool:
    """Nonzero-sigma solutions must have ``<W, X> = <Y, Z> = 0``."""
    if abs(sol.sigma) <= atol:
        return True
    return (abs(inner(cd.g, sol.q.w, sol.q.x)) < atol
            and abs(inner(cd.g, sol.q.y, sol.q.z)) < atol)


# ---------------------------------------------------------------------------
# Reduced problems
# ---------------------------------------------------------------------------


def meigen_reduce(cd: CurvatureData, cfg: SolverConfig) -> list[SVPSolution]:
    """Solve the repeated-pair reduction ``W = Y``, ``X = Z``.

    The reduced system ``R(Y, Z) Z = sigma Y``, ``R(Z, Y) Y = sigma Z`` is
    solved by the same least-squares Newton machinery on ``2n + 1``
    unknowns; every converged pair embeds into a full solution, which is
    verified against the full residual before being returned.
    """
    n = cd.n
    pattern = parse_sign_pattern(cfg.sign_pattern)
    if pattern is None:
        pairs = [(1, 1)] if all(s > 0 for s in cd.signature) else \
            list(itertools.product((1, -1), repeat=2))
    else:
        pairs = [(pattern[0], pattern[1])]
    rng = np.random.default_rng(cfg.rng_seed)
    r = cd.riemann_mixed
    g = cd.g
    eye = np.eye(n)

    def reduced_residual(u, signs):
        y, z, sigma = u[:n], u[n:2 * n], u[2 * n]
        ryz_z = np.einsum("ijkl,j,k,l->i", r, z, y, z)
        rzy_y = np.einsum("ijkl,j,k,l->i", r, y, z, y)
        return np.concatenate([
            ryz_z - sigma * y, rzy_y - sigma * z,
            [inner(g, y, y) - signs[0], inner(g, z, z) - signs[1]]])

    def reduced_jacobian(u, signs):
        y, z, sigma = u[:n], u[n:2 * n], u[2 * n]
        jac = np.zeros((2 * n + 2, 2 * n + 1))
        # eq1: r[i,j,k,l] z^j y^k z^l - sigma y^i
        jac[:n, :n] = np.einsum("ijkl,j,l->ik", r, z, z) - sigma * eye
        jac[:n, n:2 * n] = (np.einsum("ijkl,k,l->ij", r, y, z)
                            + np.einsum("ijkl,j,k->il", r, z, y))
        jac[:n, 2 * n] = -y
        # eq2: r[i,j,k,l] y^j z^k y^l - sigma z^i
        jac[n:2 * n, :n] = (np.einsum("ijkl,k,l->ij", r, z, y)
                            + np.einsum("ijkl,j,k->il", r, y, z))
        jac[n:2 * n, n:2 * n] = np.einsum("ijkl,j,l->ik", r, y, y) - sigma * eye
        jac[n:2 * n, 2 * n] = -z
        jac[2 * n, :n] = 2.0 * (g @ y)
        jac[2 * n + 1, n:2 * n] = 2.0 * (g @ z)
        return jac

    found: list[SVPSolution] = []
    start_index = 0
    for signs in pairs:
        for _ in range(cfg.n_starts):
            start_index += 1
            try:
                y0 = sample_unit_vector(rng, g, signs[0])
                z0 = sample_unit_vector(rng, g, signs[1])
            except WrongSignature:
                break
            sigma0 = float(np.einsum("ijkl,i,j,k,l->", cd.riemann_lowered,
                                     y0, z0, y0, z0))
            u = np.concatenate([y0, z0, [sigma0]])
            ok = False
            f = reduced_residual(u, signs)
            fnorm = float(np.abs(f).max())
            for _ in range(cfg.max_newton_iters):
                if fnorm < cfg.tol:
                    ok = True
                    break
                jac = reduced_jacobian(u, signs)
                step, *_ = np.linalg.lstsq(jac, -f, rcond=None)
                if not np.all(np.isfinite(step)):
                    break
                improved = False
                for t in (1.0, 0.5, 0.25, 0.125):
                    u_try = u + t * step
                    f_try = reduced_residual(u_try, signs)
                    fn_try = float(np.abs(f_try).max())
                    if fn_try < fnorm:
                        u, f, fnorm = u_try, f_try, fn_try
                        improved = True
                        break
                if not improved:
                    break
            if not ok:
                continue
            y, z, sigma = u[:n].copy(), u[n:2 * n].copy(), float(u[2 * n])
            q = Quadruple(y, z, y.copy(), z.copy(),
                          signs=(signs[0], signs[1], signs[0], signs[1]))
            sol = SVPSolution(q=q, sigma=sigma,
                              residual=residual_norm(cd, q, sigma),
                              origin="meigen", seed=start_index)
            if sol.residual >= cfg.tol:
                continue
            sol = normalize_sign(sol)
            sol.residual = residual_norm(cd, sol.q, sol.sigma)
            sol.trivial = trivial_pattern(sol.q)
            found.append(sol)
    clusters = _cluster(found, cfg)
    clusters.sort(key=lambda s: (s.sigma, s.seed if s.seed is not None else -1))
    return clusters


@dataclass(frozen=True)
class MixedSignReport:
    """Result of the mixed-constraint-sign vanishing check."""

    pattern: Signs
    n_converged: int
    max_abs_sigma: float
    passed: bool
    solutions: list = field(default_factory=list)


def lorentz_mixed_sign_check(cd: CurvatureData, cfg: SolverConfig,
                             atol: float = 1e-8) -> MixedSignReport:
    """On a Lorentz metric, mixed constraint signs force ``sigma = 0``.

    Runs the multistart search with a mixed sign pattern (default
    ``(+, +, +, -)``) and reports the largest ``|sigma|`` among converged
    solutions.
    """
    negatives = sum(1 for s in cd.signature if s < 0)
    if negatives != 1:
        raise WrongSignature("mixed-sign check needs a Lorentz metric "
                             f"(one negative sign, got {negatives})")
    pattern = parse_sign_pattern(cfg.sign_pattern)
    if pattern is None or len(set(pattern)) == 1:
        pattern = (1, 1, 1, -1)
    sub = replace(cfg, sign_pattern="".join("+" if s > 0 else "-"
                                            for s in pattern))
    sols = multistart(cd, sub)
    max_sigma = max((abs(s.sigma) for s in sols), default=0.0)
    return MixedSignReport(pattern=pattern, n_converged=len(sols),
                           max_abs_sigma=max_sigma,
                           passed=max_sigma < atol, solutions=sols)


def wedge_matrix(y: np.ndarray, z: np.ndarray) -> np.ndarray:
    """The patterned 4x4 matrix built from the bivector ``y ^ z``.

    With ``S[i, j] = y^i z^j - y^j z^i`` the matrix is::

        [ 0      2 S01   S20    S30 ]
        [ 2 S01  0       S21    S31 ]
        [ S20    S12     0      2 S23 ]
        [ S30    S13     2 S32  0    ]
    """
    s = np.outer(y, z) - np.outer(z, y)
    return np.array([
        [0.0, 2 * s[0, 1], s[2, 0], s[3, 0]],
        [2 * s[0, 1], 0.0, s[2, 1], s[3, 1]],
        [s[2, 0], s[1, 2], 0.0, 2 * s[2, 3]],
        [s[3, 0], s[1, 3], 2 * s[3, 2], 0.0],
    ])


def wedge_det_defect(y: np.ndarray, z: np.ndarray) -> float:
    """Relative defect of the determinant identity for :func:`wedge_matrix`.

    ``det(S) = -(2 S01 * 2 S23 + S20 S13 + S30 S21)**2`` holds for every
    pair ``(y, z)``; the return value is ``|det - rhs| / max(1, |det|)``.
    """
    s = np.outer(y, z) - np.outer(z, y)
    mat = wedge_matrix(y, z)
    det = float(np.linalg.det(mat))
    rhs = -(2 * s[0, 1] * 2 * s[2, 3] + s[2, 0] * s[1, 3]
            + s[3, 0] * s[2, 1]) ** 2
    return abs(det - rhs) / max(1.0, abs(det))


def schwarzschild_reduced_solve(mass: float, r: float, theta: float) -> SVPSolution:
    """Closed-form exterior solution of the static black-hole SVP.

    Under the reduction ansatz the system collapses to an eight-equation
    polynomial system in the ``(t, r)``-excluded plane; the branch living in
    the ``(r, theta)`` plane solves it with ``sigma = mass / r**3``:

        x = (0, sqrt(f/2), 1/(sqrt(2) r), 0),  y = x,
        w = (0, sqrt(f/2), -1/(sqrt(2) r), 0), z = w,

    where ``f = 1 - 2*mass/r``.  The returned quadruple satisfies the full
    four-dimensional residual to rounding accuracy, and the wedge-matrix
    determinant identity is verified on ``(y, z)``.
    """
    if mass <= 0:
        raise InvalidInput("mass must be positive")
    if r <= 2.0 * mass:
        raise OutOfDomain(f"r = {r} is not outside the horizon r = {2 * mass}")
    if not 0.0 < theta < math.pi:
        raise OutOfDomain("theta must lie strictly between 0 and pi")
    f = 1.0 - 2.0 * mass / r
    p = math.sqrt(f / 2.0)
    qc = 1.0 / (math.sqrt(2.0) * r)
    x = np.array([0.0, p, qc, 0.0])
    w = np.array([0.0, p, -qc, 0.0])
    quad = Quadruple(w=w, x=x, y=x.copy(), z=w.copy(), signs=ALL_PLUS)
    sigma = mass / r ** 3

    entry = _catalog_mod.schwarzschild(mass)
    cd = riemann(entry.spec, np.array([0.0, r, theta, 0.0]))
    res = residual_norm(cd, quad, sigma)
    if res > 1e-10:
        raise NoConvergence(f"reduced solution residual {res:.3e} too large")
    defect = wedge_det_defect(quad.y, quad.z)
    if defect > 1e-8:
        raise NoConvergence(f"wedge determinant identity defect {defect:.3e}")
    return SVPSolution(q=quad, sigma=sigma, residual=res,
                       origin="reduced-schwarzschild")


def kerr_reduced_solve(mass: float, spin: float, r: float,
                       theta: float) -> SVPSolution:
    """Special solution family of the rotating black-hole SVP.

    Works in the null-tetrad frame where only the middle Weyl scalar
    ``psi2`` survives.  Setting ``Z = X``, ``W = -Y`` with the component
    ansatz collapses the system to two scalar equations whose solution has

        sigma = |Re psi2| = sqrt((|I| + Re I) / 6),

    with ``I`` the quadratic Weyl invariant.  The tetrad components of the
    solution are attached; ``q`` holds the coordinate-basis vectors.
    """
    if mass <= 0 or not 0.0 <= spin < mass:
        raise InvalidInput("need mass > 0 and 0 <= spin < mass")
    delta = r * r - 2.0 * mass * r + spin * spin
    if delta <= 0 or r <= 0:
        raise OutOfDomain("point is not in the exterior region")
    if not 0.0 < theta < math.pi:
        raise OutOfDomain("theta must lie strictly between 0 and pi")

    entry = _catalog_mod.kerr(mass, spin)
    point = np.array([0.0, r, theta, 0.0])
    cd = riemann(entry.spec, point)
    tetrad = entry.tetrad(point)
    psis = np_scalars(cd, tetrad)
    re_psi2 = psis[2].real
    if re_psi2 <= 0:
        raise OutOfDomain("reduction requires Re(psi2) > 0, which holds on "
                          "the exterior domain")
    sigma = re_psi2

    # tetrad coefficients (l, n, m, mbar): x solves -2 x1 x2 = 2 x3 x4 = 1/2
    xc = np.array([0.5, -0.5, 0.5, 0.5])
    yc = np.array([0.5, -0.5, -0.5, -0.5])
    frame = np.stack([-yc, xc, yc, xc])  # rows: w, x, y, z

    basis = np.stack([np.asarray(tetrad.l, dtype=complex),
                      np.asarray(tetrad.n, dtype=complex),
                      np.asarray(tetrad.m, dtype=complex),
                      np.conj(np.asarray(tetrad.m, dtype=complex))])
    coords = frame.astype(complex) @ basis
    if np.abs(coords.imag).max() > 1e-12:
        raise NoConvergence("tetrad combination produced a non-real vector")
    vecs = coords.real
    quad = Quadruple(w=vecs[0], x=vecs[1], y=vecs[2], z=vecs[3],
                     signs=ALL_PLUS)
    res = residual_norm(cd, quad, sigma)
    return SVPSolution(q=quad, sigma=sigma, residual=res,
                       origin="reduced-kerr", tetrad_components=frame)


def closed_form_sigma(case: str, **params) -> float:
    """Closed-form sigma for the analytically solvable families.

    Cases
    -----
    ``space-form`` : constant sectional curvature ``kappa``; returns
        ``abs(kappa)`` (non-negativity normalization applied).
    ``m-eigen`` : conformally flat repeated-pair reduction; needs
        ``ricci_ww``, ``ricci_xx``, ``ricci_scalar``, ``n``.
    ``ricci-pair`` : ``w, x`` aligned with Ricci eigenpairs ``lam``, ``mu``;
        needs ``lam``, ``mu``, ``ricci_scalar``, ``n``.
    ``einstein`` : Einstein manifold with ``Ricci = kappa * g``; needs
        ``kappa``, ``ricci_scalar``, ``n``.

    The last three are signed predictions; no sign normalization is applied.
    """
    try:
        if case == "space-form":
            return abs(float(params["kappa"]))
        n = int(params["n"])
        if case in ("m-eigen", "ricci-pair", "einstein") and n < 3:
            raise BadCase(f"case '{case}' requires n >= 3")
        scal = float(params["ricci_scalar"])
        if case == "m-eigen":
            return (float(params["ricci_ww"]) + float(params["ricci_xx"])
                    - scal / (n - 1)) / (n - 2)
        if case == "ricci-pair":
            return (float(params["lam"]) + float(params["mu"])
                    - scal / (n - 1)) / (n - 2)
        if case == "einstein":
            return (2.0 * float(params["kappa"]) - scal / (n - 1)) / (n - 2)
    except KeyError as exc:
        raise BadCase(f"missing parameter {exc} for case '{case}'") from exc
    raise BadCase(f"unknown closed-form case '{case}'")
