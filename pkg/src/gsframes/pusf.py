"""
Unconditional Schauder frames generated by finite groups.

A FramePair holds the functionals f_g (rows of the analysis matrix) and the
vectors tau_g (columns of the synthesis matrix) for an ambient space C^m,
m <= o(G). The ambient norm is either the pullback norm ||x|| = ||theta_f x||_p
or an l^q norm on coordinates.

This module verifies the p-USF property, detects group matrices, rebuilds the
generating representation from a Gramian and moves pairs along commutant
orbits.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .group_core import FiniteGroup, subgroup_from_generators
from .lp_ops import (
    DimensionMismatch,
    LinOp,
    NotInvertible,
    PNorm,
    classify_lp_isometry,
    commutant,
    double_commutant,
    invert,
    left_regular,
    norm_witness,
    p_norm,
    right_regular,
    span_residual,
)
from .numerics import (
    Tolerances,
    is_invertible,
    matrix_rank,
    max_abs,
    nullspace,
    orthonormal_span,
    probe_vectors,
    random_complex,
    resolve,
    scaled_threshold,
)
from .reporting import VerificationReport

logger = logging.getLogger(__name__)


class PreconditionFailed(Exception):
    """Raised when an operation's hypothesis fails; `report` holds the failing check."""

    def __init__(self, message: str, report: Optional[VerificationReport] = None):
        super().__init__(message)
        self.report = report


class NotInCommutant(Exception):
    """Raised when an operator is not in the required commutant."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


class NotIsometry(Exception):
    """Raised when an operator is not an isometry of the ambient space."""

    def __init__(self, message: str, witness: Optional[np.ndarray] = None, deviation: float = 0.0):
        super().__init__(message)
        self.witness = witness
        self.deviation = deviation


class FrameShapeError(Exception):
    """Raised when functional and vector families do not fit the group."""
    pass


class AmbientKind(str, Enum):
    PULLBACK = "pullback"
    COORDINATE = "coordinate"


@dataclass(frozen=True)
class AmbientNorm:
    """Norm of the ambient space C^m: pullback through theta_f, or l^q on coordinates."""
    kind: AmbientKind = AmbientKind.PULLBACK
    q: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", AmbientKind(self.kind))
        if self.q is not None:
            object.__setattr__(self, "q", PNorm(self.q).p)

    def exponent(self, p: PNorm) -> float:
        return self.q if self.q is not None else p.p


class OrbitMode(str, Enum):
    COMMUTANT = "commutant"
    DOUBLE_COMMUTANT = "double-commutant"


@dataclass(frozen=True, eq=False)
class FramePair:
    """Functionals f_g (row g of `functionals`) and vectors tau_g (column g of `vectors`)."""
    group: FiniteGroup
    functionals: np.ndarray
    vectors: np.ndarray
    p: PNorm = PNorm(2.0)
    ambient: AmbientNorm = AmbientNorm()

    def __post_init__(self):
        functionals = np.array(self.functionals, dtype=complex, copy=True)
        vectors = np.array(self.vectors, dtype=complex, copy=True)
        n = self.group.order
        if functionals.ndim != 2 or functionals.shape[0] != n:
            raise FrameShapeError(f"Expected {n} functionals, got array of shape {functionals.shape}")
        m = functionals.shape[1]
        if vectors.shape != (m, n):
            raise FrameShapeError(f"Expected {n} vectors of length {m}, got array of shape {vectors.shape}")
        if m < 1 or m > n:
            raise FrameShapeError(f"Ambient dimension {m} must lie in 1..{n}")
        if not (np.all(np.isfinite(functionals)) and np.all(np.isfinite(vectors))):
            raise FrameShapeError("Frame coefficients must be finite")
        functionals.setflags(write=False)
        vectors.setflags(write=False)
        object.__setattr__(self, "functionals", functionals)
        object.__setattr__(self, "vectors", vectors)
        object.__setattr__(self, "p", PNorm.coerce(self.p))

    @classmethod
    def from_families(cls, group: FiniteGroup, functionals: Sequence[Sequence[complex]],
                      vectors: Sequence[Sequence[complex]], p: Union[PNorm, float] = 2.0,
                      ambient: Optional[AmbientNorm] = None) -> "FramePair":
        """Build a pair from lists indexed by group element."""
        if len(functionals) != group.order or len(vectors) != group.order:
            raise FrameShapeError(f"Both families must have {group.order} members")
        return cls(group, np.array(functionals, dtype=complex),
                   np.array(vectors, dtype=complex).T, PNorm.coerce(p), ambient or AmbientNorm())

    @property
    def dim(self) -> int:
        return self.functionals.shape[1]

    @property
    def order(self) -> int:
        return self.group.order

    def functional(self, g: int) -> np.ndarray:
        return self.functionals[self.group.check_element(g)]

    def vector(self, g: int) -> np.ndarray:
        return self.vectors[:, self.group.check_element(g)]


@dataclass
class Gramian:
    """Entry [g][h] = f_g(tau_h); equal to theta_f theta_tau."""
    matrix: np.ndarray
    group: FiniteGroup


@dataclass
class GroupMatrixWitness:
    """matrix[g][h] = nu[g^-1 h] up to `residual`."""
    nu: np.ndarray
    residual: float


@dataclass
class RightRegularDecomposition:
    """Gramian = sum_g eta[g] rho_g up to `residual`."""
    eta: np.ndarray
    residual: float
    cross_check: Optional[float] = None


@dataclass
class RepresentationFamily:
    """pi_g for every group element, with the report that verified it (if any)."""
    group: FiniteGroup
    ops: List[LinOp]
    report: Optional[VerificationReport] = None

    def __getitem__(self, g: int) -> LinOp:
        return self.ops[self.group.check_element(g)]

    def __len__(self) -> int:
        return len(self.ops)

    @property
    def dim(self) -> int:
        return self.ops[0].shape[0]


def analysis_operator(pair: FramePair) -> LinOp:
    """theta_f x = (f_g(x))_g; row g is f_g."""
    return LinOp(pair.functionals, pair.group)


def synthesis_operator(pair: FramePair) -> LinOp:
    """theta_tau (a_g)_g = sum_g a_g tau_g; column g is tau_g."""
    return LinOp(pair.vectors, pair.group)


def gramian(pair: FramePair) -> Gramian:
    return Gramian(pair.functionals @ pair.vectors, pair.group)


# ---------------------------------------------------------------------------
# Isometry sub-checks
# ---------------------------------------------------------------------------

def _sampled_ratio_deviation(apply, reference, dim: int) -> Tuple[float, Optional[np.ndarray]]:
    worst, witness = 0.0, None
    for x in probe_vectors(dim):
        base = reference(x)
        if base == 0.0:
            continue
        dev = abs(apply(x) / base - 1.0)
        if dev > worst:
            worst, witness = dev, x
    return worst, witness


def _record_analysis_isometry(pair: FramePair, tol: Tolerances, report: VerificationReport) -> None:
    """theta_f must be an isometry from the ambient space into l^p(G)."""
    theta = pair.functionals
    p = pair.p
    m = pair.dim

    if pair.ambient.kind is AmbientKind.PULLBACK:
        # the pullback norm is a norm exactly when theta_f is injective
        report.details["isometry_method"] = "pullback"
        rank = matrix_rank(theta, tol.invertibility)
        witness = None
        if rank < m:
            witness = nullspace(theta, tol.invertibility)[:, 0]
        report.require("isometry", rank == m, witness)
        return

    q = pair.ambient.exponent(p)
    if q == p.p and m == pair.order:
        report.details["isometry_method"] = "structural"
        try:
            verdict = classify_lp_isometry(LinOp(theta), p, tol)
        except NotInvertible:
            report.require("isometry", False, nullspace(theta, tol.invertibility)[:, 0])
            return
        report.residuals["isometry"] = verdict.deviation
        report.require("isometry", verdict.is_isometry, verdict.witness)
        return

    if q == 2.0 and p.is_euclidean:
        report.details["isometry_method"] = "unitary"
        deviation = max_abs(theta.conj().T @ theta - np.eye(m))
        limit = scaled_threshold(tol.residual, theta)
        witness, _ = norm_witness(theta, 2.0, 2.0, limit)
        report.record("isometry", deviation, limit, witness)
        return

    report.details["isometry_method"] = "sampled"
    deviation, witness = _sampled_ratio_deviation(lambda x: p_norm(theta @ x, p),
                                                  lambda x: p_norm(x, q), m)
    report.record("isometry", deviation, tol.residual, witness)


def ambient_isometry(pair: FramePair, u: LinOp,
                     tolerances: Optional[Tolerances] = None) -> Tuple[bool, float, Optional[np.ndarray]]:
    """
    Decide whether u is an isometry of the pair's ambient space.

    Pullback ambients compare ||theta_f u x||_p with ||theta_f x||_p, exactly
    for p = 2 and on the probe set otherwise. Coordinate ambients use
    classify_lp_isometry with exponent q.

    Returns:
        (verdict, deviation, witness).
    """
    tol = resolve(tolerances)
    m = pair.dim
    if u.shape != (m, m):
        raise DimensionMismatch(f"Operator of shape {u.shape} does not act on the {m}-dimensional ambient space")
    invert(u, tol)

    if pair.ambient.kind is AmbientKind.PULLBACK:
        theta = pair.functionals
        if pair.p.is_euclidean:
            moved = theta @ u.matrix
            gram = theta.conj().T @ theta
            deviation = max_abs(moved.conj().T @ moved - gram)
            ok = deviation <= scaled_threshold(tol.residual, gram)
            witness = None
            if not ok:
                _, witness = _sampled_ratio_deviation(lambda x: p_norm(moved @ x, 2.0),
                                                      lambda x: p_norm(theta @ x, 2.0), m)
            return ok, deviation, witness
        deviation, witness = _sampled_ratio_deviation(lambda x: p_norm(theta @ (u.matrix @ x), pair.p),
                                                      lambda x: p_norm(theta @ x, pair.p), m)
        ok = deviation <= tol.residual
        return ok, deviation, None if ok else witness

    verdict = classify_lp_isometry(u, pair.ambient.exponent(pair.p), tol)
    return verdict.is_isometry, verdict.deviation, verdict.witness


# ---------------------------------------------------------------------------
# Checks
# ---------------------------------------------------------------------------

def verify_p_usf(pair: FramePair, tolerances: Optional[Tolerances] = None) -> VerificationReport:
    """
    Check that (f, tau) is a p-USF of the ambient space.

    Sub-checks: reconstruction theta_tau theta_f = I, theta_f isometric for the
    ambient norm, and idempotency of the Gramian.
    """
    tol = resolve(tolerances)
    theta_f = pair.functionals
    theta_tau = pair.vectors
    report = VerificationReport(check="p-usf")
    report.details.update({"order": pair.order, "ambient_dim": pair.dim, "p": pair.p.p,
                           "ambient": pair.ambient.kind.value})

    error = theta_tau @ theta_f - np.eye(pair.dim)
    column = int(np.argmax(np.max(np.abs(error), axis=0)))
    report.record("reconstruction", max_abs(error), scaled_threshold(tol.residual, theta_f, theta_tau),
                  witness={"basis_vector": column})

    _record_analysis_isometry(pair, tol, report)

    g = theta_f @ theta_tau
    report.record("projection", max_abs(g @ g - g), scaled_threshold(tol.residual, g))
    logger.debug(f"p-USF check on {pair.group.describe()}: {report.verdict.label}")
    return report


def check_factorization(pair: FramePair, tolerances: Optional[Tolerances] = None) -> VerificationReport:
    """
    Verify f_g = zeta_g U and tau_g = V delta_g with U = theta_f, V = theta_tau,
    VU = I and U isometric.
    """
    tol = resolve(tolerances)
    u = analysis_operator(pair).matrix
    v = synthesis_operator(pair).matrix
    eye_n = np.eye(pair.order)
    limit = scaled_threshold(tol.exact, u, v)
    report = VerificationReport(check="factorization")
    report.record("functionals", max_abs(eye_n @ u - pair.functionals), limit)
    report.record("vectors", max_abs(v @ eye_n - pair.vectors), limit)
    report.record("left_inverse", max_abs(v @ u - np.eye(pair.dim)), scaled_threshold(tol.residual, u, v))
    _record_analysis_isometry(pair, tol, report)
    return report


def is_group_matrix(m: Union[LinOp, Gramian, np.ndarray], group: FiniteGroup,
                    tolerances: Optional[Tolerances] = None) -> Optional[GroupMatrixWitness]:
    """
    Test whether m[g][h] = nu[g^-1 h] for nu read from the identity row.

    Returns:
        The witness nu on acceptance, None otherwise.
    """
    tol = resolve(tolerances)
    matrix = m.matrix if isinstance(m, (LinOp, Gramian)) else np.asarray(m, dtype=complex)
    if matrix.shape != (group.order, group.order):
        raise DimensionMismatch(f"Matrix of shape {matrix.shape} is not indexed by a group of order {group.order}")
    residual = _group_matrix_residual(matrix, group)
    if residual > scaled_threshold(tol.residual, matrix):
        return None
    return GroupMatrixWitness(nu=matrix[group.identity].copy(), residual=residual)


def _group_matrix_residual(matrix: np.ndarray, group: FiniteGroup) -> float:
    nu = matrix[group.identity]
    # index[g][h] = g^-1 h
    index = group.table[group.inverses]
    return max_abs(matrix - nu[index])


def _shift_invariance(matrix: np.ndarray, group: FiniteGroup) -> Tuple[float, List[int]]:
    worst, witness = 0.0, [group.identity] * 3
    for u in group.elements:
        rows = group.table[u]
        diff = np.abs(matrix[np.ix_(rows, rows)] - matrix)
        g, h = np.unravel_index(np.argmax(diff), diff.shape)
        if diff[g, h] > worst:
            worst, witness = float(diff[g, h]), [int(u), int(g), int(h)]
    return worst, witness


def check_shift_invariance(pair: FramePair, tolerances: Optional[Tolerances] = None) -> VerificationReport:
    """
    Verify f_{ug}(tau_{uh}) = f_g(tau_h) for all u, g, h, cross-checked
    against the group-matrix test on the Gramian.
    """
    tol = resolve(tolerances)
    matrix = gramian(pair).matrix
    limit = scaled_threshold(tol.residual, matrix)
    report = VerificationReport(check="shift-invariance")
    residual, witness = _shift_invariance(matrix, pair.group)
    shift_ok = report.record("shift_invariance", residual, limit, witness={"u_g_h": witness})
    grouped = is_group_matrix(matrix, pair.group, tol)
    report.record("group_matrix", _group_matrix_residual(matrix, pair.group), limit)
    report.require("criteria_agree", shift_ok == (grouped is not None),
                   {"shift_invariance": shift_ok, "group_matrix": grouped is not None})
    if grouped is not None:
        report.details["nu"] = grouped.nu
    return report


def check_gramian_commutes_left_regular(pair: FramePair,
                                        tolerances: Optional[Tolerances] = None) -> VerificationReport:
    """max_g ||lambda_g G - G lambda_g||."""
    tol = resolve(tolerances)
    g_matrix = gramian(pair).matrix
    worst, witness = 0.0, pair.group.identity
    for g in pair.group.elements:
        lam = left_regular(pair.group, g).matrix
        dev = max_abs(lam @ g_matrix - g_matrix @ lam)
        if dev > worst:
            worst, witness = dev, g
    report = VerificationReport(check="gramian-left-regular")
    report.record("commutator", worst, scaled_threshold(tol.residual, g_matrix), witness={"g": witness})
    return report


def gramian_right_regular_decomposition(pair: FramePair, rep: Optional[RepresentationFamily] = None,
                                        tolerances: Optional[Tolerances] = None
                                        ) -> Optional[RightRegularDecomposition]:
    """
    Write the Gramian as sum_g eta(g) rho_g.

    eta is read from the identity row; since (sum_g eta(g) rho_g)[a][h] = eta(a^-1 h)
    this is the group-matrix witness. With a representation at hand,
    eta(g) = f_e(pi_g tau_e) is cross-checked.

    Returns:
        The decomposition, or None if the Gramian is not of this form.
    """
    tol = resolve(tolerances)
    group = pair.group
    g_matrix = gramian(pair).matrix
    eta = g_matrix[group.identity].copy()
    combination = sum(eta[g] * right_regular(group, g).matrix for g in group.elements)
    residual = max_abs(g_matrix - combination)
    if residual > scaled_threshold(tol.residual, g_matrix):
        return None

    cross = None
    if rep is not None:
        f_e = pair.functional(group.identity)
        tau_e = pair.vector(group.identity)
        from_rep = np.array([f_e @ (rep[g].matrix @ tau_e) for g in group.elements])
        cross = max_abs(from_rep - eta)
    return RightRegularDecomposition(eta=eta, residual=residual, cross_check=cross)


def check_right_regular_decomposition(pair: FramePair, rep: Optional[RepresentationFamily] = None,
                                      tolerances: Optional[Tolerances] = None) -> VerificationReport:
    tol = resolve(tolerances)
    report = VerificationReport(check="gramian-right-regular")
    decomposition = gramian_right_regular_decomposition(pair, rep, tol)
    g_matrix = gramian(pair).matrix
    limit = scaled_threshold(tol.residual, g_matrix)
    if decomposition is None:
        eta = g_matrix[pair.group.identity]
        combination = sum(eta[g] * right_regular(pair.group, g).matrix for g in pair.group.elements)
        report.record("decomposition", max_abs(g_matrix - combination), limit)
        return report
    report.record("decomposition", decomposition.residual, limit)
    report.details["eta"] = decomposition.eta
    if decomposition.cross_check is not None:
        report.record("eta_from_representation", decomposition.cross_check, limit)
    return report


# ---------------------------------------------------------------------------
# Representations
# ---------------------------------------------------------------------------

def build_representation(pair: FramePair, tolerances: Optional[Tolerances] = None) -> RepresentationFamily:
    """
    Rebuild pi_g = theta_tau lambda_g theta_f from a group-p-USF.

    Raises:
        PreconditionFailed: If the pair is not a p-USF or its Gramian is not a
            group matrix; the failing report is attached.
    """
    tol = resolve(tolerances)
    usf = verify_p_usf(pair, tol)
    if usf.failed:
        logger.warning(f"build_representation: pair is not a p-USF on {pair.group.describe()}")
        raise PreconditionFailed("Pair is not a p-USF", usf)
    shift = check_shift_invariance(pair, tol)
    if shift.failed:
        logger.warning(f"build_representation: Gramian is not a group matrix on {pair.group.describe()}")
        raise PreconditionFailed("Pair is not shift invariant", shift)

    group = pair.group
    theta_f = pair.functionals
    theta_tau = pair.vectors
    ops = [LinOp(theta_tau @ left_regular(group, g).matrix @ theta_f, group) for g in group.elements]
    limit = scaled_threshold(tol.residual, theta_f, theta_tau)
    report = VerificationReport(check="representation")

    worst, pair_witness = 0.0, None
    for g in group.elements:
        for h in group.elements:
            dev = max_abs(ops[g].matrix @ ops[h].matrix - ops[group.mul(g, h)].matrix)
            if dev > worst:
                worst, pair_witness = dev, [g, h]
    report.record("homomorphism", worst, limit, {"g_h": pair_witness})

    eye = np.eye(pair.dim)
    inverse_dev = max(max_abs(ops[g].matrix @ theta_tau @ left_regular(group, group.inv(g)).matrix @ theta_f - eye)
                      for g in group.elements)
    report.record("inverse", inverse_dev, limit)
    singular = [g for g in group.elements if not is_invertible(ops[g].matrix, tol.invertibility)[0]]
    report.require("invertible", not singular, singular)

    isometry_failures = []
    worst_isometry = 0.0
    for g in group.elements:
        ok, deviation, _ = ambient_isometry(pair, ops[g], tol) if not singular else (False, 1.0, None)
        worst_isometry = max(worst_isometry, deviation)
        if not ok:
            isometry_failures.append(g)
    report.residuals["isometry"] = worst_isometry
    report.require("isometric", not isometry_failures, isometry_failures)

    tau_e = pair.vector(group.identity)
    f_e = pair.functional(group.identity)
    vector_dev = max(max_abs(ops[g].matrix @ tau_e - pair.vector(g)) for g in group.elements)
    functional_dev = max(max_abs(f_e @ ops[group.inv(g)].matrix - pair.functional(g)) for g in group.elements)
    report.record("generates_vectors", vector_dev, limit)
    report.record("generates_functionals", functional_dev, limit)
    logger.info(f"Rebuilt representation on {group.describe()}: {report.verdict.label}")
    return RepresentationFamily(group, ops, report)


def check_intertwining(pair: FramePair, rep: RepresentationFamily,
                       tolerances: Optional[Tolerances] = None) -> VerificationReport:
    """Verify lambda_g theta_f = theta_f pi_g for every g."""
    tol = resolve(tolerances)
    theta_f = pair.functionals
    worst, witness = 0.0, pair.group.identity
    for g in pair.group.elements:
        dev = max_abs(left_regular(pair.group, g).matrix @ theta_f - theta_f @ rep[g].matrix)
        if dev > worst:
            worst, witness = dev, g
    report = VerificationReport(check="intertwining")
    report.record("intertwining", worst, scaled_threshold(tol.residual, theta_f), {"g": witness})
    return report


def left_regular_family(group: FiniteGroup) -> RepresentationFamily:
    return RepresentationFamily(group, [left_regular(group, g) for g in group.elements])


def standard_pair(group: FiniteGroup, p: Union[PNorm, float] = 2.0,
                  ambient: Optional[AmbientNorm] = None) -> FramePair:
    """(zeta_g, delta_g) on l^p(G)."""
    eye = np.eye(group.order, dtype=complex)
    return FramePair(group, eye, eye, PNorm.coerce(p), ambient or AmbientNorm())


def generate_pair(group: FiniteGroup, rep: RepresentationFamily, f: Sequence[complex],
                  tau: Sequence[complex], p: Union[PNorm, float] = 2.0,
                  ambient: Optional[AmbientNorm] = None) -> FramePair:
    """f_g = f pi_{g^-1} and tau_g = pi_g tau."""
    f = np.asarray(f, dtype=complex)
    tau = np.asarray(tau, dtype=complex)
    if f.shape != (rep.dim,) or tau.shape != (rep.dim,):
        raise FrameShapeError(f"Generators must have length {rep.dim}")
    functionals = np.array([f @ rep[group.inv(g)].matrix for g in group.elements])
    vectors = np.column_stack([rep[g].matrix @ tau for g in group.elements])
    return FramePair(group, functionals, vectors, PNorm.coerce(p), ambient or AmbientNorm())


def regenerate_families(rep: RepresentationFamily, pair: FramePair) -> FramePair:
    """Regenerate both families from f_e and tau_e through rep."""
    e = pair.group.identity
    return generate_pair(pair.group, rep, pair.functional(e), pair.vector(e), pair.p, pair.ambient)


def random_group_pair(group: FiniteGroup, seed: int, p: Union[PNorm, float] = 2.0,
                      generator: Optional[int] = None) -> FramePair:
    """
    Seeded group-p-USF on the range of (1/|H|) sum_{h in H} rho_h.

    H is generated by `generator` (a seeded random element when None). With B an
    orthonormal basis of that range and A a random invertible matrix,
    theta_f = BA and theta_tau = A^-1 B^H. The Gramian is the projection BB^H,
    which lies in the span of the right regular representation.
    """
    rng = np.random.default_rng(seed)
    if generator is None:
        generator = int(rng.integers(group.order))
    subgroup = sorted(subgroup_from_generators(group, [generator]))
    projection = sum(right_regular(group, h).matrix for h in subgroup) / len(subgroup)
    basis = orthonormal_span(projection)
    return _pair_from_basis(group, basis, rng, p)


def random_subspace_pair(group: FiniteGroup, seed: int, p: Union[PNorm, float] = 2.0,
                         dim: Optional[int] = None) -> FramePair:
    """Seeded p-USF on a random proper subspace; its Gramian is generically not a group matrix."""
    rng = np.random.default_rng(seed)
    n = group.order
    if dim is None:
        dim = int(rng.integers(1, n)) if n > 1 else 1
    basis = orthonormal_span(random_complex(rng, n, dim))
    return _pair_from_basis(group, basis, rng, p)


def _pair_from_basis(group: FiniteGroup, basis: np.ndarray, rng: np.random.Generator,
                     p: Union[PNorm, float]) -> FramePair:
    m = basis.shape[1]
    a = random_complex(rng, m, m) + m * np.eye(m)
    theta_f = basis @ a
    theta_tau = np.linalg.solve(a, basis.conj().T)
    return FramePair(group, theta_f, theta_tau, PNorm.coerce(p), AmbientNorm())


def orbit_pair(pair: FramePair, rep: RepresentationFamily, u: LinOp,
               mode: Union[OrbitMode, str] = OrbitMode.COMMUTANT,
               tolerances: Optional[Tolerances] = None) -> FramePair:
    """
    Move a group-p-USF to (f u^-1, u tau), regenerating both families through rep.

    Args:
        pair: A verified group-p-USF.
        rep: The representation generating the pair.
        u: Invertible isometry of the ambient space.
        mode: Whether u must lie in pi(G)' or in pi(G)''.
        tolerances: Thresholds; configured values when None.

    Returns:
        The new pair, verified with the same ambient norm.

    Raises:
        NotIsometry: If u is not an isometry of the ambient space.
        NotInCommutant: If u is not in the required commutant.
        PreconditionFailed: If the new pair fails verification.
    """
    tol = resolve(tolerances)
    mode = OrbitMode(mode)
    ok, deviation, witness = ambient_isometry(pair, u, tol)
    if not ok:
        raise NotIsometry(f"Operator is not an isometry of the ambient space (deviation {deviation:.3e})",
                          witness, deviation)

    basis = commutant(rep.ops, tol) if mode is OrbitMode.COMMUTANT else double_commutant(rep.ops, tol)
    residual = span_residual(u, basis)
    if residual > tol.residual:
        raise NotInCommutant(f"Operator is not in the {mode.value} (residual {residual:.3e})", residual)

    e = pair.group.identity
    u_inv = invert(u, tol).matrix
    moved = generate_pair(pair.group, rep, pair.functional(e) @ u_inv, u.matrix @ pair.vector(e),
                          pair.p, pair.ambient)

    for check in (verify_p_usf, check_shift_invariance):
        report = check(moved, tol)
        if report.failed:
            raise PreconditionFailed(f"Orbit pair failed {report.check}", report)
    logger.info(f"Orbit pair in the {mode.value} of {pair.group.describe()} verified")
    return moved
