"""
Operators on l^p(G) for a finite group G.

Vectors, functionals and dense operators indexed by group elements, the
left and right regular representations, the flip J and its conjugation
Phi(A) = JAJ, commutants computed as nullspaces, and the classification of
l^p isometries.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Union

import numpy as np
import scipy.linalg

from .group_core import FiniteGroup
from .numerics import (
    Tolerances,
    containment_residual,
    flatten_basis,
    is_invertible,
    max_abs,
    nullspace,
    order_limit,
    probe_tiers,
    resolve,
    scaled_threshold,
    subspace_residual,
)
from .reporting import VerificationReport, not_applicable

logger = logging.getLogger(__name__)


class DimensionMismatch(Exception):
    """Raised when operand shapes do not agree."""
    pass


class NotInvertible(Exception):
    """Raised when an operator fails the conditioned invertibility test."""

    def __init__(self, message: str, ratio: float = 0.0):
        super().__init__(message)
        self.ratio = ratio


class InvalidExponent(Exception):
    """Raised for p outside [1, inf)."""
    pass


def _frozen_complex(values, ndim: int) -> np.ndarray:
    array = np.array(values, dtype=complex, copy=True)
    if array.ndim != ndim:
        raise DimensionMismatch(f"Expected a {ndim}-dimensional array, got shape {array.shape}")
    if not np.all(np.isfinite(array)):
        raise ValueError("Coefficients must be finite")
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class PNorm:
    p: float

    def __post_init__(self):
        p = self.p
        if isinstance(p, bool) or not isinstance(p, (int, float, np.integer, np.floating)):
            raise InvalidExponent(f"p must be a real number, got {p!r}")
        if not math.isfinite(p) or p < 1:
            raise InvalidExponent(f"p must lie in [1, inf), got {p}")
        object.__setattr__(self, "p", float(p))

    @classmethod
    def coerce(cls, value: Union["PNorm", float]) -> "PNorm":
        return value if isinstance(value, PNorm) else cls(value)

    @property
    def is_euclidean(self) -> bool:
        return self.p == 2.0

    def __str__(self) -> str:
        return format(self.p, "g")


@dataclass(frozen=True, eq=False)
class GVector:
    """Element of l^p(G); coeffs[g] is the coefficient of delta_g."""
    coeffs: np.ndarray
    group: FiniteGroup

    def __post_init__(self):
        coeffs = _frozen_complex(self.coeffs, 1)
        if coeffs.shape[0] != self.group.order:
            raise DimensionMismatch(f"Vector has {coeffs.shape[0]} coefficients, group order is {self.group.order}")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def delta(cls, group: FiniteGroup, g: int) -> "GVector":
        coeffs = np.zeros(group.order, dtype=complex)
        coeffs[group.check_element(g)] = 1.0
        return cls(coeffs, group)

    @classmethod
    def zeros(cls, group: FiniteGroup) -> "GVector":
        return cls(np.zeros(group.order, dtype=complex), group)

    def norm(self, p: Union[PNorm, float]) -> float:
        return p_norm(self, p)


@dataclass(frozen=True, eq=False)
class GFunctional:
    """Linear functional on l^p(G); coeffs[g] is its value on delta_g."""
    coeffs: np.ndarray
    group: FiniteGroup

    def __post_init__(self):
        coeffs = _frozen_complex(self.coeffs, 1)
        if coeffs.shape[0] != self.group.order:
            raise DimensionMismatch(f"Functional has {coeffs.shape[0]} coefficients, group order is {self.group.order}")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def zeta(cls, group: FiniteGroup, g: int) -> "GFunctional":
        coeffs = np.zeros(group.order, dtype=complex)
        coeffs[group.check_element(g)] = 1.0
        return cls(coeffs, group)

    def __call__(self, x: Union[GVector, np.ndarray]) -> complex:
        values = x.coeffs if isinstance(x, GVector) else np.asarray(x, dtype=complex)
        if values.shape != self.coeffs.shape:
            raise DimensionMismatch(f"Cannot apply functional of length {self.coeffs.shape[0]} to shape {values.shape}")
        return complex(np.sum(self.coeffs * values))


@dataclass(frozen=True, eq=False)
class LinOp:
    """Dense complex operator; `group` is None for operators not indexed by G."""
    matrix: np.ndarray
    group: Optional[FiniteGroup] = None

    def __post_init__(self):
        object.__setattr__(self, "matrix", _frozen_complex(self.matrix, 2))

    @classmethod
    def identity(cls, group: FiniteGroup) -> "LinOp":
        return cls(np.eye(group.order, dtype=complex), group)

    @property
    def shape(self):
        return self.matrix.shape

    @property
    def is_square(self) -> bool:
        return self.matrix.shape[0] == self.matrix.shape[1]

    def adjoint(self) -> "LinOp":
        return LinOp(self.matrix.conj().T, self.group)

    def __matmul__(self, other):
        if isinstance(other, LinOp):
            if self.shape[1] != other.shape[0]:
                raise DimensionMismatch(f"Cannot compose {self.shape} with {other.shape}")
            return LinOp(self.matrix @ other.matrix, self.group or other.group)
        if isinstance(other, GVector):
            if self.shape[1] != other.coeffs.shape[0]:
                raise DimensionMismatch(f"Cannot apply {self.shape} operator to a vector of length {other.coeffs.shape[0]}")
            result = self.matrix @ other.coeffs
            if self.group is not None and result.shape[0] == self.group.order:
                return GVector(result, self.group)
            return result
        return self.matrix @ np.asarray(other, dtype=complex)


def p_norm(x: Union[GVector, np.ndarray], p: Union[PNorm, float]) -> float:
    """(sum_g |x_g|^p)^(1/p)."""
    p = PNorm.coerce(p).p
    values = np.abs(x.coeffs if isinstance(x, GVector) else np.asarray(x, dtype=complex))
    if p == 2.0:
        return float(np.linalg.norm(values))
    if p == 1.0:
        return float(np.sum(values))
    return float(np.sum(values ** p) ** (1.0 / p))


def left_regular(group: FiniteGroup, g: int) -> LinOp:
    """lambda_g delta_h = delta_{gh}."""
    g = group.check_element(g)
    m = np.zeros((group.order, group.order), dtype=complex)
    m[group.table[g], np.arange(group.order)] = 1.0
    return LinOp(m, group)


def right_regular(group: FiniteGroup, g: int) -> LinOp:
    """rho_g delta_h = delta_{h g^-1}."""
    g = group.check_element(g)
    m = np.zeros((group.order, group.order), dtype=complex)
    m[group.table[:, group.inv(g)], np.arange(group.order)] = 1.0
    return LinOp(m, group)


def left_regular_ops(group: FiniteGroup) -> List[LinOp]:
    return [left_regular(group, g) for g in group.elements]


def right_regular_ops(group: FiniteGroup) -> List[LinOp]:
    return [right_regular(group, g) for g in group.elements]


def j_involution(group: FiniteGroup) -> LinOp:
    """J delta_g = delta_{g^-1}."""
    m = np.zeros((group.order, group.order), dtype=complex)
    m[group.inverses, np.arange(group.order)] = 1.0
    return LinOp(m, group)


def phi_conjugate(a: LinOp, group: Optional[FiniteGroup] = None) -> LinOp:
    """Phi(A) = JAJ."""
    group = group or a.group
    if group is None:
        raise DimensionMismatch("phi_conjugate needs the group the operator acts on")
    if a.shape != (group.order, group.order):
        raise DimensionMismatch(f"Operator of shape {a.shape} does not act on l^p of a group of order {group.order}")
    j = j_involution(group).matrix
    return LinOp(j @ a.matrix @ j, group)


def invert(a: LinOp, tolerances: Optional[Tolerances] = None) -> LinOp:
    """
    Inverse of a square operator.

    Raises:
        DimensionMismatch: If the operator is not square.
        NotInvertible: If the smallest singular value is below the invertibility
            tolerance relative to the largest.
    """
    tol = resolve(tolerances)
    if not a.is_square:
        raise DimensionMismatch(f"Only square operators are invertible, got {a.shape}")
    ok, ratio = is_invertible(a.matrix, tol.invertibility)
    if not ok:
        raise NotInvertible(f"Operator is not invertible (singular value ratio {ratio:.3e})", ratio)
    return LinOp(scipy.linalg.inv(a.matrix), a.group)


def commutant(ops: Sequence[LinOp], tolerances: Optional[Tolerances] = None) -> List[LinOp]:
    """
    Basis of {T : TA = AT for every A in ops}.

    T -> TA - AT is linear on row-major vec(T) with matrix I (x) A^T - A (x) I;
    the commutant is the nullspace of these maps stacked over all A.

    Raises:
        DimensionMismatch: If ops is empty or the operators differ in size.
    """
    tol = resolve(tolerances)
    if not ops:
        raise DimensionMismatch("commutant needs at least one operator")
    n = ops[0].shape[0]
    for op in ops:
        if op.shape != (n, n):
            raise DimensionMismatch(f"All operators must be {n}x{n}, got {op.shape}")

    eye = np.eye(n, dtype=complex)
    system = np.vstack([np.kron(eye, op.matrix.T) - np.kron(op.matrix, eye) for op in ops])
    kernel = nullspace(system, tol.structural_zero)
    group = ops[0].group
    basis = [LinOp(kernel[:, i].reshape(n, n), group) for i in range(kernel.shape[1])]
    logger.debug(f"Commutant of {len(ops)} operators of size {n}: dimension {len(basis)}")
    return basis


def double_commutant(ops: Sequence[LinOp], tolerances: Optional[Tolerances] = None) -> List[LinOp]:
    return commutant(commutant(ops, tolerances), tolerances)


def span_residual(op: LinOp, basis: Sequence[LinOp]) -> float:
    """Distance of the normalized operator from span(basis), in max-entry norm."""
    return containment_residual(flatten_basis([op.matrix]), flatten_basis([b.matrix for b in basis]))


def check_commutation_theorem(group: FiniteGroup, tolerances: Optional[Tolerances] = None,
                              max_order: Optional[int] = None) -> VerificationReport:
    """
    Verify lambda(G)' = rho(G)'' and rho(G)' = lambda(G)'' as subspaces.

    Args:
        group: The group.
        tolerances: Thresholds; configured values when None.
        max_order: Largest group order to attempt; configured limit when None.

    Returns:
        Report with the four subspace dimensions and both equality residuals.
    """
    check = "commutation-theorem"
    limit = order_limit(max_order)
    if group.order > limit:
        return not_applicable(check, f"group order {group.order} exceeds limit {limit}")

    tol = resolve(tolerances)
    lam = left_regular_ops(group)
    rho = right_regular_ops(group)
    lam_c = commutant(lam, tol)
    rho_c = commutant(rho, tol)
    lam_cc = commutant(lam_c, tol)
    rho_cc = commutant(rho_c, tol)

    report = VerificationReport(check=check)
    report.details.update({
        "dim_lambda_commutant": len(lam_c),
        "dim_rho_commutant": len(rho_c),
        "dim_lambda_double_commutant": len(lam_cc),
        "dim_rho_double_commutant": len(rho_cc),
    })
    flat = {name: flatten_basis([b.matrix for b in basis])
            for name, basis in [("lam_c", lam_c), ("rho_c", rho_c), ("lam_cc", lam_cc), ("rho_cc", rho_cc)]}
    report.record("lambda_commutant_vs_rho_double", subspace_residual(flat["lam_c"], flat["rho_cc"]), tol.residual)
    report.record("rho_commutant_vs_lambda_double", subspace_residual(flat["rho_c"], flat["lam_cc"]), tol.residual)
    report.record("lambda_in_double_commutant",
                  containment_residual(flatten_basis([op.matrix for op in lam]), flat["lam_cc"]), tol.residual)
    logger.info(f"Commutation theorem on {group.describe()}: {report.verdict.label}")
    return report


@dataclass
class IsometryVerdict:
    """Outcome of classify_lp_isometry."""
    is_isometry: bool
    method: str
    deviation: float
    witness: Optional[np.ndarray] = None

    def __bool__(self) -> bool:
        return self.is_isometry


def norm_witness(u: np.ndarray, p: float, q: Optional[float] = None,
                 threshold: float = 0.0) -> tuple:
    """
    Probe vector x maximizing |‖ux‖_p - ‖x‖_q|.

    Tiers of the probe set are scanned in order (basis vectors, pairwise sums,
    random vectors); the first tier containing a deviation above `threshold`
    supplies the witness.

    Returns:
        (witness vector, its deviation).
    """
    q = p if q is None else q
    best_x, best_dev = None, -1.0
    for tier in probe_tiers(u.shape[1]):
        for x in tier:
            dev = abs(p_norm(u @ x, p) - p_norm(x, q))
            if dev > best_dev:
                best_x, best_dev = x, dev
        if best_dev > threshold:
            break
    return best_x, best_dev


def classify_lp_isometry(u: LinOp, p: Union[PNorm, float],
                         tolerances: Optional[Tolerances] = None) -> IsometryVerdict:
    """
    Decide whether an invertible operator is an isometry of l^p.

    For p = 2 the test is u^H u = I. Otherwise u must be a generalized
    permutation: one nonzero entry per row and column, each of modulus 1.

    Raises:
        NotInvertible: If u fails the invertibility test.
    """
    tol = resolve(tolerances)
    p = PNorm.coerce(p)
    invert(u, tol)
    m = u.matrix
    n = m.shape[0]

    if p.is_euclidean:
        deviation = max_abs(m.conj().T @ m - np.eye(n))
        ok = deviation <= scaled_threshold(tol.residual, m)
        method = "unitary"
    else:
        zero = tol.structural_zero * max_abs(m)
        nonzero = np.abs(m) > zero
        one_per_line = bool(np.all(nonzero.sum(axis=0) == 1) and np.all(nonzero.sum(axis=1) == 1))
        deviation = float(np.max(np.abs(np.abs(m[nonzero]) - 1.0))) if nonzero.any() else 1.0
        if not one_per_line:
            deviation = max(deviation, 1.0)
        ok = one_per_line and deviation <= tol.unimodular
        method = "generalized-permutation"

    if ok:
        return IsometryVerdict(True, method, float(deviation))
    witness, _ = norm_witness(m, p.p, threshold=tol.residual)
    return IsometryVerdict(False, method, float(deviation), witness)


def check_phi_isomorphism(group: FiniteGroup, p: Union[PNorm, float] = 2.0,
                          tolerances: Optional[Tolerances] = None,
                          max_order: Optional[int] = None) -> VerificationReport:
    """
    Verify that Phi(A) = JAJ carries rho(G)'' onto lambda(G)'' as an algebra map.

    Checks on a basis of rho(G)'': images lie in lambda(G)'', Phi is
    multiplicative on basis products and an involution, Phi(rho_g) = lambda_g
    exactly, and invertibility and l^p isometry are preserved.
    """
    check = "phi-isomorphism"
    limit = order_limit(max_order)
    if group.order > limit:
        return not_applicable(check, f"group order {group.order} exceeds limit {limit}")

    tol = resolve(tolerances)
    p = PNorm.coerce(p)
    rho_cc = double_commutant(right_regular_ops(group), tol)
    lam_cc = double_commutant(left_regular_ops(group), tol)
    images = [phi_conjugate(b, group) for b in rho_cc]

    report = VerificationReport(check=check)
    report.details["dim_rho_double_commutant"] = len(rho_cc)
    report.details["dim_lambda_double_commutant"] = len(lam_cc)
    report.record("image_in_lambda_double_commutant",
                  containment_residual(flatten_basis([b.matrix for b in images]),
                                       flatten_basis([b.matrix for b in lam_cc])),
                  tol.residual)

    worst, worst_pair = 0.0, None
    for i, a in enumerate(rho_cc):
        for j, b in enumerate(rho_cc):
            dev = max_abs(phi_conjugate(a @ b, group).matrix - images[i].matrix @ images[j].matrix)
            if dev > worst:
                worst, worst_pair = dev, [i, j]
    report.record("multiplicative", worst, scaled_threshold(tol.residual), worst_pair)

    involution = max(max_abs(phi_conjugate(img, group).matrix - b.matrix) for b, img in zip(rho_cc, images))
    report.record("involution", involution, scaled_threshold(tol.exact))

    mismatched = [g for g in group.elements
                  if not np.array_equal(phi_conjugate(right_regular(group, g), group).matrix,
                                        left_regular(group, g).matrix)]
    report.require("rho_to_lambda_exact", not mismatched, mismatched)

    invertibility_flips = []
    isometry_flips = []
    candidates = list(rho_cc) + right_regular_ops(group)
    for index, op in enumerate(candidates):
        image = phi_conjugate(op, group)
        before, _ = is_invertible(op.matrix, tol.invertibility)
        after, _ = is_invertible(image.matrix, tol.invertibility)
        if before != after:
            invertibility_flips.append(index)
            continue
        if before and bool(classify_lp_isometry(op, p, tol)) != bool(classify_lp_isometry(image, p, tol)):
            isometry_flips.append(index)
    report.require("preserves_invertibility", not invertibility_flips, invertibility_flips)
    report.require("preserves_isometry", not isometry_flips, isometry_flips)
    report.details["p"] = p.p
    logger.info(f"Phi isomorphism on {group.describe()}: {report.verdict.label}")
    return report
