"""
Dense linear-algebra helpers shared by the frame modules.

Thresholds, nullspaces, ranks, subspace containment and the deterministic
probe set used by sampled isometry checks all live here so that every check
applies the same tolerance policy.
"""

import logging
from dataclasses import dataclass, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from .config_loader import get_config, get_tolerances

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Tolerances:
    """Absolute tolerances; scaled by `scaled_threshold` before use."""
    residual: float = 1e-9
    exact: float = 1e-12
    invertibility: float = 1e-8
    structural_zero: float = 1e-10
    unimodular: float = 1e-9

    @classmethod
    def from_settings(cls) -> "Tolerances":
        section = get_tolerances()
        return cls(**{name: float(section[name]) for name in cls.__dataclass_fields__})

    def override(self, **values: Optional[float]) -> "Tolerances":
        """Return a copy with every non-None value replaced."""
        changes = {name: float(value) for name, value in values.items() if value is not None}
        return replace(self, **changes)

    def as_dict(self) -> dict:
        return {name: getattr(self, name) for name in self.__dataclass_fields__}


def resolve(tolerances: Optional[Tolerances]) -> Tolerances:
    """Fall back to the configured tolerances when none are given."""
    return tolerances if tolerances is not None else Tolerances.from_settings()


def order_limit(max_order: Optional[int] = None) -> int:
    """Largest group order a brute-force check attempts; `limits.max_group_order` when None."""
    return int(max_order if max_order is not None else get_config("limits.max_group_order"))


def max_abs(*arrays: np.ndarray) -> float:
    """Largest entry modulus over all arrays (0.0 for empty input)."""
    best = 0.0
    for a in arrays:
        a = np.asarray(a)
        if a.size:
            best = max(best, float(np.max(np.abs(a))))
    return best


def scaled_threshold(tol: float, *arrays: np.ndarray) -> float:
    """tol * max(1, largest entry modulus of the operators involved)."""
    return tol * max(1.0, max_abs(*arrays))


def singular_values(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m)
    if m.size == 0:
        return np.zeros(0)
    return np.linalg.svd(m, compute_uv=False)


def matrix_rank(m: np.ndarray, rel_tol: float) -> int:
    """Number of singular values above rel_tol times the largest one."""
    s = singular_values(m)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > rel_tol * s[0]))


def is_invertible(m: np.ndarray, rel_tol: float) -> Tuple[bool, float]:
    """
    Decide invertibility of a square matrix by its singular values.

    Returns:
        (verdict, smallest/largest singular value ratio).
    """
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False, 0.0
    s = singular_values(m)
    if s.size == 0:
        return True, 1.0
    if s[0] == 0.0:
        return False, 0.0
    ratio = float(s[-1] / s[0])
    return ratio > rel_tol, ratio


def nullspace(m: np.ndarray, rel_tol: float = 1e-10) -> np.ndarray:
    """
    Orthonormal basis of the nullspace of m, one vector per column.

    Singular values below rel_tol times the largest count as zero.
    """
    m = np.asarray(m)
    rows, cols = m.shape
    if cols == 0:
        return np.zeros((0, 0), dtype=m.dtype)
    # economy SVD keeps all right singular vectors as long as rows >= cols
    _, s, vh = np.linalg.svd(m, full_matrices=rows < cols)
    if s.size == 0 or s[0] == 0.0:
        rank = 0
    else:
        rank = int(np.sum(s > rel_tol * s[0]))
    return vh[rank:].conj().T.copy()


def orthonormal_span(vectors: np.ndarray, rel_tol: float = 1e-10) -> np.ndarray:
    """Orthonormal basis (columns) for the column span of `vectors`."""
    vectors = np.asarray(vectors)
    if vectors.size == 0 or max_abs(vectors) == 0.0:
        return np.zeros((vectors.shape[0], 0), dtype=complex)
    return scipy.linalg.orth(vectors, rcond=rel_tol)


def flatten_basis(ops: Sequence[np.ndarray]) -> np.ndarray:
    """Stack operators as row-major vectorized columns."""
    if not ops:
        return np.zeros((0, 0), dtype=complex)
    return np.column_stack([np.asarray(op, dtype=complex).reshape(-1) for op in ops])


def containment_residual(inner: np.ndarray, outer: np.ndarray) -> float:
    """
    Largest entry of the part of span(inner) outside span(outer).

    Both arguments hold vectors as columns. Columns of `inner` are normalized
    first so the residual is comparable across bases of different scale.
    """
    inner = np.asarray(inner, dtype=complex)
    if inner.size == 0:
        return 0.0
    norms = np.linalg.norm(inner, axis=0)
    norms[norms == 0.0] = 1.0
    inner = inner / norms
    q = orthonormal_span(outer)
    if q.shape[1] == 0:
        return max_abs(inner)
    return max_abs(inner - q @ (q.conj().T @ inner))


def subspace_residual(a: np.ndarray, b: np.ndarray) -> float:
    """Two-sided containment residual; zero iff span(a) == span(b)."""
    return max(containment_residual(a, b), containment_residual(b, a))


def probe_vectors(dim: int, random_count: Optional[int] = None,
                  seed: Optional[int] = None) -> List[np.ndarray]:
    """
    Deterministic probe set in C^dim.

    Basis vectors first, then all pairwise sums, then seeded complex Gaussian
    vectors. Callers rely on this order when picking witnesses.
    """
    if random_count is None:
        random_count = int(get_config("probes.random_count"))
    if seed is None:
        seed = int(get_config("probes.seed"))

    eye = np.eye(dim, dtype=complex)
    probes = [eye[i] for i in range(dim)]
    probes.extend(eye[i] + eye[j] for i in range(dim) for j in range(i + 1, dim))
    rng = np.random.default_rng(seed)
    for _ in range(random_count):
        probes.append(rng.standard_normal(dim) + 1j * rng.standard_normal(dim))
    return probes


def probe_tiers(dim: int, random_count: Optional[int] = None,
                seed: Optional[int] = None) -> List[List[np.ndarray]]:
    """The probe set split into its basis, pairwise-sum and random tiers."""
    probes = probe_vectors(dim, random_count, seed)
    n_pairs = dim * (dim - 1) // 2
    return [probes[:dim], probes[dim:dim + n_pairs], probes[dim + n_pairs:]]


def random_complex(rng: np.random.Generator, *shape: int) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
