"""
Finite group arithmetic for gsframes.

Groups are stored as multiplication tables on the element indices 0..n-1.
Finite abelian groups additionally carry their cyclic factor orders; an
element is the mixed-radix flattening of its exponent tuple with the first
factor most significant. Characters exist only for abelian groups.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from functools import reduce
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .numerics import Tolerances, resolve, scaled_threshold
from .reporting import VerificationReport

logger = logging.getLogger(__name__)


class NotAGroup(Exception):
    """Raised when a table violates a group axiom; `witness` locates the violation."""

    def __init__(self, message: str, axiom: str, witness: Tuple[int, ...]):
        super().__init__(message)
        self.axiom = axiom
        self.witness = witness


class EmptyOrders(Exception):
    """Raised when an abelian group is requested without cyclic factors."""
    pass


class InvalidElement(Exception):
    """Raised when an element index lies outside the group."""
    pass


def _readonly(array: np.ndarray) -> np.ndarray:
    array = np.array(array, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A finite group given by its multiplication table: table[g][h] = g*h."""
    order: int
    table: np.ndarray
    identity: int
    inverses: np.ndarray
    label: str = ""

    @property
    def elements(self) -> range:
        return range(self.order)

    @property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def mul(self, g: int, h: int) -> int:
        return int(self.table[g, h])

    def inv(self, g: int) -> int:
        return int(self.inverses[g])

    def check_element(self, g: int) -> int:
        if isinstance(g, bool) or not isinstance(g, (int, np.integer)) or not 0 <= g < self.order:
            raise InvalidElement(f"Element {g!r} is not in a group of order {self.order}")
        return int(g)

    def element_order(self, g: int) -> int:
        g = self.check_element(g)
        k, x = 1, g
        while x != self.identity:
            x = self.mul(x, g)
            k += 1
        return k

    def describe(self) -> str:
        return self.label or f"group of order {self.order}"


@dataclass(frozen=True, eq=False)
class AbelianGroup(FiniteGroup):
    """Z_{n_1} x ... x Z_{n_k} with componentwise addition."""
    orders: Tuple[int, ...] = ()

    def encode(self, exponents: Sequence[int]) -> int:
        if len(exponents) != len(self.orders):
            raise InvalidElement(f"Expected {len(self.orders)} components, got {len(exponents)}")
        reduced = [int(a) % n for a, n in zip(exponents, self.orders)]
        return int(np.ravel_multi_index(reduced, self.orders))

    def decode(self, g: int) -> Tuple[int, ...]:
        g = self.check_element(g)
        return tuple(int(a) for a in np.unravel_index(g, self.orders))

    def add(self, g: int, h: int) -> int:
        return self.mul(g, h)

    def neg(self, g: int) -> int:
        return self.inv(g)

    @property
    def exponent(self) -> int:
        """Least common multiple of the cyclic factor orders."""
        return reduce(lambda a, b: a * b // math.gcd(a, b), self.orders, 1)


@dataclass(frozen=True, eq=False)
class Character:
    """xi(g) = exp(2 pi i sum_j c_j a_j / n_j) for exponent tuple c."""
    exponents: Tuple[int, ...]
    parent: AbelianGroup

    @property
    def index(self) -> int:
        return self.parent.encode(self.exponents)

    @property
    def is_trivial(self) -> bool:
        return all(c == 0 for c in self.exponents)

    def values(self) -> np.ndarray:
        return character_table(self.parent)[self.index]

    def __call__(self, g: int) -> complex:
        return complex(self.values()[self.parent.check_element(g)])


def build_group_from_table(table: Sequence[Sequence[int]], label: str = "") -> FiniteGroup:
    """
    Build a FiniteGroup from a multiplication table, verifying the axioms.

    Args:
        table: Square array with table[g][h] = g*h as element indices.
        label: Optional human-readable name.

    Returns:
        FiniteGroup with identity and inverses located.

    Raises:
        NotAGroup: If the table is malformed or an axiom fails; the witness
            names the offending element(s).
    """
    try:
        t = np.asarray(table, dtype=np.int64)
    except (TypeError, ValueError) as e:
        raise NotAGroup(f"Table is not an integer array: {e}", "shape", ())
    if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
        raise NotAGroup(f"Table must be a non-empty square array, got shape {t.shape}", "shape", ())
    n = t.shape[0]

    bad = np.argwhere((t < 0) | (t >= n))
    if bad.size:
        g, h = (int(v) for v in bad[0])
        raise NotAGroup(f"Entry table[{g}][{h}] = {t[g, h]} is outside 0..{n - 1}", "closure", (g, h))

    rng = np.arange(n)
    identity = None
    for e in range(n):
        if np.array_equal(t[e], rng) and np.array_equal(t[:, e], rng):
            identity = e
            break
    if identity is None:
        raise NotAGroup("Table has no two-sided identity element", "identity", ())

    inverses = np.full(n, -1, dtype=np.int64)
    for g in range(n):
        candidates = np.flatnonzero((t[g] == identity) & (t[:, g] == identity))
        if candidates.size == 0:
            raise NotAGroup(f"Element {g} has no two-sided inverse", "inverse", (g,))
        inverses[g] = candidates[0]

    # lhs[a,b,c] = (ab)c and rhs[a,b,c] = a(bc)
    lhs = t[t]
    rhs = t[rng[:, None, None], t[None, :, :]]
    bad = np.argwhere(lhs != rhs)
    if bad.size:
        a, b, c = (int(v) for v in bad[0])
        raise NotAGroup(f"Associativity fails for ({a}, {b}, {c})", "associativity", (a, b, c))

    for axis, name in [(1, "row"), (0, "column")]:
        sorted_t = np.sort(t, axis=axis)
        expected = rng[None, :] if axis == 1 else rng[:, None]
        bad = np.argwhere(np.any(sorted_t != expected, axis=axis))
        if bad.size:
            raise NotAGroup(f"Table {name} {int(bad[0][0])} is not a permutation", "latin", (int(bad[0][0]),))

    logger.debug(f"Built group of order {n} with identity {identity}")
    return FiniteGroup(order=n, table=_readonly(t), identity=int(identity),
                       inverses=_readonly(inverses), label=label)


def build_abelian(orders: Sequence[int], label: str = "") -> AbelianGroup:
    """
    Build Z_{n_1} x ... x Z_{n_k}.

    Raises:
        EmptyOrders: If no factor orders are given.
        ValueError: If a factor order is not a positive integer.
    """
    orders = list(orders)
    if not orders:
        raise EmptyOrders("An abelian group needs at least one cyclic factor")
    for n in orders:
        if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
            raise ValueError(f"Cyclic factor orders must be positive integers, got {n!r}")
    orders = tuple(int(n) for n in orders)

    size = int(np.prod(orders))
    digits = np.stack(np.unravel_index(np.arange(size), orders), axis=1)
    summed = (digits[:, None, :] + digits[None, :, :]) % np.asarray(orders)
    table = np.ravel_multi_index(tuple(np.moveaxis(summed, -1, 0)), orders)
    inverses = np.ravel_multi_index(tuple(((-digits) % np.asarray(orders)).T), orders)

    if not label:
        label = " x ".join(f"Z_{n}" for n in orders)
    return AbelianGroup(order=size, table=_readonly(table), identity=0,
                        inverses=_readonly(inverses), label=label, orders=orders)


def symmetric_group(degree: int) -> FiniteGroup:
    """S_degree as permutations of 0..degree-1 composed right to left."""
    perms = list(itertools.permutations(range(degree)))
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[tuple(p[q[i]] for i in range(degree))] for q in perms] for p in perms]
    return build_group_from_table(table, label=f"S_{degree}")


def _root_of_unity(numerator: np.ndarray, denominator: int) -> np.ndarray:
    """exp(2 pi i k / N), exact at multiples of a quarter turn."""
    k = np.mod(numerator, denominator)
    values = np.exp(2j * np.pi * k / denominator)
    quarter = (4 * k) % denominator == 0
    exact = np.array([1, 1j, -1, -1j], dtype=complex)
    values[quarter] = exact[(4 * k[quarter]) // denominator]
    return values


_CHARACTER_TABLES: Dict[Tuple[int, ...], np.ndarray] = {}


def character_table(group: AbelianGroup) -> np.ndarray:
    """
    Matrix X with X[c][g] = xi_c(g); row c is the character with index c.

    Tables depend only on the factor orders and are cached by them.
    """
    cached = _CHARACTER_TABLES.get(group.orders)
    if cached is not None:
        return cached
    n = group.order
    N = group.exponent
    digits = np.stack(np.unravel_index(np.arange(n), group.orders), axis=1)
    weights = np.asarray([N // m for m in group.orders])
    phase = (digits * weights) @ digits.T
    table = _readonly(_root_of_unity(phase, N))
    _CHARACTER_TABLES[group.orders] = table
    return table


def characters(group: AbelianGroup) -> List[Character]:
    """All o(G) characters, listed in element-index order of their exponents."""
    return [Character(exponents=group.decode(c), parent=group) for c in range(group.order)]


def check_character_orthogonality(group: AbelianGroup,
                                  tolerances: Optional[Tolerances] = None) -> VerificationReport:
    """
    Verify orthogonality of characters and the dual relation over elements.

    (1/o(G)) sum_g xi(g) conj(chi(g)) = delta_{xi,chi} for all character pairs and
    (1/o(G)) sum_xi xi(g) conj(xi(h)) = delta_{g,h} for all element pairs.
    """
    tol = resolve(tolerances)
    n = group.order
    X = character_table(group)
    eye = np.eye(n)
    report = VerificationReport(check="character-orthogonality")

    by_character = X @ X.conj().T / n - eye
    by_element = X.T @ X.conj() / n - eye
    limit = scaled_threshold(tol.exact)
    for name, deviation in [("characters", by_character), ("elements", by_element)]:
        worst = np.unravel_index(np.argmax(np.abs(deviation)), deviation.shape)
        report.record(name, float(np.abs(deviation[worst])), limit,
                      witness=[int(worst[0]), int(worst[1])])

    unimodular = float(np.max(np.abs(np.abs(X) - 1.0)))
    report.record("unimodular", unimodular, limit)
    # multiplicativity xi(g+h) = xi(g) xi(h)
    multiplicative = X[:, group.table] - X[:, :, None] * X[:, None, :]
    report.record("multiplicativity", float(np.max(np.abs(multiplicative))), limit)
    report.details["characters"] = n
    logger.info(f"Character orthogonality on {group.describe()}: {report.verdict.label}")
    return report


def subgroup_from_generators(group: FiniteGroup, gens: Iterable[int]) -> FrozenSet[int]:
    """
    Closure of `gens` under multiplication and inversion.

    Raises:
        InvalidElement: If a generator is not an element of the group.
        NotAGroup: If the closure order does not divide o(G), which can only
            happen for a corrupted table.
    """
    gens = [group.check_element(g) for g in gens]
    subgroup = {group.identity}
    frontier = list(subgroup)
    gens = sorted(set(gens) | {group.inv(g) for g in gens})
    subgroup.update(gens)
    frontier.extend(gens)
    while frontier:
        a = frontier.pop()
        for g in gens:
            b = group.mul(a, g)
            if b not in subgroup:
                subgroup.add(b)
                frontier.append(b)
    if group.order % len(subgroup):
        raise NotAGroup(f"Subgroup of order {len(subgroup)} in a group of order {group.order}",
                        "lagrange", tuple(sorted(subgroup)))
    return frozenset(subgroup)


def describe_group(group: FiniteGroup) -> VerificationReport:
    """Structural summary of a group as an informational report."""
    report = VerificationReport(check="group-info")
    report.details.update({
        "label": group.describe(),
        "order": group.order,
        "abelian": group.is_abelian,
        "identity": group.identity,
        "inverses": [int(v) for v in group.inverses],
        "element_orders": [group.element_order(g) for g in group.elements],
    })
    if isinstance(group, AbelianGroup):
        report.details["cyclic_factors"] = list(group.orders)
    return report
