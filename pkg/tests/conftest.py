"""
Shared builders for the gsframes test suite: named groups, seeded group-p-USFs
and perturbed pairs whose Gramian is not a group matrix.
"""

import sys
from pathlib import Path

import numpy as np
import pytest

# Add src to Python path for testing
src_path = Path(__file__).resolve().parent.parent / "src"
if str(src_path) not in sys.path:
    sys.path.insert(0, str(src_path))

from gsframes.config_loader import clear_config_cache
from gsframes.group_core import build_abelian, build_group_from_table, symmetric_group
from gsframes.pusf import random_group_pair, random_subspace_pair

PROJECT_ROOT = Path(__file__).resolve().parent.parent
CONFIGS_DIR = PROJECT_ROOT / "configs"
GOLDEN_DIR = Path(__file__).resolve().parent / "golden"


def cyclic_table(n):
    return [[(g + h) % n for h in range(n)] for g in range(n)]


def make_group(name):
    """Build a group from a short name: "Z_4", "Z_2xZ_4", "S_3" or "Z_3table"."""
    if name == "S_3":
        return symmetric_group(3)
    if name.endswith("table"):
        n = int(name[2:-len("table")])
        return build_group_from_table(cyclic_table(n), label=f"Z_{n} (table)")
    orders = [int(part[2:]) for part in name.split("x")]
    return build_abelian(orders)


ABELIAN_NAMES = ["Z_2", "Z_3", "Z_4", "Z_6", "Z_2xZ_2", "Z_2xZ_4"]
SMALL_ABELIAN_NAMES = ["Z_1", "Z_2", "Z_3", "Z_4", "Z_2xZ_2", "Z_6"]


def group_pairs(group, count, seed=0, p=2.0):
    """`count` seeded group-p-USFs on `group`."""
    return [random_group_pair(group, seed + i, p) for i in range(count)]


def non_group_pairs(group, count, seed=1000, p=2.0):
    """`count` seeded p-USFs on random proper subspaces."""
    return [random_subspace_pair(group, seed + i, p) for i in range(count)]


def random_vector(n, seed):
    rng = np.random.default_rng(seed)
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)


@pytest.fixture(autouse=True)
def fresh_settings():
    """Every test starts from the packaged settings."""
    clear_config_cache()
    yield
    clear_config_cache()


@pytest.fixture
def z2():
    return build_abelian([2])


@pytest.fixture
def z3():
    return build_abelian([3])


@pytest.fixture
def z4():
    return build_abelian([4])


@pytest.fixture
def z2xz4():
    return build_abelian([2, 4])


@pytest.fixture
def s3():
    return symmetric_group(3)
