"""
gsframes

Group-generated unconditional Schauder frames on l^p(G) for finite groups and
the finite Gabor-Schauder frame calculus on finite abelian groups, with every
identity available as an executable check.
"""

__version__ = "0.1.0"

# Package metadata
__title__ = "group-schauder-frames"
__description__ = "Executable checks for group-generated Schauder frames and finite Gabor-Schauder frames"

from . import config_loader, logging_config
from .config_loader import get_config, load_config, validate_config

from . import group_core
from .group_core import (
    AbelianGroup,
    Character,
    FiniteGroup,
    NotAGroup,
    build_abelian,
    build_group_from_table,
    character_table,
    characters,
    subgroup_from_generators,
    symmetric_group,
)

from . import lp_ops
from .lp_ops import GFunctional, GVector, LinOp, PNorm, classify_lp_isometry, commutant, double_commutant

from . import pusf
from .pusf import FramePair, build_representation, check_shift_invariance, is_group_matrix, orbit_pair, verify_p_usf

from . import gabor
from .gabor import GaborPair, Lattice, TFPoint, adjoint_lattice, frame_operator, tf_shift

from . import reporting
from .reporting import Verdict, VerificationReport, emit_report, parse_reports

from . import job_config, commands
from .job_config import JobConfig, parse_config
from .commands import run_command

# Import CLI module to make it available
from . import cli
