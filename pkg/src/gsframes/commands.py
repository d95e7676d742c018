"""
Command registry and dispatch.

Each command name maps to exactly one check function. `run_command` builds the
objects a command needs from a validated JobConfig, resolves tolerances and the
seed, runs the check and stamps provenance on every report.
"""

import logging
from dataclasses import dataclass, replace
from typing import Callable, Dict, FrozenSet, List, Optional, Tuple

import numpy as np

from . import gabor, group_core, lp_ops, pusf
from .config_loader import get_config
from .gabor import GaborPair, Lattice
from .group_core import AbelianGroup, FiniteGroup
from .job_config import ConfigValidationError, JobConfig
from .lp_ops import LinOp, PNorm
from .numerics import Tolerances, random_complex, scaled_threshold, max_abs
from .pusf import AmbientNorm, FramePair
from .reporting import VerificationReport

logger = logging.getLogger(__name__)


class UnknownCommand(Exception):
    """Raised when a job names a command that is not registered."""

    def __init__(self, name: str):
        super().__init__(f"Unknown command: {name}. Use --list-commands to see the available commands")
        self.name = name


# Precondition failures raised while a command runs; the CLI exits with 1.
RUNTIME_ERRORS = (
    pusf.PreconditionFailed,
    pusf.NotInCommutant,
    pusf.NotIsometry,
    gabor.NotAFrame,
    gabor.VanishingPairing,
    lp_ops.NotInvertible,
    lp_ops.DimensionMismatch,
)


@dataclass
class RunContext:
    """Everything a command function may use."""
    cfg: JobConfig
    tolerances: Tolerances
    seed: int
    verify_adjoint_by_matrices: bool = False

    @property
    def group(self) -> FiniteGroup:
        return self.cfg.group


@dataclass(frozen=True)
class Command:
    name: str
    function: Callable[[RunContext], List[VerificationReport]]
    requires: FrozenSet[str]
    description: str


_REGISTRY: Dict[str, Command] = {}


def command(name: str, description: str, requires: Tuple[str, ...] = ()):
    """Register a command function under `name`."""
    def decorator(function):
        _REGISTRY[name] = Command(name, function, frozenset(requires), description)
        return function
    return decorator


def list_commands() -> List[Command]:
    return [_REGISTRY[name] for name in sorted(_REGISTRY)]


def get_command(name: str) -> Command:
    if name not in _REGISTRY:
        raise UnknownCommand(name)
    return _REGISTRY[name]


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------

def _ambient(cfg: JobConfig) -> AmbientNorm:
    return AmbientNorm(kind=cfg.ambient.get("norm", "pullback"), q=cfg.ambient.get("q"))


def build_frame_pair(ctx: RunContext) -> FramePair:
    """FramePair from explicit families or a pair preset; presets use the left regular representation."""
    cfg, group = ctx.cfg, ctx.group
    p = PNorm(cfg.p)
    ambient = _ambient(cfg)
    try:
        if cfg.frame is not None:
            return FramePair.from_families(group, cfg.frame["functionals"], cfg.frame["vectors"], p, ambient)
        if cfg.pair == "standard":
            return pusf.standard_pair(group, p, ambient)
        if cfg.pair_seed is not None:
            return replace(pusf.random_group_pair(group, ctx.seed, p), ambient=ambient)
        return pusf.generate_pair(group, pusf.left_regular_family(group), cfg.pair["f"], cfg.pair["tau"],
                                  p, ambient)
    except pusf.FrameShapeError as e:
        raise ConfigValidationError("frame", str(e))


def build_gabor_pair(ctx: RunContext) -> GaborPair:
    """GaborPair from a preset or explicit coefficients; "standard" is (zeta_e, delta_e)."""
    cfg, group = ctx.cfg, ctx.group
    n = group.order
    try:
        if cfg.pair == "standard":
            basis = np.zeros(n, dtype=complex)
            basis[group.identity] = 1.0
            return GaborPair(group, basis, basis)
        if cfg.pair_seed is not None:
            rng = np.random.default_rng(ctx.seed)
            return GaborPair(group, random_complex(rng, n), random_complex(rng, n))
        return GaborPair(group, cfg.pair["f"], cfg.pair["tau"])
    except gabor.ZeroGenerator as e:
        raise ConfigValidationError("pair", str(e))


def build_lattice(ctx: RunContext) -> Lattice:
    """Closure of the configured generators; the full phase space when none are given."""
    if ctx.cfg.lattice is None:
        return gabor.full_lattice(ctx.group)
    return gabor.lattice_from_generators(ctx.group, ctx.cfg.lattice)


def build_orbit_operator(ctx: RunContext, dim: int) -> LinOp:
    kind, value = ctx.cfg.orbit["kind"], ctx.cfg.orbit["value"]
    group = ctx.group
    if kind == "scalar":
        return LinOp(value * np.eye(dim, dtype=complex), group)
    if kind == "left-regular":
        u = lp_ops.left_regular(group, value)
    elif kind == "right-regular":
        u = lp_ops.right_regular(group, value)
    else:
        u = LinOp(value, group)
    if u.shape != (dim, dim):
        raise ConfigValidationError(f"orbit.operator.{kind}",
                                    f"operator has shape {u.shape}, the ambient space has dimension {dim}")
    return u


# ---------------------------------------------------------------------------
# group_core and lp_ops
# ---------------------------------------------------------------------------

@command("group-info", "Order, identity, inverses and element orders of the group")
def _group_info(ctx: RunContext) -> List[VerificationReport]:
    return [group_core.describe_group(ctx.group)]


@command("character-orthogonality", "Orthogonality and multiplicativity of the character table",
         requires=("abelian",))
def _character_orthogonality(ctx: RunContext) -> List[VerificationReport]:
    return [group_core.check_character_orthogonality(ctx.group, ctx.tolerances)]


@command("commutation-theorem", "lambda(G)' = rho(G)'' and rho(G)' = lambda(G)''")
def _commutation_theorem(ctx: RunContext) -> List[VerificationReport]:
    return [lp_ops.check_commutation_theorem(ctx.group, ctx.tolerances)]


@command("phi-isomorphism", "Phi(A) = JAJ maps rho(G)'' onto lambda(G)''")
def _phi_isomorphism(ctx: RunContext) -> List[VerificationReport]:
    return [lp_ops.check_phi_isomorphism(ctx.group, ctx.cfg.p, ctx.tolerances)]


# ---------------------------------------------------------------------------
# pusf
# ---------------------------------------------------------------------------

@command("check-pusf", "Reconstruction, analysis isometry and Gramian projection; factorization",
         requires=("frame_or_pair",))
def _check_pusf(ctx: RunContext) -> List[VerificationReport]:
    pair = build_frame_pair(ctx)
    return [pusf.verify_p_usf(pair, ctx.tolerances), pusf.check_factorization(pair, ctx.tolerances)]


def _regeneration_report(pair: FramePair, rep: pusf.RepresentationFamily,
                         tol: Tolerances) -> VerificationReport:
    regenerated = pusf.regenerate_families(rep, pair)
    report = VerificationReport(check="regeneration")
    limit = scaled_threshold(tol.residual, pair.functionals, pair.vectors)
    report.record("functionals", max_abs(regenerated.functionals - pair.functionals), limit)
    report.record("vectors", max_abs(regenerated.vectors - pair.vectors), limit)
    return report


@command("check-groupframe", "Shift invariance, group-matrix Gramian and representation rebuild",
         requires=("frame_or_pair",))
def _check_groupframe(ctx: RunContext) -> List[VerificationReport]:
    tol = ctx.tolerances
    pair = build_frame_pair(ctx)
    reports = [pusf.verify_p_usf(pair, tol), pusf.check_shift_invariance(pair, tol),
               pusf.check_gramian_commutes_left_regular(pair, tol)]
    if any(r.failed for r in reports):
        return reports
    rep = pusf.build_representation(pair, tol)
    reports.extend([
        rep.report,
        pusf.check_intertwining(pair, rep, tol),
        pusf.check_right_regular_decomposition(pair, rep, tol),
        _regeneration_report(pair, rep, tol),
    ])
    return reports


@command("orbit-pair", "Move a group-p-USF by an isometry in the (double) commutant",
         requires=("frame_or_pair", "orbit"))
def _orbit_pair(ctx: RunContext) -> List[VerificationReport]:
    tol = ctx.tolerances
    pair = build_frame_pair(ctx)
    rep = pusf.build_representation(pair, tol)
    u = build_orbit_operator(ctx, pair.dim)
    mode = ctx.cfg.orbit["mode"]
    moved = pusf.orbit_pair(pair, rep, u, mode, tol)

    report = VerificationReport(check="orbit-pair")
    report.absorb(pusf.verify_p_usf(moved, tol), "p_usf")
    report.absorb(pusf.check_shift_invariance(moved, tol), "shift_invariance")
    report.details["mode"] = mode
    report.details["operator"] = ctx.cfg.orbit["kind"]
    report.details["f_e"] = moved.functional(moved.group.identity)
    report.details["tau_e"] = moved.vector(moved.group.identity)
    return [report]


# ---------------------------------------------------------------------------
# gabor
# ---------------------------------------------------------------------------

@command("tf-commutation", "Composition, commutation and inversion rules of time-frequency shifts",
         requires=("abelian",))
def _tf_commutation(ctx: RunContext) -> List[VerificationReport]:
    return [gabor.check_tf_commutation(ctx.group, ctx.tolerances)]


@command("hs-onb", "Time-frequency shifts form an orthogonal basis for Hilbert-Schmidt operators",
         requires=("abelian",))
def _hs_onb(ctx: RunContext) -> List[VerificationReport]:
    return [gabor.check_hs_onb(ctx.group, ctx.tolerances)]


@command("moyal", "V_tau W_f = o(G) f(tau) I", requires=("abelian", "pair"))
def _moyal(ctx: RunContext) -> List[VerificationReport]:
    return [gabor.moyal_check(build_gabor_pair(ctx), ctx.tolerances)]


@command("inversion", "Reconstruct x from its full time-frequency expansion", requires=("abelian", "pair", "x"))
def _inversion(ctx: RunContext) -> List[VerificationReport]:
    return [gabor.check_inversion(build_gabor_pair(ctx), ctx.cfg.x, ctx.tolerances)]


@command("adjoint-lattice", "Adjoint lattice, its order and the double adjoint", requires=("abelian",))
def _adjoint_lattice(ctx: RunContext) -> List[VerificationReport]:
    return [gabor.check_adjoint_lattice(build_lattice(ctx), ctx.tolerances, ctx.verify_adjoint_by_matrices)]


@command("frame-check", "Invertibility of the frame operator and its commutation with the lattice",
         requires=("abelian", "pair"))
def _frame_check(ctx: RunContext) -> List[VerificationReport]:
    pair, lam = build_gabor_pair(ctx), build_lattice(ctx)
    return [gabor.check_frame(pair, lam, ctx.tolerances), gabor.check_frame_op_commutes(pair, lam, ctx.tolerances)]


@command("gabor-dual", "Canonical dual generators and both dual reconstructions", requires=("abelian", "pair"))
def _gabor_dual(ctx: RunContext) -> List[VerificationReport]:
    return [gabor.check_canonical_dual(build_gabor_pair(ctx), build_lattice(ctx), ctx.tolerances)]


@command("janssen", "Frame operator as a combination of adjoint-lattice shifts", requires=("abelian", "pair"))
def _janssen(ctx: RunContext) -> List[VerificationReport]:
    return [gabor.check_janssen(build_gabor_pair(ctx), build_lattice(ctx), ctx.tolerances)]


@command("wexler-raz", "Biorthogonality on the adjoint lattice versus S = I", requires=("abelian", "pair"))
def _wexler_raz(ctx: RunContext) -> List[VerificationReport]:
    return [gabor.wexler_raz_check(build_gabor_pair(ctx), build_lattice(ctx), ctx.tolerances)]


@command("ron-shen", "Linear independence over the adjoint lattice for a frame", requires=("abelian", "pair"))
def _ron_shen(ctx: RunContext) -> List[VerificationReport]:
    return [gabor.ron_shen_check(build_gabor_pair(ctx), build_lattice(ctx), ctx.tolerances)]


# ---------------------------------------------------------------------------
# Dispatch
# ---------------------------------------------------------------------------

def _check_requirements(cmd: Command, cfg: JobConfig) -> None:
    if "abelian" in cmd.requires and not isinstance(cfg.group, AbelianGroup):
        raise ConfigValidationError("group", f"command '{cmd.name}' needs an abelian group given by its factor orders")
    if "pair" in cmd.requires and cfg.pair is None:
        raise ConfigValidationError("pair", f"required by command '{cmd.name}'")
    if "frame_or_pair" in cmd.requires and cfg.pair is None and cfg.frame is None:
        raise ConfigValidationError("pair", f"command '{cmd.name}' needs a pair or explicit frame families")
    for name in ("x", "orbit"):
        if name in cmd.requires and getattr(cfg, name) is None:
            raise ConfigValidationError(name, f"required by command '{cmd.name}'")


def resolve_tolerances(cfg: JobConfig, tolerance: Optional[float] = None) -> Tolerances:
    """Settings, then the job's tolerance block, then the command-line value."""
    tol = Tolerances.from_settings().override(**cfg.tolerance)
    if tolerance is not None:
        tol = tol.override(residual=tolerance, exact=tolerance)
    return tol


def resolve_seed(cfg: JobConfig, seed: Optional[int] = None) -> int:
    """Command line, then the pair preset, then the job seed, then settings."""
    for candidate in (seed, cfg.pair_seed, cfg.seed):
        if candidate is not None:
            return int(candidate)
    return int(get_config("random.default_seed"))


def run_command(cfg: JobConfig, tolerance: Optional[float] = None, seed: Optional[int] = None,
                verify_adjoint_by_matrices: bool = False) -> List[VerificationReport]:
    """
    Dispatch a validated job to its check.

    Args:
        cfg: Parsed job.
        tolerance: Command-line override for the residual and exact tolerances.
        seed: Command-line override for the random seed.
        verify_adjoint_by_matrices: Cross-check adjoint lattices by matrix commutation.

    Returns:
        The reports of the command, each with provenance filled in.

    Raises:
        UnknownCommand: If the command is not registered.
        ConfigValidationError: If the job lacks what the command needs.
    """
    cmd = get_command(cfg.command)
    _check_requirements(cmd, cfg)
    ctx = RunContext(cfg, resolve_tolerances(cfg, tolerance), resolve_seed(cfg, seed), verify_adjoint_by_matrices)
    logger.info(f"Running '{cmd.name}' on {cfg.group.describe()} (seed {ctx.seed})")

    reports = cmd.function(ctx)
    for report in reports:
        report.provenance.update({
            "command": cmd.name,
            "group": cfg.group.describe(),
            "order": cfg.group.order,
            "seed": ctx.seed,
            "tolerances": ctx.tolerances.as_dict(),
        })
    logger.debug(f"'{cmd.name}' produced {len(reports)} report(s)")
    return reports
