"""
Command-line front end.

Machine output (JSON documents, CSV, sampled sets) goes to standard out
or to --out; logs and human-readable summaries go to standard error.
Exit codes: 0 success, 1 domain violation, 2 input error, 3 internal or
solver fault.

Examples:
    persuasion-toolkit validate instance.json
    persuasion-toolkit solve-private instance.json --out mech.json
    persuasion-toolkit solve-private --n 20 --prior1 0.2 --alpha 0.8 \
        --cost-family constant --coeff 0.1
    persuasion-toolkit sample instance.json --seed 7 --draws 3
    persuasion-toolkit benchmark --grid fig1 --jobs 4 --out fig1.csv
    persuasion-toolkit oracle lp1-vs-lp2 --n 8 --trials 20 --seed 1
    persuasion-toolkit eq-check instance.json --q 0.7 --profile 1,0
"""

import argparse
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, Field, model_validator

from config.settings import settings
from monitoring.logging.config import get_logger, setup_logging

from .core.bench import run_sweep, table1, write_csv
from .core.config import DEFAULT_TOLERANCES, CostFamily
from .core.document import MechanismDocument
from .core.equilibrium import (
    StrategyProfile,
    equilibrium_report,
    overline_i,
    profile_welfare,
    sender_preferred_welfare,
    threshold_profile,
    underline_i,
)
from .core.errors import DomainViolation, InputError, ToolkitError
from .core.lp_core import LinearProgram
from .core.model import Instance, power_instance, validate_instance
from .core.move_sampler import format_sets, sample_move_sets
from .core.oracle import (
    check_lp_equivalence,
    check_sampler,
    check_threshold_welfare,
)
from .core.private_design import (
    PrivateMechanism,
    build_lp2,
    fast_path,
    solve_private,
    verify_persuasive_marginals,
)
from .core.public_design import build_public_lp, solve_public, verify_public
from .core.utils import (
    load_grid_config,
    load_instance_from_file,
    load_table1_config,
)

logger = get_logger("persuasion_toolkit.cli")

ORACLE_CHECKS = {
    "lp1-vs-lp2": check_lp_equivalence,
    "sampler": check_sampler,
    "threshold-welfare": check_threshold_welfare,
}


class GeneratorParams(BaseModel):
    """Inline instance from the benchmark families"""

    n_agents: int = Field(ge=1)
    prior1: float = Field(ge=0.0, le=1.0)
    alpha: float = Field(ge=0.0)
    cost_family: CostFamily
    coeff: float = Field(ge=0.0)


class RunConfig(BaseModel):
    """Resolved arguments of one invocation"""

    command: str
    instance_path: Optional[Path] = None
    generator: Optional[GeneratorParams] = None
    seed: int = settings.DEFAULT_SEED
    draws: int = Field(default=1, ge=0)
    out: Optional[Path] = None
    tol: float = DEFAULT_TOLERANCES.verification
    indifference_tol: float = DEFAULT_TOLERANCES.indifference

    @model_validator(mode="after")
    def _one_source(self) -> "RunConfig":
        if self.instance_path is not None and self.generator is not None:
            raise ValueError(
                "give either an instance file or generator parameters, not both"
            )
        return self

    def instance(self) -> Instance:
        if self.instance_path is not None:
            return load_instance_from_file(self.instance_path)
        if self.generator is not None:
            g = self.generator
            return power_instance(
                g.n_agents, g.prior1, g.alpha, g.cost_family, g.coeff
            )
        raise InputError(
            "no instance given: pass a file or "
            "--n/--prior1/--alpha/--cost-family/--coeff"
        )


def _add_instance_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("instance", nargs="?", help="Instance JSON file")
    group = parser.add_argument_group("inline instance")
    group.add_argument("--n", dest="gen_n", type=int, help="Number of agents")
    group.add_argument(
        "--prior1", type=float, help="Prior probability of the good state"
    )
    group.add_argument(
        "--alpha", type=float, help="Sharing exponent, F(i) = i^-alpha"
    )
    group.add_argument(
        "--cost-family",
        choices=["constant", "linear", "quadratic"],
        help="Cost family",
    )
    group.add_argument("--coeff", type=float, help="Cost coefficient")


def _add_out(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--out", type=Path, help="Write output here instead of standard out"
    )


def _add_dump_lp(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--dump-lp",
        type=Path,
        metavar="PATH",
        help="Also write the LP in CPLEX LP format",
    )


def _add_seed(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--seed",
        type=int,
        default=settings.DEFAULT_SEED,
        help="Random seed (default: %(default)s)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="persuasion-toolkit",
        description=(
            "Optimal private and public signaling for "
            "two-location resource competition"
        ),
    )
    parser.add_argument(
        "--log-level",
        default=settings.LOG_LEVEL,
        help="Logging level (default: %(default)s)",
    )
    parser.add_argument(
        "--tol",
        type=float,
        default=DEFAULT_TOLERANCES.verification,
        help="Verification tolerance (default: %(default)s)",
    )
    parser.add_argument(
        "--indifference-tol",
        type=float,
        default=DEFAULT_TOLERANCES.indifference,
        help="Equilibrium indifference tolerance (default: %(default)s)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="Check the model assumptions of an instance")
    _add_instance_args(p)

    p = sub.add_parser("solve-private", help="Optimal private mechanism")
    _add_instance_args(p)
    _add_out(p)
    _add_dump_lp(p)
    p.add_argument(
        "--fast-path-only",
        action="store_true",
        help="Fail unless the i* agents mechanism applies",
    )

    p = sub.add_parser("solve-public", help="Optimal public threshold mechanism")
    _add_instance_args(p)
    _add_out(p)
    _add_dump_lp(p)

    p = sub.add_parser(
        "sample", help="Sample recommendation sets from the optimal private mechanism"
    )
    _add_instance_args(p)
    _add_out(p)
    _add_seed(p)
    p.add_argument(
        "--draws", type=int, default=1, help="Number of sets (default: %(default)s)"
    )
    p.add_argument(
        "--state",
        type=int,
        choices=[0, 1],
        default=1,
        help="Realised state (default: %(default)s)",
    )

    p = sub.add_parser("benchmark", help="Welfare sweep over a grid, as CSV")
    p.add_argument(
        "--grid",
        required=True,
        help="Grid JSON file or bundled grid name (fig1, fig2)",
    )
    p.add_argument(
        "--jobs",
        type=int,
        default=settings.MAX_WORKERS,
        help="Worker processes (default: %(default)s)",
    )
    p.add_argument(
        "--absolute",
        action="store_true",
        help="Emit absolute welfares instead of ratios",
    )
    _add_out(p)

    p = sub.add_parser(
        "table1", help="Fast-path prior bound over the table grid, as CSV"
    )
    p.add_argument(
        "--config",
        default="table1",
        help="Table JSON file or bundled name (default: %(default)s)",
    )
    _add_out(p)

    p = sub.add_parser("oracle", help="Randomized brute-force cross-checks")
    p.add_argument(
        "check", choices=sorted(ORACLE_CHECKS), help="Which cross-check to run"
    )
    p.add_argument(
        "--n", type=int, default=6, help="Number of agents (default: %(default)s)"
    )
    p.add_argument(
        "--trials",
        type=int,
        default=10,
        help="Random instances (default: %(default)s)",
    )
    _add_seed(p)

    p = sub.add_parser("eq-check", help="Certify a strategy profile as an equilibrium")
    _add_instance_args(p)
    p.add_argument("--q", type=float, required=True, help="Common belief")
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument(
        "--profile", help="Comma-separated move probabilities, one per agent"
    )
    which.add_argument(
        "--threshold", type=float, help="Threshold t of a threshold profile"
    )
    return parser


GENERATOR_ARGS = ("gen_n", "prior1", "alpha", "cost_family", "coeff")


def _run_config(args: argparse.Namespace) -> RunConfig:
    generator = None
    gen_fields = [getattr(args, name, None) for name in GENERATOR_ARGS]
    if any(v is not None for v in gen_fields):
        if any(v is None for v in gen_fields):
            raise InputError(
                "inline instances need --n, --prior1, --alpha, --cost-family "
                "and --coeff"
            )
        n, prior1, alpha, family, coeff = gen_fields
        generator = GeneratorParams(
            n_agents=n, prior1=prior1, alpha=alpha, cost_family=family, coeff=coeff
        )
    instance = getattr(args, "instance", None)
    return RunConfig(
        command=args.command,
        instance_path=Path(instance) if instance else None,
        generator=generator,
        seed=getattr(args, "seed", settings.DEFAULT_SEED),
        draws=getattr(args, "draws", 1),
        out=getattr(args, "out", None),
        tol=args.tol,
        indifference_tol=args.indifference_tol,
    )


def _emit(text: str, out: Optional[Path]) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text, encoding="utf-8")
        logger.info(f"wrote {out}")


def _emit_document(doc: MechanismDocument, out: Optional[Path]) -> None:
    if out is None:
        _emit(doc.to_json(), None)
    else:
        doc.save(out)
        logger.info(f"wrote {out}")


def _dump_lp(lp: LinearProgram, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    lp.dump(path)
    logger.info(f"wrote {lp.n_variables} x {lp.n_constraints} LP to {path}")


def _valid_instance(config: RunConfig) -> Instance:
    inst = config.instance()
    report = validate_instance(inst)
    if not report.ok:
        raise DomainViolation("invalid instance: " + "; ".join(report.messages()))
    return inst


def cmd_validate(args: argparse.Namespace, config: RunConfig) -> int:
    inst = config.instance()
    report = validate_instance(inst)
    violations = [
        {"clause": v.clause, "index": v.index, "message": v.message}
        for v in report.violations
    ]
    doc = MechanismDocument(
        kind="validation_report",
        fingerprint=inst.fingerprint(),
        payload={"ok": report.ok, "violations": violations},
    )
    _emit_document(doc, None)
    for v in report.violations:
        print(f"violated: {v.clause}: {v.message}", file=sys.stderr)
    return 0 if report.ok else 1


def _private_mechanism(inst: Instance, fast_only: bool = False) -> PrivateMechanism:
    mech = fast_path(inst)
    if mech is None and fast_only:
        raise DomainViolation("the prior exceeds the fast-path bound")
    if mech is None:
        mech = solve_private(inst)
    return mech


def cmd_solve_private(args: argparse.Namespace, config: RunConfig) -> int:
    inst = _valid_instance(config)
    if args.dump_lp is not None:
        _dump_lp(build_lp2(inst), args.dump_lp)
    if args.fast_path_only:
        mech = _private_mechanism(inst, fast_only=True)
    else:
        mech = solve_private(inst)
    report = verify_persuasive_marginals(inst, mech.marginals, config.tol)
    doc = mech.to_document(inst)
    doc.payload["fast_path_applicable"] = (
        mech.fast_path or fast_path(inst) is not None
    )
    doc.payload["verification"] = report.to_dict()
    _emit_document(doc, config.out)
    if config.out is not None:
        _emit(f"objective {mech.objective:.12g}", None)
    print(
        f"private objective {mech.objective:.12g} (fast_path={mech.fast_path})",
        file=sys.stderr,
    )
    if not report.ok:
        raise DomainViolation(
            f"mechanism fails verification, worst violation {report.worst:.3e}"
        )
    return 0


def cmd_solve_public(args: argparse.Namespace, config: RunConfig) -> int:
    inst = _valid_instance(config)
    if args.dump_lp is not None:
        _dump_lp(build_public_lp(inst), args.dump_lp)
    mech = solve_public(inst)
    report = verify_public(inst, mech, config.tol)
    doc = mech.to_document(inst)
    doc.payload["verification"] = report.to_dict()
    _emit_document(doc, config.out)
    if config.out is not None:
        _emit(f"objective {mech.objective:.12g}", None)
    print(
        f"public objective {mech.objective:.12g}, signals {mech.support}",
        file=sys.stderr,
    )
    if not report.ok:
        raise DomainViolation(
            f"public mechanism fails verification at signals {report.flagged}"
        )
    return 0


def cmd_sample(args: argparse.Namespace, config: RunConfig) -> int:
    if config.draws < 0:
        raise InputError("--draws must be nonnegative")
    inst = _valid_instance(config)
    mech = _private_mechanism(inst)
    if args.state == 0:
        members = np.zeros((config.draws, inst.n_agents), dtype=bool)
    else:
        rng = np.random.default_rng(config.seed)
        members = sample_move_sets(mech, rng, config.draws)
    _emit("\n".join(format_sets(members)), config.out)
    return 0


def cmd_benchmark(args: argparse.Namespace, config: RunConfig) -> int:
    grid = load_grid_config(args.grid)
    result = run_sweep(grid, jobs=max(1, args.jobs))
    text = write_csv(result.frame(absolute=args.absolute), None)
    _emit(text, config.out)
    print(
        f"{len(result.rows)} rows, {len(result.skipped)} skipped, "
        f"{len(result.violations)} ordering violations",
        file=sys.stderr,
    )
    if result.violations:
        raise DomainViolation(
            f"{len(result.violations)} rows break the welfare ordering"
        )
    return 0


def cmd_table1(args: argparse.Namespace, config: RunConfig) -> int:
    frame = table1(load_table1_config(args.config))
    _emit(write_csv(frame, None), config.out)
    return 0


def cmd_oracle(args: argparse.Namespace, config: RunConfig) -> int:
    run_check = ORACLE_CHECKS[args.check]
    check = run_check(np.random.default_rng(args.seed), args.n, args.trials)
    doc = MechanismDocument(
        kind="oracle_check",
        payload={**check.model_dump(), "passed": check.passed},
    )
    _emit_document(doc, None)
    return 0 if check.passed else 1


def _parse_profile(text: str, n_agents: int) -> List[float]:
    try:
        probs = [float(x) for x in text.split(",")]
    except ValueError as e:
        raise InputError(f"bad profile '{text}': {e}") from e
    if len(probs) != n_agents:
        raise InputError(f"profile has {len(probs)} entries for {n_agents} agents")
    return probs


def cmd_eq_check(args: argparse.Namespace, config: RunConfig) -> int:
    inst = config.instance()
    if not 0.0 <= args.q <= 1.0:
        raise InputError(f"belief {args.q} outside [0, 1]")
    if args.profile is not None:
        probs = _parse_profile(args.profile, inst.n_agents)
        profile = StrategyProfile(probs=tuple(probs), belief=args.q)
    else:
        profile = threshold_profile(inst.n_agents, args.threshold, args.q)
    report = equilibrium_report(inst, profile, config.indifference_tol)
    doc = MechanismDocument(
        kind="equilibrium_check",
        fingerprint=inst.fingerprint(),
        payload={
            "belief": args.q,
            "profile": list(profile.probs),
            "welfare": profile_welfare(inst, profile),
            "lower_threshold": underline_i(inst, args.q),
            "upper_threshold": overline_i(inst, args.q),
            "sender_preferred_welfare": sender_preferred_welfare(inst, args.q),
            **report.to_dict(),
        },
    )
    _emit_document(doc, None)
    return 0 if report.ok else 1


COMMANDS = {
    "validate": cmd_validate,
    "solve-private": cmd_solve_private,
    "solve-public": cmd_solve_public,
    "sample": cmd_sample,
    "benchmark": cmd_benchmark,
    "table1": cmd_table1,
    "oracle": cmd_oracle,
    "eq-check": cmd_eq_check,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.log_level)
    try:
        config = _run_config(args)
        return COMMANDS[args.command](args, config)
    except ToolkitError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return e.exit_code
    except ValueError as e:
        # pydantic validation of arguments
        logger.error(f"invalid arguments: {e}")
        return InputError.exit_code
    except Exception as e:
        logger.exception(f"internal error: {e}")
        return 3


if __name__ == "__main__":
    sys.exit(main())
