"""Command-line verification runner emitting reproducible JSON artifacts.

Each subcommand runs one verification route (enumeration, group order,
kernel certificate, replay, characters, symbol identities, numerics) and
writes a JSON artifact with stable key order and no timestamps, so a fixed
seed reproduces the output byte for byte. Runtime notes go to stderr only.

Exit codes: 0 all checks pass, 2 usage, 3 enumeration mismatch, 4 kernel or
replay failure, 5 character mismatch, 6 numeric or symbol failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import d5_data, incidence, rep_theory, wedge_kernel, weyl
from .hyperlog import dp4
from .hyperlog import numeric as hnumeric
from .hyperlog import words as hwords

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_ENUM = 3
EXIT_KERNEL = 4
EXIT_CHARACTER = 5
EXIT_NUMERIC = 6

TABLE_LINES = {3: 6, 4: 10, 5: 16, 6: 27, 7: 56, 8: 240}
TABLE_CONICS = {3: 3, 4: 5, 5: 10, 6: 27, 7: 126, 8: 2160}
TABLE_ORDERS = {3: 12, 4: 120, 5: 1920, 6: 51840, 7: 2903040}
EXPECTED_NORMS = {4: (3, 2), 5: (3, 3), 6: (3, 3), 7: (4, 5)}
D5_CHI = (16, 0, 0, 8, 0, 0, 0, 4, 0, 0, 4, 0, 0, 2, 0, 2, 0, 1)
D5_WEDGE3 = (560, 0, 0, 24, 0, 0, 0, -20, 0, 0, 8, 0, 0, 0, 0, -2, 0, 0)
D5_WEDGE3_MULTS = (1, 1, 0, 4, 5, 4, 1, 1, 6, 0, 5, 6, 3, 3, 1, 2, 2, 0)
D5_CHI_PARTS = ("[.5]", "[1.4]", "[2.3]")


@dataclass(frozen=True)
class RunConfig:
    """One resolved CLI invocation; the seed fixes every randomized choice."""

    subcommand: str
    rank: int | None = None
    seed: int | None = None
    tol: float | None = None
    threads: int = 1
    out: str | None = None
    stretch: bool = False
    quotient: bool = False
    samples: int | None = None
    gamma: Fraction | None = None
    pi: Fraction | None = None
    count_only: bool = False
    orbit: bool = False
    d5_full: bool = False
    check_asym: bool = False
    certificate: str | None = None


def _route_enumerate(rank: int) -> tuple[dict, int]:
    try:
        lt = incidence.enumerate_lines(rank)
        conics = incidence.enumerate_conics(rank, lt)
    except (incidence.UnsupportedRank, incidence.FiberCountViolation) as exc:
        return {"rank": rank, "error": str(exc)}, EXIT_ENUM
    covered = set()
    fibers_ok = True
    for c in conics:
        fibers_ok = fibers_ok and len(c.fibers) == rank - 1
        for a, b in c.fibers:
            covered.update((a, b))
    ok = (
        len(lt) == TABLE_LINES[rank]
        and len(conics) == TABLE_CONICS[rank]
        and fibers_ok
        and len(covered) == len(lt)
    )
    artifact = {
        "rank": rank,
        "lines": len(lt),
        "conics": len(conics),
        "fibers_per_conic": rank - 1,
        "every_line_in_a_fiber": len(covered) == len(lt),
        "matches_expected": ok,
    }
    return artifact, EXIT_OK if ok else EXIT_ENUM


def _route_group(rank: int, count_only: bool, orbit: bool) -> tuple[dict, int]:
    try:
        gd = weyl.group_data(rank)
    except weyl.GroupTooLarge as exc:
        return {"rank": rank, "error": str(exc)}, EXIT_USAGE
    order = len(gd)
    ok = order == TABLE_ORDERS[rank]
    artifact = {"rank": rank, "order": order, "expected": TABLE_ORDERS[rank]}
    if not count_only:
        artifact["length_distribution"] = np.bincount(gd.levels).tolist()
    if orbit:
        orbit_size = len(incidence.enumerate_lines(rank))
        artifact["line_orbit"] = orbit_size
        ok = ok and orbit_size == TABLE_LINES[rank]
    artifact["matches_expected"] = ok
    return artifact, EXIT_OK if ok else EXIT_ENUM


def _route_certify(
    rank: int, seed: int | None, stretch: bool, quotient: bool
) -> tuple[dict, int]:
    try:
        cert = wedge_kernel.kernel_signs(
            rank, seed=seed, quotient=quotient, stretch=stretch
        )
    except (
        wedge_kernel.KernelDimensionViolation,
        wedge_kernel.SignViolation,
        wedge_kernel.BudgetExceeded,
    ) as exc:
        return {"rank": rank, "error": str(exc)}, EXIT_KERNEL
    artifact = {"rank": rank, "seed": seed, "certificate": cert.to_json()}
    return artifact, EXIT_OK


def _route_replay(path: str) -> tuple[dict, int]:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        if isinstance(data, dict) and "certificate" in data:
            data = data["certificate"]
        cert = wedge_kernel.HlogCertificate.from_json(data)
    except (OSError, ValueError) as exc:
        return {"error": f"unreadable certificate: {exc}"}, EXIT_USAGE
    try:
        wedge_kernel.replay(cert)
    except wedge_kernel.ReplayFailure as exc:
        return {"rank": cert.r, "error": str(exc)}, EXIT_KERNEL
    artifact = {
        "rank": cert.r,
        "content_hash": cert.content_hash,
        "replay": "pass",
    }
    return artifact, EXIT_OK


def _route_characters(rank: int, d5_full: bool) -> tuple[dict, int]:
    try:
        line = rep_theory.line_character(rank)
        conic = rep_theory.conic_character(rank)
        refl = rep_theory.reflection_character(rank)
        triv = rep_theory.trivial_character(rank)
        values = {
            "line_norm": rep_theory.inner_product(line, line),
            "conic_norm": rep_theory.inner_product(conic, conic),
            "trivial_in_line": rep_theory.inner_product(line, triv),
            "reflection_in_line": rep_theory.inner_product(line, refl),
        }
        if any(v.denominator != 1 for v in values.values()):
            return {"rank": rank, "error": "non-integer inner product"}, EXIT_CHARACTER
        artifact = {"rank": rank}
        artifact.update({k: int(v) for k, v in values.items()})
        artifact["signature_multiplicity"] = rep_theory.signature_multiplicity(rank)
    except (weyl.GroupTooLarge, rep_theory.NotACharacter, ValueError) as exc:
        return {"rank": rank, "error": str(exc)}, EXIT_CHARACTER
    ok = (
        (artifact["line_norm"], artifact["conic_norm"]) == EXPECTED_NORMS[rank]
        and artifact["trivial_in_line"] == 1
        and artifact["reflection_in_line"] == 1
        and artifact["signature_multiplicity"] == 0
    )
    if d5_full:
        chi = rep_theory.d5_chi_values()
        wedge = rep_theory.d5_wedge3_values()
        chi_dec = rep_theory.d5_decompose(chi)
        wedge_dec = rep_theory.d5_decompose(wedge)
        chi_parts = tuple(
            sorted(d5_data.IRREDUCIBLE_LABELS[s] for s, m in enumerate(chi_dec) if m)
        )
        artifact["d5"] = {
            "chi": list(chi),
            "wedge3": list(wedge),
            "chi_parts": list(chi_parts),
            "wedge3_multiplicities": list(wedge_dec),
        }
        ok = (
            ok
            and chi == D5_CHI
            and wedge == D5_WEDGE3
            and wedge_dec == D5_WEDGE3_MULTS
            and chi_parts == D5_CHI_PARTS
        )
    artifact["matches_expected"] = ok
    return artifact, EXIT_OK if ok else EXIT_CHARACTER


def _route_symbols() -> tuple[dict, int]:
    reports = hwords.verify_asym_shuffle_identities()
    artifact = {
        "identities": [
            {
                "name": rep.name,
                "passed": rep.passed,
                "difference_terms": len(rep.difference.terms),
            }
            for rep in reports
        ],
        "passed": all(rep.passed for rep in reports),
    }
    return artifact, EXIT_OK if artifact["passed"] else EXIT_NUMERIC


def _route_numeric(
    rank: int,
    samples: int | None,
    tol: float | None,
    seed: int | None,
    gamma: Fraction | None,
    pi: Fraction | None,
    threads: int,
) -> tuple[dict, int]:
    if samples is None:
        samples = 20 if rank == 4 else 10
    if tol is None:
        tol = 1e-8 if rank == 4 else 1e-6
    data = None
    if rank == 5:
        try:
            data = dp4.dp4_data(
                gamma if gamma is not None else Fraction(1, 3),
                pi if pi is not None else Fraction(5, 2),
            )
        except ValueError as exc:
            return {"rank": rank, "error": str(exc)}, EXIT_USAGE
    try:
        report = hnumeric.verify_identity_numeric(
            rank, samples, tol, data=data, seed=seed, threads=threads
        )
    except (hnumeric.PathTooClose, hnumeric.QuadratureFailure) as exc:
        return {"rank": rank, "error": str(exc)}, EXIT_NUMERIC
    artifact = {
        "rank": report.r,
        "samples": report.samples,
        "tol": report.tol,
        "seed": report.seed,
        "gamma": None if report.gamma is None else str(report.gamma),
        "pi": None if report.pi is None else str(report.pi),
        "signs": list(report.signs),
        "residuals": list(report.residuals),
        "error_budgets": list(report.error_budgets),
        "max_residual": report.max_residual,
        "passed": report.passed,
    }
    return artifact, EXIT_OK if report.passed else EXIT_NUMERIC


def run(config: RunConfig) -> int:
    """Execute one configured invocation and write its JSON artifact."""
    started = time.monotonic()
    if config.subcommand == "enumerate":
        artifact, code = _route_enumerate(config.rank)
    elif config.subcommand == "group":
        artifact, code = _route_group(config.rank, config.count_only, config.orbit)
    elif config.subcommand == "certify":
        if config.rank == 8 and not config.stretch:
            print(
                "certify: rank 8 is a stretch computation; pass --stretch",
                file=sys.stderr,
            )
            return EXIT_USAGE
        artifact, code = _route_certify(
            config.rank, config.seed, config.stretch, config.quotient
        )
    elif config.subcommand == "replay":
        artifact, code = _route_replay(config.certificate)
    elif config.subcommand == "characters":
        artifact, code = _route_characters(config.rank, config.d5_full)
    elif config.subcommand == "symbols":
        artifact, code = _route_symbols()
    elif config.subcommand == "numeric":
        artifact, code = _route_numeric(
            config.rank,
            config.samples,
            config.tol,
            config.seed,
            config.gamma,
            config.pi,
            config.threads,
        )
    elif config.subcommand == "all":
        artifact, code = _route_all(config)
    else:
        print(f"unknown subcommand {config.subcommand!r}", file=sys.stderr)
        return EXIT_USAGE
    _write_artifact(artifact, config.out)
    elapsed = time.monotonic() - started
    print(f"{config.subcommand}: {elapsed:.2f}s", file=sys.stderr)
    return code


def _route_all(config: RunConfig) -> tuple[dict, int]:
    rank = config.rank
    routes: dict[str, dict] = {}
    code = EXIT_OK

    def record(name: str, result: tuple[dict, int]) -> None:
        nonlocal code
        artifact, route_code = result
        routes[name] = artifact
        if code == EXIT_OK and route_code != EXIT_OK:
            code = route_code

    record("enumerate", _route_enumerate(rank))
    if rank <= 7:
        record("group", _route_group(rank, config.count_only, config.orbit))
    if 4 <= rank <= 7 or (rank == 8 and config.stretch):
        record(
            "certify",
            _route_certify(rank, config.seed, config.stretch, config.quotient),
        )
    if 4 <= rank <= 7:
        record("characters", _route_characters(rank, rank == 5 and config.d5_full))
    record("symbols", _route_symbols())
    if rank in (4, 5):
        record(
            "numeric",
            _route_numeric(
                rank,
                config.samples,
                config.tol,
                config.seed,
                config.gamma,
                config.pi,
                config.threads,
            ),
        )
    artifact = {"rank": rank, "routes": routes, "passed": code == EXIT_OK}
    return artifact, code


def _write_artifact(artifact: dict, out: str | None) -> None:
    text = json.dumps(artifact, sort_keys=True, ensure_ascii=False, indent=2) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _fraction_arg(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _default_threads() -> int:
    env = os.environ.get("DP_HLOG_THREADS")
    if env is not None:
        try:
            n = int(env)
        except ValueError:
            n = 0
        if n >= 1:
            return n
    return os.cpu_count() or 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dp-hlog",
        description="verification runner for del Pezzo web identities",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_common(p: argparse.ArgumentParser, ranks: range) -> None:
        p.add_argument("--rank", type=int, required=True, choices=ranks)
        p.add_argument("--out", type=str, default=None)

    p = sub.add_parser("enumerate", help="line/conic counts and fiber structure")
    add_common(p, range(3, 9))

    p = sub.add_parser("group", help="Weyl group order by enumeration")
    add_common(p, range(3, 9))
    p.add_argument("--count-only", action="store_true")
    p.add_argument("--orbit", action="store_true")

    p = sub.add_parser("certify", help="wedge-kernel sign certificate")
    add_common(p, range(4, 9))
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--stretch", action="store_true")
    p.add_argument("--quotient", action="store_true")

    p = sub.add_parser("replay", help="re-verify a stored certificate")
    p.add_argument("certificate", type=str)
    p.add_argument("--out", type=str, default=None)

    p = sub.add_parser("characters", help="character norms and multiplicities")
    add_common(p, range(4, 8))
    p.add_argument("--d5-full", action="store_true")

    p = sub.add_parser("symbols", help="exact antisymmetrization identities")
    p.add_argument("--check-asym", action="store_true")
    p.add_argument("--out", type=str, default=None)

    p = sub.add_parser("numeric", help="numerical functional identities")
    add_common(p, range(4, 6))
    p.add_argument("--gamma", type=_fraction_arg, default=None)
    p.add_argument("--pi", type=_fraction_arg, default=None)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--threads", type=int, default=None)

    p = sub.add_parser("all", help="every route that applies to the rank")
    add_common(p, range(3, 9))
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--stretch", action="store_true")
    p.add_argument("--threads", type=int, default=None)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    values = vars(args)
    if values.get("threads") is None:
        values["threads"] = _default_threads()
    if values["threads"] < 1:
        print("threads must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    if values.get("gamma") is not None or values.get("pi") is not None:
        if values.get("rank") != 5:
            print("--gamma/--pi apply to rank 5 only", file=sys.stderr)
            return EXIT_USAGE
    if values.get("d5_full") and values.get("rank") != 5:
        print("--d5-full applies to rank 5 only", file=sys.stderr)
        return EXIT_USAGE
    if values.get("samples") is not None and values["samples"] < 1:
        print("need at least one sample", file=sys.stderr)
        return EXIT_USAGE
    known = {f.name for f in RunConfig.__dataclass_fields__.values()}
    config = RunConfig(**{k: v for k, v in values.items() if k in known})
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
