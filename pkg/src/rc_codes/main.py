"""
Main Application - Rate-compatible code workbench
"""

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from pydantic import ValidationError

from .bounds import SnrPoint, amplitude_factor, required_dmin, snr_grid
from .config import DEFAULT_CONFIG, WorkbenchConfig
from .exceptions import RingCodesError
from .greedy_builder import (
    BuildConfig,
    CodeFamily,
    Constraint,
    derive_nc_generator,
    distance_milestones,
    greedy_construct,
    multi_run_best,
)
from .hex_codec import (
    HexMatrixDocument,
    HexSection,
    emit_hex_document,
    load_appendix,
    parse_hex_document,
)
from .mc_simulator import ConstellationMap, Detector, PhaseModel, SimConfig
from .models import CodeFamilyDocument, ReportDocument
from .reference_tables import TARGETS
from .reports import (
    GREEDY_COLUMNS,
    bound_curve_report,
    distance_growth_report,
    fer_curve_report,
    load_expected,
    table3_report,
    table_report,
    verify_appendix,
    write_csv,
    write_json,
)
from .ring_codes import (
    GeneratorMatrix,
    nc_min_distance,
    pairwise_nc_distance,
    rotation_words,
    weight_spectrum,
)
from .run_pool import RunPool

CONSTELLATION_ORDER = {"bpsk": 2, "qpsk": 4}


class CodeWorkbench:
    """Main workbench application: owns configuration, logging and the worker pool"""

    def __init__(self, config: WorkbenchConfig = DEFAULT_CONFIG):
        self.config = config

        # Setup logging
        self._setup_logging()
        self.logger = logging.getLogger(__name__)

        self.pool = RunPool(workers=config.workers, name="workbench")
        self.logger.debug(f"Workbench configuration: {config.to_dict()}")

    def _setup_logging(self):
        """Setup logging configuration"""
        os.makedirs(self.config.log_dir, exist_ok=True)
        logging.basicConfig(
            level=getattr(logging, self.config.log_level.upper()),
            format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
            handlers=[
                logging.StreamHandler(sys.stderr),
                logging.FileHandler(os.path.join(self.config.log_dir, "rc_codes.log")),
            ],
            force=True,
        )

    def shutdown(self):
        self.pool.shutdown()

    # -- inputs ------------------------------------------------------------

    def load_matrix(
        self, path: Optional[str], section: Optional[str] = None
    ) -> Tuple[GeneratorMatrix, int, str]:
        """(generator, constraint rows, name) from a hex document, a family JSON
        or, without a path, the bundled appendix"""
        if path is not None and path.endswith(".json"):
            document = CodeFamilyDocument.load(path)
            return document.generator(), document.fixed_rows, Path(path).stem
        hex_document = (
            parse_hex_document(Path(path).read_text()) if path is not None else load_appendix()
        )
        if section is None:
            if len(hex_document.sections) != 1:
                raise RingCodesError(
                    f"choose a section with --section: {', '.join(hex_document.names)}"
                )
            chosen = hex_document.sections[0]
        else:
            chosen = hex_document.get(section)
        return chosen.generator(), chosen.fixed_rows, chosen.name or "generator"

    # -- commands ----------------------------------------------------------

    def construct(self, build: BuildConfig, output_dir: Optional[str] = None) -> Dict[str, Any]:
        family: CodeFamily = (
            multi_run_best(build, self.pool, self.config.enumeration_cap)
            if build.runs > 1
            else greedy_construct(build, self.config.enumeration_cap)
        )
        document = CodeFamilyDocument.from_family(family)
        out = Path(output_dir or self.config.output_dir)
        stem = f"family_z{build.ring}_k{build.k1}_{build.k2}_{build.constraint.value}_s{family.seed}"
        json_path = document.save(out / f"{stem}.json")
        hex_path = out / f"{stem}.hex"
        hex_path.write_text(
            HexSection.from_generator(stem, family.generator, family.fixed_rows).emit()
        )
        self.logger.info(f"Saved family to {json_path} and {hex_path}")
        return {
            "status": family.status.value,
            "seed": family.seed,
            "run_index": family.run_index,
            "n_sym": family.generator.n_sym,
            "milestones": [list(m) for m in family.milestones],
            "family_json": str(json_path),
            "family_hex": str(hex_path),
        }

    def distance(self, G: GeneratorMatrix) -> Dict[str, Any]:
        spectrum = weight_spectrum(G, cap=self.config.enumeration_cap, pool=self.pool)
        return {
            "d_min": spectrum.d_min or 0,
            "multiplicity": spectrum.d_min_multiplicity,
            "n_sym": G.n_sym,
            "dimension": G.dimension,
        }

    def spectrum(self, G: GeneratorMatrix, exclude_rotations: bool = False) -> Dict[str, Any]:
        excluded = rotation_words(G) if exclude_rotations else ()
        spectrum = weight_spectrum(G, excluded, self.config.enumeration_cap, self.pool)
        return {
            "d_min": spectrum.d_min,
            "counts": {str(w): c for w, c in spectrum.items()},
            "excluded": [u.to_index() for u in spectrum.excludes_weights_of],
        }

    def ncdistance(self, parent: GeneratorMatrix, pairwise: bool = False) -> Dict[str, Any]:
        report = nc_min_distance(parent, self.config.enumeration_cap)
        result = {
            "d_eq_min": report.d_eq_min,
            "attained_by": None if report.attained_by is None else report.attained_by.to_index(),
            "detectable": report.detectable,
        }
        if pairwise:
            result["pairwise"] = pairwise_nc_distance(derive_nc_generator(parent, 1))
        return result

    def verify(self, appendix: Optional[str], expected: Optional[str]) -> ReportDocument:
        document = parse_hex_document(Path(appendix).read_text()) if appendix else None
        return verify_appendix(document, load_expected(expected) if expected else None)


# ---------------------------------------------------------------------------
# Command line
# ---------------------------------------------------------------------------


def _float_list(text: str) -> List[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _int_list(text: str) -> List[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _add_matrix_args(parser: argparse.ArgumentParser):
    parser.add_argument("--matrix", help="Hex document or family JSON (default: bundled appendix)")
    parser.add_argument("--section", help="Section of a multi-section hex document")


def _add_output_arg(parser: argparse.ArgumentParser):
    parser.add_argument("--output", help="Write the report to this .csv or .json file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rc-codes", description="Rate-compatible codes for coherent and non-coherent detection"
    )
    parser.add_argument("--log-dir", default=None, help="Log directory")
    parser.add_argument(
        "--log-level", default=None, choices=["DEBUG", "INFO", "WARNING", "ERROR"], help="Log level"
    )
    parser.add_argument("--workers", type=int, default=None, help="Parallel workers")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="Greedy construction of a code family")
    p.add_argument("--ring", type=int, choices=[2, 4], default=2)
    p.add_argument("--k", type=int, help="Table dimension K of the derived code")
    p.add_argument("--k1", type=int, default=0)
    p.add_argument("--k2", type=int, default=0)
    p.add_argument("--constraint", choices=[c.value for c in Constraint], default="none")
    p.add_argument("--target-dmin", type=int)
    p.add_argument("--max-n", type=int, default=256, help="Maximum length in symbols")
    p.add_argument("--runs", type=int, default=1)
    p.add_argument("--seed", type=int)
    p.add_argument("--distinct-columns", action="store_true")
    p.add_argument("--output-dir")

    p = sub.add_parser("distance", help="Minimum distance by exhaustive enumeration")
    _add_matrix_args(p)

    p = sub.add_parser("spectrum", help="Weight spectrum")
    _add_matrix_args(p)
    p.add_argument("--exclude-rotations", action="store_true")

    p = sub.add_parser("ncdistance", help="Non-coherent distance of an RI parent")
    _add_matrix_args(p)
    p.add_argument("--pairwise", action="store_true", help="Cross-check by brute force")

    p = sub.add_parser("bound", help="Union bounds over an SNR grid")
    _add_matrix_args(p)
    p.add_argument("--snr-start", type=float, default=0.0)
    p.add_argument("--snr-stop", type=float, default=10.0)
    p.add_argument("--snr-step", type=float, default=1.0)
    p.add_argument("--const", choices=list(CONSTELLATION_ORDER))
    _add_output_arg(p)

    p = sub.add_parser("required-dmin", help="Smallest d_min meeting a FER target")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--fer", type=float, required=True)
    p.add_argument("--snr", type=float, required=True)
    p.add_argument("--const", choices=list(CONSTELLATION_ORDER), default="bpsk")

    p = sub.add_parser("simulate", help="Monte Carlo frame error rate")
    _add_matrix_args(p)
    p.add_argument("--detector", choices=[d.value for d in Detector], default="coherent")
    p.add_argument("--snr", type=_float_list, default=[0.0], help="Comma-separated Es/N0 dB")
    p.add_argument("--trials", type=int)
    p.add_argument("--max-errors", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--phase", choices=[m.value for m in PhaseModel], default="zero")
    p.add_argument("--gray-pairs", action="store_true", help="Binary code on QPSK")
    p.add_argument("--allow-undetectable", action="store_true")
    _add_output_arg(p)

    p = sub.add_parser("verify", help="Check appendix matrices against expected milestones")
    p.add_argument("--appendix", help="Hex document (default: bundled)")
    p.add_argument("--expected", help="CSV with section,n_bits,d_min (default: bundled)")
    _add_output_arg(p)

    p = sub.add_parser("export", help="Convert a family JSON or hex section")
    _add_matrix_args(p)
    p.add_argument("--format", choices=["hex", "json", "growth"], default="hex")
    p.add_argument("--output", required=True)

    p = sub.add_parser("table", help="Reproduce a code length table")
    p.add_argument("--kind", choices=["1", "2", "3"], default="1")
    p.add_argument("--ks", type=_int_list, default=[2, 3, 4])
    p.add_argument("--targets", type=_int_list, default=list(TARGETS))
    p.add_argument("--columns", type=lambda s: s.split(","), default=list(GREEDY_COLUMNS))
    p.add_argument("--runs", type=int, default=100)
    p.add_argument("--seed", type=int)
    p.add_argument("--max-n", type=int, default=256)
    _add_output_arg(p)
    return parser


def _config_from_args(args: argparse.Namespace) -> WorkbenchConfig:
    config = WorkbenchConfig.from_env()
    overrides = {
        "log_dir": args.log_dir,
        "log_level": args.log_level,
        "workers": args.workers,
    }
    return config.model_copy(update={k: v for k, v in overrides.items() if v is not None})


def _write_report(report: ReportDocument, output: Optional[str]) -> Dict[str, Any]:
    if output:
        (write_json if output.endswith(".json") else write_csv)(report, output)
        return {"kind": report.kind.value, "rows": len(report.rows), "output": output}
    return json.loads(report.to_json())


def _run(app: CodeWorkbench, args: argparse.Namespace) -> Tuple[Dict[str, Any], int]:
    config = app.config
    command = args.command

    if command == "construct":
        if args.k is not None:
            build = BuildConfig.for_table(
                args.ring,
                args.k,
                args.constraint,
                target_d_min=args.target_dmin,
                max_n_sym=args.max_n,
                enforce_distinct_columns=args.distinct_columns,
                rng_seed=config.default_seed if args.seed is None else args.seed,
                runs=args.runs,
            )
        else:
            build = BuildConfig(
                ring=args.ring,
                k1=args.k1,
                k2=args.k2,
                constraint=args.constraint,
                target_d_min=args.target_dmin,
                max_n_sym=args.max_n,
                enforce_distinct_columns=args.distinct_columns,
                rng_seed=config.default_seed if args.seed is None else args.seed,
                runs=args.runs,
            )
        return app.construct(build, args.output_dir), 0

    if command == "required-dmin":
        A = amplitude_factor(CONSTELLATION_ORDER[args.const])
        d = required_dmin(args.k, args.fer, SnrPoint(args.snr), A)
        return {"d_min": d, "K": args.k, "fer": args.fer, "snr_db": args.snr, "A": A}, 0

    if command == "verify":
        report = app.verify(args.appendix, args.expected)
        result = _write_report(report, args.output)
        result["passed"] = report.passed
        return result, 0 if report.passed else 1

    if command == "table":
        seed = config.default_seed if args.seed is None else args.seed
        if args.kind == "3":
            report = table3_report()
        else:
            runs = 1 if args.kind == "1" else args.runs
            report = table_report(
                args.ks, args.targets, args.columns, runs, seed, args.max_n, app.pool,
                config.enumeration_cap,
            )
        return _write_report(report, args.output), 0

    G, fixed_rows, name = app.load_matrix(args.matrix, args.section)

    if command == "distance":
        return app.distance(G), 0
    if command == "spectrum":
        return app.spectrum(G, args.exclude_rotations), 0
    if command == "ncdistance":
        return app.ncdistance(G, args.pairwise), 0
    if command == "bound":
        M = CONSTELLATION_ORDER[args.const] if args.const else None
        report = bound_curve_report(
            G, snr_grid(args.snr_start, args.snr_stop, args.snr_step), fixed_rows, M,
            config.enumeration_cap,
        )
        return _write_report(report, args.output), 0
    if command == "simulate":
        code = derive_nc_generator(G, fixed_rows) if fixed_rows else G
        sim = SimConfig(
            code=code,
            detector=args.detector,
            snr_db=args.snr,
            max_trials=config.max_trials if args.trials is None else args.trials,
            max_frame_errors=(
                config.max_frame_errors if args.max_errors is None else args.max_errors
            ),
            rng_seed=config.default_seed if args.seed is None else args.seed,
            phase_model=args.phase,
            constellation=ConstellationMap.gray_qpsk_binary() if args.gray_pairs else None,
            allow_undetectable=args.allow_undetectable,
            frame_block=config.frame_block,
            workers=config.workers,
            codebook_cap=config.codebook_cap,
        )
        parent = G if fixed_rows == 1 else None
        report = fer_curve_report(sim, parent, config.enumeration_cap)
        return _write_report(report, args.output), 0
    if command == "export":
        output = Path(args.output)
        output.parent.mkdir(parents=True, exist_ok=True)
        if args.format == "hex":
            section = HexSection.from_generator(name, G, fixed_rows)
            output.write_text(emit_hex_document(HexMatrixDocument([section])))
        elif args.format == "growth":
            write_csv(distance_growth_report(G, fixed_rows, name), output)
        else:
            family = CodeFamily(
                generator=G,
                milestones=distance_milestones(G, config.enumeration_cap, fixed_rows),
                constraint=_constraint_for(fixed_rows),
            )
            CodeFamilyDocument.from_family(family).save(output)
        return {"output": str(output), "format": args.format}, 0

    raise RingCodesError(f"unknown command {command}")


def _constraint_for(fixed_rows: int) -> Constraint:
    if fixed_rows == 0:
        return Constraint.NONE
    if fixed_rows == 1:
        return Constraint.RI
    return Constraint.BINARY_NC4


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point"""
    parser = build_parser()
    args = parser.parse_args(argv)

    app = None
    try:
        app = CodeWorkbench(_config_from_args(args))
        result, status = _run(app, args)
    except (RingCodesError, ValidationError, KeyError, OSError) as e:
        error = {"error": type(e).__name__, "message": str(e), "command": args.command}
        print(json.dumps(error, sort_keys=True), file=sys.stderr)
        return 2
    finally:
        if app is not None:
            app.shutdown()

    print(json.dumps(result, indent=2, sort_keys=True))
    return status


if __name__ == "__main__":
    sys.exit(main())
