"""Command line entry point: experiment grids, threshold fits, self-test and lattice export."""
import argparse
import json
import logging
import os
import sys
from dataclasses import asdict, dataclass, field, fields
from typing import List, Optional

import numpy as np
import pandas as pd
from dotenv import load_dotenv

from sweepdecoder.decoder import CORRECTED, DecoderConfig, decoder_tables, sweep_decode
from sweepdecoder.errors import ConfigError, CrossingNotFound, RuleTableError, SweepDecoderError
from sweepdecoder.experiment import (
    find_crossing, fit_sustainable, grid_points, run_grid, write_summary,
)
from sweepdecoder.experiment.runner import RESULTS_FILE, SUMMARY_FILE
from sweepdecoder.lattice import (
    FAMILIES, SIDE_BITS, boundary_map, build_lattice, export_lattice,
    logical_qubit_count, logical_representatives, verify_logicals,
)
from sweepdecoder.noise import CORRELATED, EDGE, IID, VERTEX, NoiseModel
from sweepdecoder.sweep import (
    OMEGA, allowed_directions, bulk_trace_failures, condition_audit, corrupt_rule_table, local_error,
    rule_table, verify_rule_table, witness_failures,
)
from sweepdecoder.sweep.causal import outward

load_dotenv()

logger = logging.getLogger(__name__)

SELFTEST_LATTICES = (
    ("rhombic-periodic", 2), ("rhombic-periodic", 4), ("rhombic-periodic", 6),
    ("rhombic-open", 3), ("rhombic-open", 5),
    ("cubic-periodic", 4), ("cubic-open", 4),
)


def parse_range(text: str, kind=float) -> List:
    """``start:stop:step`` (stop included) or a comma separated list."""
    text = text.strip()
    if ":" in text:
        try:
            start, stop, step = (float(x) for x in text.split(":"))
        except ValueError:
            raise ConfigError(f"range {text!r} is not start:stop:step")
        if step <= 0 or stop < start:
            raise ConfigError(f"range {text!r} needs a positive step and stop >= start")
        values = np.round(np.arange(start, stop + step / 2, step), 12)
        return [kind(v) for v in values]
    try:
        return [kind(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ConfigError(f"cannot read {text!r} as a list of {kind.__name__}")


@dataclass
class RunSpec:
    family: str = field(default="rhombic-periodic", metadata={"help": "Lattice family"})
    sizes: List[int] = field(default_factory=lambda: [6, 8, 10], metadata={"help": "Lattice sizes L"})
    rates: List[float] = field(default_factory=lambda: [0.2], metadata={"help": "Phase-flip rates p"})
    alpha: float = field(default=1.0, metadata={"help": "q = alpha * p"})
    q: Optional[float] = field(default=None, metadata={"help": "Fixed q, overrides alpha"})
    kind: str = field(default=IID, metadata={"help": "iid or correlated noise"})
    neighbours: str = field(default=EDGE, metadata={"help": "Correlated pairs share an edge or a vertex"})
    cycles: List[int] = field(default_factory=lambda: [1], metadata={"help": "Noisy cycle counts N"})
    trials: int = field(default=1000, metadata={"help": "Trials per point"})
    sweeps_per_measurement: int = field(default=1, metadata={"help": "Rule applications per measurement"})
    noisy_period: Optional[int] = field(default=None, metadata={"help": "Direction period while measuring"})
    perfect_period: Optional[int] = field(default=None, metadata={"help": "Direction period in the final decode"})
    t_max: Optional[int] = field(default=None, metadata={"help": "Steps per direction in the final decode"})
    repeats: int = field(default=1, metadata={"help": "Passes over all directions in the final decode"})
    variant: str = field(default="regular", metadata={"help": "Rule tie-break: regular|first"})
    direction_order: List[str] = field(default_factory=lambda: [str(d) for d in OMEGA],
                                       metadata={"help": "Order of the eight sweep directions"})
    seed: int = field(default=0, metadata={"help": "Master seed"})
    workers: int = field(default_factory=lambda: int(os.getenv("SWEEP_WORKERS", "1")),
                         metadata={"help": "Worker processes"})
    batch_size: int = field(default=64, metadata={"help": "Trials per work item"})
    output: str = field(default_factory=lambda: os.getenv("SWEEP_OUTPUT", "local_output"),
                        metadata={"help": "Output directory"})
    crossing: bool = field(default=True, metadata={"help": "Estimate threshold crossings per N"})
    fit: bool = field(default=False, metadata={"help": "Fit the sustainable threshold across N"})

    def validate(self):
        if self.family not in FAMILIES:
            raise ConfigError(f"unknown lattice family {self.family!r}, expected one of {FAMILIES}")
        for name in ("sizes", "rates", "cycles"):
            if not getattr(self, name):
                raise ConfigError(f"{name} must not be empty")
        if any(L < 2 for L in self.sizes):
            raise ConfigError(f"lattice sizes must be at least 2, got {self.sizes}")
        if any(not 0.0 <= p <= 1.0 for p in self.rates):
            raise ConfigError(f"rates must lie in [0, 1], got {self.rates}")
        if any(n < 1 for n in self.cycles):
            raise ConfigError(f"cycle counts must be at least 1, got {self.cycles}")
        if self.trials < 1 or self.workers < 1 or self.batch_size < 1:
            raise ConfigError("trials, workers and batch size must be at least 1")
        if self.kind not in (IID, CORRELATED):
            raise ConfigError(f"unknown noise kind {self.kind!r}")
        if self.neighbours not in (EDGE, VERTEX):
            raise ConfigError(f"unknown neighbour relation {self.neighbours!r}")
        self.decoder_config()
        return self

    def decoder_config(self) -> DecoderConfig:
        return DecoderConfig(direction_order=tuple(self.direction_order), t_max=self.t_max,
                             variant=self.variant, noisy_period=self.noisy_period,
                             perfect_period=self.perfect_period,
                             sweeps_per_measurement=self.sweeps_per_measurement, repeats=self.repeats)

    def noise_model(self) -> NoiseModel:
        return NoiseModel(kind=self.kind, p=0.0, alpha=self.alpha, neighbours=self.neighbours,
                          q_override=self.q)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "RunSpec":
        data = json.loads(text)
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown run spec fields {unknown}")
        return cls(**data)


def crossings_by_cycles(frame: pd.DataFrame) -> dict:
    out = {}
    for n, group in frame.groupby("N"):
        try:
            out[int(n)] = find_crossing(group).to_dict()
        except (CrossingNotFound, ConfigError) as e:
            logger.warning("N=%d: %s", n, e)
            out[int(n)] = {"p_th": None, "error": str(e)}
    return out


def fit_crossings(crossings: dict) -> dict:
    points = [(n, c["p_th"]) for n, c in crossings.items() if c.get("p_th") is not None]
    return fit_sustainable(points).to_dict()


def run(spec: RunSpec) -> int:
    spec.validate()
    os.makedirs(spec.output, exist_ok=True)
    with open(os.path.join(spec.output, "spec.json"), "w", encoding="utf-8") as f:
        f.write(spec.to_json())
    points = grid_points(spec.family, spec.sizes, spec.rates, spec.cycles, spec.noise_model(),
                         spec.decoder_config(), spec.trials, spec.seed)
    logger.info("running %d points of %d trials with %d workers", len(points), spec.trials, spec.workers)
    frame = run_grid(points, output_dir=spec.output, workers=spec.workers, batch_size=spec.batch_size)

    summary = {"spec": asdict(spec)}
    if spec.crossing and len(spec.sizes) > 1:
        summary["crossings"] = crossings_by_cycles(frame)
        if spec.fit:
            summary["fit"] = fit_crossings(summary["crossings"])
    write_summary(summary, os.path.join(spec.output, SUMMARY_FILE))
    logger.info("wrote %s", os.path.join(spec.output, RESULTS_FILE))
    return 0


def fit_sustainable_files(paths: List[str], output: Optional[str] = None) -> dict:
    frame = pd.concat([pd.read_csv(p) for p in paths], ignore_index=True)
    crossings = crossings_by_cycles(frame)
    summary = {"crossings": crossings, "fit": fit_crossings(crossings)}
    if output:
        write_summary(summary, output)
    print(json.dumps(summary, sort_keys=True, indent=2))
    return summary


def _zero_noise_failures(lattice, samples: int, rng) -> int:
    tables = decoder_tables(lattice, DecoderConfig())
    failures = 0
    for i in range(samples):
        error = local_error(lattice, rng, max_faces=2)
        result = sweep_decode(lattice, tables, boundary_map(lattice, error), DecoderConfig(),
                              seed=i, error=error)
        failures += result.outcome != CORRECTED
    return failures


def selftest(lattices=SELFTEST_LATTICES, samples: int = 100, corrupt_table: bool = False,
             seed: int = 0) -> int:
    """Check the lattices, causal conditions and rule tables; returns the number of failures."""
    rng = np.random.default_rng(seed)
    failed = []
    corrupted = False

    def check(name, ok, detail=""):
        print(f"{'PASS' if ok else 'FAIL'}  {name}{'  ' + detail if detail else ''}")
        if not ok:
            failed.append(name)

    for family, L in lattices:
        lattice = build_lattice(family, L)
        label = f"{family} L={L}"
        expected = 3 if lattice.periodic else 1
        try:
            verify_logicals(lattice, *logical_representatives(lattice))
            check(f"{label} logical operators", True)
        except SweepDecoderError as e:
            check(f"{label} logical operators", False, str(e))
        k = logical_qubit_count(lattice)
        check(f"{label} encodes {expected} qubits", k == expected, f"got {k}")

        for report in condition_audit(lattice, OMEGA, samples=samples, seed=seed):
            detail = "; ".join(f"{c}: {m[0]}" for c, m in report.failures.items() if m)
            check(f"{label} {report.direction} causal conditions", report.passed, detail)

        for direction in OMEGA:
            table = rule_table(lattice, direction)
            if corrupt_table and not corrupted:
                table = corrupt_rule_table(table, seed)
                corrupted = True
            try:
                verify_rule_table(table)
                check(f"{label} {direction} rule table", True)
            except RuleTableError as e:
                check(f"{label} {direction} rule table", False, str(e))

        if not lattice.periodic:
            for side, directions in allowed_directions(lattice).items():
                rough = bool(lattice.rough_sides & SIDE_BITS[side])
                want = sorted(str(d) for d in OMEGA if outward(d, side) == rough)
                got = sorted(str(d) for d in directions)
                check(f"{label} {side} {'rough' if rough else 'smooth'} directions", got == want,
                      f"got {got}")

        if lattice.periodic and L >= 6:
            bad = bulk_trace_failures(lattice, samples, rng)
            check(f"{label} local syndromes stay in their diamond and shrink", not bad,
                  bad[0] if bad else "")
        if not lattice.periodic:
            bad = witness_failures(lattice, samples, rng)
            check(f"{label} one-sided local syndromes have a trailing direction", not bad,
                  bad[0] if bad else "")

        if L < 3:
            continue
        bad = _zero_noise_failures(lattice, samples, rng)
        check(f"{label} zero-noise decoding of local errors", bad == 0, f"{bad}/{samples} failed")

    print(f"{len(failed)} failed" if failed else "all properties pass")
    return len(failed)


def _lattice_arg(text: str):
    try:
        family, L = text.rsplit(":", 1)
        return family, int(L)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected family:L, got {text!r}")


def parse(argv=None):
    parser = argparse.ArgumentParser(description="Sweep-rule decoder for 3D toric codes")
    parser.add_argument("--verbose", action="store_true", help="Log every sweep step")
    commands = parser.add_subparsers(dest="command", required=True)

    run_parser = commands.add_parser("run", help="Estimate logical error rates on a grid")
    run_parser.add_argument("--spec", type=str, default=None, help="JSON run spec; flags override it")
    run_parser.add_argument("--lattice", dest="family", choices=FAMILIES, default=None)
    run_parser.add_argument("-L", dest="sizes", type=str, default=None, help="Sizes, e.g. 6,8,10")
    run_parser.add_argument("-p", dest="rates", type=str, default=None,
                            help="Rates, a list or start:stop:step")
    run_parser.add_argument("-N", dest="cycles", type=str, default=None, help="Noisy cycle counts")
    run_parser.add_argument("--alpha", type=float, default=None, help="q = alpha * p")
    run_parser.add_argument("--q", type=float, default=None, help="Fixed measurement error rate")
    run_parser.add_argument("--noise", dest="kind", choices=(IID, CORRELATED), default=None)
    run_parser.add_argument("--neighbours", choices=(EDGE, VERTEX), default=None)
    run_parser.add_argument("--trials", type=int, default=None)
    run_parser.add_argument("--sweeps-per-measurement", dest="sweeps_per_measurement", type=int,
                            default=None)
    run_parser.add_argument("--noisy-period", dest="noisy_period", type=int, default=None)
    run_parser.add_argument("--perfect-period", dest="perfect_period", type=int, default=None)
    run_parser.add_argument("--t-max", dest="t_max", type=int, default=None)
    run_parser.add_argument("--repeats", type=int, default=None)
    run_parser.add_argument("--variant", choices=("regular", "first"), default=None)
    run_parser.add_argument("--directions", dest="direction_order", type=str, default=None,
                            help="Comma separated order of the eight directions")
    run_parser.add_argument("--seed", type=int, default=None)
    run_parser.add_argument("--workers", type=int, default=None)
    run_parser.add_argument("--batch-size", dest="batch_size", type=int, default=None)
    run_parser.add_argument("--output", type=str, default=None)
    run_parser.add_argument("--no-crossing", dest="crossing", action="store_false", default=None)
    run_parser.add_argument("--fit", action="store_true", default=None,
                            help="Fit the sustainable threshold across N")

    fit_parser = commands.add_parser("fit-sustainable", help="Fit p_th(N) from result CSVs")
    fit_parser.add_argument("csv", nargs="+", help="Aggregate CSV files")
    fit_parser.add_argument("--output", type=str, default=None, help="Write the summary JSON here")

    test_parser = commands.add_parser("selftest", help="Check lattices, causal conditions and rules")
    test_parser.add_argument("--lattice", dest="lattices", type=_lattice_arg, action="append",
                             default=None, help="family:L, repeatable")
    test_parser.add_argument("--samples", type=int, default=100)
    test_parser.add_argument("--seed", type=int, default=0)
    test_parser.add_argument("--corrupt-table", dest="corrupt_table", action="store_true",
                             help="Alter one rule-table entry before verification")

    export_parser = commands.add_parser("export-lattice", help="Write a lattice in text form")
    export_parser.add_argument("--lattice", dest="family", choices=FAMILIES, required=True)
    export_parser.add_argument("-L", dest="L", type=int, required=True)
    export_parser.add_argument("--output", type=str, default=None, help="File, default stdout")

    return parser.parse_args(argv)


def spec_from_args(args) -> RunSpec:
    if args.spec:
        with open(args.spec, "r", encoding="utf-8") as f:
            spec = RunSpec.from_json(f.read())
    else:
        spec = RunSpec()
    converters = {"sizes": lambda t: parse_range(t, int), "cycles": lambda t: parse_range(t, int),
                  "rates": parse_range, "direction_order": lambda t: t.split(",")}
    for f in fields(RunSpec):
        value = getattr(args, f.name, None)
        if value is None:
            continue
        setattr(spec, f.name, converters[f.name](value) if f.name in converters else value)
    return spec.validate()


def main(argv=None) -> int:
    args = parse(argv)
    logging.basicConfig(format="%(asctime)s - %(levelname)s - %(name)s -   %(message)s",
                        datefmt="%m/%d/%Y %H:%M:%S",
                        level=logging.DEBUG if args.verbose else logging.INFO)
    logger.info("Arguments:")
    for arg in vars(args):
        logger.info("\t%s: %s", arg, getattr(args, arg))

    try:
        if args.command == "run":
            return run(spec_from_args(args))
        if args.command == "fit-sustainable":
            fit_sustainable_files(args.csv, args.output)
            return 0
        if args.command == "selftest":
            lattices = args.lattices or SELFTEST_LATTICES
            return 1 if selftest(lattices, args.samples, args.corrupt_table, args.seed) else 0
        if args.command == "export-lattice":
            lattice = build_lattice(args.family, args.L)
            if args.output:
                with open(args.output, "w", encoding="utf-8") as f:
                    export_lattice(lattice, f)
            else:
                export_lattice(lattice, sys.stdout)
            return 0
    except SweepDecoderError as e:
        logger.error("%s: %s", type(e).__name__, e)
        return 2
    except OSError as e:
        logger.error("cannot write output: %s", e)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
