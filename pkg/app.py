# app.py - Steady batch front-end: smooth, metrics, genseq, ablate
import argparse
import hashlib
import logging
import sys
from pathlib import Path
from typing import List, Optional

from errors import InvalidParams, InvalidSpec, SteadyError, UsageError
from fixtures.generator import generate, metadata_lines
from flow.flo_io import write_pair_flows
from frames.frame import requantize
from frames.sequence_io import load_sequence, write_sequence
from metrics.ablation import ablate
from metrics.report import evaluate_sequence, write_report_text
from run_config import COMMANDS, OPTIONS, RunConfig, build_config
from smoothing.temporal import smooth_sequence

logger = logging.getLogger("steady")

MANIFEST_NAME = "run_manifest.txt"
FIXTURE_META_NAME = "fixture.txt"
DEFAULT_METRICS_REPORT = Path("metrics_report.json")

COMMAND_HELP = {
    "smooth": "Temporally smooth a frame directory",
    "metrics": "Compute ITF / ISI / MOFM of a frame directory",
    "genseq": "Generate a synthetic test sequence",
    "ablate": "Compare metrics before and after smoothing for one or more alphas",
}


def sha256_file(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for block in iter(lambda: f.read(1 << 16), b""):
            digest.update(block)
    return digest.hexdigest()


def write_key_value(path: Path, lines: List[str]):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


class SteadyApp:
    def __init__(self, config: RunConfig):
        self.config = config

    def _require(self, *names):
        for name in names:
            if getattr(self.config, name) is None:
                raise UsageError(f"{self.config.command} needs --{name.replace('_', '-')}")

    def run_smooth(self) -> int:
        """Smooth input frames, write them with a manifest and optional flow dumps"""
        self._require("input_dir", "output_dir")
        config = self.config
        seq = load_sequence(config.input_dir, config.pattern)
        smoothed, flows = smooth_sequence(seq, config.smoothing_params(), config.workers)

        written = write_sequence(smoothed, config.output_dir, config.format)
        if config.flow_out is not None:
            write_pair_flows(flows, config.flow_out)

        lines = ["command = smooth"] + config.manifest_lines()
        lines.append(f"frame_count = {len(smoothed)}")
        lines += [f"sha256.{path.name} = {sha256_file(path)}" for path in sorted(written)]
        write_key_value(Path(config.output_dir) / MANIFEST_NAME, lines)
        logger.info("✅ Smoothing done: %d frames in %s", len(smoothed), config.output_dir)
        return 0

    def run_metrics(self) -> int:
        """Write the JSON metrics report and print the three aggregates"""
        self._require("input_dir")
        config = self.config
        seq = load_sequence(config.input_dir, config.pattern)
        flow = config.flow_dir if config.flow_dir is not None else config.flow_params()
        report = evaluate_sequence(seq, flow, config.workers)

        write_report_text(report.to_json(), config.report or DEFAULT_METRICS_REPORT)
        print(report.summary_line())
        return 0

    def run_genseq(self) -> int:
        """Write a synthetic sequence, its metadata and its ground-truth flows"""
        self._require("output_dir")
        config = self.config
        spec = config.fixture_spec()
        seq, truth = generate(spec)

        output_dir = Path(config.output_dir)
        write_sequence(seq, output_dir, config.format)
        if truth:
            write_pair_flows(truth, output_dir)
        write_key_value(output_dir / FIXTURE_META_NAME, metadata_lines(spec))
        logger.info("✅ Fixture written to %s", output_dir)
        return 0

    def run_ablate(self) -> int:
        """Before/after metrics table, one row per alpha"""
        self._require("input_dir")
        config = self.config
        seq = load_sequence(config.input_dir, config.pattern)
        result = ablate(
            seq,
            config.ablation_alphas(),
            config.smoothing_params(),
            metric_flow=config.flow_params(),
            workers=config.workers,
            quantize=requantize,
        )

        for line in result.summary_lines():
            print(line)
        if config.report is not None:
            write_report_text(result.to_json(), config.report)
        if config.output_dir is not None:
            write_sequence(result.smoothed, config.output_dir, config.format)
        return 0

    def run(self) -> int:
        handler = getattr(self, f"run_{self.config.command}")
        return handler()


def build_parser():
    """Top-level parser plus the per-command parsers, keyed by command"""
    parser = argparse.ArgumentParser(
        prog="steady",
        description="Optical-flow guided temporal smoothing and temporal quality metrics",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    commands = {}
    for command in COMMANDS:
        cmd = sub.add_parser(command, help=COMMAND_HELP[command], description=COMMAND_HELP[command])
        cmd.add_argument("--config", dest="config_file", default=None,
                         help="key = value file; flags override it")
        cmd.add_argument("-v", "--verbose", action="count", default=0, help="More log output")
        cmd.add_argument("-q", "--quiet", action="store_true", help="Warnings and errors only")
        for key, (_, _, text) in OPTIONS.items():
            cmd.add_argument(f"--{key}", dest=key, default=argparse.SUPPRESS, help=text)
        commands[command] = cmd
    return parser, commands


def setup_logging(verbosity: int):
    """-1 warnings only, 0 progress, 1 and up debug"""
    level = logging.WARNING if verbosity < 0 else (logging.DEBUG if verbosity > 0 else logging.INFO)
    logging.basicConfig(stream=sys.stderr, level=level, format="%(message)s", force=True)


def main(argv: Optional[List[str]] = None) -> int:
    """Parse arguments and run one command; returns the process exit status"""
    parser, commands = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    flags = vars(args)
    command = flags.pop("command")
    config_file = flags.pop("config_file")
    verbose = flags.pop("verbose")
    if flags.pop("quiet"):
        flags["verbosity"] = -1
    elif verbose:
        flags["verbosity"] = verbose
    setup_logging(0)

    try:
        config = build_config(command, flags, config_file)
        setup_logging(config.verbosity)
        return SteadyApp(config).run()
    except (UsageError, InvalidParams, InvalidSpec) as e:
        sys.stderr.write(commands[command].format_usage())
        print(f"❌ steady {command}: {e}", file=sys.stderr)
        return 2
    except (SteadyError, OSError) as e:
        print(f"❌ steady {command}: {e}", file=sys.stderr)
        return 1


def run():
    """Console wrapper: exit with main's status"""
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        print("\n🛑 Interrupted", file=sys.stderr)
        sys.exit(130)


if __name__ == "__main__":
    run()
