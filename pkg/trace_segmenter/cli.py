"""
Command-line interface for trace segmentation.

Exit codes: 0 success, 1 usage or configuration error, 2 data error,
3 brute-force cost guard refusal.
"""

import argparse
import dataclasses
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

from .config import TraceSegmenterConfig
from .core import (
    ConfigError,
    CostGuardError,
    DataError,
    SegmentationError,
    SignalMatrix,
    uniform_presegmentation,
)
from .preprocess import PreprocessConfig, preprocess
from .segmenter import DEFAULT_BRUTE_FORCE_LIMIT, GreedyConfig, brute_force_segment, greedy_segment
from .synth import generate, paper_like_test_signal, random_step_spec, write_fixture
from .utils import build_result_document, load_csv, validate_file, write_result_document
from .utils.file_utils import ORIENTATIONS

logger = logging.getLogger("trace_segmenter.cli")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_COST_GUARD = 3

ALGORITHMS = ("greedy", "brute-force")


class ArgumentParser(argparse.ArgumentParser):
    """argparse parser that exits with the usage code 1 instead of 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    """Everything one segmentation run needs."""

    input_path: str
    segments: int
    output_path: str
    orientation: str = "rows-are-signals"
    algorithm: str = "greedy"
    preprocess: Optional[PreprocessConfig] = None
    greedy: GreedyConfig = field(default_factory=GreedyConfig)
    plot_path: Optional[str] = None
    force_brute: bool = False
    brute_force_limit: int = DEFAULT_BRUTE_FORCE_LIMIT
    max_workers: Optional[int] = 1
    plot_width: int = 960
    plot_height: int = 480
    show_progress: bool = False

    def __post_init__(self):
        if self.segments < 1:
            raise ConfigError(f"segments must be at least 1, got {self.segments}")
        if not self.input_path:
            raise ConfigError("input path is required")
        if not self.output_path:
            raise ConfigError("output path is required")
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"algorithm must be one of {ALGORITHMS}, got {self.algorithm!r}")
        if self.orientation not in ORIENTATIONS:
            raise ConfigError(f"orientation must be one of {ORIENTATIONS}, got {self.orientation!r}")

    def echo(self) -> Dict[str, Any]:
        """Settings that shape the result, for the result document."""
        return {
            "orientation": self.orientation,
            "segments": self.segments,
            "algorithm": self.algorithm,
            "preprocess": dataclasses.asdict(self.preprocess) if self.preprocess else None,
            "epsilon": self.greedy.epsilon,
            "max_iterations": self.greedy.max_iterations,
            "candidate_range": self.greedy.candidate_range,
            "force_brute": self.force_brute,
            "brute_force_limit": self.brute_force_limit,
        }


def run(cfg: RunConfig) -> Dict[str, Any]:
    """
    Load, optionally preprocess, segment, and write the result document.

    Returns:
        The result document that was written

    Raises:
        TraceSegmenterError subclasses or OSError from any stage
    """
    validate_file(cfg.input_path)
    matrix = load_csv(cfg.input_path, cfg.orientation)
    logger.info(f"Loaded {matrix.n_rows} signals with {matrix.n_samples} samples")

    report = None
    analysed: SignalMatrix = matrix
    if cfg.preprocess is not None:
        analysed, report = preprocess(matrix, cfg.preprocess)

    initial = None
    if cfg.algorithm == "greedy":
        initial = uniform_presegmentation(analysed.n_samples, cfg.segments)
        greedy_cfg = dataclasses.replace(cfg.greedy, initial=initial)
        result = greedy_segment(analysed, cfg.segments, greedy_cfg)
    else:
        result = brute_force_segment(
            analysed,
            cfg.segments,
            force=cfg.force_brute,
            limit=cfg.brute_force_limit,
            max_workers=cfg.max_workers,
            show_progress=cfg.show_progress,
        )

    input_summary = {
        "path": str(cfg.input_path),
        "rows": matrix.n_rows,
        "kept_rows": list(report.kept_rows) if report else list(range(matrix.n_rows)),
        "preprocess_report": report.to_dict() if report else None,
    }
    document = build_result_document(analysed, result, cfg.echo(), input_summary, initial)
    write_result_document(document, cfg.output_path)

    if cfg.plot_path:
        from .utils import emit_plot
        if emit_plot is None:
            raise ConfigError("plot output requires lxml")
        emit_plot(analysed, result.segmentation, cfg.plot_path,
                  width=cfg.plot_width, height=cfg.plot_height)

    logger.info(
        f"Segmented into {cfg.segments} segments at {list(result.segmentation.boundaries)}; "
        f"objective {result.objective:.6g} (unsegmented {document['baseline_objective']:.6g})"
    )
    return document


def build_run_config(args, config: TraceSegmenterConfig) -> RunConfig:
    """Merge command-line flags over the configuration file."""
    preprocess_cfg = None
    if args.preprocess or args.ptv_fraction is not None:
        preprocess_cfg = config.preprocess_config()
        if args.ptv_fraction is not None:
            preprocess_cfg = dataclasses.replace(preprocess_cfg, ptv_fraction=args.ptv_fraction)
        if args.no_restore_offsets:
            preprocess_cfg = dataclasses.replace(preprocess_cfg, restore_offsets=False)

    overrides = {
        "epsilon": args.epsilon,
        "max_iterations": args.max_iterations,
        "candidate_range": args.candidate_range,
    }
    greedy_cfg = dataclasses.replace(
        config.greedy_config(),
        **{key: value for key, value in overrides.items() if value is not None}
    )
    return RunConfig(
        input_path=str(args.input),
        segments=args.segments,
        output_path=str(args.output),
        orientation=args.orientation,
        algorithm=args.algorithm,
        preprocess=preprocess_cfg,
        greedy=greedy_cfg,
        plot_path=str(args.plot) if args.plot else None,
        force_brute=args.force_brute,
        brute_force_limit=config.get("brute_force_limit"),
        max_workers=args.max_workers if args.max_workers is not None else config.get("max_workers"),
        plot_width=config.get("plot_width"),
        plot_height=config.get("plot_height"),
        show_progress=not args.no_progress,
    )


def run_synth(args) -> None:
    """Generate a synthetic fixture CSV (and optionally its true boundaries)."""
    if args.paper_like:
        matrix = paper_like_test_signal(noise_sigma=args.noise, seed=args.seed_fixture)
        truth = None
    else:
        spec = random_step_spec(args.seed_fixture, args.samples, args.rows, args.segments, args.noise)
        matrix = generate(spec)
        truth = spec.true_boundaries

    write_fixture(matrix, str(args.output))
    if args.truth and truth is not None:
        with open(args.truth, "w") as f:
            json.dump(truth.to_dict(), f, indent=2)
        logger.info(f"Wrote true boundaries {list(truth.boundaries)} to {args.truth}")


def create_parser() -> ArgumentParser:
    parser = ArgumentParser(
        prog="trace-segmenter",
        description="Segment multivariate traces by minimizing within-segment variance."
    )

    # Common arguments
    parser.add_argument(
        "-v", "--verbose",
        action="store_true",
        help="Enable verbose logging"
    )
    parser.add_argument(
        "-c", "--config",
        help="Path to a JSON configuration file"
    )

    subparsers = parser.add_subparsers(dest="command", help="Command to run")

    segment_parser = subparsers.add_parser(
        "segment",
        help="Segment a CSV trace matrix"
    )
    segment_parser.add_argument(
        "-i", "--input",
        type=Path,
        required=True,
        help="CSV file, comma-separated, optional header row of labels"
    )
    segment_parser.add_argument(
        "--orientation",
        choices=ORIENTATIONS,
        default="rows-are-signals",
        help="Whether CSV rows are signals or samples (default: rows-are-signals)"
    )
    segment_parser.add_argument(
        "-s", "--segments",
        type=int,
        required=True,
        help="Number of segments"
    )
    segment_parser.add_argument(
        "-a", "--algorithm",
        choices=ALGORITHMS,
        default="greedy",
        help="Optimizer (default: greedy)"
    )
    segment_parser.add_argument(
        "--preprocess",
        action="store_true",
        help="Apply offset reduction and peak-to-valley filtering before segmenting"
    )
    segment_parser.add_argument(
        "--ptv-fraction",
        type=float,
        help="Keep rows above this fraction of the largest peak-to-valley value (implies --preprocess)"
    )
    segment_parser.add_argument(
        "--no-restore-offsets",
        action="store_true",
        help="Keep filtered rows offset-reduced instead of at their original range"
    )
    segment_parser.add_argument(
        "--epsilon",
        type=float,
        help="Minimum improvement for a greedy boundary move (default: 1e-12)"
    )
    segment_parser.add_argument(
        "--max-iterations",
        type=int,
        help="Cap on greedy passes"
    )
    segment_parser.add_argument(
        "--candidate-range",
        choices=("both", "segment"),
        help="Greedy candidate positions: both neighbouring segments or the boundary's own segment"
    )
    segment_parser.add_argument(
        "-o", "--output",
        type=Path,
        default="result.json",
        help="Path to save the result document (default: result.json)"
    )
    segment_parser.add_argument(
        "--plot",
        type=Path,
        help="Optional SVG plot path"
    )
    segment_parser.add_argument(
        "--force-brute",
        action="store_true",
        help="Run brute force even above the combination limit"
    )
    segment_parser.add_argument(
        "-w", "--max-workers",
        type=int,
        help="Worker processes for brute-force enumeration"
    )
    segment_parser.add_argument(
        "--no-progress",
        action="store_true",
        help="Hide the brute-force progress bar"
    )

    synth_parser = subparsers.add_parser(
        "synth",
        help="Generate a synthetic fixture CSV"
    )
    synth_parser.add_argument(
        "--seed-fixture",
        type=int,
        required=True,
        help="Seed for levels, boundaries and noise"
    )
    synth_parser.add_argument(
        "--paper-like",
        action="store_true",
        help="Generate the 100-sample, five-plateau test signal"
    )
    synth_parser.add_argument("--samples", type=int, default=40, help="Sample count (default: 40)")
    synth_parser.add_argument("--rows", type=int, default=1, help="Row count (default: 1)")
    synth_parser.add_argument("--segments", type=int, default=4, help="True segment count (default: 4)")
    synth_parser.add_argument("--noise", type=float, default=0.0, help="Noise standard deviation (default: 0)")
    synth_parser.add_argument(
        "-o", "--output",
        type=Path,
        required=True,
        help="Path to save the fixture CSV"
    )
    synth_parser.add_argument(
        "--truth",
        type=Path,
        help="Optional JSON path for the true boundaries"
    )
    return parser


def main(argv: Optional[List[str]] = None) -> None:
    """Main entry point for the CLI."""
    parser = create_parser()
    args = parser.parse_args(argv)

    try:
        config = TraceSegmenterConfig(args.config)
        config.setup_logging(args.verbose)
    except ConfigError as e:
        logging.getLogger("trace_segmenter.cli").error(f"Error: {e}")
        sys.exit(EXIT_USAGE)

    if args.command is None:
        parser.print_help()
        sys.exit(EXIT_USAGE)

    try:
        if args.command == "segment":
            run(build_run_config(args, config))
        elif args.command == "synth":
            run_synth(args)
    except CostGuardError as e:
        logger.error(f"Refused: {e}")
        sys.exit(EXIT_COST_GUARD)
    except ConfigError as e:
        logger.error(f"Configuration error: {e}")
        sys.exit(EXIT_USAGE)
    except (DataError, SegmentationError, OSError) as e:
        logger.error(f"Error: {e}")
        sys.exit(EXIT_DATA)


if __name__ == "__main__":
    main()
