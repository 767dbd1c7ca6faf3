"""
Tests for the command-line interface.
"""

import json

import pytest

from trace_segmenter.cli import (
    EXIT_COST_GUARD,
    EXIT_DATA,
    EXIT_USAGE,
    RunConfig,
    build_run_config,
    create_parser,
    main,
    run,
)
from trace_segmenter.config import TraceSegmenterConfig
from trace_segmenter.core import ConfigError
from trace_segmenter.segmenter import greedy_segment
from trace_segmenter.utils import load_csv, read_result_document
from trace_segmenter.variance import matrix_variance


@pytest.fixture
def fixture_csv(tmp_path):
    """Noiseless two-row step fixture with five segments and its truth file."""
    path = tmp_path / "fixture.csv"
    truth = tmp_path / "truth.json"
    main(["synth", "--seed-fixture", "7", "--samples", "60", "--rows", "2",
          "--segments", "5", "-o", str(path), "--truth", str(truth)])
    return path, json.loads(truth.read_text())


def exit_code(argv):
    with pytest.raises(SystemExit) as excinfo:
        main(argv)
    return excinfo.value.code


def test_synth_writes_fixture_and_truth(fixture_csv):
    path, truth = fixture_csv
    M = load_csv(str(path))
    assert (M.n_rows, M.n_samples) == (2, 60)
    assert truth["n"] == 60
    assert len(truth["boundaries"]) == 4


def test_segment_matches_library(fixture_csv, tmp_path):
    path, truth = fixture_csv
    output = tmp_path / "result.json"
    main(["segment", "-i", str(path), "-s", "5", "-o", str(output)])

    document = read_result_document(str(output))
    library = greedy_segment(load_csv(str(path)), 5)
    assert document["objective"] == library.objective
    assert document["boundaries"] == list(library.segmentation.boundaries)
    assert document["boundaries"] == truth["boundaries"]
    assert document["boundaries_1based"] == [b + 1 for b in truth["boundaries"]]
    assert document["initial_boundaries"] == [12, 24, 36, 48]
    assert document["algorithm"] == "greedy"
    assert document["input"]["samples"] == 60
    assert document["input"]["kept_rows"] == [0, 1]
    assert len(document["segment_stats"]) == 5
    assert document["config"]["candidate_range"] == "both"


def test_single_segment(fixture_csv, tmp_path):
    path, _ = fixture_csv
    output = tmp_path / "result.json"
    main(["segment", "-i", str(path), "-s", "1", "-o", str(output)])
    document = read_result_document(str(output))
    assert document["boundaries"] == []
    assert document["objective"] == pytest.approx(matrix_variance(load_csv(str(path))))
    assert document["variance_reduction"] == pytest.approx(0, abs=1e-12)


def test_brute_force_with_plot(fixture_csv, tmp_path):
    path, truth = fixture_csv
    output = tmp_path / "result.json"
    plot = tmp_path / "plot.svg"
    main(["segment", "-i", str(path), "-s", "3", "-a", "brute-force", "--no-progress",
          "-o", str(output), "--plot", str(plot)])
    document = read_result_document(str(output))
    assert document["algorithm"] == "brute-force"
    assert document["iterations"] == 1711  # C(59, 2)
    assert plot.read_bytes().count(b'class="boundary"') == 2


def test_cost_guard_exit_code(tmp_path):
    path = tmp_path / "long.csv"
    main(["synth", "--seed-fixture", "1", "--samples", "200", "-o", str(path)])
    code = exit_code(["segment", "-i", str(path), "-s", "7", "-a", "brute-force",
                      "--no-progress", "-o", str(tmp_path / "r.json")])
    assert code == EXIT_COST_GUARD
    assert not (tmp_path / "r.json").exists()


def test_preprocess_flag(tmp_path):
    path = tmp_path / "ptv.csv"
    path.write_text("0,10,0,10\n2,9,2,9\n1,6,1,6\n4,5,4,5\n")
    output = tmp_path / "result.json"
    main(["segment", "-i", str(path), "-s", "2", "--ptv-fraction", "0.6", "-o", str(output)])
    document = read_result_document(str(output))
    assert document["input"]["kept_rows"] == [0, 1]
    assert document["input"]["analysed_rows"] == 2
    assert document["input"]["preprocess_report"]["ptv"] == [10, 7, 5, 1]
    assert document["config"]["preprocess"]["ptv_fraction"] == 0.6


def test_data_errors_exit_two(tmp_path):
    assert exit_code(["segment", "-i", str(tmp_path / "missing.csv"), "-s", "2"]) == EXIT_DATA

    bad = tmp_path / "bad.csv"
    bad.write_text("1,2,3\n4,5,abc\n")
    assert exit_code(["segment", "-i", str(bad), "-s", "2", "-o", str(tmp_path / "r.json")]) == EXIT_DATA

    short = tmp_path / "short.csv"
    short.write_text("1,2,3\n")
    assert exit_code(["segment", "-i", str(short), "-s", "4", "-o", str(tmp_path / "r.json")]) == EXIT_DATA


def test_usage_errors_exit_one(tmp_path):
    assert exit_code(["segment", "-s", "2"]) == EXIT_USAGE
    assert exit_code([]) == EXIT_USAGE

    config = tmp_path / "config.json"
    config.write_text(json.dumps({"epsilon": -1}))
    assert exit_code(["-c", str(config), "synth", "--seed-fixture", "1",
                      "-o", str(tmp_path / "f.csv")]) == EXIT_USAGE

    assert exit_code(["segment", "-i", str(tmp_path / "f.csv"), "-s", "0"]) == EXIT_USAGE


def test_run_config_validation():
    with pytest.raises(ConfigError):
        RunConfig(input_path="in.csv", segments=0, output_path="out.json")
    with pytest.raises(ConfigError):
        RunConfig(input_path="", segments=2, output_path="out.json")
    with pytest.raises(ConfigError):
        RunConfig(input_path="in.csv", segments=2, output_path="out.json", algorithm="annealing")


def test_run_returns_document(fixture_csv, tmp_path):
    path, _ = fixture_csv
    cfg = RunConfig(input_path=str(path), segments=5, output_path=str(tmp_path / "r.json"))
    document = run(cfg)
    assert document == read_result_document(str(tmp_path / "r.json"))


def test_parser_defaults():
    args = create_parser().parse_args(["segment", "-i", "x.csv", "-s", "3"])
    assert args.algorithm == "greedy"
    assert args.orientation == "rows-are-signals"
    assert str(args.output) == "result.json"
    assert args.preprocess is False


def test_config_file_settings_reach_the_run(fixture_csv, tmp_path):
    path, _ = fixture_csv
    config = tmp_path / "config.json"
    config.write_text(json.dumps({
        "candidate_range": "segment",
        "max_iterations": 5,
        "ptv_fraction": 0.5,
        "restore_offsets": False,
    }))
    output = tmp_path / "result.json"

    main(["-c", str(config), "segment", "-i", str(path), "-s", "5", "--preprocess", "-o", str(output)])
    recorded = read_result_document(str(output))["config"]
    assert recorded["candidate_range"] == "segment"
    assert recorded["max_iterations"] == 5
    assert recorded["preprocess"] == {"ptv_fraction": 0.5, "restore_offsets": False}

    main(["-c", str(config), "segment", "-i", str(path), "-s", "5", "-o", str(output),
          "--candidate-range", "both", "--max-iterations", "9", "--ptv-fraction", "0.6"])
    recorded = read_result_document(str(output))["config"]
    assert recorded["candidate_range"] == "both"
    assert recorded["max_iterations"] == 9
    assert recorded["preprocess"] == {"ptv_fraction": 0.6, "restore_offsets": False}


def test_build_run_config_starts_from_config_file(tmp_path):
    config_file = tmp_path / "config.json"
    config_file.write_text(json.dumps({"epsilon": 1e-6, "restore_offsets": False}))
    config = TraceSegmenterConfig(str(config_file))
    parser = create_parser()

    cfg = build_run_config(parser.parse_args(["segment", "-i", "x.csv", "-s", "3"]), config)
    assert cfg.preprocess is None
    assert cfg.greedy.epsilon == 1e-6
    assert cfg.greedy.candidate_range == "both"

    args = parser.parse_args(["segment", "-i", "x.csv", "-s", "3", "--preprocess", "--epsilon", "1e-9"])
    cfg = build_run_config(args, config)
    assert cfg.preprocess.ptv_fraction == 0.6
    assert cfg.preprocess.restore_offsets is False
    assert cfg.greedy.epsilon == 1e-9
