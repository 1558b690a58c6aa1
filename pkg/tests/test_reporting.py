import csv
import json
from dataclasses import replace

import numpy as np
import pytest

from src.config import EXPERIMENTS_DIR, MANIFEST_FILE, PER_TIMESTEP_FILE, SUMMARY_FILE, VERSION
from src.harness.experiment import MetricsSummary, run_experiment
from src.reporting.experiment_config import config_to_dict, parse_config, preset_strategies, write_config
from src.reporting.writers import (ADJUSTED_FEEDBACK_NOTE, RunManifest, emit_histogram, emit_results,
                                   regression_warmup_note, run_notes)
from src.simulators.arms import DEFAULT_ARM_BANK
from src.simulators.environment import FeedbackMode, SimulatorKind
from src.simulators.steps import STATIONARY_GAMMA
from src.strategies.policies import OracleKind, Policy
from src.utils.errors import ConfigurationError, NoDataError
from src.utils.rngdist import derive_stream, sample_gamma


def read_rows(path):
    with open(path, newline='') as file:
        return list(csv.DictReader(file))


def write_json(path, data):
    path.write_text(json.dumps(data))
    return path


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigurationError):
        parse_config(tmp_path / "absent.json")


def test_empty_config_is_the_default_experiment(tmp_path):
    path = tmp_path / "empty.json"
    path.write_text("")
    config = parse_config(path)
    assert config == parse_config(None)
    assert config.horizon == 70
    assert config.simulator is SimulatorKind.STATIONARY
    assert config.feedback is FeedbackMode.ADJUSTED
    assert config.arms == DEFAULT_ARM_BANK
    assert [s.label for s in config.strategies] == ["UCB1", "UCBT", "e-greedy", "e-decr", "e-greedy reg", "e-decr reg"]


def test_default_stationary_parameters():
    strategies = {s.label: s for s in parse_config(None).strategies}
    assert strategies["UCB1"].ucb_c == 2500.0
    assert strategies["e-greedy"].epsilon == 0.11
    assert strategies["e-decr reg"].epsilon == 0.7
    assert strategies["e-greedy reg"].oracle is OracleKind.REGRESSION
    assert strategies["UCBT"].forced_pulls_per_arm == 2
    assert strategies["UCB1"].forced_pulls_per_arm == 1


def test_pattern_preset_parameters():
    strategies = {s.label: s for s in preset_strategies("published", SimulatorKind.PATTERN, 4)}
    assert strategies["UCB1"].ucb_c == 1600.0
    assert strategies["e-greedy"].epsilon == 0.03
    assert strategies["e-decr"].epsilon == 1.0
    assert all(s.forced_pulls_per_arm == 4 for s in strategies.values())


def test_malformed_config(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"horizon": 70,')
    with pytest.raises(ConfigurationError):
        parse_config(path)


def test_unknown_keys_are_rejected(tmp_path):
    with pytest.raises(ConfigurationError):
        parse_config(write_json(tmp_path / "c.json", {"horizon": 70, "discount": 0.9}))
    with pytest.raises(ConfigurationError):
        parse_config(write_json(tmp_path / "c.json", {"pattern": {"seasonality": 7}}))


def test_inverted_arm_range_is_rejected(tmp_path):
    arms = [{"name": "A", "oracle_value": -0.2, "adjust_low": 0.1, "adjust_high": -0.1}]
    with pytest.raises(ConfigurationError):
        parse_config(write_json(tmp_path / "c.json", {"arms": arms}))


def test_horizon_override_flows_downstream(tmp_path):
    config = parse_config(write_json(tmp_path / "c.json", {"horizon": 30, "runs": 5}))
    assert config.horizon == 30
    summaries = run_experiment(config)
    assert all(summary.per_t_mean.shape == (30,) for summary in summaries)


def test_horizon_shorter_than_forced_pulls(tmp_path):
    with pytest.raises(ConfigurationError):
        parse_config(write_json(tmp_path / "c.json", {"horizon": 10, "forced_pulls_per_arm": 4}))


def test_type_errors_are_configuration_errors(tmp_path):
    with pytest.raises(ConfigurationError):
        parse_config(write_json(tmp_path / "c.json", {"runs": "many"}))
    with pytest.raises(ConfigurationError):
        parse_config(write_json(tmp_path / "c.json", {"paired_noise": "yes"}))
    with pytest.raises(ConfigurationError):
        parse_config(write_json(tmp_path / "c.json", {"feedback": "sometimes"}))


@pytest.mark.parametrize("name", ["stationary.json", "stationary_forced.json", "pattern.json", "pattern_forced.json",
                                  "ucb_comparison.json"])
def test_shipped_experiments_parse(name):
    config = parse_config(EXPERIMENTS_DIR / name)
    assert config.strategies


def test_config_round_trip(tmp_path):
    config = parse_config(EXPERIMENTS_DIR / "pattern_forced.json")
    config = replace(config, master_seed=99, paired_noise=True)
    path = tmp_path / "written.json"
    write_config(config, path)
    assert parse_config(path) == config


def test_per_timestep_rows(tmp_path):
    summaries = [MetricsSummary.from_rewards(f"s{i}", np.full((2, 70), 8000.0 + i)) for i in range(6)]
    emit_results(summaries, tmp_path)
    rows = read_rows(tmp_path / PER_TIMESTEP_FILE)
    assert len(rows) == 420
    assert list(rows[0]) == ["strategy", "t", "mean_reward", "mean_reward_raw"]
    assert rows[0]["t"] == "1"
    assert rows[69]["t"] == "70"
    assert rows[70]["strategy"] == "s1"
    assert rows[70]["mean_reward"] == "8001.0"


def test_summary_layout(tmp_path):
    summary = MetricsSummary.from_rewards("UCB1", np.array([[8000.04, 9000.0] * 5]))
    emit_results([summary], tmp_path)
    rows = read_rows(tmp_path / SUMMARY_FILE)
    assert list(rows[0]) == ["strategy", "overall", "last7", "overall_raw", "last7_raw", "runs"]
    assert rows[0]["overall"] == "8500.0"
    assert float(rows[0]["overall_raw"]) == summary.overall_mean
    assert rows[0]["runs"] == "1"


def test_identical_reruns_are_byte_identical(small_config, tmp_path):
    first = emit_results(run_experiment(small_config), tmp_path / "a", small_config, timestamp="fixed")
    second = emit_results(run_experiment(small_config), tmp_path / "b", small_config, timestamp="fixed")
    for one, other in zip(first, second):
        assert one.read_bytes() == other.read_bytes()


def test_manifest_contents(small_config, tmp_path):
    emit_results(run_experiment(small_config), tmp_path, small_config, timestamp="2024-01-01T00:00:00")
    manifest = json.loads((tmp_path / MANIFEST_FILE).read_text())
    assert manifest["version"] == VERSION
    assert manifest["master_seed"] == 7
    assert manifest["config"] == config_to_dict(small_config)
    assert [s["strategy"] for s in manifest["summaries"]] == ["UCB1", "UCBT", "e-greedy", "e-decr"]
    assert manifest["notes"] == []


def test_manifest_notes_adjusted_pattern_feedback(small_config):
    config = replace(small_config, simulator=SimulatorKind.PATTERN)
    assert RunManifest.build(config, [], "t").notes == [ADJUSTED_FEEDBACK_NOTE]
    baseline = replace(config, feedback=FeedbackMode.BASELINE)
    assert RunManifest.build(baseline, [], "t").notes == []


def test_manifest_notes_regression_warmup(small_config, regression_strategy):
    config = replace(small_config, strategies=small_config.strategies + (regression_strategy,))
    assert RunManifest.build(config, [], "t").notes == [regression_warmup_note(7)]
    assert "no model before pull 18" in regression_warmup_note(7)
    both = replace(config, simulator=SimulatorKind.PATTERN)
    assert run_notes(both) == [ADJUSTED_FEEDBACK_NOTE, regression_warmup_note(7)]


def test_histogram_hand_binning(tmp_path):
    rows = read_rows(emit_histogram([0.5, 1.5], 1.0, tmp_path / "h.csv"))
    assert [(float(r["bin_start"]), int(r["count"])) for r in rows] == [(0.0, 1), (1.0, 1)]


def test_histogram_of_equal_samples(tmp_path):
    rows = read_rows(emit_histogram([4.2] * 7, 0.25, tmp_path / "h.csv"))
    assert len(rows) == 1
    assert float(rows[0]["normalized_density"]) == pytest.approx(4.0)


def test_histogram_density_integrates_to_one(tmp_path):
    samples = sample_gamma(derive_stream(6, 0), STATIONARY_GAMMA, 50_000)
    rows = read_rows(emit_histogram(samples, 1000.0, tmp_path / "h.csv", STATIONARY_GAMMA))
    densities = np.array([float(r["normalized_density"]) for r in rows])
    assert np.all(densities >= 0)
    assert densities.sum() * 1000.0 == pytest.approx(1.0, abs=1e-9)
    assert sum(int(r["count"]) for r in rows) == 50_000
    reference = np.array([float(r["reference_density"]) for r in rows])
    assert np.abs(reference - densities).max() < 1e-5


def test_empty_histogram(tmp_path):
    with pytest.raises(NoDataError):
        emit_histogram([], 1.0, tmp_path / "h.csv")


def test_policy_enum_serializes_by_value(small_config):
    assert config_to_dict(small_config)["strategies"][0]["policy"] == Policy.UCB1.value
