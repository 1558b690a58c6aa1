"""
This file writes the results of the harness as flat files:
    - per_timestep.csv: strategy, t, mean_reward (one decimal), mean_reward_raw (full precision)
    - summary.csv: strategy, overall, last7, overall_raw, last7_raw, runs
    - manifest.json: config echo, version, seed, timestamp and the summaries, enough to rerun the experiment
    - histogram CSVs: bin_start, count, normalized_density[, reference_density]
Rows and columns have a fixed order and fixed formatting so identical runs give byte-identical CSVs.
"""
import csv
import datetime
import json
from dataclasses import dataclass, field
from pathlib import Path

import src.log as log
from src.config import (LAST_DAYS, MANIFEST_FILE, PER_TIMESTEP_FILE, SUMMARY_FILE, SWEEP_FILE, VERIFY_FILE,
                        VERIFY_HISTOGRAM_FILE, VERSION)
from src.harness.experiment import ExperimentConfig, MetricsSummary
from src.harness.sweep import SweepResult
from src.harness.verification import VerificationReport, histogram
from src.reporting.experiment_config import config_to_dict
from src.simulators.environment import FeedbackMode, SimulatorKind
from src.strategies.oracles import first_fit_pull
from src.utils.rngdist import GammaParams, gamma_pdf

experiment_logger = log.ExperimentLogHandler()

ADJUSTED_FEEDBACK_NOTE = (
    "pattern simulator ran with feedback=adjusted: the adjusted rewards feed the lag recursion and drift upward "
    "(mean multiplier above 1); the published pattern-simulator averages are matched with feedback=baseline"
)


def regression_warmup_note(window: int) -> str:
    return (f"regression oracle with window {window}: no model before pull {first_fit_pull(window)}, the earlier pulls "
            f"use the mean oracle")


def run_notes(config: ExperimentConfig) -> list[str]:
    """
    Caveats recorded in the manifest (and logged by the CLI) for @config.
    """
    notes = list()
    if config.simulator is SimulatorKind.PATTERN and config.feedback is FeedbackMode.ADJUSTED:
        notes.append(ADJUSTED_FEEDBACK_NOTE)
    windows = sorted({strategy.regression_window for strategy in config.strategies if strategy.uses_regression})
    notes.extend(regression_warmup_note(window) for window in windows)
    return notes


def _fmt(value: float) -> str:
    return f"{value:.1f}"


def _raw(value: float) -> str:
    return repr(float(value))


@dataclass
class RunManifest:
    config: dict
    master_seed: int
    version: str = VERSION
    timestamp: str = ""
    summaries: list[dict] = field(default_factory=list)
    files: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @classmethod
    def build(cls, config: ExperimentConfig, summaries: list[MetricsSummary], timestamp: str | None = None) -> "RunManifest":
        return cls(
            config=config_to_dict(config),
            master_seed=config.master_seed,
            timestamp=timestamp if timestamp is not None else datetime.datetime.now().isoformat(timespec="seconds"),
            summaries=[
                {"strategy": s.strategy, "overall": s.overall_mean, "last7": s.last7_mean, "runs": s.runs}
                for s in summaries
            ],
            files=[PER_TIMESTEP_FILE, SUMMARY_FILE],
            notes=run_notes(config),
        )

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "timestamp": self.timestamp,
            "master_seed": self.master_seed,
            "config": self.config,
            "summaries": self.summaries,
            "files": self.files,
            "notes": self.notes,
        }


def _write_rows(path: Path, header: list[str], rows):
    with open(path, 'w', newline='') as file:
        writer = csv.writer(file, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def emit_results(summaries: list[MetricsSummary], out_dir: str | Path, config: ExperimentConfig | None = None,
                 timestamp: str | None = None) -> list[Path]:
    """
    Writes the per-timestep and summary CSVs of @summaries in @out_dir, plus the manifest when @config is given.
    returns the written paths
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    per_t_path = out_dir / PER_TIMESTEP_FILE
    _write_rows(
        per_t_path,
        ["strategy", "t", "mean_reward", "mean_reward_raw"],
        ([s.strategy, t, _fmt(value), _raw(value)] for s in summaries for t, value in enumerate(s.per_t_mean, start=1)),
    )
    summary_path = out_dir / SUMMARY_FILE
    _write_rows(
        summary_path,
        ["strategy", "overall", "last7", "overall_raw", "last7_raw", "runs"],
        ([s.strategy, _fmt(s.overall_mean), _fmt(s.last7_mean), _raw(s.overall_mean), _raw(s.last7_mean), s.runs]
         for s in summaries),
    )
    written = [per_t_path, summary_path]
    if config is not None:
        manifest_path = out_dir / MANIFEST_FILE
        with open(manifest_path, 'w') as file:
            json.dump(RunManifest.build(config, summaries, timestamp).to_dict(), file, indent=2)
            file.write("\n")
        written.append(manifest_path)
    experiment_logger.add_log("WRITE", f"{len(summaries)} strategies ({LAST_DAYS}-day tail included) to {out_dir}")
    return written


def emit_histogram(samples, bin_width: float, out_path: str | Path, reference: GammaParams | None = None) -> Path:
    """
    Bins @samples by @bin_width. The normalized density sums to 1 once multiplied by the bin width.
        @param reference: optional Gamma distribution whose density is written at each bin centre
    """
    binned = histogram(samples, bin_width)
    header = ["bin_start", "count", "normalized_density"]
    columns = [binned.bin_starts, binned.counts, binned.density]
    if reference is not None:
        header.append("reference_density")
        columns.append(gamma_pdf(binned.bin_starts + bin_width / 2.0, reference))
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    _write_rows(
        out_path,
        header,
        ([_raw(row[0]), int(row[1])] + [_raw(value) for value in row[2:]] for row in zip(*columns)),
    )
    return out_path


def emit_sweep(result: SweepResult, out_dir: str | Path) -> Path:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / SWEEP_FILE
    _write_rows(
        path,
        [result.parameter, "overall", "last7", "overall_raw", "last7_raw"],
        ([_raw(value), _fmt(s.overall_mean), _fmt(s.last7_mean), _raw(s.overall_mean), _raw(s.last7_mean)]
         for value, s in result.rows),
    )
    return path


def emit_verification(report: VerificationReport, out_dir: str | Path) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    report_path = out_dir / VERIFY_FILE
    with open(report_path, 'w') as file:
        json.dump(report.as_dict(), file, indent=2)
        file.write("\n")
    histogram_path = emit_histogram(report.samples, report.histogram.bin_width, out_dir / VERIFY_HISTOGRAM_FILE)
    return [report_path, histogram_path]
