import os
from pathlib import Path

VERSION = "1.0.0"    # Written in every run manifest

CONFIGS_DIR = Path(__file__).resolve().parent / "configs"

## Reference tables ##
ARMS_CONFIG = CONFIGS_DIR / "arms.json"    # arm bank (name, oracle value, adjustment range)
PATTERN_CONFIG = CONFIGS_DIR / "pattern_simulator.json"    # lag coefficients, constant, Gamma noise and priming
STRATEGIES_CONFIG = CONFIGS_DIR / "strategies.json"    # strategy presets per simulator
EXPERIMENTS_DIR = CONFIGS_DIR / "experiments"

## Experiment defaults ##
DEFAULT_SEED = 20240917
DEFAULT_RUNS = 100_000    # desk scale, the published tables average 10^6 runs
DEFAULT_HORIZON = 70
DEFAULT_WINDOW = 7    # number of past rewards fed to the regression oracle
DEFAULT_FORCED_PULLS = 1    # "no forced exploration" still pulls each arm once
DEFAULT_THREADS = 1
DEFAULT_ALPHA = 0.05    # backward elimination threshold
DEFAULT_BIN_WIDTH = 1000.0
DEFAULT_VERIFY_STEPS = 500_000
MIN_VERIFY_STEPS = 10_000
LAST_DAYS = 7

# Stationary step simulator
STATIONARY_SHAPE = 2.8
STATIONARY_SCALE = 3100.0

# Reference column the verification report is compared against
VERIFY_REFERENCE = {
    "lag1": 0.2540,
    "lag2": 0.0952,
    "lag3": 0.0827,
    "lag4": 0.1274,
    "lag6": 0.1281,
    "lag7": 0.1826,
}

## Output files ##
PER_TIMESTEP_FILE = "per_timestep.csv"
SUMMARY_FILE = "summary.csv"
MANIFEST_FILE = "manifest.json"
SWEEP_FILE = "sweep.csv"
VERIFY_FILE = "verification.json"
VERIFY_HISTOGRAM_FILE = "verification_histogram.csv"
HISTOGRAM_FILE = "histogram.csv"

## Logger configuration ##
BASIC_LOGS_FILE = os.environ.get("BANDITSIM_LOG_FILE", "")    # empty -> log to stderr
LOG_LEVEL = os.environ.get("BANDITSIM_LOG_LEVEL", "INFO")
MAX_BYTES_PER_FILE = 1_000_000    # Number of bytes before file rolling
BACKUP_FILES = 10    # Number of file before rewriting the first one
