"""IRS-assisted opportunistic scheduling: simulator and closed-form rate laws."""

from ._irsoc import *  # noqa: F401,F403
from ._irsoc import ConfigError, __version__

CSV_COLUMNS = ("sweep", "comparator", "mean_rate", "stderr", "n_trials", "seed")


def simulate(settings=None, *, fair_share=False, threads=1):
    """Per-trial rates for a configuration given as scenario-file keys."""
    cfg, geo = make_config(dict(settings or {}))
    return simulate_trials(cfg, geo, fair_share=fair_share, threads=threads)


def run(name_or_path, settings=None, *, threads=1):
    """Run a built-in scenario or scenario file, with optional key overrides."""
    if name_or_path in builtin_scenario_names():
        scenario = builtin_scenario(name_or_path)
    else:
        scenario = load_scenario_file(str(name_or_path))
    for key, value in (settings or {}).items():
        scenario.set(key, value)
    scenario.validate()
    return run_scenario(scenario, threads=threads)
