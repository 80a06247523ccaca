from .scenario import ScenarioFile, load_scenario, load_scenario_file, parse_scenario_text
from .presets import PRESET_NAMES, preset_document
from .report import emit_plot_data, emit_report, run_scenario, sweep

__all__ = [
    "ScenarioFile",
    "load_scenario",
    "load_scenario_file",
    "parse_scenario_text",
    "PRESET_NAMES",
    "preset_document",
    "emit_plot_data",
    "emit_report",
    "run_scenario",
    "sweep",
]
