from .config import PROTOCOLS, ConfigError, ScenarioConfig, TooManySources, format_config, load_config, parse_config
from .network import Network
from .output import CSV_COLUMNS, emit, read_csv, read_plotdata, write_csv, write_plotdata
from .metrics import compute_avg_delay, compute_nrl, compute_pdf, recompute_metrics
from .runner import (CellStats, RunRow, ScenarioResult, SweepResult, cell_stats, run_scenario, sweep, sweep_configs,
                     take_snapshot)
from .traffic import CbrFlow, generate_traffic
