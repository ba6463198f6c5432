"""Discrete-event MANET simulator: DSR, AODV and SONNET-guided multipath routing."""

from .core import InvalidRange, RngStream, RngStreams, SchedulingInPast, Simulator, draw_uniform
from .harness import (
    Network,
    ScenarioConfig,
    load_config,
    parse_config,
    run_scenario,
    sweep,
)
from .trace import MetricsSummary, PacketLog
from .world import FieldSpec, MobilityParams, RadioParams, World

__version__ = "0.1.0"
