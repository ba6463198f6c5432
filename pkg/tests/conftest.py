from dataclasses import replace

import pytest

from manetsim.harness import Network, ScenarioConfig
from manetsim.world import MobilityParams

# S-B-C-D, 200 m apart: only consecutive nodes hear each other at 250 m range
CHAIN = [(0.0, 0.0), (200.0, 0.0), (400.0, 0.0), (600.0, 0.0)]
S, B, C, D = range(4)

# S=0, A=1, B=2, D=3; S and D are 260 m apart, every other link is 158 m or
# shorter, so enquiry signal (about 0.37) keeps all four rows STABLE
DIAMOND = [(0.0, 200.0), (130.0, 290.0), (130.0, 110.0), (260.0, 200.0)]

STATIC = MobilityParams(0.0, 0.0, 0.0)


def static_config(protocol: str, n: int, **changes) -> ScenarioConfig:
    cfg = ScenarioConfig(node_count=n, protocol=protocol, source_count=1, mobility=STATIC)
    return replace(cfg, **changes).validate()


def make_net(protocol: str, positions, record_trace: bool = True, **changes) -> Network:
    return Network(static_config(protocol, len(positions), **changes), positions=positions,
                   record_trace=record_trace)


def sent(net, kind: str, event: str = "tx"):
    return [r for r in net.log.records if r[2] == kind and r[3] == event]


_REPORT: list[str] = []


@pytest.fixture(scope="session")
def acceptance_report():
    return _REPORT


def pytest_terminal_summary(terminalreporter):
    if _REPORT:
        terminalreporter.section("acceptance criteria")
        for line in _REPORT:
            terminalreporter.write_line(line)
