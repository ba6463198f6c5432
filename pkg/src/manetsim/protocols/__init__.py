from .aodv import AodvAgent, AodvRouteEntry, freshness_better
from .base import RoutingAgent, RoutingParams, SendBuffer
from .dsr import DsrAgent, RouteCache
from .emp import EmpAgent, EmpParams, MultipathRoute, NodeVitals, PathEntry, multipath_update
from .sonnet import NeighborState, SonnetEntry, SonnetTable, classify_state, score

AGENTS = {"DSR": DsrAgent, "AODV": AodvAgent, "EMP": EmpAgent}
