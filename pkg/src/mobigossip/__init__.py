"""Rumor spreading in the mobile telephone model: graphs, expansion metrics,
matchings, a round simulator and an experiment harness."""
from .dynamic import UNBOUNDED, DynamicGraph, make_dynamic
from .experiments import ExperimentSpec, audit_phases, fit_power_law, run_experiment, run_trials
from .generators import gen_badgraph, gen_family, gen_gstar
from .graph import Graph, make_graph
from .graphio import load, read_dynamic, read_graph, write_dynamic, write_graph
from .matching import bridge, gamma, max_matching, verify_msize
from .metrics import conductance, cut_report, degree_stats, dynamic_metrics, vertex_expansion
from .sim import Cap, ProtocolSpec, Resolution, Strategy, resolve_proposals, run_round, run_trial

__version__ = "0.1.0"
