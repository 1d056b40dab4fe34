"""photonpath: exact simulation of single-photon delay networks that search
graphs for Hamiltonian paths.

A graph compiles into a network of delay lines and equal-split gratings in
which every walk of the graph is a physical path. Vertex delays are natural
logs of distinct primes, so the arrival time of a path factors uniquely: a
path that visits every vertex exactly once arrives at the log of the
square-free product of all the primes, and no other walk can share that
instant. The package propagates the full superposition over arrival-time
classes exactly, samples single shots reproducibly, and runs the detection
and head-first path-reconstruction procedures against brute-force oracles.
"""

from .delays import (
    AnalysisReport,
    ArrivalKey,
    DelayTable,
    analyze_graph,
    build_delay_table,
    default_epsilon,
    first_primes,
    hamiltonian_key,
    hamiltonian_product,
    hamiltonian_time,
    is_hamiltonian_key,
    key_product,
    key_time,
    max_visit_bound,
    min_gap_approx,
    min_gap_exact,
    product_exponents,
    realizable_products,
)
from .graphs import (
    DEFAULT_ENUMERATION_CAP,
    EnumerationCapError,
    Graph,
    GraphFormatError,
    brute_force_hamiltonian_paths,
    complete_graph,
    count_walks,
    cycle_graph,
    load_graph,
    out_degree,
    parse_graph,
    path_graph,
    random_graph,
    star_graph,
)
from .network import (
    FEEDFORWARD,
    RECURRENT,
    FeedbackDelayError,
    Network,
    Unit,
    compile_feedforward,
    compile_recurrent,
    default_feedback_delay,
    network_from_dict,
    network_to_dict,
    validate_network,
)
from .procedures import (
    ConstructionInvariantError,
    ConstructionResult,
    CostReport,
    DetectionOutcome,
    NoHamiltonianPathError,
    construct_path,
    construction_cost,
    detect_hamiltonian,
)
from .simulate import (
    CLASSICAL,
    COHERENT,
    INCOHERENT,
    BalanceReport,
    DetectionReport,
    PhotonShot,
    ShotSummary,
    TerminalDistribution,
    detection_probability,
    distribution_rows,
    probability_balance,
    propagate,
    propagate_rows,
    sample_photon,
    sample_shots,
)

__version__ = "0.1.0"
