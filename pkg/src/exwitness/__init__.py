"""Exclusivity-graph contextuality witnesses with certified bounds.

Builds exclusivity graphs, certifies the noncontextual bound (independence
number) and the quantum bound (Lovász number) with two-sided numerical
certificates, extracts quantum realizations, reproduces the subset-family
witness table and the small-n ratio maxima, and simulates the bookmaker
betting game.
"""

from .errors import InputError, InvariantError, UnsupportedConstructionError
from .game import GameConfig, GameResult, expected_profit, simulate_game, uniform_betting
from .graphs import (
    Graph,
    SubsetFamily,
    alon_r2,
    complement,
    complete,
    cycle,
    intersection_family,
    new_graph,
    random_graph,
    read_graph,
    write_graph,
)
from .independence import (
    IndependenceResult,
    brute_force_alpha,
    greedy_lower_bound,
    max_independent_set,
)
from .representation import (
    OrthonormalRepresentation,
    ValidationReport,
    extract_representation,
    two_value_representation,
    validate_representation,
)
from .theta import (
    ThetaConfig,
    ThetaResult,
    certify_lower,
    certify_upper,
    jacobi_eig,
    solve_theta,
    symmetric_eig,
)
from .witness import (
    BoundCheck,
    ScanResult,
    TableRow,
    WitnessReport,
    check_small_alpha_bound,
    exhaustive_ratio_scan,
    reproduce_table,
    witness_report,
)

__version__ = "0.1.0"
