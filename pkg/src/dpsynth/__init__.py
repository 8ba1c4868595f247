"""Boolean realizability and witness synthesis with graded project-join
trees and BDDs."""
from .bdd import BddFunction, BddManager
from .cnf import SynthesisProblem, parse_qdimacs, pure_x_clauses, read_qdimacs, write_qdimacs
from .planner import (GradedProjectJoinTree, bucket_elimination_tree, build_gaifman,
                      decomposition_to_graded_tree, mcs_order, min_fill_decomposition, plan,
                      tree_width, validate_tree)
from .realizability import Verdict, check_realizability
from .synthesis import WitnessMap, dp_synth, factored_baseline, solve_eqn
from .pipeline import solve
from .verify import oracle_realizability, verify_witnesses

__version__ = "0.1.0"
