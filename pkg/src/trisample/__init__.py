"""Markov chains on 3-orientations (Schnyder woods) of planar triangulations."""

from .chain_fixed import (Tower, find_tower, mcr_step, mcr_transitions, mtr_step,
                          mtr_transitions, reverse_tower)
from .chain_flip import FlipState, apply_flip_move, enumerate_flip_moves, initial_flip_state, mef_step
from .dyck import (DyckPair, DyckPath, count_pairs, dyck_to_orientation, enumerate_dyck_pairs,
                   mdk_step, orientation_to_dyck)
from .errors import (CapExceeded, EmptySide, HorizonTooShort, IncompleteSpace, Infeasible,
                     InvalidDyckPair, InvalidOrientation, InvalidTower, NoValidColoring,
                     TooLarge, TrisampleError, ValidationError)
from .estimators import DyckEncoder, ExactChainAnalyzer, FixedOrientationSampler, FlipSampler
from .oracle import (StateSpace, TransitionMatrix, brute_force_orientations,
                     build_transition_matrix, conductance_of_cut, diameter,
                     distinct_triangulations, enumerate_flip_space, enumerate_reachable,
                     gadget_report, tv_curve_and_mixing)
from .orientation import (Color, Orientation3, SchnyderWood, check_vertex_condition,
                          construct_initial_orientation, derive_schnyder_coloring,
                          validate_potential)
from .triangulation import (Triangulation, build_slow_gadget, build_triangulation,
                            decompose_by_separating_triangles, enumerate_faces, find_triangles,
                            hexagonal_patch, insert_vertex, interior_vertices, nest_triangulation, random_triangulation,
                            stacked_triangulation)

__version__ = "0.1.0"
