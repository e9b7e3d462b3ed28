"""Gauge spaces on finite point sets.

Metric families, proximity and continuity checks, covers, Cauchy-point
completion, and the one-point and Stone-Čech compactification gauges, all
evaluated exactly on finite samples or at a declared slack.
"""
from .metrics import (ROUNDOFF, InputError, MetricReport, MetricTable, PointSet, ToleranceProfile,
                      Violation, ball, collapse, coordinate_metric, coordinate_tables, derived_metric,
                      discrete, distance_to_set, indiscrete, max_metric, partition_metric,
                      require_metric, restrict, sup_family, truncate, validate_metric, weighted_sum)
from .gauges import (Gauge, GaugeSizeError, SeparationVerdict, generate_gauge, is_separated,
                     pointwise_gauge, separated_quotient, tuple_space)
from .relations import (ContinuityVerdict, EquivalenceVerdict, MapTable, ProximalVerdict,
                        SequenceStatus, check_continuity, check_proximal_continuity,
                        check_uniform_continuity, make_distance_function, near, real_line_gauge,
                        real_valued_map, sequence_status, set_distance, topologically_equivalent)
from .covers import CoverCertificate, cover_profile, greedy_net, verify_cover
from .completion import (CauchyPoint, CauchyPointError, CauchyReport, CompletedSpace,
                         cauchy_from_partial, complete_space, deleted_point_profile,
                         find_representative, hat_distance, profiles_from_generators,
                         represent_point, validate_cauchy_point)
from .compactify import (CompletenessSlackError, DatumVerdict, EvaluationDatum, Evaluation,
                         ExhaustionChain, FunctionDict, LocatednessError, StoneCechGauge, TailChain,
                         TargetNotReachable, Ultrafilter, cauchy_from_evaluation, compose_dict,
                         distance_dictionary, enumerate_ultrafilters, evaluate_all, evaluate_point,
                         extend_map, extension_entries, infinity_profile, one_point_gauge, psi_id,
                         refine_datum, stone_cech_gauge, tail_datum, tails_toward, validate_datum)
from .spacefile import SpaceBundle, dumps, load_space, loads, save

__version__ = "0.1.0"
