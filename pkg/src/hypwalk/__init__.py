"""hypwalk: exact word-metric geometry, random walks, and freeness
certificates for free groups and free products of finite cyclic groups."""

__version__ = "0.1.0"

from .errors import (BudgetExceededError, HypothesisViolatedError,
                     HypwalkError, InvalidEpsilonError, InvalidLetterError,
                     InvalidProbabilitiesError, NotABasisError,
                     NotLoxodromicError, SchemaError, WrongDistributionError,
                     WrongModelError)
from .groups import (GroupModel, IDENTITY, Word, free_group, free_product,
                     parse_group_spec, serialize_word)
from .paths import Path, QGConstants, concat_paths, path_from_vertices
from .geometry import (BrokenConcatOutcome, BrokenConstants, MatchWitness,
                       broken_concat_constants, broken_concat_verify,
                       central_segment, central_segment_containment_check,
                       distance_matrix, find_match, find_self_match,
                       four_point_delta, gromov_product, hausdorff_distance,
                       is_quasi_geodesic, min_additive_constant, morse_bound,
                       neighborhood_diameter)
from .walks import (BernoulliEstimate, Distribution, DistributionReport,
                    DriftEstimate, WalkSample, bernoulli_estimate,
                    birth_death_distance_distribution, derive_seed,
                    drift_estimate, drift_oracle_for,
                    drift_oracle_uniform_free, event_probability,
                    make_distribution, sample_walk, uniform_generators,
                    validate_distribution, walk_distance, walk_geodesic,
                    wilson_interval)
from .freeness import (EnumerationCheck, LoxProduct, MixedWord,
                       QGWordCheck, RelationReport, SearchBounds,
                       SeparationProfile, Syllable, TheoremConstants,
                       TransversalityProfile, count_mixed_words,
                       enumerate_mixed_words, evaluate,
                       free_product_certificate, lox_product_word,
                       mixed_word_path, qg_enumeration_check, qg_word_check,
                       relation_search, separation_profile, subgroup_member,
                       subgroup_orbit, theorem_constants,
                       transversality_profile)
from .stallings import CoreGraph, member, rank, stallings_core
from .experiments import (ExperimentConfig, Report, TrialRecord,
                          aggregate_records, load_records, parse_config,
                          replay, resolve_drift_constant, run_experiment,
                          write_report)

__all__ = [name for name in dir() if not name.startswith("_")]
