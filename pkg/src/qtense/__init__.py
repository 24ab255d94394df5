"""Finite q-effect algebras, their q-states, Galois q-connections and
q-tense operators, with exact checks of the canonical frame construction
and of the representation of tense operators by frames of states."""
from .algebra import (AlgebraMap, CapExceeded, EffectAlgebra, FinitePoset, Inapplicable,
                      QEffectAlgebra, StructureError, check_morphism, check_order_reflecting_family,
                      classify, derive_order, direct_power, direct_product, dual, partial_diff,
                      partial_prod, partial_sum, supplement, validate_effect_axioms,
                      validate_q_axioms)
from .bundled import build, bundled_examples, load_bundled
from .config import Config
from .ideals import (check_rdp, check_riesz, enumerate_filters, enumerate_ideals,
                     generated_filter, generated_ideal, quotient)
from .io import parse_algebra, parse_frame, parse_workspace, serialize_algebra
from .report import Report
from .representation import (build_embedding, enumerate_mv_morphisms, synthesize_frame,
                             verify_representation_g, verify_representation_pair,
                             verify_tense_representation)
from .states import (StateSet, StateVector, check_order_reflecting, check_semi_state, check_state,
                     compare_by_unit_sets, enumerate_extreme_q_states, join_chain_semistates,
                     meet_semistates, verify_infimum_decomposition, verify_jp_implies_strong,
                     verify_superadditivity)
from .tense import (Frame, GaloisPair, bar_maps, canonical_connection, canonical_tense,
                    check_galois_connection, check_galois_q_connection, check_tense_operators,
                    powerset_galois, verify_rgrf_transfer, verify_term_commutation)
from .unit import (UNIT, Term, eval_term, mu, std_d, std_q, threshold_term, verify_obind,
                   verify_threshold)

__version__ = "0.1.0"
