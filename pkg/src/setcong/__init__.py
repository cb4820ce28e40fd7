"""Set congruence systems over free group actions: closures, finite search, sphere realizations."""
from ._accel import backend
from .deduction import ReachTable, completeness_check, designated_witnessing, reach, sample_model
from .dsl import parse_family, parse_system, parse_word, render_system, render_word
from .errors import *  # noqa: F401,F403
from .finite import (
    FiniteFamily,
    Sat,
    UnsatWithin,
    WitnessAssignment,
    check_forced_shift,
    is_connected,
    is_prime,
    is_strongly_prime,
    normalize_family,
    search_family,
    theoretical_bound,
    verify_family,
)
from .lattice import classify, fixture_catalog, implication_edges
from .setgraph import build_setgraph, check_claim1, check_claim2, check_claim3
from .sphere import realize, standard_free_rotations, verify_realization
from .systems import (
    CongruenceSystem,
    Statement,
    check_reduction,
    congruence_closure,
    is_consistent,
    is_weak,
    make_cp,
    make_unc,
    numeric_consistency,
    reduce_to_unc,
    subcongruence_closure,
)
from .words import CosetSpace, invert, multiply, reduce_word

__version__ = "0.1.0"
