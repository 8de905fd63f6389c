"""Finite heaps, trusses and truss modules as operation tables.

Structures are validated exhaustively, Hom sets are enumerated in full, and
the exactness lemmas are evaluated on concrete diagrams with their witnesses
recorded.
"""

from .corpus import CorpusConfig, generate_corpus
from .diagrams import Diagram, make_diagram, twist
from .errors import (
    BudgetExceeded,
    ConsistencyError,
    HypothesisError,
    InvalidStructure,
    LoadError,
    ParseError,
    PreconditionError,
    PropertyFalsified,
    StructureError,
    TrussLabError,
    UnknownKindError,
)
from .exact import abs_exact, abs_sequence, hom_left_exact, is_exact_at, is_short_exact, splice
from .factor import factor_through_epi, factor_through_mono, splitting
from .heap import FiniteGroup, FiniteHeap, group_of_heap, heap_of_group, validate_group, validate_heap
from .hom import abs_morphism, abs_object, enumerate_hom
from .io import dump, dumps, load, loads
from .lemmas import five_lemma, induced_epi_map, induced_mono_map, nine_lemma, short_five
from .module import (
    FiniteModule,
    ModuleMorphism,
    absorbers,
    first_isomorphism,
    induced_module,
    module_of_ring_module,
    validate_module,
    validate_module_morphism,
)
from .snake import snake, snake_all_absorbers
from .suites import run_suite
from .truss import FiniteRing, FiniteTruss, truss_of_ring, validate_ring, validate_truss, zn_ring, zn_truss

__version__ = "0.1.0"
