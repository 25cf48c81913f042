"""plreason: a reasoner for data-usage policies.

Decides subsumption (compliance) and satisfiability of policies built
from concept names, interval constraints, and existential restrictions,
against knowledge bases with atomic inclusions, disjointness,
functionality, and range axioms — with optional external vocabularies
accessed through a subsumption oracle or compiled away.
"""

from .engine import (Engine, EngineOptions, OPTION_PRESETS, interval_count,
                     options_for, plr, plr_oracle)
from .model import (BOTTOM, ClosureIndex, Disjoint, FullConcept, Functional,
                    Inclusion, Interval, KnowledgeBase, Range, SignatureError,
                    SimpleConcept, as_full, atom, build_closure, conj, exists,
                    has)
from .normalize import Ibq, Plain, is_satisfiable, normalize_full, normalize_simple
from .oracle import (ClosureOracle, Definition, EMPTY_ONTOLOGY, ExSub,
                     ExternalOntology, ODisjoint, SaturationOracle, Sub,
                     SubEx, compile_oracle, saturate, shift_axioms,
                     single_atom_transform)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
