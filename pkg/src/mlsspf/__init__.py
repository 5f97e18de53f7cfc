"""Satisfiability witnessing for multi-level syllogistic with singleton,
powerset and finiteness constraints."""

from .errors import (ArityError, CannotWarmUp, CardinalityDeficit,
                     CoverMissesVariable, FormulaSyntaxError, LimitExceeded,
                     MlsspfError, NoClosedCover, NoEvent, NoLocalTrash,
                     NotAWitness, NotTransitive, UnboundVariable)
from .hf import (EMPTY, HfSet, bool_op, compare, from_json, in_pow_star,
                 make_set, meets, pow_star, pow_star_size, powerset,
                 transitive_closure, transitive_ops)
from .lang import (Formula, Literal, SatisfactionReport,
                   drop_finite_literals, eval_literal, evaluate, parse)
from .limits import DEFAULT_LIMITS, Limits
from .msrefine import (ImitationWitness, MsOverlay, StartConfiguration,
                       check_segment_imitation, check_upward_premises,
                       check_weak_imitation, paste_segment, validate_overlay)
from .process import (FormativeProcess, element_status, ge_min, grand_event,
                      is_closed, local_trashes, salient_ordinals,
                      synthesize_process, validate_process)
from .pumping import (PumpingCycle, PumpingEvent, WitnessCertificate,
                      certify_witness, closed_cover, extend_certificate,
                      find_pumping_cycles, is_pumping_event, pump_rounds,
                      verify_certificate)
from .relations import (BlockBijection, imitates, literal_transfer_report,
                        simulates_upwards, transfer_assignment)
from .solver import (SAT_MODEL, SAT_WITNESSED, UNKNOWN, UNSAT_WITHIN_BUDGET,
                     DecideResult, SearchBudget, decide)
from .venn import (Assignment, ColoredBoard, ImMap, Partition,
                   canonical_board, color_board, finer_than, induced_board,
                   transitivize, venn_partition)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
