"""Local-unitary equivalence of bipartite and tripartite quantum states via trace identities."""

from .bloch import (DensityMatrix, HypermatrixRep, StateValidationError, apply_local_unitaries, extract_rep,
                    ggm_basis, induced_orthogonal, maximally_mixed, partial_trace, pure_state, random_density,
                    random_lu_pair, random_su, reconstruct, tensor_product, transport_orthogonals)
from .equivalence import (CheckOptions, CheckReport, Criterion, DimensionMismatch, Overall, Verdict, check,
                          check_bipartite, check_tripartite, invertibility_condition, sign_condition)
from .hyperdet import det222, det333, hyperdet
from .hypermatrix import fold, kron, multilinear_apply, outer, unfold, vec
from .quiver import Quiver, QuiverRep, enumerate_cycles, quiver_double, quiver_isometric, specht_equivalent
from .specht import (block_family_isometric, enumerate_canonical_words, gram_alphabet, necklace_count,
                     trace_identities_equal, word_bound_blocks)

__version__ = "0.1.0"
