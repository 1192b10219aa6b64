"""Exact computations with simplicial vector spaces, their duals and pairings."""

__version__ = "0.1.0"

from .linalg import ContractError, Mat, Subspace  # noqa: E402
from .simplicial import SVS, Constant, Pair, Truncated, Zero, truncate, validate_identities  # noqa: E402
from .chains import ChainCx, ChainMap, betti, homology, normalized_complex  # noqa: E402
from .doldkan import DK, aw, bnr, ez  # noqa: E402
from .maps import MappingSpace, SimpMap, tensor_svs  # noqa: E402
from .duality import NDual, double_dual_check, is_hom_nondegenerate, n_dual, n_dual_pairing  # noqa: E402

__all__ = [
    "ContractError", "Mat", "Subspace", "SVS", "Constant", "Pair", "Truncated", "Zero", "truncate",
    "validate_identities", "ChainCx", "ChainMap", "betti", "homology", "normalized_complex", "DK", "aw", "bnr",
    "ez", "MappingSpace", "SimpMap", "tensor_svs", "NDual", "double_dual_check",
    "is_hom_nondegenerate", "n_dual", "n_dual_pairing",
]
