"""Exact and SDP-certified norms for Fourier, Schur and general multipliers on finite groups."""
from .groups import FiniteGroup, GroupError, construct_group, subgroups
from .symbols import BiSymbol, GroupSymbol, SymbolError
from .superop import SuperOperator, identity_map, random_cp_map, random_superoperator, transpose_map
from .schur import fourier_multiplier, herz_schur_lift, schur_superop, symbol_extraction
from .norms import (NormError, bg_norm_abelian, bg_norm_product, bg_norm_sdp, cb_norm, dec_norm,
                    dec_norm_selfadjoint, jordan_bg_norm)
from .projections import project_fourier, project_herz_schur
from .balls import enumerate_ball

__version__ = "0.1.0"
