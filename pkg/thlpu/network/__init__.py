
from .milp import Model, Point, BINARY, CONTINUOUS
from .form_agg import AggVars, build_thlpu, add_inherited_thlp_cuts
from .form_disagg import DisaggVars, build_dthlpu, add_lemma2, map_disagg_to_agg, upgrade_class_consistent
from .process import decode_agg, decode_disagg, encode_agg, encode_disagg, build_model, decode, encode
