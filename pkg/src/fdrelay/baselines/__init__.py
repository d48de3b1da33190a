"""
Reference schemes: the shared initialization point, the zero-forcing alternation and the ideal and half-duplex
channel and target transformations.
"""
from .schemes import SchemeKind, hd_target, make_ideal, scheme_inputs  # noqa: F401
from .init import init_beamformers  # noqa: F401
from .zero_forcing import zf_ao, zf_f_step, zf_u_step, zf_v_step, zf_w_step  # noqa: F401
