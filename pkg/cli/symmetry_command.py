"""The landin and symmetry commands."""
import logging

from errors import InvalidParameter, PatternMismatch
from pvi_dynamics import EllipticState
from symmetry_transforms import ModularElement, gamma2_act, inversion, landin, shift_zero_section
from utils import dump_json, parse_complex_list, write_output

from .options import parse_params, parse_tau

logger = logging.getLogger(__name__)


def _integers(text, count, flag):
    values = parse_complex_list(text)
    if len(values) != count or any(v.imag != 0 or v.real != int(v.real) for v in values):
        raise InvalidParameter(f"{flag} needs {count} integers, got {text!r}")
    return [int(v.real) for v in values]


def run_landin(args):
    """Landin image of --params; the direction is inferred when not given."""
    params = parse_params(args.params)
    directions = [args.direction] if args.direction else ["forward", "inverse"]
    images = {}
    for direction in directions:
        try:
            images[direction] = landin(params, direction).to_dict()
        except PatternMismatch as e:
            if args.direction:
                raise
            logger.debug("landin %s not applicable: %s", direction, e)
    if not images:
        raise PatternMismatch(f"alphas {params.alphas} match neither Landin pattern")
    write_output(dump_json({"source": params.to_dict(), "images": images}), args.out)
    return 0


def run_symmetry(args):
    """
    Map an elliptic state (and its parameters) through the requested moves,
    applied in the order: half-period shift, Gamma(2) x Z^2 element, inversion.
    """
    if args.state is None:
        raise InvalidParameter("symmetry needs --state z,y")
    z, y = _pair(args.state)
    state = EllipticState(z, y, parse_tau(args.tau))
    params = parse_params(args.params) if args.params else None
    if args.half_period is not None:
        if params is None:
            raise InvalidParameter("--half-period relabels the parameters; give --params")
        state, params = shift_zero_section(args.half_period, state, params)
    if args.gamma or args.lattice:
        a, b, c, d = _integers(args.gamma, 4, "--gamma") if args.gamma else (1, 0, 0, 1)
        m, n = _integers(args.lattice, 2, "--lattice") if args.lattice else (0, 0)
        state = gamma2_act(ModularElement(a, b, c, d, m, n), state)
    if args.invert:
        state = inversion(state)
    result = {"state": {"z": state.z, "y": state.y, "tau": state.base}}
    if params is not None:
        result["params"] = params.to_dict()
    write_output(dump_json(result), args.out)
    return 0


def _pair(text):
    values = parse_complex_list(text)
    if len(values) != 2:
        raise InvalidParameter(f"expected two values z,y, got {text!r}")
    return values
