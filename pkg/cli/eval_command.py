"""The eval command: print one special-function value."""
import logging

from elliptic_core import (
    constant_c,
    eisenstein_g2,
    half_period_values,
    theta,
    theta_v,
    wp,
    wp_z,
)
from errors import InvalidParameter
from uniformization import invert_lambda, modular_lambda
from utils import format_complex, parse_complex, write_output

from .options import eval_options, parse_tau

logger = logging.getLogger(__name__)


def _z(args):
    if args.z is None:
        raise InvalidParameter(f"eval {args.function} needs --z")
    return parse_complex(args.z)


def _t(args):
    if args.t is None:
        raise InvalidParameter("eval tau needs --t")
    return parse_complex(args.t)


EVAL_FUNCTIONS = {
    "wp": lambda args, opts: [wp(_z(args), parse_tau(args.tau), opts)],
    "wp_z": lambda args, opts: [wp_z(_z(args), parse_tau(args.tau), opts)],
    "theta": lambda args, opts: [theta(_z(args), parse_tau(args.tau), opts)],
    "v": lambda args, opts: [theta_v(_z(args), parse_tau(args.tau), opts)],
    "e_i": lambda args, opts: list(half_period_values(parse_tau(args.tau), opts)),
    "G2": lambda args, opts: [eisenstein_g2(parse_tau(args.tau), opts)],
    "lambda": lambda args, opts: [modular_lambda(parse_tau(args.tau), opts)],
    "tau": lambda args, opts: [invert_lambda(_t(args), opts=opts).tau],
    "C": lambda args, opts: [constant_c(parse_tau(args.tau), opts)],
}


def run_eval(args):
    """
    Evaluate the requested function and print one value per line.

    Returns:
        exit code 0; errors propagate to the coordinator
    """
    opts = eval_options(args)
    values = EVAL_FUNCTIONS[args.function](args, opts)
    logger.debug("eval %s -> %s", args.function, values)
    write_output("".join(format_complex(v) + "\n" for v in values), args.out)
    return 0
