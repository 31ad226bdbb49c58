"""Conversions from parsed command-line values to toolkit objects."""
from dataclasses import replace

from elliptic_core import DEFAULT_OPTIONS, ModularParameter
from errors import InvalidParameter
from integrator import IntegratorConfig
from pvi_dynamics import NAMED_POINTS, REPRESENTATIONS, PainleveParams
from utils import parse_complex, parse_complex_list


def parse_params(spec):
    """
    Build a parameter point from its command-line spelling.

    Args:
        spec: "p2", "picard", "hitchin", "<representation>:v1,v2,v3,v4"
            with representation in classical/alphas/avec, or a dict
            {representation: [v1, v2, v3, v4]} from a config file

    Returns:
        PainleveParams
    """
    if spec is None:
        raise InvalidParameter("no parameter point given (use --params)")
    if isinstance(spec, dict):
        unknown = set(spec) - set(REPRESENTATIONS)
        if unknown:
            raise InvalidParameter(f"unknown parameter representations {sorted(unknown)}")
        return PainleveParams(**{name: parse_complex_list(values) for name, values in spec.items()})
    text = spec.strip()
    if text.lower() in NAMED_POINTS:
        return NAMED_POINTS[text.lower()]
    kind, separator, values = text.partition(":")
    if not separator or kind not in REPRESENTATIONS:
        raise InvalidParameter(f"Failed to parse parameters {spec!r}: expected e.g. 'alphas:0,0,0,0.5'")
    return PainleveParams(**{kind: parse_complex_list(values)})


def parse_tau(value):
    if value is None:
        raise InvalidParameter("this command needs --tau")
    return ModularParameter(parse_complex(value))


def _number(args, name, kind=float):
    """
    Read a numeric option that may come from a flag or a config file.

    Returns:
        the value converted with kind, or None when unset
    """
    value = getattr(args, name, None)
    if value is None:
        return None
    try:
        if kind is int and isinstance(value, float) and not value.is_integer():
            raise ValueError("expected an integer")
        return kind(value)
    except (TypeError, ValueError) as e:
        raise InvalidParameter(f"Failed to read option {name}={value!r}: {str(e)}") from e


def eval_options(args):
    """EvalOptions with --tol applied."""
    tol = _number(args, "tol")
    if tol is None:
        return DEFAULT_OPTIONS
    return replace(DEFAULT_OPTIONS, tolerance=tol)


INTEGRATOR_FIELDS = {
    "rtol": float,
    "atol": float,
    "max_step": float,
    "min_step": float,
    "pole_guard": float,
    "sample_step": float,
    "max_steps": int,
}


def integrator_config(args):
    """
    IntegratorConfig from the config-file fields, then --tol.

    --tol sets rtol and caps atol at the same value.
    """
    overrides = {}
    for name, kind in INTEGRATOR_FIELDS.items():
        value = _number(args, name, kind)
        if value is not None:
            overrides[name] = value
    config = replace(IntegratorConfig(), **overrides)
    tol = _number(args, "tol")
    if tol is None:
        return config
    return replace(config, rtol=tol, atol=min(config.atol, tol))


def run_settings(args):
    """(seed, jobs) for verify; 0 and 1 when unset."""
    seed = _number(args, "seed", int)
    jobs = _number(args, "jobs", int)
    if jobs is not None and jobs < 1:
        raise InvalidParameter(f"jobs must be at least 1, got {jobs}")
    return seed or 0, jobs or 1
