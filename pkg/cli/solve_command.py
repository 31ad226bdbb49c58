"""The solve command: integrate one trajectory and write it out."""
import logging

from errors import InvalidParameter, InvalidPath, PoleApproach, PoleHit
from integrator import PathSpec
from pvi_dynamics import COMPONENTS, Trajectory, integrate, state_from_vector
from utils import dump_json, parse_complex_list, write_output

from .options import integrator_config, parse_params

logger = logging.getLogger(__name__)


def _serialize(trajectory, fmt):
    if fmt == "csv":
        return trajectory.to_csv()
    return dump_json(trajectory.to_json())


def run_solve(args):
    """
    Integrate from --state along --path and write the samples.

    Returns:
        0 on success, 3 when a pole guard trips (samples up to the last
        valid one are still written)
    """
    chart = args.chart or "elliptic"
    params = parse_params(args.params)
    if args.path is None or args.state is None:
        raise InvalidParameter("solve needs --state and --path")
    path = PathSpec(tuple(parse_complex_list(args.path)))
    values = parse_complex_list(args.state)
    if len(values) != len(COMPONENTS[chart]):
        raise InvalidParameter(
            f"the {chart} chart needs {len(COMPONENTS[chart])} state components {COMPONENTS[chart]}, got {len(values)}"
        )
    try:
        state = state_from_vector(chart, path.start, values)
    except PoleHit as e:
        raise InvalidPath(f"Failed to place the initial state: {str(e)}") from e
    fmt = args.format or "json"

    try:
        trajectory = integrate(chart, state, path, params, integrator_config(args))
    except PoleApproach as e:
        partial = e.partial
        logger.error("solve aborted: %s", e)
        if partial is not None and len(partial.bases):
            flushed = Trajectory(chart, partial.bases, partial.states, partial.errors, params)
            write_output(_serialize(flushed, fmt), args.out)
        return 3
    logger.info("solve: %d samples in the %s chart", len(trajectory), chart)
    write_output(_serialize(trajectory, fmt), args.out)
    return 0
