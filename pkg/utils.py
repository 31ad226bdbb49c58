import json
import logging
import math
import re
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from errors import InvalidParameter

logger = logging.getLogger(__name__)

_BARE_UNIT = re.compile(r"(^|[+\-(])([ij])")


def parse_complex(text):
    """
    Parse a complex number as typed on the command line.

    Accepts Python literals ("0.5+1.3j"), mathematical notation ("1.07i",
    "-i", "0.5+i") and rationals ("1/8").

    Args:
        text: The string to parse (numbers pass through unchanged)

    Returns:
        complex
    """
    if isinstance(text, (int, float, complex, Fraction)):
        return complex(text)
    cleaned = text.strip().replace(" ", "")
    try:
        if "/" in cleaned and not re.search(r"[ij]", cleaned):
            return complex(float(Fraction(cleaned)))
        cleaned = _BARE_UNIT.sub(r"\g<1>1\g<2>", cleaned).replace("i", "j")
        return complex(cleaned)
    except (ValueError, ZeroDivisionError) as e:
        raise InvalidParameter(f"Failed to parse complex number {text!r}: {str(e)}") from e


def parse_complex_list(text):
    """
    Parse a comma-separated list of complex numbers.

    Args:
        text: e.g. "1.1i, 1.2i" or an already-split list

    Returns:
        list of complex
    """
    items = text if isinstance(text, (list, tuple)) else [item for item in text.split(",") if item.strip()]
    return [parse_complex(item) for item in items]


def format_complex(value):
    """
    Format a complex number as "re+im i" with 16 significant digits.
    """
    value = complex(value)
    sign = "-" if math.copysign(1.0, value.imag) < 0 else "+"
    return f"{value.real:.16g}{sign}{abs(value.imag):.16g}i"


def complex_to_json(value):
    value = complex(value)
    return [value.real, value.imag]


def complex_from_json(pair):
    return complex(pair[0], pair[1])


def to_jsonable(obj):
    """
    Recursively convert complex numbers, numpy values and fractions into
    JSON-serializable objects. Complex numbers become [re, im] pairs.
    """
    if isinstance(obj, dict):
        return {str(key): to_jsonable(value) for key, value in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(item) for item in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return complex_to_json(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, (np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, Fraction):
        return str(obj)
    return obj


def dump_json(obj):
    """Deterministic JSON text: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(to_jsonable(obj), indent=2, sort_keys=True) + "\n"


def load_config_file(path):
    """
    Load run configuration from a JSON file.

    Args:
        path: Path to the JSON file

    Returns:
        dict of configuration values
    """
    config_file = Path(path)
    if not config_file.exists():
        raise InvalidParameter(f"Config file {config_file} does not exist")
    try:
        with open(config_file, "r") as f:
            config = json.load(f)
    except (json.JSONDecodeError, IOError) as e:
        raise InvalidParameter(f"Failed to load config file {config_file}: {str(e)}") from e
    if not isinstance(config, dict):
        raise InvalidParameter(f"Config file {config_file} must contain a JSON object")
    logger.debug("loaded %d settings from %s", len(config), config_file)
    return config


def merge_config(file_values, flag_values):
    """
    Merge configuration from a file with command-line flags.

    Flags left unset (None) do not override the file.

    Args:
        file_values: dict loaded by load_config_file (may be empty)
        flag_values: dict of parsed flags

    Returns:
        merged dict
    """
    merged = dict(file_values or {})
    for key, value in flag_values.items():
        if value is not None or key not in merged:
            merged[key] = value
    return merged


def write_output(text, path=None):
    """
    Write text to a file, or to stdout when no path is given.

    Args:
        text: The content to write
        path: Destination path or None
    """
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    output_file = Path(path)
    try:
        output_file.parent.mkdir(parents=True, exist_ok=True)
        output_file.write_text(text)
    except IOError as e:
        raise InvalidParameter(f"Failed to write output to {output_file}: {str(e)}") from e
