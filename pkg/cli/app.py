"""Command-line coordinator for the Painleve VI toolkit."""
import argparse
import logging

from errors import InputError, NumericError, PoleApproach, SingularityError
from utils import load_config_file, merge_config

from .classify_command import run_classify
from .eval_command import EVAL_FUNCTIONS, run_eval
from .solve_command import run_solve
from .suites import SUITE_NAMES
from .symmetry_command import run_landin, run_symmetry
from .verify_command import run_verify

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_NUMERIC = 2
EXIT_POLE = 3
EXIT_USAGE = 64


class UsageError(Exception):
    """Malformed command line; maps to exit code 64."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


class PainleveCLI:
    """Builds the argument parser and dispatches subcommands."""

    COMMANDS = {
        "eval": run_eval,
        "solve": run_solve,
        "verify": run_verify,
        "classify": run_classify,
        "landin": run_landin,
        "symmetry": run_symmetry,
    }

    def __init__(self):
        self.parser = self._build_parser()

    def _build_parser(self):
        common = _Parser(add_help=False)
        common.add_argument("--config", help="JSON file of option values; flags override it")
        common.add_argument("--tol", type=float, help="series tolerance (eval) or relative step tolerance (solve)")
        common.add_argument("--jobs", type=int, help="worker threads for verify")
        common.add_argument("--seed", type=int, help="seed of the random samples drawn by verify")
        common.add_argument("--verbose", action="store_true", default=None)
        common.add_argument("--quiet", action="store_true", default=None)
        common.add_argument("--format", choices=("json", "csv"))
        common.add_argument("--out", help="output file (stdout when omitted)")
        common.add_argument("--quick", action="store_true", default=None, help="smaller sample grids")

        parser = _Parser(prog="painleve", description="Painleve VI numerical toolkit")
        commands = parser.add_subparsers(dest="command", parser_class=_Parser)

        eval_parser = commands.add_parser("eval", parents=[common], help="evaluate a special function")
        eval_parser.add_argument("function", choices=sorted(EVAL_FUNCTIONS))
        eval_parser.add_argument("--z")
        eval_parser.add_argument("--tau")
        eval_parser.add_argument("--t")

        solve_parser = commands.add_parser("solve", parents=[common], help="integrate a trajectory")
        solve_parser.add_argument("--chart", choices=("elliptic", "classical", "algebraic"))
        solve_parser.add_argument("--params", help="p2, picard, hitchin or <classical|alphas|avec>:v1,v2,v3,v4")
        solve_parser.add_argument("--state", help="initial components, comma separated")
        solve_parser.add_argument("--path", help="polyline of base points, comma separated")

        verify_parser = commands.add_parser("verify", parents=[common], help="run a verification suite")
        verify_parser.add_argument("suite", choices=SUITE_NAMES)

        classify_parser = commands.add_parser("classify", parents=[common], help="solvability class of an a-vector")
        classify_parser.add_argument("avec", nargs=4)

        landin_parser = commands.add_parser("landin", parents=[common], help="Landin transform of a parameter point")
        landin_parser.add_argument("--params")
        landin_parser.add_argument("--direction", choices=("forward", "inverse"))

        symmetry_parser = commands.add_parser("symmetry", parents=[common], help="map an elliptic state")
        symmetry_parser.add_argument("--params")
        symmetry_parser.add_argument("--state", help="z,y")
        symmetry_parser.add_argument("--tau")
        symmetry_parser.add_argument("--gamma", help="a,b,c,d of an element of Gamma(2)")
        symmetry_parser.add_argument("--lattice", help="m,n lattice shift")
        symmetry_parser.add_argument("--half-period", type=int, choices=(0, 1, 2, 3), dest="half_period")
        symmetry_parser.add_argument("--invert", action="store_true", default=None)
        return parser

    def parse(self, argv=None):
        """
        Parse the command line and fold in the --config file.

        Args:
            argv: argument list (sys.argv[1:] when None)

        Returns:
            argparse.Namespace with file values filled in where flags were unset
        """
        args = self.parser.parse_args(argv)
        if args.command is None:
            raise UsageError("painleve: a command is required")
        file_values = {}
        if args.config:
            try:
                file_values = load_config_file(args.config)
            except InputError as e:
                raise UsageError(str(e)) from e
        return argparse.Namespace(**merge_config(file_values, vars(args)))

    def run(self, args):
        """
        Dispatch a parsed command and map failures onto exit codes.

        Returns:
            process exit code
        """
        handler = self.COMMANDS[args.command]
        try:
            return handler(args)
        except PoleApproach as e:
            logger.error("%s", e)
            return EXIT_POLE
        except InputError as e:
            logger.error("%s", e)
            return EXIT_FAILURE
        except (NumericError, SingularityError) as e:
            logger.error("%s", e)
            return EXIT_NUMERIC
