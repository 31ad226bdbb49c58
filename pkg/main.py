import logging
import sys

from cli import EXIT_USAGE, PainleveCLI, UsageError


def configure_logging(verbose=False, quiet=False):
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def main(argv=None):
    cli = PainleveCLI()
    try:
        args = cli.parse(argv)
    except UsageError as e:
        print(str(e), file=sys.stderr)
        return EXIT_USAGE

    configure_logging(args.verbose, args.quiet)
    return cli.run(args)

if __name__ == "__main__":
    sys.exit(main())
