"""The classify command: solvability class of an a-vector."""
from symmetry_transforms import classify
from utils import dump_json, parse_complex, write_output


def run_classify(args):
    """Print the class tag, base point and witness chain as JSON."""
    a = [parse_complex(x) for x in args.avec]
    a = [x.real if x.imag == 0 else x for x in a]
    result = classify(a)
    write_output(dump_json(result.to_dict()), args.out)
    return 0
