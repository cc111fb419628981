import argparse
import sys

from wldpoles.cli import RunConfig, run, set_log_level, FORMATS

if __name__ == '__main__':
    ### Read in arguments
    parser = argparse.ArgumentParser(description='Wilson loop diagrams: enumeration, pole analysis and '
                                                 'cancellation certificates')
    parser.add_argument('-v', dest='verbose', action='store_true', help='debug logging')
    parser.add_argument('-q', dest='quiet', action='store_true', help='warnings only')
    subparsers = parser.add_subparsers(dest='command', required=True)

    p_enum = subparsers.add_parser('enumerate', help='list admissible diagrams W(k, n)')
    p_analyze = subparsers.add_parser('analyze', help='cell, flats, R polynomials and boundaries of one '
                                                      'diagram or set system')
    p_cancel = subparsers.add_parser('cancel', help='cancellation partition of the codimension one poles of '
                                                    'W(k, n)')

    for p in (p_enum, p_cancel):
        p.add_argument('-k', dest='k', action='store', type=int, required=True, help='number of propagators')
        p.add_argument('-n', dest='n', action='store', type=int, required=True, help='number of edges')
    p_enum.add_argument('--force', dest='force', action='store_true',
                        help='allow n above the enumeration cap. Default=False')
    p_analyze.add_argument('input', help='JSON file with {"n", "props"} (diagram) or {"n", "rows"} '
                                         '(set system)')
    p_analyze.add_argument('--sets', dest='sets', action='store_true',
                           help='read the input as a set system. Default: detected from the keys')
    p_cancel.add_argument('--trials', dest='trials', action='store', type=int, default=10,
                          help='random trials per check. Default=10')
    p_cancel.add_argument('--jobs', dest='jobs', action='store', type=int, default=1,
                          help='worker processes for group verification. Default=1')
    for p in (p_analyze, p_cancel):
        p.add_argument('--seed', dest='seed', action='store', type=int, default=None,
                       help='random seed. Default: $WLDPOLES_SEED or 0')
    for p in (p_enum, p_analyze, p_cancel):
        p.add_argument('--out', dest='out', action='store', default=None, help='output file. Default: stdout')
        p.add_argument('--format', dest='fmt', action='store', choices=FORMATS, default='json',
                       help='output format. Default=json')
    args = parser.parse_args()

    set_log_level(verbose=args.verbose, quiet=args.quiet)
    config = RunConfig(command=args.command,
                       k=getattr(args, 'k', None),
                       n=getattr(args, 'n', None),
                       seed=getattr(args, 'seed', None),
                       trials=getattr(args, 'trials', 10),
                       jobs=getattr(args, 'jobs', 1),
                       out=args.out,
                       fmt=args.fmt,
                       force=getattr(args, 'force', False),
                       input=getattr(args, 'input', None),
                       sets=getattr(args, 'sets', False))
    sys.exit(run(config))
