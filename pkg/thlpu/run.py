# pylint: disable=too-many-branches, too-many-statements, import-outside-toplevel

"""Tree-of-hubs location with upgrading: build, strengthen, solve and verify"""

import sys
import argparse
import logging

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_LIMIT = 2


def cli():
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.ArgumentDefaultsHelpFormatter)

    # Subparser definition
    subparsers = parser.add_subparsers(help='Different parsers for main actions', dest='command')
    solve_parser = subparsers.add_parser("solve", formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    export_parser = subparsers.add_parser("export", formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    oracle_parser = subparsers.add_parser("oracle", formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    cuts_parser = subparsers.add_parser(
        "cuts", formatter_class=argparse.ArgumentDefaultsHelpFormatter,
        description="Root cut loop alone: valid inequalities are always separated, see the solve and export --vi")
    bench_parser = subparsers.add_parser("bench", formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    compare_parser = subparsers.add_parser(
        "compare", formatter_class=argparse.ArgumentDefaultsHelpFormatter,
        description="Both formulations, each without and with valid inequalities")

    # Instance selection, shared by the single-instance commands
    for sub in (solve_parser, export_parser, oracle_parser, cuts_parser):
        sub.add_argument('--instance', help='normalized instance JSON; without it the 10-node worked example')
        sub.add_argument('--n', type=int, help='truncate the worked example to the first n nodes', default=10)
        sub.add_argument('--p', type=int, help='number of hubs for the worked example', default=5)
        sub.add_argument('--q', type=int, help='number of upgraded hubs for the worked example', default=2)
        sub.add_argument('--factors', type=float, nargs=3, help='discount factors alpha rho gamma',
                         default=[0.8, 0.4, 0.2])
        sub.add_argument('--precise', help='worked example with 6-decimal coordinates', action='store_true')
        sub.add_argument('--debug', help='debug messages', action='store_true')

    for sub in (solve_parser, export_parser, cuts_parser):
        sub.add_argument('--formulation', help='agg or disagg', choices=['agg', 'disagg'], default='agg')
        sub.add_argument('--static_rows', help='add inherited / lemma rows to the formulation', action='store_true')
    for sub in (solve_parser, export_parser):
        sub.add_argument('--vi', help='root cut loop on the model first', action=argparse.BooleanOptionalAction,
                         default=False)
    for sub in (solve_parser, export_parser, cuts_parser, compare_parser):
        sub.add_argument('--backend', help='MILP backend', choices=['highs', 'cbc'], default='highs')
    for sub in (solve_parser, compare_parser):
        sub.add_argument('--time-limit', dest='time_limit', type=float, help='seconds per MILP solve', default=300.)

    # Solve
    solve_parser.add_argument('--node-limit', dest='node_limit', type=int, help='branch-and-bound nodes')
    solve_parser.add_argument('--out', help='solution JSON file')

    # Export
    export_parser.add_argument('--format', help='lp or mps', choices=['lp', 'mps'], default='lp')
    export_parser.add_argument('--relax', help='write the LP relaxation', action='store_true')
    export_parser.add_argument('--out', help='output file', required=True)

    # Oracle
    oracle_parser.add_argument('--workers', type=int, help='processes over hub subsets', default=1)
    oracle_parser.add_argument('--max-evaluations', dest='max_evaluations', type=float,
                               help='refuse larger enumerations', default=5e7)
    oracle_parser.add_argument('--out', help='solution JSON file')

    # Cuts
    cuts_parser.add_argument('--max_lp_rounds', type=int, help='LP solves in the cut loop', default=10)
    cuts_parser.add_argument('--max_cuts_total', type=int, help='cut budget', default=100)
    cuts_parser.add_argument('--lb_stall_threshold', type=float, help='relative bound improvement to go on',
                             default=0.01)
    cuts_parser.add_argument('--out', help='cut pool JSON file')

    # Bench
    bench_parser.add_argument('spec', help='experiment JSON file')
    bench_parser.add_argument('--workers', type=int, help='grid runs in parallel (overrides the spec)')
    bench_parser.add_argument('--out', help='output directory (overrides the spec)')
    bench_parser.add_argument('--backend', help='MILP backend (overrides the spec)', choices=['highs', 'cbc'])
    bench_parser.add_argument('--time-limit', dest='time_limit', type=float,
                              help='seconds per MILP solve (overrides the spec)')
    bench_parser.add_argument('--vi', action=argparse.BooleanOptionalAction,
                              help='only the variants with or without the cut loop (overrides the spec vi list)')
    bench_parser.add_argument('--debug', help='debug messages', action='store_true')

    # Compare
    compare_parser.add_argument('instances', nargs='*', help='normalized instance JSON files')
    compare_parser.add_argument('--example', help='worked example with the listed p values', type=int, nargs='*',
                                default=[])
    compare_parser.add_argument('--out', help='directory for failure artifacts')
    compare_parser.add_argument('--debug', help='debug messages', action='store_true')

    args = parser.parse_args()
    return args


def load_instance(args):
    if args.instance:
        from .prep import read_instance
        return read_instance(args.instance)
    from .prep import example1
    return example1(p=args.p, q=args.q, factors=tuple(args.factors), n=args.n, precise=args.precise)


def print_solution(solution, objective):
    from tabulate import tabulate
    dic_labels = solution.labels()
    spokes = [[hub, ', '.join(str(i) for i, k in dic_labels['alloc'].items() if k == hub and int(i) != hub)]
              for hub in dic_labels['hubs']]
    print('\nObjective: {:.6f}'.format(objective))
    print('Small tree: {}'.format(' '.join('{}-{}'.format(k, m) for k, m in dic_labels['tree_edges'])))
    print('Upgraded hubs: {}\n'.format(dic_labels['upgrades']))
    print(tabulate(spokes, headers=('hub', 'spokes')))


def main():
    args = cli()
    logging.basicConfig(level=logging.DEBUG if getattr(args, 'debug', False) else logging.INFO)
    logger = logging.getLogger('thlpu')

    from .errors import ThlpuError
    try:
        code = dispatch(args)
    except ThlpuError as exc:
        logger.error(str(exc))
        code = EXIT_ERROR
    sys.exit(code)


def dispatch(args):
    if args.command == 'solve':
        from .prep import derive
        from .network import build_model, decode
        from .cuts import CutLoopParams, cut_loop
        from .solve import solve, write_solution, evaluate_solution
        instance = load_instance(args)
        derived = derive(instance)
        model, variables = build_model(instance, derived, args.formulation, static_rows=args.static_rows)
        stats = {}
        if args.vi:
            model, stats, _ = cut_loop(model, instance, derived, args.formulation, CutLoopParams(),
                                       backend=args.backend)
            variables = variables.with_model(model)
        result, point = solve(model, args.backend, time_limit_s=args.time_limit, node_limit=args.node_limit)
        result.cut_stats = stats
        print(result)
        if point is None:
            return EXIT_LIMIT if result.limit_hit else EXIT_ERROR
        solution = decode(point, variables, instance)
        print_solution(solution, evaluate_solution(instance, solution))
        if args.out:
            write_solution(solution, args.out, objective=result.objective, result=result)
        return EXIT_LIMIT if result.limit_hit else EXIT_OK

    if args.command == 'export':
        from .prep import derive
        from .network import build_model
        from .cuts import CutLoopParams, cut_loop
        instance = load_instance(args)
        derived = derive(instance)
        model, _ = build_model(instance, derived, args.formulation, static_rows=args.static_rows)
        if args.vi:
            model, _, _ = cut_loop(model, instance, derived, args.formulation, CutLoopParams(), backend=args.backend)
        if args.relax:
            model = model.relax()
        if args.format == 'lp':
            model.write_lp(args.out)
        else:
            model.write_mps(args.out)
        return EXIT_OK

    if args.command == 'oracle':
        from .solve import oracle_optimum, write_solution
        instance = load_instance(args)
        solution, objective = oracle_optimum(instance, max_evaluations=args.max_evaluations, workers=args.workers)
        print_solution(solution, objective)
        if args.out:
            write_solution(solution, args.out, objective=objective)
        return EXIT_OK

    if args.command == 'cuts':
        from tabulate import tabulate
        from .prep import derive
        from .network import build_model
        from .cuts import CutLoopParams, cut_loop, write_cut_pool
        instance = load_instance(args)
        derived = derive(instance)
        model, _ = build_model(instance, derived, args.formulation, static_rows=args.static_rows)
        params = CutLoopParams(args.max_lp_rounds, args.max_cuts_total, args.lb_stall_threshold)
        model, stats, cuts = cut_loop(model, instance, derived, args.formulation, params, backend=args.backend)
        trace = [[idx + 1, bound, stats['cuts_per_round'][idx] if idx < len(stats['cuts_per_round']) else 0]
                 for idx, bound in enumerate(stats['bounds'])]
        print(tabulate(trace, headers=('round', 'LP bound', 'cuts added'), floatfmt='.6f'))
        print('Stopped on: {}, {} cuts in total'.format(stats['stop'], stats['cuts_added']))
        if args.out:
            write_cut_pool(cuts, model, args.out)
        return EXIT_OK

    if args.command == 'bench':
        from .eval import ExperimentSpec, run_grid
        spec = ExperimentSpec.from_json(args.spec)
        if args.workers is not None:
            spec.workers = args.workers
        if args.out is not None:
            spec.out = args.out
        if args.time_limit is not None:
            spec.time_limit = args.time_limit
        if args.backend is not None:
            spec.backend = args.backend
        if args.vi is not None:
            spec.vi = [args.vi]
        rows, _ = run_grid(spec)
        return EXIT_OK if all(row.dic_row['status'] != 'error' for row in rows) else EXIT_ERROR

    if args.command == 'compare':
        from .prep import read_instance, example1
        from .eval import compare_formulations, print_comparison
        instances = [read_instance(path) for path in args.instances]
        instances += [example1(p=p, q=1) for p in args.example]
        summaries = compare_formulations(instances, backend=args.backend, time_limit_s=args.time_limit, out=args.out)
        print_comparison(summaries)
        return EXIT_OK if all(dic['optima_agree'] for dic in summaries) else EXIT_ERROR

    raise ValueError("Main subparser not recognized or not provided")


if __name__ == '__main__':
    main()
