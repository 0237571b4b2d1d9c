from typing import *
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import argparse
import csv
import logging
import sys
import threading

from bisimulation_oracle import MAX_ORACLE_STATES, bisim_bruteforce, partitions_equal
from i_o.file_reader import FORMATS, SystemReader
from i_o.file_writer import dump_coalgebra, dumps, write_output
from instance_generator import FAMILIES, GenSpec, generate
from partition_refinement import HopcroftResult, refine, refine_hopcroft, refine_naive
from refinement_tree import WEIGHT_NAMES
from system_elements.coalgebra import Coalgebra
from system_elements.errors import *
from system_elements.partition import Partition
from weighted_tree import audit_tree

"""
Command line interface:

    minimize    FILE [--algo naive|hopcroft] [--weight card|pred|reach] [--audit] [--stats] [--out PATH]
    compare     FILE                  all algorithms and the brute-force oracle must agree
    audit-tree  FILE                  checks Hopcroft's inequality on a weighted tree document
    gen         FAMILY N [--seed S]   writes a generated system as coalg-json
    bench       [--families ...] [--sizes ...] [--seeds K] [--jobs J] [--out PATH]

Exit codes: 0 success, 1 mismatch or failed audit, 2 unreadable input or contradictory options.
"""

log = logging.getLogger(__name__)

SUBCOMMANDS = ('minimize', 'compare', 'audit-tree', 'gen', 'bench')
ALGOS = ('naive', 'hopcroft')
BENCH_COLUMNS = ['family', 'n', 'seed', 'algo', 'weight', 'iterations', 'splits', 'dirty_markings',
                 'markdirty_touches', 'signatures_computed', 'wall_ms']
BENCH_RUNS = [('naive', ''), ('hopcroft', 'card'), ('hopcroft', 'pred'), ('hopcroft', 'reach')]

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVALID = 2


@dataclass
class CliConfig:
    subcommand: str
    inputs: List[str] = field(default_factory=list)
    algo: str = 'hopcroft'
    weight: Optional[str] = None
    audit: bool = False
    stats: bool = False
    out: Optional[str] = None
    format: Optional[str] = None
    verbosity: int = 0
    # gen
    family: str = 'dfa'
    n_states: int = 10
    alphabet_size: int = 2
    out_degree: int = 2
    support: int = 3
    denominator: int = 12
    seed: int = 0
    # bench
    families: List[str] = field(default_factory=lambda: ['dfa', 'nfa', 'lts', 'mc', 'mdp'])
    sizes: List[int] = field(default_factory=lambda: [10, 100, 1000])
    seeds: int = 3
    jobs: int = 1

    def validate(self) -> None:
        if self.subcommand not in SUBCOMMANDS:
            raise ConfigurationError('unknown command ' + repr(self.subcommand))
        if self.algo not in ALGOS:
            raise ConfigurationError('unknown algorithm ' + repr(self.algo))
        if self.weight is not None and self.weight not in WEIGHT_NAMES:
            raise ConfigurationError('unknown weight ' + repr(self.weight))
        if self.algo == 'naive' and self.weight is not None:
            raise ConfigurationError('--weight only applies to --algo hopcroft')
        if self.algo == 'naive' and self.audit:
            raise ConfigurationError('--audit needs the refinement tree of --algo hopcroft')
        if self.format is not None and self.format not in FORMATS:
            raise ConfigurationError('unknown format ' + repr(self.format))
        if self.subcommand in ('minimize', 'compare', 'audit-tree') and len(self.inputs) != 1:
            raise ConfigurationError(self.subcommand + ' needs exactly one input file')
        if self.subcommand == 'gen':
            self.gen_spec(self.family, self.n_states, self.seed).validate()
        if self.subcommand == 'bench':
            if self.seeds < 1 or self.jobs < 1 or not self.sizes or min(self.sizes) < 1:
                raise ConfigurationError('bench needs positive --sizes, --seeds and --jobs')
            for family in self.families:
                self.gen_spec(family, 1, 0).validate()

    @property
    def run_weight(self) -> str:
        return self.weight or 'card'

    def gen_spec(self, family: str, n_states: int, seed: int) -> GenSpec:
        return GenSpec(family, n_states, alphabet_size=self.alphabet_size, out_degree=self.out_degree,
                       support=self.support, denominator=self.denominator, seed=seed)


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='minimizer', description='Minimization of systems modulo bisimilarity.')
    parser.add_argument('-v', '--verbose', dest='verbosity', action='count', default=0,
                        help='-v for run summaries, -vv for every split')
    commands = parser.add_subparsers(dest='subcommand', required=True)

    def with_input(p: argparse.ArgumentParser) -> None:
        p.add_argument('inputs', nargs=1, metavar='FILE')
        p.add_argument('--format', choices=FORMATS, help='default: inferred from the file suffix')

    def with_generator(p: argparse.ArgumentParser) -> None:
        p.add_argument('--alphabet-size', dest='alphabet_size', type=int, default=2)
        p.add_argument('--out-degree', dest='out_degree', type=int, default=2)
        p.add_argument('--support', type=int, default=3)
        p.add_argument('--denominator', type=int, default=12)

    minimize = commands.add_parser('minimize', help='compute the coarsest bisimulation')
    with_input(minimize)
    minimize.add_argument('--algo', choices=ALGOS, default='hopcroft')
    minimize.add_argument('--weight', choices=WEIGHT_NAMES)
    minimize.add_argument('--audit', action='store_true', help='emit and audit the refinement tree')
    minimize.add_argument('--stats', action='store_true', help='emit the run counters')
    minimize.add_argument('--out')

    compare = commands.add_parser('compare', help='check that all algorithms agree')
    with_input(compare)
    compare.add_argument('--out')

    audit = commands.add_parser('audit-tree', help='check a weighted tree document')
    audit.add_argument('inputs', nargs=1, metavar='FILE')
    audit.add_argument('--out')

    gen = commands.add_parser('gen', help='generate a system')
    gen.add_argument('family', choices=FAMILIES)
    gen.add_argument('n_states', type=int)
    gen.add_argument('--seed', type=int, default=0)
    with_generator(gen)
    gen.add_argument('--out')

    bench = commands.add_parser('bench', help='run seeded sweeps and write a CSV of run counters')
    bench.add_argument('--families', nargs='+', choices=FAMILIES, default=['dfa', 'nfa', 'lts', 'mc', 'mdp'])
    bench.add_argument('--sizes', nargs='+', type=int, default=[10, 100, 1000])
    bench.add_argument('--seeds', type=int, default=3)
    bench.add_argument('--jobs', type=int, default=1)
    with_generator(bench)
    bench.add_argument('--out')
    return parser


def parse_config(argv: Sequence[str]) -> CliConfig:
    args = vars(build_arg_parser().parse_args(list(argv)))
    return CliConfig(**{k: v for k, v in args.items() if v is not None or k == 'weight'})


def configure_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity == 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format='%(levelname)s %(name)s: %(message)s')


def minimize_coalgebra(coalg: Coalgebra, config: CliConfig) -> Tuple[Dict[str, Any], bool]:
    """
    The minimize output document and whether the requested audit passed.
    """
    result = refine(coalg, config.algo, config.run_weight)
    doc: Dict[str, Any] = result.partition.to_json()
    if config.stats:
        doc['stats'] = result.stats.to_json()
    passed = True
    if config.audit:
        assert isinstance(result, HopcroftResult)
        tree, w, heavy = result.tree.to_weighted_tree()
        report = audit_tree(tree, w, heavy)
        doc['tree'] = result.tree.to_json()
        doc['audit'] = report.to_json()
        passed = report.passed
        if not passed:
            log.warning('refinement tree audit failed: %s', report)
    return doc, passed


def minimize_document(doc: Any, algo: str = 'hopcroft', weight: Optional[str] = None) -> Dict[str, Any]:
    """
    Minimizes a coalg-json document; used by the HTTP handler.
    """
    config = CliConfig('minimize', inputs=['-'], algo=algo, weight=weight)
    config.validate()
    result, _ = minimize_coalgebra(SystemReader().parse_coalgebra_json(doc), config)
    return result


def compare_algorithms(coalg: Coalgebra) -> Dict[str, Partition]:
    """
    The partitions computed by every algorithm, and by the oracle when the system is small enough for it.
    """
    partitions = {'naive': refine_naive(coalg).partition}
    for weight in WEIGHT_NAMES:
        partitions['hopcroft-' + weight] = refine_hopcroft(coalg, weight).partition
    if coalg.n_states <= MAX_ORACLE_STATES:
        partitions['oracle'] = bisim_bruteforce(coalg)
    else:
        log.warning('%d states: skipping the brute-force oracle', coalg.n_states)
    return partitions


def kernels_agree(partitions: Mapping[str, Partition]) -> bool:
    reference = partitions['naive']
    return all(partitions_equal(reference, p) for p in partitions.values())


def run_minimize(config: CliConfig) -> int:
    coalg = SystemReader().read_file(config.inputs[0], config.format)
    doc, passed = minimize_coalgebra(coalg, config)
    write_output(dumps(doc), config.out)
    return EXIT_OK if passed else EXIT_FAILED


def run_compare(config: CliConfig) -> int:
    coalg = SystemReader().read_file(config.inputs[0], config.format)
    partitions = compare_algorithms(coalg)
    agree = kernels_agree(partitions)
    write_output(dumps({'agree': agree,
                        'blocks': {name: len(p) for name, p in partitions.items()}}), config.out)
    if not agree:
        log.error('algorithms disagree on %s', config.inputs[0])
    return EXIT_OK if agree else EXIT_FAILED


def run_audit_tree(config: CliConfig) -> int:
    tree, w, heavy = SystemReader().read_tree(config.inputs[0])
    report = audit_tree(tree, w, heavy)
    print(report, file=sys.stderr)
    write_output(dumps(report.to_json()), config.out)
    return EXIT_OK if report.passed else EXIT_FAILED


def run_gen(config: CliConfig) -> int:
    coalg = generate(config.gen_spec(config.family, config.n_states, config.seed))
    write_output(dump_coalgebra(coalg), config.out)
    return EXIT_OK


def bench_rows(config: CliConfig, family: str, n: int, seed: int) -> List[List[Any]]:
    coalg = generate(config.gen_spec(family, n, seed))
    rows = []
    for algo, weight in BENCH_RUNS:
        stats = refine(coalg, algo, weight or 'card').stats
        rows.append([family, n, seed, algo, weight, stats.iterations, stats.splits, stats.dirty_markings,
                     stats.markdirty_touches, stats.signatures_computed, format(stats.wall_time * 1000, '.3f')])
    return rows


def run_bench(config: CliConfig) -> int:
    cells = [(family, n, seed) for family in config.families for n in config.sizes for seed in range(config.seeds)]
    lock = threading.Lock()
    stream = open(config.out, 'w', newline='', encoding='utf-8') if config.out else sys.stdout
    try:
        writer = csv.writer(stream, lineterminator='\n')
        writer.writerow(BENCH_COLUMNS)

        def run_cell(cell: Tuple[str, int, int]) -> None:
            rows = bench_rows(config, *cell)
            with lock:
                writer.writerows(rows)

        with ThreadPoolExecutor(max_workers=config.jobs) as pool:
            # list() re-raises the first failure of a cell
            list(pool.map(run_cell, cells))
    finally:
        if stream is not sys.stdout:
            stream.close()
    log.info('bench: %d cells written', len(cells))
    return EXIT_OK


COMMANDS: Dict[str, Callable[[CliConfig], int]] = {
    'minimize': run_minimize,
    'compare': run_compare,
    'audit-tree': run_audit_tree,
    'gen': run_gen,
    'bench': run_bench,
}


def run_cli(config: CliConfig) -> int:
    try:
        config.validate()
        return COMMANDS[config.subcommand](config)
    except (MalformedInputError, ConfigurationError, SizeLimitError) as e:
        log.debug('rejected input', exc_info=True)
        print('error: ' + str(e), file=sys.stderr)
        return EXIT_INVALID
    except OSError as e:
        print('error: ' + str(e), file=sys.stderr)
        return EXIT_INVALID
    except InternalError as e:
        log.error('internal error: %s', e)
        print('error: ' + str(e), file=sys.stderr)
        return EXIT_FAILED


def main(argv: Optional[Sequence[str]] = None) -> int:
    config = parse_config(sys.argv[1:] if argv is None else argv)
    configure_logging(config.verbosity)
    return run_cli(config)


if __name__ == '__main__':
    sys.exit(main())
