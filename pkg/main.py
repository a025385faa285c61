"""
Main entry point for the quantum MacMahon verification suite.
Runs the theorem, lemma and classical-limit checks and writes a report.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from pydantic import ValidationError

from src.harness import emit_report, get_registry, run_suite
from src.protocol import DEFAULT_SEED, ArithMode, Flavor, OutputFormat, SuiteConfig, Verb


def _add_run_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--rank', type=int, default=2, help='Matrix rank r (default: 2)')
    parser.add_argument('--degree', type=int, default=4, help='Truncation degree N (default: 4)')
    parser.add_argument('--flavor', choices=[f.value for f in Flavor], default=Flavor.RIGHT_QUANTUM.value,
                        help='Relations satisfied by A (default: right-quantum)')
    parser.add_argument('--arith', choices=[a.value for a in ArithMode], default=ArithMode.PROBABILISTIC.value,
                        help='Membership arithmetic (default: probabilistic)')
    parser.add_argument('--evals', type=int, default=3, help='Random q values in probabilistic mode, at most 64 (default: 3)')
    parser.add_argument('--seed', type=int, default=DEFAULT_SEED, help=f'Seed for q values (default: {DEFAULT_SEED})')
    parser.add_argument('--format', dest='output_format', choices=[f.value for f in OutputFormat],
                        default=OutputFormat.JSON.value, help='Report format (default: json)')
    parser.add_argument('--out', type=Path, help='Write the report here instead of stdout')
    parser.add_argument('--timings', action='store_true', help='Record elapsed times in the report')
    parser.add_argument('--verbose', '-v', action='store_true', help='Debug logging on stderr')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Quantum MacMahon Master Theorem verification suite",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python main.py verify --rank 2 --degree 6 --arith exact
  python main.py verify --rank 3 --degree 4 --evals 3 --seed 42
  python main.py lemmas --rank 3 --lemma annihilation --lemma b_right_quantum
  python main.py classical --rank 3 --degree 5
  python main.py all --format text
  python main.py list
        """
    )

    subparsers = parser.add_subparsers(dest='command', help='Available commands')

    verify_parser = subparsers.add_parser('verify', help='Check Bos(A) = 1/Ferm(A) degree by degree')
    _add_run_arguments(verify_parser)

    lemmas_parser = subparsers.add_parser('lemmas', help='Check the supporting lemmas')
    _add_run_arguments(lemmas_parser)
    lemmas_parser.add_argument('--lemma', action='append', default=[], dest='lemmas',
                               help='Run only this lemma check (repeatable)')

    classical_parser = subparsers.add_parser('classical', help='Check the commutative q = 1 identity')
    _add_run_arguments(classical_parser)

    all_parser = subparsers.add_parser('all', help='Run every check')
    _add_run_arguments(all_parser)
    all_parser.add_argument('--lemma', action='append', default=[], dest='lemmas',
                            help='Narrow the lemma checks (repeatable)')

    subparsers.add_parser('list', help='List the registered checks')
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main CLI entry point; returns 0 iff every selected check passes."""
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command == 'list':
        print(get_registry().help_text())
        return 0
    if args.command is None:
        parser.print_help()
        return 2

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
        stream=sys.stderr,
    )

    try:
        config = SuiteConfig(
            verb=Verb(args.command),
            rank=args.rank,
            degree=args.degree,
            flavor=args.flavor,
            arith=args.arith,
            evals=args.evals,
            seed=args.seed,
            lemmas=getattr(args, 'lemmas', []),
            output_format=args.output_format,
            timings=args.timings,
        )
    except ValidationError as e:
        print(f"❌ Invalid configuration:\n{e}", file=sys.stderr)
        return 2

    print(f"🔍 Running '{config.verb.value}' for r={config.rank}, N={config.degree} "
          f"({config.flavor.value}, {config.arith.value})", file=sys.stderr)
    report = run_suite(config)
    document = emit_report(report, config.output_format)

    if args.out:
        args.out.write_text(document, encoding="utf-8")
        print(f"💾 Report written to {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(document)

    failed = [record.name for record in report.checks if not record.verdict]
    if failed:
        print(f"❌ Failed checks: {', '.join(failed)}", file=sys.stderr)
        return 1
    print(f"✅ All {len(report.checks)} checks passed", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
