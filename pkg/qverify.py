# Author: Ozy
"""
qverify - mock theta and Appell function identity verifier
Main entry point: list, show, verify, verify-all, report and catalog export.
"""

import argparse
import logging
import sys
from typing import List, Optional, Sequence

from rich.console import Console
from rich.panel import Panel
from rich.table import Table
from rich.text import Text

from catalog import (
    OUT_OF_SCOPE,
    IdentityRecord,
    build_catalog,
    filter_records,
    load_catalog,
    lookup,
    save_catalog,
)
from config_manager import ConfigManager
from errors import CatalogError, ConfigError
from report_generator import ReportGenerator
from verifier import RunPlan, VerificationStatus, mutate_records, run_records, summarize
from version import get_version_string

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

DEBUG_LOG = "qverify_debug.log"

console = Console()
logger = logging.getLogger("qverify")


class UsageError(Exception):
    """Bad selection on the command line (unknown id, family or tag)."""


def set_debug_logging(enabled: bool, path: str = DEBUG_LOG):
    """Route DEBUG records from every module to the debug log file, or switch that off."""
    root = logging.getLogger()
    for handler in list(root.handlers):
        if getattr(handler, '_qverify_debug', False):
            root.removeHandler(handler)
            handler.close()
    if not enabled:
        root.setLevel(logging.WARNING)
        return
    handler = logging.FileHandler(path, encoding='utf-8')
    handler._qverify_debug = True
    handler.setFormatter(logging.Formatter('[%(asctime)s] [%(name)s] %(message)s'))
    root.addHandler(handler)
    root.setLevel(logging.DEBUG)


# Selection --------------------------------------------------------------------

def load_records(args) -> List[IdentityRecord]:
    if getattr(args, 'catalog', None):
        return load_catalog(args.catalog)
    return build_catalog()


def select(records: Sequence[IdentityRecord], args) -> List[IdentityRecord]:
    ids = getattr(args, 'ids', None) or []
    if ids:
        try:
            return [lookup(records, rid) for rid in ids]
        except KeyError as e:
            raise UsageError(e.args[0]) from e
    try:
        return filter_records(records, getattr(args, 'family', None), getattr(args, 'tag', None))
    except ValueError as e:
        raise UsageError(str(e)) from e


def build_config(args) -> ConfigManager:
    manager = ConfigManager(getattr(args, 'config', None))
    manager.update({
        'order': args.order,
        'engine': args.engine,
        'points': args.points,
        'tol': args.tol,
        'seed': args.seed,
        'jobs': args.jobs,
        'format': getattr(args, 'format', None),
        'out': getattr(args, 'out', None),
        'timings': args.timings or None,
        'debug': args.debug or None,
    })
    manager.validate()
    return manager


def plan_from(manager: ConfigManager) -> RunPlan:
    c = manager.config
    return RunPlan(order=c['order'], engine=c['engine'], points=c['points'],
                   tol=c['tol'], seed=c['seed'], jobs=c['jobs'])


# Commands ---------------------------------------------------------------------

def cmd_list(args) -> int:
    records = select(load_records(args), args)
    table = Table(title=f"{len(records)} identities")
    for column in ("id", "family", "engines", "field", "sub", "flags"):
        table.add_column(column)
    for r in records:
        flags = ",".join(r.tags) + (" +notes" if r.notes else "")
        table.add_row(r.id, r.family, r.engines, r.field, str(len(r.sub_identities())), flags)
    console.print(table)
    if not (args.family or args.tag):
        for name, reason in OUT_OF_SCOPE:
            print(f"SKIPPED-UNDEFINED {name}: {reason}")
    return EXIT_OK


def cmd_show(args) -> int:
    records = load_records(args)
    try:
        record = lookup(records, args.id)
    except KeyError as e:
        raise UsageError(e.args[0]) from e
    body = [f"family: {record.family}   field: {record.field}   engines: {record.engines}"
            f"   scale: {record.scale}"]
    for i, expr in enumerate(record.sub_identities()):
        body.append(f"[{i}] {expr} = 0")
    for text in record.display:
        body.append(f"as written: {text}")
    body.append("free: " + (", ".join(f"{n} ({role})" for n, role in record.free_vars) or "none"))
    for entry in record.spec_suite:
        if entry:
            body.append("suite: " + ", ".join(f"{k} := {v}" for k, v in entry))
    for note in record.notes:
        body.append(f"note: {note}")
    body.append(f"source: {record.provenance[0]}")
    body.append(f"quote: \"{record.provenance[1]}\"")
    console.print(Panel(Text("\n".join(body)), title=record.id, expand=False))
    return EXIT_OK


def _print_outcomes(outcomes) -> None:
    table = Table(title="verification")
    for column in ("id", "engine", "status", "max residual"):
        table.add_column(column)
    styles = {
        VerificationStatus.PASS: "green",
        VerificationStatus.FAIL: "bold red",
        VerificationStatus.SKIPPED_DEGENERATE: "yellow",
        VerificationStatus.NOT_APPLICABLE: "dim",
    }
    for o in outcomes:
        table.add_row(o.id, o.engine.value, o.status.value, f"{o.max_residual:.3e}", style=styles[o.status])
    console.print(table)


def _write_report(outcomes, manager: ConfigManager) -> None:
    out = manager.get('out')
    if not out:
        return
    ReportGenerator(outcomes, manager.as_header(), timings=manager.get('timings')).save(out, manager.get('format'))
    print(f"[INFO] Report saved to: {out}")


def _run_mutants(records, manager: ConfigManager, count: int) -> int:
    mutants = mutate_records(records, count, manager.get('seed'))
    outcomes = run_records(mutants, plan_from(manager))
    _print_outcomes(outcomes)
    survivors = [o for o in outcomes if o.status is VerificationStatus.PASS]
    if survivors:
        for o in survivors:
            print(f"[FAIL] mutant {o.id} passed the {o.engine.value} engine", file=sys.stderr)
        return EXIT_FAIL
    print(f"[PASS] all {len(mutants)} mutants rejected")
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.command == 'verify' and not args.ids and not (args.family or args.tag):
        raise UsageError("verify needs identity ids (or use verify-all)")
    manager = build_config(args)
    set_debug_logging(manager.get('debug'))
    records = select(load_records(args), args)
    if args.mutate:
        return _run_mutants(records, manager, args.mutate)
    print(f"[INFO] {get_version_string()}: {len(records)} identities, engine {manager.get('engine')}, "
          f"order {manager.get('order')}")
    outcomes = run_records(records, plan_from(manager))
    _print_outcomes(outcomes)
    _write_report(outcomes, manager)
    counts = summarize(outcomes)
    print(f"[INFO] pass {counts['pass']}, fail {counts['fail']}, "
          f"skipped {counts['skipped-degenerate']}, n/a {counts['not-applicable']}")
    return EXIT_FAIL if counts['fail'] else EXIT_OK


def cmd_report(args) -> int:
    manager = build_config(args)
    set_debug_logging(manager.get('debug'))
    records = select(load_records(args), args)
    outcomes = run_records(records, plan_from(manager))
    generator = ReportGenerator(outcomes, manager.as_header(), timings=manager.get('timings'))
    out = manager.get('out')
    if out:
        generator.save(out, manager.get('format'))
        print(f"[INFO] Report saved to: {out}")
    else:
        sys.stdout.write(generator.generate(manager.get('format')))
    return EXIT_FAIL if summarize(outcomes)['fail'] else EXIT_OK


def cmd_catalog(args) -> int:
    records = load_records(args)
    try:
        save_catalog(records, args.out)
    except OSError as e:
        raise ConfigError(f"cannot write catalog to {args.out}: {e}") from e
    print(f"[INFO] {len(records)} records written to {args.out}")
    return EXIT_OK


# Parser -----------------------------------------------------------------------

def _add_run_options(p: argparse.ArgumentParser, with_ids: bool):
    if with_ids:
        p.add_argument('ids', nargs='*', metavar='ID', help='Identity ids')
    p.add_argument('--family', help='Restrict to one family')
    p.add_argument('--tag', help='Restrict to records with this tag')
    p.add_argument('--order', type=int, help='Exact truncation order (default: 40)')
    p.add_argument('--engine', choices=ConfigManager.ENGINES, help='Engine (default: both)')
    p.add_argument('--points', type=int, help='Numeric sample points (default: 5)')
    p.add_argument('--tol', type=float, help='Numeric relative tolerance (default: 1e-8)')
    p.add_argument('--seed', type=int, help='Sampling seed (default: 0)')
    p.add_argument('--jobs', type=int, help='Worker processes (default: CPU count)')
    p.add_argument('--config', help='JSON config file')
    p.add_argument('--catalog', help='Serialized catalog to use instead of the built-in one')
    p.add_argument('--out', '-o', help='Write the report to this path')
    p.add_argument('--format', '-f', choices=ConfigManager.FORMATS, help='Report format (default: json)')
    p.add_argument('--timings', action='store_true', help='Include elapsed times in the report')
    p.add_argument('--debug', action='store_true', help=f'Write debug records to {DEBUG_LOG}')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='qverify',
        description='Verify mock theta, Appell function and theta identities',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python qverify.py list --family N3
  python qverify.py show TENTH-1
  python qverify.py verify TENTH-1 --engine numeric --points 5 --seed 7
  python qverify.py verify-all --engine exact --order 40
  python qverify.py report --out report.md --format markdown
        """
    )
    subparsers = parser.add_subparsers(dest='command', help='Command to execute')

    list_parser = subparsers.add_parser('list', help='List catalog identities')
    list_parser.add_argument('--family', help='Restrict to one family')
    list_parser.add_argument('--tag', help='Restrict to records with this tag')
    list_parser.add_argument('--catalog', help='Serialized catalog to use instead of the built-in one')

    show_parser = subparsers.add_parser('show', help='Show one identity')
    show_parser.add_argument('id', help='Identity id')
    show_parser.add_argument('--catalog', help='Serialized catalog to use instead of the built-in one')

    verify_parser = subparsers.add_parser('verify', help='Verify selected identities')
    _add_run_options(verify_parser, with_ids=True)
    verify_parser.add_argument('--mutate', type=int, default=0, metavar='K',
                               help='Verify K corrupted records instead; succeeds only if all fail')

    all_parser = subparsers.add_parser('verify-all', help='Verify the whole catalog')
    _add_run_options(all_parser, with_ids=False)
    all_parser.add_argument('--mutate', type=int, default=0, metavar='K',
                            help='Verify K corrupted records instead; succeeds only if all fail')

    report_parser = subparsers.add_parser('report', help='Verify and emit a report')
    _add_run_options(report_parser, with_ids=True)

    catalog_parser = subparsers.add_parser('catalog', help='Export the serialized catalog')
    catalog_parser.add_argument('--out', '-o', required=True, help='Output JSON path')
    catalog_parser.add_argument('--catalog', help=argparse.SUPPRESS)
    return parser


COMMANDS = {
    'list': cmd_list,
    'show': cmd_show,
    'verify': cmd_verify,
    'verify-all': cmd_verify,
    'report': cmd_report,
    'catalog': cmd_catalog,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point; returns the process exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.command:
        parser.print_help()
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except (UsageError, ConfigError, CatalogError) as e:
        print(f"[ERROR] {e}", file=sys.stderr)
        if getattr(args, 'debug', False):
            logger.exception("command failed")
        return EXIT_USAGE


if __name__ == '__main__':
    sys.exit(main())
