"""
Command line driver for the Seifert cohomology toolkit

    python -m seifert_cli ring --invariants "e=0;type=o1;g=1" --prime 2
    python -m seifert_cli groups --invariants "e=-1;type=o1;g=0;fibers=(2,1),(3,1),(5,1)" --prime 7 --integral
    python -m seifert_cli verify-corpus --primes 2,3,5
    python -m seifert_cli export-complex --invariants "e=0;type=n2;g=1" --check
    python -m seifert_cli word --alpha 5 --beta 2

Exit codes: 0 when every check passes, 1 on input errors, 2 on a failed check.
"""

import sys
import json
import logging
import argparse
from typing import List, Optional

from sympy import isprime

import settings
from seifert_invariants import InvariantError, parse, presentation_pi1
from pavement_word import WordError, build_word, check_rotation_identity
from cellular_complex import build_cell_complex, integral_homology
from delta_complex import build_delta_complex, check_face_identities, load_complex_dump
from closed_form_ring import VARIANTS
from ring_report import verify_manifold, run_corpus, save_report

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_MISMATCH = 2


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad flags; bad input maps to 1 here"""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(EXIT_INPUT)


def _prime_list(text: str) -> List[int]:
    try:
        primes = settings.parse_prime_list(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma separated list of integers: {text!r}")
    if not primes:
        raise argparse.ArgumentTypeError("empty prime list")
    return primes


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="seifert_cli", description="Cohomology rings of Seifert manifolds mod p")
    parser.add_argument("--log-level", default=None, help="Override SEIFERT_LOG_LEVEL")
    sub = parser.add_subparsers(dest="command", required=True)

    ring = sub.add_parser("ring", help="Compute the ring and compare it with the closed form")
    ring.add_argument("--invariants", required=True, help='e.g. "e=0;type=o1;g=1;fibers=(2,1)"')
    ring.add_argument("--prime", type=int, required=True)
    ring.add_argument("--output", choices=("text", "json"), default="text")
    ring.add_argument("--paranoid", action="store_true", default=settings.PARANOID_DEFAULT,
                      help="Also evaluate products that vanish because H^3 = 0")
    ring.add_argument("--basis-variant", choices=VARIANTS, default="theorem")
    ring.add_argument("--export", default=None, help="Save the JSON report to this path")

    groups = sub.add_parser("groups", help="Cohomology dimensions only")
    groups.add_argument("--invariants", required=True)
    groups.add_argument("--prime", type=int, required=True)
    groups.add_argument("--output", choices=("text", "json"), default="text")
    groups.add_argument("--integral", action="store_true", help="Also print H_*(M; Z)")
    groups.add_argument("--presentation", action="store_true", help="Also print the fundamental group presentation")

    corpus = sub.add_parser("verify-corpus", help="Sweep the built-in fixtures")
    corpus.add_argument("--primes", type=_prime_list, default=settings.DEFAULT_PRIMES)
    corpus.add_argument("--workers", type=int, default=settings.CORPUS_WORKERS)
    corpus.add_argument("--paranoid", action="store_true", default=settings.PARANOID_DEFAULT)
    corpus.add_argument("--basis-variant", choices=VARIANTS, default="theorem")
    corpus.add_argument("--groups-only", action="store_true", help="Skip lifts and cup products")
    corpus.add_argument("--output", choices=("text", "json"), default="text")
    corpus.add_argument("--export", default=None)

    export = sub.add_parser("export-complex", help="Dump the Delta-complex")
    export.add_argument("--invariants", required=True)
    export.add_argument("--check", action="store_true", help="Re-read the dump and check the face identities")
    export.add_argument("--file", default=None, help="Write the dump here instead of stdout")

    word = sub.add_parser("word", help="Inspect a pavement word")
    word.add_argument("--alpha", type=int, required=True)
    word.add_argument("--beta", type=int, required=True)
    word.add_argument("--output", choices=("text", "json"), default="text")
    return parser


def _emit(data, output: str, text: str) -> None:
    if output == "json":
        print(json.dumps(data, ensure_ascii=False, indent=2))
    else:
        print(text)


def _cmd_ring(args) -> int:
    inv = parse(args.invariants)
    report = verify_manifold(inv, args.prime, args.basis_variant, args.paranoid)
    if args.export and not save_report(report, args.export):
        return EXIT_INPUT
    _emit(report.to_dict(), args.output, report.describe())
    return EXIT_OK if report.verdict == "PASS" else EXIT_MISMATCH


def _cmd_groups(args) -> int:
    inv = parse(args.invariants)
    report = verify_manifold(inv, args.prime, with_ring=False)
    data = {"invariants": report.invariants, "p": report.p, "case": report.case,
            "dims": report.dims, "verdict": report.verdict}
    lines = [f"{report.invariants}  p={report.p}  case={report.case}"]
    for source in ("expected", "cellular", "simplicial"):
        if source in report.dims:
            lines.append(f"  {source:<11} {tuple(report.dims[source])}")
    if args.integral:
        homology = integral_homology(build_cell_complex(inv))
        data["integral_homology"] = [{"free_rank": h.free_rank, "torsion": h.torsion} for h in homology]
        lines += [f"  H_{d}(M; Z) = {h.describe()}" for d, h in enumerate(homology)]
    if args.presentation:
        data["presentation"] = presentation_pi1(inv)
        lines.append(presentation_pi1(inv))
    if report.verdict != "PASS":
        lines.append(f"  failed: {', '.join(report.failed_checks())}")
    _emit(data, args.output, "\n".join(lines))
    return EXIT_OK if report.verdict == "PASS" else EXIT_MISMATCH


def _cmd_corpus(args) -> int:
    bad = [p for p in args.primes if not isprime(p)]
    if bad:
        raise InvariantError(f"not prime: {bad}")
    reports = run_corpus(args.primes, max(1, args.workers), args.basis_variant,
                         args.paranoid, with_ring=not args.groups_only)
    if args.export and not save_report(reports, args.export):
        return EXIT_INPUT
    failed = [r for r in reports if r.verdict != "PASS"]
    summary = {"total": len(reports), "passed": len(reports) - len(failed),
               "failed": [{"invariants": r.invariants, "p": r.p, "checks": r.failed_checks()} for r in failed],
               "verdict": "PASS" if not failed else "FAIL"}
    lines = [f"{summary['passed']}/{summary['total']} passed"]
    lines += [f"  FAIL {r.invariants} p={r.p}: {', '.join(r.failed_checks())}" for r in failed]
    _emit(summary, args.output, "\n".join(lines))
    return EXIT_OK if not failed else EXIT_MISMATCH


def _cmd_export(args) -> int:
    inv = parse(args.invariants)
    dump = build_delta_complex(inv).export_text()
    if args.file:
        try:
            with open(args.file, 'w', encoding='utf-8') as f:
                f.write(dump)
        except OSError as e:
            logging.error(f"Failed to write {args.file}: {str(e)}")
            return EXIT_INPUT
    else:
        sys.stdout.write(dump)
    if args.check:
        violations = check_face_identities(load_complex_dump(dump))
        if violations:
            for item in violations[:20]:
                sys.stderr.write(item + "\n")
            return EXIT_MISMATCH
    return EXIT_OK


def _cmd_word(args) -> int:
    word = build_word(args.alpha, args.beta)
    rotation_ok = check_rotation_identity(word) if word.beta > 0 else True
    data = dict(word.to_dict(), rotation_identity=rotation_ok)
    _emit(data, args.output, word.describe())
    return EXIT_OK if rotation_ok else EXIT_MISMATCH


COMMANDS = {
    "ring": _cmd_ring,
    "groups": _cmd_groups,
    "verify-corpus": _cmd_corpus,
    "export-complex": _cmd_export,
    "word": _cmd_word,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    settings.setup_logging(args.log_level)
    try:
        return COMMANDS[args.command](args)
    except (InvariantError, WordError) as exc:
        logging.error(str(exc))
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
