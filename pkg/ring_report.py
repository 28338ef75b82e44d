"""
Verification harness: runs every check for one (manifold, prime) pair, sweeps the corpus
and persists reports as JSON
"""

import os
import json
import time
import logging
from dataclasses import dataclass, field, asdict
from multiprocessing import Pool
from typing import Dict, List, Any, Optional, Sequence, Tuple

from settings import REPORT_DIR
from seifert_invariants import SeifertInvariants, SeifertType, derive
from pavement_word import check_rotation_identity, fiber_words
from cellular_complex import build_cell_complex, cellular_cohomology
from delta_complex import build_delta_complex, check_face_identities, simplicial_cohomology
from chain_transfer import (TransferContext, build_T, cohomology_isomorphism,
                            aux_identity_check)
from closed_form_ring import (VARIANTS, cite, expected_groups, expected_ring, table_dims,
                              check_generator_basis, ring_differences)
from cup_products import assemble_ring, poincare_pairing_check

CORPUS_FIBER_SETS = (
    (),
    ((2, 1), (3, 1), (5, 1)),
    ((2, 1), (4, 3)),
    ((3, 1), (3, 2)),
)
CORPUS_EULER_NUMBERS = (0, -1)


def _key_text(key: Tuple[str, str]) -> str:
    return f"{key[0]}*{key[1]}"


@dataclass
class RingReport:
    """Everything computed and checked for one manifold at one prime"""
    invariants: str
    p: int
    eps_type: str
    case: int
    variant: str
    paranoid: bool
    dims: Dict[str, List[int]] = field(default_factory=dict)
    generators: List[Dict[str, Any]] = field(default_factory=list)
    computed: Dict[str, Dict[str, int]] = field(default_factory=dict)
    expected: Dict[str, Dict[str, int]] = field(default_factory=dict)
    citations: Dict[str, str] = field(default_factory=dict)
    checks: Dict[str, bool] = field(default_factory=dict)
    variant_outcome: Dict[str, str] = field(default_factory=dict)
    details: Dict[str, List[str]] = field(default_factory=dict)
    timings: Dict[str, float] = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        return "PASS" if self.checks and all(self.checks.values()) else "FAIL"

    def failed_checks(self) -> List[str]:
        return [name for name, ok in self.checks.items() if not ok]

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["verdict"] = self.verdict
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'RingReport':
        data = dict(data)
        data.pop("verdict", None)
        return cls(**data)

    def describe(self) -> str:
        """Human-oriented summary, not a stable format"""
        lines = [f"{self.invariants}  p={self.p}  type={self.eps_type}  case={self.case}  [{self.verdict}]"]
        if "expected" in self.dims:
            lines.append(f"  dims: {tuple(self.dims['expected'])}")
        for name, ok in self.checks.items():
            lines.append(f"  {'ok  ' if ok else 'FAIL'} {name}")
            for item in self.details.get(name, [])[:5]:
                lines.append(f"         {item}")
        for variant, outcome in self.variant_outcome.items():
            lines.append(f"  variant {variant}: {outcome}")
        return "\n".join(lines)


class _Checks:
    """Runs named checks; an exception inside one check fails that check only"""

    def __init__(self, report: RingReport):
        self.report = report

    def record(self, name: str, ok: bool, details: Sequence[str] = ()) -> bool:
        self.report.checks[name] = bool(ok)
        if details:
            self.report.details[name] = [str(item) for item in details]
        if not ok:
            logging.error(f"{self.report.invariants} p={self.report.p}: check {name} failed")
        return bool(ok)

    def run(self, name: str, func, *args):
        start = time.perf_counter()
        try:
            outcome = func(*args)
        except Exception as exc:
            logging.error(f"{self.report.invariants} p={self.report.p}: {name} raised {exc}")
            self.record(name, False, [f"{type(exc).__name__}: {exc}"])
            outcome = None
        self.report.timings[name] = round(time.perf_counter() - start, 4)
        return outcome


def verify_manifold(inv: SeifertInvariants, p: int, variant: str = "theorem",
                    paranoid: bool = False, with_ring: bool = True) -> RingReport:
    """
    Build both complexes, compare groups and rings with the closed forms and record every check

    Args:
        inv: Normalized invariants
        p: Prime
        variant: Basis variant whose expected ring is embedded in the report
        paranoid: Evaluate products that vanish because H^3 = 0
        with_ring: Skip lifts and products when False (group-level checks only)

    Returns:
        RingReport
    """
    derived = derive(inv, p)
    report = RingReport(invariants=inv.to_text(), p=p, eps_type=inv.eps_type.value,
                        case=derived.case_id.value, variant=variant, paranoid=paranoid)
    checks = _Checks(report)

    for k, word in enumerate(fiber_words(inv)):
        if word.beta > 0 and not check_rotation_identity(word):
            checks.record("words", False, [f"fiber {k}: {word.describe()}"])
            break
    else:
        checks.record("words", True)

    cell = checks.run("build_cellular", build_cell_complex, inv)
    simp = checks.run("build_simplicial", build_delta_complex, inv)
    if cell is None or simp is None:
        return report

    def chain_complexes() -> bool:
        ok = True
        for d in (2, 3):
            ok &= not (cell.boundary[d - 1] @ cell.boundary[d]).any()
            ok &= not (simp.boundary_matrix(d - 1) @ simp.boundary_matrix(d)).any()
        return ok

    checks.record("chain_complex", bool(checks.run("chain_complex", chain_complexes)))
    violations = checks.run("face_identities", check_face_identities, simp)
    checks.record("face_identities", violations == [], violations or [])
    checks.record("euler_characteristic", simp.euler_characteristic() == 0,
                  [f"chi={simp.euler_characteristic()}"])

    chain_map = checks.run("chain_map", build_T, cell, simp)
    if chain_map is not None:
        checks.record("chain_map", True)

    groups = expected_groups(inv, p, "theorem")
    cell_groups = checks.run("cellular_cohomology", cellular_cohomology, cell, p)
    simp_groups = checks.run("simplicial_cohomology", simplicial_cohomology, simp, p)
    if cell_groups is None or simp_groups is None:
        return report
    report.dims = {"expected": list(groups.dims), "closed_form": list(table_dims(inv, p)),
                   "cellular": list(cell_groups.dims), "simplicial": list(simp_groups.dims)}
    report.generators = [gen.to_dict() for row in groups.generators for gen in row]
    checks.record("groups_cellular", cell_groups.dims == groups.dims,
                  [f"cellular {cell_groups.dims} vs expected {groups.dims}"])
    checks.record("groups_simplicial", simp_groups.dims == groups.dims,
                  [f"simplicial {simp_groups.dims} vs expected {groups.dims}"])
    checks.record("closed_form_dims", tuple(report.dims["closed_form"]) == groups.dims)
    checks.record("euler_cohomology", sum((-1) ** i * dim for i, dim in enumerate(cell_groups.dims)) == 0)

    if chain_map is not None:
        iso = checks.run("quasi_isomorphism", cohomology_isomorphism, chain_map, cell_groups, simp_groups, p)
        if iso is not None:
            checks.record("quasi_isomorphism", iso)

    basis_ok = checks.run("generator_basis", check_generator_basis, cell, groups, cell_groups, p)
    if basis_ok is not None:
        checks.record("generator_basis", basis_ok)

    failing = [k for k in range(inv.m + 1) if not aux_identity_check(simp, inv, k)]
    checks.record("aux_identities", not failing, [f"fiber {k}" for k in failing])

    if not with_ring or chain_map is None:
        return report

    ctx = TransferContext(inv=inv, derived=derived, cell=cell, simp=simp, chain_map=chain_map)
    assembly = checks.run("assemble_ring", assemble_ring, ctx, groups, cell_groups, paranoid)
    if assembly is None:
        return report

    invalid = [label for label, status in assembly.lift_status.items() if status == "invalid"]
    checks.record("lifts", not invalid, invalid)
    checks.record("method_agreement", not assembly.method_mismatches, assembly.method_mismatches)
    checks.record("cocycle_closure", not assembly.non_cocycles, assembly.non_cocycles)
    checks.record("rho_vanishing", not assembly.rho_nonzero, assembly.rho_nonzero)
    checks.record("graded_commutativity", not assembly.commutativity_failures,
                  assembly.commutativity_failures)
    if paranoid:
        checks.record("paranoid_zero_products", not assembly.paranoid_failures, assembly.paranoid_failures)
    # only products of generators with no formula lift may be left out of the comparison
    unavailable = {label for label, status in assembly.lift_status.items() if status == "unavailable"}
    missing = {key for key in assembly.skipped if set(key.split("*")) & unavailable}
    if groups.generators[3] and not missing:
        checks.record("poincare_pairing", poincare_pairing_check(assembly.constants))

    computed = assembly.constants.values
    report.computed = {_key_text(key): value for key, value in computed.items()}

    for name in VARIANTS:
        report.variant_outcome[name] = _variant_outcome(inv, p, name, cell, cell_groups, groups, computed, missing)
        if name == variant:
            ring = expected_ring(inv, p, name)
            report.expected = {_key_text(key): value for key, value in ring.constants.items()}
            report.citations = {_key_text(key): cite(rule) for key, rule in ring.rules.items()}

    matched = [name for name, outcome in report.variant_outcome.items() if outcome == "match"]
    checks.record("ring_match", bool(matched),
                  [f"{name}: {outcome}" for name, outcome in report.variant_outcome.items()])
    logging.info(f"{report.invariants} p={p}: {report.verdict} (variants matching: {matched or 'none'})")
    return report


def _variant_outcome(inv, p, name, cell, cell_groups, theorem_groups, computed, missing) -> str:
    """match / mismatch / invalid-basis for one basis variant"""
    ring = expected_ring(inv, p, name)
    if ring.groups.labels(1) != theorem_groups.labels(1) or ring.groups.labels(2) != theorem_groups.labels(2):
        return "invalid-basis"
    if not check_generator_basis(cell, ring.groups, cell_groups, p):
        logging.warning(f"{inv.to_text()} p={p}: {name} generators do not form a basis")
        return "invalid-basis"
    expected = {key: value for key, value in ring.constants.items() if _key_text(key) not in missing}
    absent = [_key_text(key) for key in expected if key not in computed]
    if absent:
        logging.debug(f"{inv.to_text()} p={p}: {name} has uncomputed products {absent}")
        return "mismatch"
    available = {key: value for key, value in computed.items() if key in expected}
    differences = ring_differences(expected, available, p)
    if differences:
        logging.debug(f"{inv.to_text()} p={p}: {name} differs on {[_key_text(k) for k in differences]}")
        return "mismatch"
    return "match"


# --- corpus ---

def corpus_fixtures() -> List[SeifertInvariants]:
    """Every Type at its minimal genus and one more, crossed with the pinned fiber sets and e"""
    fixtures = []
    for eps_type in SeifertType:
        for g in (eps_type.min_genus, eps_type.min_genus + 1):
            for fibers in CORPUS_FIBER_SETS:
                for e in CORPUS_EULER_NUMBERS:
                    fixtures.append(SeifertInvariants.create(e, eps_type, g, list(fibers)))
    return fixtures


def _verify_task(task: Tuple[Dict[str, Any], int, str, bool, bool]) -> Dict[str, Any]:
    inv_data, p, variant, paranoid, with_ring = task
    inv = SeifertInvariants.from_dict(inv_data)
    return verify_manifold(inv, p, variant, paranoid, with_ring).to_dict()


def run_corpus(primes: Sequence[int], workers: int = 1, variant: str = "theorem",
               paranoid: bool = False, with_ring: bool = True,
               fixtures: Optional[List[SeifertInvariants]] = None) -> List[RingReport]:
    """
    Verify every fixture at every prime

    Args:
        primes: Primes to sweep
        workers: Worker processes; 1 runs sequentially
        variant: Basis variant embedded in each report
        paranoid: Forwarded to verify_manifold
        with_ring: Forwarded to verify_manifold
        fixtures: Override the pinned corpus

    Returns:
        Reports in fixture-major, prime-minor order
    """
    fixtures = corpus_fixtures() if fixtures is None else fixtures
    tasks = [(inv.to_dict(), p, variant, paranoid, with_ring) for inv in fixtures for p in primes]
    logging.info(f"Corpus sweep: {len(fixtures)} manifolds x {len(primes)} primes, {workers} worker(s)")

    if workers > 1:
        with Pool(workers) as pool:
            results = list(pool.imap(_verify_task, tasks))
    else:
        results = []
        for number, task in enumerate(tasks, start=1):
            results.append(_verify_task(task))
            if number % 25 == 0:
                logging.info(f"Corpus progress: {number}/{len(tasks)}")

    reports = [RingReport.from_dict(data) for data in results]
    failed = sum(1 for report in reports if report.verdict != "PASS")
    logging.info(f"Corpus sweep finished: {len(reports) - failed} passed, {failed} failed")
    return reports


# --- persistence ---

def _resolve(path: str) -> str:
    if os.path.dirname(path):
        return path
    return os.path.join(REPORT_DIR, path)


def save_report(report, path: str) -> bool:
    """
    Write one report or a list of reports as JSON

    Args:
        report: RingReport or list of RingReport
        path: File path; a bare file name goes into SEIFERT_REPORT_DIR

    Returns:
        bool: True if the file was written
    """
    target = _resolve(path)
    try:
        directory = os.path.dirname(target)
        if directory and not os.path.exists(directory):
            os.makedirs(directory)
            logging.info(f"Created report directory: {directory}")
        if isinstance(report, list):
            payload = [item.to_dict() for item in report]
        else:
            payload = report.to_dict()
        with open(target, 'w', encoding='utf-8') as f:
            json.dump(payload, f, ensure_ascii=False, indent=2)
        logging.debug(f"Report saved to {target}")
        return True
    except (IOError, OSError, TypeError) as e:
        logging.error(f"Failed to save report to {target}: {str(e)}")
        return False


def load_report(path: str):
    """
    Read a report (or list of reports) written by save_report

    Returns:
        RingReport, list of RingReport, or None on I/O or format errors
    """
    target = _resolve(path)
    try:
        with open(target, 'r', encoding='utf-8') as f:
            data = json.load(f)
        if isinstance(data, list):
            return [RingReport.from_dict(item) for item in data]
        return RingReport.from_dict(data)
    except (IOError, OSError, ValueError, TypeError) as e:
        logging.error(f"Failed to load report from {target}: {str(e)}")
        return None
