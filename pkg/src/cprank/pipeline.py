"""Decision cascade, matrix file I/O and report rendering.

``analyze`` runs every test battery on a matrix, logs each step, and
settles on a verdict: the first definitive outcome in cascade order wins,
cheap constructive wins go before combinatorial search, and the two
necessary conditions always run so negative verdicts are never missed.
``UNDECIDED`` is an honest terminal state; outside the covered cases no
complete decision procedure exists.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

import numpy as np

from . import cones, graphcond, nnq, rotate
from .errors import ComputationFailureError, CprankError, InvalidInputError
from .matcore import (
    DEFAULT_TOL,
    MatrixLike,
    SymmetricMatrix,
    Tolerances,
    classify_dn,
    psd_rank,
    zero_diagonal_indices,
)
from .srfactor import CpCertificate, make_certificate, sr_factor, verify_certificate

__all__ = [
    "AnalysisConfig",
    "StepRecord",
    "AnalysisReport",
    "analyze",
    "read_matrix",
    "matrix_to_text",
    "write_report",
    "NOT_DN",
    "NOT_CP",
    "NOT_IN_CP_N_R",
    "CP_RANK_EQ_RANK",
    "CP_WITH_BOUND",
    "UNDECIDED",
]

NOT_DN = "NOT_DN"
NOT_CP = "NOT_CP"
NOT_IN_CP_N_R = "NOT_IN_CP_N_R"
CP_RANK_EQ_RANK = "CP_RANK_EQ_RANK"
CP_WITH_BOUND = "CP_WITH_BOUND"
UNDECIDED = "UNDECIDED"


@dataclass(frozen=True)
class AnalysisConfig:
    """Knobs shared by the whole cascade; identical config and input give
    byte-identical reports."""

    tol: Tolerances = DEFAULT_TOL
    seed: int = 0
    restarts: int = 200
    maxiter: int = 2000
    heuristic: bool = False
    max_subsets: int | None = 500_000


@dataclass
class StepRecord:
    name: str
    outcome: str
    details: dict = field(default_factory=dict)
    elapsed: float = 0.0  # seconds, reported in text output only


@dataclass
class AnalysisReport:
    order: int
    dn: str
    rank: int
    symmetry_defect: float
    verdict: str
    steps: list[StepRecord]
    certificate: CpCertificate | None
    cp_rank_lower: int | None
    cp_rank_upper: int | None
    seed: int


def _coerce(A: MatrixLike, tol: Tolerances) -> tuple[SymmetricMatrix, float]:
    if isinstance(A, SymmetricMatrix):
        return A, 0.0
    raw = np.asarray(A, dtype=float)
    defect = float(np.abs(raw - raw.T).max()) if raw.ndim == 2 and raw.shape[0] == raw.shape[1] else 0.0
    return SymmetricMatrix(raw, tol), defect


class _Cascade:
    """Mutable state threaded through the analysis steps."""

    def __init__(self, S: SymmetricMatrix, config: AnalysisConfig):
        self.S = S
        self.config = config
        self.tol = config.tol
        self.steps: list[StepRecord] = []
        self.rank = 0
        self.lower: int | None = None
        self.upper: int | None = None
        self.terminal: str | None = None
        self.certificate: CpCertificate | None = None
        # deflation of zero-diagonal rows; factor steps run on the core
        self.kept = np.arange(S.n)
        self.core = S

    def step(self, name: str, outcome: str, details: dict | None = None, t0: float | None = None):
        elapsed = time.perf_counter() - t0 if t0 is not None else 0.0
        self.steps.append(StepRecord(name=name, outcome=outcome, details=details or {}, elapsed=elapsed))

    def settle(self, verdict: str) -> None:
        if self.terminal is None:
            self.terminal = verdict

    def accept(self, cert_core: CpCertificate, name: str, t0: float) -> None:
        """Reinflate a certificate of the deflated core, verify it against
        the full matrix, and fold it into verdict and bounds."""
        full = np.zeros((cert_core.rows, self.S.n))
        full[:, self.kept] = cert_core.C
        cert = make_certificate(self.S, full, cert_core.method_tag, self.tol)
        check = verify_certificate(self.S, cert, self.tol)
        details = {
            "rows": cert.rows,
            "residual": check.residual,
            "min_entry": check.min_entry,
            "method": cert.method_tag,
            "verified": check.passed,
        }
        if not check.passed:
            self.step(name, "FAILED_VERIFICATION", details, t0)
            return
        if self.certificate is None or cert.rows < self.certificate.rows:
            self.certificate = cert
        self.upper = cert.rows if self.upper is None else min(self.upper, cert.rows)
        self.lower = self.rank if self.lower is None else max(self.lower, self.rank)
        self.step(name, f"CERTIFICATE(rows={cert.rows})", details, t0)
        if cert.rows == self.rank:
            self.settle(CP_RANK_EQ_RANK)


def analyze(A: MatrixLike, config: AnalysisConfig = AnalysisConfig()) -> AnalysisReport:
    """Run the full decision cascade on a symmetric matrix.

    Order: DN classification, trivial ranks, the rank-2 bisector, the
    small full-rank rotation, the row-sum construction, the nnq search,
    extreme-ray analysis with the complete rank-3 decision, the graph
    conditions, and optionally a heuristic rotation for rank 5 and up.
    Every step is logged even after the verdict is settled.
    """
    tol = config.tol
    S, defect = _coerce(A, tol)
    cas = _Cascade(S, config)

    t0 = time.perf_counter()
    dn = classify_dn(S, tol)
    rank = dn.rank if dn.is_dn else psd_rank(S, tol).rank
    cas.rank = rank
    cas.step("classify_dn", dn.status if not dn.is_dn else f"DN({rank})", {"rank": rank}, t0)

    if not dn.is_dn:
        cas.settle(NOT_DN)
        for name in ("factor_steps", "graph_steps"):
            cas.step(name, "SKIPPED", {"reason": "input is not doubly nonnegative"})
        return _finish(cas, defect)

    cas.lower = rank
    zero_rows = zero_diagonal_indices(S, tol)
    if zero_rows.size and zero_rows.size < S.n:
        cas.kept = np.setdiff1d(np.arange(S.n), zero_rows)
        cas.core = SymmetricMatrix(S.a[np.ix_(cas.kept, cas.kept)], tol)
        cas.step("deflate_zero_rows", f"DROPPED({zero_rows.size})",
                 {"zero_rows": [int(i) + 1 for i in zero_rows]})

    _trivial_rank_step(cas)
    _rank2_step(cas)
    _small_full_rotation_step(cas)
    _rowsum_step(cas)
    scan = _nnq_step(cas)
    _rays_steps(cas, scan)
    _graph_steps(cas)
    _heuristic_step(cas)

    return _finish(cas, defect)


def _finish(cas: _Cascade, defect: float) -> AnalysisReport:
    if cas.terminal is not None:
        verdict = cas.terminal
    elif cas.upper is not None:
        verdict = CP_WITH_BOUND
    else:
        verdict = UNDECIDED
    dn_status = cas.steps[0].outcome
    return AnalysisReport(
        order=cas.S.n,
        dn="DN" if dn_status.startswith("DN(") else dn_status,
        rank=cas.rank,
        symmetry_defect=defect,
        verdict=verdict,
        steps=cas.steps,
        certificate=cas.certificate,
        cp_rank_lower=cas.lower,
        cp_rank_upper=cas.upper,
        seed=cas.config.seed,
    )


def _trivial_rank_step(cas: _Cascade) -> None:
    t0 = time.perf_counter()
    if cas.rank > 1:
        cas.step("trivial_rank", "SKIPPED", {"reason": "rank above 1"}, t0)
        return
    if cas.rank == 0:
        cert = make_certificate(cas.core, np.zeros((0, cas.core.n)), "rank0", cas.tol)
    else:
        B = sr_factor(cas.core, cas.tol).B
        cert = make_certificate(cas.core, B, "rank1", cas.tol)
    cas.accept(cert, "trivial_rank", t0)


def _rank2_step(cas: _Cascade) -> None:
    t0 = time.perf_counter()
    if cas.rank != 2:
        cas.step("rank2_bisector", "SKIPPED", {"reason": "rank is not 2"}, t0)
        return
    try:
        cert = rotate.rank2_factor(cas.core, cas.tol)
    except CprankError as exc:
        cas.step("rank2_bisector", "FAILED", {"error": str(exc)}, t0)
        return
    cas.accept(cert, "rank2_bisector", t0)


def _small_full_rotation_step(cas: _Cascade) -> None:
    t0 = time.perf_counter()
    nd = cas.core.n
    if not (3 <= cas.rank == nd <= 4):
        cas.step("small_full_rotation", "SKIPPED", {"reason": "needs full rank 3 or 4"}, t0)
        return
    B = sr_factor(cas.core, cas.tol).B
    Q = rotate.small_orthant_rotation(
        B, budget=cas.config.restarts, seed=cas.config.seed,
        tol=cas.tol, maxiter=cas.config.maxiter,
    )
    if Q is None:
        cas.step("small_full_rotation", "BUDGET_EXHAUSTED", {}, t0)
        return
    cert = make_certificate(cas.core, Q @ B, "small_rotation", cas.tol)
    cas.accept(cert, "small_full_rotation", t0)


def _rowsum_step(cas: _Cascade) -> None:
    t0 = time.perf_counter()
    ok, data = rotate.rowsum_condition(cas.core, cas.rank, cas.tol)
    details = {
        "holds": ok,
        "row_sums": [float(v) for v in data.row_sums],
        "total": data.total,
    }
    if not ok:
        cas.step("rowsum", "CONDITION_FALSE", details, t0)
        return
    try:
        cert = rotate.rowsum_factor(cas.core, cas.tol)
    except CprankError as exc:
        cas.step("rowsum", "FAILED", {**details, "error": str(exc)}, t0)
        return
    cas.accept(cert, "rowsum", t0)
    cas.steps[-1].details.update(details)


def _nnq_step(cas: _Cascade) -> nnq.NnqSearchResult | None:
    t0 = time.perf_counter()
    if cas.rank > 4:
        cas.step("nnq_search", "UNSUPPORTED_RANK", {"rank": cas.rank}, t0)
        return None
    scan = nnq.is_nnq_gram(cas.core, cas.tol, cas.config.max_subsets)
    if not scan.found:
        cas.step("nnq_search", scan.status, {}, t0)
        return scan
    witness = scan.witness
    details = {
        "indices": [int(i) + 1 for i in witness.indices],
        "det": witness.detval,
    }
    try:
        cert = nnq.nnq_factor(
            cas.core, witness, cas.tol,
            seed=cas.config.seed, restarts=cas.config.restarts, maxiter=cas.config.maxiter,
        )
    except ComputationFailureError as exc:
        cas.step("nnq_search", "FACTOR_BUDGET_EXHAUSTED", {**details, "error": str(exc)}, t0)
        return scan
    cas.accept(cert, "nnq_search", t0)
    cas.steps[-1].details.update(details)
    return scan


def _rays_steps(cas: _Cascade, scan: nnq.NnqSearchResult | None) -> None:
    t0 = time.perf_counter()
    report = cones.extreme_rays(cas.core, cas.tol)
    cas.step(
        "extreme_rays",
        f"RAYS({report.m})",
        {
            "m": report.m,
            "extreme_indices": [int(i) + 1 for i in report.extreme_indices],
            "residual": report.residual,
        },
        t0,
    )

    t0 = time.perf_counter()
    if report.m > 4:
        cas.step("few_rays_factor", "NOT_APPLICABLE", {"reason": "more than 4 extreme rays"}, t0)
    else:
        try:
            cert = cones.few_rays_factor(
                cas.core, report, cas.tol,
                seed=cas.config.seed, restarts=cas.config.restarts, maxiter=cas.config.maxiter,
            )
        except ComputationFailureError as exc:
            cas.step("few_rays_factor", "BUDGET_EXHAUSTED", {"error": str(exc)}, t0)
        else:
            cas.accept(cert, "few_rays_factor", t0)

    # complete decision: DN of rank 3 with exactly three extreme rays
    t0 = time.perf_counter()
    if cas.rank == 3 and report.m == 3 and scan is not None:
        if scan.found:
            cas.step("rank3_ray_decision", cones.IN_CP_N3, {"m": report.m}, t0)
        elif scan.status == nnq.NONE:
            cas.step("rank3_ray_decision", cones.NOT_IN_CP_N3, {"m": report.m}, t0)
            cas.settle(NOT_IN_CP_N_R)
            cas.lower = max(cas.lower or 0, cas.rank + 1)
        else:
            cas.step("rank3_ray_decision", "INCONCLUSIVE_BUDGET", {"m": report.m}, t0)
    else:
        cas.step("rank3_ray_decision", cones.NOT_APPLICABLE, {"m": report.m}, t0)


def _graph_steps(cas: _Cascade) -> None:
    tol, S = cas.tol, cas.S

    t0 = time.perf_counter()
    cycle = graphcond.cycle_necessary(S, tol)
    details = {
        "off_diag_sum": cycle.off_diag_sum,
        "diag_sum": cycle.diag_sum,
        "cprk_lower_bound": cycle.cprk_lower_bound,
    }
    cas.step("cycle_necessary", cycle.status, details, t0)
    if cycle.status == graphcond.FAILS:
        cas.settle(NOT_CP)
    elif cycle.status == graphcond.PASSES:
        cas.lower = max(cas.lower or 0, cycle.cprk_lower_bound)
        if cas.rank < cycle.cprk_lower_bound:
            cas.settle(NOT_IN_CP_N_R)

    t0 = time.perf_counter()
    tri = graphcond.triangle_free_criterion(S, tol)
    cas.step("triangle_free", tri.status, {"cp_rank": tri.cp_rank}, t0)
    if tri.status == graphcond.NOT_CP:
        cas.settle(NOT_CP)
    elif tri.status == graphcond.CP:
        cas.lower = max(cas.lower or 0, tri.cp_rank)
        cas.upper = tri.cp_rank if cas.upper is None else min(cas.upper, tri.cp_rank)
        if tri.cp_rank > cas.rank:
            cas.settle(NOT_IN_CP_N_R)

    t0 = time.perf_counter()
    kay = graphcond.kaykobad_factor(S, tol)
    if kay is None:
        cas.step("kaykobad", graphcond.NOT_APPLICABLE, {}, t0)
        return
    check = verify_certificate(S, kay, tol)
    if not check.passed:
        cas.step("kaykobad", "FAILED_VERIFICATION", {"residual": check.residual}, t0)
        return
    if cas.certificate is None or kay.rows < cas.certificate.rows:
        cas.certificate = kay
    cas.upper = kay.rows if cas.upper is None else min(cas.upper, kay.rows)
    cas.step("kaykobad", f"CERTIFICATE(rows={kay.rows})",
             {"rows": kay.rows, "residual": check.residual}, t0)
    if kay.rows == cas.rank:
        cas.settle(CP_RANK_EQ_RANK)


def _heuristic_step(cas: _Cascade) -> None:
    t0 = time.perf_counter()
    if not cas.config.heuristic:
        cas.step("heuristic_rotation", "DISABLED", {}, t0)
        return
    if cas.rank <= 4:
        cas.step("heuristic_rotation", "SKIPPED", {"reason": "rank at most 4 is covered"}, t0)
        return
    if cas.terminal == CP_RANK_EQ_RANK:
        cas.step("heuristic_rotation", "SKIPPED", {"reason": "already certified"}, t0)
        return
    B = sr_factor(cas.core, cas.tol).B
    Q = rotate.orthant_rotation_search(
        B, restarts=cas.config.restarts, maxiter=cas.config.maxiter,
        seed=cas.config.seed, eps=cas.tol.eps_nonneg,
    )
    if Q is None:
        cas.step("heuristic_rotation", "NOT_FOUND", {}, t0)
        return
    cert = make_certificate(cas.core, Q @ B, "heuristic_rotation", cas.tol)
    cas.accept(cert, "heuristic_rotation", t0)


# ---------------------------------------------------------------------------
# matrix file I/O


def read_matrix(path: str, fmt: str = "dense", tol: Tolerances = DEFAULT_TOL) -> SymmetricMatrix:
    """Read a matrix file.

    ``dense``: first token is the order ``n``, followed by ``n*n``
    whitespace-separated entries in row-major order.  ``csv``: ``n`` lines
    of ``n`` comma-separated values.  Inputs are symmetrized within
    ``eps_sym``; larger asymmetry is an error.
    """
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if fmt == "dense":
        tokens = text.split()
        if not tokens:
            raise InvalidInputError(f"{path}: empty file")
        try:
            n = int(tokens[0])
        except ValueError:
            raise InvalidInputError(f"{path}: first token must be the order, got {tokens[0]!r}") from None
        if n < 1:
            raise InvalidInputError(f"{path}: order must be positive, got {n}")
        if len(tokens) - 1 != n * n:
            raise InvalidInputError(
                f"{path}: expected {n * n} entries after the order, found {len(tokens) - 1}"
            )
        try:
            values = [float(t) for t in tokens[1:]]
        except ValueError as exc:
            raise InvalidInputError(f"{path}: {exc}") from None
        entries = np.array(values).reshape(n, n)
    elif fmt == "csv":
        rows = []
        lines = [line for line in text.splitlines() if line.strip()]
        if not lines:
            raise InvalidInputError(f"{path}: empty file")
        for lineno, line in enumerate(lines, start=1):
            cells = [c.strip() for c in line.split(",")]
            try:
                rows.append([float(c) for c in cells])
            except ValueError:
                bad = next(i for i, c in enumerate(cells, start=1) if not _is_float(c))
                raise InvalidInputError(
                    f"{path}: line {lineno}, column {bad}: not a number"
                ) from None
            if len(rows[-1]) != len(lines):
                raise InvalidInputError(
                    f"{path}: line {lineno} has {len(rows[-1])} values, expected {len(lines)}"
                )
        entries = np.array(rows)
    else:
        raise InvalidInputError(f"unknown matrix format {fmt!r}")
    try:
        return SymmetricMatrix(entries, tol)
    except InvalidInputError as exc:
        raise InvalidInputError(f"{path}: {exc}") from None


def _is_float(token: str) -> bool:
    try:
        float(token)
        return True
    except ValueError:
        return False


def matrix_to_text(S: SymmetricMatrix, fmt: str = "dense") -> str:
    """Render a matrix in a file format; floats round-trip exactly."""
    rows = [[_num(v) for v in row] for row in S.a]
    if fmt == "dense":
        body = "\n".join(" ".join(row) for row in rows)
        return f"{S.n}\n{body}\n"
    if fmt == "csv":
        return "\n".join(",".join(row) for row in rows) + "\n"
    raise InvalidInputError(f"unknown matrix format {fmt!r}")


# ---------------------------------------------------------------------------
# report rendering


def _num(x: float) -> str:
    return format(float(x), ".17g")


def _json_value(value) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return _num(float(value))
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, dict):
        inner = ",".join(f"{json.dumps(str(k))}:{_json_value(v)}" for k, v in value.items())
        return "{" + inner + "}"
    if isinstance(value, (list, tuple, np.ndarray)):
        seq = value.tolist() if isinstance(value, np.ndarray) else list(value)
        return "[" + ",".join(_json_value(v) for v in seq) + "]"
    raise TypeError(f"cannot serialize {type(value)!r}")


def report_to_json(report: AnalysisReport) -> str:
    """Stable-order JSON with numbers at 17 significant digits."""
    doc: dict = {
        "order": report.order,
        "rank": report.rank,
        "dn": report.dn,
        "verdict": report.verdict,
        "steps": [
            {"name": s.name, "outcome": s.outcome, "details": s.details} for s in report.steps
        ],
    }
    if report.certificate is not None:
        doc["certificate"] = {
            "rows": report.certificate.rows,
            "residual": report.certificate.residual,
            "entries": report.certificate.C,
        }
    doc["cp_rank_lower"] = report.cp_rank_lower
    doc["cp_rank_upper"] = report.cp_rank_upper
    doc["seed"] = report.seed
    return _json_value(doc)


def report_to_text(report: AnalysisReport) -> str:
    lines = [
        f"order {report.order}   dn {report.dn}   rank {report.rank}",
        f"verdict: {report.verdict}",
        f"cp-rank bounds: [{report.cp_rank_lower}, {report.cp_rank_upper}]",
        "steps:",
    ]
    for s in report.steps:
        extras = " ".join(f"{k}={v}" for k, v in s.details.items())
        lines.append(f"  {s.name:<22} {s.outcome:<24} {extras}  [{s.elapsed * 1e3:.1f} ms]")
    if report.certificate is not None:
        c = report.certificate
        lines.append(
            f"certificate: {c.rows} rows, method {c.method_tag}, residual {c.residual:.3e}"
        )
        for row in c.C:
            lines.append("  " + "  ".join(f"{v: .6f}" for v in row))
    return "\n".join(lines) + "\n"


def write_report(report: AnalysisReport, fmt: str = "json") -> bytes:
    """Serialize a report; the JSON form is the compatibility contract."""
    if fmt == "json":
        return (report_to_json(report) + "\n").encode("utf-8")
    if fmt == "text":
        return report_to_text(report).encode("utf-8")
    raise InvalidInputError(f"unknown report format {fmt!r}")
