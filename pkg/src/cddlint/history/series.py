"""Per-commit evolution metrics: class counts, mean LOC, mean ICP, percent of
classes over the limit, method-length stats and budget-commit detection."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from ..engine import analyze_unit, verdict
from ..methods import MethodStats, method_stats
from ..rules import RuleSet
from ..syntax import ParseError, ast, parse_unit
from ..values import format_fixed2
from .providers import CommitMeta, GitProvider, RangeSpec, SnapshotDirProvider

Provider = Union[GitProvider, SnapshotDirProvider]

CSV_COLUMNS = [
    "ordinal", "commit_id", "timestamp", "class_count", "mean_loc", "mean_icp",
    "percent_over_limit", "cdd_commit", "methods_counted", "method_mean_loc",
    "method_p50", "method_max", "pct_methods_le_24",
]


@dataclass(frozen=True)
class SnapshotFile:
    path: str
    text: str
    is_test: bool


@dataclass(frozen=True)
class SnapshotStats:
    class_count: int
    mean_physical_loc: Optional[Fraction]
    mean_icp: Optional[Fraction]
    percent_over_limit: Optional[Fraction]
    methods: MethodStats
    parse_failures: int
    diagnostics: tuple[str, ...]


@dataclass(frozen=True)
class SnapshotMetrics:
    commit: CommitMeta
    stats: SnapshotStats
    cdd_commit: Optional[tuple[str, str]]  # (unit name, description)


@dataclass(frozen=True)
class SeriesReport:
    snapshots: tuple[SnapshotMetrics, ...]
    rules_digest: str
    parameters: dict


def list_snapshots(provider: Provider, range_spec: RangeSpec = None) -> list[CommitMeta]:
    return provider.list_commits(range_spec)


def read_snapshot_files(
    provider: Provider, commit: CommitMeta, rules: RuleSet
) -> tuple[list[SnapshotFile], list[str]]:
    """Fetch matching files at a commit; binary files are skipped with a note."""

    def wanted(path: str) -> bool:
        return rules.is_included_path(path) and not rules.is_excluded_path(path)

    files: list[SnapshotFile] = []
    diagnostics: list[str] = []
    for path, blob in provider.read_files(commit.id, wanted):
        try:
            text = blob.decode("utf-8")
        except UnicodeDecodeError:
            diagnostics.append(f"{path}: skipped (not valid UTF-8)")
            continue
        files.append(SnapshotFile(path, text, rules.is_test_path(path)))
    return files, diagnostics


def detect_cdd_commit(message: str, rules: RuleSet) -> Optional[tuple[str, str]]:
    first_line = message.split("\n", 1)[0]
    m = rules.commit_pattern.match(first_line)
    if m is None:
        return None
    groups = m.groups()
    unit = groups[0] if groups else m.group(0)
    description = groups[1] if len(groups) > 1 else ""
    return unit or "", description or ""


def analyze_snapshot(files: list[SnapshotFile], rules: RuleSet) -> SnapshotStats:
    """Class metrics over non-test units; parse failures are tallied, not fatal.

    LOC attribution: a file with a single top-level class contributes its
    whole-file physical line count to that class; any other class gets its own
    declaration span height.
    """
    diagnostics: list[str] = []
    parse_failures = 0
    units: list[ast.SourceUnit] = []
    for f in files:
        if f.is_test:
            continue
        try:
            units.append(parse_unit(f.text, f.path))
        except ParseError as exc:
            parse_failures += 1
            diagnostics.append(f"{f.path}: parse failed: {exc}")

    class_locs: list[int] = []
    totals: list[Fraction] = []
    over = 0
    for unit in units:
        single_top = len(unit.types) == 1
        for analysis in analyze_unit(unit, rules):
            decl = _find_decl(unit, analysis.type_name)
            if single_top and decl is unit.types[0]:
                class_locs.append(unit.physical_lines)
            else:
                class_locs.append(decl.span.line_end - decl.span.line_start + 1)
            totals.append(analysis.total)
            if verdict(analysis, rules).over_limit:
                over += 1

    count = len(totals)
    return SnapshotStats(
        class_count=count,
        mean_physical_loc=Fraction(sum(class_locs), count) if count else None,
        mean_icp=sum(totals, Fraction(0)) / count if count else None,
        percent_over_limit=Fraction(100 * over, count) if count else None,
        methods=method_stats(units, rules),
        parse_failures=parse_failures,
        diagnostics=tuple(diagnostics),
    )


def _find_decl(unit: ast.SourceUnit, dotted: str) -> ast.TypeDecl:
    for name, decl in ast.iter_type_decls(unit):
        if name == dotted:
            return decl
    raise KeyError(dotted)


def series(
    provider: Provider, range_spec: RangeSpec, rules: RuleSet,
    parameters: Optional[dict] = None,
) -> SeriesReport:
    snapshots: list[SnapshotMetrics] = []
    failures: list[str] = []
    commits = list_snapshots(provider, range_spec)
    for commit in commits:
        try:
            files, diags = read_snapshot_files(provider, commit, rules)
            stats = analyze_snapshot(files, rules)
            if diags:
                stats = SnapshotStats(
                    class_count=stats.class_count,
                    mean_physical_loc=stats.mean_physical_loc,
                    mean_icp=stats.mean_icp,
                    percent_over_limit=stats.percent_over_limit,
                    methods=stats.methods,
                    parse_failures=stats.parse_failures,
                    diagnostics=tuple(diags) + stats.diagnostics,
                )
        except Exception as exc:  # per-snapshot isolation
            failures.append(f"{commit.id}: {exc}")
            stats = SnapshotStats(0, None, None, None,
                                  method_stats([], rules), 0, (str(exc),))
        snapshots.append(
            SnapshotMetrics(commit, stats, detect_cdd_commit(commit.message, rules))
        )
    if failures and len(failures) == len(commits):
        raise RuntimeError(
            "every snapshot failed; first error: " + failures[0]
        )
    return SeriesReport(
        snapshots=tuple(snapshots),
        rules_digest=rules.digest(),
        parameters=parameters or {},
    )


def _fmt(value: Optional[Fraction]) -> str:
    return "" if value is None else format_fixed2(value)


def render_csv(report: SeriesReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for snap in report.snapshots:
        m = snap.stats.methods
        writer.writerow([
            snap.commit.ordinal,
            snap.commit.id,
            snap.commit.timestamp,
            snap.stats.class_count,
            _fmt(snap.stats.mean_physical_loc),
            _fmt(snap.stats.mean_icp),
            _fmt(snap.stats.percent_over_limit),
            snap.cdd_commit[0] if snap.cdd_commit else "",
            m.counted_methods,
            _fmt(m.mean_loc),
            _fmt(m.median_loc),
            m.max_loc if m.max_loc is not None else "",
            _fmt(m.percent_at_or_under_24),
        ])
    return buf.getvalue()


def _json_2dp(value: Optional[Fraction]) -> Optional[float]:
    return None if value is None else float(format_fixed2(value))


def render_json_mapping(report: SeriesReport) -> dict:
    snapshots = []
    for snap in report.snapshots:
        m = snap.stats.methods
        snapshots.append({
            "ordinal": snap.commit.ordinal,
            "commit_id": snap.commit.id,
            "timestamp": snap.commit.timestamp,
            "class_count": snap.stats.class_count,
            "mean_loc": _json_2dp(snap.stats.mean_physical_loc),
            "mean_icp": _json_2dp(snap.stats.mean_icp),
            "percent_over_limit": _json_2dp(snap.stats.percent_over_limit),
            "cdd_commit": (
                {"unit": snap.cdd_commit[0], "description": snap.cdd_commit[1]}
                if snap.cdd_commit else None
            ),
            "method_stats": {
                "counted": m.counted_methods,
                "excluded": m.excluded_methods,
                "min": m.min_loc,
                "mean": _json_2dp(m.mean_loc),
                "median": _json_2dp(m.median_loc),
                "max": m.max_loc,
                "stddev": round(m.stddev_loc, 4) if m.stddev_loc is not None else None,
                "percent_at_or_under_24": _json_2dp(m.percent_at_or_under_24),
            },
            "parse_failures": snap.stats.parse_failures,
            "diagnostics": list(snap.stats.diagnostics),
        })
    return {
        "schema_version": 1,
        "rules_digest": report.rules_digest,
        "parameters": report.parameters,
        "snapshots": snapshots,
    }
