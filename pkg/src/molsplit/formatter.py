"""
Human-readable output formatting for splits, audits, comparisons and metrics.
JSON output lives with the result types (``to_dict``); this is the text side.
"""

from __future__ import annotations

from molsplit.audit import AuditReport, ComparisonReport
from molsplit.kcut import KCutProblem, KCutSolution, VerifyReport
from molsplit.metrics import MetricResult
from molsplit.split.manifest import SplitKind, SplitManifest

_RULE = "=" * 60

_KIND_TITLE = {
    SplitKind.HI: "HI SPLIT",
    SplitKind.GREEDY: "GREEDY SPLIT",
    SplitKind.LO: "LO SPLIT",
}


def _header(title: str) -> list[str]:
    return [_RULE, f"  {title}", _RULE]


def format_split_summary(manifest: SplitManifest) -> str:
    """Fold sizes, removed count and the key parameters of a split."""
    lines = _header(_KIND_TITLE[manifest.kind])
    params = manifest.parameters
    if "threshold" in params:
        lines.append(f"  Threshold: {params['threshold']}")
    for i, fold in enumerate(manifest.folds, start=1):
        lines.append(f"  Fold {i}: {len(fold.train)} train / {len(fold.test)} test")
    lines.append(f"  Removed: {manifest.n_removed}")
    if manifest.kind is SplitKind.LO:
        lines.append(f"  Clusters: {len(manifest.clusters)} (one anchor each kept in train)")
    if params.get("optimal") is False:
        lines.append(f"  ⚠️  Time budget hit; solution not proven optimal (gap {params.get('gap')})")
    lines.append(_RULE)
    return "\n".join(lines)


def format_audit(report: AuditReport) -> str:
    lines = _header("SPLIT AUDIT")
    verdict = "✅ No leakage." if report.n_leaking == 0 else "⚠️  Leakage detected."
    lines.append(f"  {verdict}")
    lines.append(
        f"  {report.n_leaking}/{report.n_test} test molecules have a train neighbour "
        f">= {report.threshold} ({report.leakage_fraction:.1%})"
    )
    lines.append("")
    lines.append("── Nearest-train similarity ─────────────────────────")
    peak = max((count for _, _, count in report.histogram()), default=0) or 1
    for lo, hi, count in report.histogram():
        bar = "#" * round(30 * count / peak)
        lines.append(f"  {lo:.2f}-{hi:.2f} {count:6d} {bar}")
    lines.append(_RULE)
    return "\n".join(lines)


def format_comparison(report: ComparisonReport) -> str:
    lines = _header(f"SPLITTER COMPARISON ({report.train_fraction:g} train, threshold {report.threshold})")
    lines.append(f"  {'splitter':<10}{'train':>8}{'test':>8}{'removed':>10}{'%':>8}{'leakage':>10}")
    for r in report.results:
        lines.append(
            f"  {r.name:<10}{r.n_train:>8}{r.n_test:>8}{r.n_removed:>10}"
            f"{r.removed_percent:>7.1f}%{r.leakage_fraction:>10.3f}"
        )
    lines.append(_RULE)
    return "\n".join(lines)


def format_metrics(result: MetricResult) -> str:
    lines = _header(f"{result.mode.value.upper()} METRICS")
    lines.append(f"  {result.metric}: {result.value:.4f}  (dummy baseline {result.dummy:.4f})")
    lines.append(f"  Predictions: {result.n}")
    if result.per_cluster:
        lines.append("")
        lines.append(f"── Per cluster ({len(result.per_cluster)}) ──────────────────────────")
        for cluster, rho in result.per_cluster.items():
            lines.append(f"  {cluster}: {rho:+.4f}")
    lines.append(_RULE)
    return "\n".join(lines)


def format_kcut(problem: KCutProblem, solution: KCutSolution, report: VerifyReport | None = None) -> str:
    lines = _header("K-CUT SOLUTION")
    lines.append(f"  Vertices: {problem.n}  k: {problem.k}  bounds: {list(problem.bounds)}")
    lines.append(f"  Kept weight: {solution.kept_weight}/{problem.total_weight}")
    lines.append(f"  Partition weights: {solution.partition_weights(problem)}")
    status = "optimal" if solution.optimal else f"not proven optimal (gap {solution.gap})"
    lines.append(f"  Status: {status}")
    if report is not None and not report.ok:
        lines.append("  ❌ Verification failed:")
        lines.extend(f"     - {v.message}" for v in report.violations)
    lines.append(_RULE)
    return "\n".join(lines)
