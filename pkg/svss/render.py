"""Rich rendering for svss command results."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from .coherence import CheaterReport, check_bounds
from .encoding import format_hex
from .orchestrator import (
    AttackResult,
    CoherenceResult,
    DealResult,
    ParamsResult,
    RatesResult,
    VerifyResult,
)


def _decimal(value: Fraction | float) -> str:
    return f"{float(value):.4f}"


def _emit_json(console: Console, payload: dict[str, Any]) -> None:
    console.print_json(json.dumps(payload, default=str))


def verdict_line(result: VerifyResult) -> str:
    if result.accepted:
        return "ACCEPT"
    return "\n".join(f"REJECT index={index}" for index in result.rejected)


def render_params(result: ParamsResult, *, console: Console, json_mode: bool) -> None:
    document = result.document
    if json_mode:
        _emit_json(
            console,
            {
                "field": document.field.descriptor(),
                "origin": document.origin,
                "origin_value": document.origin_value,
                "path": str(result.path) if result.path else None,
            },
        )
        return
    lines = [f"Field: {document.field}", f"Descriptor: {document.field.descriptor()}"]
    if document.origin == "safe-prime":
        lines.append(f"q = (p - 1) / 2 = {format_hex(document.origin_value)}")
    elif document.origin == "mersenne":
        lines.append(f"Mersenne exponent: {document.origin_value}")
    if result.path:
        lines.append(f"Written to {result.path}")
    console.print(Panel("\n".join(lines), title="Parameters", expand=False))


def render_deal(result: DealResult, *, console: Console, json_mode: bool) -> None:
    if json_mode:
        _emit_json(
            console,
            {
                "scheme": result.scheme,
                "field": result.field.descriptor(),
                "verification_field": (
                    result.verification_field.descriptor() if result.verification_field else None
                ),
                "threshold": result.threshold,
                "total": result.total,
                "shares": [str(path) for path in result.share_paths],
                "bundles": [str(path) for path in result.bundle_paths],
                "combined": str(result.combined_path) if result.combined_path else None,
                "regenerations": result.regenerations,
                "payload_bits": result.payload_bits,
            },
        )
        return
    summary = [
        f"Scheme: {result.scheme}",
        f"Secret field: {result.field}",
        f"Threshold: {result.threshold} of {result.total}",
    ]
    if result.verification_field is not None:
        summary.append(f"Verification field: {result.verification_field}")
    if result.regenerations:
        summary.append(f"Shares regenerated {result.regenerations} time(s)")
    console.print(Panel("\n".join(summary), title="Deal", expand=False))

    table = Table(title="Documents")
    table.add_column("Holder", justify="right")
    table.add_column("Share")
    table.add_column("Bundle")
    bundles = {path.stem.rsplit("_", 1)[-1]: path for path in result.bundle_paths}
    for path in result.share_paths:
        index = path.stem.rsplit("_", 1)[-1]
        bundle = bundles.get(index) or bundles.get("0")
        table.add_row(index, path.name, bundle.name if bundle else "-")
    console.print(table)
    if result.combined_path:
        console.print(f"[bold red]Insecure combined file:[/bold red] {result.combined_path}")


def render_verify(result: VerifyResult, *, console: Console, json_mode: bool) -> None:
    if json_mode:
        _emit_json(
            console,
            {
                "scheme": result.scheme,
                "accepted": result.accepted,
                "verdicts": [{"index": i, "accepted": ok} for i, ok in result.verdicts],
            },
        )
        return
    console.print(verdict_line(result))


def _histogram_table(report: CheaterReport) -> Table:
    table = Table(title=f"Reconstructions over C({report.m}, {report.t}) subsets")
    table.add_column("Secret")
    table.add_column("Count", justify="right")
    table.add_column("First witness")
    for entry in report.histogram.ordered():
        witness = ", ".join(str(i) for i in entry.witnesses[0]) if entry.witnesses else "-"
        table.add_row(format_hex(entry.secret.value), str(entry.count), witness)
    return table


def _bounds_table(report: CheaterReport) -> Table:
    c = len(report.cheaters)
    table = Table(title=f"Bounds for m = {report.m}, t = {report.t}, c = {c}")
    table.add_column("Cheaters")
    table.add_column("Detection", justify="center")
    table.add_column("Identification", justify="center")
    for organized in (False, True):
        bounds = check_bounds(report.m, report.t, c, organized)
        table.add_row(
            "organized" if organized else "independent",
            "yes" if bounds.detection_ok else "no",
            "yes" if bounds.identification_ok else "no",
        )
    return table


def render_coherence(result: CoherenceResult, *, console: Console, json_mode: bool) -> None:
    report = result.report
    if json_mode:
        _emit_json(
            console,
            {
                "command": result.command,
                "field": result.field.descriptor(),
                "m": report.m,
                "t": report.t,
                "consistent": report.consistent,
                "majority_secret": (
                    report.majority_secret.value if report.majority_secret is not None else None
                ),
                "cheaters": report.cheaters,
                "histogram": report.histogram.counts(),
            },
        )
        return
    if report.consistent:
        verdict = "[green]Consistent: every subset rebuilds the same secret[/green]"
    else:
        verdict = "[bold red]Inconsistent: cheating detected[/bold red]"
    lines = [verdict]
    if report.majority_secret is not None:
        lines.append(f"Majority secret: {format_hex(report.majority_secret.value)}")
    if result.command == "identify" and not report.consistent:
        flagged = ", ".join(str(i) for i in report.cheaters) or "none"
        lines.append(f"Cheaters: {flagged}")
    console.print(Panel("\n".join(lines), title=result.command.capitalize(), expand=False))
    console.print(_histogram_table(report))
    console.print(_bounds_table(report))


def render_rates(result: RatesResult, *, console: Console, json_mode: bool) -> None:
    if json_mode:
        _emit_json(
            console,
            {
                "bs_q": result.bs_q,
                "t": result.t,
                "n": result.n,
                "reports": [
                    {
                        "scheme": report.scheme.value,
                        "total_bits": report.total_bits,
                        "verification_bits": report.verification_bits,
                        "committed_bits": report.committed_bits,
                        "rate": str(report.rate),
                        "params": {k: str(v) for k, v in report.params.items()},
                    }
                    for report in result.reports
                ],
            },
        )
        return
    table = Table(title=f"Information rates (bs(q) = {result.bs_q}, t = {result.t}, n = {result.n})")
    table.add_column("Scheme")
    table.add_column("Total bits", justify="right")
    table.add_column("Verification bits", justify="right")
    table.add_column("Committed bits", justify="right")
    table.add_column("Rate", justify="right")
    table.add_column("K", justify="right")
    for report in result.reports:
        k = report.params.get("K")
        table.add_row(
            report.scheme.value,
            str(report.total_bits),
            str(report.verification_bits),
            str(report.committed_bits),
            _decimal(report.rate),
            _decimal(k) if k is not None else "-",
        )
    console.print(table)


def render_attack(result: AttackResult, *, console: Console, json_mode: bool) -> None:
    if json_mode:
        _emit_json(
            console,
            {
                "kind": result.kind,
                "success": result.success,
                "field": result.field.descriptor(),
                "detail": result.detail,
            },
        )
        return
    detail = result.detail
    if result.kind == "gcd":
        lines = [
            f"Verification field: {result.field}",
            f"Target shareholder: {detail['target']}",
            f"Genuine share: {format_hex(detail['expected'])}",
        ]
        if "recovered" in detail:
            recovered = ", ".join(format_hex(v) for v in detail["recovered"]) or "none"
            lines.append(f"Recovered: {recovered}")
        if result.collusion is not None:
            lines.append(f"gcd degree: {result.collusion.gcd.degree}")
    else:
        lines = [f"Verification field: {result.field}"]
        if "forged" in detail:
            lines.append(
                f"Forged share: {format_hex(detail['forged'])} "
                f"(M = {format_hex(detail['high'])}, L = V(M) = {format_hex(detail['low'])})"
            )
        lines.append(f"Attempts: {detail['attempts']}")
    status = "[green]succeeded[/green]" if result.success else "[yellow]inconclusive[/yellow]"
    console.print(Panel("\n".join(lines), title=f"Attack {result.kind}: {status}", expand=False))
