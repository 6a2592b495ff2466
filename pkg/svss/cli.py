"""Typer CLI entry-point for svss."""

from __future__ import annotations

import logging
import sys
from collections.abc import Iterator, Sequence
from contextlib import contextmanager
from pathlib import Path

import typer
from rich.console import Console
from rich.logging import RichHandler

from .config import load_settings
from .encoding import parse_hex
from .errors import BadParamsError, SvssError
from .orchestrator import Orchestrator
from .render import (
    render_attack,
    render_coherence,
    render_deal,
    render_params,
    render_rates,
    render_verify,
)

EXIT_OK = 0
EXIT_NEGATIVE = 1

app = typer.Typer(add_completion=False, no_args_is_help=True)
console = Console()
logger = logging.getLogger(__name__)


def _natural(text: str, option: str) -> int:
    try:
        value = int(text, 0)
    except ValueError as err:
        raise BadParamsError(f"{option} expects a natural number, got {text!r}") from err
    if value < 0:
        raise BadParamsError(f"{option} expects a natural number, got {text!r}")
    return value


@contextmanager
def _surfaced_errors() -> Iterator[None]:
    """Print library errors and exit with their code."""

    try:
        yield
    except SvssError as err:
        console.print(str(err), style="red", markup=False)
        raise typer.Exit(err.exit_code) from err


def _configure_logging(debug: bool) -> None:
    if not debug:
        return
    logging.basicConfig(
        level=logging.DEBUG,
        format="%(message)s",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
        force=True,
    )


@app.callback()
def cli_root(
    ctx: typer.Context,
    json_mode: bool = typer.Option(False, "--json", help="Emit machine-readable JSON."),  # noqa: B008
    debug: bool = typer.Option(False, "--debug", help="Log library internals."),  # noqa: B008
    field_choice: str | None = typer.Option(
        None, "--field-choice", help="Verification field derivation (overrides SVSS_FIELD_CHOICE)."
    ),  # noqa: B008
    workers: int | None = typer.Option(None, "--workers", min=1, help="Thread pool width."),  # noqa: B008
):
    """Verifiable secret sharing with space-efficient verification bundles."""

    _configure_logging(debug)
    with _surfaced_errors():
        settings = load_settings(debug=debug, field_choice=field_choice, max_workers=workers)
    if debug:
        logger.debug("Resolved settings: %s", settings.describe())
    ctx.obj = {
        "settings": settings,
        "orchestrator": Orchestrator(settings),
        "json": json_mode,
        "debug": debug,
    }


def _orchestrator(ctx: typer.Context, **overrides) -> Orchestrator:
    orchestrator: Orchestrator = ctx.obj["orchestrator"]
    if any(value is not None for value in overrides.values()):
        return Orchestrator(orchestrator.settings.with_overrides(**overrides))
    return orchestrator


@app.command("gen-params")
def gen_params(
    ctx: typer.Context,
    bits: int | None = typer.Option(None, "--bits", help="Smallest safe prime above 2^(N-1)."),  # noqa: B008
    safe_prime_above: str | None = typer.Option(
        None, "--safe-prime-above", help="Smallest safe prime strictly above X."
    ),  # noqa: B008
    mersenne: int | None = typer.Option(None, "--mersenne", help="GF(2^E) for a Mersenne exponent E."),  # noqa: B008
    hamming_floor: int | None = typer.Option(
        None, "--hamming-floor", help="Minimum Hamming weight of the safe prime."
    ),  # noqa: B008
    out: Path | None = typer.Option(None, "--out", help="Directory for params.txt."),  # noqa: B008
):
    """Generate a verification field."""

    json_mode: bool = ctx.obj["json"]
    with _surfaced_errors():
        orchestrator = _orchestrator(ctx, hamming_floor=hamming_floor)
        above = _natural(safe_prime_above, "--safe-prime-above") if safe_prime_above else None
        result = orchestrator.handle_gen_params(
            bits=bits, safe_prime_above=above, mersenne=mersenne, out_dir=out
        )
    render_params(result, console=console, json_mode=json_mode)


@app.command()
def deal(
    ctx: typer.Context,
    secret: str = typer.Option(..., "--secret", help="Secret as hex."),  # noqa: B008
    t: int = typer.Option(..., "--t", help="Reconstruction threshold."),  # noqa: B008
    n: int = typer.Option(..., "--n", help="Number of shareholders."),  # noqa: B008
    scheme: str = typer.Option("exp", "--scheme", help="exp, exp-ssp, pow, ssp, pow-priv, ssp-priv, feldman or hash."),  # noqa: B008
    seed: int | None = typer.Option(None, "--seed", help="Deterministic randomness."),  # noqa: B008
    prime: str | None = typer.Option(None, "--prime", help="Secret field modulus as hex."),  # noqa: B008
    params: Path | None = typer.Option(None, "--params", help="Secret field from a params file."),  # noqa: B008
    feldman_p_bits: int | None = typer.Option(None, "--feldman-p-bits", min=8, help="Bits of the Feldman modulus p."),  # noqa: B008
    out: Path = typer.Option(Path("."), "--out", help="Output directory."),  # noqa: B008
    insecure_combined: bool = typer.Option(
        False, "--insecure-combined", help="Also write every share and bundle to combined.txt (testing only)."
    ),  # noqa: B008
):
    """Deal shares and write one share and one bundle file per shareholder."""

    json_mode: bool = ctx.obj["json"]
    with _surfaced_errors():
        orchestrator = _orchestrator(ctx, feldman_p_bits=feldman_p_bits)
        result = orchestrator.handle_deal(
            secret=parse_hex(secret),
            t=t,
            n=n,
            scheme=scheme.lower(),
            out_dir=out,
            seed=seed,
            prime=parse_hex(prime) if prime else None,
            params_path=params,
            insecure_combined=insecure_combined,
        )
    render_deal(result, console=console, json_mode=json_mode)


@app.command()
def verify(
    ctx: typer.Context,
    bundle: Path = typer.Option(..., "--bundle", help="Bundle or public commitment file."),  # noqa: B008
    share: Path = typer.Option(..., "--share", help="Share file to check."),  # noqa: B008
):
    """Check a share against a verification bundle."""

    orchestrator: Orchestrator = ctx.obj["orchestrator"]
    json_mode: bool = ctx.obj["json"]
    with _surfaced_errors():
        result = orchestrator.handle_verify(bundle_path=bundle, share_path=share)
    render_verify(result, console=console, json_mode=json_mode)
    if not result.accepted:
        raise typer.Exit(EXIT_NEGATIVE)


@app.command()
def detect(
    ctx: typer.Context,
    shares: list[Path] = typer.Option(..., "--shares", help="Share files (repeatable)."),  # noqa: B008
    t: int | None = typer.Option(None, "--t", help="Threshold; defaults to the documents' value."),  # noqa: B008
):
    """Detect cheating by reconstructing from every t-subset."""

    orchestrator: Orchestrator = ctx.obj["orchestrator"]
    json_mode: bool = ctx.obj["json"]
    with _surfaced_errors():
        result = orchestrator.handle_detect(share_paths=shares, t=t)
    render_coherence(result, console=console, json_mode=json_mode)
    if not result.report.consistent:
        raise typer.Exit(EXIT_NEGATIVE)


@app.command()
def identify(
    ctx: typer.Context,
    shares: list[Path] = typer.Option(..., "--shares", help="Share files (repeatable)."),  # noqa: B008
    t: int | None = typer.Option(None, "--t", help="Threshold; defaults to the documents' value."),  # noqa: B008
):
    """Name the shareholders whose shares break the majority reconstruction."""

    orchestrator: Orchestrator = ctx.obj["orchestrator"]
    json_mode: bool = ctx.obj["json"]
    with _surfaced_errors():
        result = orchestrator.handle_identify(share_paths=shares, t=t)
    render_coherence(result, console=console, json_mode=json_mode)
    if not result.report.consistent:
        raise typer.Exit(EXIT_NEGATIVE)


@app.command()
def rates(
    ctx: typer.Context,
    bsq: int = typer.Option(..., "--bsq", min=1, help="Bit size of the share domain bound q."),  # noqa: B008
    t: int = typer.Option(..., "--t", help="Reconstruction threshold."),  # noqa: B008
    n: int = typer.Option(..., "--n", help="Number of shareholders."),  # noqa: B008
    feldman_p_bits: int | None = typer.Option(None, "--feldman-p-bits", help="Bits of the Feldman modulus p."),  # noqa: B008
):
    """Compare information rates of Feldman, VSS-EXP and VSS-EXP-SSP."""

    orchestrator: Orchestrator = ctx.obj["orchestrator"]
    json_mode: bool = ctx.obj["json"]
    with _surfaced_errors():
        result = orchestrator.handle_rates(bs_q=bsq, t=t, n=n, p_bits=feldman_p_bits)
    render_rates(result, console=console, json_mode=json_mode)


@app.command("attack-demo")
def attack_demo(
    ctx: typer.Context,
    kind: str = typer.Option("gcd", "--kind", help="gcd or ssp-forgery."),  # noqa: B008
    seed: int | None = typer.Option(None, "--seed", help="Deterministic randomness."),  # noqa: B008
    bits: int = typer.Option(10, "--bits", help="Bit size of the secret field."),  # noqa: B008
    n: int = typer.Option(5, "--n", help="Number of shareholders."),  # noqa: B008
    t: int = typer.Option(3, "--t", help="Reconstruction threshold."),  # noqa: B008
):
    """Run a desk-scale attack and report what it recovered or forged."""

    orchestrator: Orchestrator = ctx.obj["orchestrator"]
    json_mode: bool = ctx.obj["json"]
    with _surfaced_errors():
        result = orchestrator.handle_attack_demo(kind=kind.lower(), bits=bits, n=n, t=t, seed=seed)
    render_attack(result, console=console, json_mode=json_mode)
    if not result.success:
        raise typer.Exit(EXIT_NEGATIVE)


def main(argv: Sequence[str] | None = None) -> None:
    args = list(sys.argv[1:] if argv is None else argv)
    app(args=args, prog_name="svss")


if __name__ == "__main__":  # pragma: no cover
    main()
