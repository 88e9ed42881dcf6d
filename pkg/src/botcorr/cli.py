"""Command-line front end: ingestion -> signals -> correlation -> report.

Subcommands:

* ``extract``  - event + netstat logs to a ``sec,s1,s2,s3`` signal CSV
* ``analyze``  - signal CSV to SV-sweep results (JSON or CSV)
* ``profile``  - event log to per-process call-frequency CSV
* ``generate`` - write synthetic scenario fixture logs
* ``report``   - full pipeline to a JSON report

Exit codes: 0 success, 1 data/validation error, 2 usage error, 3 when
``report --fail-on-detect`` flags any sensitivity value as malicious.
"""

from __future__ import annotations

import csv
import io
import sys
from pathlib import Path

import click

from .correlation import (
    DEFAULT_SV_SWEEP,
    DEFAULT_THRESHOLD,
    EngineConfig,
    Verdict,
    analyze as run_analysis,
)
from .profiling import attribute_suspect, profile_processes, write_profiles_csv
from .report import build_report, render_report, result_dict
from .scenarios import ScenarioKind, ScenarioSpec, generate_scenario
from .signals import (
    ExtractionConfig,
    build_signal_timeline,
    read_timeline_csv,
    write_timeline_csv,
)
from .trace import (
    TraceError,
    merge_session,
    parse_event_log,
    parse_netstat_log,
    write_event_log,
    write_netstat_log,
)

EXIT_DETECTED = 3


def _parse_sv_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise click.BadParameter(f"expected a comma-separated list of numbers, got {text!r}")


def _load_session(event_path: str, netstat_path: str):
    try:
        with open(event_path, "r", encoding="utf-8") as fh:
            events = parse_event_log(fh)
        with open(netstat_path, "r", encoding="utf-8") as fh:
            snapshots = parse_netstat_log(fh)
        return merge_session(events, snapshots)
    except TraceError as exc:
        raise click.ClickException(str(exc))


def _write_output(text: str, out: str | None) -> None:
    if out is None:
        click.echo(text, nl=False)
    else:
        Path(out).write_text(text, encoding="utf-8")


_sv_option = click.option(
    "--sv",
    "sv_list",
    default=",".join(str(int(sv)) for sv in DEFAULT_SV_SWEEP),
    show_default=True,
    help="Comma-separated sensitivity values to sweep.",
)
_threshold_option = click.option(
    "--threshold", type=float, default=DEFAULT_THRESHOLD, show_default=True,
    help="Detection threshold T compared against ACV*100.",
)
_s3_mode_option = click.option(
    "--s3-mode", type=click.Choice(["literal", "inverted"]), default="literal",
    show_default=True, help="s3 thresholding semantics.",
)
_window_option = click.option(
    "--window", type=int, default=None,
    help="Rolling window length in seconds (default: whole session).",
)
_n_s3_option = click.option(
    "--n-s3", type=float, default=40.0, show_default=True,
    help="Call-gap cap above which timing is considered normal.",
)


@click.group()
@click.version_option(package_name="botcorr")
def main() -> None:
    """Behavioral-correlation analysis of recorded host traces."""


@main.command()
@click.argument("event_log", type=click.Path(exists=True, dir_okay=False))
@click.argument("netstat_log", type=click.Path(exists=True, dir_okay=False))
@_n_s3_option
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None,
              help="Write CSV here instead of stdout.")
def extract(event_log: str, netstat_log: str, n_s3: float, output: str | None) -> None:
    """Compute the per-second signal timeline as CSV."""
    session = _load_session(event_log, netstat_log)
    timeline = build_signal_timeline(session, ExtractionConfig(n_s3=n_s3))
    buf = io.StringIO()
    write_timeline_csv(timeline, buf)
    _write_output(buf.getvalue(), output)


@main.command()
@click.argument("signal_csv", type=click.Path(exists=True, dir_okay=False))
@_sv_option
@_threshold_option
@_s3_mode_option
@_window_option
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json",
              show_default=True, help="Results output format.")
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None)
def analyze(signal_csv: str, sv_list: str, threshold: float, s3_mode: str,
            window: int | None, fmt: str, output: str | None) -> None:
    """Run the SV sweep over an extracted signal CSV."""
    try:
        with open(signal_csv, "r", encoding="utf-8") as fh:
            timeline = read_timeline_csv(fh)
        cfg = EngineConfig(sv_list=_parse_sv_list(sv_list), threshold=threshold,
                           s3_mode=s3_mode, window=window)
        results = run_analysis(timeline, cfg)
    except ValueError as exc:
        raise click.ClickException(str(exc))
    if fmt == "json":
        import json

        text = json.dumps([result_dict(r) for r in results], indent=2) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(("sv", "af", "corr_f", "acv", "verdict"))
        for r in results:
            d = result_dict(r)
            writer.writerow((d["sv"], d["af"], d["corr_f"], d["acv"], d["verdict"]))
        text = buf.getvalue()
    _write_output(text, output)


@main.command()
@click.argument("event_log", type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None)
def profile(event_log: str, output: str | None) -> None:
    """Count API calls per process (most active first)."""
    try:
        with open(event_log, "r", encoding="utf-8") as fh:
            events = parse_event_log(fh)
    except TraceError as exc:
        raise click.ClickException(str(exc))
    buf = io.StringIO()
    write_profiles_csv(profile_processes(events), buf)
    _write_output(buf.getvalue(), output)


@main.command()
@click.argument("kind", type=click.Choice([k.value for k in ScenarioKind]))
@click.argument("out_prefix")
@click.option("--duration", type=int, default=60, show_default=True,
              help="Scenario length in seconds (minimum 10).")
@click.option("--seed", type=int, default=1, show_default=True)
@click.option("--flood-rate", type=float, default=2000.0, show_default=True,
              help="Bot outbound packets/sec during bursts.")
@click.option("--burst-gap", type=float, default=0.01, show_default=True,
              help="Spacing of same-name calls inside a burst.")
@click.option("--error-growth", type=int, default=30, show_default=True,
              help="du+fca+rst growth per active bot second.")
def generate(kind: str, out_prefix: str, duration: int, seed: int,
             flood_rate: float, burst_gap: float, error_growth: int) -> None:
    """Write <prefix>.events.jsonl and <prefix>.netstat.jsonl fixtures."""
    try:
        spec = ScenarioSpec(kind=ScenarioKind(kind), duration=duration, seed=seed,
                            flood_rate=flood_rate, burst_gap=burst_gap,
                            error_growth=error_growth)
        session = generate_scenario(spec)
    except ValueError as exc:
        raise click.ClickException(str(exc))
    events_path = Path(f"{out_prefix}.events.jsonl")
    netstat_path = Path(f"{out_prefix}.netstat.jsonl")
    try:
        with open(events_path, "w", encoding="utf-8") as fh:
            write_event_log(session.events, fh)
        with open(netstat_path, "w", encoding="utf-8") as fh:
            write_netstat_log(session.snapshots, fh)
    except OSError as exc:
        raise click.ClickException(f"cannot write fixture: {exc}")
    click.echo(f"wrote {events_path} ({len(session.events)} events)", err=True)
    click.echo(f"wrote {netstat_path} ({len(session.snapshots)} snapshots)", err=True)


@main.command()
@click.argument("event_log", type=click.Path(exists=True, dir_okay=False))
@click.argument("netstat_log", type=click.Path(exists=True, dir_okay=False))
@_sv_option
@_threshold_option
@_n_s3_option
@_s3_mode_option
@_window_option
@click.option("--fail-on-detect", is_flag=True, default=False,
              help="Exit with status 3 when any sensitivity value flags malicious.")
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None)
def report(event_log: str, netstat_log: str, sv_list: str, threshold: float,
           n_s3: float, s3_mode: str, window: int | None, fail_on_detect: bool,
           output: str | None) -> None:
    """Run the full pipeline and emit the JSON report."""
    session = _load_session(event_log, netstat_log)
    try:
        extraction = ExtractionConfig(n_s3=n_s3)
        engine = EngineConfig(sv_list=_parse_sv_list(sv_list), threshold=threshold,
                              s3_mode=s3_mode, window=window)
        timeline = build_signal_timeline(session, extraction)
        results = run_analysis(timeline, engine)
    except ValueError as exc:
        raise click.ClickException(str(exc))
    profiles = profile_processes(session.events)
    suspect = attribute_suspect(profiles, results)
    text = render_report(
        build_report(session, timeline, results, profiles, suspect, extraction, engine)
    )
    _write_output(text, output)
    if fail_on_detect and any(r.verdict is Verdict.MALICIOUS for r in results):
        sys.exit(EXIT_DETECTED)


if __name__ == "__main__":
    main()
