"""
Command line interface.

Usage:
    gsdo solve --problem G24 --set 1 --budget 45 --seed 7
    gsdo bench --set 1 --trials 30 --out results.csv
    gsdo profiles --in results.csv --tau 0.1 --kind data --out profile.csv --svg profile.svg
    gsdo problems --set 2
    gsdo history --limit 10
    gsdo serve --port 27160
"""

import logging
from pathlib import Path
from typing import Optional, Tuple

import click
from colorama import Fore, Style, init

from gsdo import __version__
from gsdo.config import get_settings, load_solver_config
from gsdo.exceptions import GsdoError
from gsdo.models import ProfileKind, Scenario
from gsdo.services.bench import read_results, run_experiment, summarize, write_results
from gsdo.services.history import get_run_history
from gsdo.services.profiles import build_profile, plot_profile, profile_summary, write_profile
from gsdo.services.stages import run
from gsdo.services.testbed import get_problem, list_problems, problem_metadata

# Initialize colorama for cross-platform colored output
init(autoreset=True)

logger = logging.getLogger(__name__)

SET_CHOICE = click.Choice(["1", "2", "3", "4"])


def print_success(message: str):
    click.echo(Fore.GREEN + "✓ " + message)


def print_warning(message: str):
    click.echo(Fore.YELLOW + "⚠ " + message)


def print_info(message: str):
    click.echo(Fore.CYAN + "ℹ " + message)


def print_header(title: str):
    click.echo(Fore.CYAN + "=" * 60)
    click.echo(Fore.CYAN + f"  {title}")
    click.echo(Fore.CYAN + "=" * 60 + Style.RESET_ALL)


class GsdoGroup(click.Group):
    """Turns library errors into clean CLI failures."""

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except GsdoError as e:
            raise click.ClickException(str(e)) from e


@click.group(cls=GsdoGroup)
@click.version_option(__version__, prog_name="gsdo")
@click.option(
    "--log-level",
    "-l",
    type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
    default=None,
    help="Logging level (default: GSDO_LOG_LEVEL)",
)
def main(log_level: Optional[str]):
    """Global surrogate optimizer for expensive constrained black-box problems."""
    settings = get_settings()
    level = (log_level or settings.log_level).upper()
    logging.basicConfig(
        level=getattr(logging, level),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )


@main.command()
@click.option("--problem", "-p", required=True, help="Registered problem name")
@click.option("--set", "scenario", type=SET_CHOICE, default="1", show_default=True, help="Constraint scenario")
@click.option("--budget", "-b", type=int, default=None, help="Evaluation budget (default: scenario budget)")
@click.option("--seed", "-s", type=int, default=0, show_default=True, help="Random seed")
@click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None, help="key=value config file")
@click.option("--log-csv", type=click.Path(dir_okay=False), default=None, help="Write the evaluation log here")
@click.option("--archive-csv", type=click.Path(dir_okay=False), default=None, help="Write the archive here")
def solve(
    problem: str,
    scenario: str,
    budget: Optional[int],
    seed: int,
    config_path: Optional[str],
    log_csv: Optional[str],
    archive_csv: Optional[str],
):
    """Run the solver once and print its summary line."""
    scenario = Scenario.parse(scenario)
    spec = get_problem(problem, scenario)
    config = load_solver_config(config_path, t_max=budget, seed=seed)
    ctx = run(spec, config, seed=seed, scenario=scenario)
    summary = ctx.record.summary()

    if log_csv:
        ctx.record.to_csv(log_csv)
        print_info(f"Evaluation log written to {log_csv}")
    if archive_csv:
        ctx.archive.to_csv(archive_csv)
        print_info(f"Archive written to {archive_csv}")

    run_id = get_run_history().record(summary)
    if run_id:
        logger.debug(f"Recorded run {run_id}")

    best = "NA" if summary.best_f is None else f"{summary.best_f:.6g}"
    line = (
        f"{summary.problem} {scenario.value} seed={summary.seed} best_f={best} "
        f"feasible={summary.feasible} evals={summary.evaluations}/{summary.budget} "
        f"termination={summary.termination.value}"
    )
    if summary.feasible:
        print_success(line)
    else:
        print_warning(line)


@main.command()
@click.option("--set", "scenario", type=SET_CHOICE, default="1", show_default=True, help="Constraint scenario")
@click.option("--trials", "-t", type=int, default=30, show_default=True, help="Seeds 1..trials per problem")
@click.option("--problem", "-p", "problems", multiple=True, help="Problem name (repeatable, default: all)")
@click.option("--budget", "-b", type=int, default=None, help="Evaluation budget (default: scenario budget)")
@click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None, help="key=value config file")
@click.option("--label", default="gsdo", show_default=True, help="Label identifying this configuration")
@click.option("--workers", "-w", type=int, default=None, help="Worker processes (default: GSDO_WORKERS)")
@click.option("--out", "-o", required=True, type=click.Path(dir_okay=False), help="results.csv path")
@click.option("--summary", "summary_path", type=click.Path(dir_okay=False), default=None, help="Per-problem summary CSV")
def bench(
    scenario: str,
    trials: int,
    problems: Tuple[str, ...],
    budget: Optional[int],
    config_path: Optional[str],
    label: str,
    workers: Optional[int],
    out: str,
    summary_path: Optional[str],
):
    """Run a multi-trial experiment and write the results file."""
    scenario = Scenario.parse(scenario)
    names = [get_problem(name, scenario).name for name in problems] or list_problems(scenario)
    config = load_solver_config(config_path, t_max=budget)

    print_header(f"{label}: {len(names)} problem(s), {scenario.value}, {trials} trial(s)")
    result = run_experiment(names, scenario, config, trials=trials, label=label, workers=workers)
    write_results(result, out)

    table = summarize(result)
    if summary_path:
        Path(summary_path).parent.mkdir(parents=True, exist_ok=True)
        table.to_csv(summary_path, index=False, na_rep="NA")
    click.echo(table.to_string(index=False))
    print_success(f"Wrote {len(result.trials)} trials to {out}")


@main.command()
@click.option(
    "--in",
    "inputs",
    multiple=True,
    required=True,
    type=click.Path(exists=True, dir_okay=False),
    help="results.csv (repeatable)",
)
@click.option("--tau", type=float, required=True, help="Convergence tolerance in (0, 1)")
@click.option("--kind", type=click.Choice([k.value for k in ProfileKind]), required=True, help="Profile type")
@click.option("--out", "-o", required=True, type=click.Path(dir_okay=False), help="profile.csv path")
@click.option("--svg", type=click.Path(dir_okay=False), default=None, help="Also draw the profile as SVG")
def profiles(inputs: Tuple[str, ...], tau: float, kind: str, out: str, svg: Optional[str]):
    """Build a data or performance profile from results files."""
    if not 0 < tau < 1:
        raise click.BadParameter("tau must lie in (0, 1)", param_hint="--tau")
    result = read_results(list(inputs))
    if not result.trials:
        raise click.ClickException("No trials found in the input files")

    table = build_profile(result, tau, kind)
    write_profile(table, out)
    if svg:
        plot_profile(table, svg)
        print_info(f"Plot written to {svg}")

    click.echo(profile_summary(table).to_string(index=False))
    print_success(f"Wrote {kind} profile to {out}")


@main.command()
@click.option("--set", "scenario", type=SET_CHOICE, default="1", show_default=True, help="Constraint scenario")
def problems(scenario: str):
    """List the registered test problems."""
    rows = problem_metadata(Scenario.parse(scenario))
    click.echo(f"{'name':<8} {'d':>3} {'m':>3}  {'f*':>14}  kinds")
    for info in rows:
        f_star = "NA" if info.known_optimum is None else f"{info.known_optimum:.6g}"
        kinds = ",".join(k.value for k in info.kinds)
        click.echo(f"{info.name:<8} {info.dimension:>3} {info.constraints:>3}  {f_star:>14}  {kinds}")
    print_info(f"{len(rows)} problem(s)")


@main.command()
@click.option("--limit", "-n", type=int, default=20, show_default=True, help="Runs to show")
@click.option("--clear", is_flag=True, help="Delete the stored history")
def history(limit: int, clear: bool):
    """Show or clear the run history."""
    store = get_run_history()
    if clear:
        store.clear()
        print_success("Run history cleared")
        return
    if store.max_entries == 0:
        print_warning("Run history is disabled (GSDO_MAX_HISTORY_ENTRIES=0)")
        return

    records = store.get_history(limit=limit)
    if not records:
        print_info("No runs recorded yet")
        return
    for r in records:
        best = "NA" if r.best_f is None else f"{r.best_f:.6g}"
        click.echo(
            f"{r.timestamp:%Y-%m-%d %H:%M:%S}  {r.id[:8]}  {r.problem:<6} {r.scenario.value} "
            f"seed={r.seed:<4} best_f={best:<12} evals={r.evaluations}/{r.budget} {r.termination.value}"
        )


@main.command()
@click.option("--host", "-h", default=None, help="Server host binding (default: GSDO_HOST)")
@click.option("--port", "-p", type=int, default=None, help="Server port (default: GSDO_PORT)")
@click.option("--reload", "-r", is_flag=True, help="Enable auto-reload (for development)")
def serve(host: Optional[str], port: Optional[int], reload: bool):
    """Start the HTTP service."""
    import uvicorn

    settings = get_settings()
    host = host or settings.gsdo_host
    port = port or settings.gsdo_port

    print_header("GSDO Solver Server - Starting")
    click.echo(f"Host:    {host}")
    click.echo(f"Port:    {port}")
    click.echo(f"Reload:  {reload or settings.debug}")
    click.echo()

    uvicorn.run(
        "gsdo.main:app",
        host=host,
        port=port,
        reload=reload or settings.debug,
        log_level=settings.log_level.lower(),
    )


if __name__ == "__main__":
    main()
