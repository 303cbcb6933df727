"""Batch tooling: simulations, stratified splits, audit replay, CSV export.

Every command exits 0 on success; failures print a single machine-parseable
`error: <Type>: <message>` line to stderr and exit 1.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

from . import export, session as sess, simulate as sim
from .metrics import HOLISTIC_KEY, agreement_heatmap, mbcj_agreement_heatmaps
from .ranking import BcjModel
from .selection import StrategyKind
from .store import SessionStore


def _fail(exc: BaseException) -> None:
    click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
    sys.exit(1)


@click.group()
def main() -> None:
    """Bayesian comparative-judgement batch tools."""


@main.command()
@click.option("--mode", type=click.Choice(["BCJ", "MBCJ"], case_sensitive=False), default="BCJ")
@click.option("--items", "n_items", type=int, default=10, show_default=True)
@click.option("--criteria", "n_criteria", type=int, default=3, show_default=True)
@click.option(
    "--strategy",
    type=click.Choice([k.value for k in StrategyKind]),
    default=None,
    help="Defaults to entropy (BCJ) or combined_entropy (MBCJ).",
)
@click.option("--budget", type=int, default=None, help="Defaults to items x 10.")
@click.option("--noise", type=float, default=0.0, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--repeats", type=int, default=1, show_default=True)
@click.option("--criterion-swaps", type=int, default=0, show_default=True)
@click.option("--workers", type=int, default=None)
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Tau-curve CSV path.")
def simulate(mode, n_items, n_criteria, strategy, budget, noise, seed, repeats, criterion_swaps, workers, out):
    """Run synthetic-judge sessions and report tau convergence."""
    try:
        if strategy is None:
            kind = StrategyKind.COMBINED_ENTROPY if mode.upper() == "MBCJ" else StrategyKind.ENTROPY
        else:
            kind = StrategyKind(strategy)
        result = sim.simulate(
            mode=mode,
            n_items=n_items,
            strategy=kind,
            n_criteria=n_criteria,
            noise=noise,
            budget=budget,
            seed=seed,
            repeats=repeats,
            criterion_swaps=criterion_swaps,
            workers=workers,
        )
    except (ValueError, sess.SessionError) as exc:
        _fail(exc)
    final = result.mean[-1]
    click.echo(
        f"mode={mode.upper()} items={n_items} strategy={kind.value} "
        f"repeats={repeats} comparisons={int(result.comparisons[-1])} "
        f"final_tau_mean={final:.4f} final_tau_sd={result.sd[-1]:.4f}"
    )
    if out is not None:
        export.write_tau_curve_csv(out, result)
        click.echo(f"wrote {out}")


@main.command()
@click.argument("marks_csv", type=click.Path(exists=True, dir_okay=False))
@click.option("--groups", type=int, required=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Assignment CSV path.")
def split(marks_csv, groups, seed, out):
    """Deal marked items into mark-balanced groups."""
    try:
        marks = export.read_marks_csv(marks_csv)
        assignment = sim.stratified_split(marks, groups, seed=seed)
    except (ValueError, OSError) as exc:
        _fail(exc)
    for group_index, members in enumerate(assignment, start=1):
        click.echo(f"group {group_index}: {' '.join(members)}")
    if out is not None:
        export.write_split_csv(out, assignment)
        click.echo(f"wrote {out}")


@main.command()
@click.argument("session_id")
@click.option("--data-dir", type=click.Path(file_okay=False), default="./bayescj-data", show_default=True)
def replay(session_id, data_dir):
    """Rebuild a stored session from its audit log and print the ranking."""
    try:
        state = SessionStore(data_dir).load_state(session_id)
        result = sess.session_ranking(state)
    except (sess.SessionError, OSError) as exc:
        _fail(exc)
    click.echo(
        f"session={session_id} mode={state.config.mode} "
        f"judgements={len(state.audit)}/{state.config.max_comparisons}"
    )
    for position, item in enumerate(result.ordered, start=1):
        click.echo(f"{position:3d}  {item}  E[rank]={result.densities[item].expected_rank:.4f}")


@main.command(name="export")
@click.argument("session_id")
@click.option("--data-dir", type=click.Path(file_okay=False), default="./bayescj-data", show_default=True)
@click.option("--out", type=click.Path(file_okay=False), required=True, help="Output directory.")
def export_cmd(session_id, data_dir, out):
    """Write rank densities, expected ranks and agreement heatmaps as CSV."""
    try:
        state = SessionStore(data_dir).load_state(session_id)
        result = sess.session_ranking(state)
        out_dir = Path(out)
        out_dir.mkdir(parents=True, exist_ok=True)
        export.write_density_csv(out_dir / "rank_densities.csv", result)
        export.write_expected_ranks_csv(out_dir / "expected_ranks.csv", result)
        if isinstance(state.model, BcjModel):
            matrices = {HOLISTIC_KEY: agreement_heatmap(state.model)}
        else:
            matrices = mbcj_agreement_heatmaps(state.model)
        for name, matrix in matrices.items():
            for which in ("map", "eap"):
                export.write_heatmap_csv(
                    out_dir / f"agreement_{name}_{which}.csv", matrix, which
                )
    except (sess.SessionError, ValueError, OSError) as exc:
        _fail(exc)
    click.echo(f"wrote {out_dir}")


@main.command()
@click.option("--data-dir", type=click.Path(file_okay=False), default="./bayescj-data", show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--token", default=None, help="Require this bearer token on /sessions routes.")
def serve(data_dir, host, port, token):
    """Run the HTTP session service."""
    import uvicorn

    from .api.app import create_app

    uvicorn.run(create_app(data_dir=data_dir, token=token), host=host, port=port)


if __name__ == "__main__":
    main()
