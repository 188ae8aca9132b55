"""Command-line interface.

Verbs: ``elicit`` (interactive covariance elicitation), ``ingest`` (model
output CSV -> batch document), ``synthesize`` (prior + classes + batch ->
report), ``report`` (render a persisted report to CSV and figures),
``serve`` (HTTP API), ``init-study`` (install the bundled example study).

The store root comes from --store or the PBA_WORKBENCH_STORE environment
variable. Exit codes: 1 bad input, 2 incoherent judgements, 3 internal.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .beliefs import VariableSet
from .casestudy import install_into_store
from .documents import (
    batch_to_doc,
    content_hash,
    prior_to_doc,
    session_to_doc,
    variables_from_doc,
)
from .elicitation import finalize, next_question, start_session, submit_answers
from .errors import IncoherenceError, InputError, WorkbenchError
from .ingest import ingest_outputs
from .reporting import render_figures, report_table_text, write_delimited
from .store import WorkspaceStore
from .workflows import run_synthesis


def _store(store_root: str | None) -> WorkspaceStore:
    root = store_root or Path.cwd() / "workspace"
    return WorkspaceStore(root)


def _load_variables(path: str) -> VariableSet:
    with open(path, encoding="utf-8") as fh:
        return variables_from_doc(json.load(fh))


@click.group()
@click.option(
    "--store",
    "store_root",
    envvar="PBA_WORKBENCH_STORE",
    default=None,
    help="Document store root (env: PBA_WORKBENCH_STORE; default ./workspace).",
)
@click.pass_context
def cli(ctx, store_root):
    ctx.obj = store_root


@cli.command()
@click.option("--variables", "variables_path", required=True, type=click.Path(exists=True))
@click.option("--policy-multiplier", default=0.5, show_default=True, type=float)
@click.option("--id", "prior_id", default=None, help="Id for the finalized prior document.")
@click.pass_obj
def elicit(store_root, variables_path, policy_multiplier, prior_id):
    """Interactively elicit a coherent prior covariance matrix."""
    store = _store(store_root)
    variables = _load_variables(variables_path)
    names = variables.names

    first_prevision = click.prompt(f"prior prevision for {names[0]}", type=float)
    first_variance = click.prompt(f"prior variance for {names[0]}", type=float)
    session = start_session(variables, first_prevision, first_variance, multiplier=policy_multiplier)

    while session.elicited < len(names):
        prompt = next_question(session)
        click.echo(f"\n--- {prompt.variable} ---")
        previsions = []
        given = []
        for hypo in prompt.conditioning:
            given.append(f"{hypo.variable}={hypo.display:g}")
            previsions.append(
                click.prompt(
                    f"prevision for {prompt.variable} given {', '.join(given)}", type=float
                )
            )
        variance = click.prompt(
            f"conditional variance for {prompt.variable} given {', '.join(given)}", type=float
        )
        prior = click.prompt(f"prior prevision for {prompt.variable}", type=float)
        submit_answers(session, previsions, variance, prior)

    click.echo("\nelicited correlations:")
    corr = session.correlation()
    for name, row in zip(names, corr):
        click.echo(f"  {name:<16}" + " ".join(f"{v:+.2f}" for v in row))
    marginal = [
        click.prompt(f"marginal variance for {name}", type=float) for name in names
    ]
    spec = finalize(session, marginal)
    doc = prior_to_doc(spec, doc_id=prior_id)
    saved = store.save(doc)
    store.save(session_to_doc(session))
    click.echo(f"prior saved: {saved} (sha256 {content_hash(store.load('prior', saved))[:12]})")


@cli.command()
@click.argument("csv_path", type=click.Path(exists=True))
@click.option("--variables", "variables_path", required=True, type=click.Path(exists=True))
@click.option("--id", "batch_id", default=None)
@click.pass_obj
def ingest(store_root, csv_path, variables_path, batch_id):
    """Ingest a model-output CSV into a batch document."""
    store = _store(store_root)
    variables = _load_variables(variables_path)
    batch = ingest_outputs(csv_path, variables)
    saved = store.save(batch_to_doc(batch, doc_id=batch_id))
    counts = ", ".join(f"{label}:{len(items)}" for label, items in batch.outputs.items())
    click.echo(f"batch saved: {saved} ({counts})")


@cli.command()
@click.option("--prior", "prior_id", required=True)
@click.option("--classes", "class_id", required=True)
@click.option("--batch", "batch_id", required=True)
@click.option("--id", "report_id", default=None)
@click.option("--outdir", type=click.Path(), default=None, help="Also render CSV + figures here.")
@click.pass_obj
def synthesize(store_root, prior_id, class_id, batch_id, report_id, outdir):
    """Run a synthesis over persisted documents and print the report table."""
    store = _store(store_root)
    result = run_synthesis(store, prior_id, class_id, batch_id, persist=True, report_id=report_id)
    click.echo(report_table_text(result.doc))
    click.echo(f"\nreport saved: {result.report_id}")
    if outdir:
        _render(result.doc, outdir)


@cli.command()
@click.option("--report", "report_id", required=True)
@click.option("--outdir", type=click.Path(), required=True)
@click.pass_obj
def report(store_root, report_id, outdir):
    """Render a persisted report: table to stdout, CSV and figures to files."""
    store = _store(store_root)
    doc = store.load("report", report_id)
    click.echo(report_table_text(doc))
    _render(doc, outdir)


def _render(doc: dict, outdir: str) -> None:
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    table = write_delimited(doc, out / "report.csv")
    figures = render_figures(doc, out)
    for path in (table, *figures):
        click.echo(f"wrote {path}")


@cli.command()
@click.option("--port", default=8080, show_default=True, type=int)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.pass_obj
def serve(store_root, port, host):
    """Serve the HTTP/JSON API."""
    from .service import serve as run_server

    root = store_root or str(Path.cwd() / "workspace")
    run_server(root, host=host, port=port)


@cli.command("init-study")
@click.pass_obj
def init_study(store_root):
    """Install the bundled example study documents into the store."""
    store = _store(store_root)
    ids = install_into_store(store)
    for kind, doc_id in ids.items():
        click.echo(f"{kind}: {doc_id}")


def main() -> None:
    try:
        cli(standalone_mode=False)
    except click.ClickException as exc:
        exc.show()
        sys.exit(1)
    except click.Abort:
        click.echo("aborted", err=True)
        sys.exit(1)
    except IncoherenceError as exc:
        click.echo(f"incoherent judgements: {exc}", err=True)
        sys.exit(2)
    except InputError as exc:
        click.echo(f"input error: {exc}", err=True)
        sys.exit(1)
    except WorkbenchError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(3)
    except Exception as exc:  # pragma: no cover - defensive
        click.echo(f"internal error: {exc}", err=True)
        sys.exit(3)




if __name__ == "__main__":
    main()
