"""
Command-line front end.

Usage:
    heegaard analyze <file> [--json]
    heegaard compare <A> <B> [--stable | --minimal] [--json]
    heegaard snf | normalize | phase | wall | count-classes <file>
    heegaard gauss <file> --k <k>
    heegaard selftest [--max-size N] [--seed S]
    heegaard lens <p> <q> [<p> <q> ...]
"""

import functools
import json
import logging
import sys

import click

from heegaard.classify_two import gauss_sum_bruteforce, gauss_sum_closed_form, phase_from_gauss_sum, phase_vector, wall_decompose
from heegaard.config import HEEGAARD_DEBUG
from heegaard.errors import DimensionError, InputParseError, InvalidLinkingError, NotSymplecticError, SizeLimitError
from heegaard.inputs import LinkedGroupInput, MatrixInput, SplittingInput, load_input
from heegaard.linked_group import LinkedGroup, linking_from_normal_form, primary_decompose
from heegaard.matrices import smith_normal_form
from heegaard.minimal_class import class_count, realized_det_values, tau_bar
from heegaard.report import analyze, compare, render_text
from heegaard.selftest import run_selftest
from heegaard.symplectic import lens_sum_matrix, partial_normal_form

logger = logging.getLogger(__name__)

EXIT_INEQUIVALENT = 1
EXIT_PARSE = 2
EXIT_NOT_SYMPLECTIC = 3
EXIT_SIZE_LIMIT = 4


def configure_logging(debug: bool) -> None:
    if debug:
        logging.basicConfig(
            level=logging.DEBUG,
            format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
            stream=sys.stderr,
            force=True,
        )
    else:
        logging.basicConfig(level=logging.WARNING, format='%(levelname)s - %(message)s', stream=sys.stderr, force=True)


def handle_errors(command):
    """Map library errors to exit codes with an 'Error: ...' line on stderr."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except NotSymplecticError as e:
            click.echo(f"Error: {e}", err=True)
            sys.exit(EXIT_NOT_SYMPLECTIC)
        except (InputParseError, DimensionError, InvalidLinkingError) as e:
            click.echo(f"Error: {e}", err=True)
            sys.exit(EXIT_PARSE)
        except SizeLimitError as e:
            click.echo(f"Error: {e}", err=True)
            sys.exit(EXIT_SIZE_LIMIT)

    return wrapper


def emit(payload: dict, as_json: bool, text: str) -> None:
    click.echo(json.dumps(payload, indent=2, sort_keys=True) if as_json else text)


def _splitting(path: str) -> SplittingInput:
    model = load_input(path)
    if not isinstance(model, SplittingInput):
        raise InputParseError(f"{path} does not describe a splitting (needs 'genus' and 'matrix')")
    return model


def _linked_group(path: str) -> LinkedGroup:
    model = load_input(path)
    if isinstance(model, SplittingInput):
        return linking_from_normal_form(partial_normal_form(model.to_symplectic()))
    if isinstance(model, LinkedGroupInput):
        return model.to_linked_group()
    raise InputParseError(f"{path} describes neither a splitting nor a linked group")


def _two_component(path: str):
    component = next((c for c in primary_decompose(_linked_group(path)) if c.prime == 2), None)
    if component is None:
        raise InputParseError(f"{path}: the linked group has no 2-torsion")
    return component


json_option = click.option("--json", "as_json", is_flag=True, help="Emit machine-readable JSON.")


@click.group()
@click.option("--debug", is_flag=True, default=HEEGAARD_DEBUG, help="Log pipeline stages to stderr.")
def cli(debug: bool):
    """Classify symplectic Heegaard splittings and linked abelian groups."""
    configure_logging(debug)


@cli.command("analyze")
@click.argument("path", type=click.Path())
@json_option
@handle_errors
def analyze_command(path: str, as_json: bool):
    """Full invariant report of a splitting or linked-group file."""
    report = analyze(load_input(path))
    click.echo(report.model_dump_json(indent=2) if as_json else render_text(report))


@cli.command("compare")
@click.argument("first", type=click.Path())
@click.argument("second", type=click.Path())
@click.option("--stable", "mode", flag_value="stable", default=True, help="Decide stable equivalence (default).")
@click.option("--minimal", "mode", flag_value="minimal", help="Decide equivalence of minimal splittings.")
@json_option
@handle_errors
def compare_command(first: str, second: str, mode: str, as_json: bool):
    """Compare two inputs; exit 0 if equivalent, 1 if not."""
    report = compare(load_input(first), load_input(second), mode)
    click.echo(report.model_dump_json(indent=2) if as_json else render_text(report))
    if not report.comparison.equivalent:
        sys.exit(EXIT_INEQUIVALENT)


@cli.command("snf")
@click.argument("path", type=click.Path())
@json_option
@handle_errors
def snf_command(path: str, as_json: bool):
    """Smith normal form U P V = D of the matrix in a file."""
    model = load_input(path)
    if not isinstance(model, MatrixInput):
        raise InputParseError(f"{path} has no 'matrix'")
    snf = smith_normal_form(model.to_matrix())
    payload = {"diagonal": list(snf.diag), "U": snf.U.tolist(), "V": snf.V.tolist(), "D": snf.D.tolist()}
    text = "\n".join([f"diagonal: {list(snf.diag)}", "U:", str(snf.U), "V:", str(snf.V)])
    emit(payload, as_json, text)


@cli.command("normalize")
@click.argument("path", type=click.Path())
@json_option
@handle_errors
def normalize_command(path: str, as_json: bool):
    """Partial normal form with its handlebody witnesses."""
    nf = partial_normal_form(_splitting(path).to_symplectic())
    payload = {
        "stab_index": nf.stab_index,
        "tau": list(nf.tau),
        "free_rank": nf.r,
        "normalized": nf.normalized.matrix.tolist(),
        "left": nf.left.matrix.tolist(),
        "right": nf.right.matrix.tolist(),
    }
    text = "\n".join(
        [
            f"stabilization index: {nf.stab_index}",
            f"tau: {list(nf.tau)}",
            f"free rank: {nf.r}",
            "normalized:",
            str(nf.normalized),
            "left witness:",
            str(nf.left),
            "right witness:",
            str(nf.right),
        ]
    )
    emit(payload, as_json, text)


@cli.command("phase")
@click.argument("path", type=click.Path())
@click.option("--cross-check", is_flag=True, help="Recompute every phase from brute-force Gauss sums.")
@json_option
@handle_errors
def phase_command(path: str, cross_check: bool, as_json: bool):
    """Phase vector of the 2-primary linking."""
    vector = phase_vector(_two_component(path), cross_check=cross_check)
    emit({"degree": vector.degree, "phase_vector": vector.as_strings()}, as_json, str(vector))


@cli.command("wall")
@click.argument("path", type=click.Path())
@json_option
@handle_errors
def wall_command(path: str, as_json: bool):
    """Wall decomposition of the 2-primary linking and its witness."""
    decomposition = wall_decompose(_two_component(path))
    summands = [str(form) for form in decomposition.summands]
    payload = {"summands": summands, "witness": decomposition.witness.tolist()}
    emit(payload, as_json, "\n".join(["summands: " + " + ".join(summands), "witness:", str(decomposition.witness)]))


@cli.command("gauss")
@click.argument("path", type=click.Path())
@click.option("--k", "k", type=int, required=True, help="Index of the Gauss sum Gamma_k.")
@click.option("--brute", is_flag=True, help="Also sum over every element.")
@json_option
@handle_errors
def gauss_command(path: str, k: int, brute: bool, as_json: bool):
    """Gauss sum Gamma_k of the 2-primary linking, exactly."""
    component = _two_component(path)
    gamma = gauss_sum_closed_form(wall_decompose(component).summands, k)
    phase = phase_from_gauss_sum(gamma)
    payload = {"k": k, "gamma": str(gamma), "phase": "inf" if phase == float("inf") else phase}
    lines = [f"Gamma_{k} = {gamma}", f"phase: {payload['phase']}"]
    if brute:
        brute_gamma = gauss_sum_bruteforce(component, k)
        payload["agrees_with_bruteforce"] = brute_gamma == gamma
        lines.append(f"brute force agrees: {brute_gamma == gamma}")
    emit(payload, as_json, "\n".join(lines))


@cli.command("count-classes")
@click.argument("path", type=click.Path())
@json_option
@handle_errors
def count_classes_command(path: str, as_json: bool):
    """Number of minimal splittings sharing this linked quotient."""
    G = _linked_group(path)
    count = class_count(G)
    payload = {"class_count": count}
    lines = [f"minimal classes: {count}"]
    if G.torsion:
        payload.update(tau=G.torsion[0], tau_bar=tau_bar(G), det_values=realized_det_values(G))
        lines.append(f"tau: {G.torsion[0]}, tau_bar: {payload['tau_bar']}")
        lines.append(f"determinant values: {payload['det_values']}")
    emit(payload, as_json, "\n".join(lines))


@cli.command("selftest")
@click.option("--max-size", type=int, default=None, help="Largest torsion group exercised.")
@click.option("--seed", type=int, default=None, help="Seed for every randomized check.")
@click.option("--cases", type=int, default=None, help="Random cases per check.")
def selftest_command(max_size, seed, cases):
    """Run the randomized oracle checks; exit 1 on any failure."""
    summary = run_selftest(max_size=max_size, seed=seed, cases=cases)
    click.echo("\n".join(summary.lines()))
    if not summary.passed:
        sys.exit(1)


@cli.command("lens")
@click.argument("parameters", nargs=-1, type=int, required=True)
@click.option("--name", default=None, help="Name recorded in the generated file.")
@handle_errors
def lens_command(parameters, name):
    """Splitting file of a lens space or a connected sum of lens spaces."""
    if len(parameters) % 2:
        raise InputParseError("lens parameters come in pairs p q")
    pairs = list(zip(parameters[::2], parameters[1::2]))
    try:
        H = lens_sum_matrix(pairs)
    except ValueError as e:
        raise InputParseError(str(e))
    click.echo(SplittingInput.from_symplectic(H, name=name).to_yaml(), nl=False)


def main():
    cli()


if __name__ == "__main__":
    main()
