#!/usr/bin/env python3
"""Starting point for the judge evaluation command line."""


import argparse
import logging
import sys
from collections.abc import Callable, Sequence

from analysis.outlier import OutlierMode
from analysis.stats import Alternative, GroupBy
from analysis.variability import DEFAULT_BIN_WIDTH
from cli import (
    cmd_compare,
    cmd_fit,
    cmd_outliers,
    cmd_report,
    cmd_score,
    cmd_simulate,
    cmd_synth,
)
from model import DEFAULT_FLOOR, DatasetError, JudgingError
from ranking import DEFAULT_N_JUDGES, DEFAULT_SEED

COMMANDS: dict[str, Callable[[argparse.Namespace], int]] = {
    "fit": cmd_fit,
    "score": cmd_score,
    "outliers": cmd_outliers,
    "simulate": cmd_simulate,
    "compare": cmd_compare,
    "synth": cmd_synth,
    "report": cmd_report,
}


def get_args(argv: Sequence[str] | None = None) -> argparse.Namespace:
    """Get command line arguments."""
    parser = argparse.ArgumentParser(
        description="Evaluate the accuracy of gymnastics judges"
    )
    parser.add_argument(
        "--verbose", action="store_true", help="Log progress to stderr"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    dataset = argparse.ArgumentParser(add_help=False)
    dataset.add_argument("--input", required=True, help="Mark dataset CSV")
    dataset.add_argument(
        "--scope",
        choices=["apparatus", "discipline"],
        default="apparatus",
        help="Level the variability models are fitted at",
    )
    dataset.add_argument(
        "--exclude-aborted",
        action=argparse.BooleanOptionalAction,
        default=None,
        help="Leave out aborted routines (default: trampoline only)",
    )

    output = argparse.ArgumentParser(add_help=False)
    output.add_argument(
        "--out-dir", default="out", help="Directory for the written files"
    )

    models = argparse.ArgumentParser(add_help=False)
    models.add_argument(
        "--models-dir", default="models", help="Directory of the model files"
    )

    mode = argparse.ArgumentParser(add_help=False)
    mode.add_argument(
        "--mode",
        choices=[item.value for item in OutlierMode],
        default=OutlierMode.SCALED.value,
        help="Outlier threshold mode",
    )

    alternative = argparse.ArgumentParser(add_help=False)
    alternative.add_argument(
        "--alternative",
        choices=[item.value for item in Alternative],
        default=Alternative.TWO_SIDED.value,
        help="Alternative hypothesis of the Welch test",
    )

    seed = argparse.ArgumentParser(add_help=False)
    seed.add_argument("--seed", type=int, default=None, help="Random seed")

    fit = commands.add_parser(
        "fit", parents=[dataset, models, output], help="Fit variability models"
    )
    fit.add_argument("--bin-width", type=float, default=DEFAULT_BIN_WIDTH)
    fit.add_argument("--floor", type=float, default=DEFAULT_FLOOR)

    score = commands.add_parser(
        "score", parents=[dataset, models, output], help="Score every judge"
    )
    score.add_argument("--labels", help="JSON table of [bound, label] pairs")

    outliers = commands.add_parser(
        "outliers",
        parents=[dataset, models, output, mode],
        help="Flag outlier marks",
    )
    outliers.add_argument(
        "--leave-one-out",
        action="store_true",
        help="Score each competition against the judge's other competitions",
    )

    simulate = commands.add_parser(
        "simulate", parents=[output, seed], help="Run the synthetic-judge study"
    )
    simulate.add_argument("--model", required=True, help="Model JSON file")
    simulate.add_argument("--controls", help="CSV of control scores")
    simulate.add_argument("--n-judges", type=int, default=DEFAULT_N_JUDGES)

    compare = commands.add_parser(
        "compare",
        parents=[dataset, models, output, alternative],
        help="Compare marking scores between judge groups",
    )
    compare.add_argument(
        "--group-by",
        choices=[item.value for item in GroupBy],
        default=GroupBy.ROLE.value,
    )

    synth = commands.add_parser(
        "synth", parents=[output, seed], help="Generate a synthetic dataset"
    )
    synth.add_argument("--spec", required=True, help="Generator spec JSON")

    commands.add_parser(
        "report",
        parents=[dataset, models, output, mode, alternative],
        help="Write the consolidated report",
    )

    args = parser.parse_args(argv)
    if args.command == "simulate":
        if args.seed is None:
            args.seed = DEFAULT_SEED
        if args.n_judges < 1:
            parser.error(f"--n-judges must be positive, got {args.n_judges}")
    if getattr(args, "bin_width", 1.0) <= 0:
        parser.error(f"--bin-width must be positive, got {args.bin_width}")
    if getattr(args, "floor", 1.0) <= 0:
        parser.error(f"--floor must be positive, got {args.floor}")
    return args


def main(argv: Sequence[str] | None = None) -> int:
    """Run the requested command and return its exit status."""
    args = get_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return COMMANDS[args.command](args)
    except DatasetError as e:
        for entry in e.report.errors:
            print(entry, file=sys.stderr)
        print(f"Invalid dataset: {e}", file=sys.stderr)
    except (JudgingError, OSError) as e:
        print(f"Error: {e}", file=sys.stderr)
    return 1


if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt as e:
        print(f"Exiting due to interrupt: {e}", file=sys.stderr)
        sys.exit(130)
