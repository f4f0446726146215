# -*- coding: UTF-8 -*-
"""
tractorholonomy.cli
~~~~~~~~~~~~~~~~~~~

Command line interface.

::

    tractorholonomy run <config.toml> [--seed N] [--out DIR] [--json-only] [--tol-scale F] [-v]
    tractorholonomy list-families [--json]
    tractorholonomy validate <config.toml>

Exit codes of ``run``: 0 when every verdict is as expected, 1 for a verdict
mismatch, 2 for a usage or spec error and 3 for a numerical failure.

:author: Wannes Meert
:copyright: Copyright 2017-2025 KU Leuven, DTAI Research Group.
:license: Apache License, Version 2.0, see LICENSE for details.

"""
import sys
import json
import logging
import argparse

import numpy as np

from . import __version__
from .analyses import RunContext, run_analysis, check_applicable, check_analysis
from .config import Analysis, RunConfig
from .exceptions import TractorHolonomyException, NumericalFailure, SpecError
from .holonomy import HolonomySettings
from .reports import AnalysisReport, write_reports, summary_table, exit_code, to_jsonable
from .spacetimes.spec import catalog
from .util import Tolerances


logger = logging.getLogger("be.kuleuven.dtai.tractorholonomy")


def run(config, output_path=None, json_only=False, stream=None):
    """Run every analysis of a configuration and write the reports.

    Errors of one analysis end up in its report; the other analyses still run.

    :param config: RunConfig
    :param output_path: Directory for the reports, default ``config.output_path``
    :param json_only: Do not print the summary table
    :return: Tuple (exit code, list of AnalysisReport, output directory)
    """
    stream = sys.stdout if stream is None else stream
    ctx = RunContext(config)
    resolved = config.to_dict()
    reports = []
    for analysis in config.analyses:
        expected = config.expect.get(analysis.value, {})
        try:
            if config.spec is not None:
                check_analysis(analysis, config.spec)
            verdicts, details = run_analysis(ctx, analysis)
            report = AnalysisReport(analysis.value, resolved, verdicts, details, expected=expected)
        except np.linalg.LinAlgError as exc:
            report = AnalysisReport(analysis.value, resolved, error=NumericalFailure(f"Linear algebra: {exc}"),
                                    expected=expected)
        except TractorHolonomyException as exc:
            logger.info(f"{analysis.value} ended with {exc.__class__.__name__}: {exc}")
            report = AnalysisReport(analysis.value, resolved, error=exc, expected=expected)
        reports.append(report)
    directory = write_reports(reports, resolved, output_path if output_path is not None else config.output_path)
    if not json_only:
        print(summary_table(reports), file=stream)
    return exit_code(reports), reports, directory


def validate(config):
    """All configuration and spec checks, without running an analysis.

    :param config: Path of a TOML file, a dict or a RunConfig
    :return: List of diagnostics (JSON error objects), empty when valid
    """
    diagnostics = []
    try:
        if isinstance(config, dict):
            config = RunConfig.from_dict(config)
        elif not isinstance(config, RunConfig):
            config = RunConfig.load(config)
        check_applicable(config)
        if config.spec is not None:
            config.spec.validate()
    except TractorHolonomyException as exc:
        diagnostics.append(exc.to_json())
    return diagnostics


def list_families():
    """Catalog of families with their parameters, the analyses and the defaults."""
    return {"families": catalog(),
            "analyses": [a.value for a in Analysis],
            "defaults": {"tolerances": Tolerances().kwargs(), "holonomy": HolonomySettings().to_json(),
                         "seed": 0, "sample_points": 20}}


def _print_catalog(result, stream):
    for family, params in result["families"].items():
        print(family, file=stream)
        for key, entry in params.items():
            print(f"  {key} ({entry['type']}, default {entry['default']}): {entry['description']}", file=stream)
    print("analyses: " + ", ".join(result["analyses"]), file=stream)


def _set_verbosity(verbose):
    if verbose > 0:
        logging.basicConfig(level=logging.DEBUG if verbose > 1 else logging.INFO, stream=sys.stderr,
                            format="%(levelname)s %(name)s: %(message)s")


def _error(exc, stream):
    print(json.dumps(exc.to_json(), sort_keys=True), file=stream)


def main(argv=None):
    parser = argparse.ArgumentParser(prog="tractorholonomy",
                                     description="Tractor calculus and holonomy verification of metrics")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="Run the analyses of a configuration")
    p_run.add_argument("config", help="TOML configuration file")
    p_run.add_argument("--seed", type=int, help="Override the seed of the configuration")
    p_run.add_argument("--out", help="Output directory for the reports")
    p_run.add_argument("--json-only", action="store_true", help="Only write the JSON reports")
    p_run.add_argument("--tol-scale", type=float, help="Multiply every tolerance by this factor")
    p_run.add_argument("--verbose", "-v", action="count", default=0, help="Verbose output")

    p_list = sub.add_parser("list-families", help="Families, parameters and analyses")
    p_list.add_argument("--json", action="store_true", help="Print as JSON")

    p_validate = sub.add_parser("validate", help="Check a configuration without running it")
    p_validate.add_argument("config", help="TOML configuration file")
    p_validate.add_argument("--verbose", "-v", action="count", default=0, help="Verbose output")

    args = parser.parse_args(argv)
    _set_verbosity(getattr(args, "verbose", 0))

    if args.command == "list-families":
        result = list_families()
        if args.json:
            print(json.dumps(to_jsonable(result), indent=2, sort_keys=True))
        else:
            _print_catalog(result, sys.stdout)
        return 0

    if args.command == "validate":
        diagnostics = validate(args.config)
        print(json.dumps({"valid": not diagnostics, "diagnostics": diagnostics}, indent=2, sort_keys=True))
        return 0 if not diagnostics else 2

    try:
        config = RunConfig.load(args.config).with_overrides(seed=args.seed, tol_scale=args.tol_scale)
        check_applicable(config)
    except SpecError as exc:
        _error(exc, sys.stderr)
        return 2
    code, _, directory = run(config, output_path=args.out, json_only=args.json_only)
    logger.info(f"Reports in {directory}, exit code {code}")
    return code


if __name__ == "__main__":
    sys.exit(main())
