# -*- coding: UTF-8 -*-
"""
tractorholonomy.reports
~~~~~~~~~~~~~~~~~~~~~~~

JSON reports and the summary table.

Reports are written with sorted keys and without timestamps so that the
same configuration and seed give byte-identical files.

:author: Wannes Meert
:copyright: Copyright 2017-2025 KU Leuven, DTAI Research Group.
:license: Apache License, Version 2.0, see LICENSE for details.

"""
import json
import math
import logging
from enum import Enum
from fractions import Fraction

import numpy as np

from . import __version__
from .util import prepare_directory


logger = logging.getLogger("be.kuleuven.dtai.tractorholonomy")

schema_version = 1


class Status:
    OK = "ok"
    MISMATCH = "mismatch"
    UNCHECKED = "unchecked"
    SPEC_ERROR = "spec_error"
    NUMERICAL_FAILURE = "numerical_failure"


def to_jsonable(obj):
    """Convert numpy values, fractions and enums into plain JSON types."""
    if isinstance(obj, dict):
        return {str(k.value if isinstance(k, Enum) else k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, Fraction):
        return {"exact": str(obj), "float": float(obj)}
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        if math.isnan(value) or math.isinf(value):
            return str(value)
        return value
    if hasattr(obj, "to_json"):
        return to_jsonable(obj.to_json())
    return obj


def dumps(content):
    return json.dumps(to_jsonable(content), indent=2, sort_keys=True) + "\n"


def _matches(actual, expected):
    if isinstance(actual, dict) and "exact" in actual:
        if isinstance(expected, str):
            return actual["exact"] == expected
        return _matches(actual["float"], expected)
    if isinstance(expected, bool) or isinstance(actual, bool):
        return actual is expected
    if isinstance(expected, (int, float)) and isinstance(actual, (int, float)):
        if isinstance(expected, int) and isinstance(actual, int):
            return actual == expected
        return abs(actual - expected) <= 1e-9 * max(1.0, abs(expected))
    if isinstance(expected, list) and isinstance(actual, list):
        return sorted(map(str, actual)) == sorted(map(str, expected))
    return actual == expected


def check_expectations(verdicts, expected):
    """Compare the verdicts of one analysis with its ``expect`` table.

    :return: List of mismatches, each with key, expected and actual value
    """
    verdicts = to_jsonable(verdicts)
    mismatches = []
    for key in sorted(expected):
        actual = verdicts.get(key)
        if key not in verdicts or not _matches(actual, expected[key]):
            mismatches.append({"key": key, "expected": expected[key], "actual": actual})
    return mismatches


class AnalysisReport:
    def __init__(self, analysis, config, verdicts=None, details=None, error=None, expected=None):
        """Outcome of one analysis.

        :param verdicts: Flat dict of values that an ``expect`` table can check
        :param details: Everything else, residuals and thresholds included
        :param error: Exception that ended the analysis, if any
        """
        self.analysis = analysis
        self.config = config
        self.verdicts = {} if verdicts is None else verdicts
        self.details = {} if details is None else details
        self.error = error
        self.expected = {} if expected is None else expected
        self.mismatches = []
        self.status = self._status()

    def _status(self):
        from .exceptions import SpecError, NumericalFailure
        if isinstance(self.error, SpecError):
            return Status.SPEC_ERROR
        if isinstance(self.error, NumericalFailure):
            return Status.NUMERICAL_FAILURE
        verdicts = dict(self.verdicts)
        if self.error is not None:
            verdicts["error"] = self.error.__class__.__name__
        if not self.expected:
            return Status.UNCHECKED
        self.mismatches = check_expectations(verdicts, self.expected)
        return Status.MISMATCH if self.mismatches else Status.OK

    def to_json(self):
        return {"schema": schema_version, "version": __version__, "analysis": self.analysis,
                "config": self.config, "status": self.status, "verdicts": self.verdicts,
                "details": self.details, "expect": self.expected, "mismatches": self.mismatches,
                "error": None if self.error is None else self.error.to_json()}


def summary_json(reports, config):
    return {"schema": schema_version, "version": __version__, "config": config,
            "analyses": [{"analysis": r.analysis, "status": r.status,
                          "verdicts": r.verdicts, "mismatches": r.mismatches,
                          "error": None if r.error is None else r.error.to_json()} for r in reports],
            "exit_code": exit_code(reports)}


def exit_code(reports):
    """0 all as expected, 1 a verdict mismatch, 2 a spec error, 3 a numerical failure."""
    statuses = [r.status for r in reports]
    if Status.SPEC_ERROR in statuses:
        return 2
    if Status.NUMERICAL_FAILURE in statuses:
        return 3
    if Status.MISMATCH in statuses:
        return 1
    return 0


def _short(value):
    value = to_jsonable(value)
    if isinstance(value, dict) and "exact" in value:
        return value["exact"]
    if isinstance(value, float):
        return f"{value:.3g}"
    if isinstance(value, list):
        return "[" + ", ".join(_short(v) for v in value) + "]"
    return str(value)


def summary_table(reports):
    """Plain text table with one line per analysis."""
    rows = [("analysis", "status", "verdicts")]
    for r in reports:
        verdicts = ", ".join(f"{k}={_short(v)}" for k, v in sorted(r.verdicts.items()))
        if r.error is not None:
            verdicts = f"{r.error.__class__.__name__}: {r.error}" + (f"; {verdicts}" if verdicts else "")
        rows.append((r.analysis, r.status, verdicts))
    w0 = max(len(row[0]) for row in rows)
    w1 = max(len(row[1]) for row in rows)
    lines = [f"{row[0]:<{w0}}  {row[1]:<{w1}}  {row[2]}" for row in rows]
    lines.insert(1, "-" * (w0 + w1 + 4 + max(len(row[2]) for row in rows)))
    return "\n".join(lines)


def write_reports(reports, config, directory=None):
    """Write one ``<analysis>.json`` per report and ``summary.json``.

    :return: Path of the output directory
    """
    directory = prepare_directory(directory)
    for r in reports:
        with (directory / f"{r.analysis}.json").open("w") as ofile:
            ofile.write(dumps(r.to_json()))
    with (directory / "summary.json").open("w") as ofile:
        ofile.write(dumps(summary_json(reports, config)))
    logger.info(f"Wrote {len(reports)} reports to {directory}")
    return directory
