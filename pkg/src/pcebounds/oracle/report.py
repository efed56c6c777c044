"""Text and JSON forms of verification reports.

Both forms depend only on the seed and trial count of a run, never on
timing, so equal seeds give byte-identical files.
"""
import json
from pathlib import Path

TEXT_NAME = "verify_report.txt"
JSON_NAME = "verify_report.json"


def format_report_text(report):
    """A plain-text table of the suites, followed by the violations.

    :param report: The verification report.
    :type report: :class:`~pcebounds.oracle.suites.SuiteReport`

    :rtype: str
    """
    lines = [f"seed: {report.seed}", f"trials: {report.trials}", "",
             f"{'suite':<12} {'checks':>8} {'violations':>10}"]

    for suite in report.suites:
        lines.append(f"{suite.name:<12} {suite.checks:>8} "
                     f"{len(suite.violations):>10}")

    total = sum(suite.checks for suite in report.suites)
    lines.append(f"{'total':<12} {total:>8} {report.violations:>10}")

    for suite in report.suites:
        for message in suite.violations:
            lines.append(f"VIOLATION {suite.name}: {message}")

    lines.append("PASS" if report.ok else "FAIL")

    return "\n".join(lines) + "\n"


def report_to_json(report):
    """The report as a JSON document with sorted keys.

    :rtype: str
    """
    document = {
        "seed": report.seed,
        "trials": report.trials,
        "violations": report.violations,
        "passed": report.ok,
        "suites": [{"name": suite.name,
                    "trials": suite.trials,
                    "checks": suite.checks,
                    "violations": list(suite.violations)}
                   for suite in report.suites],
    }

    return json.dumps(document, indent=2, sort_keys=True) + "\n"


def write_report(report, out_dir):
    """Write both forms of a report into a directory.

    :return: The paths written.
    :rtype: tuple[:class:`pathlib.Path`, :class:`pathlib.Path`]
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    text_path = out_dir / TEXT_NAME
    json_path = out_dir / JSON_NAME
    text_path.write_text(format_report_text(report), encoding="utf-8")
    json_path.write_text(report_to_json(report), encoding="utf-8")

    return text_path, json_path
