"""Verification reports and their deterministic aggregation.

Every verifier returns a plain dict with the same four counters plus a
list of counterexample witnesses, so reports can be merged, serialized
and compared byte-for-byte across runs.
"""

from __future__ import annotations

import json

REPORT_SCHEMA = {
    "type": "object",
    "required": ["suite", "instances", "passed", "skipped",
                 "counterexamples"],
    "properties": {
        "suite": {"type": "string"},
        "instances": {"type": "integer", "minimum": 0},
        "passed": {"type": "integer", "minimum": 0},
        "skipped": {"type": "integer", "minimum": 0},
        "counterexamples": {"type": "array"},
    },
    "additionalProperties": False,
}


def report(suite, instances, passed, skipped, counterexamples):
    return {
        "suite": suite,
        "instances": instances,
        "passed": passed,
        "skipped": skipped,
        "counterexamples": list(counterexamples),
    }


def is_pass(rep):
    """A report passes when nothing failed; skipped instances are fine."""
    return (not rep["counterexamples"]
            and rep["passed"] + rep["skipped"] == rep["instances"])


def merge(reports):
    """Combine same-suite reports; counterexamples are sorted for
    order-independent aggregation."""
    reports = list(reports)
    if not reports:
        raise ValueError("nothing to merge")
    suite = reports[0]["suite"]
    if any(r["suite"] != suite for r in reports):
        raise ValueError("cannot merge reports of different suites")
    ces = [ce for r in reports for ce in r["counterexamples"]]
    ces.sort(key=lambda ce: json.dumps(ce, sort_keys=True))
    return report(suite,
                  sum(r["instances"] for r in reports),
                  sum(r["passed"] for r in reports),
                  sum(r["skipped"] for r in reports),
                  ces)


def validate(rep):
    import jsonschema

    jsonschema.validate(rep, REPORT_SCHEMA)
    if rep["passed"] + rep["skipped"] > rep["instances"]:
        raise ValueError("report counters exceed instance count")


def dumps(obj):
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"
