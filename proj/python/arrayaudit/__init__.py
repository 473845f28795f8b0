"""Python access to the arrayaudit checks.

The heavy lifting lives in the compiled ``_arrayaudit`` module; this package
only re-exports it and adds a JSON-decoding convenience.
"""

import json

from ._arrayaudit import (
    REPORT_SCHEMA_VERSION,
    AuditError,
    __version__,
    auc,
    check_types,
    codes,
    duplicate_columns,
    explain,
    run_audit,
    validate_manifest,
    validate_report,
)


def audit(manifest):
    """Run a manifest and return (exit_code, decoded report)."""
    run = run_audit(manifest)
    return run["exit_code"], json.loads(run["report"])


__all__ = [
    "REPORT_SCHEMA_VERSION",
    "AuditError",
    "__version__",
    "audit",
    "auc",
    "check_types",
    "codes",
    "duplicate_columns",
    "explain",
    "run_audit",
    "validate_manifest",
    "validate_report",
]
