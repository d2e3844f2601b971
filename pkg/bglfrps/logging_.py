"""Run log of fit results."""

import json
import uuid
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Optional

from .config import get_home
from .fitting import FitReport
from .gof import GofReport
from .report import fit_report_to_dict


def _logs_dir() -> Path:
    return get_home() / "logs"


def log_fit_result(
    report: FitReport,
    gof: Optional[GofReport],
    command: str,
    context: Optional[dict[str, Any]] = None,
) -> Optional[str]:
    """
    Append one fit to today's JSONL log.

    Args:
        report: The fit
        gof: Its goodness-of-fit statistics, if computed
        command: CLI command that produced the fit
        context: Extra fields such as the data source

    Returns:
        The run id, or None if the entry could not be written
    """
    run_id = str(uuid.uuid4())
    entry = {
        "ts": datetime.now(timezone.utc).isoformat().replace("+00:00", "Z"),
        "run_id": run_id,
        "command": command,
        "context": context or {},
        **fit_report_to_dict(report, gof),
    }
    # the trace can be thousands of iterates long
    entry["loglik_trace_length"] = len(entry.pop("loglik_trace"))

    try:
        _log_locally(entry)
    except (OSError, TypeError, ValueError) as e:
        # Logging failures should not abort a fit
        print(f"Warning: run log not written: {e}")
        return None
    return run_id


def _log_locally(log_entry: dict[str, Any]) -> None:
    """Log entry to local JSONL file."""
    logs_dir = _logs_dir()
    logs_dir.mkdir(parents=True, exist_ok=True)

    today = datetime.now(timezone.utc).strftime("%Y-%m-%d")
    log_file = logs_dir / f"{today}.jsonl"

    with open(log_file, "a", encoding="utf-8") as f:
        f.write(json.dumps(log_entry) + "\n")


def get_recent_logs(n: int = 20) -> list[dict[str, Any]]:
    """
    Get recent log entries from local files.

    Args:
        n: Number of entries to return

    Returns:
        List of log entries (most recent first)
    """
    logs_dir = _logs_dir()
    if not logs_dir.exists():
        return []

    entries = []
    for log_file in sorted(logs_dir.glob("*.jsonl"), reverse=True):
        try:
            with open(log_file, encoding="utf-8") as f:
                for line in f:
                    line = line.strip()
                    if not line:
                        continue
                    try:
                        entries.append(json.loads(line))
                    except json.JSONDecodeError:
                        continue
        except OSError:
            continue

    entries.sort(key=lambda x: x.get("ts", ""), reverse=True)
    return entries[:n]


def clear_logs() -> int:
    """Remove all local log files and return how many were removed."""
    removed = 0
    logs_dir = _logs_dir()
    if logs_dir.exists():
        for log_file in logs_dir.glob("*.jsonl"):
            try:
                log_file.unlink()
                removed += 1
            except OSError:
                pass
    return removed
