"""
Run event logger for phaseBits.

Emits one structured line per event to standard error, never to the data
stream, and optionally records the event in the results store.
"""

import json
import logging
import sys
from datetime import datetime
from typing import Any, Dict, List, Optional

from config import APP_NAME, LoggingConfig


class RunSeverity:
    """Severity levels for run events."""

    INFO = "INFO"
    WARNING = "WARNING"
    CRITICAL = "CRITICAL"


class RunCategory:
    """Categories for run events."""

    COMPUTATION = "COMPUTATION"
    VALIDATION = "VALIDATION"
    NUMERICS = "NUMERICS"
    STORAGE = "STORAGE"
    SYSTEM = "SYSTEM"


class RunEventType:
    """Event types for run logging."""

    # Command lifecycle
    COMMAND_STARTED = "COMMAND_STARTED"
    COMMAND_FINISHED = "COMMAND_FINISHED"
    PROGRESS = "PROGRESS"

    # Input problems
    VALIDATION_FAILED = "VALIDATION_FAILED"

    # Numerical findings
    BUDGET_EXHAUSTED = "BUDGET_EXHAUSTED"
    CLOSED_FORM_DEFECT = "CLOSED_FORM_DEFECT"
    OUT_OF_REGIME = "OUT_OF_REGIME"
    NOT_CONVERGED = "NOT_CONVERGED"

    # Cache
    CACHE_HIT = "CACHE_HIT"
    CACHE_STORED = "CACHE_STORED"

    # Output
    OUTPUT_WRITTEN = "OUTPUT_WRITTEN"


_LEVELS = {
    RunSeverity.INFO: logging.INFO,
    RunSeverity.WARNING: logging.WARNING,
    RunSeverity.CRITICAL: logging.CRITICAL,
}


def configure_logging(level: str = LoggingConfig.DEFAULT_LEVEL) -> logging.Logger:
    """Attach a stderr handler to the application logger, replacing an earlier one."""
    logger = logging.getLogger(APP_NAME)
    for old in [h for h in logger.handlers if getattr(h, "_phasebits", False)]:
        logger.removeHandler(old)
    # Bound to the current stderr, which test runners swap between invocations
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LoggingConfig.LOG_FORMAT))
    handler._phasebits = True
    logger.addHandler(handler)
    logger.setLevel(level)
    return logger


class RunLogger:
    """
    Records the events of one command run.

    Every event is kept in memory (events), written as a log line to standard
    error and, when a results store is attached, saved with it.
    """

    def __init__(self, store=None, command: Optional[str] = None):
        """
        Initialize the RunLogger.

        Args:
            store: Optional ResultsStore receiving a copy of every event
            command: Name of the command being run
        """
        self.store = store
        self.command = command
        self.events: List[Dict[str, Any]] = []
        self.logger = logging.getLogger(f"{APP_NAME}.run")

    def _log_event(
        self,
        event_type: str,
        category: str,
        description: str,
        severity: str,
        metadata: Optional[Dict[str, Any]] = None,
    ) -> bool:
        """
        Record an event.

        Args:
            event_type: Type of event (from RunEventType)
            category: Category of event (from RunCategory)
            description: Human-readable description of the event
            severity: Severity level (from RunSeverity)
            metadata: Additional event data

        Returns:
            bool: True if the event was recorded everywhere it should be
        """
        event = {
            "timestamp": datetime.now().isoformat(),
            "command": self.command,
            "event_type": event_type,
            "category": category,
            "severity": severity,
            "description": description,
            "metadata": metadata or {},
        }
        self.events.append(event)
        try:
            metadata_json = json.dumps(metadata, sort_keys=True, default=str) if metadata else "{}"
        except (TypeError, ValueError):
            metadata_json = "{}"
        self.logger.log(
            _LEVELS.get(severity, logging.INFO),
            "%s [%s] %s %s", event_type, category, description, metadata_json,
        )
        if self.store is None:
            return True
        try:
            return self.store.record_event(
                command=self.command,
                event_type=event_type,
                category=category,
                severity=severity,
                description=description,
                metadata=metadata_json,
            )
        except Exception as e:
            self.logger.error("Error storing run event: %s", e)
            return False

    def of_type(self, event_type: str) -> List[Dict[str, Any]]:
        """All recorded events of one type."""
        return [e for e in self.events if e["event_type"] == event_type]

    # Command lifecycle

    def log_command_started(self, parameters: Dict[str, Any]) -> bool:
        return self._log_event(
            event_type=RunEventType.COMMAND_STARTED,
            category=RunCategory.SYSTEM,
            description=f"Command '{self.command}' started",
            severity=RunSeverity.INFO,
            metadata=parameters,
        )

    def log_command_finished(self, rows: int) -> bool:
        return self._log_event(
            event_type=RunEventType.COMMAND_FINISHED,
            category=RunCategory.SYSTEM,
            description=f"Command '{self.command}' finished with {rows} rows",
            severity=RunSeverity.INFO,
            metadata={"rows": rows},
        )

    def log_progress(self, done: int, total: int, label: str = "") -> bool:
        """
        Log a progress checkpoint of a long command.

        Args:
            done: Units of work finished
            total: Units of work in the run
            label: What was just finished
        """
        description = f"{done}/{total}"
        if label:
            description += f" ({label})"
        return self._log_event(
            event_type=RunEventType.PROGRESS,
            category=RunCategory.COMPUTATION,
            description=description,
            severity=RunSeverity.INFO,
            metadata={"done": done, "total": total},
        )

    # Input problems

    def log_validation_failed(self, message: str) -> bool:
        return self._log_event(
            event_type=RunEventType.VALIDATION_FAILED,
            category=RunCategory.VALIDATION,
            description=message,
            severity=RunSeverity.WARNING,
        )

    # Numerical findings

    def log_budget_exhausted(self, message: str, partial_value: float, error_estimate: float) -> bool:
        return self._log_event(
            event_type=RunEventType.BUDGET_EXHAUSTED,
            category=RunCategory.NUMERICS,
            description=message,
            severity=RunSeverity.CRITICAL,
            metadata={"partial_value": partial_value, "error_estimate": error_estimate},
        )

    def log_closed_form_defect(self, N: int, dphi: float, dtheta: float, defect: float) -> bool:
        """
        Log a disagreement between a typeset closed form and the direct sum.

        Args:
            N: Number of resources
            dphi: First offset in turns
            dtheta: Second offset in turns
            defect: Relative discrepancy
        """
        return self._log_event(
            event_type=RunEventType.CLOSED_FORM_DEFECT,
            category=RunCategory.NUMERICS,
            description=f"Typeset two-phase closed form differs from the direct sum by {defect:.3g}",
            severity=RunSeverity.WARNING,
            metadata={"N": N, "dphi": dphi, "dtheta": dtheta, "relative_defect": defect},
        )

    def log_out_of_regime(self, quantity: str, k: int, N: int, value: float) -> bool:
        return self._log_event(
            event_type=RunEventType.OUT_OF_REGIME,
            category=RunCategory.NUMERICS,
            description=f"{quantity} for k={k}, N={N} is outside its asymptotic regime",
            severity=RunSeverity.WARNING,
            metadata={"k": k, "N": N, "value": value},
        )

    def log_not_converged(self, k: int, N: int, best_mi: float) -> bool:
        return self._log_event(
            event_type=RunEventType.NOT_CONVERGED,
            category=RunCategory.NUMERICS,
            description=f"Probe search for k={k}, N={N} stopped before converging",
            severity=RunSeverity.WARNING,
            metadata={"k": k, "N": N, "best_mi": best_mi},
        )

    # Cache

    def log_cache_hit(self, key: Dict[str, Any]) -> bool:
        return self._log_event(
            event_type=RunEventType.CACHE_HIT,
            category=RunCategory.STORAGE,
            description="Result served from cache",
            severity=RunSeverity.INFO,
            metadata=key,
        )

    def log_cache_stored(self, key: Dict[str, Any]) -> bool:
        return self._log_event(
            event_type=RunEventType.CACHE_STORED,
            category=RunCategory.STORAGE,
            description="Result stored in cache",
            severity=RunSeverity.INFO,
            metadata=key,
        )

    # Output

    def log_output_written(self, path: str, rows: int) -> bool:
        return self._log_event(
            event_type=RunEventType.OUTPUT_WRITTEN,
            category=RunCategory.SYSTEM,
            description=f"Wrote {rows} rows to {path}",
            severity=RunSeverity.INFO,
            metadata={"path": path, "rows": rows},
        )
