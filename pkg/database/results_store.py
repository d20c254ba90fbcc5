import csv
import sqlite3
from typing import Dict, List, Optional, Tuple

from config import ExportConfig
from models.results import QuadratureResult


class ResultsStore:
    """Sqlite cache of computed quadrature results and run events."""

    def __init__(self, db_path: str = "phaseBits.db"):
        """Open (or create) the store and its tables."""
        self.db_path = db_path
        self.conn = None
        self.cursor = None
        self.connect()
        self.create_tables()

    def connect(self):
        """Establish database connection."""
        self.conn = sqlite3.connect(self.db_path)
        self.conn.row_factory = sqlite3.Row
        self.cursor = self.conn.cursor()

    def create_tables(self):
        """Create the results and events tables."""
        self.cursor.execute(
            """
            CREATE TABLE IF NOT EXISTS results (
                result_id INTEGER PRIMARY KEY AUTOINCREMENT,
                quantity TEXT NOT NULL,
                k INTEGER NOT NULL,
                n INTEGER NOT NULL,
                family TEXT NOT NULL,
                tol REAL NOT NULL,
                value REAL NOT NULL,
                abs_error_estimate REAL NOT NULL,
                evaluations INTEGER NOT NULL,
                created_at TEXT DEFAULT CURRENT_TIMESTAMP,
                UNIQUE (quantity, k, n, family, tol)
            )
        """
        )

        self.cursor.execute(
            """
            CREATE TABLE IF NOT EXISTS run_events (
                event_id INTEGER PRIMARY KEY AUTOINCREMENT,
                command TEXT,
                event_type TEXT NOT NULL,
                category TEXT NOT NULL,
                severity TEXT NOT NULL,
                description TEXT NOT NULL,
                metadata TEXT,
                created_at TEXT DEFAULT CURRENT_TIMESTAMP
            )
        """
        )

        self.cursor.execute(
            "CREATE INDEX IF NOT EXISTS idx_events_type ON run_events(event_type)"
        )
        self.conn.commit()

    # ==================== Results ====================

    def get(self, quantity: str, k: int, N: int, family: str, tol: float) -> Optional[QuadratureResult]:
        """
        Look up a cached result.

        Returns:
            QuadratureResult exactly as stored, or None
        """
        self.cursor.execute(
            """
            SELECT value, abs_error_estimate, evaluations FROM results
            WHERE quantity = ? AND k = ? AND n = ? AND family = ? AND tol = ?
        """,
            (quantity, k, N, family, float(tol)),
        )
        row = self.cursor.fetchone()
        if row is None:
            return None
        return QuadratureResult(row["value"], row["abs_error_estimate"], row["evaluations"])

    def put(self, quantity: str, k: int, N: int, family: str, tol: float, result: QuadratureResult) -> bool:
        """
        Store a result, replacing any previous one with the same key.

        Returns:
            True if successful, False otherwise
        """
        try:
            self.cursor.execute(
                """
                INSERT OR REPLACE INTO results (
                    quantity, k, n, family, tol, value, abs_error_estimate, evaluations
                ) VALUES (?, ?, ?, ?, ?, ?, ?, ?)
            """,
                (
                    quantity,
                    k,
                    N,
                    family,
                    float(tol),
                    float(result.value),
                    float(result.abs_error_estimate),
                    int(result.evaluations),
                ),
            )
            self.conn.commit()
            return True
        except sqlite3.Error:
            return False

    def count(self, quantity: Optional[str] = None) -> int:
        """Number of cached results, optionally for one quantity."""
        if quantity is None:
            self.cursor.execute("SELECT COUNT(*) FROM results")
        else:
            self.cursor.execute("SELECT COUNT(*) FROM results WHERE quantity = ?", (quantity,))
        return self.cursor.fetchone()[0]

    def all_results(self) -> List[Dict]:
        """Every cached result, ordered by key."""
        self.cursor.execute(
            """
            SELECT quantity, k, n, family, tol, value, abs_error_estimate, evaluations
            FROM results ORDER BY quantity, k, n, family, tol
        """
        )
        return [dict(row) for row in self.cursor.fetchall()]

    def export_csv(self, filepath: str) -> Tuple[bool, str]:
        """
        Export the cached results to a CSV file.

        Returns:
            Tuple of (success, message)
        """
        rows = self.all_results()
        if not rows:
            return (False, "No results to export")
        try:
            with open(filepath, "w", newline="", encoding=ExportConfig.CSV_ENCODING) as csvfile:
                writer = csv.DictWriter(csvfile, fieldnames=list(rows[0].keys()))
                writer.writeheader()
                for row in rows:
                    writer.writerow(row)
            return (True, f"Exported {len(rows)} results to {filepath}")
        except OSError as e:
            return (False, f"Error exporting results: {str(e)}")

    def clear(self) -> int:
        """Delete every cached result; returns the number removed."""
        self.cursor.execute("DELETE FROM results")
        self.conn.commit()
        return self.cursor.rowcount

    # ==================== Run events ====================

    def record_event(
        self,
        event_type: str,
        category: str,
        severity: str,
        description: str,
        command: Optional[str] = None,
        metadata: Optional[str] = None,
    ) -> bool:
        """Store one run event; metadata is a JSON string."""
        try:
            self.cursor.execute(
                """
                INSERT INTO run_events (
                    command, event_type, category, severity, description, metadata
                ) VALUES (?, ?, ?, ?, ?, ?)
            """,
                (command, event_type, category, severity, description, metadata),
            )
            self.conn.commit()
            return True
        except sqlite3.Error:
            return False

    def get_events(self, event_type: Optional[str] = None, limit: int = 100) -> List[Dict]:
        """Most recent run events, optionally of one type."""
        if event_type is None:
            self.cursor.execute(
                "SELECT * FROM run_events ORDER BY event_id DESC LIMIT ?", (limit,)
            )
        else:
            self.cursor.execute(
                "SELECT * FROM run_events WHERE event_type = ? ORDER BY event_id DESC LIMIT ?",
                (event_type, limit),
            )
        return [dict(row) for row in self.cursor.fetchall()]

    def close(self):
        """Close database connection."""
        if self.conn:
            self.conn.close()
            self.conn = None

    def __del__(self):
        """Cleanup database connection."""
        self.close()
