#!/usr/bin/env python3
"""
Report history store
Keeps every recorded RunReport in SQLite so later runs can be compared
against the last recorded result of the same command
"""

import json
import logging
import sqlite3
from contextlib import contextmanager
from datetime import datetime
from pathlib import Path
from typing import Dict, List, Optional, Union

from cli.report import RunReport

logger = logging.getLogger(__name__)


class ReportStore:
    """SQLite-backed history of run reports"""

    def __init__(self, db_path: Optional[Union[str, Path]] = None):
        if db_path is None:
            from utils.paths import get_database_path
            db_path = get_database_path()
        self.db_path = str(db_path)
        Path(self.db_path).parent.mkdir(parents=True, exist_ok=True)
        self.init_database()

    @contextmanager
    def get_connection(self):
        """Open a connection, commit on success"""
        conn = sqlite3.connect(self.db_path)
        try:
            yield conn
            conn.commit()
        finally:
            conn.close()

    def init_database(self):
        """Create tables and indexes"""
        with self.get_connection() as conn:
            cursor = conn.cursor()
            cursor.execute('''
                CREATE TABLE IF NOT EXISTS runs (
                    id INTEGER PRIMARY KEY AUTOINCREMENT,
                    command TEXT,
                    timestamp DATETIME,
                    passed BOOLEAN,
                    elapsed_ms INTEGER,
                    report_json TEXT
                )
            ''')
            cursor.execute('''
                CREATE TABLE IF NOT EXISTS checks (
                    id INTEGER PRIMARY KEY AUTOINCREMENT,
                    run_id INTEGER,
                    name TEXT,
                    expected TEXT,
                    actual TEXT,
                    passed BOOLEAN,
                    FOREIGN KEY (run_id) REFERENCES runs(id)
                )
            ''')
            self.create_indexes(cursor)

    def create_indexes(self, cursor):
        indexes = [
            'CREATE INDEX IF NOT EXISTS idx_runs_command ON runs(command)',
            'CREATE INDEX IF NOT EXISTS idx_runs_timestamp ON runs(timestamp)',
            'CREATE INDEX IF NOT EXISTS idx_checks_run_id ON checks(run_id)',
        ]
        for index_sql in indexes:
            cursor.execute(index_sql)

    def record(self, report: RunReport) -> int:
        """Store a report, returning its run id"""
        data = report.to_dict()
        with self.get_connection() as conn:
            cursor = conn.cursor()
            cursor.execute(
                'INSERT INTO runs (command, timestamp, passed, elapsed_ms, report_json) VALUES (?, ?, ?, ?, ?)',
                (report.command, datetime.now().isoformat(), report.passed, data["elapsed_ms"],
                 json.dumps(data, sort_keys=True)))
            run_id = cursor.lastrowid
            cursor.executemany(
                'INSERT INTO checks (run_id, name, expected, actual, passed) VALUES (?, ?, ?, ?, ?)',
                [(run_id, c["name"], json.dumps(c["expected"]), json.dumps(c["actual"]), c["pass"])
                 for c in data["checks"]])
        logger.info(f"Recorded run {run_id} of '{report.command}' in {self.db_path}")
        return run_id

    def latest(self, command: str) -> Optional[RunReport]:
        with self.get_connection() as conn:
            cursor = conn.cursor()
            cursor.execute('SELECT report_json FROM runs WHERE command = ? ORDER BY id DESC LIMIT 1',
                           (command,))
            row = cursor.fetchone()
        return RunReport.from_dict(json.loads(row[0])) if row else None

    def history(self, limit: int = 20, command: Optional[str] = None) -> List[Dict]:
        with self.get_connection() as conn:
            cursor = conn.cursor()
            if command:
                cursor.execute('''
                    SELECT r.id, r.command, r.timestamp, r.passed, r.elapsed_ms, COUNT(c.id)
                    FROM runs r LEFT JOIN checks c ON c.run_id = r.id
                    WHERE r.command = ?
                    GROUP BY r.id ORDER BY r.id DESC LIMIT ?
                ''', (command, limit))
            else:
                cursor.execute('''
                    SELECT r.id, r.command, r.timestamp, r.passed, r.elapsed_ms, COUNT(c.id)
                    FROM runs r LEFT JOIN checks c ON c.run_id = r.id
                    GROUP BY r.id ORDER BY r.id DESC LIMIT ?
                ''', (limit,))
            rows = cursor.fetchall()
        return [{"id": r[0], "command": r[1], "timestamp": r[2], "passed": bool(r[3]),
                 "elapsed_ms": r[4], "checks": r[5]} for r in rows]

    def compare_to_latest(self, report: RunReport) -> List[str]:
        """Names of checks whose pass state differs from the last recorded run of the same command"""
        previous = self.latest(report.command)
        if previous is None:
            return []
        before = {c.name: c.passed for c in previous.checks}
        now = {c.name: c.passed for c in report.checks}
        return sorted(name for name in before.keys() | now.keys() if before.get(name) != now.get(name))

    def cleanup(self, keep: int = 100) -> int:
        """Drop all but the newest runs"""
        with self.get_connection() as conn:
            cursor = conn.cursor()
            cursor.execute('SELECT id FROM runs ORDER BY id DESC LIMIT -1 OFFSET ?', (keep,))
            stale = [row[0] for row in cursor.fetchall()]
            cursor.executemany('DELETE FROM checks WHERE run_id = ?', [(i,) for i in stale])
            cursor.executemany('DELETE FROM runs WHERE id = ?', [(i,) for i in stale])
        if stale:
            logger.info(f"Removed {len(stale)} old runs")
        return len(stale)
