"""Run history manager."""

import json
import logging
import uuid
from collections import deque
from datetime import datetime, timezone
from pathlib import Path
from typing import List, Optional

from pydantic import ValidationError

from gsdo.config import get_settings
from gsdo.models import RunRecord, TrialSummary

logger = logging.getLogger(__name__)


class RunHistory:
    """Keeps summaries of the most recent solver runs."""

    def __init__(self, max_entries: Optional[int] = None, storage_path: Optional[Path] = None):
        settings = get_settings()
        self.max_entries = settings.max_history_entries if max_entries is None else max_entries
        self._storage_path = Path(storage_path or settings.history_path)
        self._runs: deque = deque(maxlen=self.max_entries if self.max_entries > 0 else None)

        # Load existing history if available
        self._load_history()

    def _load_history(self):
        """Load run history from storage."""
        if self.max_entries == 0:
            return

        if self._storage_path.exists():
            try:
                with open(self._storage_path, "r") as f:
                    data = json.load(f)
                    runs = data.get("runs", [])[-self.max_entries:]
                    self._runs = deque(runs, maxlen=self.max_entries)
            except (json.JSONDecodeError, IOError):
                logger.warning(f"Ignoring unreadable run history at {self._storage_path}")
                self._runs = deque(maxlen=self.max_entries)

    def _save_history(self):
        """Save run history to storage."""
        if self.max_entries == 0:
            return

        try:
            self._storage_path.parent.mkdir(parents=True, exist_ok=True)
            with open(self._storage_path, "w") as f:
                json.dump({
                    "runs": list(self._runs),
                    "last_updated": datetime.now(timezone.utc).isoformat(),
                }, f, indent=2)
        except IOError:
            pass  # write failures are ignored

    def record(self, summary: TrialSummary) -> str:
        """
        Record a finished run.

        Returns:
            Run ID, or an empty string when history is disabled
        """
        if self.max_entries == 0:
            return ""

        run_id = str(uuid.uuid4())
        record = RunRecord(
            id=run_id,
            timestamp=datetime.now(timezone.utc),
            problem=summary.problem,
            scenario=summary.scenario,
            seed=summary.seed,
            budget=summary.budget,
            best_f=summary.best_f,
            feasible=summary.feasible,
            evaluations=summary.evaluations,
            termination=summary.termination,
        )
        self._runs.append(record.model_dump(mode="json"))
        self._save_history()

        return run_id

    def get_history(self, limit: Optional[int] = None) -> List[RunRecord]:
        """Most recent runs first."""
        if self.max_entries == 0:
            return []

        runs = list(self._runs)
        if limit:
            runs = runs[-limit:]

        records = []
        for run in reversed(runs):
            try:
                records.append(RunRecord(**run))
            except ValidationError:
                logger.warning(f"Skipping malformed history entry {run.get('id')}")
        return records

    def get(self, run_id: str) -> Optional[RunRecord]:
        """Get a specific run by ID."""
        for run in self._runs:
            if run.get("id") == run_id:
                return RunRecord(**run)
        return None

    def clear(self):
        """Clear all run history."""
        self._runs.clear()

        # Also remove storage file
        if self._storage_path.exists():
            self._storage_path.unlink()

    def __len__(self) -> int:
        return len(self._runs)


# Global run history instance
_run_history: Optional[RunHistory] = None


def get_run_history() -> RunHistory:
    """Get or create the global run history instance."""
    global _run_history
    if _run_history is None:
        _run_history = RunHistory()
    return _run_history
