"""Reporting functionality.

Timing of experiment runs, kept apart from the deterministic result
document, and the text summaries rendered from Mako templates.
"""

from __future__ import annotations

import datetime
import os.path
import time
from typing import TYPE_CHECKING, cast

from mako.lookup import TemplateLookup

if TYPE_CHECKING:
    from typing import Any, Sequence

    from .experiments import ExperimentSpec

template_lookup = TemplateLookup(directories=[os.path.join(os.path.dirname(__file__), "templates")])


class ExperimentReport:
    """Experiment execution report."""

    failed = False
    stopped = None
    exit_code = 0

    def __init__(self, spec: ExperimentSpec) -> None:
        """Experiment report constructor.

        :param asd_boundary.experiments.ExperimentSpec spec: Experiment being run.
        """
        self.spec = spec
        self.started = time.perf_counter()
        self.started_at = datetime.datetime.now(datetime.timezone.utc)

    def serialize(self) -> dict[str, Any]:
        """Serialize the experiment execution report.

        :return: Serialized report, the ``sidecar`` member of the result document.
        :rtype: dict
        """
        return {
            "command": self.spec.command,
            "started_at": self.started_at.isoformat(),
            "failed": self.failed,
            "exit_code": self.exit_code,
            "duration": self.duration,
        }

    def finalize(self, exit_code: int) -> None:
        """Stop collecting information and finalize the report.

        :param int exit_code: Exit code of the run.
        """
        self.stopped = time.perf_counter()
        self.exit_code = exit_code
        self.failed = exit_code != 0

    @property
    def duration(self) -> float:
        """Experiment execution duration.

        :return: Experiment execution duration in seconds.
        :rtype: float
        """
        if self.stopped is None:
            return 0

        return self.stopped - self.started


def render_summary(rows: Sequence[dict[str, Any]], headlines: Sequence[tuple[str, str]], exit_code: int) -> str:
    """Suite summary: one line per experiment, then the headline ratios."""
    template = template_lookup.get_template("summary.txt.mak")
    return cast(str, template.render(rows=rows, headlines=headlines, exit_code=exit_code))


def render_report(result: dict[str, Any]) -> str:
    """Headline report of the ``report`` command."""
    template = template_lookup.get_template("report.txt.mak")
    return cast(str, template.render(result=result))
