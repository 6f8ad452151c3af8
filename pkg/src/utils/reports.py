"""
Check results and table emission (CSV / JSON)
"""

import csv
import io
import json
import math
from pathlib import Path
from typing import Any, Dict, Iterable, List, Literal, Optional

import click
import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from config.settings import settings
from src.monitoring.logging_config import get_logger

logger = get_logger(__name__)

OutputFormat = Literal["csv", "json"]


class CheckResult(BaseModel):
    """Outcome of one numerical identity check.

    Reported-only checks (asserted=False) never count as failures.
    """

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    check: str
    reference: str
    params: Dict[str, Any] = Field(default_factory=dict)
    residual: float
    tolerance: float
    passed: bool = Field(..., alias="pass")
    asserted: bool = True

    @classmethod
    def evaluate(
        cls,
        check: str,
        reference: str,
        residual: float,
        tolerance: float,
        params: Optional[Dict[str, Any]] = None,
        asserted: bool = True,
    ) -> "CheckResult":
        residual = float(residual)
        passed = math.isfinite(residual) and residual <= tolerance
        result = cls(
            check=check,
            reference=reference,
            params=params or {},
            residual=residual,
            tolerance=tolerance,
            passed=passed,
            asserted=asserted,
        )
        if asserted and not passed:
            logger.warning("check_failed", check=check, residual=residual, tolerance=tolerance)
        else:
            logger.info("check_completed", check=check, residual=residual, passed=passed, asserted=asserted)
        return result

    @property
    def failed(self) -> bool:
        return self.asserted and not self.passed

    def to_record(self) -> Dict[str, Any]:
        return self.model_dump(mode="json", by_alias=True)


def _format_number(value: float, digits: int) -> str:
    return format(value, f".{digits}g")


def _flatten(row: Dict[str, Any]) -> Dict[str, Any]:
    """Complex entries become <name>_re / <name>_im columns"""
    flat: Dict[str, Any] = {}
    for key, value in row.items():
        if isinstance(value, (complex, np.complexfloating)):
            flat[f"{key}_re"] = float(value.real)
            flat[f"{key}_im"] = float(value.imag)
        elif isinstance(value, np.generic):
            flat[key] = value.item()
        else:
            flat[key] = value
    return flat


def render_table(rows: Iterable[Dict[str, Any]], fmt: OutputFormat = "csv", digits: Optional[int] = None) -> str:
    """Render rows as CSV (floats at `digits` significant digits) or as a JSON list"""
    digits = digits or settings.csv_digits
    flat_rows = [_flatten(row) for row in rows]
    if fmt == "json":
        return json.dumps(flat_rows, indent=2, allow_nan=True) + "\n"

    buffer = io.StringIO()
    if not flat_rows:
        return ""
    writer = csv.DictWriter(buffer, fieldnames=list(flat_rows[0].keys()), lineterminator="\n")
    writer.writeheader()
    for row in flat_rows:
        writer.writerow(
            {key: _format_number(value, digits) if isinstance(value, float) else value for key, value in row.items()}
        )
    return buffer.getvalue()


def matrix_rows(matrix: np.ndarray, name: str = "value") -> List[Dict[str, Any]]:
    """One row per matrix entry: row, col, value"""
    return [
        {"row": i, "col": j, name: complex(matrix[i, j])}
        for i in range(matrix.shape[0])
        for j in range(matrix.shape[1])
    ]


def render_report(results: Iterable[CheckResult]) -> str:
    return json.dumps([result.to_record() for result in results], indent=2) + "\n"


def write_output(text: str, path: Optional[Path]) -> None:
    """Write to `path`, or stdout when no path is given"""
    if path is None:
        click.echo(text, nl=False)
        return
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    logger.info("output_written", path=str(path), size=len(text))
