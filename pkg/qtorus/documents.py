"""
Documents

JSON and CSV renderings of the objects the command line reads and writes.
Output is deterministic: JSON keys are sorted, CSV floats carry 17
significant digits, and files are replaced atomically.
"""

import csv
import io
import json
import os
import sys
import tempfile
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Union

from .dynamics import DiagnosticsReport
from .errors import ArgumentError
from .operation_logger import get_logger
from .symbols import TorusSymbol
from .theta_rep import SectorMatrix
from .weyl_algebra import AlgebraElement

REPORT_HEADER = ("step", "value_re", "value_im", "reference_re", "reference_im")
SECTOR_HEADER = ("row", "col", "re", "im")
KERNEL_HEADER = ("r", "g_abs2")

Loaded = Union[AlgebraElement, TorusSymbol, SectorMatrix]


def format_number(value) -> str:
    """Integers verbatim, floats with 17 significant digits."""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format(value, '.17g')
    return str(value)


def dump_json(document: Mapping) -> str:
    return json.dumps(document, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def dump_csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_number(value) for value in row])
    return buffer.getvalue()


def complex_document(value: complex) -> Dict[str, float]:
    return {"re": float(value.real), "im": float(value.imag)}


def complex_from_document(document: Mapping) -> complex:
    return complex(float(document["re"]), float(document["im"]))


def report_document(report: DiagnosticsReport) -> Dict:
    """JSON mirror of the CSV report: one object per row with the CSV field names."""
    return {
        "label": report.label,
        "rows": [dict(zip(REPORT_HEADER, row)) for row in report_rows(report)],
    }


def report_from_document(document: Mapping) -> DiagnosticsReport:
    try:
        rows = list(document["rows"])
        reference = (
            complex(float(rows[0]["reference_re"]), float(rows[0]["reference_im"])) if rows else 0j
        )
        return DiagnosticsReport(
            steps=[int(row["step"]) for row in rows],
            values=[complex(float(row["value_re"]), float(row["value_im"])) for row in rows],
            limit_reference=reference,
            label=str(document.get("label", "")),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise ArgumentError(f"Malformed diagnostics report document: {e}") from e


def report_rows(report: DiagnosticsReport) -> List[tuple]:
    reference = report.limit_reference
    return [
        (step, float(value.real), float(value.imag), float(reference.real), float(reference.imag))
        for step, value in zip(report.steps, report.values)
    ]


def render_report(report: DiagnosticsReport, output: str) -> str:
    if output == "json":
        return dump_json(report_document(report))
    return dump_csv(REPORT_HEADER, report_rows(report))


def render_sector_matrix(matrix: SectorMatrix, output: str) -> str:
    if output == "json":
        return dump_json(matrix.to_document())
    return dump_csv(SECTOR_HEADER, matrix.csv_rows())


def load_document(path: str) -> Dict:
    """
    Read a JSON document from disk.

    Raises:
        ArgumentError: If the file is missing or is not a JSON object
    """
    file_path = Path(path)
    try:
        with open(file_path, 'r', encoding='utf-8') as f:
            document = json.load(f)
    except OSError as e:
        raise ArgumentError(f"Cannot read input file {file_path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ArgumentError(f"Input file {file_path} is not valid JSON: {e}") from e
    if not isinstance(document, dict):
        raise ArgumentError(f"Input file {file_path} must hold a JSON object")
    return document


def load_object(path: str) -> Loaded:
    """Load an algebra element, torus symbol or sector matrix, told apart by their keys."""
    document = load_document(path)
    if "terms" in document:
        return AlgebraElement.from_document(document)
    if "modes" in document:
        return TorusSymbol.from_document(document)
    if "entries" in document:
        return SectorMatrix.from_document(document)
    raise ArgumentError(f"Input file {path} holds no algebra element, symbol or sector matrix")


def write_output(text: str, out_path: Optional[str] = None) -> None:
    """
    Write text to stdout, or to out_path via a temporary sibling and os.replace.
    """
    if out_path is None:
        sys.stdout.write(text)
        return
    target = Path(out_path)
    if target.parent and not target.parent.exists():
        target.parent.mkdir(parents=True, exist_ok=True)
    fd, temp_name = tempfile.mkstemp(prefix=f".{target.name}.", dir=str(target.parent))
    try:
        with os.fdopen(fd, 'w', encoding='utf-8', newline='') as f:
            f.write(text)
        os.replace(temp_name, target)
    except Exception:
        if os.path.exists(temp_name):
            os.remove(temp_name)
        raise
    get_logger().info(f"Wrote {len(text)} characters to {target}")
