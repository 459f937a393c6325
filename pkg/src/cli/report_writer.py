from decimal import Decimal
import json
import logging
import sys
from typing import Dict, List, Optional

from src import __version__
from src.classifier.dichotomy_classifier import Report
from src.core.eval_matrix import EvalMatrix
from src.core.exceptions import MatrixParseError, ReportIntegrityError
from src.core.witnesses import ShatterWitness, StaircaseWitness, check_shatter, check_staircase

logger = logging.getLogger(__name__)


def build_report(report: Report) -> Dict:
    """ReportFile layout of a classifier Report."""
    M = report.matrix
    return {
        "matrix": M.to_dict(),
        "params": report.params.to_dict(M),
        "ranks": [scan.to_dict() for scan in report.scans],
        "witnesses": [
            {
                "thresholds": scan.thresholds.to_dict(),
                "staircase": scan.order.witness.to_dict() if scan.order.witness else None,
                "shatter": scan.independence.witness.to_dict() if scan.independence.witness else None,
            }
            for scan in report.scans
        ],
        "verdicts": {
            "stable_at_scale": report.stable_at_scale,
            "nip_at_scale": report.nip_at_scale,
            "profile": report.profile,
            "inconclusive": report.inconclusive,
        },
        "banach_labels": {
            "reflexive_like": report.reflexive_like,
            "rosenthal_like": report.rosenthal_like,
            "wsc_like": report.wsc_like,
        },
        "budget_flags": list(report.budget_flags),
        "version": __version__,
    }


def embedded_witnesses(payload: Dict) -> List:
    """Witness objects rebuilt from a ReportFile payload."""
    witnesses = []
    for entry in payload.get("witnesses", []):
        if entry.get("staircase"):
            witnesses.append(StaircaseWitness.from_dict(entry["staircase"]))
        if entry.get("shatter"):
            witnesses.append(ShatterWitness.from_dict(entry["shatter"]))
    return witnesses


def verify_report(M: EvalMatrix, payload: Dict) -> None:
    """
    Re-check every embedded witness against the matrix.

    Raises:
        ReportIntegrityError: a witness fails or the matrix section does not match
    """
    if payload.get("matrix", {}).get("row_labels") != list(M.row_labels) or \
            payload.get("matrix", {}).get("col_labels") != list(M.col_labels):
        raise ReportIntegrityError("report matrix labels do not match the analysed matrix")
    for w in embedded_witnesses(payload):
        outcome = check_staircase(M, w) if isinstance(w, StaircaseWitness) else check_shatter(M, w)
        if not outcome:
            raise ReportIntegrityError(f"embedded witness fails re-verification: {outcome.reason}")


def dumps(payload: Dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def write_json(payload: Dict, out: Optional[str] = None) -> None:
    text = dumps(payload)
    if out:
        with open(out, "w", newline="") as f:
            f.write(text)
        logger.info(f"wrote {out}")
    else:
        sys.stdout.write(text)


def load_json(path: str) -> Dict:
    """Read a JSON input file; decimals are kept exact."""
    try:
        with open(path, "r") as f:
            return json.load(f, parse_float=Decimal)
    except json.JSONDecodeError as e:
        raise MatrixParseError(f"invalid JSON in {path}: {e.msg}", line=e.lineno, column=e.colno)
