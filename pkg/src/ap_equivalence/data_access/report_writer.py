import logging
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional, Union

import pandas as pd

from ap_equivalence.config import get_settings
from ap_equivalence.domain.models.reports import ExperimentReport, ValueSetComparison
from ap_equivalence.domain.models.verdict import EquivalenceTrace

logger = logging.getLogger(__name__)

OUTCOME_COLUMNS = [
    "substrip",
    "sigma_lo",
    "sigma_hi",
    "index",
    "direction",
    "source_sigma",
    "source_t",
    "target_re",
    "target_im",
    "status",
    "found_sigma",
    "found_t",
    "residual",
    "explored_t",
]


def outcomes_frame(comparison: ValueSetComparison, substrip: int = 0) -> pd.DataFrame:
    """One row per (sample, direction) of a value-set comparison."""
    rows = []
    for o in comparison.outcomes:
        rows.append(
            {
                "substrip": substrip,
                "sigma_lo": comparison.sigma_lo,
                "sigma_hi": comparison.sigma_hi,
                "index": o.index,
                "direction": o.direction,
                "source_sigma": o.source_point.real,
                "source_t": o.source_point.imag,
                "target_re": o.target.real,
                "target_im": o.target.imag,
                "status": o.status,
                "found_sigma": o.found_point.real if o.found_point is not None else None,
                "found_t": o.found_point.imag if o.found_point is not None else None,
                "residual": o.residual,
                "explored_t": o.explored_t,
            }
        )
    df = pd.DataFrame(rows, columns=OUTCOME_COLUMNS)
    return df.astype({"found_sigma": "float64", "found_t": "float64", "residual": "float64"})


def experiment_frame(report: ExperimentReport) -> pd.DataFrame:
    frames = [outcomes_frame(c, k) for k, c in enumerate(report.comparisons)]
    if not frames:
        return pd.DataFrame(columns=OUTCOME_COLUMNS)
    return pd.concat(frames, ignore_index=True)


def trace_frame(trace: EquivalenceTrace) -> pd.DataFrame:
    rows = []
    for entry in trace.entries:
        v = entry.verdict
        outcome = "witness" if v.witness is not None else "certificate" if v.certificate is not None else "modulus_mismatch"
        rows.append(
            {
                "n": entry.n,
                "equivalent": v.equivalent,
                "outcome": outcome,
                "basis_dimension": len(v.witness.basis) if v.witness is not None else None,
                "defect": str(v.certificate.defect) if v.certificate is not None else None,
            }
        )
    return pd.DataFrame(rows, columns=["n", "equivalent", "outcome", "basis_dimension", "defect"])


def write_csv(df: pd.DataFrame, stem: str, directory: Optional[Union[str, Path]] = None) -> Optional[Path]:
    """Write df under directory (default APEQ_CSV_DIR); nothing is written when neither is set."""
    directory = directory if directory is not None else get_settings().csv_dir
    if directory is None:
        return None
    try:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        stamp = datetime.now(timezone.utc).strftime("%Y%m%dT%H%M%S%f")
        path = directory / f"{stem}-{stamp}.csv"
        df.to_csv(path, index=False)
        logger.info(f"Wrote {len(df)} rows to {path}")
        return path
    except OSError as e:
        logger.error(f"Failed to write CSV for {stem}: {str(e)}")
        raise
