"""Per-sample diagnostics records and their NDJSON wire format.

Field names in the serialized records are exactly the lowercase snake_case
attribute names below; key order is fixed so that identical runs produce
byte-identical streams.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import TYPE_CHECKING, Mapping

if TYPE_CHECKING:  # pragma: no cover - typing only, avoids an import cycle
    from .energies import EnergyReport
    from .linearized import LinEnergyReport

RECORDS_SCHEMA = "bh.records/1"


@dataclass(frozen=True)
class DiagnosticsRecord:
    """Scalar observables of one sampled solver state."""

    t: float
    l2_norm: float
    hk_norms: Mapping[int, float]
    max_slope: float
    energies: "Mapping[int, EnergyReport]"
    lin: "LinEnergyReport | None"
    tail_fraction: float
    dt: float

    def to_json_dict(self) -> dict:
        d = {
            "t": self.t,
            "l2_norm": self.l2_norm,
            "hk_norms": {str(k): v for k, v in sorted(self.hk_norms.items())},
            "max_slope": self.max_slope,
            "energies": {
                str(k): {
                    "k": r.k,
                    "standard": r.standard,
                    "modified": r.modified,
                    "correction": r.correction,
                    "ratio": r.ratio,
                    "hux_inf": r.hux_inf,
                }
                for k, r in sorted(self.energies.items())
            },
            "lin": None if self.lin is None else {
                "form_a": self.lin.form_a,
                "form_b": self.lin.form_b,
                "l2": self.lin.l2,
            },
            "tail_fraction": self.tail_fraction,
            "dt": self.dt,
        }
        return d


def _sanitize(value):
    """Replace non-finite floats with null; strict JSON for downstream parsers."""
    if isinstance(value, float):
        return value if value == value and abs(value) != float("inf") else None
    if isinstance(value, dict):
        return {k: _sanitize(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_sanitize(v) for v in value]
    return value


def dumps_record(record: DiagnosticsRecord) -> str:
    return json.dumps(_sanitize(record.to_json_dict()), separators=(",", ":"),
                      allow_nan=False)


def dumps_header(schema: str, config: Mapping) -> str:
    return json.dumps({"schema": schema, "config": dict(config)},
                      separators=(",", ":"))
