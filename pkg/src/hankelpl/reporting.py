"""Report envelopes and JSON/CSV artifact emission.

Numbers are serialized as decimal strings at the certified digit count (JSON
doubles would truncate); complex entries carry re/im/err fields.  Payloads are
deterministic for a fixed config and precision: keys sorted, no timestamps
inside the payload (timing lives in the envelope, outside the round-trip
guarantee).
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import List, Optional

import mpmath

from .precision import to_decimal

TOOL_NAME = "hankelpl"
TOOL_VERSION = "0.1.0"


def num(x, digits: int, err=None) -> dict:
    """Decimal-string form of a real/complex number with optional error."""
    x = mpmath.mpmathify(x)
    out = {}
    if mpmath.im(x) == 0:
        out["value"] = to_decimal(mpmath.re(x), digits)
    else:
        out["re"] = to_decimal(mpmath.re(x), digits)
        out["im"] = to_decimal(mpmath.im(x), digits)
    if err is not None:
        out["err"] = to_decimal(err, 3)
    return out


@dataclass
class ReportEnvelope:
    command: str
    config: dict
    payload: dict = field(default_factory=dict)
    status: str = "ok"                  # ok | warning | error
    warnings: List[str] = field(default_factory=list)
    error: Optional[dict] = None
    timing_s: float = 0.0
    precision_bits: int = 0

    def as_dict(self) -> dict:
        return {
            "tool": {"name": TOOL_NAME, "version": TOOL_VERSION},
            "command": self.command,
            "config": self.config,
            "precision_bits": self.precision_bits,
            "status": self.status,
            "warnings": self.warnings,
            "error": self.error,
            "payload": self.payload,
            "timing_s": round(self.timing_s, 3),
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, indent=2) + "\n"

    def to_csv(self) -> str:
        """Flat key,value mirror; list-of-dict payload sections become tables."""
        buf = io.StringIO()
        w = csv.writer(buf)
        d = self.as_dict()
        w.writerow(["section", "key", "value"])
        for key in ("command", "status", "precision_bits", "timing_s"):
            w.writerow(["envelope", key, d[key]])
        for key, val in sorted(self.config.items()):
            w.writerow(["config", key, val])
        for wmsg in self.warnings:
            w.writerow(["warning", "", wmsg])
        if self.error:
            w.writerow(["error", self.error.get("code", ""), self.error.get("message", "")])
        _csv_payload(w, "payload", self.payload)
        return buf.getvalue()


def _csv_payload(w, prefix, obj):
    if isinstance(obj, dict):
        for k in sorted(obj):
            _csv_payload(w, f"{prefix}.{k}", obj[k])
    elif isinstance(obj, list):
        for i, item in enumerate(obj):
            _csv_payload(w, f"{prefix}[{i}]", item)
    else:
        w.writerow([prefix, "", obj])


def write_artifact(env: ReportEnvelope, path: Optional[str], fmt: str) -> str:
    text = env.to_json() if fmt == "json" else env.to_csv()
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    return text
