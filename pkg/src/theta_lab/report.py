"""Check results, the verification report, and its JSON serialisation."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, fields

PASS, FAIL, ADJUDICATED = "pass", "fail", "adjudicated"
PAPER_CLAIM_RATIO = 4.0
AGREEMENT_TOL = 1e-3


@dataclass
class CheckResult:
    id: str
    description: str
    measured: float
    expected: float | None
    tolerance: float
    status: str = ""
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.status:
            self.status = self.recompute_status()

    def recompute_status(self) -> str:
        if self.expected is None:
            return ADJUDICATED
        ok = math.isfinite(self.measured) and abs(self.measured - self.expected) <= self.tolerance
        return PASS if ok else FAIL

    @property
    def passed(self) -> bool:
        return self.status != FAIL

    def line(self) -> str:
        exp = "-" if self.expected is None else f"{self.expected:.6g}"
        return (f"[{self.status.upper():>11}] {self.id}: measured={self.measured:.6g} "
                f"expected={exp} tol={self.tolerance:.3g}  {self.description}")


@dataclass
class VerificationReport:
    config_echo: dict = field(default_factory=dict)
    check_results: list = field(default_factory=list)
    fitted_c: float | None = None
    norm_direct: float | None = None
    norm_from_residue: dict = field(default_factory=dict)
    final_ratio_to_pi: float | None = None
    paper_claim_ratio: float = PAPER_CLAIM_RATIO
    agreement_with_paper: bool | None = None
    residue_candidates: dict = field(default_factory=dict)

    def exit_code(self) -> int:
        return 1 if any(c.status == FAIL for c in self.check_results) else 0

    def to_dict(self) -> dict:
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name == "check_results":
                v = [asdict(c) for c in v]
            out[f.name] = v
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "VerificationReport":
        data = dict(data)
        data["check_results"] = [CheckResult(**c) for c in data.get("check_results", [])]
        return cls(**data)


def _jsonable(obj):
    # dict keys must be strings; everything else is already plain data
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "item") and not isinstance(obj, (str, bytes)):
        return obj.item()
    return obj


def dumps_report(report: VerificationReport) -> str:
    return json.dumps(_jsonable(report.to_dict()), indent=2, allow_nan=True) + "\n"


def loads_report(text: str) -> VerificationReport:
    return VerificationReport.from_dict(json.loads(text))


def emit_report(report: VerificationReport, path) -> None:
    """Write ``report`` as JSON. Floats use the shortest repr that round-trips exactly."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_report(report))


def load_report(path) -> VerificationReport:
    with open(path, encoding="utf-8") as fh:
        return loads_report(fh.read())
