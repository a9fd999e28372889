"""
Verification reports: named residual checks with tolerances and verdicts.
"""
import json
import logging
import math
from typing import Any, Dict, List, Literal

from pydantic import BaseModel, ConfigDict, Field, computed_field

logger = logging.getLogger(__name__)


class CheckResult(BaseModel):
    """
    One named check. expect='below' passes when max_residual <= tolerance;
    expect='above' (negative controls) passes when max_residual >= tolerance.
    """
    model_config = ConfigDict(populate_by_name=True)

    name: str
    max_residual: float
    tolerance: float
    expect: Literal["below", "above"] = "below"
    passed: bool = Field(default=False, alias="pass")

    @classmethod
    def evaluate(cls, name: str, residual: float, tolerance: float, expect: str = "below") -> "CheckResult":
        residual = float(residual)
        if not math.isfinite(residual):
            ok = False
        elif expect == "above":
            ok = residual >= tolerance
        else:
            ok = residual <= tolerance
        return cls(name=name, max_residual=residual, tolerance=tolerance, expect=expect, passed=ok)


class VerificationReport(BaseModel):
    case: str
    checks: List[CheckResult] = Field(default_factory=list)
    meta: Dict[str, Any] = Field(default_factory=dict)

    @computed_field(alias="pass")
    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def add(self, name: str, residual: float, tolerance: float, expect: str = "below") -> CheckResult:
        check = CheckResult.evaluate(name, residual, tolerance, expect)
        self.checks.append(check)
        if not check.passed:
            logger.info(f"[{self.case}] {name}: residual {check.max_residual:.3e} vs tolerance {tolerance:.1e} failed")
        return check

    def extend(self, other: "VerificationReport", prefix: str = "") -> "VerificationReport":
        for check in other.checks:
            self.checks.append(check.model_copy(update={"name": f"{prefix}{check.name}"}))
        for key, value in other.meta.items():
            self.meta[f"{prefix}{key}"] = value
        return self

    def check(self, name: str) -> CheckResult:
        for item in self.checks:
            if item.name == name:
                return item
        raise KeyError(name)

    @property
    def failing(self) -> List[str]:
        return [check.name for check in self.checks if not check.passed]

    def as_dict(self) -> Dict[str, Any]:
        return self.model_dump(by_alias=True, mode="json")

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True)
