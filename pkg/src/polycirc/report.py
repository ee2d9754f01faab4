""" Result containers shared by the semiring self-check and the axiom verifier."""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"


@dataclass
class LawResult:
    """Verdict for one law or axiom.

    Args:
        status (str): One of pass, fail, skipped.
        cases (int): Number of cases that were checked.
        counterexample (tuple): Input tuple reproducing the failure, only on fail.
        detail (str): Free-form note, e.g. the two differing outputs or why it was skipped.
    """

    status: str
    cases: int = 0
    counterexample: Optional[Tuple[int, ...]] = None
    detail: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_dict(self) -> dict:
        result = {"status": self.status, "cases": self.cases}
        if self.counterexample is not None:
            result["counterexample"] = list(self.counterexample)
        if self.detail:
            result["detail"] = self.detail
        return result


@dataclass
class AxiomReport:
    """Ordered collection of law verdicts."""

    results: Dict[str, LawResult] = field(default_factory=dict)

    def add(self, name: str, result: LawResult):
        self.results[name] = result

    def merge(self, other: "AxiomReport", prefix: str = ""):
        for name, result in other.results.items():
            self.results[prefix + name] = result

    @property
    def passed(self) -> bool:
        """True when no law failed. Skipped laws do not count as failures."""
        return all(r.status != FAIL for r in self.results.values())

    @property
    def failures(self) -> List[str]:
        return [name for name, r in self.results.items() if r.status == FAIL]

    def __getitem__(self, name: str) -> LawResult:
        return self.results[name]

    def __contains__(self, name: str) -> bool:
        return name in self.results

    def to_dict(self) -> dict:
        return {name: r.to_dict() for name, r in self.results.items()}
