"""Verification report record used by every check in the package and the CLI."""

from dataclasses import dataclass, field


@dataclass
class VerificationReport:
    """Outcome of one named numerical check.

    status is one of "pass", "fail", "inconclusive".  The invariant
    pass_flag <=> (status == "pass") <=> residual <= tolerance is enforced
    at construction unless a status is forced explicitly (used e.g. for
    inconclusive finite-difference results and precondition failures).
    """

    check_name: str
    inputs: str
    residual: float
    tolerance: float
    status: str = field(default="")
    notes: str = ""

    def __post_init__(self):
        if not self.status:
            self.status = "pass" if self.residual <= self.tolerance else "fail"
        if self.status not in ("pass", "fail", "inconclusive"):
            raise ValueError(f"invalid status {self.status!r}")

    @property
    def passed(self):
        return self.status == "pass"

    def as_dict(self):
        return {
            "check": self.check_name,
            "inputs": self.inputs,
            "residual": float(self.residual),
            "tolerance": float(self.tolerance),
            "status": self.status,
            "notes": self.notes,
        }


def format_complex(z):
    """Render a complex number in the CLI's a+bi syntax."""
    z = complex(z)
    sign = "+" if z.imag >= 0 else "-"
    return f"{z.real!r}{sign}{abs(z.imag)!r}i"
