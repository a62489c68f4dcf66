"""Per-coefficient verification records and their aggregate reports."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class CheckRecord:
    exponents: tuple
    left: object
    right: object
    passed: bool
    note: str = ""

    def key(self) -> str:
        return ",".join(str(e) for e in self.exponents)


@dataclass
class VerificationReport:
    """Outcome of one coefficientwise identity check.

    ``verdict`` is true only when at least one coefficient was compared
    and every comparison passed: an empty checked set can never pass.
    """

    name: str
    window_used: str = ""
    meta: dict = field(default_factory=dict)
    checked: list = field(default_factory=list)
    skipped: list = field(default_factory=list)
    expected_failure: bool = False

    def record(self, exponents: tuple, left, right, note: str = "") -> bool:
        ok = left == right
        self.checked.append(CheckRecord(tuple(exponents), left, right, ok, note))
        return ok

    def guarded(self, exponents: tuple, compute, note: str = "") -> None:
        """Record compute() -> (left, right); cutoff overruns become skips."""
        from .series import WindowError
        try:
            left, right = compute()
        except WindowError as exc:
            self.skip(tuple(exponents), str(exc))
            return
        self.record(exponents, left, right, note)

    def skip(self, exponents: tuple, reason: str = "cutoff") -> None:
        self.skipped.append((tuple(exponents), reason))

    @property
    def verdict(self) -> bool:
        return bool(self.checked) and all(r.passed for r in self.checked)

    @property
    def failures(self) -> list:
        return [r for r in self.checked if not r.passed]

    @property
    def failures_detail(self) -> str:
        lines = []
        for r in self.failures:
            lines.append(f"({r.key()}): left={r.left} right={r.right} {r.note}")
        return "\n".join(lines)

    @property
    def outcome(self) -> str:
        """PASS/FAIL, XFAIL/XPASS for designed failures, STARVED if vacuous."""
        if not self.checked:
            return "STARVED"
        failed = bool(self.failures)
        if self.expected_failure:
            return "XFAIL" if failed else "XPASS"
        return "FAIL" if failed else "PASS"

    @property
    def ok(self) -> bool:
        return self.outcome in ("PASS", "XFAIL")

    def summary(self) -> str:
        return (f"{self.name}: {self.outcome} checked={len(self.checked)} "
                f"failed={len(self.failures)} skipped={len(self.skipped)} "
                f"window={self.window_used}")

    def to_lines(self, verbose: bool = False) -> list[str]:
        lines = [self.summary()]
        for k in sorted(self.meta):
            lines.append(f"  meta {k} = {self.meta[k]}")
        for r in self.checked:
            if r.passed and not verbose:
                lines.append(f"  coeff ({r.key()}) ok")
            else:
                status = "ok" if r.passed else "MISMATCH"
                lines.append(f"  coeff ({r.key()}) {status} left={r.left} "
                             f"right={r.right}{' ' + r.note if r.note else ''}")
        for exps, reason in self.skipped:
            lines.append("  skip (" + ",".join(str(e) for e in exps) + f") {reason}")
        return lines

    def require(self, minimum_checked: int = 1) -> "VerificationReport":
        """Raise if the compared set is smaller than requested (anti-vacuity)."""
        if len(self.checked) < minimum_checked:
            raise ValueError(
                f"{self.name}: only {len(self.checked)} coefficients comparable "
                f"(need {minimum_checked}); enlarge the window or the cutoff")
        return self
