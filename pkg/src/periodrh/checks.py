from dataclasses import dataclass, field


@dataclass(frozen=True)
class Check:
    """One inequality or identity, with the margin that decided it.

    ``margin`` is positive when the check holds with room to spare, zero at
    equality and negative when it fails; ``ok`` already accounts for the
    tolerance the producer used.
    """

    name: str
    ok: bool
    margin: object
    lhs: object = None
    rhs: object = None
    note: str = ""


@dataclass
class CheckList:
    checks: list = field(default_factory=list)

    def add(self, check):
        self.checks.append(check)
        return check

    @property
    def passed(self):
        return all(c.ok for c in self.checks)

    @property
    def failures(self):
        return [c for c in self.checks if not c.ok]

    def __iter__(self):
        return iter(self.checks)

    def __len__(self):
        return len(self.checks)
