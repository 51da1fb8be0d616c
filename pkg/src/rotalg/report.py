"""Pass/fail records for universally quantified checks."""

from dataclasses import dataclass, field


@dataclass(frozen=True)
class AxiomResult:
    name: str
    passed: bool
    witness: tuple = None
    note: str = ""

    def __bool__(self):
        return self.passed

    def describe(self):
        if self.passed:
            return f"{self.name}: pass"
        w = ", ".join(str(x) for x in self.witness) if self.witness else "-"
        extra = f" ({self.note})" if self.note else ""
        return f"{self.name}: FAIL at ({w}){extra}"


@dataclass
class AxiomReport:
    """Ordered collection of AxiomResult keyed by axiom name."""

    results: dict = field(default_factory=dict)

    def add(self, result):
        self.results[result.name] = result
        return result

    def update(self, other):
        for r in other:
            self.add(r)
        return self

    def __getitem__(self, name):
        return self.results[name]

    def __contains__(self, name):
        return name in self.results

    def __iter__(self):
        return iter(self.results.values())

    def __len__(self):
        return len(self.results)

    @property
    def passed(self):
        return all(r.passed for r in self.results.values())

    def failures(self):
        return [r for r in self.results.values() if not r.passed]

    def as_dict(self):
        out = {}
        for name, r in self.results.items():
            entry = {"pass": r.passed}
            if not r.passed:
                entry["witness"] = list(r.witness) if r.witness else []
            out[name] = entry
        return out

    def lines(self):
        return [r.describe() for r in self.results.values()]
