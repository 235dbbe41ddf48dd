from dataclasses import dataclass, field
import json


@dataclass
class Report:
    """Verdict of a check, with the evidence that supports it.

    ``verdict`` is ``"pass"``, ``"fail"`` or ``"undecided"``.  Any verdict
    that depends on a carrier bound records it in ``bound``.
    """

    command: str
    verdict: str
    bound: int | None = None
    witnesses: list = field(default_factory=list)
    violations: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def ok(self):
        return self.verdict == "pass"

    def __bool__(self):
        return self.ok

    def to_dict(self):
        return {
            "command": self.command,
            "verdict": self.verdict,
            "bound": self.bound,
            "witnesses": [_plain(w) for w in self.witnesses],
            "violations": [str(v) for v in self.violations],
            "details": _plain(self.details),
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def verdict(flag):
    return "pass" if flag else "fail"


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in sorted(obj.items(), key=lambda kv: str(kv[0]))}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted((_plain(v) for v in obj), key=str)
    if isinstance(obj, (str, int, float, bool)) or obj is None:
        return obj
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    if hasattr(obj, "item"):
        return obj.item()
    return str(obj)
