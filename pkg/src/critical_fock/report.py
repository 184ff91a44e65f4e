"""Check reports and JSON encoding of basis keys and vectors."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List


class CarrierError(ValueError):
    """A vector has a component outside the carrier of the module it is fed to."""


@dataclass
class CheckReport:
    name: str
    passed: bool = True
    checked: int = 0
    violations: List[Dict[str, Any]] = field(default_factory=list)
    details: Dict[str, Any] = field(default_factory=dict)
    max_violations: int = 20

    def record(self, ok: bool, **witness) -> None:
        self.checked += 1
        if not ok:
            self.passed = False
            if len(self.violations) < self.max_violations:
                self.violations.append(witness)

    def merge(self, other: "CheckReport") -> "CheckReport":
        self.checked += other.checked
        self.passed = self.passed and other.passed
        room = self.max_violations - len(self.violations)
        self.violations.extend(other.violations[:max(room, 0)])
        return self

    def to_json(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "pass": self.passed,
            "checked": self.checked,
            "violations": [to_jsonable(v) for v in self.violations],
            "details": to_jsonable(self.details),
        }

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name} ({self.checked} checks)"


def key_to_json(key) -> Any:
    """Encode a basis key.  Half-integer modes use the doubled ``"Nx2"`` form."""
    from .fock import FermionMonomial
    from .lattice import LatticeMonomial
    from .amodule import VacuumMonomial
    from .weyl import WeylMonomial

    if isinstance(key, FermionMonomial):
        return {"type": "fermion",
                "plus": [f"{r}x2" for r in key.plus],
                "minus": [f"{r}x2" for r in key.minus]}
    if isinstance(key, LatticeMonomial):
        return {"type": "lattice", "m": key.m, "parts": list(key.parts)}
    if isinstance(key, VacuumMonomial):
        return {"type": "vacuum", "fermion": key_to_json(key.f),
                "gamma_plus": list(key.gp), "gamma_minus": list(key.gm)}
    if isinstance(key, WeylMonomial):
        return {"type": "weyl", "a": list(key.a_parts), "astar": list(key.astar_parts)}
    if isinstance(key, tuple) and len(key) == 2:
        return {"type": "tensor", "u": key_to_json(key[0]), "l": key_to_json(key[1])}
    raise TypeError(f"cannot encode key {key!r}")


def key_from_json(obj) -> Any:
    from .fock import FermionMonomial
    from .lattice import LatticeMonomial
    from .amodule import VacuumMonomial
    from .weyl import WeylMonomial

    t = obj["type"]
    if t == "fermion":
        return FermionMonomial(tuple(int(s[:-2]) for s in obj["plus"]),
                               tuple(int(s[:-2]) for s in obj["minus"]))
    if t == "lattice":
        return LatticeMonomial(int(obj["m"]), tuple(obj["parts"]))
    if t == "vacuum":
        return VacuumMonomial(key_from_json(obj["fermion"]), tuple(obj["gamma_plus"]),
                              tuple(obj["gamma_minus"]))
    if t == "weyl":
        return WeylMonomial(tuple(obj["a"]), tuple(obj["astar"]))
    if t == "tensor":
        return (key_from_json(obj["u"]), key_from_json(obj["l"]))
    raise ValueError(f"unknown key type {t!r}")


def vector_to_json(v: Dict) -> List[Dict[str, Any]]:
    terms = [{"coef": str(c), "key": key_to_json(k)} for k, c in v.items()]
    terms.sort(key=lambda t: repr(t["key"]))
    return terms


def vector_from_json(terms) -> Dict:
    return {key_from_json(t["key"]): Fraction(t["coef"]) for t in terms}


def to_jsonable(obj) -> Any:
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        if obj and all(_is_key(k) for k in obj) and all(isinstance(c, Fraction) for c in obj.values()):
            return {"vector": vector_to_json(obj)}
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        if _is_key(obj):
            return key_to_json(obj)
        return [to_jsonable(x) for x in obj]
    if isinstance(obj, (bool, int, str)) or obj is None:
        return obj
    if hasattr(obj, "to_json"):
        return obj.to_json()
    return str(obj)


def _is_key(obj) -> bool:
    from .fock import FermionMonomial
    from .lattice import LatticeMonomial
    from .amodule import VacuumMonomial
    from .weyl import WeylMonomial

    if isinstance(obj, (FermionMonomial, LatticeMonomial, VacuumMonomial, WeylMonomial)):
        return True
    return (isinstance(obj, tuple) and len(obj) == 2 and _is_key(obj[0])
            and isinstance(obj[1], LatticeMonomial))
