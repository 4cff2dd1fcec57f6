"""Persistence reports: orbit count versus category bound, with JSON and text renderings."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .solver import CriticalPoint, CriticalSet


@dataclass
class OrbitRecord:
    representative: list[float]
    signature: list[int]
    stability: str
    size: int
    energy: float
    velocity: list[float] | None = None


@dataclass
class PersistenceReport:
    example: str
    lam: float
    orbits_found: int
    bound: int | None
    verdict: str
    orbits: list[OrbitRecord] = field(default_factory=list)
    flags: dict = field(default_factory=dict)
    citation: str = ""
    params: dict = field(default_factory=dict)
    defaulted: list[str] = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> PersistenceReport:
        d = dict(d)
        d["orbits"] = [OrbitRecord(**o) for o in d.get("orbits", [])]
        return cls(**d)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> PersistenceReport:
        return cls.from_dict(json.loads(text))

    def summary(self) -> str:
        lines = [
            f"example      {self.example}",
            f"lambda       {self.lam!r}",
            f"orbits found {self.orbits_found}",
            f"bound        {self.bound}",
            f"verdict      {self.verdict}",
        ]
        if self.citation:
            lines.append(f"bound source {self.citation}")
        for k, v in sorted(self.flags.items()):
            lines.append(f"assumption   {k}: {v}")
        for i, o in enumerate(self.orbits):
            vel = "" if o.velocity is None else f" velocity {o.velocity}"
            lines.append(
                f"orbit {i}: {o.size} point(s), representative {o.representative}, "
                f"signature {tuple(o.signature)}, {o.stability}, energy {o.energy!r}{vel}"
            )
        for k, v in sorted(self.extra.items()):
            lines.append(f"{k}: {v}")
        if self.defaulted:
            lines.append(f"desk defaults used for: {', '.join(self.defaulted)}")
        return "\n".join(lines) + "\n"

    def write(self, out_dir) -> None:
        out = Path(out_dir)
        (out / "report.json").write_text(self.to_json() + "\n")
        (out / "report.txt").write_text(self.summary())


def stability_label(sig) -> str:
    neg, zero, pos = sig
    if zero:
        return "degenerate"
    if neg == 0 or pos == 0:
        return "stable"
    # on a 2-dimensional transverse space an indefinite Hessian is a saddle
    if neg + pos == 2:
        return "unstable"
    return "indefinite"


def _clean(values) -> list[float]:
    return [float(v) + 0.0 for v in values]


def orbit_records(cs: CriticalSet) -> list[OrbitRecord]:
    out = []
    for cluster in cs.clusters:
        rep: CriticalPoint = cs.points[cluster[0]]
        out.append(OrbitRecord(
            representative=_clean(rep.point.coords),
            signature=list(rep.signature),
            stability=stability_label(rep.signature),
            size=len(cluster),
            energy=float(rep.energy),
            velocity=None if rep.velocity is None else _clean(rep.velocity.coords),
        ))
    return out


def from_critical_set(example: str, cs: CriticalSet, flags=None, params=None, defaulted=(), extra=None) -> PersistenceReport:
    base_flags = {"OPS": "assumed" if cs.ops_assumed else "not assumed"}
    base_flags.update(flags or {})
    return PersistenceReport(
        example=example,
        lam=float(cs.lam),
        orbits_found=cs.orbit_count,
        bound=cs.bound,
        verdict=cs.verdict,
        orbits=orbit_records(cs),
        flags=base_flags,
        citation=cs.citation,
        params=dict(params or {}),
        defaulted=list(defaulted),
        extra=dict(extra or {}),
    )
