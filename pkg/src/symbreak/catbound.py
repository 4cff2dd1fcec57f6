"""Equivariant Lyusternik-Schnirelmann category lower bounds.

The bounds are looked up in a small table keyed by (G, H, isotropy, context).
Nothing here is computed heuristically: a query without a table row raises
``NoTableEntryError``.  Extra rows can be loaded from an INI file whose
sections look like::

    [my-row]
    G = SO3
    H = SO2
    isotropy = trivial
    context = equilibria
    value = 2
    citation = <mandatory reference>
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass
from typing import Callable

from . import lie
from .errors import ConfigError, NoTableEntryError
from .lie import GroupId

ISOTROPIES = ("trivial", "reflection", "subtorus")
CONTEXTS = ("equilibria", "relative_equilibria")


@dataclass(frozen=True)
class BoundQuery:
    """Which category is wanted.

    For equilibria, ``G`` and ``H`` are the full and the residual symmetry
    groups and ``Gm`` the isotropy of the point.  For relative equilibria pass
    the momentum stabilizers G_mu and H_mu as ``G`` and ``H``.
    """

    G: GroupId
    H: GroupId
    Gm: str = "trivial"
    context: str = "equilibria"
    subtorus_rank: int = 0

    def __post_init__(self):
        if self.Gm not in ISOTROPIES:
            raise ValueError(f"isotropy must be one of {ISOTROPIES}")
        if self.context not in CONTEXTS:
            raise ValueError(f"context must be one of {CONTEXTS}")


@dataclass(frozen=True)
class Bound:
    value: int
    citation: str
    ops_assumed: bool = True


@dataclass(frozen=True)
class TableRow:
    name: str
    matches: Callable[[BoundQuery], bool]
    value: Callable[[BoundQuery], int]
    citation: str
    ops_assumed: bool = True


def _kind(q, G, H):
    return q.G.kind == G and q.H.kind == H


CITE_DIHEDRAL_CYLINDER = (
    "Marzantowicz, Cor. 1.17: O(2)/<r_0> is a circle on which D_n (n >= 2) "
    "acts with two orbit types; Cat_{D_n}(S^1) = 2"
)
CITE_DIHEDRAL_FLUID = (
    "Marzantowicz, Cor. 1.17: O(2)/<r_theta> is a circle with the D_2 action "
    "of the ellipse symmetries; Cat_{D_2}(S^1) = 2"
)
CITE_CIRCLE_FREE = (
    "S^1 = SO(2)/{e} is a single orbit of the free SO(2) action, so it is its own "
    "invariant categorical cover; Cat_{SO(2)}(S^1) = 1"
)
CITE_TORUS_FREE = (
    "Grabsi, Montaldi, Ortega: for a free subtorus action "
    "Cat_{T^r}(T^n) = Cat(T^(n-r)) = (n - r) + 1"
)

_DEFAULT_ROWS = (
    TableRow(
        "O2/D2 reflection isotropy",
        lambda q: _kind(q, "O2", "Dn") and q.H.n == 2 and q.Gm == "reflection",
        lambda q: 2,
        CITE_DIHEDRAL_FLUID,
    ),
    TableRow(
        "O2/Dn reflection isotropy",
        lambda q: _kind(q, "O2", "Dn") and q.H.n >= 2 and q.Gm == "reflection",
        lambda q: 2,
        CITE_DIHEDRAL_CYLINDER,
    ),
    TableRow(
        "SO2/SO2 free",
        lambda q: _kind(q, "SO2", "SO2") and q.Gm == "trivial",
        lambda q: 1,
        CITE_CIRCLE_FREE,
    ),
    TableRow(
        "Torus free",
        lambda q: q.G.kind == "Torus" and q.H.kind in ("Torus", "Trivial") and q.Gm == "trivial",
        lambda q: q.G.n - q.H.dim + 1,
        CITE_TORUS_FREE,
    ),
)

_extra_rows: list[TableRow] = []

# which subgroup kinds embed in which groups
_EMBEDS = {
    "O2": {"O2", "SO2", "Dn", "Trivial"},
    "SO2": {"SO2", "Trivial"},
    "SO3": {"SO3", "SO2", "Trivial"},
    "SO4": {"SO4", "SO3", "Trivial"},
    "SE2": {"SE2", "SO2", "Trivial"},
    "Torus": {"Torus", "Trivial"},
    "Dn": {"Dn", "Trivial"},
    "Trivial": {"Trivial"},
}


def embeds(H: GroupId, G: GroupId) -> bool:
    if H.kind not in _EMBEDS.get(G.kind, ()):
        return False
    if G.kind == "Torus" and H.kind == "Torus":
        return H.n <= G.n
    if G.kind == "Dn" and H.kind == "Dn":
        return G.n % H.n == 0
    return True


def rows() -> tuple[TableRow, ...]:
    return tuple(_extra_rows) + _DEFAULT_ROWS


def bound(q: BoundQuery) -> Bound:
    if not embeds(q.H, q.G):
        raise NoTableEntryError(f"{q.H} is not a subgroup of {q.G} in the table")
    for row in rows():
        if row.matches(q):
            return Bound(int(row.value(q)), row.citation, row.ops_assumed)
    raise NoTableEntryError(f"no table entry for Cat_{q.H}({q.G}/G_m), isotropy {q.Gm}, {q.context}")


def load_overrides(path) -> list[TableRow]:
    """Add rows from an INI file; every section needs G, H, isotropy, context, value and citation."""
    parser = configparser.ConfigParser()
    if not parser.read(path):
        raise ConfigError(f"cannot read {path}")
    required = {"g", "h", "isotropy", "context", "value", "citation"}
    new, problems = [], []
    for name in parser.sections():
        sec = parser[name]
        missing = required - set(sec)
        unknown = set(sec) - required
        problems += [f"[{name}] missing key {k!r}" for k in sorted(missing)]
        problems += [f"[{name}] unknown key {k!r}" for k in sorted(unknown)]
        if missing or unknown:
            continue
        if not sec["citation"].strip():
            problems.append(f"[{name}] empty citation")
            continue
        G, H = lie.parse_group(sec["g"]), lie.parse_group(sec["h"])
        iso, ctx, val = sec["isotropy"].strip(), sec["context"].strip(), int(sec["value"])
        if val < 1:
            problems.append(f"[{name}] value must be >= 1")
            continue
        new.append(TableRow(
            name,
            lambda q, G=G, H=H, iso=iso, ctx=ctx: q.G == G and q.H == H and q.Gm == iso and q.context == ctx,
            lambda q, val=val: val,
            sec["citation"].strip(),
        ))
    if problems:
        raise ConfigError(problems)
    _extra_rows[:0] = new
    return new


def clear_overrides() -> None:
    _extra_rows.clear()
