"""Bundled datasets: the Rembrandt paintings context, the airlines
om-space (context plus geodesic distances), the 2022-23 Bundesliga final
table with its domination scales, and the social-network context."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from ..fca import FormalContext, read_cxt
from ..omspace import FiniteMetric, read_distance_csv
from ..order import Poset, poset_from_tsv
from ..scaling import ManyValuedTable, ScaleSpec, read_scaling_spec, read_table_csv

_NAMES = (
    "rembrandt.cxt",
    "airlines.cxt",
    "airlines_dist.csv",
    "bundesliga.csv",
    "bundesliga_scales.json",
    "bundesliga.tsv",
    "socialnet.cxt",
)


def fixture_path(name: str) -> Path:
    if name not in _NAMES:
        raise KeyError(f"unknown fixture {name!r}; have {_NAMES}")
    return Path(str(resources.files(__package__).joinpath(name)))


def fixture_text(name: str) -> str:
    return fixture_path(name).read_text(encoding="utf-8")


def rembrandt() -> FormalContext:
    return read_cxt(fixture_text("rembrandt.cxt"))


def airlines() -> FormalContext:
    return read_cxt(fixture_text("airlines.cxt"))


def airlines_distances() -> FiniteMetric:
    return read_distance_csv(fixture_text("airlines_dist.csv"))


def socialnet() -> FormalContext:
    return read_cxt(fixture_text("socialnet.cxt"))


def bundesliga_table() -> ManyValuedTable:
    return read_table_csv(fixture_text("bundesliga.csv"))


def bundesliga_scales() -> dict[str, ScaleSpec]:
    return read_scaling_spec(fixture_text("bundesliga_scales.json"))


def bundesliga_domination() -> Poset:
    """The strict-domination order shipped as an edge list."""
    return poset_from_tsv(fixture_text("bundesliga.tsv"))
