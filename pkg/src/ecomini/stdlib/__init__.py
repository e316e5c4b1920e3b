"""The bundled ECO-mini graph library and its two scenario scripts."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

LIBRARY_FILES = (
    "graph.eco",
    "labeling.eco",
    "orientation.eco",
    "embedding.eco",
    "orth_shape.eco",
    "conncomp.eco",
    "planar.eco",
)
SCENARIO_FILES = ("scenario_fig2.eco", "scenario_fig4.eco")


def path(name: str) -> Path:
    return Path(str(resources.files(__name__).joinpath(name)))


def source(name: str) -> str:
    return path(name).read_text(encoding="utf-8")


def library_paths() -> list[Path]:
    return [path(n) for n in LIBRARY_FILES]
