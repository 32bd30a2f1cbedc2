"""Bundled newform fixtures.

``12.1.a`` (Delta) and ``4.8.a`` are eta-quotient recipes; the others are
coefficient files exported from PARI/GP (see tools/make_fixtures.py) and
must pass :func:`periodrh.qexpansion.validate_hecke` before use.
"""
from importlib import resources
from pathlib import Path

from .qexpansion import load_spec

LABELS = (
    "4.8.a",
    "4.13.a",
    "6.5.a",
    "6.7.a",
    "8.2.a",
    "8.5.a",
    "10.12.a",
    "12.1.a",
    "16.1.a",
)


def fixture_dir() -> Path:
    return Path(resources.files("periodrh") / "fixtures")


def fixture_path(label) -> Path:
    base = fixture_dir()
    for suffix in (".spec", ".txt"):
        path = base / (label + suffix)
        if path.exists():
            return path
    raise KeyError("no bundled fixture %r" % label)


def fixture_spec(label):
    return load_spec(fixture_path(label))


def all_fixture_paths():
    return [fixture_path(label) for label in LABELS]
