from __future__ import annotations

from pathlib import Path

import pytest

import orbitrig as rig

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "fixtures"


def two_group(l: int) -> rig.AbelianGroup:
    return rig.AbelianGroup((2,) * l)


def mirror_rep() -> rig.PointRepresentation:
    """Reflection in the x-y plane."""
    return rig.PointRepresentation.from_generators(
        two_group(1), 3, [rig.SquareMatrix.from_rows([[1, 0, 0], [0, 1, 0], [0, 0, -1]])]
    )


def halfturn_rep() -> rig.PointRepresentation:
    """Half-turn about the x axis."""
    return rig.PointRepresentation.from_generators(
        two_group(1), 3, [rig.SquareMatrix.from_rows([[1, 0, 0], [0, -1, 0], [0, 0, -1]])]
    )


def stewart_graph(group: rig.AbelianGroup) -> rig.GainGraph:
    """One body orbit, four bar orbits with the non-identity gain, two of
    them non-free."""
    return rig.make_gain_graph(
        ["v"],
        [(0, "v", "v", (1,)), (1, "v", "v", (1,)), (2, "v", "v", (1,)), (3, "v", "v", (1,))],
        loops_l=[2, 3],
        group=group,
    )


@pytest.fixture
def cs_rep():
    return mirror_rep()


@pytest.fixture
def c2_rep():
    return halfturn_rep()


@pytest.fixture
def cs_stewart(cs_rep):
    return stewart_graph(cs_rep.group), cs_rep


@pytest.fixture
def c2_stewart(c2_rep):
    return stewart_graph(c2_rep.group), c2_rep


@pytest.fixture
def fixture_dir():
    return FIXTURE_DIR
