import os

import pytest

from serrelab.lattice import build_lattice, load_lattice

FIXTURES = os.path.join(os.path.dirname(__file__), os.pardir, "fixtures")


def fixture_path(name):
    return os.path.join(FIXTURES, name)


@pytest.fixture(scope="session")
def pentagon():
    return build_lattice(
        ["0", "a", "b", "c", "1"],
        [("0", "a"), ("0", "b"), ("a", "c"), ("b", "1"), ("c", "1")],
    )


@pytest.fixture(scope="session")
def appendix9():
    return load_lattice(fixture_path("appendix9.json"))


@pytest.fixture(scope="session")
def kite():
    # order ideals of the poset {a<b, a<c}: distributive but not a divisor lattice
    return build_lattice(
        ["e", "a", "ab", "ac", "abc"],
        [("e", "a"), ("a", "ab"), ("a", "ac"), ("ab", "abc"), ("ac", "abc")],
    )
