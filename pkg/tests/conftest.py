import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from loglegendre import ParamSet  # noqa: E402


@pytest.fixture(scope="session")
def example1() -> ParamSet:
    """n=3 instance at z=-1 behind the first-order log 2 bound."""
    return ParamSet(p=(4, 5, 3), q=(1, 2, 0), z=Fraction(-1), m=1)


@pytest.fixture(scope="session")
def example2() -> ParamSet:
    """n=4 instance at z=-1 behind the second-order log 2 bound."""
    return ParamSet(p=(5, 6, 7, 4), q=(1, 2, 3, 0), z=Fraction(-1), m=2)
