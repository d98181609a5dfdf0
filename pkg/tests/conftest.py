import math
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from msdiff.exponents import (example_exponent_1, example_exponent_2,
                              figure_transition_exponent, zero_exponent)


def u0_sine(x):
    return np.sin(math.pi * np.asarray(x, float))


def u0_quartic(x):
    x = np.asarray(x, float)
    return x * x * (1.0 - x) ** 2


@pytest.fixture
def exp_ex1():
    return example_exponent_1(1.0)


@pytest.fixture
def exp_ex2():
    return example_exponent_2(1.0)


@pytest.fixture
def exp_fig1():
    return figure_transition_exponent(8.0, 0.4)


@pytest.fixture
def exp_zero():
    return zero_exponent()
