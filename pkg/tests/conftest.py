from pathlib import Path

import pytest

from qmetric import quantales
from qmetric.ddf import DDF

DATA = Path(__file__).resolve().parent.parent / "demos" / "data"
INF = float("inf")


@pytest.fixture
def data():
    return DATA


@pytest.fixture(params=["truth", "extreal", "unit", "errors", "ddf"])
def builtin(request):
    return quantales.get_quantale(request.param)


@pytest.fixture
def ddf():
    return DDF()
