import numpy as np
import pytest

from primerace.events import compile_event, ordering_event, top_s_event

DRAWS = np.array([
    [3.0, 2.0, 1.0],
    [1.0, 2.0, 3.0],
    [2.0, 3.0, 1.0],
    [0.5, -1.0, -2.0],
])


def test_order():
    ev = compile_event("order", 3)
    assert ev(DRAWS).tolist() == [True, False, False, True]


def test_top_s():
    ev = compile_event("top:1", 3)
    assert ev(DRAWS).tolist() == [True, False, False, True]
    ev2 = compile_event("top:2", 3)
    assert ev2(DRAWS).tolist() == [True, False, False, True]
    ev3 = top_s_event(3, 3)
    assert ev3(DRAWS).tolist() == ordering_event(3)(DRAWS).tolist()


def test_comparisons():
    assert compile_event("x1>0 & x2>0", 3)(DRAWS).tolist() == [True, True, True, False]
    assert compile_event("x1>x2", 3)(DRAWS).tolist() == [True, False, False, True]
    assert compile_event("x3<=-2", 3)(DRAWS).tolist() == [False, False, False, True]
    assert compile_event("x2 >= 2 & x1 < 3", 3)(DRAWS).tolist() == [False, True, True, False]
    assert compile_event("-1.5<x3", 3)(DRAWS).tolist() == [True, True, True, False]


def test_parse_errors():
    with pytest.raises(ValueError, match="cannot parse"):
        compile_event("x1 !> 0", 2)
    with pytest.raises(ValueError, match="out of range"):
        compile_event("x3>0", 2)
    with pytest.raises(ValueError, match="top:4"):
        compile_event("top:4", 3)
    with pytest.raises(ValueError, match="cannot parse"):
        compile_event("", 2)
