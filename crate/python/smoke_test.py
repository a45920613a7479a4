"""Smoke test for the pyratform extension module.

Build and install first, e.g.

    pip install --no-build-isolation ./crates/python

then run `python python/smoke_test.py`.
"""

from fractions import Fraction

import pyratform
from pyratform import RatFun


def main():
    f = RatFun("(x+y)/(y+z)", ["x", "y", "z"])
    assert f.vars == ["x", "y", "z"]
    assert str(f.partial("x")) == "1/(y + z)"
    assert f.eval([1, 2, 3]) == Fraction(3, 5)
    assert f.eval(["1/2", 0, 1]) == Fraction(1, 2)
    try:
        f.eval([1, 0, 0])
    except ZeroDivisionError:
        pass
    else:
        raise AssertionError("expected a pole")

    x = RatFun("x", ["x", "y", "z"])
    y = RatFun("y", ["x", "y", "z"])
    assert (x * x - y * y) / (x - y) == x + y
    assert (x - x).is_zero()
    assert f.substitute({"z": RatFun("0", ["x", "y", "z"])}) == RatFun("(x+y)/y", ["x", "y", "z"])

    assert f.image_dimension() == 4
    assert f.symbolic_rank() == 4
    assert RatFun("x*y").image_dimension() == 3
    assert not RatFun("x+y", ["x", "y", "z"]).is_nondegenerate()

    p = RatFun("(x+y)^2", ["x", "y"])
    s = RatFun("x+y", ["x", "y"])
    assert p.dependence_certificate(s, 2) == "-q^2 + p"

    r = pyratform.analyze("(x+y)/(y+z)", ["x", "y", "z"])
    assert r["verdict"] == "twisted"
    assert (r["fitted"]["r1"], r["fitted"]["r2"], r["fitted"]["r3"]) == ("x", "y", "z")
    assert r["certificate"]["annihilator"] == "p - q"

    r = pyratform.classify(RatFun("x*(y+z)^3"))
    assert r["verdict"] == "field" and r["fitted"]["n"] == 3

    r = pyratform.analyze("x + y + z + x^2*y^2*z^2")
    assert r["verdict"] == "no-constraint" and r["image_dimension"] == 6

    try:
        RatFun("x +")
    except ValueError:
        pass
    else:
        raise AssertionError("expected a syntax error")

    print("pyratform", pyratform.__version__, "smoke test passed")


if __name__ == "__main__":
    main()
