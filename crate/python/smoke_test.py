"""Smoke test for the axiomlab_py extension.

Build first: pip install -e crates/py --no-build-isolation
"""

from fractions import Fraction as F

import axiomlab_py as ax


def main():
    prof = ax.Profile.from_orders(["a>b>c>d", "a>b>c>d", "b>a>d>c", "b>a>d>c"])
    assert prof.n == 4 and prof.objects == ["a", "b", "c", "d"]

    ps = ax.ps(prof)
    assert ps.rows()[0] == [F(1, 2), 0, F(1, 2), 0]
    assert ps.rows()[2] == [0, F(1, 2), 0, F(1, 2)]

    rsd = ax.rsd(prof)
    assert rsd.rows()[0] == [F(5, 12), F(1, 12), F(5, 12), F(1, 12)]
    efficient, dominator = ax.is_ordinally_efficient(rsd, prof)
    assert not efficient and dominator is not None
    assert ax.strictly_dominates(ps, rsd, prof)
    assert ax.find_strict_dominator(ps, prof) is None
    assert ax.is_expost_efficient(rsd, prof)[0]

    parts = ax.bvn(rsd)
    assert sum(w for w, _ in parts) == 1

    x = ax.Assignment([["1/2", "1/2"], [F(1, 2), "1/2"]])
    assert x == ax.Assignment.uniform(2)

    verdicts = __import__("json").loads(ax.check("rsd", ["local-sp"], exhaustive=3))
    assert verdicts[0]["holds"] and verdicts[0]["transitions"] == 1296

    one = ax.replay(1)
    assert one.success
    assert one.contradiction == "entry (3,c) at profile V: derived 1/6, transferred bound [0,1/12]"
    assert one.matrix("II")[0] == ["1/4", "1/4", "1/3", "1/6"]
    two = ax.replay(2)
    assert two.success and "5/4 > 1" in two.contradiction

    assert ax.search(2) == "infeasible"

    try:
        ax.evaluate("nope", prof)
    except ValueError:
        pass
    else:
        raise AssertionError("unknown mechanism accepted")

    print("smoke test ok")


if __name__ == "__main__":
    main()
