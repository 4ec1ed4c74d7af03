"""Smoke test for the weyl extension module."""

import math
import pathlib

import weyl

CONFIGS = pathlib.Path(__file__).resolve().parent.parent / "configs"


def main():
    ev = weyl.exact_spectrum("hemisphere", 10)
    assert ev == [2.0, 6.0, 6.0, 12.0, 12.0, 12.0, 20.0, 20.0, 20.0, 20.0], ev
    assert weyl.counting_function(ev, 12.0) == 6

    pred, ratio = weyl.extrapolate(10.99889, 10.99704, 10.99658)
    assert abs(pred - 10.99643) < 5e-5, pred

    disc = weyl.Domain.from_path(CONFIGS / "disc_dirichlet.toml")
    k = disc.constants()
    assert abs(k["area"] - math.pi) < 1e-12
    assert abs(k["c"] - 1.0 / 6.0) < 1e-12
    assert disc.space == "euclidean" and disc.oracle == "disc-d"

    mesh = disc.mesh(refinements=1)
    assert len(mesh["triangles"]) > 0 and mesh["level"] == 1

    tri = weyl.Domain.from_path(CONFIGS / "right_isosceles.toml")
    spec = tri.solve(refinements=3, num_eigs=5)
    assert len(spec) == 5
    assert abs(spec.predicted[0] / math.pi**2 - 5.0) < 1e-2, spec.predicted
    back = weyl.Spectrum.from_text(spec.to_text())
    assert back.predicted == spec.predicted

    oracle = weyl.exact_spectrum("disc-d", 200)
    graphs = disc.analyze(oracle, samples=512)
    assert [g.number for g in graphs] == [1, 2, 3, 4, 5, 6]
    assert graphs[0].y[-1] == 200

    gaps = weyl.gap_stats(oracle, 1.0)
    assert len(gaps["differences"]) == 199

    try:
        weyl.Domain.from_toml('shape = "disc"\nspace = "euclidean"\nradius = 1.0\nbc = "D"\nbogus = 1\n')
    except ValueError as e:
        assert "bogus" in str(e)
    else:
        raise AssertionError("unknown key accepted")

    print("smoke test passed")


if __name__ == "__main__":
    main()
