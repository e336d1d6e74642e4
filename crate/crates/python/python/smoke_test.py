"""Smoke test for the pysphdesign extension module.

Build and install first, e.g. `pip install --no-build-isolation crates/python`
or `maturin develop -m crates/python/Cargo.toml`, then run this file.
"""

import json

import pysphdesign as sd


def main():
    assert sd.dgs_bound(2, 3) == 6
    assert sd.dgs_bound(23, 11) == 196560
    assert sd.classify(2, 9)[0] == "open"
    assert sd.classify(3, 7)[0] == "infeasible"

    u = sd.build(4, 15)
    assert (u.dimension, u.size, len(u)) == (4, 15, 15)
    assert u.verify(3).passed and u.moment_check(3).passed
    assert u.provenance.startswith("merge63")
    for p in u.points():
        assert abs(sum(x * x for x in p) - 1.0) < 1e-12

    again = sd.Design.parse(u.to_text())
    assert again.points() == u.points()
    assert json.loads(u.to_json())["n"] == 15

    tri = sd.polygon(3)
    report = tri.verify(3)
    assert not report.passed
    assert abs(report.residual_by_degree[3] - 3.0) < 1e-12

    oct4 = sd.octahedron(4)
    assert oct4.verify(3, 0.0).max_residual == 0.0

    assert sd.is_sidon([1, 3], 8)
    assert not sd.is_sidon([1, 2], 6)
    assert sd.construct_bound_set(25) == [1, 6, 11, 16, 21]
    r = sd.max_sidon_search(12)
    assert (r.max_cardinality, r.witness, r.complete) == (3, [1, 3, 5], True)
    partial = sd.max_sidon_search(61, max_nodes=50)
    assert not partial.complete

    pent = sd.build_regular([1], 5)
    lifted = sd.lift_3_3(sd.build_regular([1, 2], 7, 2))
    assert (lifted.dimension, lifted.size) == (4, 14) and lifted.verify().passed
    merged = sd.merge_6_1(sd.build_regular([1, 3], 8), pent, 2, 2)
    assert merged.size == 13 and merged.verify().passed

    rows = sd.results_table(9)
    assert rows[1] == (2, 6, "6, 8, ≥ 10")
    assert sd.harm_dim(2, 3) == len(sd.phi_basis(2, 3)) == 7

    try:
        sd.build(2, 7)
    except ValueError as e:
        assert "open" in str(e)
    else:
        raise AssertionError("build(2, 7) should fail")

    print("pysphdesign smoke test passed:", u, report, r, sep="\n  ")


if __name__ == "__main__":
    main()
