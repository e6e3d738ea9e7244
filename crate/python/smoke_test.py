"""Smoke test for the hicat extension module.

    pip install --no-build-isolation -e crates/py
    python python/smoke_test.py
"""

import hicat


def main():
    module = hicat.Model("module", 2, 3)
    assert len(module) == 10
    assert module.objects()[0] == [1, 3, 5]
    assert (1, 3, 5) in module
    assert module.hom((1, 3, 5), (1, 3, 6)) == 1
    assert module.hom((1, 3, 6), (1, 3, 5)) == 0
    assert module.ext((2, 4, 6), (1, 3, 5)) == 1
    assert module.descriptor()["kind"] == "module"

    ap = hicat.Model("almost-positive", 2, 3)
    assert len(ap) == 16
    assert ap.classify((2, 4, 8))["shifted_projective"]

    e = ap.exangle((2, 4, 6), (1, 3, 5))
    assert e.a == [1, 3, 5] and e.b == [2, 4, 6]
    assert e.middles == [[[1, 3, 6]], [[1, 4, 6]]]
    assert e.differentials == [[[1]], [[-1]], [[1]]]
    assert e.is_complex() and e.is_hom_exact()
    assert set(e.to_json()) == {"A", "B", "middles", "differentials"}

    q = hicat.Model("module", 2, 4).quotient()
    assert len(q.zero_objects()) == 4
    assert sorted(q.objects()) == sorted(ap.objects())

    a3 = hicat.Model("almost-positive", 1, 2)
    sets = a3.maximal_rigid()
    assert len(sets) == 5
    for s in sets:
        assert a3.is_maximal_rigid(s)
        for x in s:
            u = a3.mutate(s, x)
            if u is not None:
                y = next(t for t in u if t not in s)
                assert sorted(a3.mutate(u, y)) == sorted(s)

    dot = hicat.emit_quiver(2, 3)
    assert dot.startswith("digraph {") and '"1,4" -> "2,4";' in dot
    assert '"1,3,5" -> "1,3,6";' in module.emit()

    run = hicat.verify("equiv", grid="2:3:200")
    assert all(r["passed"] for r in run["reports"]), run
    reports = hicat.verify("sanity", d=1, n=2)
    assert len(reports) == 5 and all(r["passed"] for r in reports)
    assert hicat.correspondence(2, 2)["passed"]

    try:
        module.hom((1, 2), (1, 3))
    except ValueError:
        pass
    else:
        raise AssertionError("consecutive entries should be rejected")

    print("smoke test passed")


if __name__ == "__main__":
    main()
