#!/usr/bin/env python3
"""Smoke test for the lgcrit_py extension module.

Exercises each binding on the Hirzebruch-surface model and spot-checks a
couple of larger models. Run after `pip install -e crates/lgcrit-py
--no-build-isolation`:

    python3 python/smoke_test.py
"""

import lgcrit_py


def check(cond, msg):
    if not cond:
        raise AssertionError(msg)
    print(f"ok: {msg}")


def main():
    m = lgcrit_py.Model("pb:s=1,a=1")
    check(m.euler == 4, "Hirzebruch model has 4 critical points")
    check(m.pic_rank == 2, "Picard rank 2")
    check(len(m.rays) == 4 and len(m.ray_labels) == 4, "4 rays with labels")
    check(m.divisor_class([1, 0, 0, 0]) == [1, 0], "V(v0) has class (1,0)")
    check(m.canonical_divisor() == [-1, -1, -1, -1], "canonical divisor")
    check(m.cohomology([0, 0, 0, 0])[0] == 1, "h^0(O) = 1")

    homs = m.hom_basis([0, 0], [1, 0])
    check(len(homs) == 2, "Hom(E00, E10) split by two divisors")

    ref = m.reference_collection()
    check(len(ref) == 4 and ref[0][0] == "E(0,0)", "reference collection labels")
    check(m.is_strongly_exceptional([c for _, c in ref]), "collection is strong")
    check(len(m.quiver()) == 7, "quiver has 7 irreducible arrows")

    sols = m.solve(t=-30)
    check(len(sols) == 4, "solve finds all 4 critical points")
    check(all(s.relative_residual < 1e-10 for s in sols), "residuals are small")
    check(sorted(s.label for s in sols) == ["E(0,0)", "E(0,1)", "E(1,0)", "E(1,1)"],
          "asymptotic labels")
    check(isinstance(sols[0].coords[0], complex), "coordinates are complex")

    em = m.exceptional_map()
    check(em["bijective"] and em["stabilized"], "exceptional map bijective + stabilized")
    check(em["classes"]["E(1,1)"] == [1, 1], "E(1,1) maps to class (1,1)")

    ver = m.verify()
    check(ver["pass"], "verification against the reference collection passes")

    fro = m.frobenius()
    check(fro["stabilized"], "Frobenius image stabilized")
    check(len(fro["classes"]) == 4, "Frobenius image has 4 classes")

    perm = m.monodromy([1, 0, 0, 0], t=-24)
    check(perm["E(0,0)"] == "E(1,0)", "V(v0) monodromy sends E(0,0) to E(1,0)")
    check(sorted(perm) == sorted(perm.values()), "monodromy is a permutation")

    al = m.aligned(t=-24)
    check(al["pass"] and al["commuting_generators"], "M-aligned with commuting generators")

    trajs = m.sweep(-20, 20, steps=20)
    check(len(trajs) == 4 and len(trajs[0]["ts"]) == 21, "sweep tracks 4 trajectories")

    big = lgcrit_py.Model("bp:n=4,r=2")
    check(big.euler == 13, "BlowupProduct(4,2) has 13 critical points")
    check(len(big.solve(t=30)) == 13, "all 13 critical points found")

    bb = lgcrit_py.Model("bb:n=5,b=0")
    check(bb.euler == 14, "BlowupBundle(5,0) has 14 critical points")

    print("\nall smoke tests passed")


if __name__ == "__main__":
    main()
