"""Walking a stable component by repeated pushing.

Starts at the ideal module, expands almost split sequences breadth
first for three rounds, and prints what the fragment looks like: the
modules found, the translation orbits, the shape classification, and
the additivity check on the orbit quiver.  Ends with the DOT source so
the mesh can be rendered with graphviz.
"""

from arcurves import (HypersurfaceRing, QQ, explore_component, gamma_for,
                      mf_from_ideal, to_dot)


def main():
    ring = HypersurfaceRing(QQ, p=3, q=4, b=QQ(1), f="1*x^0*y^1", m=1, n=2)
    print("ring:", ring.describe()["g"])
    gd = gamma_for(ring)
    I = mf_from_ideal(ring).cok(label="I")
    report = explore_component(I, gd, depth=3)

    print("sequences expanded:", report["sequences"])
    print("modules in the fragment:")
    for m in report["modules"]:
        marker = "pushed" if m["pushed"] else "boundary"
        print("  %-3s gens %-20s e_avg %-4s middle e_avg %-4s %s"
              % (m["name"], m["gens"], m["e_avg"],
                 m["e_avg_middle"] or "-", marker))
    print("middle summand counts:", report["middle_parts"])
    print("classification:", report["classification"])

    q = report["quiver"]
    print("translation:", {v: q.tau[v] for v in sorted(q.tau)})
    orbits = report["orbit_quiver"]
    print("orbit quiver vertices:", sorted(orbits.labels))
    sub = report["subadditive"]
    print("additivity on orbits: status=%s checked=%s skipped=%s"
          % (sub["status"], sub["checked"], sub["skipped"]))

    print()
    print("DOT source of the fragment:")
    print(to_dot(q))


if __name__ == "__main__":
    main()
