"""A quick tour of the two worked curve instances.

Builds k[x,y]/(x^3 y + y^5) and k[x,y]/(x^3 + y^4) with weights
deg x = 4, deg y = 3, then prints normal forms, graded pieces, and the
branch data that drives everything else.
"""

from arcurves import (QQ, HypersurfaceRing, factor_hypersurface,
                      gamma_prime, poly_from_string)


def show(ring, title):
    print("=" * 60)
    print(title)
    print("  g =", ring.g.to_string(), " deg g =", ring.deg_g)
    print("  normal form of y^%d:" % ring.ybound,
          ring.normal_form(ring.monomial(0, ring.ybound)).to_string())
    for d in range(0, 13):
        piece = ring.graded_piece(d)
        mono = ["x^%d y^%d" % ij for ij in piece]
        print("  R_%-2d dim %d  %s" % (d, len(piece), ", ".join(mono)))
    for br in factor_hypersurface(ring):
        info = br.describe()
        print("  branch", info["kind"], " h =", info["h"])
        print("    x(t) =", info["parametrization"]["x"],
              "  y(t) =", info["parametrization"]["y"])
        print("    semigroup", info["semigroup_generators"],
              " frobenius", info["frobenius"],
              " conductor", info["conductor"],
              " e =", info["multiplicity"])
        print("    inverse different rep:", gamma_prime(br).to_string())


def main():
    f1 = poly_from_string(QQ, 4, 3, "1*x^0*y^1")
    show(HypersurfaceRing(QQ, p=3, q=4, b=QQ(1), f=f1, m=1, n=2),
         "two-branch curve: g = x^3 y + y^5")
    f2 = poly_from_string(QQ, 4, 3, "1*x^0*y^0")
    show(HypersurfaceRing(QQ, p=3, q=4, b=QQ(1), f=f2, m=1, n=2),
         "cusp domain: g = x^3 + y^4")


if __name__ == "__main__":
    main()
