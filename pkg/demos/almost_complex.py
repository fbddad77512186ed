"""Almost complex structures on heis_3 + R: one integrable, one not.  The
Nijenhuis tensor tells them apart, and so does whether the +i eigenbundle
is closed under the bracket."""
from lialgebroid import AlmostComplexStructure, complexified_presentation, nijenhuis, standard_j
from lialgebroid.models import lie_algebra_point


def main():
    g = lie_algebra_point({(0, 1): {2: 1}}, names=["e1", "e2", "e3", "e4"])
    skew = [[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]]
    for label, J in (("J e1 = e2, J e3 = e4", standard_j(4)), ("J e1 = e3, J e2 = e4", skew)):
        S = AlmostComplexStructure(g, J)
        rep = nijenhuis(S)
        print(label, " integrable:", rep.ok)
        for pair, value in rep.values.items():
            if not value.is_zero():
                print("   N", pair, "=", [str(c) for c in value.coeffs])
        B = complexified_presentation(S)
        m = B.rank // 2
        closed = all(not B.structure[i][j][k]
                     for i in range(m) for j in range(m) for k in range(m, 2 * m))
        print("   A^{1,0} closed under the bracket:", closed)


if __name__ == "__main__":
    main()
