"""Poisson cohomology of the linear Poisson structure on so(3)^*, computed
twice: as Lichnerowicz cohomology of multivector fields and as the
cohomology of the cotangent algebroid."""
from lialgebroid import (
    CochainComplex,
    LichnerowiczComplex,
    betti,
    bivector,
    cotangent_algebroid,
    degree_zero_kernel,
    jacobi_check,
    so3_bivector,
)
from lialgebroid.coefficients import Chart


def main():
    P = so3_bivector()
    print("P =", P, " Poisson:", jacobi_check(P).ok)
    L, A = LichnerowiczComplex(P), cotangent_algebroid(P)
    for w in range(0, 4):
        print(f"w={w}  Lichnerowicz {betti(L.slice(w)).numbers}"
              f"  cotangent {betti(CochainComplex(A).slice(w)).numbers}")
    print("Casimirs at w=2:", [str(c.coefficient(())) for c in degree_zero_kernel(A, 2)])

    # a bivector that fails Jacobi, and the trivector that witnesses it
    Q = bivector(Chart(("x", "y", "z")), {("x", "y"): 1, ("y", "z"): "y"})
    rep = jacobi_check(Q)
    print("Q =", Q, " Poisson:", rep.ok, " [[Q,Q]] =", rep.witness)


if __name__ == "__main__":
    main()
