"""A holomorphic Poisson bivector and its conjugate form a matched pair;
the total complex of its double complex computes the cohomology of the
bowtie algebroid."""
from lialgebroid import (
    CochainComplex,
    betti,
    bihamiltonian_check,
    bivector,
    bowtie,
    check_matched,
    check_skew_holomorphic,
    double_complex,
    skew_pair,
)
from lialgebroid.matched import dolbeault_chart


def main():
    chart = dolbeault_chart(2)
    for coeff in ("1", "z", "z + 2*w"):
        P = bivector(chart, {("z", "w"): coeff})
        M = skew_pair(P, P)
        print(f"P = {P}")
        print("  matched:", check_matched(M).ok,
              " skew-holomorphic:", check_skew_holomorphic(M).ok,
              " bihamiltonian:", bihamiltonian_check(P, P).ok)
        B = bowtie(M)
        for w in (-1, 0, 1):
            total = betti(double_complex(M, w).total()).numbers
            direct = betti(CochainComplex(B).slice(w)).numbers
            print(f"  w={w:>2}  total {total}  bowtie {direct}")


if __name__ == "__main__":
    main()
