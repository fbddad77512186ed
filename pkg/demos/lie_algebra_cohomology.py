"""Chevalley-Eilenberg cohomology of small Lie algebras, viewed as
algebroids over a point, with trivial and adjoint coefficients."""
from lialgebroid import (
    CochainComplex,
    adjoint_representation,
    betti,
    betti_range,
    validate_representation,
)
from lialgebroid.models import abelian, heisenberg3, sl2


def main():
    for name, g in (("abelian^2", abelian(2)), ("heisenberg_3", heisenberg3()), ("sl_2", sl2())):
        (table,) = betti_range(g, [0])
        print(f"{name:<13} Betti {table.numbers}")

    # Whitehead: a semisimple algebra has no cohomology with adjoint coefficients
    s = sl2()
    ad = adjoint_representation(s)
    print("ad(sl_2) flat:", validate_representation(ad).ok)
    print("H(sl_2; ad)  ", betti(CochainComplex(s, ad).slice(0)).numbers)


if __name__ == "__main__":
    main()
