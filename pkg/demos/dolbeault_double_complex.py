"""The complexified tangent algebroid of C^n as a matched pair
T^{1,0} + T^{0,1}: its double complex, the total complex, and the
spectral sequence filtered by holomorphic degree."""
from lialgebroid import CochainComplex, betti, bowtie, check_matched, double_complex
from lialgebroid.matched import dolbeault_pair


def main():
    M = dolbeault_pair(1)
    print("matched:", check_matched(M).ok)
    B = bowtie(M)
    print("bowtie generators:", B.names)
    for w in range(-1, 3):
        dc = double_complex(M, w)
        dims = {pq: dc.dim(*pq) for pq in dc.bidegrees}
        total = betti(dc.total()).numbers
        direct = betti(CochainComplex(B).slice(w)).numbers
        print(f"w={w:>2}  dims {dims}  total {total}  bowtie {direct}")

    # at w=1, E1 keeps the holomorphic z and dz; d z = dz kills both on E2
    dc = double_complex(M, 1)
    for page in dc.filtered_total().pages(2):
        print(f"E{page.index}", dict(sorted(page.table.items())))


if __name__ == "__main__":
    main()
