#!/usr/bin/env python3
"""Short tour: a non-full corner, zero-component blocks, and a stabilization run."""

from gradealg.finalg import field_algebra, is_full, matrix_algebra, matrix_unit, zero_component_sub
from gradealg.graph import Graph
from gradealg.lpa import LpaAlgebra, fullness_certificate_primitive
from gradealg.matinf import GradedMatrix, degree_of
from gradealg.morita import decide_hge, zero_component_blocks
from gradealg.stabilization import stab_iso


def main() -> None:
    A = matrix_algebra(field_algebra(), 2, [(1,), (0,)])
    e = matrix_unit(A, 2, 1, 1)
    A0 = zero_component_sub(A)
    print(f"e11 full in A: {is_full(A, e)}; full in A_0: {is_full(A0.alg, A0.restrict(e))}")

    loop = Graph(["v"], [("e", "v", "v")])
    cycle = Graph(["v", "w"], [("e", "v", "w"), ("f", "w", "v")])
    print(f"zero-component blocks: loop {zero_component_blocks(loop, 3)}, 2-cycle {zero_component_blocks(cycle, 3)}")
    print(f"loop vs 2-cycle: {decide_hge(loop, cycle).status}")

    E = Graph(["1", "2"], [("a", "1", "2"), ("b", "2", "1"), ("c", "2", "2")])
    L = LpaAlgebra(E)
    cert = fullness_certificate_primitive(L, "1")
    iso = stab_iso(L, L.vertex("1"), cert.witness(), depth=3)
    # indices that are multiples of depth + 1 need a deeper sequence
    x = GradedMatrix(L, {(2, 3): L.parse("a.c")})
    y = iso.forward(x)
    print(f"x = {L.format(x.entries[(2, 3)])} at (2, 3)")
    print(f"forward(x) has {len(y.entries)} entries, degree {degree_of(y)} (x has {degree_of(x)})")
    print(f"backward(forward(x)) == x: {iso.backward(y) == x}")


if __name__ == "__main__":
    main()
