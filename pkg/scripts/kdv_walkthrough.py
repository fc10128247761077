#!/usr/bin/env python3
"""End-to-end walkthrough on the inverted KdV pair.

Checks both structures, their compatibility by the two independent routes,
the quadratic Casimir of the degenerate structure, and shows why the
bi-pencil test declines this pair (the second leading coefficient has rank
two).
"""

from hamops import catalog, expr as E
from hamops.casimir import CasimirCandidate, casimir_report
from hamops.compatibility import check_compatible, pencil_hamiltonian_check
from hamops.geometry import bi_pencil_check
from hamops.hamiltonian import is_hamiltonian


def main() -> int:
    ctx = catalog.kdv_context()
    A = catalog.kdv_A(ctx)
    B = catalog.kdv_B(ctx)

    print("== first structure ==")
    print(is_hamiltonian(A))
    print("\n== second structure ==")
    print(is_hamiltonian(B))

    print("\n== compatibility: explicit obstruction tensors ==")
    print(check_compatible(A, B))
    print("\n== compatibility: formal-pencil oracle ==")
    print(pencil_hamiltonian_check(A, B))

    print("\n== quadratic Casimir of the second structure ==")
    density = E.parse("(u - w)^2 - sqrt2*(u + w)", ctx)
    print(casimir_report(B, CasimirCandidate(ctx, density), "C10"))

    print("\n== bi-pencil attempt (expected to decline: rank-two block) ==")
    print(bi_pencil_check(A, B))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
