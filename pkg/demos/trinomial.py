"""Walk 2 - 3x + x^3 through its double root and count real roots both ways."""

from fractions import Fraction

from fewnomial.gale import SparseSystem
from fewnomial.oracle import oracle_count
from fewnomial.solver import solve_sparse


def main() -> None:
    for c0 in (Fraction(199, 100), Fraction(2), Fraction(201, 100)):
        sys = SparseSystem.from_data([[0], [1], [3]], [[c0, -3, 1]])
        res = solve_sparse(sys)
        orc = oracle_count(res.system or sys)
        roots = ", ".join(f"{s.x[0]:.5f}" for s in res.solutions)
        tag = " (perturbed)" if res.perturbed else ""
        print(f"c0 = {c0}: KR {res.status} {res.count}{tag} [{roots}]  oracle {orc.count}")
    # even index: the odd-index hypothesis is needed
    even = SparseSystem.from_data([[0], [2], [4]], [[4, -5, 1]])
    print("x^4 - 5x^2 + 4: oracle", oracle_count(even).count, "nonzero real roots")
    try:
        solve_sparse(even)
    except Exception as exc:
        print("solve_sparse refuses it:", type(exc).__name__)


if __name__ == "__main__":
    main()
