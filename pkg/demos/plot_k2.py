"""Solve a random n = 2, k = 2 instance and write its SVG picture."""

import sys

from fewnomial.instances import random_instance
from fewnomial.plot import plot_instance
from fewnomial.solver import solve_sparse


def main(out: str = "k2_instance.svg", seed: int = 3) -> None:
    inst = random_instance(2, 2, seed, exp_range=4)
    res = solve_sparse(inst)
    print(f"seed {seed}: {res.status}, {res.count} solution(s)")
    if res.ledger:
        print(f"ledger: flat {res.ledger.flat} + |V(Gamma)| {res.ledger.gamma_points}")
    with open(out, "w") as fh:
        fh.write(plot_instance(inst, seed=seed))
    print("wrote", out)


if __name__ == "__main__":
    main(*sys.argv[1:2])
