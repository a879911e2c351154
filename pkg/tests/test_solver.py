import json

import pytest
from fractions import Fraction

from fewnomial.errors import EvenIndex, RankDeficient, UnsupportedK
from fewnomial.gale import GaleDual, SparseSystem, build_gale_dual
from fewnomial.instances import random_instance
from fewnomial.master import MasterSystem, build_gamma_chain, generic_basis
from fewnomial.oracle import oracle_count
from fewnomial.solver import (
    VERIFIED,
    SolveOptions,
    boundary_starts,
    sign_condition,
    solve_gamma_system,
    solve_master,
    solve_sparse,
    trace_curve,
)


def tri(c0):
    return SparseSystem.from_data([[0], [1], [3]], [[c0, -3, 1]])


def test_gamma_system_k1(trinomial):
    ms = MasterSystem.from_gale(build_gale_dual(trinomial, free=[0]))
    assert solve_gamma_system(build_gamma_chain(ms), ms) == [(pytest.approx(1.0),)]
    gd = GaleDual.from_forms([(0, 1), (-1, 1)], [(1,), (-1,)])
    ms2 = MasterSystem.from_gale(gd)
    assert solve_gamma_system(build_gamma_chain(ms2), ms2) == []


@pytest.mark.parametrize("seed", range(4))
def test_gamma_system_k2_bezout(seed):
    ms = generic_basis(MasterSystem.from_gale(build_gale_dual(random_instance(1, 2, seed, exp_range=6))), seed=seed)
    pts = solve_gamma_system(build_gamma_chain(ms), ms)
    assert len(pts) <= 2


def test_unperturbed_trinomial_flags_double_root(trinomial):
    res = solve_sparse(trinomial)
    assert res.status == VERIFIED
    assert [s.x[0] for s in res.solutions] == [pytest.approx(-2.0)]
    assert len(res.degenerate) == 1 and res.degenerate[0].x[0] == pytest.approx(1.0, abs=1e-6)


def test_perturbed_trinomials():
    below = solve_sparse(tri(Fraction(199, 100)))
    assert sorted(s.x[0] for s in below.solutions) == pytest.approx([-1.99889, 0.94170, 1.05719], abs=1e-5)
    above = solve_sparse(tri(Fraction(201, 100)))
    assert above.count == 1 == oracle_count(tri(Fraction(201, 100))).count


def test_always_perturb_is_recorded(trinomial):
    res = solve_sparse(trinomial, SolveOptions(perturb="always", seed=3))
    assert res.perturbed and res.system != trinomial
    assert res.count == oracle_count(res.system).count


def test_hypothesis_failures():
    with pytest.raises(EvenIndex, match="odd index"):
        solve_sparse(SparseSystem.from_data([[0], [2], [4]], [[4, -5, 1]]))
    with pytest.raises(RankDeficient, match="infinitely many"):
        solve_sparse(SparseSystem.from_data([[0, 0], [1, 1], [2, 2]], [[1, 1, 1], [1, 2, 3]]))
    with pytest.raises(UnsupportedK):
        solve_sparse(random_instance(1, 3, 0, exp_range=6))


def test_unit_simplex():
    sys = SparseSystem.from_data([[0, 0], [1, 0], [0, 1]], [[-1, 1, 0], [-2, 0, 1]])
    res = solve_sparse(sys)
    assert res.count == 1 == oracle_count(sys).count
    assert res.solutions[0].x == (1, 2)
    # x = 0 is forced, so no torus solution
    empty = SparseSystem.from_data([[0, 0], [1, 0], [0, 1]], [[0, 1, 0], [-2, 0, 1]])
    assert solve_sparse(empty).count == 0 == oracle_count(empty).count


def test_square_support_k1():
    sys = SparseSystem.from_data([[0, 0], [1, 0], [0, 1], [1, 1]], [[-1, 1, 0, 0], [-2, 0, 1, 0]])
    assert solve_sparse(sys).count == 1 == oracle_count(sys).count
    sys2 = SparseSystem.from_data([[0, 0], [1, 0], [0, 1], [1, 1]], [[-1, 1, 0, 1], [-2, 0, 1, 1]])
    assert solve_sparse(sys2).count == oracle_count(sys2).count


def test_sign_condition():
    gd = GaleDual.from_forms([(0, 1), (-2, 3)], [(3,), (-1,)])
    ms = MasterSystem.from_gale(gd)
    assert sign_condition(ms, (1, 1)) and sign_condition(ms, (-1, -1))
    assert not sign_condition(ms, (-1, 1))


CASES = [(1, 1, 20), (2, 1, 4), (1, 2, 6), (2, 2, 3)]


@pytest.mark.parametrize("n,k,E", CASES)
@pytest.mark.parametrize("seed", range(5))
def test_matches_oracle(n, k, E, seed):
    sys = random_instance(n, k, 100 + seed, exp_range=E)
    res = solve_sparse(sys, SolveOptions(seed=seed))
    assert res.status == VERIFIED, res.notes
    assert res.count == oracle_count(res.system).count
    assert not res.ledger_violations()
    for s in res.solutions:
        assert s.residual < 1e-10
        assert s.sigma_min > 1e-8
        assert s.sparse_residual < 1e-8


@pytest.mark.parametrize("seed", [11, 115])
def test_zero_weight_form_is_solved_around(seed):
    # one form carries an all-zero weight row, so its line is not a pole of psi
    sys = random_instance(2, 2, seed, exp_range=4)
    res = solve_sparse(sys)
    assert res.status == VERIFIED
    assert any("zero weights" in note for note in res.notes)
    assert res.count == oracle_count(res.system).count == 2


def test_compact_oval_is_traced_all_the_way_round():
    # an oval of C_2 carries two of the three solutions; an early "closed"
    # verdict used to drop them for this basis seed
    sys = random_instance(2, 2, 1000078, exp_range=4)
    res = solve_sparse(sys, SolveOptions(seed=1000078))
    assert res.status == VERIFIED
    assert res.count == oracle_count(sys).count == 3
    assert res.traces[1].closed >= 1


def test_boundary_starts_k1(trinomial):
    ms = MasterSystem.from_gale(build_gale_dual(trinomial, free=[0]))
    starts = boundary_starts(ms, 1)
    assert [s["point"] for s in starts] == [(0.0,), (pytest.approx(2 / 3),), None]


def test_boundary_starts_and_trace_k2():
    sys = random_instance(1, 2, 5, exp_range=6)
    ms = generic_basis(MasterSystem.from_gale(build_gale_dual(sys)), seed=0)
    n = ms.n
    starts = boundary_starts(ms, 1)
    per_line = {}
    for s in starts:
        if len(s["face"]) == 1:
            per_line[s["face"]] = per_line.get(s["face"], 0) + 1
    # each root of F_0 on a line starts one branch on either side
    assert all(v <= 2 * n for v in per_line.values())
    c1 = trace_curve(ms, 1)
    c2 = trace_curve(ms, 2)
    assert c1.j == 1 and c2.j == 2 and c1.failures == c2.failures == 0
    assert all(len(arc) >= 2 for arc in c1.arcs + c2.arcs)


def test_solve_master_rejects_k3():
    ms = MasterSystem.from_gale(build_gale_dual(random_instance(1, 3, 0, exp_range=6)))
    with pytest.raises(UnsupportedK):
        solve_master(ms)


def test_report_is_json_and_deterministic():
    sys = random_instance(2, 2, 7, exp_range=3)
    a = json.dumps(solve_sparse(sys, SolveOptions(seed=1)).to_dict(), sort_keys=True)
    b = json.dumps(solve_sparse(sys, SolveOptions(seed=1)).to_dict(), sort_keys=True)
    assert a == b
