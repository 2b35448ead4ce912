import random

from hypothesis import given

from bpcc.bounds import l_cont, l_mt
from bpcc.exact import solve_exact
from bpcc.generate import random_instance
from bpcc.greedy import initial_solution
from bpcc.model import CompatibilityMatrix, Instance, check_solution, objective_z
from conftest import instances, make
from oracles import bpp_optimum, brute_force_optimum


def test_incompatibility_forces_split():
    inst = make(10, [(3, 1), (3, 2)])
    res = solve_exact(inst)
    assert res.proven and res.objective == 2
    assert bpp_optimum([3, 3], 10) == 1


def test_three_large_items():
    inst = make(10, [(6, 1)] * 3)
    assert solve_exact(inst).objective == 3 == brute_force_optimum([6] * 3, [0] * 3, [[1]], 10)


def test_single_item():
    res = solve_exact(make(10, [(4, 5)]))
    assert res.objective == 1 and res.proven


@given(instances(max_n=8))
def test_matches_enumeration(inst):
    res = solve_exact(inst)
    assert res.proven
    assert check_solution(inst, res.solution) is None
    assert objective_z(res.solution) == res.objective
    assert res.objective == brute_force_optimum(
        inst.weights, inst.categories, inst.compat.entries, inst.capacity
    )


@given(instances(max_n=12))
def test_bound_chain(inst):
    res = solve_exact(inst)
    assert res.proven
    assert res.objective >= l_mt(inst).value >= l_cont(inst).value
    assert res.objective <= objective_z(initial_solution(inst))


def test_compatibility_monotone():
    r = random.Random(5)
    for seed in range(40):
        inst = random_instance(seed, r.randint(4, 11), b=50)
        relaxed = Instance(inst.capacity, inst.weights, inst.categories, CompatibilityMatrix.all_compatible(6))
        assert solve_exact(relaxed).objective == bpp_optimum(list(inst.weights), inst.capacity)
        assert solve_exact(inst).objective >= solve_exact(relaxed).objective


def test_budget_exceeded_keeps_incumbent():
    inst = random_instance(1, 60, b=1000, lo=0.3, hi=0.5)
    res = solve_exact(inst, limit=200)
    assert not res.proven
    assert check_solution(inst, res.solution) is None
    assert res.objective == objective_z(res.solution)
