import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bpcc.greedy import initial_solution
from bpcc.model import (
    TABLE1,
    CompatibilityMatrix,
    Instance,
    Solution,
    bin_feasible,
    check_solution,
    fitness_h,
    objective_z,
    validate_instance,
)
from conftest import instances, make


def test_table1_is_valid():
    inst = make(10, [(3, k) for k in range(1, 7)])
    assert validate_instance(inst) is None


def test_asymmetric_matrix_reported():
    m = CompatibilityMatrix(((1, 0), (1, 1)))
    inst = Instance(10, (1,), (0,), m)
    assert validate_instance(inst) == "asymmetric at (1,2)"


def test_non_reflexive_diagonal():
    m = CompatibilityMatrix(((1, 1), (1, 0)))
    assert "non-reflexive" in validate_instance(Instance(10, (1,), (0,), m))


def test_heavy_item_reported():
    inst = make(10, [(5, 1), (11, 1)])
    assert validate_instance(inst).startswith("item exceeds capacity: item 2")


def test_out_of_range_category():
    inst = Instance(10, (1,), (6,), TABLE1)
    assert "out-of-range category 7" in validate_instance(inst)


@pytest.mark.parametrize(
    "cats, expected",
    [((1, 3), True), ((1, 2), False), ((2, 4, 5), True), ((2, 5, 6), False)],
)
def test_bin_feasible_table1(cats, expected):
    inst = make(10, [(1, c) for c in cats])
    assert bin_feasible(inst, range(len(cats))) is expected


def test_bin_feasible_capacity_and_empty():
    inst = make(10, [(6, 1), (5, 1)])
    assert bin_feasible(inst, []) is True
    assert bin_feasible(inst, [0]) is True
    assert bin_feasible(inst, [0, 1]) is False


def test_objective_counts_bins():
    assert objective_z(Solution([[0, 1, 2]])) == 1
    assert objective_z(Solution([[0], [1], [2], [3]])) == 4
    assert objective_z(Solution([[0, 1], [2]])) == 2


def test_fitness_values():
    inst = make(10, [(5, 1), (5, 1)])
    assert fitness_h(Solution([[0, 1]]), inst) == 1.0
    assert fitness_h(Solution([[0], [1]]), inst) == 0.5
    assert fitness_h(Solution([]), inst) == 0.0


def test_check_solution_violations():
    inst = make(10, [(6, 1), (5, 1), (3, 2)])
    assert check_solution(inst, Solution([[0], [1], [2]])) is None
    assert check_solution(inst, Solution([[0, 1], [2]])) == "overweight bin 1: load 11 > 10"
    assert check_solution(inst, Solution([[0], [1, 2]])) == "incompatible categories (1,2) in bin 2"
    assert check_solution(inst, Solution([[0], [1]])) == "unassigned item 3"
    assert check_solution(inst, Solution([[0], [], [1], [2]])).startswith("non-contiguous")
    assert "assigned twice" in check_solution(inst, Solution([[0, 1], [1], [2]]))


def test_assignment_round_trip():
    sol = Solution.from_assignment([4, 4, 1, 7, 1])
    assert sol.bins == [[0, 1], [2, 4], [3]]
    assert sol.assignment(5) == [0, 0, 1, 2, 1]


@given(instances(), st.randoms(use_true_random=False))
def test_fitness_permutation_invariant(inst, r):
    sol = initial_solution(inst)
    h = fitness_h(sol, inst)
    bins = [list(b) for b in sol.bins]
    r.shuffle(bins)
    for b in bins:
        r.shuffle(b)
    assert fitness_h(Solution(bins), inst) == pytest.approx(h, abs=1e-12)


@given(
    st.integers(5, 50).flatmap(
        lambda b: st.tuples(st.just(b), st.integers(1, b), st.integers(1, b), st.integers(0, b))
    )
)
def test_move_gain_sign(args):
    # moving w from load a to load c: fitness rises iff c > a - w
    b, w, a, c = args
    if a < w or c + w > b:
        return
    # squared loads in integers: the common 1/b^2 factor cannot change the sign
    before = a * a + c * c
    after = (a - w) ** 2 + (c + w) ** 2
    assert (after > before) == (c > a - w)


@given(instances())
def test_check_matches_bin_feasible(inst):
    r = random.Random(inst.n)
    assignment = [r.randrange(max(1, inst.n // 2)) for _ in range(inst.n)]
    sol = Solution.from_assignment(assignment)
    all_feasible = all(bin_feasible(inst, b) for b in sol.bins)
    assert (check_solution(inst, sol) is None) == all_feasible
