import itertools

import numpy as np
import pytest

from conftest import make_random_instance
from qpms.bitpack import hamming_to_sequence
from qpms.datagen import generate_fm
from qpms.errors import BadParams, BudgetExceeded
from qpms.model import DNA, Lmer, Sequence, encode_sequence, validate_instance
from qpms.scheduler import make_units, schedule
from qpms.solvers import (
    SolverOptions,
    WindowSet,
    filter_windows,
    run_solver,
    solve_oracle,
    solve_qpms7,
    solve_qpmsprune,
    solve_sigma,
    solve_subset_then_verify,
    solve_traver,
    verify_motif,
)

TREE_SOLVERS = {
    "prune": solve_qpmsprune,
    "qpms7": solve_qpms7,
    "traver": solve_traver,
    "sigma": solve_sigma,
}


def _instance(rows, l, d, q):
    return validate_instance(
        [encode_sequence(r, DNA, id=f"s{i}") for i, r in enumerate(rows)], l, d, q)


class TestVerifyMotif:
    def test_common_window_d0(self):
        inst = _instance(["TTACGT", "ACGTTT", "GACGTA"], 4, 0, 3)
        assert verify_motif(inst, Lmer.from_text("ACGT")) == (True, 3)

    def test_d_equals_l_everything_supported(self, rng):
        inst = make_random_instance(rng, n=4, m=12, l=3, d=3, q=4)
        for _ in range(10):
            cand = tuple(int(v) for v in rng.integers(0, 4, 3))
            assert verify_motif(inst, cand) == (True, 4)

    def test_matches_definition_scan(self, rng):
        for _ in range(20):
            inst = make_random_instance(rng, n=4, m=15, l=4)
            cand = tuple(int(v) for v in rng.integers(0, 4, 4))
            support = sum(
                1 for s in inst.sequences
                if hamming_to_sequence(cand, s) <= inst.d
            )
            assert verify_motif(inst, cand) == (support >= inst.q, support)

    def test_wrong_length(self, rng):
        inst = make_random_instance(rng, l=5)
        with pytest.raises(BadParams):
            verify_motif(inst, (0, 1))


def common_lmers(inst):
    """Independent oracle for the d=0, q=n case: exact common substrings."""
    sets = []
    for s in inst.sequences:
        sets.append({
            s.codes[i:i + inst.l] for i in range(inst.m - inst.l + 1)
        })
    return set.intersection(*sets)


class TestOracle:
    def test_two_sequence_example(self):
        inst = _instance(["AAAA", "AAAT"], 2, 0, 2)
        ms = solve_oracle(inst)
        assert ms.to_text() == "AA\t2\n"

    def test_budget_exceeded(self, rng):
        inst = make_random_instance(rng, m=20, l=7)
        with pytest.raises(BudgetExceeded):
            solve_oracle(inst, SolverOptions(algorithm="oracle", oracle_budget=100))

    def test_d_equals_l_q1_is_whole_space(self):
        inst = _instance(["ACGT", "TTTT"], 2, 2, 1)
        assert len(solve_oracle(inst)) == 16

    def test_d0_qn_is_common_substrings(self, rng):
        for _ in range(10):
            inst = make_random_instance(rng, n=3, m=12, l=2, d=0)
            inst = validate_instance(inst.sequences, inst.l, 0, inst.n)
            got = {m.codes for m in solve_oracle(inst).motifs()}
            assert got == common_lmers(inst)


class TestCrossSolverEquality:
    def test_small_random_suite(self, rng):
        for trial in range(24):
            if trial % 2 == 0:
                n = int(rng.integers(3, 7))
                q = int(rng.integers(2, n + 1))
                planted = generate_fm(
                    n, int(rng.integers(10, 26)), int(rng.integers(3, 7)),
                    int(rng.integers(0, 3)), q, seed=1000 + trial)
                inst = planted.instance
            else:
                inst = make_random_instance(rng)
            expected = solve_oracle(inst).to_text()
            for name, solver in TREE_SOLVERS.items():
                assert solver(inst).to_text() == expected, (name, inst.l, inst.d)
            kmin = max(2, inst.n - inst.q + 1)
            for k in sorted({kmin, inst.n}):
                assert solve_subset_then_verify(inst, k=k).to_text() == expected

    def test_q1_falls_back_and_matches(self, rng):
        inst = make_random_instance(rng, n=3, m=8, l=3, d=1, q=1)
        expected = solve_oracle(inst).to_text()
        for solver in TREE_SOLVERS.values():
            assert solver(inst).to_text() == expected

    def test_planted_motif_is_found(self):
        planted = generate_fm(8, 40, 6, 1, 8, seed=77)
        ms = solve_sigma(planted.instance)
        assert planted.motif.codes in [m.codes for m in ms.motifs()]


class TestDegenerateCases:
    def test_d0_scans_windows(self, rng):
        inst = make_random_instance(rng, n=4, m=14, l=3, d=0, q=4)
        got = {m.codes for m in solve_qpmsprune(inst).motifs()}
        assert got == common_lmers(inst)

    def test_qpms7_no_close_pairs_empty(self):
        # every window pair across the two strings is at distance 4 > 2d
        inst = _instance(["AAAAAA", "CCCCCC"], 4, 1, 2)
        assert len(solve_qpms7(inst)) == 0
        assert len(solve_oracle(inst)) == 0

    def test_identical_sequences_d0(self):
        inst = _instance(["ACGTAC"] * 3, 3, 0, 3)
        got = solve_qpms7(inst).to_text()
        assert got == solve_oracle(inst).to_text()
        assert "ACG" in solve_qpms7(inst)


class TestToggleNeutrality:
    def test_traver_toggles_do_not_change_results(self, rng):
        for _ in range(6):
            inst = make_random_instance(rng, n=5, m=18)
            expected = solve_oracle(inst).to_text()
            for sr, pr in itertools.product([False, True], repeat=2):
                opts = SolverOptions(algorithm="traver", string_reordering=sr,
                                     position_reordering=pr)
                assert run_solver(inst, opts).motifs.to_text() == expected

    def test_quorum_prune_disabled_same_set(self, rng):
        for _ in range(6):
            inst = make_random_instance(rng, n=5, m=16)
            base = solve_qpmsprune(inst).to_text()
            off = SolverOptions(algorithm="prune", quorum_prune=False)
            assert run_solver(inst, off).motifs.to_text() == base

    def test_disabling_prune_visits_at_least_as_many_nodes(self, rng):
        inst = make_random_instance(rng, n=6, m=20, l=5, d=2, q=6)
        on = run_solver(inst, SolverOptions(algorithm="prune")).stats
        off = run_solver(
            inst, SolverOptions(algorithm="prune", quorum_prune=False)).stats
        assert off.visited >= on.visited

    def test_sigma_and_traver_visit_identically(self, rng):
        inst = make_random_instance(rng, n=5, m=20)
        a = run_solver(inst, SolverOptions(algorithm="traver")).stats
        b = run_solver(inst, SolverOptions(algorithm="sigma")).stats
        assert (a.visited, a.trees) == (b.visited, b.trees)


class TestMonotonicity:
    def test_supersets_in_d_and_q(self, rng):
        for _ in range(6):
            inst = make_random_instance(rng, n=4, m=14, l=4, d=1, q=3)
            base = {m.codes for m in solve_oracle(inst).motifs()}
            wider_d = validate_instance(inst.sequences, inst.l, inst.d + 1, inst.q)
            lower_q = validate_instance(inst.sequences, inst.l, inst.d, inst.q - 1)
            assert base <= {m.codes for m in solve_oracle(wider_d).motifs()}
            assert base <= {m.codes for m in solve_oracle(lower_q).motifs()}


class TestSubset:
    def test_k_equals_n_is_base_solver(self, rng):
        inst = make_random_instance(rng, n=4, m=14)
        assert solve_subset_then_verify(inst, k=inst.n).to_text() == \
            solve_sigma(inst).to_text()

    def test_invalid_k(self, rng):
        inst = make_random_instance(rng, n=6, m=12, q=3)
        with pytest.raises(BadParams):
            solve_subset_then_verify(inst, k=1)
        with pytest.raises(BadParams):
            solve_subset_then_verify(inst, k=7)
        with pytest.raises(BadParams):
            solve_subset_then_verify(inst, k=2)  # < n - q + 1 = 4

    def test_planted_survives_verification(self):
        planted = generate_fm(6, 30, 5, 1, 6, seed=5)
        ms = solve_subset_then_verify(planted.instance)
        assert planted.motif.codes in [m.codes for m in ms.motifs()]


class TestWindowSet:
    def test_initial_rows(self, rng):
        inst = make_random_instance(rng, n=3, m=10, l=4)
        ws = WindowSet.initial(inst)
        assert ws.row_order() == (0, 1, 2)
        for i in range(3):
            assert ws.row(i).tolist() == list(range(inst.num_windows))

    def test_radius_l_keeps_everything(self, rng):
        inst = make_random_instance(rng, n=3, m=12, l=4)
        ws = filter_windows(WindowSet.initial(inst),
                            inst, (0,) * inst.l, inst.l)
        assert ws.total() == 3 * inst.num_windows

    def test_negative_radius_empties(self, rng):
        inst = make_random_instance(rng, n=3, m=12, l=4)
        ws = filter_windows(WindowSet.initial(inst), inst, (0,) * inst.l, -1)
        assert ws.total() == 0

    def test_matches_naive_refilter_and_sorts_by_size(self, rng):
        for _ in range(10):
            inst = make_random_instance(rng, n=4, m=16, l=4)
            cand = tuple(int(v) for v in rng.integers(0, 4, inst.l))
            radius = int(rng.integers(0, inst.l + 1))
            ws = filter_windows(WindowSet.initial(inst), inst, cand, radius)
            sizes = []
            for i in range(inst.n):
                expected = [
                    w for w in range(inst.num_windows)
                    if sum(1 for a, b in zip(
                        cand, inst.sequences[i].codes[w:w + inst.l]) if a != b)
                    <= radius
                ]
                assert ws.row(i).tolist() == expected
                sizes.append(len(expected))
            order_sizes = [len(ws.row(i)) for i in ws.row_order()]
            assert order_sizes == sorted(sizes)

    def test_shares_one_buffer(self, rng):
        inst = make_random_instance(rng, n=3, m=12, l=4)
        ws0 = WindowSet.initial(inst)
        ws1 = filter_windows(ws0, inst, (0,) * inst.l, 2)
        assert np.shares_memory(ws0._buffer, ws1._buffer)


class TestScheduling:
    def test_unit_count_without_chunking(self, rng):
        inst = make_random_instance(rng, n=3, m=16, l=4)
        assert len(make_units(inst.num_windows, 1)) == inst.num_windows
        res = schedule(inst, SolverOptions(algorithm="sigma"), chunk=1)
        assert res.stats.units == inst.num_windows

    def test_thread_counts_agree(self, rng):
        inst = make_random_instance(rng, n=4, m=20, l=4)
        texts = {
            t: schedule(inst, SolverOptions(algorithm="sigma", threads=t)
                        ).motifs.to_text()
            for t in (1, 2, 4)
        }
        assert len(set(texts.values())) == 1

    def test_stats_deterministic_across_threads(self, rng):
        inst = make_random_instance(rng, n=4, m=20, l=4)
        a = schedule(inst, SolverOptions(algorithm="prune", threads=1)).stats
        b = schedule(inst, SolverOptions(algorithm="prune", threads=2)).stats
        assert (a.visited, a.trees) == (b.visited, b.trees)

    def test_oracle_ignores_threads(self, rng):
        inst = make_random_instance(rng, n=3, m=12, l=3)
        a = schedule(inst, SolverOptions(algorithm="oracle", threads=1))
        b = schedule(inst, SolverOptions(algorithm="oracle", threads=4))
        assert a.motifs.to_text() == b.motifs.to_text()


class TestSolverOptions:
    def test_sigma_implies_compressed(self):
        assert SolverOptions(algorithm="sigma").compressed

    def test_unknown_algorithm(self):
        with pytest.raises(BadParams):
            SolverOptions(algorithm="nope")

    def test_bad_threads(self):
        with pytest.raises(BadParams):
            SolverOptions(threads=0)
