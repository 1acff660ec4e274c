"""Photon-level tests: mode unitaries, ancilla states, teleportation, the gate."""

import math

import numpy as np
import pytest

from freearm import fock

SQ2 = math.sqrt(2)


def random_unitary(d, seed):
    g = np.random.default_rng(seed)
    m = g.normal(size=(d, d)) + 1j * g.normal(size=(d, d))
    q, _ = np.linalg.qr(m)
    return q


class TestFockState:
    def test_normalization_enforced(self):
        with pytest.raises(fock.FockError):
            fock.FockState(2, {(1, 0): 1.0, (0, 1): 1.0})

    def test_tensor_and_overlap(self):
        a = fock.single_photon(2, 0)
        b = fock.single_photon(2, 1)
        ab = a.tensor(b)
        assert ab.modes == 4
        assert ab.terms == {(1, 0, 0, 1): (1 + 0j)}
        assert a.fidelity(b) == 0
        assert a.fidelity(a) == pytest.approx(1)

    def test_dual_rail_validation(self):
        q = fock.dual_rail(0.6, 0.8j)
        assert q.photon_numbers() == {1}


class TestModeUnitaries:
    def test_two_photon_interference(self):
        """A balanced splitter on |1,1> gives (|2,0> - |0,2>)/sqrt(2)."""
        bs = fock.ModeUnitary((0, 1), np.array([[1, 1], [1, -1]]) / SQ2)
        out = fock.apply_mode_unitary(fock.FockState(2, {(1, 1): 1.0}), bs)
        assert out.terms[(2, 0)] == pytest.approx(1 / SQ2)
        assert out.terms[(0, 2)] == pytest.approx(-1 / SQ2)
        assert (1, 1) not in out.terms

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_fourier_matrix_unitary(self, d):
        f = fock.fourier_matrix(d)
        assert np.allclose(f @ f.conj().T, np.eye(d), atol=1e-12)
        assert np.allclose(f[:, 0], np.ones(d) / math.sqrt(d))

    @pytest.mark.parametrize("seed", [0, 1])
    def test_random_unitary_preserves_norm_and_number(self, seed):
        st = fock.FockState(4, {(1, 0, 2, 0): 0.8, (0, 1, 0, 2): 0.6j})
        u = fock.ModeUnitary((0, 1, 2, 3), random_unitary(4, seed))
        out = fock.apply_mode_unitary(st, u)
        assert out.norm_sq() == pytest.approx(1, abs=1e-10)
        assert out.photon_numbers() == {3}

    def test_composition_matches_matrix_product(self):
        u1 = random_unitary(3, 2)
        u2 = random_unitary(3, 3)
        st = fock.FockState(3, {(1, 1, 0): 1.0})
        seq = fock.apply_mode_unitary(
            fock.apply_mode_unitary(st, fock.ModeUnitary((0, 1, 2), u1)),
            fock.ModeUnitary((0, 1, 2), u2))
        direct = fock.apply_mode_unitary(st, fock.ModeUnitary((0, 1, 2), u2 @ u1))
        assert seq.fidelity(direct) == pytest.approx(1, abs=1e-10)

    def test_non_unitary_rejected(self):
        with pytest.raises(fock.FockError):
            fock.ModeUnitary((0, 1), np.array([[1, 1], [0, 1]]))


class TestAncillaStates:
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_resource_state_structure(self, n):
        t = fock.make_t_resource(n)
        assert t.modes == 2 * n
        assert len(t.terms) == n + 1
        assert t.photon_numbers() == {n}
        assert t.norm_sq() == pytest.approx(1)

    @pytest.mark.parametrize("n,i,occ", [
        (2, 0, (0, 0, 1, 1)),
        (2, 1, (1, 0, 0, 1)),
        (2, 2, (1, 1, 0, 0)),
    ])
    def test_tn_occupations(self, n, i, occ):
        assert fock.make_tn_state(n, i).terms == {occ: (1 + 0j)}

    @pytest.mark.parametrize("n", [1, 2])
    def test_cs_signs(self, n):
        cs = fock.make_cs_state(n)
        assert cs.modes == 4 * n
        assert cs.norm_sq() == pytest.approx(1)
        for i in range(n + 1):
            occ_i = next(iter(fock.make_tn_state(n, i).terms))
            for j in range(n + 1):
                occ_j = next(iter(fock.make_tn_state(n, j).terms))
                amp = cs.terms[occ_i + occ_j]
                assert amp == pytest.approx((-1) ** ((n - i) * (n - j)) / (n + 1))


class TestTeleportation:
    @pytest.mark.parametrize("n", [1, 2, 3])
    @pytest.mark.parametrize("amps", [(1, 0), (0, 1), (1 / SQ2, 1 / SQ2),
                                      (0.6, 0.8j)])
    def test_success_probability(self, n, amps):
        p = fock.teleport_success_probability(n, *amps)
        assert p == pytest.approx(n / (n + 1), abs=1e-12)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_success_branches_carry_input(self, n):
        a, b = 0.6, 0.8j
        st = fock.FockState(1, {(0,): a, (1,): b})
        for br in fock.f_teleport(st, 0, fock.make_t_resource(n), n):
            if not br.success:
                continue
            grouped = {}
            for occ, amp in br.state.terms.items():
                rest = tuple(o for m, o in enumerate(occ) if m != br.output_mode)
                grouped.setdefault(rest, [0j, 0j])[occ[br.output_mode]] = amp
            assert len(grouped) == 1
            c0, c1 = next(iter(grouped.values()))
            fid = abs(np.vdot([a, b], [c0, c1])) ** 2
            assert fid == pytest.approx(1, abs=1e-12)

    @pytest.mark.parametrize("n", [1, 2])
    def test_failure_branches_collapse_input(self, n):
        """k = 0 reads the input as |0>, k = n+1 as |1>."""
        a, b = 0.6, 0.8
        st = fock.FockState(1, {(0,): a, (1,): b})
        p0 = pfull = 0.0
        for br in fock.f_teleport(st, 0, fock.make_t_resource(n), n):
            if br.success:
                continue
            if br.photon_total == 0:
                p0 += br.probability
            else:
                assert br.photon_total == n + 1
                pfull += br.probability
        assert p0 == pytest.approx(a * a / (n + 1), abs=1e-12)
        assert pfull == pytest.approx(b * b / (n + 1), abs=1e-12)

    def test_input_mode_occupancy_checked(self):
        st = fock.FockState(1, {(2,): 1.0})
        with pytest.raises(fock.FockError):
            fock.f_teleport(st, 0, fock.make_t_resource(1), 1)


class TestConditionalPhase:
    @pytest.mark.parametrize("n,expected", [(1, 1 / 4), (2, 4 / 9), (3, 9 / 16)])
    def test_joint_success_probability(self, n, expected):
        rep = fock.cz_success_report(n)
        assert rep["success_probability"] == pytest.approx(expected, abs=1e-12)

    @pytest.mark.parametrize("n", [1, 2])
    def test_all_success_branches_ideal(self, n):
        rep = fock.cz_success_report(n)
        assert rep["min_success_fidelity"] >= 1 - 1e-10
        assert len(rep["success_fidelities"]) == rep["success_branches"]

    def test_minus_sign_on_both_excited(self):
        """The |11> input picks up exactly the conditional minus sign."""
        qa = fock.dual_rail(0, 1)
        qb = fock.dual_rail(0, 1)
        for br in fock.cz_via_cs(qa, qb, 1):
            if not br.success:
                continue
            amps = fock.rail_amplitudes(br)
            phase_free = amps / amps[1, 1]
            assert abs(abs(amps[1, 1]) - 1) < 1e-10
            assert np.allclose(phase_free, [[0, 0], [0, 1]], atol=1e-10)
        ideal = fock.cz_ideal(qa, qb)
        assert ideal[1, 1] == -1

    def test_entangling_action(self):
        """|+>|+> leaves the gate entangled: Schmidt-rank-2 rail amplitudes."""
        rep = fock.cz_success_report(2)
        assert rep["order"] == 2
        qa = fock.dual_rail(1 / SQ2, 1 / SQ2)
        qb = fock.dual_rail(1 / SQ2, 1 / SQ2)
        for br in fock.cz_via_cs(qa, qb, 1):
            if br.success:
                amps = fock.rail_amplitudes(br)
                s = np.linalg.svd(amps, compute_uv=False)
                assert s[1] > 0.1
                break

    def test_order_cap(self):
        q = fock.dual_rail(1, 0)
        with pytest.raises(fock.OrderCapError):
            fock.cz_via_cs(q, q, 4)

    def test_dual_rail_required(self):
        bad = fock.FockState(2, {(1, 1): 1.0})
        with pytest.raises(fock.FockError):
            fock.cz_via_cs(bad, fock.dual_rail(1, 0), 1)
