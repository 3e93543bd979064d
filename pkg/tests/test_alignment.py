"""Precoder design, alignment verification, and receiver stream models."""

import dataclasses
import json

import numpy as np
import pytest

from layeralign import ConfigError, InfeasibleScenarioError
from layeralign.alignment import (
    DirectionSetKx2,
    build_mac_model,
    count_distinct_directions,
    design_directions_2xk,
    mac_gain_matrix,
    precode_kx2,
    received_model_2xk,
    received_model_kx2,
    sigma_receiver_pairing,
    solve_refined,
    verify_alignment_2xk,
    verify_alignment_kx2,
)
from layeralign.decoder import enumerate_received, normalize_for_target
from layeralign.xchannel import sample_topology, transmit


class TestPairing:
    def test_k2(self):
        assert sigma_receiver_pairing(2) == {1: {2: 2}, 2: {1: 1}}

    def test_k3(self):
        assert sigma_receiver_pairing(3) == {
            1: {2: 3, 3: 2},
            2: {1: 3, 3: 1},
            3: {1: 2, 2: 1},
        }

    @pytest.mark.parametrize("K", [2, 3, 4, 5, 7])
    def test_bijection_avoiding_self(self, K):
        table = sigma_receiver_pairing(K)
        for i in range(1, K + 1):
            row = table[i]
            assert set(row) == set(range(1, K + 1)) - {i}
            assert sorted(row.values()) == sorted(row.keys())
            assert i not in row.values()

    def test_rejects_k1(self):
        with pytest.raises(ConfigError):
            sigma_receiver_pairing(1)


class TestKx2Verify:
    @pytest.mark.parametrize("K,M", [(2, 1), (3, 1), (2, 2), (4, 3)])
    @pytest.mark.parametrize("field", ["real", "complex"])
    def test_clean_channel_aligns(self, K, M, field):
        t = sample_topology("kx2", K=K, M=M, field=field, seed=11)
        rep = verify_alignment_kx2(t)
        assert rep.kind == "kx2"
        assert rep.feasible
        assert rep.max_residual <= 1e-10
        assert rep.probe_deviation <= 1e-9
        # all K*M cross streams land on the M columns of the common block
        assert rep.interference_directions == {1: M, 2: M}
        assert rep.collapsed_streams == {1: M, 2: M}
        assert rep.unaligned_streams == {1: K * M, 2: K * M}

    def test_report_serializes(self):
        t = sample_topology("kx2", K=2, M=2, field="complex", seed=5)
        rep = verify_alignment_kx2(t)
        payload = json.loads(json.dumps(rep.to_dict()))
        assert payload["kind"] == "kx2"
        assert payload["feasible"] is True
        assert set(payload) == {
            "kind", "feasible", "max_residual", "max_unscaled_residual",
            "interference_directions", "collapsed_streams",
            "unaligned_streams", "probe_deviation", "notes",
        }
        assert payload["notes"] == {"K": 2, "M": 2, "field": "complex"}

    def test_corrupted_precoder_is_flagged(self):
        t = sample_topology("kx2", K=3, M=2, field="real", seed=2)
        M = t.M
        good = {}
        for i in range(1, 4):
            Pu = solve_refined(t.channel(i, 2), np.eye(M))
            Pv = solve_refined(t.channel(i, 1), np.eye(M))
            good[i] = (Pu, Pv)
        rep = verify_alignment_kx2(t, precoders=good)
        assert rep.feasible
        bad = dict(good)
        bad[2] = (good[2][0] + 0.01, good[2][1])
        rep = verify_alignment_kx2(t, precoders=bad)
        assert not rep.feasible
        assert rep.max_residual > 1e-5

    def test_custom_direction_blocks(self):
        t = sample_topology("kx2", K=2, M=2, field="real", seed=8)
        rng = np.random.default_rng(3)
        d = DirectionSetKx2(
            I1=rng.standard_normal((2, 2)) + 2 * np.eye(2),
            I2=rng.standard_normal((2, 2)) + 2 * np.eye(2),
        )
        rep = verify_alignment_kx2(t, d)
        assert rep.feasible
        assert rep.max_residual <= 1e-10

    def test_direction_set_validation(self):
        with pytest.raises(ConfigError):
            DirectionSetKx2(I1=np.zeros((2, 2)), I2=np.eye(2))
        with pytest.raises(ConfigError):
            DirectionSetKx2(I1=np.ones((2, 3)), I2=np.eye(2))
        assert DirectionSetKx2.identity(3).M == 3


class TestKx2Model:
    def test_stream_layout_k2(self):
        t = sample_topology("kx2", K=2, M=1, field="real", seed=0)
        models = received_model_kx2(t)
        assert models[1].stream_ids == (("u", 1, 0), ("u", 2, 0), ("gamma_v", 0))
        assert models[1].width_mults == (1, 1, 2)
        assert models[2].stream_ids == (("v", 1, 0), ("v", 2, 0), ("gamma_u", 0))
        assert models[2].width_mults == (1, 1, 2)

    def test_stream_layout_k3(self):
        t = sample_topology("kx2", K=3, M=1, field="real", seed=0)
        m = received_model_kx2(t)[1]
        assert m.stream_ids == (("u", 1, 0), ("u", 2, 0), ("u", 3, 0), ("gamma_v", 0))
        assert m.width_mults == (1, 1, 1, 3)
        assert m.columns.shape == (1, 4)

    def test_stream_index_lookup(self):
        t = sample_topology("kx2", K=2, M=1, field="real", seed=0)
        m = received_model_kx2(t)[1]
        assert m.stream_index(("gamma_v", 0)) == 2
        with pytest.raises(ConfigError):
            m.stream_index(("gamma_v", 7))

    def test_amplitude_scales_linearly(self):
        t = sample_topology("kx2", K=2, M=2, field="real", seed=4)
        rng = np.random.default_rng(0)
        u = rng.integers(-2, 3, (2, 2, 5)).astype(float)
        v = rng.integers(-2, 3, (2, 2, 5)).astype(float)
        x1 = precode_kx2(t, u, v, A=1.0)
        x3 = precode_kx2(t, u, v, A=3.0)
        for tx in x1:
            np.testing.assert_allclose(x3[tx], 3.0 * x1[tx], rtol=1e-12)

    def test_gamma_column_carries_symbol_sum(self):
        # receiver 1, noiseless: subtracting the desired streams leaves
        # exactly (sum_i v_i) on the gamma column
        t = sample_topology("kx2", K=3, M=1, field="real", seed=6)
        rng = np.random.default_rng(1)
        u = rng.integers(-2, 3, (3, 1, 8)).astype(float)
        v = rng.integers(-2, 3, (3, 1, 8)).astype(float)
        y = transmit(t, precode_kx2(t, u, v))
        m = received_model_kx2(t)[1]
        syms = [u[i, 0] for i in range(3)] + [v[:, 0].sum(axis=0)]
        np.testing.assert_allclose(y[1], m.predict(np.stack(syms)), atol=1e-10)


class Test2xKDesign:
    def test_k2_tree_is_exact(self):
        t = sample_topology("2xk", K=2, M=1, field="real", seed=0)
        d = design_directions_2xk(t)
        assert d.n_cycles == 0
        assert d.pairing == {(1, 2): 2, (2, 1): 1}
        assert d.max_scaled_residual <= 1e-12
        for scales in d.edge_scales.values():
            np.testing.assert_allclose(scales, 1.0, atol=1e-12)

    def test_k2_roots_are_not_shared(self):
        # the two tree components take independent generic roots; a shared
        # root would place each desired stream on its own interference
        # bundle and the received constellation would collapse
        t = sample_topology("2xk", K=2, M=1, field="real", seed=0)
        d = design_directions_2xk(t)
        assert not np.allclose(d.rho[0], d.rho[1], rtol=1e-6)
        m = normalize_for_target(
            received_model_2xk(t, d)[1].columns,
            target_index=0,
            half_widths=(2, 2, 4),
            noise_variance=1e-4,
            field="real",
        )
        rc = enumerate_received(m)
        assert rc.gamma_ok
        assert rc.d_min > 1e-3

    def test_k3_single_cycle_telescopes(self):
        t = sample_topology("2xk", K=3, M=1, field="real", seed=1)
        d = design_directions_2xk(t)
        assert d.n_cycles == 1
        assert d.max_scaled_residual <= 1e-12
        for scales in d.edge_scales.values():
            np.testing.assert_allclose(scales, 1.0, atol=1e-9)

    def test_k3m2_real_feasibility_split(self):
        # a real eigenbasis only exists when every cycle map has real
        # eigenvalues; these seeds were censused once and frozen
        for seed in (0, 1, 2, 3, 4, 6, 7, 8, 10):
            t = sample_topology("2xk", K=3, M=2, field="real", seed=seed)
            d = design_directions_2xk(t)
            assert d.max_scaled_residual <= 1e-8
        for seed in (5, 9, 11):
            t = sample_topology("2xk", K=3, M=2, field="real", seed=seed)
            with pytest.raises(InfeasibleScenarioError) as ei:
                design_directions_2xk(t)
            assert set(ei.value.cycle) == {"receiver", "message", "eigenvalues"}
            ev = ei.value.cycle["eigenvalues"]
            assert any(abs(complex(e).imag) > 1e-9 for e in ev)

    @pytest.mark.parametrize("seed", range(10))
    def test_k3m2_complex_always_feasible(self, seed):
        t = sample_topology("2xk", K=3, M=2, field="complex", seed=seed)
        d = design_directions_2xk(t)
        assert d.max_scaled_residual <= 1e-8

    def test_wrong_kind_rejected(self):
        t = sample_topology("kx2", K=2, M=1, field="real", seed=0)
        with pytest.raises(ConfigError):
            design_directions_2xk(t)


class Test2xKModel:
    def test_stream_layout_k2(self):
        t = sample_topology("2xk", K=2, M=1, field="real", seed=0)
        m = received_model_2xk(t, design_directions_2xk(t))
        assert m[1].stream_ids == (("u", 1, 0), ("v", 1, 0), ("bundle", 2, 2, 0))
        assert m[1].width_mults == (1, 1, 2)
        assert m[2].stream_ids == (("u", 2, 0), ("v", 2, 0), ("bundle", 1, 1, 0))

    def test_stream_layout_k3m2(self):
        t = sample_topology("2xk", K=3, M=2, field="complex", seed=0)
        m = received_model_2xk(t, design_directions_2xk(t))[1]
        assert m.stream_ids == (
            ("u", 1, 0), ("u", 1, 1), ("v", 1, 0), ("v", 1, 1),
            ("bundle", 2, 3, 0), ("bundle", 2, 3, 1),
            ("bundle", 3, 2, 0), ("bundle", 3, 2, 1),
        )
        assert m.width_mults == (1, 1, 1, 1, 2, 2, 2, 2)

    def test_non_unit_scale_splits_bundle(self):
        # cycle eigenvalue scales != 1 cannot share an integer column: the
        # pair stays directionally aligned but splits into two unit streams
        t = sample_topology("2xk", K=3, M=2, field="real", seed=0)
        d = design_directions_2xk(t)
        scales = d.edge_scales[(3, 2)]
        assert np.max(np.abs(scales - 1.0)) > 0.1  # frozen channel property
        m3 = received_model_2xk(t, d)[3]
        assert ("bundle", 1, 2, 0) in m3.stream_ids
        assert ("u", 2, 0) in m3.stream_ids and ("v", 1, 0) in m3.stream_ids
        assert ("bundle", 2, 1, 0) not in m3.stream_ids

    def test_tightened_tolerance_splits_everything(self):
        t = sample_topology("2xk", K=3, M=2, field="real", seed=0)
        d = design_directions_2xk(t)
        forced = dataclasses.replace(
            d, edge_scales={k: v * 1.5 for k, v in d.edge_scales.items()}
        )
        m = received_model_2xk(t, forced)[1]
        assert all(w == 1 for w in m.width_mults)
        assert len(m.stream_ids) == 2 * 2 + 4 * 2  # desired + split pairs


class Test2xKVerify:
    @pytest.mark.parametrize(
        "K,M,field,seed",
        [(2, 1, "real", 0), (3, 1, "real", 1), (3, 2, "real", 0),
         (3, 2, "complex", 3), (4, 1, "complex", 2)],
    )
    def test_report(self, K, M, field, seed):
        t = sample_topology("2xk", K=K, M=M, field=field, seed=seed)
        d = design_directions_2xk(t)
        rep = verify_alignment_2xk(t, d)
        assert rep.kind == "2xk"
        assert rep.feasible
        assert rep.probe_deviation <= 1e-8
        assert rep.unaligned_streams == {i: 2 * M * (K - 1) for i in range(1, K + 1)}
        # each aligned pair occupies one direction per antenna-stream, even
        # when non-unit scales keep it from sharing an integer column
        want = min(M * (K - 1), M) if M == 1 else M * (K - 1)
        assert all(v <= M * (K - 1) for v in rep.interference_directions.values())
        if M > 1:
            assert rep.interference_directions == {i: want for i in range(1, K + 1)}
        assert rep.notes["n_cycles"] == d.n_cycles
        assert rep.notes["scales_abs_max"] >= 1.0 - 1e-12

    def test_report_serializes(self):
        t = sample_topology("2xk", K=3, M=2, field="complex", seed=1)
        rep = verify_alignment_2xk(t, design_directions_2xk(t))
        payload = json.loads(json.dumps(rep.to_dict()))
        assert payload["kind"] == "2xk"
        assert payload["notes"]["K"] == 3


class TestDirectionsCount:
    def test_oracles(self):
        e1 = np.array([1.0, 0.0])
        e2 = np.array([0.0, 1.0])
        assert count_distinct_directions(np.column_stack([e1, 2 * e1])) == 1
        assert count_distinct_directions(np.column_stack([e1, e2])) == 2
        assert count_distinct_directions(np.column_stack([e1, 0 * e1, -e1])) == 1

    def test_complex_phase_is_collinear(self):
        c = np.array([1.0 + 1.0j, 2.0 - 0.5j])
        rot = np.exp(1j * 0.7) * c
        assert count_distinct_directions(np.column_stack([c, rot])) == 1


class TestMacModel:
    def test_gain_matrix_stacks_users(self):
        t = sample_topology("mac", K=3, M=1, field="real", seed=9)
        G = mac_gain_matrix(t)
        assert G.shape == (2, 3)
        for k in range(1, 4):
            np.testing.assert_array_equal(G[:, k - 1 : k], t.channel(k, 1))

    def test_model_layout_and_predict(self):
        t = sample_topology("mac", K=3, M=1, field="complex", seed=9)
        m = build_mac_model(t, A=2.5)
        assert m.receiver == 1
        assert m.stream_ids == (("u", 1), ("u", 2), ("u", 3))
        assert m.width_mults == (1, 1, 1)
        np.testing.assert_allclose(m.columns, 2.5 * mac_gain_matrix(t), rtol=1e-12)
        syms = np.array([1.0, -2.0, 0.0])
        np.testing.assert_allclose(
            m.predict(syms)[:, 0], (m.columns @ syms), rtol=1e-12
        )
