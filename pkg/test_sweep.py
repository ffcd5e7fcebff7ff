"""
sweep.py 테스트 - 시드 파생, 앙상블 집계, 정규화, 재현성
전체 규모 재현 검사는 SWSYNC_RUN_SLOW=1 일 때만 실행됩니다.
"""
import os

import numpy as np
import pytest

from artifact_manager import ArtifactManager
from config import Config
from models import AnalysisConfig, NetworkConfig, SimConfig, SweepConfig
from sweep import INDEX_LIMIT, derive_seed, lattice_reference, run_cell, run_sweep
from topology import characteristic_path_length, clustering_coefficient, make_ring_lattice, rewire

RUN_SLOW = os.getenv("SWSYNC_RUN_SLOW") == "1"
slow = pytest.mark.skipif(not RUN_SLOW, reason="SWSYNC_RUN_SLOW=1 일 때만 실행")


def small_config(**overrides) -> SweepConfig:
    fields = dict(
        network=NetworkConfig(N=100, Ne=80, Ni=20, k=10),
        simulation=SimConfig(duration=300),
        p_grid=[0.0, 0.1, 1.0],
        sims_per_p=2,
        base_seed=4,
    )
    fields.update(overrides)
    return SweepConfig(**fields)


# ============================================
# [derive_seed]
# ============================================

def test_derive_seed_is_injective_over_grid():
    seeds = {derive_seed(7, i, j) for i in range(30) for j in range(100)}
    assert len(seeds) == 3000
    assert derive_seed(7, 0, 0) != derive_seed(7, 0, 1)
    assert derive_seed(7, 0, 1) != derive_seed(7, 1, 0)


def test_derive_seed_is_stable():
    assert derive_seed(3, 5, 9) == derive_seed(3, 5, 9)
    assert derive_seed(0, 0, 0) == 0


def test_derive_seed_base_seeds_do_not_collide():
    first = {derive_seed(1, i, j) for i in range(10) for j in range(10)}
    second = {derive_seed(2, i, j) for i in range(10) for j in range(10)}
    assert not first & second


@pytest.mark.parametrize("args", [(-1, 0, 0), (0, -1, 0), (0, 0, INDEX_LIMIT)])
def test_derive_seed_rejects_out_of_range(args):
    with pytest.raises(ValueError):
        derive_seed(*args)


# ============================================
# [run_sweep]
# ============================================

def test_p_zero_normalizes_to_one():
    result = run_sweep(small_config(p_grid=[0.0], sims_per_p=1))
    assert len(result.records) == 1
    record = result.records[0]
    assert record.C_norm == pytest.approx(1.0)
    assert record.L_norm == pytest.approx(1.0)
    assert record.n_sims == 1


def test_records_follow_grid_and_seed_table():
    config = small_config()
    result = run_sweep(config)
    assert [r.p for r in result.records] == config.p_grid
    assert result.seeds == [[derive_seed(4, i, j) for j in range(2)] for i in range(3)]
    assert [r.seed for r in result.records] == [row[0] for row in result.seeds]
    assert max(r.S_norm for r in result.records) == 1.0
    assert all(0.0 <= r.S_norm <= 1.0 for r in result.records)
    assert result.records[0].C_norm == pytest.approx(1.0)
    assert result.records[-1].C_norm < result.records[0].C_norm


def test_cell_uses_its_own_seed():
    config = small_config()
    first = run_cell((config, 0.1, 123))
    second = run_cell((config, 0.1, 123))
    assert first == second


def test_sweep_is_reproducible_to_the_byte(tmp_path):
    config = small_config()
    manager = ArtifactManager(str(tmp_path), verbose=False)
    manager.write_sweep(run_sweep(config), config.model_dump(mode="json"),
                        str(tmp_path / "a.csv"))
    manager.write_sweep(run_sweep(config), config.model_dump(mode="json"),
                        str(tmp_path / "b.csv"))
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    assert (tmp_path / "a.meta.json").read_bytes() == (tmp_path / "b.meta.json").read_bytes()


def test_worker_count_does_not_change_result():
    config = small_config()
    serial = run_sweep(config, workers=1)
    parallel = run_sweep(config, workers=2)
    assert serial.model_dump() == parallel.model_dump()


def test_collapsed_delays_match_undelayed_sweep():
    plain = run_sweep(small_config())
    collapsed = run_sweep(small_config(simulation=SimConfig(duration=300, delay_enabled=True, distance_scale=50)))
    assert [r.S for r in plain.records] == [r.S for r in collapsed.records]
    assert collapsed.delay_enabled


def test_silent_network_flags_degenerate_normalization():
    silent = SimConfig(duration=200, w_e=0.0, w_i=0.0, t_e=0.0, t_i=0.0)
    result = run_sweep(small_config(simulation=silent))
    assert result.degenerate_normalization
    assert all(r.S == 0.0 and r.S_norm == 0.0 and r.freq_hz is None for r in result.records)


def test_lattice_reference_is_seed_independent():
    config = small_config()
    C_ref, L_ref = lattice_reference(config)
    lattice = make_ring_lattice(100, 10, np.random.default_rng(99))
    assert C_ref == clustering_coefficient(lattice)
    assert L_ref == characteristic_path_length(lattice)[0]


def test_structural_transitions_are_separated():
    """p=0.01 에서 L은 대부분 전이했고 C는 거의 그대로"""
    C_ref, L_ref = lattice_reference(SweepConfig())
    Cs, Ls = [], []
    for j in range(10):
        rng = np.random.default_rng(derive_seed(0, 0, j))
        topo = rewire(make_ring_lattice(1000, 10, rng), 0.01, rng)
        Cs.append(clustering_coefficient(topo))
        Ls.append(characteristic_path_length(topo)[0])
    assert np.mean(Ls) / L_ref < 0.35 + 0.1
    assert np.mean(Cs) / C_ref > 0.80 - 0.1


# ============================================
# [전체 규모 재현]
# ============================================

@slow
def test_sync_transition_lies_between_structural_transitions():
    grid = [1e-4, 1e-3, 0.02, 0.05, 1.0]
    result = run_sweep(SweepConfig(p_grid=grid, sims_per_p=10), workers=Config.worker_count())
    S_norm = {r.p: r.S_norm for r in result.records}
    assert S_norm[1e-4] < 0.25
    assert S_norm[0.05] > 0.6
    assert S_norm[0.02] > S_norm[1e-3]


@slow
def test_synchronized_frequency_range():
    config = SweepConfig(p_grid=[1.0], sims_per_p=10)
    for j in range(10):
        cell = run_cell((config, 1.0, derive_seed(0, 0, j)))
        assert cell.freq_hz is not None
        assert 5.0 <= cell.freq_hz <= 20.0


@slow
def test_delays_collapse_synchrony_at_high_p():
    grid = [0.02, 1.0]
    plain = run_sweep(SweepConfig(p_grid=grid, sims_per_p=10), workers=Config.worker_count())
    delayed = run_sweep(
        SweepConfig(p_grid=grid, sims_per_p=10, simulation=SimConfig(delay_enabled=True)),
        workers=Config.worker_count(),
    )
    plain_S = {r.p: r.S for r in plain.records}
    delayed_records = {r.p: r for r in delayed.records}
    assert delayed_records[1.0].S < 0.15 * plain_S[1.0]
    assert delayed_records[0.02].S_norm > 0.5


@slow
def test_window_width_keeps_frequency_on_real_run():
    config = SweepConfig(p_grid=[0.05], sims_per_p=1)
    freqs = set()
    for width in (6, 30, 200):
        windowed = config.model_copy(update={"analysis": AnalysisConfig(window_width=width)})
        freqs.add(run_cell((windowed, 0.05, derive_seed(0, 0, 0))).freq_hz)
    assert len(freqs) == 1
