"""
simulator.py 테스트 - 전달 지연, 원형 버퍼, 스파이크 기록, 결정성
"""
import numpy as np
import pytest

from analysis import analyze_raster, firing_rates
from errors import ConfigurationError, IntegratorDivergenceError, NetworkFormatError
from models import NetworkConfig, PopulationConfig, SimConfig
from neuron import make_population
from simulator import (
    DelayBuffer,
    DelayedSynapses,
    SpikeRaster,
    build_network,
    edge_delay,
    make_streams,
    run_simulation,
    spike_counts,
    thalamic_input,
)
from topology import NetworkTopology, make_ring_lattice

SMALL = NetworkConfig(N=100, Ne=80, Ni=20, k=10, p=0.0)


def small_run(p: float = 0.05, seed: int = 3, **sim_fields):
    sim = SimConfig(duration=300, seed=seed, **sim_fields)
    population, topo, streams = build_network(SMALL, PopulationConfig(), sim, p, seed)
    return run_simulation(topo, population, sim, rng=streams.thalamic)


# ============================================
# [edge_delay]
# ============================================

@pytest.mark.parametrize("distance, expected", [
    (1, 0), (25, 0), (26, 1), (50, 1), (51, 2), (475, 18), (476, 19), (500, 19),
])
def test_edge_delay_buckets(distance, expected):
    assert edge_delay(distance, 25) == expected


def test_edge_delay_is_vectorized():
    np.testing.assert_array_equal(edge_delay(np.array([1, 26, 500]), 25), [0, 1, 19])


def test_edge_delay_rejects_bad_scale():
    with pytest.raises(ConfigurationError):
        edge_delay(10, 0)


def test_full_size_lattice_uses_twenty_slots_when_rewired():
    sim = SimConfig(delay_enabled=True)
    _, topo, _ = build_network(NetworkConfig(), PopulationConfig(), sim, 1.0, 0)
    synapses = DelayedSynapses.from_config(topo, sim)
    assert synapses.max_delay <= 19
    assert DelayBuffer(topo.N, synapses.max_delay).slots.shape[0] <= 20


# ============================================
# [SpikeRaster / spike_counts]
# ============================================

def test_spike_counts_direct():
    raster = SpikeRaster.from_events([(0, 1), (0, 2), (5, 9)], N=10, duration=10)
    np.testing.assert_array_equal(spike_counts(raster, 10), [2, 0, 0, 0, 0, 1, 0, 0, 0, 0])


def test_spike_counts_empty():
    raster = SpikeRaster([], [], N=10, duration=7)
    np.testing.assert_array_equal(spike_counts(raster), np.zeros(7))


def test_spike_counts_conserve_events():
    rng = np.random.default_rng(0)
    for _ in range(200):
        n = int(rng.integers(0, 300))
        events = list(zip(rng.integers(0, 500, n).tolist(), rng.integers(0, 50, n).tolist()))
        raster = SpikeRaster.from_events(events, N=50, duration=500)
        assert int(spike_counts(raster).sum()) == len(raster) == n


def test_raster_rejects_decreasing_ticks():
    with pytest.raises(NetworkFormatError):
        SpikeRaster([3, 2], [0, 1], N=5, duration=10)


def test_raster_rejects_out_of_range_unit():
    with pytest.raises(NetworkFormatError):
        SpikeRaster([0], [5], N=5, duration=10)


# ============================================
# [DelayBuffer / DelayedSynapses]
# ============================================

def test_probe_arrives_exactly_after_delay():
    for delay in range(5):
        buffer = DelayBuffer(n_units=3, max_delay=4)
        probe = np.array([0.0, 2.5, 0.0])
        arrivals = []
        for t in range(20):
            if t == 7:
                buffer.schedule(t, delay, probe)
            if buffer.consume(t)[1] != 0.0:
                arrivals.append(t)
        assert arrivals == [7 + delay]


def test_schedule_rejects_delay_beyond_buffer():
    buffer = DelayBuffer(n_units=2, max_delay=3)
    with pytest.raises(ValueError):
        buffer.schedule(0, 4, np.ones(2))


def test_synapses_deliver_per_edge_delay():
    # 0 -> 1 (거리 1), 0 -> 5 (거리 5), scale 2: 지연 0, 2
    topo = NetworkTopology(10, 1, np.arange(10), (np.arange(10) + 1) % 10, np.ones(10))
    topo.dst[0] = 5
    topo.ring_dist[0] = 5
    synapses = DelayedSynapses(topo, edge_delay(topo.ring_dist, 2))
    buffer = DelayBuffer(10, synapses.max_delay)

    fired = np.zeros(10, dtype=bool)
    fired[0] = True
    synapses.deliver(4, fired, buffer)

    received = {t: buffer.consume(t) for t in range(4, 8)}
    assert received[6][5] == 1.0
    assert all(received[t][5] == 0.0 for t in (4, 5, 7))
    assert all(not received[t][1] for t in received)


def test_buffer_conserves_input():
    rng = np.random.default_rng(11)
    _, topo, _ = build_network(SMALL, PopulationConfig(), SimConfig(), 0.3, 11)
    synapses = DelayedSynapses(topo, edge_delay(topo.ring_dist, 3))
    buffer = DelayBuffer(topo.N, synapses.max_delay)
    for t in range(500):
        synapses.deliver(t, rng.random(topo.N) < 0.05, buffer)
        buffer.consume(t)
    assert buffer.scheduled_total == pytest.approx(buffer.delivered_total + buffer.pending(), rel=1e-9)


# ============================================
# [run_simulation]
# ============================================

def test_no_drive_gives_empty_raster():
    raster, counts = small_run(w_e=0.0, w_i=0.0, t_e=0.0, t_i=0.0)
    assert len(raster) == 0
    assert counts.sum() == 0
    assert counts.size == 300


def test_run_is_deterministic():
    first, first_counts = small_run()
    second, second_counts = small_run()
    np.testing.assert_array_equal(first.ticks, second.ticks)
    np.testing.assert_array_equal(first.units, second.units)
    np.testing.assert_array_equal(first_counts, second_counts)


def test_zero_delay_equivalence():
    plain, _ = small_run(delay_enabled=False)
    collapsed, _ = small_run(delay_enabled=True, distance_scale=1000)
    np.testing.assert_array_equal(plain.ticks, collapsed.ticks)
    np.testing.assert_array_equal(plain.units, collapsed.units)


def test_delay_on_and_off_share_network_and_noise():
    off = SimConfig(delay_enabled=False)
    on = SimConfig(delay_enabled=True)
    pop_off, topo_off, streams_off = build_network(SMALL, PopulationConfig(), off, 0.1, 5)
    pop_on, topo_on, streams_on = build_network(SMALL, PopulationConfig(), on, 0.1, 5)
    np.testing.assert_array_equal(topo_off.dst, topo_on.dst)
    np.testing.assert_array_equal(topo_off.weight, topo_on.weight)
    np.testing.assert_array_equal(pop_off.c, pop_on.c)
    np.testing.assert_array_equal(streams_off.thalamic.random(5), streams_on.thalamic.random(5))
    assert topo_on.seed == 5


def test_raster_is_ordered_and_in_range():
    raster, counts = small_run()
    assert len(raster) > 0
    assert np.all(np.diff(raster.ticks) >= 0)
    assert raster.units.min() >= 0 and raster.units.max() < 100
    assert int(counts.sum()) == len(raster)


def test_default_thalamic_stream_comes_from_seed():
    sim = SimConfig(duration=200, seed=9)
    population, topo, _ = build_network(SMALL, PopulationConfig(), sim, 0.0, 9)
    explicit, _ = run_simulation(topo, population, sim, rng=make_streams(9).thalamic)
    implicit, _ = run_simulation(topo, population, sim)
    np.testing.assert_array_equal(explicit.ticks, implicit.ticks)


def test_population_size_mismatch():
    rng = np.random.default_rng(0)
    topo = make_ring_lattice(20, 4, rng)
    population = make_population(10, 8, 2, rng)
    with pytest.raises(ConfigurationError):
        run_simulation(topo, population, SimConfig(duration=10))


def test_runaway_weights_raise_divergence():
    rng = np.random.default_rng(0)
    topo = make_ring_lattice(20, 4, rng, w_e=1e9)
    population = make_population(20, 20, 0, rng)
    config = SimConfig(duration=200, t_e=20.0, t_i=20.0, w_e=1e9)
    with pytest.raises(IntegratorDivergenceError) as info:
        run_simulation(topo, population, config, rng=rng)
    assert info.value.tick is not None


def test_zero_delay_equivalence_over_many_seeds():
    network = NetworkConfig(N=20, Ne=16, Ni=4, k=4)
    for seed in range(1000):
        rasters = []
        for sim in (SimConfig(duration=30, seed=seed),
                    SimConfig(duration=30, seed=seed, delay_enabled=True, distance_scale=10)):
            population, topo, streams = build_network(network, PopulationConfig(), sim, 0.2, seed)
            rasters.append(run_simulation(topo, population, sim, rng=streams.thalamic)[0])
        np.testing.assert_array_equal(rasters[0].ticks, rasters[1].ticks)
        np.testing.assert_array_equal(rasters[0].units, rasters[1].units)


# ============================================
# [시상 입력 / 전체 규모 활동]
# ============================================

def test_thalamic_input_distributions():
    scale = np.array([3.0, 11.0, 0.0])
    uniform = thalamic_input(scale, np.random.default_rng(0), "uniform")
    np.testing.assert_array_equal(uniform, scale * np.random.default_rng(0).random(3))
    gaussian = thalamic_input(scale, np.random.default_rng(0), "gaussian")
    np.testing.assert_array_equal(gaussian, scale * np.random.default_rng(0).standard_normal(3))
    with pytest.raises(ConfigurationError):
        thalamic_input(scale, np.random.default_rng(0), "poisson")


def test_uniform_drive_leaves_excitatory_units_silent():
    network = NetworkConfig(N=200, Ne=160, Ni=40, k=10)
    sim = SimConfig(duration=300, seed=2, thalamic_distribution="uniform")
    population, topo, streams = build_network(network, PopulationConfig(), sim, 1.0, 2)
    raster, _ = run_simulation(topo, population, sim, rng=streams.thalamic)
    exc_hz, inh_hz = firing_rates(raster, population)
    assert exc_hz == 0.0
    assert inh_hz > 0.0


def run_full_size(p: float, seed: int, **sim_fields):
    sim = SimConfig(duration=500, seed=seed, **sim_fields)
    population, topo, streams = build_network(NetworkConfig(), PopulationConfig(), sim, p, seed)
    raster, _ = run_simulation(topo, population, sim, rng=streams.thalamic)
    return population, raster


def test_full_size_network_is_alive_at_default_drive():
    population, raster = run_full_size(1.0, seed=1)
    exc_hz, inh_hz = firing_rates(raster, population)
    assert exc_hz > 0.0
    assert inh_hz > 0.0

    coupled_S = analyze_raster(raster)[1].S
    _, uncoupled = run_full_size(1.0, seed=1, w_e=0.0, w_i=0.0)
    noise_S = analyze_raster(uncoupled)[1].S
    assert noise_S > 0.0
    assert coupled_S > 100.0 * noise_S
