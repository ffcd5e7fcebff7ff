"""
simulator.py - 네트워크 시뮬레이션
tick마다 시상 입력과 시냅스 입력을 합산하고, 거리 비례 전달 지연을
원형 버퍼로 스케줄한 뒤 모든 유닛을 진행시키고 스파이크를 기록합니다.

tick 내부 순서:
  (1) 발화 검출/리셋 및 래스터 기록
  (2) 발화 유닛의 출력 간선을 (t + delay) 슬롯에 예약
  (3) 유닛별 시상 입력 추출 (기본: 스케일 * N(0,1))
  (4) I = 시상 + 이번 tick 슬롯으로 step_neuron
"""
from typing import Iterator, List, NamedTuple, Optional, Tuple

import numpy as np
from scipy import sparse

from errors import ConfigurationError, NetworkFormatError
from models import NetworkConfig, PopulationConfig, SimConfig
from neuron import NeuronState, Population, detect_and_reset, make_population, step_neuron
from topology import NetworkTopology, make_ring_lattice, rewire


class RngStreams(NamedTuple):
    """시드 하나에서 갈라진 독립 난수 스트림"""
    population: np.random.Generator
    topology: np.random.Generator
    thalamic: np.random.Generator


def make_streams(seed: int) -> RngStreams:
    """
    시드에서 (집단, 토폴로지, 시상 입력) 세 스트림 생성
    지연 on/off 실행이 같은 네트워크와 잡음을 공유하도록 분리합니다.
    """
    children = np.random.SeedSequence(seed).spawn(3)
    return RngStreams(*(np.random.default_rng(child) for child in children))


def build_network(
    network: NetworkConfig,
    population_config: PopulationConfig,
    sim: SimConfig,
    p: float,
    seed: int,
) -> Tuple[Population, NetworkTopology, RngStreams]:
    """
    시드 하나로 집단과 (재배선된) 토폴로지 생성

    Returns:
        (population, topology, streams): streams.thalamic은 아직 사용 전
    """
    streams = make_streams(seed)
    population = make_population(network.N, network.Ne, network.Ni, streams.population, population_config)
    lattice = make_ring_lattice(network.N, network.k, streams.topology, population.inhibitory, sim.w_e, sim.w_i)
    topo = rewire(lattice, p, streams.topology)
    topo.seed = seed
    return population, topo, streams


def edge_delay(ring_distance, distance_scale: int):
    """
    링 거리에 따른 전달 지연 (ms): floor((distance - 1) / distance_scale)

    25 이하 -> 0, 26-50 -> 1, ..., 476-500 -> 19 (distance_scale=25)
    """
    if distance_scale < 1:
        raise ConfigurationError(f"distance_scale must be >= 1 (got {distance_scale})")
    return np.floor_divide(np.asarray(ring_distance) - 1, distance_scale)


class SpikeRaster:
    """(tick, unit) 발화 이벤트 기록"""

    def __init__(self, ticks, units, N: int, duration: int):
        self.ticks = np.asarray(ticks, dtype=np.int64)
        self.units = np.asarray(units, dtype=np.int64)
        self.N = int(N)
        self.duration = int(duration)
        if self.ticks.shape != self.units.shape:
            raise ValueError("ticks and units must have the same length")
        if self.ticks.size:
            if np.any(np.diff(self.ticks) < 0):
                raise NetworkFormatError("raster ticks must be non-decreasing")
            if self.ticks.min() < 0 or self.ticks.max() >= self.duration:
                raise NetworkFormatError(f"raster tick outside [0, {self.duration})")
            if self.units.min() < 0 or self.units.max() >= self.N:
                raise NetworkFormatError(f"raster unit outside [0, {self.N})")

    @classmethod
    def from_events(cls, events: List[Tuple[int, int]], N: int, duration: int) -> "SpikeRaster":
        """(tick, unit) 목록에서 생성 (tick 기준 안정 정렬)"""
        if not events:
            return cls([], [], N, duration)
        arr = np.asarray(events, dtype=np.int64)
        order = np.argsort(arr[:, 0], kind="stable")
        return cls(arr[order, 0], arr[order, 1], N, duration)

    @property
    def events(self) -> List[Tuple[int, int]]:
        return list(zip(self.ticks.tolist(), self.units.tolist()))

    def __len__(self) -> int:
        return int(self.ticks.size)

    def __iter__(self) -> Iterator[Tuple[int, int]]:
        return iter(self.events)

    def union(self, other: "SpikeRaster") -> "SpikeRaster":
        """두 래스터 합치기"""
        return SpikeRaster.from_events(self.events + other.events, max(self.N, other.N),
                                       max(self.duration, other.duration))


def spike_counts(raster: SpikeRaster, duration: int = None) -> np.ndarray:
    """
    tick별 스파이크 수

    Args:
        raster: 스파이크 래스터
        duration: 길이 (None이면 raster.duration)

    Returns:
        np.ndarray: 길이 duration의 정수 배열 (합 = 이벤트 수)
    """
    duration = raster.duration if duration is None else int(duration)
    if len(raster) and raster.ticks.max() >= duration:
        raise ValueError(f"raster contains ticks beyond duration {duration}")
    return np.bincount(raster.ticks, minlength=duration).astype(np.int64)


class DelayBuffer:
    """지연 tick modulo 슬롯 수로 인덱싱되는 유닛별 입력 누적 원형 버퍼"""

    def __init__(self, n_units: int, max_delay: int):
        """
        Args:
            n_units: 유닛 수
            max_delay: 최대 지연 (슬롯 수 = max_delay + 1)
        """
        self.n_units = int(n_units)
        self.max_delay = int(max_delay)
        self.slots = np.zeros((self.max_delay + 1, self.n_units))
        self.scheduled_total = 0.0
        self.delivered_total = 0.0

    def schedule(self, tick: int, delay: int, contributions: np.ndarray):
        """tick + delay 에 도착할 입력 예약"""
        if not 0 <= delay <= self.max_delay:
            raise ValueError(f"delay {delay} outside [0, {self.max_delay}]")
        self.slots[(tick + delay) % self.slots.shape[0]] += contributions
        self.scheduled_total += float(np.sum(contributions))

    def consume(self, tick: int) -> np.ndarray:
        """이번 tick 입력을 꺼내고 슬롯을 0으로 비움"""
        slot = tick % self.slots.shape[0]
        delivered = self.slots[slot].copy()
        self.slots[slot] = 0.0
        self.delivered_total += float(np.sum(delivered))
        return delivered

    def pending(self) -> float:
        """아직 전달되지 않은 입력 총량"""
        return float(self.slots.sum())


class DelayedSynapses:
    """지연 값별로 묶은 시냅스 행렬 (도착 x 출발)"""

    def __init__(self, topo: NetworkTopology, delays: np.ndarray):
        """
        Args:
            topo: 토폴로지
            delays: 간선별 지연 (ms)
        """
        delays = np.asarray(delays, dtype=np.int64)
        self.N = topo.N
        self.max_delay = int(delays.max()) if delays.size else 0
        self.matrices: List[Tuple[int, sparse.csr_matrix]] = []
        for d in np.unique(delays).tolist():
            mask = delays == d
            matrix = sparse.csr_matrix(
                (topo.weight[mask], (topo.dst[mask], topo.src[mask])),
                shape=(topo.N, topo.N),
            )
            self.matrices.append((int(d), matrix))

    @classmethod
    def from_config(cls, topo: NetworkTopology, config: SimConfig) -> "DelayedSynapses":
        """설정에 따라 지연 적용 (비활성화면 모든 지연 0)"""
        if config.delay_enabled:
            delays = edge_delay(topo.ring_dist, config.distance_scale)
        else:
            delays = np.zeros(topo.edge_count, dtype=np.int64)
        return cls(topo, delays)

    def deliver(self, tick: int, fired: np.ndarray, buffer: DelayBuffer):
        """발화 유닛의 출력을 지연별로 버퍼에 예약"""
        indicator = fired.astype(np.float64)
        for delay, matrix in self.matrices:
            buffer.schedule(tick, delay, matrix @ indicator)


def thalamic_scale(population: Population, config: SimConfig) -> np.ndarray:
    """유닛별 시상 입력 스케일 (흥분성 t_e, 억제성 t_i)"""
    return np.where(population.inhibitory, config.t_i, config.t_e)


def thalamic_input(scale: np.ndarray, rng: np.random.Generator, distribution: str = "gaussian") -> np.ndarray:
    """
    tick 하나의 유닛별 시상 입력

    gaussian: scale * N(0,1), uniform: scale * U[0,1).
    uniform에서 t_e=3 흥분성 유닛은 휴지점을 넘지 못함 (I > 4 필요).
    """
    if distribution == "gaussian":
        return scale * rng.standard_normal(scale.size)
    if distribution == "uniform":
        return scale * rng.random(scale.size)
    raise ConfigurationError(f"unknown thalamic distribution {distribution!r}")


def run_simulation(
    topo: NetworkTopology,
    population: Population,
    config: SimConfig,
    rng: Optional[np.random.Generator] = None,
    initial_state: Optional[NeuronState] = None,
) -> Tuple[SpikeRaster, np.ndarray]:
    """
    네트워크 시뮬레이션 실행

    Args:
        topo: 토폴로지
        population: 유닛 집단 (크기 = topo.N)
        config: 시뮬레이션 설정
        rng: 시상 입력 스트림 (None이면 config.seed의 thalamic 스트림)
        initial_state: 초기 상태 (None이면 집단 기본값)

    Returns:
        (raster, counts): 스파이크 래스터와 tick별 스파이크 수
    """
    if population.N != topo.N:
        raise ConfigurationError(f"population size {population.N} != topology N {topo.N}")

    N = topo.N
    duration = config.duration
    rng = rng if rng is not None else make_streams(config.seed).thalamic
    state = initial_state if initial_state is not None else population.initial_state()
    state = NeuronState(np.array(state.v, dtype=np.float64), np.array(state.u, dtype=np.float64))

    synapses = DelayedSynapses.from_config(topo, config)
    buffer = DelayBuffer(N, synapses.max_delay)
    scale = thalamic_scale(population, config)

    tick_chunks = []
    unit_chunks = []

    for t in range(duration):
        fired, state = detect_and_reset(state, population)
        fired_idx = np.flatnonzero(fired)
        if fired_idx.size:
            tick_chunks.append(np.full(fired_idx.size, t, dtype=np.int64))
            unit_chunks.append(fired_idx)
            synapses.deliver(t, fired, buffer)

        I = thalamic_input(scale, rng, config.thalamic_distribution) + buffer.consume(t)
        state = step_neuron(state, population, I, ceiling=config.divergence_ceiling, tick=t)

    if tick_chunks:
        raster = SpikeRaster(np.concatenate(tick_chunks), np.concatenate(unit_chunks), N, duration)
    else:
        raster = SpikeRaster([], [], N, duration)
    return raster, spike_counts(raster, duration)
