"""
neuron.py - Izhikevich 유닛 동역학
상태 갱신, 스파이크 검출/리셋, 흥분/억제 혼합 집단 생성을 담당합니다.

모든 함수는 스칼라와 numpy 배열 모두에 대해 원소 단위로 동작합니다.
"""
from typing import Iterator, NamedTuple, Tuple, Union

import numpy as np

from errors import ConfigurationError, IntegratorDivergenceError
from models import NeuronParams, PopulationConfig

ArrayLike = Union[float, np.ndarray]

SPIKE_THRESHOLD = 30.0  # mV, 포함(>=) 비교
DEFAULT_DIVERGENCE_CEILING = 1e6


class NeuronState(NamedTuple):
    """막전위 v(mV)와 회복 변수 u"""
    v: ArrayLike
    u: ArrayLike


def step_neuron(
    state: NeuronState,
    params,
    I: ArrayLike,
    dt: float = 1.0,
    ceiling: float = DEFAULT_DIVERGENCE_CEILING,
    tick: int = None,
) -> NeuronState:
    """
    한 tick 진행: v는 dt/2 오일러 반스텝 두 번, u는 dt 한 스텝 (리셋 없음)

    Args:
        state: 현재 상태
        params: a, b 속성을 가진 객체 (NeuronParams 또는 Population)
        I: 이번 tick 입력 전류 (시상 + 시냅스)
        dt: tick 길이 (ms)
        ceiling: |v| 발산 판정 상한
        tick: 오류 메시지용 현재 tick

    Returns:
        NeuronState: 갱신된 상태
    """
    v, u = state
    half = 0.5 * dt
    v = v + half * ((0.04 * v + 5.0) * v + 140.0 - u + I)
    v = v + half * ((0.04 * v + 5.0) * v + 140.0 - u + I)
    u = u + dt * params.a * (params.b * v - u)

    # NaN도 여기서 걸러짐 (NaN <= x 는 False)
    ok = np.abs(v) <= ceiling
    if not np.all(ok):
        bad = int(np.flatnonzero(~np.atleast_1d(ok))[0])
        value = float(np.atleast_1d(v)[bad])
        raise IntegratorDivergenceError(tick=tick, unit=bad, value=value, ceiling=ceiling)

    return NeuronState(v, u)


def detect_and_reset(state: NeuronState, params) -> Tuple[ArrayLike, NeuronState]:
    """
    스파이크 검출 및 리셋: v >= 30 이면 v <- c, u <- u + d

    Args:
        state: 현재 상태
        params: c, d 속성을 가진 객체

    Returns:
        (fired, state): 발화 여부(스칼라면 bool, 배열이면 bool 배열)와 리셋된 상태
    """
    v, u = state
    fired = np.asarray(v) >= SPIKE_THRESHOLD
    v_new = np.where(fired, params.c, v)
    u_new = np.where(fired, u + params.d, u)

    if fired.ndim == 0:
        return bool(fired), NeuronState(float(v_new), float(u_new))
    return fired, NeuronState(v_new, u_new)


def excitatory_maps(r_c, r_d, config: PopulationConfig = None) -> Tuple[ArrayLike, ...]:
    """흥분성 파라미터 맵 (배열 가능): (0.02, 0.2, -65 + 15 r_c^2, 8 - 6 r_d^2)"""
    cfg = config or PopulationConfig()
    return (
        cfg.exc_a,
        cfg.exc_b,
        cfg.exc_c_base + cfg.exc_c_span * np.square(r_c),
        cfg.exc_d_base + cfg.exc_d_span * np.square(r_d),
    )


def inhibitory_maps(r_a, r_b, config: PopulationConfig = None) -> Tuple[ArrayLike, ...]:
    """억제성 파라미터 맵 (배열 가능): (0.02 + 0.08 r_a, 0.25 - 0.05 r_b, -65, 2)"""
    cfg = config or PopulationConfig()
    return (
        cfg.inh_a_base + cfg.inh_a_span * np.asarray(r_a),
        cfg.inh_b_base + cfg.inh_b_span * np.asarray(r_b),
        cfg.inh_c,
        cfg.inh_d,
    )


def excitatory_params(r_c: float, r_d: float, config: PopulationConfig = None) -> NeuronParams:
    """흥분성 유닛 하나의 파라미터"""
    a, b, c, d = excitatory_maps(r_c, r_d, config)
    return NeuronParams(a=float(a), b=float(b), c=float(c), d=float(d))


def inhibitory_params(r_a: float, r_b: float, config: PopulationConfig = None) -> NeuronParams:
    """억제성 유닛 하나의 파라미터"""
    a, b, c, d = inhibitory_maps(r_a, r_b, config)
    return NeuronParams(a=float(a), b=float(b), c=float(c), d=float(d))

class Population:
    """링 위치별 유닛 파라미터 배열과 초기 상태"""

    def __init__(
        self,
        inhibitory: np.ndarray,
        a: np.ndarray,
        b: np.ndarray,
        c: np.ndarray,
        d: np.ndarray,
        v_init: float = -65.0,
    ):
        """
        Args:
            inhibitory: 억제성 여부 (링 위치 인덱스)
            a, b, c, d: 유닛별 파라미터
            v_init: 초기 막전위
        """
        self.inhibitory = np.asarray(inhibitory, dtype=bool)
        self.a = np.asarray(a, dtype=np.float64)
        self.b = np.asarray(b, dtype=np.float64)
        self.c = np.asarray(c, dtype=np.float64)
        self.d = np.asarray(d, dtype=np.float64)
        self.v_init = float(v_init)

    @property
    def N(self) -> int:
        return int(self.inhibitory.size)

    @property
    def excitatory(self) -> np.ndarray:
        return ~self.inhibitory

    def initial_state(self) -> NeuronState:
        """초기 상태: v = v_init, u = b * v"""
        v = np.full(self.N, self.v_init)
        return NeuronState(v, self.b * v)

    def unit(self, i: int) -> Tuple[NeuronParams, NeuronState, str]:
        """i번째 유닛의 (파라미터, 초기 상태, 종류)"""
        params = NeuronParams(a=self.a[i], b=self.b[i], c=self.c[i], d=self.d[i])
        state = NeuronState(self.v_init, float(self.b[i] * self.v_init))
        kind = "inhibitory" if self.inhibitory[i] else "excitatory"
        return params, state, kind

    def __len__(self) -> int:
        return self.N

    def __iter__(self) -> Iterator[Tuple[NeuronParams, NeuronState, str]]:
        for i in range(self.N):
            yield self.unit(i)


def make_population(
    N: int,
    Ne: int,
    Ni: int,
    rng: np.random.Generator,
    config: PopulationConfig = None,
) -> Population:
    """
    흥분/억제 혼합 집단 생성

    억제성 정체성은 링 위치에 비복원 균등 추출로 배정되고,
    파라미터마다 유닛별로 새 r ~ U[0,1)을 뽑습니다.

    Args:
        N: 전체 유닛 수
        Ne: 흥분성 유닛 수
        Ni: 억제성 유닛 수
        rng: 시드가 고정된 난수 생성기
        config: 파라미터 맵

    Returns:
        Population: 링 위치 순서의 집단
    """
    if Ne + Ni != N or Ne < 0 or Ni < 0:
        raise ConfigurationError(f"Ne + Ni must equal N (got {Ne} + {Ni} != {N})")

    cfg = config or PopulationConfig()

    inhibitory = np.zeros(N, dtype=bool)
    inhibitory[rng.permutation(N)[:Ni]] = True
    exc_idx = np.flatnonzero(~inhibitory)
    inh_idx = np.flatnonzero(inhibitory)

    r_c = rng.random(Ne)
    r_d = rng.random(Ne)
    r_a = rng.random(Ni)
    r_b = rng.random(Ni)

    a = np.empty(N)
    b = np.empty(N)
    c = np.empty(N)
    d = np.empty(N)

    a[exc_idx], b[exc_idx], c[exc_idx], d[exc_idx] = excitatory_maps(r_c, r_d, cfg)
    a[inh_idx], b[inh_idx], c[inh_idx], d[inh_idx] = inhibitory_maps(r_a, r_b, cfg)

    return Population(inhibitory, a, b, c, d, v_init=cfg.v_init)
