"""
models.py - 설정/결과 모델 정의
pydantic 모델로 파라미터 검증과 직렬화를 처리합니다.
기본값은 모두 기본 파라미터(N=1000, Ne=800, Ni=200, w_e=32, w_i=22, t_e=3, t_i=11)입니다.
"""
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, Field, model_validator


def default_p_grid(points: int = 17, p_min: float = 1e-4, include_zero: bool = True) -> List[float]:
    """
    기본 p 그리드 생성: [p_min, 1] 구간 로그 등간격 + (선택) p=0

    Args:
        points: 로그 구간의 점 개수
        p_min: 최소 재배선 확률
        include_zero: p=0 포함 여부 (그래프 왼쪽 끝)

    Returns:
        List[float]: 오름차순 p 목록
    """
    grid = np.logspace(np.log10(p_min), 0.0, points).tolist()
    # 끝점은 정확히 1.0
    grid[-1] = 1.0
    return ([0.0] if include_zero else []) + grid


class NeuronParams(BaseModel):
    """Izhikevich 유닛 파라미터 (a, b, c, d)"""
    a: float = Field(..., gt=0, description="회복 시간 척도 (1/ms)")
    b: float = Field(..., description="회복 민감도")
    c: float = Field(..., lt=30, description="스파이크 후 리셋 전위 (mV)")
    d: float = Field(..., description="스파이크 후 회복 증가량")


class PopulationConfig(BaseModel):
    """흥분/억제 집단 파라미터 맵: 값 = base + span * r^power, r ~ U[0,1)"""
    exc_a: float = Field(default=0.02, gt=0)
    exc_b: float = Field(default=0.2)
    exc_c_base: float = Field(default=-65.0)
    exc_c_span: float = Field(default=15.0)
    exc_d_base: float = Field(default=8.0)
    exc_d_span: float = Field(default=-6.0)
    inh_a_base: float = Field(default=0.02, gt=0)
    inh_a_span: float = Field(default=0.08)
    inh_b_base: float = Field(default=0.25)
    inh_b_span: float = Field(default=-0.05)
    inh_c: float = Field(default=-65.0)
    inh_d: float = Field(default=2.0)
    v_init: float = Field(default=-65.0, description="초기 막전위 (mV)")


class NetworkConfig(BaseModel):
    """링 격자 / 재배선 설정"""
    N: int = Field(default=1000, ge=3, description="전체 유닛 수")
    Ne: int = Field(default=800, ge=0, description="흥분성 유닛 수")
    Ni: int = Field(default=200, ge=0, description="억제성 유닛 수")
    k: int = Field(default=10, ge=2, description="격자 차수 (짝수)")
    p: float = Field(default=0.0, ge=0.0, le=1.0, description="재배선 확률")

    @model_validator(mode="after")
    def _check_shape(self):
        if self.Ne + self.Ni != self.N:
            raise ValueError(f"Ne + Ni must equal N (got {self.Ne} + {self.Ni} != {self.N})")
        if self.k % 2 != 0:
            raise ValueError(f"k must be even (got {self.k})")
        if self.k >= self.N:
            raise ValueError(f"k must be smaller than N (got k={self.k}, N={self.N})")
        return self


class SimConfig(BaseModel):
    """시뮬레이션 설정"""
    duration: int = Field(default=2000, gt=0, description="시뮬레이션 길이 (ms = tick)")
    w_e: float = Field(default=32.0, ge=0, description="흥분성 가중치 스케일")
    w_i: float = Field(default=22.0, ge=0, description="억제성 가중치 스케일")
    t_e: float = Field(default=3.0, ge=0, description="흥분성 유닛 시상 입력 스케일")
    t_i: float = Field(default=11.0, ge=0, description="억제성 유닛 시상 입력 스케일")
    thalamic_distribution: str = Field(
        default="gaussian",
        pattern="^(gaussian|uniform)$",
        description="시상 입력 분포: gaussian = 스케일 * N(0,1), uniform = 스케일 * U[0,1)",
    )
    delay_enabled: bool = Field(default=False, description="거리 비례 전달 지연 사용 여부")
    distance_scale: int = Field(default=25, ge=1, description="지연 1ms당 링 거리")
    seed: int = Field(default=0, ge=0, description="RNG 시드")
    divergence_ceiling: float = Field(default=1e6, gt=0, description="|v| 발산 판정 상한")


class AnalysisConfig(BaseModel):
    """동기화 분석 설정"""
    window_width: int = Field(default=30, ge=2, description="가우시안 커널 창 폭 (ms)")
    kernel_scale: float = Field(default=10.0, gt=0, description="커널 exp(-(x/scale)^2)의 scale")


class SweepConfig(BaseModel):
    """p 스윕 설정"""
    network: NetworkConfig = Field(default_factory=NetworkConfig)
    population: PopulationConfig = Field(default_factory=PopulationConfig)
    simulation: SimConfig = Field(default_factory=SimConfig)
    analysis: AnalysisConfig = Field(default_factory=AnalysisConfig)
    p_grid: List[float] = Field(default_factory=default_p_grid, min_length=1)
    sims_per_p: int = Field(default=10, ge=1, description="p당 앙상블 크기 (전체 규모: 100)")
    base_seed: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def _check_grid(self):
        for p in self.p_grid:
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"p values must lie in [0, 1] (got {p})")
        return self


class RunConfig(BaseModel):
    """CLI 전체 설정 (플래그 > 설정 파일 > 기본 파라미터)"""
    network: NetworkConfig = Field(default_factory=NetworkConfig)
    population: PopulationConfig = Field(default_factory=PopulationConfig)
    simulation: SimConfig = Field(default_factory=SimConfig)
    analysis: AnalysisConfig = Field(default_factory=AnalysisConfig)
    p_grid: Optional[List[float]] = Field(default=None, description="None이면 기본 로그 그리드")
    p_grid_points: int = Field(default=17, ge=1)
    p_min: float = Field(default=1e-4, gt=0, le=1)
    include_zero: bool = Field(default=True)
    sims_per_p: int = Field(default=10, ge=1)
    output_dir: str = Field(default="./output")
    output_format: str = Field(default="csv", pattern="^(csv|json)$")
    verbose: bool = Field(default=True)

    def resolved_p_grid(self) -> List[float]:
        """명시 그리드가 없으면 기본 로그 그리드 반환"""
        if self.p_grid is not None:
            return list(self.p_grid)
        return default_p_grid(self.p_grid_points, self.p_min, self.include_zero)

    def to_sweep_config(self) -> SweepConfig:
        """스윕 설정으로 변환"""
        return SweepConfig(
            network=self.network,
            population=self.population,
            simulation=self.simulation,
            analysis=self.analysis,
            p_grid=self.resolved_p_grid(),
            sims_per_p=self.sims_per_p,
            base_seed=self.simulation.seed,
        )


class GraphMetrics(BaseModel):
    """그래프 지표"""
    C: float = Field(..., ge=0.0, le=1.0, description="평균 군집 계수")
    L: Optional[float] = Field(default=None, description="특성 경로 길이 (비연결이면 None)")
    disconnected: bool = Field(default=False, description="비연결 그래프 여부")
    wiring_length: Optional[float] = Field(default=None, description="간선 평균 링 거리")
    reciprocity: Optional[float] = Field(default=None, description="양방향 간선 비율")


class SyncMeasure(BaseModel):
    """동기화 지표 S"""
    S: float = Field(..., ge=0.0, description="지배 주파수 성분의 파워")
    dominant_freq: Optional[float] = Field(default=None, description="지배 주파수 (Hz)")


class SimulationSummary(BaseModel):
    """단일 시뮬레이션 요약"""
    N: int
    duration: int
    seed: int
    p: float
    delay_enabled: bool
    distance_scale: int
    max_delay: int
    n_spikes: int
    excitatory_rate_hz: float
    inhibitory_rate_hz: float


class SweepRecord(BaseModel):
    """p 하나에 대한 앙상블 집계"""
    p: float
    C: float
    L: Optional[float]
    S: float
    C_norm: float
    L_norm: Optional[float]
    S_norm: float
    freq_hz: Optional[float]
    n_sims: int
    seed: int
    C_std: float = 0.0
    L_std: Optional[float] = 0.0
    S_std: float = 0.0


class SweepResult(BaseModel):
    """스윕 전체 결과 + 메타데이터"""
    records: List[SweepRecord]
    delay_enabled: bool
    config_hash: str
    seeds: List[List[int]] = Field(..., description="[p_index][sim_index] 파생 시드")
    degenerate_normalization: bool = False
    n_disconnected: int = 0
    C_ref: float
    L_ref: Optional[float]
