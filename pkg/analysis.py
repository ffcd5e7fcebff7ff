"""
analysis.py - 동기화 측정
스파이크 열을 가우시안 커널과 합성곱해 평균장(mean-field) 신호를 만들고,
파워 스펙트럼에서 DC를 제외한 지배 주파수의 파워 S를 구합니다.
"""
from typing import Tuple

import numpy as np
from scipy import fft

from models import SyncMeasure
from neuron import Population
from simulator import SpikeRaster, spike_counts

SAMPLE_RATE_HZ = 1000.0  # tick = 1 ms


def kernel(x, scale: float = 10.0, half_width: int = 15):
    """
    합성곱 커널 exp(-(x/scale)^2), |x| > half_width 이면 0

    Args:
        x: 오프셋 (ms), 스칼라 또는 배열
        scale: 커널 폭 파라미터
        half_width: 지지 구간 반폭 (창 폭 30ms -> 15)
    """
    x = np.asarray(x, dtype=np.float64)
    values = np.where(np.abs(x) <= half_width, np.exp(-(x / scale) ** 2), 0.0)
    return float(values) if values.ndim == 0 else values


def kernel_taps(window_width: int = 30, scale: float = 10.0) -> np.ndarray:
    """정수 ms 오프셋 -w/2..+w/2 에서 샘플한 커널 (창 폭 30 -> 31 탭)"""
    half = window_width // 2
    return kernel(np.arange(-half, half + 1), scale=scale, half_width=half)


def convolve_and_sum(
    raster: SpikeRaster,
    duration: int = None,
    window_width: int = 30,
    scale: float = 10.0,
) -> np.ndarray:
    """
    평균장 신호: 유닛별 0/1 스파이크 열을 커널과 합성곱한 뒤 합산

    합성곱과 합산은 교환 가능하므로 tick별 스파이크 수를 한 번 합성곱합니다.
    경계는 잘라냄 (패딩/순환 없음).

    Returns:
        np.ndarray: 길이 duration의 비음수 신호
    """
    duration = raster.duration if duration is None else int(duration)
    counts = spike_counts(raster, duration).astype(np.float64)
    taps = kernel_taps(window_width, scale)
    half = taps.size // 2
    full = np.convolve(counts, taps)
    return full[half:half + duration]


def power_spectrum(series: np.ndarray, sample_rate: float = SAMPLE_RATE_HZ) -> Tuple[np.ndarray, np.ndarray]:
    """
    단측 파워 스펙트럼 |X_k|^2 (정규화 없음, DC 포함)

    Returns:
        (freqs, power): 주파수(Hz)와 파워
    """
    series = np.asarray(series, dtype=np.float64)
    coeffs = fft.rfft(series)
    freqs = fft.rfftfreq(series.size, d=1.0 / sample_rate)
    return freqs, np.abs(coeffs) ** 2


def sync_measure(series: np.ndarray, sample_rate: float = SAMPLE_RATE_HZ) -> SyncMeasure:
    """
    동기화 지표 S: DC를 제외한 최대 파워와 그 주파수

    동률이면 낮은 주파수, 분산이 0인 신호(전부 0, 상수)는 S=0 / 주파수 없음.
    """
    series = np.asarray(series, dtype=np.float64)
    if series.size < 2:
        raise ValueError(f"series must have at least 2 samples (got {series.size})")
    if np.ptp(series) == 0.0:
        return SyncMeasure(S=0.0, dominant_freq=None)

    freqs, power = power_spectrum(series, sample_rate)
    peak = int(np.argmax(power[1:])) + 1
    return SyncMeasure(S=float(power[peak]), dominant_freq=float(freqs[peak]))


def normalize_S(values) -> Tuple[np.ndarray, bool]:
    """
    전체 최댓값으로 나눠 [0, 1] 정규화

    Returns:
        (normalized, degenerate): 모든 값이 0이면 (0 배열, True)
    """
    values = np.asarray(values, dtype=np.float64)
    peak = values.max() if values.size else 0.0
    if peak <= 0.0:
        return np.zeros_like(values), True
    return values / peak, False


def firing_rates(raster: SpikeRaster, population: Population, duration: int = None) -> Tuple[float, float]:
    """
    흥분성/억제성 집단 평균 발화율 (Hz)

    Returns:
        (excitatory_hz, inhibitory_hz)
    """
    duration = raster.duration if duration is None else int(duration)
    seconds = duration / SAMPLE_RATE_HZ
    inhibitory_spikes = int(population.inhibitory[raster.units].sum()) if len(raster) else 0
    excitatory_spikes = len(raster) - inhibitory_spikes

    def rate(spikes: int, units: int) -> float:
        return spikes / (units * seconds) if units else 0.0

    n_inh = int(population.inhibitory.sum())
    return rate(excitatory_spikes, population.N - n_inh), rate(inhibitory_spikes, n_inh)


def analyze_raster(
    raster: SpikeRaster,
    window_width: int = 30,
    scale: float = 10.0,
) -> Tuple[np.ndarray, SyncMeasure]:
    """래스터 -> (평균장 신호, S)"""
    series = convolve_and_sum(raster, raster.duration, window_width, scale)
    return series, sync_measure(series)
