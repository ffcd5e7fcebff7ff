"""
sweep.py - p 스윕 실험 오케스트레이션
로그 간격 p 그리드 x 시드 앙상블을 워커 풀로 실행하고,
C, L, S 평균을 (p_index, sim_index) 순서로 결정적으로 집계합니다.
"""
from concurrent.futures import ProcessPoolExecutor
from typing import List, NamedTuple, Optional, Tuple

import numpy as np
from tqdm import tqdm

from analysis import convolve_and_sum, normalize_S, sync_measure
from config import config_hash
from models import SweepConfig, SweepRecord, SweepResult
from simulator import build_network, run_simulation
from topology import characteristic_path_length, clustering_coefficient, make_ring_lattice

INDEX_BITS = 20
INDEX_LIMIT = 1 << INDEX_BITS


def derive_seed(base_seed: int, p_index: int, sim_index: int) -> int:
    """
    (base_seed, p_index, sim_index) -> 셀 시드 (단사 함수)

    인덱스는 각각 20비트 필드에 들어갑니다.
    """
    if base_seed < 0 or p_index < 0 or sim_index < 0:
        raise ValueError("seed and indices must be non-negative")
    if p_index >= INDEX_LIMIT or sim_index >= INDEX_LIMIT:
        raise ValueError(f"indices must be < {INDEX_LIMIT}")
    return (base_seed << (2 * INDEX_BITS)) | (p_index << INDEX_BITS) | sim_index


class CellResult(NamedTuple):
    """(p, sim) 셀 하나의 측정값"""
    C: float
    L: Optional[float]
    disconnected: bool
    S: float
    freq_hz: Optional[float]


def run_cell(task: Tuple[SweepConfig, float, int]) -> CellResult:
    """
    셀 실행: 격자 생성 -> 재배선 -> C, L -> 시뮬레이션 -> S

    Args:
        task: (스윕 설정, p, 셀 시드)
    """
    config, p, seed = task
    sim = config.simulation.model_copy(update={"seed": seed})
    population, topo, streams = build_network(config.network, config.population, sim, p, seed)

    C = clustering_coefficient(topo)
    L, disconnected = characteristic_path_length(topo)

    raster, _ = run_simulation(topo, population, sim, rng=streams.thalamic)
    series = convolve_and_sum(raster, sim.duration, config.analysis.window_width, config.analysis.kernel_scale)
    measure = sync_measure(series)
    return CellResult(C, L, disconnected, measure.S, measure.dominant_freq)


def lattice_reference(config: SweepConfig) -> Tuple[float, Optional[float]]:
    """정규화 기준 C(0), L(0): 재배선 전 격자는 시드와 무관"""
    net = config.network
    lattice = make_ring_lattice(net.N, net.k, np.random.default_rng(0))
    L, _ = characteristic_path_length(lattice)
    return clustering_coefficient(lattice), L


class SweepRunner:
    """p 그리드 앙상블 실행기"""

    def __init__(self, config: SweepConfig, workers: int = 1, verbose: bool = True, progress: bool = True):
        """
        Args:
            config: 스윕 설정
            workers: 워커 프로세스 수 (1이면 현재 프로세스에서 실행)
            verbose: [Sweep] 로그 출력 여부
            progress: tqdm 진행 표시 여부
        """
        self.config = config
        self.workers = max(1, int(workers))
        self.verbose = verbose
        self.progress = progress

    def log(self, message: str):
        if self.verbose:
            print(f"[Sweep] {message}")

    def seed_table(self) -> List[List[int]]:
        """[p_index][sim_index] 시드 표"""
        return [
            [derive_seed(self.config.base_seed, i, j) for j in range(self.config.sims_per_p)]
            for i in range(len(self.config.p_grid))
        ]

    def _execute(self, tasks: List[Tuple[SweepConfig, float, int]]) -> List[CellResult]:
        """셀 실행 (결과 순서 = 작업 순서)"""
        bar = dict(total=len(tasks), desc="[Sweep] cells", disable=not self.progress)
        if self.workers == 1:
            return [run_cell(task) for task in tqdm(tasks, **bar)]
        with ProcessPoolExecutor(max_workers=self.workers) as executor:
            return list(tqdm(executor.map(run_cell, tasks, chunksize=1), **bar))

    def run(self) -> SweepResult:
        """스윕 실행 및 집계"""
        cfg = self.config
        seeds = self.seed_table()
        tasks = [(cfg, p, seeds[i][j]) for i, p in enumerate(cfg.p_grid) for j in range(cfg.sims_per_p)]

        self.log(
            f"시작: p {len(cfg.p_grid)}개 x {cfg.sims_per_p}회, delay={cfg.simulation.delay_enabled}, "
            f"워커 {self.workers}"
        )
        cells = self._execute(tasks)

        C_ref, L_ref = lattice_reference(cfg)
        records, n_disconnected, degenerate = self._aggregate(cells, seeds, C_ref, L_ref)

        if degenerate:
            self.log("경고: 모든 S가 0 (정규화 불가)")
        if n_disconnected:
            self.log(f"비연결 네트워크 {n_disconnected}개는 L 평균에서 제외")
        self.log("완료")

        return SweepResult(
            records=records,
            delay_enabled=cfg.simulation.delay_enabled,
            config_hash=config_hash(cfg.model_dump(mode="json")),
            seeds=seeds,
            degenerate_normalization=degenerate,
            n_disconnected=n_disconnected,
            C_ref=C_ref,
            L_ref=L_ref,
        )

    def _aggregate(
        self,
        cells: List[CellResult],
        seeds: List[List[int]],
        C_ref: float,
        L_ref: Optional[float],
    ) -> Tuple[List[SweepRecord], int, bool]:
        """(p_index, sim_index) 순서로 평균/표준편차 집계 후 정규화"""
        cfg = self.config
        n = cfg.sims_per_p
        rows = []
        n_disconnected = 0

        for i, p in enumerate(cfg.p_grid):
            group = cells[i * n:(i + 1) * n]
            C_values = np.array([c.C for c in group])
            S_values = np.array([c.S for c in group])
            L_values = np.array([c.L for c in group if not c.disconnected])
            freqs = np.array([c.freq_hz for c in group if c.freq_hz is not None])
            n_disconnected += sum(1 for c in group if c.disconnected)

            rows.append(dict(
                p=p,
                C=float(C_values.mean()),
                C_std=float(C_values.std()),
                L=float(L_values.mean()) if L_values.size else None,
                L_std=float(L_values.std()) if L_values.size else None,
                S=float(S_values.mean()),
                S_std=float(S_values.std()),
                freq_hz=float(freqs.mean()) if freqs.size else None,
                n_sims=n,
                seed=seeds[i][0],
            ))

        S_norm, degenerate = normalize_S([row["S"] for row in rows])

        records = []
        for row, s_norm in zip(rows, S_norm.tolist()):
            C_norm = row["C"] / C_ref if C_ref else 0.0
            L_norm = row["L"] / L_ref if (row["L"] is not None and L_ref) else None
            records.append(SweepRecord(C_norm=C_norm, L_norm=L_norm, S_norm=s_norm, **row))
        return records, n_disconnected, degenerate


def run_sweep(config: SweepConfig, workers: int = 1, verbose: bool = False, progress: bool = False) -> SweepResult:
    """스윕 실행 (SweepRunner 래퍼)"""
    return SweepRunner(config, workers=workers, verbose=verbose, progress=progress).run()
