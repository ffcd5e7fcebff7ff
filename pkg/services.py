"""
services.py - 명령별 비즈니스 로직
CLI(main.py)에서 호출되는 generate / metrics / simulate / analyze / sweep의
실제 처리를 담당합니다.
"""
import os
from datetime import datetime
from typing import Dict, Optional, Tuple

from analysis import convolve_and_sum, firing_rates, sync_measure
from artifact_manager import ArtifactManager
from config import Config
from models import GraphMetrics, RunConfig, SimulationSummary, SweepResult, SyncMeasure
from simulator import build_network, edge_delay, run_simulation
from sweep import SweepRunner
from topology import NetworkTopology, compute_metrics


class NetworkService:
    """네트워크 생성/지표 관련 로직"""

    def __init__(self, artifact_manager: ArtifactManager, verbose: bool = True):
        """
        Args:
            artifact_manager: 산출물 관리자
            verbose: 로그 출력 여부
        """
        self.artifact_manager = artifact_manager
        self.verbose = verbose

    def log(self, message: str):
        if self.verbose:
            print(f"[Service] {message}")

    def generate(self, run_config: RunConfig, out: Optional[str] = None) -> Tuple[NetworkTopology, str]:
        """
        격자 생성 + 재배선 후 간선 목록 저장

        Args:
            run_config: 실행 설정
            out: 출력 경로 (None이면 output_dir/network.txt)

        Returns:
            (topology, path)
        """
        net = run_config.network
        sim = run_config.simulation
        self.log(f"네트워크 생성: N={net.N}, k={net.k}, p={net.p}, seed={sim.seed}")

        _, topo, _ = build_network(net, run_config.population, sim, net.p, sim.seed)
        path = self.artifact_manager.write_network(topo, out)
        return topo, path

    def metrics(self, network_path: str) -> GraphMetrics:
        """
        저장된 네트워크의 C, L 계산

        Args:
            network_path: 간선 목록 파일

        Returns:
            GraphMetrics: 지표
        """
        topo = self.artifact_manager.read_network(network_path)
        start_time = datetime.now()
        result = compute_metrics(topo)
        elapsed = (datetime.now() - start_time).total_seconds() * 1000
        self.log(f"지표 계산 완료 ({elapsed:.0f}ms)")
        if result.disconnected:
            self.log("경고: 비연결 그래프, L 정의되지 않음")
        return result


class SimulationService:
    """시뮬레이션 관련 로직"""

    def __init__(self, artifact_manager: ArtifactManager, verbose: bool = True):
        self.artifact_manager = artifact_manager
        self.verbose = verbose

    def log(self, message: str):
        if self.verbose:
            print(f"[Service] {message}")

    def simulate(self, run_config: RunConfig, out_dir: Optional[str] = None) -> Dict[str, str]:
        """
        네트워크 생성 후 시뮬레이션, 래스터/스파이크 수/평균장/요약 저장

        Args:
            run_config: 실행 설정
            out_dir: 출력 디렉토리 (None이면 output_dir)

        Returns:
            Dict: 산출물 경로 (raster, counts, meanfield, summary)
        """
        net = run_config.network
        sim = run_config.simulation
        analysis = run_config.analysis
        out_dir = out_dir or run_config.output_dir

        self.log(
            f"시뮬레이션 시작: p={net.p}, seed={sim.seed}, {sim.duration}ms, "
            f"delay={sim.delay_enabled} (scale {sim.distance_scale})"
        )
        start_time = datetime.now()

        population, topo, streams = build_network(net, run_config.population, sim, net.p, sim.seed)
        raster, counts = run_simulation(topo, population, sim, rng=streams.thalamic)
        series = convolve_and_sum(raster, sim.duration, analysis.window_width, analysis.kernel_scale)

        elapsed = (datetime.now() - start_time).total_seconds() * 1000
        self.log(f"시뮬레이션 완료: 스파이크 {len(raster)}개 ({elapsed:.0f}ms)")

        exc_rate, inh_rate = firing_rates(raster, population, sim.duration)
        max_delay = int(edge_delay(topo.ring_dist, sim.distance_scale).max()) if sim.delay_enabled else 0
        summary = SimulationSummary(
            N=net.N,
            duration=sim.duration,
            seed=sim.seed,
            p=net.p,
            delay_enabled=sim.delay_enabled,
            distance_scale=sim.distance_scale,
            max_delay=max_delay,
            n_spikes=len(raster),
            excitatory_rate_hz=exc_rate,
            inhibitory_rate_hz=inh_rate,
        )

        header = dict(N=net.N, seed=sim.seed, p=net.p, delay_enabled=sim.delay_enabled)
        am = self.artifact_manager
        return {
            "raster": am.write_raster(raster, sim.seed, net.p, sim.delay_enabled,
                                      os.path.join(out_dir, "raster.txt")),
            "counts": am.write_series(counts, path=os.path.join(out_dir, "counts.txt"), **header),
            "meanfield": am.write_series(series, path=os.path.join(out_dir, "meanfield.txt"), **header),
            "summary": am.write_json(summary.model_dump(mode="json"), os.path.join(out_dir, "summary.json")),
        }


class AnalysisService:
    """동기화 분석 관련 로직"""

    def __init__(self, artifact_manager: ArtifactManager, verbose: bool = True):
        self.artifact_manager = artifact_manager
        self.verbose = verbose

    def log(self, message: str):
        if self.verbose:
            print(f"[Service] {message}")

    def analyze(
        self,
        raster_path: str,
        run_config: RunConfig,
        out: Optional[str] = None,
    ) -> Tuple[SyncMeasure, Dict[str, str]]:
        """
        래스터 파일에서 평균장과 S 계산

        Args:
            raster_path: 래스터 파일
            run_config: 실행 설정 (커널 창 폭, 출력 형식)
            out: 결과 레코드 경로 (평균장은 같은 디렉토리에 저장)

        Returns:
            (SyncMeasure, 산출물 경로)
        """
        raster, meta = self.artifact_manager.read_raster(raster_path)
        analysis = run_config.analysis
        self.log(f"분석 시작: {raster_path} ({len(raster)}개 스파이크, 창 {analysis.window_width}ms)")

        series = convolve_and_sum(raster, meta["duration"], analysis.window_width, analysis.kernel_scale)
        measure = sync_measure(series)

        suffix = "json" if run_config.output_format == "json" else "txt"
        record_path = out or os.path.join(os.path.dirname(raster_path) or ".", f"sync.{suffix}")
        out_dir = os.path.dirname(record_path) or "."
        paths = {
            "meanfield": self.artifact_manager.write_series(
                series, meta["N"], meta["seed"], meta["p"], meta["delay_enabled"],
                path=os.path.join(out_dir, "meanfield.txt"),
            ),
            "record": self.artifact_manager.write_sync_record(measure, record_path, run_config.output_format),
        }
        return measure, paths


class SweepService:
    """스윕 관련 로직"""

    def __init__(self, artifact_manager: ArtifactManager, verbose: bool = True):
        self.artifact_manager = artifact_manager
        self.verbose = verbose

    def sweep(self, run_config: RunConfig, out: Optional[str] = None) -> Tuple[SweepResult, str, str]:
        """
        p 스윕 실행 후 CSV(JSON) + 메타데이터 저장

        Returns:
            (result, 결과 경로, 메타데이터 경로)
        """
        sweep_config = run_config.to_sweep_config()
        runner = SweepRunner(
            sweep_config,
            workers=Config.worker_count(),
            verbose=self.verbose,
            progress=self.verbose,
        )
        result = runner.run()
        suffix = "json" if run_config.output_format == "json" else "csv"
        path, meta_path = self.artifact_manager.write_sweep(
            result,
            sweep_config.model_dump(mode="json"),
            out or os.path.join(run_config.output_dir, f"sweep.{suffix}"),
            run_config.output_format,
        )
        return result, path, meta_path
