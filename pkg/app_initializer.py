"""
app_initializer.py - 실행 초기화 로직
설정, ArtifactManager, Service 초기화를 담당합니다.
"""
from typing import Any, Dict

from artifact_manager import ArtifactManager
from config import Config
from services import AnalysisService, NetworkService, SimulationService, SweepService


class AppInitializer:
    """애플리케이션 초기화 클래스"""

    def __init__(self, config_path: str = None, overrides: Dict[str, Any] = None, quiet: bool = False):
        """
        Args:
            config_path: 설정 파일 경로 (None이면 SWSYNC_CONFIG 또는 config.json)
            overrides: CLI 플래그 (RunConfig 구조)
            quiet: True면 모든 [Tag] 로그 끔
        """
        Config.VERBOSE = not quiet
        if quiet:
            overrides = dict(overrides or {}, verbose=False)

        self.run_config = Config.initialize(config_path, overrides)
        verbose = self.run_config.verbose

        if verbose:
            print("=" * 60)
            print("소세계 네트워크 동기화 시뮬레이터 초기화")
            print("=" * 60)

        # Manager 초기화
        self.artifact_manager = ArtifactManager(output_dir=self.run_config.output_dir, verbose=verbose)

        # Service 초기화
        self.network_service = NetworkService(self.artifact_manager, verbose=verbose)
        self.simulation_service = SimulationService(self.artifact_manager, verbose=verbose)
        self.analysis_service = AnalysisService(self.artifact_manager, verbose=verbose)
        self.sweep_service = SweepService(self.artifact_manager, verbose=verbose)

    def print_startup_info(self, command: str):
        """실행 정보 출력"""
        if not self.run_config.verbose:
            return
        print(f"명령: {command}")
        print(f"출력 디렉토리: {self.run_config.output_dir}")
        Config.print_config()
