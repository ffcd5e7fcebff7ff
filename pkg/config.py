"""
config.py - 실행 설정 파일
JSON 파일에서 설정을 로드하고 CLI 플래그와 병합합니다.
우선순위: CLI 플래그 > 설정 파일 > 기본 파라미터 (models.RunConfig)
"""
import os
import json
import copy
import hashlib
from pathlib import Path
from typing import Any, Dict, Optional

from dotenv import load_dotenv
from pydantic import ValidationError

from errors import ConfigurationError
from models import RunConfig

# 환경 변수 로드
load_dotenv()


def deep_merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    """중첩 딕셔너리 병합 (override 우선, None 값은 무시)"""
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if value is None:
            continue
        if isinstance(value, dict):
            current = merged.get(key)
            merged[key] = deep_merge(current if isinstance(current, dict) else {}, value)
        else:
            merged[key] = value
    return merged


def config_hash(payload: Dict[str, Any]) -> str:
    """설정 딕셔너리의 안정적인 해시 (키 정렬 JSON의 sha256 앞 16자리)"""
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]


class Config:
    """실행 설정 클래스 - JSON 기반"""

    # 기본 설정 파일 경로 (환경 변수로 변경 가능)
    CONFIG_FILE_PATH = os.getenv("SWSYNC_CONFIG", "config.json")

    # JSON에서 로드된 원본
    _config_data: Dict[str, Any] = {}

    # 병합/검증된 설정
    RUN_CONFIG: Optional[RunConfig] = None

    # 로그 출력 여부
    VERBOSE = True

    @classmethod
    def load_config_from_json(cls, config_path: str = None) -> Dict[str, Any]:
        """
        JSON 파일에서 설정 로드

        Args:
            config_path: 설정 파일 경로 (None이면 기본 경로, 기본 경로에 파일이 없으면 기본값 사용)

        Returns:
            Dict: 로드된 설정 (파일 형식 그대로)
        """
        explicit = config_path is not None
        config_path = config_path or cls.CONFIG_FILE_PATH

        if not Path(config_path).exists():
            if explicit:
                raise FileNotFoundError(f"{config_path} 파일을 찾을 수 없습니다!")
            cls._config_data = {}
            cls.log(f"설정 파일 없음, 기본 파라미터 사용: {config_path}")
            return cls._config_data

        try:
            with open(config_path, "r", encoding="utf-8") as f:
                data = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigurationError(f"JSON 파싱 오류 ({config_path}): {e}")

        if not isinstance(data, dict):
            raise ConfigurationError(f"설정 파일 최상위는 객체여야 합니다: {config_path}")

        cls._config_data = cls._normalize_file_layout(data)
        cls.log(f"설정 파일 로드 완료: {config_path}")
        return cls._config_data

    @staticmethod
    def _normalize_file_layout(data: Dict[str, Any]) -> Dict[str, Any]:
        """config.json 섹션을 RunConfig 필드 구조로 변환"""
        sweep = data.get("sweep", {})
        output = data.get("output", {})
        layout = {
            "network": data.get("network", {}),
            "population": data.get("population", {}),
            "simulation": dict(data.get("simulation", {})),
            "analysis": data.get("analysis", {}),
            "p_grid": sweep.get("p_grid"),
            "p_grid_points": sweep.get("p_grid_points"),
            "p_min": sweep.get("p_min"),
            "include_zero": sweep.get("include_zero"),
            "sims_per_p": sweep.get("sims_per_p"),
            "output_dir": output.get("dir"),
            "output_format": output.get("format"),
            "verbose": data.get("logging", {}).get("verbose"),
        }
        if "seed" in data:
            layout["simulation"]["seed"] = data["seed"]
        # 설명용 키 제거
        for section in ("network", "population", "simulation", "analysis"):
            layout[section] = {k: v for k, v in layout[section].items() if k != "description"}
        return layout

    @classmethod
    def build_run_config(cls, overrides: Dict[str, Any] = None) -> RunConfig:
        """
        파일 설정과 CLI 플래그를 병합해 RunConfig 생성

        Args:
            overrides: CLI 플래그 (RunConfig 구조, None 값은 미지정으로 취급)

        Returns:
            RunConfig: 검증된 설정
        """
        merged = deep_merge(cls._config_data, overrides or {})
        merged = {k: v for k, v in merged.items() if v is not None}
        try:
            run_config = RunConfig(**merged)
        except ValidationError as e:
            raise ConfigurationError(cls._format_validation_error(e))

        cls.RUN_CONFIG = run_config
        cls.VERBOSE = run_config.verbose
        return run_config

    @staticmethod
    def _format_validation_error(error: ValidationError) -> str:
        """pydantic 오류를 한 줄 메시지로"""
        parts = []
        for item in error.errors():
            where = ".".join(str(x) for x in item["loc"]) or "config"
            parts.append(f"{where}: {item['msg']}")
        return "; ".join(parts)

    @classmethod
    def validate_config(cls):
        """실행 전 추가 검증"""
        if cls.RUN_CONFIG is None:
            raise ConfigurationError("설정이 초기화되지 않았습니다")
        cls._parse_workers(os.getenv("SWSYNC_WORKERS", ""))

    @classmethod
    def initialize(cls, config_path: str = None, overrides: Dict[str, Any] = None) -> RunConfig:
        """
        설정 초기화

        Args:
            config_path: 설정 파일 경로 (None이면 기본 경로)
            overrides: CLI 플래그

        Returns:
            RunConfig: 최종 설정
        """
        cls.load_config_from_json(config_path)
        run_config = cls.build_run_config(overrides)
        cls.validate_config()
        return run_config

    @staticmethod
    def _parse_workers(raw: str) -> int:
        """SWSYNC_WORKERS 값 검증 (빈 값 -> 0)"""
        raw = raw.strip()
        if not raw:
            return 0
        try:
            workers = int(raw)
        except ValueError:
            raise ConfigurationError(f"SWSYNC_WORKERS must be an integer (got {raw!r})")
        if workers < 0:
            raise ConfigurationError(f"SWSYNC_WORKERS must be >= 0 (got {workers})")
        return workers

    @classmethod
    def worker_count(cls) -> int:
        """스윕 워커 수 (SWSYNC_WORKERS, 0 또는 미지정이면 CPU 수)"""
        return cls._parse_workers(os.getenv("SWSYNC_WORKERS", "")) or (os.cpu_count() or 1)

    @classmethod
    def log(cls, message: str):
        """[Config] 태그 로그"""
        if cls.VERBOSE:
            print(f"[Config] {message}")

    @classmethod
    def print_config(cls):
        """현재 설정 출력 (디버깅용)"""
        rc = cls.RUN_CONFIG
        if rc is None:
            return
        print("\n" + "=" * 60)
        print("현재 설정")
        print("=" * 60)
        print(f"네트워크: N={rc.network.N} (Ne={rc.network.Ne}, Ni={rc.network.Ni}), k={rc.network.k}, p={rc.network.p}")
        print(f"가중치: w_e={rc.simulation.w_e}, w_i={rc.simulation.w_i}")
        print(f"시상 입력: t_e={rc.simulation.t_e}, t_i={rc.simulation.t_i} ({rc.simulation.thalamic_distribution})")
        print(f"시뮬레이션: {rc.simulation.duration}ms, delay={rc.simulation.delay_enabled}, "
              f"distance_scale={rc.simulation.distance_scale}, seed={rc.simulation.seed}")
        print(f"커널 창: {rc.analysis.window_width}ms")
        print(f"스윕: {len(rc.resolved_p_grid())}개 p, p당 {rc.sims_per_p}회, 워커 {cls.worker_count()}")
        print("=" * 60 + "\n")
