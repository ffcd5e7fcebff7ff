"""
artifact_manager.py - 산출물 파일 관리
네트워크 간선 목록, 래스터, 시계열, 결과 레코드, 스윕 CSV/JSON의
쓰기와 읽기를 담당합니다. 모든 실수는 repr()로 기록해 손실 없이 왕복됩니다.
"""
import csv
import json
import os
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from errors import NetworkFormatError
from models import SweepResult, SyncMeasure
from simulator import SpikeRaster
from topology import NetworkTopology, ring_distances

SWEEP_COLUMNS = ["p", "C", "L", "S", "C_norm", "L_norm", "S_norm", "freq_hz", "n_sims", "seed",
                 "C_std", "L_std", "S_std"]


def format_number(value) -> str:
    """로케일과 무관한 숫자 표기 (None -> 빈 문자열)"""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def _parse_bool(token: str, line_number: int, path: str) -> bool:
    lowered = token.lower()
    if lowered in ("true", "1"):
        return True
    if lowered in ("false", "0"):
        return False
    raise NetworkFormatError(f"expected boolean, got {token!r}", line_number, path)


def _parse_optional_int(token: str, line_number: int, path: str) -> Optional[int]:
    if token.lower() == "none":
        return None
    return _parse_int(token, line_number, path)


def _parse_int(token: str, line_number: int, path: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise NetworkFormatError(f"expected integer, got {token!r}", line_number, path)


def _parse_float(token: str, line_number: int, path: str) -> float:
    try:
        return float(token)
    except ValueError:
        raise NetworkFormatError(f"expected number, got {token!r}", line_number, path)


def _read_lines(path: str) -> List[Tuple[int, List[str]]]:
    """(줄 번호, 토큰) 목록 - 빈 줄 제외"""
    rows = []
    with open(path, "r", encoding="utf-8") as f:
        for number, line in enumerate(f, start=1):
            tokens = line.split()
            if tokens:
                rows.append((number, tokens))
    if not rows:
        raise NetworkFormatError("file is empty", 1, path)
    return rows


class ArtifactManager:
    """산출물 파일 관리 클래스"""

    def __init__(self, output_dir: str = "./output", verbose: bool = True):
        """
        Args:
            output_dir: 기본 출력 디렉토리
            verbose: [Artifact] 로그 출력 여부
        """
        self.output_dir = output_dir
        self.verbose = verbose

    def log(self, message: str):
        if self.verbose:
            print(f"[Artifact] {message}")

    def resolve(self, path: Optional[str], default_name: str) -> str:
        """경로가 없으면 출력 디렉토리 아래 기본 이름 사용, 상위 디렉토리 생성"""
        resolved = path or os.path.join(self.output_dir, default_name)
        parent = Path(resolved).parent
        parent.mkdir(parents=True, exist_ok=True)
        return resolved

    @staticmethod
    def _write_text(path: str, lines: List[str]):
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            for line in lines:
                f.write(line)
                f.write("\n")

    # ============================================
    # [네트워크 간선 목록]
    # ============================================

    def write_network(self, topo: NetworkTopology, path: str = None) -> str:
        """
        간선 목록 저장: 헤더 `N k p seed`, 이후 `source destination weight ring_distance`

        Returns:
            str: 저장 경로
        """
        path = self.resolve(path, "network.txt")
        seed = "none" if topo.seed is None else str(int(topo.seed))
        lines = [f"{topo.N} {topo.k} {format_number(topo.p)} {seed}"]
        lines.extend(
            f"{s} {d} {format_number(w)} {r}"
            for s, d, w, r in zip(topo.src.tolist(), topo.dst.tolist(), topo.weight.tolist(),
                                  topo.ring_dist.tolist())
        )
        self._write_text(path, lines)
        self.log(f"네트워크 저장: {path} ({topo.edge_count}개 간선)")
        return path

    def read_network(self, path: str) -> NetworkTopology:
        """
        간선 목록 로드 (형식 오류는 줄 번호와 함께 NetworkFormatError)
        """
        rows = _read_lines(path)
        number, header = rows[0]
        if len(header) != 4:
            raise NetworkFormatError("header must be `N k p seed`", number, path)
        N = _parse_int(header[0], number, path)
        k = _parse_int(header[1], number, path)
        p = _parse_float(header[2], number, path)
        seed = _parse_optional_int(header[3], number, path)
        if N < 2 or k < 1:
            raise NetworkFormatError(f"invalid header values N={N}, k={k}", number, path)

        body = rows[1:]
        expected = N * k
        if len(body) != expected:
            last = body[-1][0] if body else number
            raise NetworkFormatError(f"expected {expected} edges, found {len(body)} (truncated file?)",
                                     last, path)

        src = np.empty(expected, dtype=np.int64)
        dst = np.empty(expected, dtype=np.int64)
        weight = np.empty(expected)
        for e, (number, tokens) in enumerate(body):
            if len(tokens) != 4:
                raise NetworkFormatError("edge line must be `source destination weight ring_distance`",
                                         number, path)
            s = _parse_int(tokens[0], number, path)
            d = _parse_int(tokens[1], number, path)
            w = _parse_float(tokens[2], number, path)
            r = _parse_int(tokens[3], number, path)
            if not (0 <= s < N and 0 <= d < N) or s == d:
                raise NetworkFormatError(f"invalid edge {s} -> {d}", number, path)
            if r != int(ring_distances(s, d, N)):
                raise NetworkFormatError(f"ring distance {r} does not match {s} -> {d}", number, path)
            src[e], dst[e], weight[e] = s, d, w

        topo = NetworkTopology(N, k, src, dst, weight, p=p, seed=seed)
        problems = topo.check_invariants()
        if problems:
            raise NetworkFormatError("; ".join(problems), None, path)
        self.log(f"네트워크 로드: {path} ({topo.edge_count}개 간선)")
        return topo

    # ============================================
    # [래스터 / 시계열]
    # ============================================

    @staticmethod
    def _run_header(N: int, duration: int, seed: int, p: float, delay_enabled: bool) -> str:
        return f"{N} {duration} {seed} {format_number(p)} {format_number(bool(delay_enabled))}"

    def _parse_run_header(self, rows, path) -> Dict[str, Any]:
        number, header = rows[0]
        if len(header) != 5:
            raise NetworkFormatError("header must be `N duration seed p delay_enabled`", number, path)
        return {
            "N": _parse_int(header[0], number, path),
            "duration": _parse_int(header[1], number, path),
            "seed": _parse_int(header[2], number, path),
            "p": _parse_float(header[3], number, path),
            "delay_enabled": _parse_bool(header[4], number, path),
        }

    def write_raster(self, raster: SpikeRaster, seed: int, p: float, delay_enabled: bool, path: str = None) -> str:
        """래스터 저장: 헤더 `N duration seed p delay_enabled`, 이후 `tick unit`"""
        path = self.resolve(path, "raster.txt")
        lines = [self._run_header(raster.N, raster.duration, seed, p, delay_enabled)]
        lines.extend(f"{t} {u}" for t, u in zip(raster.ticks.tolist(), raster.units.tolist()))
        self._write_text(path, lines)
        self.log(f"래스터 저장: {path} ({len(raster)}개 스파이크)")
        return path

    def read_raster(self, path: str) -> Tuple[SpikeRaster, Dict[str, Any]]:
        """래스터 로드 -> (래스터, 헤더 정보)"""
        rows = _read_lines(path)
        meta = self._parse_run_header(rows, path)
        ticks = []
        units = []
        for number, tokens in rows[1:]:
            if len(tokens) != 2:
                raise NetworkFormatError("raster line must be `tick unit`", number, path)
            t = _parse_int(tokens[0], number, path)
            u = _parse_int(tokens[1], number, path)
            if not 0 <= t < meta["duration"] or not 0 <= u < meta["N"]:
                raise NetworkFormatError(f"event ({t}, {u}) out of range", number, path)
            if ticks and t < ticks[-1]:
                raise NetworkFormatError("ticks must be non-decreasing", number, path)
            ticks.append(t)
            units.append(u)
        return SpikeRaster(ticks, units, meta["N"], meta["duration"]), meta

    def write_series(self, values: np.ndarray, N: int, seed: int, p: float, delay_enabled: bool,
                     path: str = None, default_name: str = "series.txt") -> str:
        """시계열 저장 (한 줄에 값 하나, 래스터와 같은 헤더)"""
        path = self.resolve(path, default_name)
        lines = [self._run_header(N, len(values), seed, p, delay_enabled)]
        lines.extend(format_number(v) for v in np.asarray(values).tolist())
        self._write_text(path, lines)
        self.log(f"시계열 저장: {path}")
        return path

    # ============================================
    # [결과 레코드 / 요약]
    # ============================================

    def write_sync_record(self, measure: SyncMeasure, path: str = None, output_format: str = "csv") -> str:
        """동기화 결과 저장: 텍스트 `S dominant_freq_hz` 또는 JSON"""
        if output_format == "json":
            path = self.resolve(path, "sync.json")
            self.write_json(measure.model_dump(mode="json"), path)
        else:
            path = self.resolve(path, "sync.txt")
            freq = "none" if measure.dominant_freq is None else format_number(measure.dominant_freq)
            self._write_text(path, [f"{format_number(measure.S)} {freq}"])
        self.log(f"동기화 결과 저장: {path}")
        return path

    def write_json(self, payload: Dict[str, Any], path: str) -> str:
        """키 정렬 JSON 저장 (타임스탬프 없음 -> 재실행 시 바이트 동일)"""
        path = self.resolve(path, "data.json")
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            json.dump(payload, f, ensure_ascii=False, indent=2, sort_keys=True)
            f.write("\n")
        return path

    # ============================================
    # [스윕 결과]
    # ============================================

    def write_sweep(self, result: SweepResult, config_dict: Dict[str, Any], path: str = None,
                    output_format: str = "csv") -> Tuple[str, str]:
        """
        스윕 결과 저장 (CSV 또는 JSON) + 설정 전체를 담은 메타데이터 JSON

        Returns:
            (결과 경로, 메타데이터 경로)
        """
        if output_format == "json":
            path = self.resolve(path, "sweep.json")
            self.write_json({"records": [r.model_dump(mode="json") for r in result.records]}, path)
        else:
            path = self.resolve(path, "sweep.csv")
            with open(path, "w", encoding="utf-8", newline="") as f:
                writer = csv.writer(f, lineterminator="\n")
                writer.writerow(SWEEP_COLUMNS)
                for record in result.records:
                    data = record.model_dump()
                    writer.writerow([format_number(data[column]) for column in SWEEP_COLUMNS])

        meta_path = str(Path(path).with_suffix("")) + ".meta.json"
        meta = result.model_dump(mode="json", exclude={"records"})
        meta["config"] = config_dict
        self.write_json(meta, meta_path)
        self.log(f"스윕 결과 저장: {path} (메타데이터: {meta_path})")
        return path, meta_path
