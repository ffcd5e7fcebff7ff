"""
main.py - 명령행 진입점
generate / metrics / simulate / analyze / sweep 하위 명령만 정의합니다.
비즈니스 로직은 services.py에 구현되어 있습니다.

종료 코드: 0 성공, 1 설정/검증 오류, 2 입출력/파일 형식 오류, 3 수치 발산
"""
import argparse
import sys
from typing import Any, Dict, List, Optional

from app_initializer import AppInitializer
from artifact_manager import format_number
from errors import ConfigurationError, SimulationError
from models import AnalysisConfig, NetworkConfig, RunConfig, SimConfig

# 흥분성 : 억제성 = 4 : 1 (기본 800 : 200)
INHIBITORY_FRACTION = 0.2


def _default(model, field: str):
    return model.model_fields[field].default


def _p_grid(values: List[str]) -> List[float]:
    """`--p-grid 0 0.01 1` 또는 `--p-grid 0,0.01,1`"""
    grid = []
    for value in values:
        for token in value.split(","):
            if not token.strip():
                continue
            try:
                grid.append(float(token))
            except ValueError:
                raise ConfigurationError(f"--p-grid values must be numbers (got {token.strip()!r})")
    return grid


def _show(value) -> str:
    return "none" if value is None else format_number(value)


# ============================================
# [인자 파서]
# ============================================

def build_parser() -> argparse.ArgumentParser:
    """하위 명령별 argparse 파서 생성 (도움말에 기본 파라미터 표시)"""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None, help="설정 파일 경로 (기본값: $SWSYNC_CONFIG 또는 config.json)")
    common.add_argument("--quiet", action="store_true", help="[Tag] 로그와 진행 표시 끄기")
    common.add_argument("--format", choices=["csv", "json"], default=None, help="결과 형식 (기본값: csv)")

    network = argparse.ArgumentParser(add_help=False)
    network.add_argument("--n", type=int, default=None,
                         help=f"유닛 수, 억제성 20%% (기본값: {_default(NetworkConfig, 'N')})")
    network.add_argument("--k", type=int, default=None, help=f"격자 차수 (기본값: {_default(NetworkConfig, 'k')})")
    network.add_argument("--seed", type=int, default=None, help=f"RNG 시드 (기본값: {_default(SimConfig, 'seed')})")

    dynamics = argparse.ArgumentParser(add_help=False)
    dynamics.add_argument("--duration", type=int, default=None,
                          help=f"시뮬레이션 길이 ms (기본값: {_default(SimConfig, 'duration')})")
    dynamics.add_argument("--delay", action="store_true", default=None, help="거리 비례 전달 지연 사용")
    dynamics.add_argument("--distance-scale", type=int, default=None,
                          help=f"지연 1ms당 링 거리 (기본값: {_default(SimConfig, 'distance_scale')})")

    window = argparse.ArgumentParser(add_help=False)
    window.add_argument("--window", type=int, default=None,
                        help=f"커널 창 폭 ms (기본값: {_default(AnalysisConfig, 'window_width')})")

    parser = argparse.ArgumentParser(
        prog="swsync",
        description="Watts-Strogatz 링 격자 위 Izhikevich 네트워크의 동기화 시뮬레이터",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_generate = sub.add_parser("generate", parents=[common, network], help="격자 생성 + 재배선, 간선 목록 저장")
    p_generate.add_argument("--p", type=float, default=None, help="재배선 확률 (기본값: 0)")
    p_generate.add_argument("--out", default=None, help="간선 목록 파일 (기본값: <output_dir>/network.txt)")

    p_metrics = sub.add_parser("metrics", parents=[common], help="간선 목록의 C, L 출력")
    p_metrics.add_argument("network_file", help="generate가 만든 간선 목록")

    p_simulate = sub.add_parser("simulate", parents=[common, network, dynamics, window], help="시뮬레이션 실행")
    p_simulate.add_argument("--p", type=float, default=None, help="재배선 확률 (기본값: 0)")
    p_simulate.add_argument("--out", default=None, help="출력 디렉토리 (기본값: <output_dir>)")

    p_analyze = sub.add_parser("analyze", parents=[common, window], help="래스터에서 S와 지배 주파수 계산")
    p_analyze.add_argument("raster_file", help="simulate가 만든 래스터")
    p_analyze.add_argument("--out", default=None, help="결과 레코드 파일 (기본값: 래스터 옆 sync.txt)")

    p_sweep = sub.add_parser("sweep", parents=[common, network, dynamics, window], help="p 스윕 실행")
    p_sweep.add_argument("--sims", type=int, default=None,
                         help=f"p당 시뮬레이션 수 (기본값: {_default(RunConfig, 'sims_per_p')}, 전체 규모 100)")
    p_sweep.add_argument("--p-grid", nargs="+", default=None,
                         help="p 목록, 공백 또는 쉼표 구분 (기본값: p=0 + 1e-4..1 로그 17점)")
    p_sweep.add_argument("--out", default=None, help="결과 파일 (기본값: <output_dir>/sweep.csv)")

    return parser


def build_overrides(args: argparse.Namespace) -> Dict[str, Any]:
    """argparse 결과 -> RunConfig 구조의 덮어쓰기 딕셔너리 (None = 미지정)"""
    n = getattr(args, "n", None)
    network = {"k": getattr(args, "k", None), "p": getattr(args, "p", None)}
    if n is not None:
        Ni = int(round(n * INHIBITORY_FRACTION))
        network.update(N=n, Ne=n - Ni, Ni=Ni)

    p_grid = getattr(args, "p_grid", None)
    return {
        "network": network,
        "simulation": {
            "seed": getattr(args, "seed", None),
            "duration": getattr(args, "duration", None),
            "delay_enabled": getattr(args, "delay", None),
            "distance_scale": getattr(args, "distance_scale", None),
        },
        "analysis": {"window_width": getattr(args, "window", None)},
        "sims_per_p": getattr(args, "sims", None),
        "p_grid": _p_grid(p_grid) if p_grid else None,
        "output_format": args.format,
    }


# ============================================
# [하위 명령]
# ============================================

def cmd_generate(initializer: AppInitializer, args: argparse.Namespace):
    topo, path = initializer.network_service.generate(initializer.run_config, args.out)
    print(f"N={topo.N} k={topo.k} p={format_number(topo.p)} edges={topo.edge_count} -> {path}")


def cmd_metrics(initializer: AppInitializer, args: argparse.Namespace):
    result = initializer.network_service.metrics(args.network_file)
    print(f"C={_show(result.C)} L={_show(result.L)}")
    print(f"wiring_length={_show(result.wiring_length)} reciprocity={_show(result.reciprocity)}")


def cmd_simulate(initializer: AppInitializer, args: argparse.Namespace):
    paths = initializer.simulation_service.simulate(initializer.run_config, args.out)
    for name, path in paths.items():
        print(f"{name}: {path}")


def cmd_analyze(initializer: AppInitializer, args: argparse.Namespace):
    measure, _ = initializer.analysis_service.analyze(args.raster_file, initializer.run_config, args.out)
    print(f"S={_show(measure.S)} freq={_show(measure.dominant_freq)}Hz")


def cmd_sweep(initializer: AppInitializer, args: argparse.Namespace):
    result, path, meta_path = initializer.sweep_service.sweep(initializer.run_config, args.out)
    print(f"{len(result.records)} rows -> {path} (meta: {meta_path})")


COMMANDS = {
    "generate": cmd_generate,
    "metrics": cmd_metrics,
    "simulate": cmd_simulate,
    "analyze": cmd_analyze,
    "sweep": cmd_sweep,
}


def main(argv: Optional[List[str]] = None) -> int:
    """
    CLI 실행

    Args:
        argv: 인자 목록 (None이면 sys.argv)

    Returns:
        int: 종료 코드
    """
    args = build_parser().parse_args(argv)
    try:
        initializer = AppInitializer(args.config, build_overrides(args), quiet=args.quiet)
        initializer.print_startup_info(args.command)
        COMMANDS[args.command](initializer, args)
    except SimulationError as e:
        print(f"[Error] {e}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        print(f"[Error] {e}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
