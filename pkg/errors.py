"""
errors.py - 예외 정의
CLI 종료 코드와 1:1로 대응하는 예외 계층입니다.
"""


class SimulationError(Exception):
    """모든 도메인 예외의 기반 클래스"""

    exit_code = 1


class ConfigurationError(SimulationError, ValueError):
    """잘못된 파라미터 조합 (Ne + Ni != N, 홀수 k 등)"""

    exit_code = 1


class NetworkFormatError(SimulationError, ValueError):
    """네트워크/래스터 파일 파싱 오류"""

    exit_code = 2

    def __init__(self, message: str, line_number: int = None, path: str = None):
        """
        Args:
            message: 오류 내용
            line_number: 문제가 된 줄 번호 (1부터 시작)
            path: 파일 경로
        """
        self.line_number = line_number
        self.path = path

        location = ""
        if path:
            location += f"{path}"
        if line_number is not None:
            location += f":{line_number}"
        super().__init__(f"{location}: {message}" if location else message)


class IntegratorDivergenceError(SimulationError, ArithmeticError):
    """막전위가 발산한 경우 (가중치/파라미터 설정 오류의 신호)"""

    exit_code = 3

    def __init__(self, tick: int, unit: int, value: float, ceiling: float):
        self.tick = tick
        self.unit = unit
        self.value = value
        self.ceiling = ceiling
        where = f"tick {tick}: " if tick is not None else ""
        super().__init__(
            f"{where}unit {unit} v={value!r} exceeds ceiling {ceiling:g} "
            "(check weight and thalamic scaling)"
        )
