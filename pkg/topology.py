"""
topology.py - 링 격자 / Watts-Strogatz 재배선 / 그래프 지표
동역학은 방향성 가중 간선을 쓰고, C와 L은 무방향 투영에서 계산합니다.
"""
from typing import List, Optional, Set, Tuple

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from errors import ConfigurationError
from models import GraphMetrics


def ring_distance(i: int, j: int, N: int) -> int:
    """
    링 위 최단 방향 거리

    Args:
        i, j: 유닛 인덱스 (서로 달라야 함)
        N: 유닛 수

    Returns:
        int: min(|i-j|, N-|i-j|)
    """
    if i == j:
        raise ValueError(f"ring distance is undefined for i == j ({i})")
    if not (0 <= i < N and 0 <= j < N):
        raise ValueError(f"indices must lie in [0, {N}) (got {i}, {j})")
    diff = abs(i - j)
    return min(diff, N - diff)


def ring_distances(src: np.ndarray, dst: np.ndarray, N: int) -> np.ndarray:
    """ring_distance의 벡터화 버전 (검사 없음)"""
    diff = np.abs(np.asarray(src, dtype=np.int64) - np.asarray(dst, dtype=np.int64))
    return np.minimum(diff, N - diff)


class NetworkTopology:
    """링 위 N개 유닛의 방향성 가중 간선 구조"""

    def __init__(
        self,
        N: int,
        k: int,
        src: np.ndarray,
        dst: np.ndarray,
        weight: np.ndarray,
        p: float = 0.0,
        seed: Optional[int] = None,
    ):
        """
        Args:
            N: 유닛 수
            k: 격자 차수 (간선 수 = N * k)
            src, dst: 간선 출발/도착 유닛
            weight: 간선 가중치 (억제성 출발이면 음수)
            p: 생성 시 사용한 재배선 확률
            seed: 생성 시드 (직렬화 헤더용)
        """
        self.N = int(N)
        self.k = int(k)
        self.src = np.asarray(src, dtype=np.int64)
        self.dst = np.asarray(dst, dtype=np.int64)
        self.weight = np.asarray(weight, dtype=np.float64)
        self.ring_dist = ring_distances(self.src, self.dst, self.N)
        self.p = float(p)
        self.seed = seed

    @property
    def edge_count(self) -> int:
        return int(self.src.size)

    def undirected_adjacency(self) -> sparse.csr_matrix:
        """무방향 투영 인접 행렬 (어느 방향이든 간선이 있으면 1)"""
        ones = np.ones(self.edge_count, dtype=np.float64)
        A = sparse.csr_matrix((ones, (self.src, self.dst)), shape=(self.N, self.N))
        return ((A + A.T) > 0).astype(np.float64).tocsr()

    def check_invariants(self) -> List[str]:
        """불변식 위반 목록 (비어 있으면 정상)"""
        problems = []
        if self.edge_count != self.N * self.k:
            problems.append(f"edge count {self.edge_count} != N*k = {self.N * self.k}")
        if np.any(self.src == self.dst):
            problems.append("self-loop present")
        codes = self.src * self.N + self.dst
        if np.unique(codes).size != codes.size:
            problems.append("duplicate (source, destination) pair")
        if self.edge_count and (self.ring_dist.min() < 1 or self.ring_dist.max() > self.N // 2):
            problems.append("ring distance out of [1, N/2]")
        return problems

    def __repr__(self) -> str:
        return f"NetworkTopology(N={self.N}, k={self.k}, p={self.p}, edges={self.edge_count})"


def edge_weights(
    src: np.ndarray,
    rng: np.random.Generator,
    inhibitory: Optional[np.ndarray] = None,
    w_e: float = 32.0,
    w_i: float = 22.0,
) -> np.ndarray:
    """간선 가중치: 흥분성 출발 w_e*U[0,1), 억제성 출발 -w_i*U[0,1)"""
    draws = rng.random(src.size)
    if inhibitory is None:
        return w_e * draws
    return np.where(np.asarray(inhibitory, dtype=bool)[src], -w_i * draws, w_e * draws)


def make_ring_lattice(
    N: int,
    k: int,
    rng: np.random.Generator,
    inhibitory: Optional[np.ndarray] = None,
    w_e: float = 32.0,
    w_i: float = 22.0,
) -> NetworkTopology:
    """
    정규 링 격자 생성: 각 유닛이 시계/반시계 방향 k/2개 이웃으로 방향성 간선을 가짐

    Args:
        N: 유닛 수
        k: 차수 (짝수, 0 < k < N)
        rng: 가중치용 난수 생성기
        inhibitory: 억제성 여부 배열 (None이면 전부 흥분성)
        w_e, w_i: 가중치 스케일

    Returns:
        NetworkTopology: p=0 격자
    """
    if k <= 0 or k % 2 != 0:
        raise ConfigurationError(f"k must be a positive even number (got {k})")
    if k >= N:
        raise ConfigurationError(f"k must be smaller than N (got k={k}, N={N})")

    half = k // 2
    offsets = np.concatenate([np.arange(1, half + 1), -np.arange(1, half + 1)])
    src = np.repeat(np.arange(N, dtype=np.int64), k)
    dst = (src + np.tile(offsets, N)) % N
    weight = edge_weights(src, rng, inhibitory, w_e, w_i)
    return NetworkTopology(N, k, src, dst, weight, p=0.0)


def rewire(topo: NetworkTopology, p: float, rng: np.random.Generator) -> NetworkTopology:
    """
    Watts-Strogatz 재배선: 각 방향 간선을 확률 p로 새 도착지에 연결

    새 도착지는 출발지와 출발지의 기존 도착지(현재 도착지 포함)를 제외한
    모든 노드 중 균등 추출이며, 충돌 시 다시 뽑습니다.
    출발지/가중치/간선 순서는 유지됩니다.

    Args:
        topo: 입력 토폴로지 (변경되지 않음)
        p: 재배선 확률
        rng: 난수 생성기

    Returns:
        NetworkTopology: 재배선된 새 토폴로지
    """
    if not 0.0 <= p <= 1.0:
        raise ConfigurationError(f"p must lie in [0, 1] (got {p})")

    N = topo.N
    src = topo.src
    dst = topo.dst.copy()
    chosen = np.flatnonzero(rng.random(topo.edge_count) < p)

    if chosen.size:
        out_sets: List[Set[int]] = [set() for _ in range(N)]
        for s, d in zip(src.tolist(), dst.tolist()):
            out_sets[s].add(d)

        for e in chosen.tolist():
            s = int(src[e])
            taken = out_sets[s]
            # 빈 자리가 없으면 그대로 둠 (완전 그래프)
            if len(taken) >= N - 1:
                continue
            while True:
                candidate = int(rng.integers(N))
                if candidate != s and candidate not in taken:
                    break
            taken.discard(int(dst[e]))
            taken.add(candidate)
            dst[e] = candidate

    return NetworkTopology(N, topo.k, src.copy(), dst, topo.weight.copy(), p=p, seed=topo.seed)


def clustering_coefficient(topo: NetworkTopology) -> float:
    """
    평균 군집 계수 C (무방향 투영)

    이웃이 2개 미만인 노드는 0으로 기여하고 전체 노드 평균을 냅니다.
    """
    A = topo.undirected_adjacency()
    degree = np.asarray(A.sum(axis=1)).ravel()
    # 각 노드 이웃 쌍 중 연결된 쌍의 수 x 2
    linked_pairs = np.asarray((A @ A).multiply(A).sum(axis=1)).ravel()
    possible = degree * (degree - 1)
    local = np.zeros(topo.N)
    mask = degree >= 2
    local[mask] = linked_pairs[mask] / possible[mask]
    return float(local.mean())


def characteristic_path_length(topo: NetworkTopology) -> Tuple[Optional[float], bool]:
    """
    특성 경로 길이 L: 모든 순서쌍 최단 홉 수의 평균 (무방향 투영, 노드별 BFS)

    Returns:
        (L, disconnected): 비연결이면 (None, True)
    """
    A = topo.undirected_adjacency()
    dist = csgraph.shortest_path(A, method="D", directed=False, unweighted=True)
    if np.isinf(dist).any():
        return None, True
    N = topo.N
    return float(dist.sum() / (N * (N - 1))), False


def mean_wiring_length(topo: NetworkTopology) -> float:
    """간선의 평균 링 거리 (배선 비용)"""
    return float(topo.ring_dist.mean()) if topo.edge_count else 0.0


def reciprocity(topo: NetworkTopology) -> float:
    """역방향 간선도 존재하는 방향 간선의 비율"""
    if not topo.edge_count:
        return 0.0
    forward = topo.src * topo.N + topo.dst
    backward = topo.dst * topo.N + topo.src
    return float(np.isin(backward, forward).mean())


def compute_metrics(topo: NetworkTopology) -> GraphMetrics:
    """C, L 및 부가 지표 계산"""
    L, disconnected = characteristic_path_length(topo)
    return GraphMetrics(
        C=clustering_coefficient(topo),
        L=L,
        disconnected=disconnected,
        wiring_length=mean_wiring_length(topo),
        reciprocity=reciprocity(topo),
    )
