"""Region adjacency graph and greedy merge stages."""

from src.engine.locks import (
    AnyIsolatedLock,
    BothIsolatedLock,
    EdgeLock,
    IsolationMarks,
    MarkedEdgeLock,
    NoLock,
    edge_key,
)
from src.engine.merging import StageReport, force_merge, merge_cost, reinitialise_ssd, run_stage
from src.engine.rag import Rag, UnionFind, build_rag

__all__ = [
    "AnyIsolatedLock",
    "BothIsolatedLock",
    "EdgeLock",
    "IsolationMarks",
    "MarkedEdgeLock",
    "NoLock",
    "edge_key",
    "StageReport",
    "force_merge",
    "merge_cost",
    "reinitialise_ssd",
    "run_stage",
    "Rag",
    "UnionFind",
    "build_rag",
]
