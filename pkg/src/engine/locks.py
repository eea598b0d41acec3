#!/usr/bin/env python

"""
Edge-lock predicates and isolation marks

A merge stage consults one lock predicate for every candidate edge; locked
edges are never merged during that stage.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Set, Tuple

Edge = Tuple[int, int]


def edge_key(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass
class IsolationMarks:
    """Isolated vertices and locked edges of a RAG"""

    vertices: Set[int] = field(default_factory=set)
    edges: Set[Edge] = field(default_factory=set)

    def is_isolated(self, v: int) -> bool:
        return v in self.vertices

    def is_edge_locked(self, u: int, v: int) -> bool:
        return edge_key(u, v) in self.edges

    def clear_vertices(self):
        self.vertices.clear()


class EdgeLock(ABC):
    """Abstract base class for all lock predicates"""

    name = "abstract"

    @abstractmethod
    def is_locked(self, marks: IsolationMarks, u: int, v: int) -> bool:
        """Whether the edge (u, v) must not be merged

        Args:
            marks: current isolation marks of the RAG
            u, v: endpoint segment ids
        """
        pass

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}()"


class NoLock(EdgeLock):
    """Every edge is mergeable"""

    name = "none"

    def is_locked(self, marks: IsolationMarks, u: int, v: int) -> bool:
        return False


class AnyIsolatedLock(EdgeLock):
    """Edges leading to an isolated segment are locked"""

    name = "any-isolated"

    def is_locked(self, marks: IsolationMarks, u: int, v: int) -> bool:
        return marks.is_isolated(u) or marks.is_isolated(v)


class BothIsolatedLock(EdgeLock):
    """Edges connecting two isolated segments are locked"""

    name = "both-isolated"

    def is_locked(self, marks: IsolationMarks, u: int, v: int) -> bool:
        return marks.is_isolated(u) and marks.is_isolated(v)


class MarkedEdgeLock(EdgeLock):
    """Edges explicitly marked as locked are locked"""

    name = "marked-edges"

    def is_locked(self, marks: IsolationMarks, u: int, v: int) -> bool:
        return marks.is_edge_locked(u, v)
