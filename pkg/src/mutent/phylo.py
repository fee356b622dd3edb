"""Distance-matrix tree construction: average-linkage and neighbor joining.

Both builders consume a symmetric distance matrix and emit a rooted (UPGMA)
or unrooted-style rooted-at-last-join (NJ) tree with branch lengths, plus a
Newick serialization.  Ties are broken by the lexicographically smallest
label pair so runs are reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, MissingDistance


@dataclass
class TreeNode:
    """A tree vertex; leaves carry labels, internal nodes carry children."""

    label: str | None = None
    children: list[tuple["TreeNode", float]] = field(default_factory=list)
    height: float = 0.0

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def leaf_labels(self) -> list[str]:
        if self.is_leaf:
            return [self.label or ""]
        out: list[str] = []
        for child, _ in self.children:
            out.extend(child.leaf_labels())
        return out

    def newick(self, precision: int = 6) -> str:
        return self._newick(precision) + ";"

    def _newick(self, precision: int) -> str:
        if self.is_leaf:
            return self.label or ""
        parts = [
            f"{child._newick(precision)}:{length:.{precision}f}"
            for child, length in self.children
        ]
        return "(" + ",".join(parts) + ")"


@dataclass(frozen=True)
class PhyloTree:
    root: TreeNode
    method: str

    def newick(self, precision: int = 6) -> str:
        return self.root.newick(precision)

    def leaf_labels(self) -> list[str]:
        return self.root.leaf_labels()


def _check_matrix(labels: tuple[str, ...] | list[str], dist: np.ndarray) -> np.ndarray:
    dist = np.asarray(dist, dtype=float)
    n = len(labels)
    if dist.shape != (n, n):
        raise DimensionMismatch(
            f"distance matrix shape {dist.shape} does not match {n} labels"
        )
    if np.isnan(dist).any():
        i, j = map(int, np.argwhere(np.isnan(dist))[0])
        raise MissingDistance(
            f"distance between {labels[i]!r} and {labels[j]!r} is missing"
        )
    if np.max(np.abs(dist - dist.T)) > 1e-9:
        raise DimensionMismatch("distance matrix is not symmetric")
    return dist


def _tie_key(nodes: list[TreeNode], i: int, j: int) -> tuple[str, str]:
    a = min(nodes[i].leaf_labels())
    b = min(nodes[j].leaf_labels())
    return (a, b) if a <= b else (b, a)


def upgma(labels: list[str], distances: np.ndarray) -> PhyloTree:
    """Average-linkage agglomeration producing an ultrametric rooted tree."""
    dist = _check_matrix(labels, distances).copy()
    nodes = [TreeNode(label=lab) for lab in labels]
    sizes = [1] * len(nodes)
    if len(nodes) == 1:
        return PhyloTree(nodes[0], "upgma")
    active = list(range(len(nodes)))
    while len(active) > 1:
        best = None
        for ai in range(len(active)):
            for bi in range(ai + 1, len(active)):
                i, j = active[ai], active[bi]
                d = dist[i, j]
                key = (d, _tie_key(nodes, i, j))
                if best is None or key < best[0]:
                    best = (key, i, j)
        _, i, j = best
        d = dist[i, j]
        height = d / 2.0
        parent = TreeNode(height=height)
        parent.children = [
            (nodes[i], height - nodes[i].height),
            (nodes[j], height - nodes[j].height),
        ]
        # Average linkage: weight each cluster by its leaf count.
        merged_size = sizes[i] + sizes[j]
        for k in active:
            if k in (i, j):
                continue
            dist[i, k] = (sizes[i] * dist[i, k] + sizes[j] * dist[j, k]) / merged_size
            dist[k, i] = dist[i, k]
        nodes[i] = parent
        sizes[i] = merged_size
        active.remove(j)
    return PhyloTree(nodes[active[0]], "upgma")


def neighbor_joining(labels: list[str], distances: np.ndarray) -> PhyloTree:
    """Saitou-Nei agglomeration; recovers additive trees exactly."""
    dist = _check_matrix(labels, distances).copy()
    nodes = [TreeNode(label=lab) for lab in labels]
    if len(nodes) == 1:
        return PhyloTree(nodes[0], "nj")
    if len(nodes) == 2:
        root = TreeNode()
        root.children = [(nodes[0], dist[0, 1] / 2.0), (nodes[1], dist[0, 1] / 2.0)]
        return PhyloTree(root, "nj")
    active = list(range(len(nodes)))
    while len(active) > 2:
        m = len(active)
        totals = {i: sum(dist[i, k] for k in active if k != i) for i in active}
        best = None
        for ai in range(m):
            for bi in range(ai + 1, m):
                i, j = active[ai], active[bi]
                q = (m - 2) * dist[i, j] - totals[i] - totals[j]
                key = (q, _tie_key(nodes, i, j))
                if best is None or key < best[0]:
                    best = (key, i, j)
        _, i, j = best
        d_ij = dist[i, j]
        delta = (totals[i] - totals[j]) / (m - 2)
        li = 0.5 * (d_ij + delta)
        lj = d_ij - li
        # Negative branch lengths can appear on non-additive input; clamp
        # and push the slack onto the sibling so the pair distance is kept.
        if li < 0.0:
            lj -= li
            li = 0.0
        if lj < 0.0:
            li -= lj
            lj = 0.0
        parent = TreeNode()
        parent.children = [(nodes[i], li), (nodes[j], lj)]
        for k in active:
            if k in (i, j):
                continue
            dist[i, k] = 0.5 * (dist[i, k] + dist[j, k] - d_ij)
            dist[k, i] = dist[i, k]
        nodes[i] = parent
        active.remove(j)
    i, j = active
    root = TreeNode()
    half = dist[i, j] / 2.0
    root.children = [(nodes[i], half), (nodes[j], half)]
    return PhyloTree(root, "nj")


def tree_distance(tree: PhyloTree, a: str, b: str) -> float:
    """Path length between two leaves, summing branch lengths."""

    def path_to(node: TreeNode, target: str) -> list[float] | None:
        if node.is_leaf:
            return [] if node.label == target else None
        for child, length in node.children:
            sub = path_to(child, target)
            if sub is not None:
                return [length] + sub
        return None

    def lca_dist(node: TreeNode) -> float | None:
        pa = path_to(node, a)
        pb = path_to(node, b)
        if pa is None or pb is None:
            return None
        for child, _ in node.children:
            sub = lca_dist(child)
            if sub is not None:
                return sub
        return sum(pa) + sum(pb)

    d = lca_dist(tree.root)
    if d is None:
        raise MissingDistance(f"leaves {a!r} and {b!r} not both present")
    return d


def ultrametric_heights(tree: PhyloTree) -> dict[str, float]:
    """Leaf depths from the root; equal for ultrametric trees."""
    out: dict[str, float] = {}

    def walk(node: TreeNode, depth: float) -> None:
        if node.is_leaf:
            out[node.label or ""] = depth
            return
        for child, length in node.children:
            walk(child, depth + length)

    walk(tree.root, 0.0)
    return out


def is_ultrametric(tree: PhyloTree, tol: float = 1e-9) -> bool:
    heights = list(ultrametric_heights(tree).values())
    return max(heights) - min(heights) <= tol if heights else True


def _strip_nan(labels, matrix):
    keep = [
        i
        for i in range(len(labels))
        if not any(math.isnan(matrix[i, j]) for j in range(len(labels)) if j != i)
    ]
    sub = matrix[np.ix_(keep, keep)]
    return [labels[i] for i in keep], sub, keep


def build_tree(
    matrix,
    method: str = "upgma",
    drop_missing: bool = False,
) -> PhyloTree:
    """Dispatch on method name; optionally drop rows with missing entries.

    Accepts anything with ``labels`` and ``distances`` attributes (such as
    a genetic matrix) or a ``(labels, distances)`` pair.
    """
    if hasattr(matrix, "labels") and hasattr(matrix, "distances"):
        labels, dist = list(matrix.labels), np.asarray(matrix.distances, dtype=float)
    else:
        raw_labels, raw_dist = matrix
        labels, dist = list(raw_labels), np.asarray(raw_dist, dtype=float)
    if drop_missing and np.isnan(dist).any():
        labels, dist, _ = _strip_nan(labels, dist)
    if method == "upgma":
        return upgma(labels, dist)
    if method == "nj":
        return neighbor_joining(labels, dist)
    raise ValueError(f"unknown tree method {method!r}")
