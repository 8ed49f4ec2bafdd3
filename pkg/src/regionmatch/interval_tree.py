"""Augmented AVL tree over half-open intervals with overlap queries.

Each node stores one (interval, region id) entry plus the minimum lower
bound and maximum upper bound of its subtree, which lets overlap queries
prune subtrees that cannot contain a match. Nodes are ordered by the key
(lower, upper, region id), so equal intervals from distinct regions are a
well-defined multiset.

Mutation requires exclusive access; queries are read-only and may run from
any number of threads once mutation has ceased.
"""

from __future__ import annotations

import math
from typing import Callable, Iterator

from .geometry import Interval

_AVL_HEIGHT_FACTOR = 1.4405  # height <= 1.4405 * log2(size + 2)


class _Node:
    __slots__ = ("lower", "upper", "rid", "left", "right", "height", "min_lower", "max_upper")

    def __init__(self, lower: float, upper: float, rid: int):
        self.lower = lower
        self.upper = upper
        self.rid = rid
        self.left: _Node | None = None
        self.right: _Node | None = None
        self.height = 1
        self.min_lower = lower
        self.max_upper = upper

    def key(self) -> tuple[float, float, int]:
        return (self.lower, self.upper, self.rid)


def _height(node: _Node | None) -> int:
    return node.height if node is not None else 0


def _refresh(node: _Node) -> None:
    node.height = 1 + max(_height(node.left), _height(node.right))
    node.min_lower = node.lower
    node.max_upper = node.upper
    if node.left is not None:
        node.min_lower = min(node.min_lower, node.left.min_lower)
        node.max_upper = max(node.max_upper, node.left.max_upper)
    if node.right is not None:
        node.min_lower = min(node.min_lower, node.right.min_lower)
        node.max_upper = max(node.max_upper, node.right.max_upper)


def _rotate_right(node: _Node) -> _Node:
    pivot = node.left
    assert pivot is not None
    node.left = pivot.right
    pivot.right = node
    _refresh(node)
    _refresh(pivot)
    return pivot


def _rotate_left(node: _Node) -> _Node:
    pivot = node.right
    assert pivot is not None
    node.right = pivot.left
    pivot.left = node
    _refresh(node)
    _refresh(pivot)
    return pivot


def _rebalance(node: _Node) -> _Node:
    _refresh(node)
    balance = _height(node.left) - _height(node.right)
    if balance > 1:
        assert node.left is not None
        if _height(node.left.left) < _height(node.left.right):
            node.left = _rotate_left(node.left)
        return _rotate_right(node)
    if balance < -1:
        assert node.right is not None
        if _height(node.right.right) < _height(node.right.left):
            node.right = _rotate_right(node.right)
        return _rotate_left(node)
    return node


class IntervalTree:
    """Balanced search tree of (interval, region id) entries."""

    def __init__(self) -> None:
        self._root: _Node | None = None
        self._size = 0

    # -- construction ---------------------------------------------------

    @classmethod
    def build(cls, items: list[tuple[Interval, int]]) -> "IntervalTree":
        """Create a tree holding exactly the given (interval, id) multiset.

        Bulk construction sorts once and links a perfectly balanced tree
        bottom-up, so building n entries costs O(n log n) overall.
        """
        tree = cls()
        entries = sorted(
            ((iv.lower, iv.upper, rid) for iv, rid in items),
        )
        tree._root = cls._build_range(entries, 0, len(entries))
        tree._size = len(entries)
        return tree

    @staticmethod
    def _build_range(entries: list[tuple[float, float, int]], a: int, b: int) -> _Node | None:
        if a >= b:
            return None
        mid = (a + b) // 2
        lower, upper, rid = entries[mid]
        node = _Node(lower, upper, rid)
        node.left = IntervalTree._build_range(entries, a, mid)
        node.right = IntervalTree._build_range(entries, mid + 1, b)
        _refresh(node)
        return node

    # -- mutation --------------------------------------------------------

    def insert(self, interval: Interval, region_id: int) -> None:
        """Add one entry; duplicates from distinct regions are allowed."""
        self._root = self._insert(self._root, interval.lower, interval.upper, region_id)
        self._size += 1

    def _insert(self, node: _Node | None, lower: float, upper: float, rid: int) -> _Node:
        if node is None:
            return _Node(lower, upper, rid)
        if (lower, upper, rid) < node.key():
            node.left = self._insert(node.left, lower, upper, rid)
        else:
            node.right = self._insert(node.right, lower, upper, rid)
        return _rebalance(node)

    def delete(self, interval: Interval, region_id: int) -> None:
        """Remove one entry; raises KeyError when it is not present."""
        key = (interval.lower, interval.upper, region_id)
        self._root, removed = self._delete(self._root, key)
        if not removed:
            raise KeyError(f"interval [{interval.lower}, {interval.upper}) for region {region_id} not in tree")
        self._size -= 1

    def _delete(self, node: _Node | None, key: tuple[float, float, int]) -> tuple[_Node | None, bool]:
        if node is None:
            return None, False
        if key < node.key():
            node.left, removed = self._delete(node.left, key)
        elif key > node.key():
            node.right, removed = self._delete(node.right, key)
        else:
            removed = True
            if node.left is None:
                return node.right, True
            if node.right is None:
                return node.left, True
            successor = node.right
            while successor.left is not None:
                successor = successor.left
            node.lower, node.upper, node.rid = successor.key()
            node.right, _ = self._delete(node.right, successor.key())
        return _rebalance(node), removed

    # -- queries ----------------------------------------------------------

    def query_overlaps(self, q: Interval, sink: Callable[[int], None]) -> None:
        """Invoke ``sink(region_id)`` once per stored interval overlapping q.

        Subtrees whose max upper bound lies at or below q.lower, or whose
        min lower bound lies at or above q.upper, cannot overlap a
        half-open query and are pruned without a visit.
        """
        self._query(self._root, q.lower, q.upper, sink)

    def _query(self, node: _Node | None, qlo: float, qup: float, sink: Callable[[int], None]) -> None:
        if node is None or node.max_upper <= qlo or node.min_lower >= qup:
            return
        self._query(node.left, qlo, qup, sink)
        if max(node.lower, qlo) < min(node.upper, qup):
            sink(node.rid)
        if qup > node.lower:
            self._query(node.right, qlo, qup, sink)

    def overlapping_ids(self, q: Interval) -> list[int]:
        hits: list[int] = []
        self.query_overlaps(q, hits.append)
        return hits

    # -- introspection ----------------------------------------------------

    def __len__(self) -> int:
        return self._size

    @property
    def size(self) -> int:
        return self._size

    def in_order(self) -> Iterator[tuple[Interval, int]]:
        """Entries in key order (sorted by lower bound, then upper, then id)."""

        def walk(node: _Node | None) -> Iterator[tuple[Interval, int]]:
            if node is None:
                return
            yield from walk(node.left)
            yield Interval(node.lower, node.upper), node.rid
            yield from walk(node.right)

        return walk(self._root)

    def height(self) -> int:
        return _height(self._root)

    def check_invariants(self) -> str | None:
        """Verify order, balance and augmentation bottom-up.

        Returns None when the tree is consistent, otherwise a description
        naming the offending node.
        """
        count = 0

        def verify(node: _Node | None) -> tuple[int, float, float, tuple, tuple]:
            # returns (height, min_lower, max_upper, min_key, max_key)
            nonlocal count
            if node is None:
                return 0, math.inf, -math.inf, (), ()
            count += 1
            lh, lmin, lmax, lkmin, lkmax = verify(node.left)
            rh, rmin, rmax, rkmin, rkmax = verify(node.right)
            label = f"node ({node.lower}, {node.upper}, id={node.rid})"
            if lkmax and not (lkmax < node.key()):
                raise AssertionError(f"{label}: left subtree key order violated")
            if rkmin and not (node.key() <= rkmin):
                raise AssertionError(f"{label}: right subtree key order violated")
            if abs(lh - rh) > 1:
                raise AssertionError(f"{label}: unbalanced, child heights {lh} and {rh}")
            if node.height != 1 + max(lh, rh):
                raise AssertionError(f"{label}: stale height {node.height}")
            if node.min_lower != min(node.lower, lmin, rmin):
                raise AssertionError(f"{label}: wrong min_lower {node.min_lower}")
            if node.max_upper != max(node.upper, lmax, rmax):
                raise AssertionError(f"{label}: wrong max_upper {node.max_upper}")
            kmin = lkmin if lkmin else node.key()
            kmax = rkmax if rkmax else node.key()
            return (
                node.height,
                min(node.lower, lmin, rmin),
                max(node.upper, lmax, rmax),
                kmin,
                kmax,
            )

        try:
            verify(self._root)
        except AssertionError as err:
            return str(err)
        if count != self._size:
            return f"size field says {self._size} but {count} nodes are reachable"
        if count and self.height() > _AVL_HEIGHT_FACTOR * math.log2(count + 2):
            return f"height {self.height()} exceeds AVL bound for {count} nodes"
        return None
