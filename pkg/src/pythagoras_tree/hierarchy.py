"""Rooted, weighted trees and the readers that build them.

Node ids are integers assigned in breadth-first order from the root, with
children kept in input order. That makes every level, and every sibling
group, a contiguous id range, which the layout code relies on.
"""
from __future__ import annotations

import csv
import io
import json
import os
import stat
import warnings
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import IO, Sequence

import numpy as np


class HierarchyError(ValueError):
    pass


class MalformedInput(HierarchyError):
    pass


class MultipleRoots(HierarchyError):
    pass


class CycleDetected(HierarchyError):
    pass


class DuplicateNodeId(HierarchyError):
    pass


class NonPositiveWeight(HierarchyError):
    pass


class PathNotFound(HierarchyError, FileNotFoundError):
    pass


class PermissionDenied(HierarchyError, PermissionError):
    pass


class ScanWarning(UserWarning):
    pass


@dataclass(frozen=True)
class NodeRecord:
    id: int
    label: str
    parent: int | None
    children: tuple[int, ...]
    weight: float
    depth: int


@dataclass(frozen=True)
class Hierarchy:
    """An immutable rooted tree.

    ``nodes[i].id == i`` and ids are breadth-first, so the root is always 0.
    A weight of 0 is the "not given" sentinel left by the readers; call
    :func:`assign_subtree_weights` before laying the tree out.
    """

    nodes: tuple[NodeRecord, ...]
    root: int = 0

    def __len__(self) -> int:
        return len(self.nodes)

    @property
    def n(self) -> int:
        return len(self.nodes)

    def __getitem__(self, i: int) -> NodeRecord:
        return self.nodes[i]

    @cached_property
    def parent(self) -> np.ndarray:
        """Parent id per node, -1 for the root."""
        return np.array([-1 if r.parent is None else r.parent for r in self.nodes], dtype=np.int64)

    @cached_property
    def depth(self) -> np.ndarray:
        return np.array([r.depth for r in self.nodes], dtype=np.int64)

    @cached_property
    def weights(self) -> np.ndarray:
        return np.array([r.weight for r in self.nodes], dtype=float)

    @cached_property
    def child_count(self) -> np.ndarray:
        return np.array([len(r.children) for r in self.nodes], dtype=np.int64)

    @property
    def max_depth(self) -> int:
        return int(self.nodes[-1].depth)

    @cached_property
    def level_bounds(self) -> np.ndarray:
        """``level_bounds[d]:level_bounds[d+1]`` is the id range at depth d."""
        return np.searchsorted(self.depth, np.arange(self.max_depth + 2))

    @cached_property
    def sibling_groups(self) -> tuple[np.ndarray, np.ndarray]:
        """Internal node ids and the id where each one's children start.

        Children of ``internal[g]`` are ``starts[g]:starts[g+1]``; ``starts``
        carries a trailing ``n``.
        """
        internal = np.flatnonzero(self.child_count > 0)
        first = [self.nodes[p].children[0] for p in internal]
        return internal, np.array(first + [self.n], dtype=np.int64)

    def to_json(self) -> str:
        """Serialize as the nested JSON input format.

        Assigned weights are included; unassigned ones (0) are omitted.
        """
        # iterative to stay clear of the recursion limit on deep chains
        out: dict = {}
        stack = [(self.root, out)]
        while stack:
            i, slot = stack.pop()
            r = self.nodes[i]
            slot.update(label=r.label, children=[{} for _ in r.children])
            if r.weight > 0:
                slot["weight"] = r.weight
            stack.extend(zip(r.children, slot["children"]))
        return json.dumps(out, sort_keys=True, separators=(",", ":"))


def build_hierarchy(
    labels: Sequence[str],
    parents: Sequence[int | None],
    weights: Sequence[float] | None = None,
) -> Hierarchy:
    """Build a validated Hierarchy from parallel arrays.

    ``parents[i]`` indexes into the same arrays (``None`` marks the root).
    Children keep the order in which they appear. The result is renumbered
    breadth-first.
    """
    n = len(labels)
    if n == 0:
        raise MalformedInput("empty hierarchy")
    if weights is None:
        weights = [0.0] * n
    roots = [i for i, p in enumerate(parents) if p is None]
    if len(roots) > 1:
        raise MultipleRoots(f"{len(roots)} roots: {[labels[i] for i in roots[:5]]}")
    if not roots:
        raise CycleDetected("every node has a parent")
    for i, w in enumerate(weights):
        if w is None:
            continue
        if not np.isfinite(w) or (w <= 0 and w != 0):
            raise NonPositiveWeight(f"node {labels[i]!r} has weight {w}")

    kids: list[list[int]] = [[] for _ in range(n)]
    for i, p in enumerate(parents):
        if p is not None:
            kids[p].append(i)

    order = []
    new_id = [-1] * n
    queue = deque([roots[0]])
    new_id[roots[0]] = 0
    while queue:
        i = queue.popleft()
        order.append(i)
        for c in kids[i]:
            new_id[c] = len(order) + len(queue)
            queue.append(c)
    if len(order) != n:
        missing = [labels[i] for i in range(n) if new_id[i] < 0]
        raise CycleDetected(f"nodes unreachable from the root: {missing[:5]}")

    records = []
    depth = [0] * n
    for i in order:
        nid = new_id[i]
        p = parents[i]
        if p is not None:
            depth[nid] = depth[new_id[p]] + 1
        records.append(
            NodeRecord(
                id=nid,
                label=str(labels[i]),
                parent=None if p is None else new_id[p],
                children=tuple(new_id[c] for c in kids[i]),
                weight=float(weights[i] or 0.0),
                depth=depth[nid],
            )
        )
    return Hierarchy(tuple(records))


def _load_csv(text: str) -> Hierarchy:
    index: dict[str, int] = {}
    labels: list[str] = []
    parents: list[int | None] = []
    weights: list[float] = []

    def node(name):
        if name not in index:
            index[name] = len(labels)
            labels.append(name)
            parents.append(None)
            weights.append(0.0)
        return index[name]

    for lineno, row in enumerate(csv.reader(io.StringIO(text)), 1):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) not in (2, 3):
            raise MalformedInput(f"line {lineno}: expected parent,child[,weight], got {row!r}")
        pname, cname = row[0].strip(), row[1].strip()
        if not pname or not cname:
            raise MalformedInput(f"line {lineno}: empty node name")
        if pname == cname:
            raise CycleDetected(f"line {lineno}: {pname!r} is its own parent")
        p, c = node(pname), node(cname)
        if parents[c] is not None:
            raise DuplicateNodeId(f"line {lineno}: {cname!r} already has parent {labels[parents[c]]!r}")
        parents[c] = p
        if len(row) == 3 and row[2].strip():
            try:
                w = float(row[2])
            except ValueError:
                raise MalformedInput(f"line {lineno}: bad weight {row[2]!r}") from None
            if not w > 0:
                raise NonPositiveWeight(f"line {lineno}: weight {w} for {cname!r}")
            weights[c] = w
    if not labels:
        raise MalformedInput("no edges")
    return build_hierarchy(labels, parents, weights)


def _load_json(text: str) -> Hierarchy:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(str(exc)) from None
    labels: list[str] = []
    parents: list[int | None] = []
    weights: list[float] = []
    stack = [(doc, None)]
    # depth-first with reversed push keeps sibling order after renumbering
    while stack:
        obj, p = stack.pop()
        if not isinstance(obj, dict):
            raise MalformedInput(f"expected an object, got {type(obj).__name__}")
        label = obj.get("label", "")
        if not isinstance(label, str):
            raise MalformedInput(f"label must be a string, got {label!r}")
        w = obj.get("weight")
        if w is None:
            w = 0.0
        elif isinstance(w, bool) or not isinstance(w, (int, float)):
            raise MalformedInput(f"weight must be a number, got {w!r}")
        elif not w > 0:
            raise NonPositiveWeight(f"node {label!r} has weight {w}")
        children = obj.get("children", [])
        if not isinstance(children, list):
            raise MalformedInput(f"children of {label!r} must be a list")
        i = len(labels)
        labels.append(label)
        parents.append(p)
        weights.append(float(w))
        stack.extend((c, i) for c in reversed(children))
    return build_hierarchy(labels, parents, weights)


def load_hierarchy(source: IO | bytes | str, format: str) -> Hierarchy:
    """Read a hierarchy from a CSV edge list or nested JSON.

    ``source`` may be a binary/text stream, bytes, or a string. Nodes
    without a weight get 0, to be filled by :func:`assign_subtree_weights`.
    """
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        try:
            source = source.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MalformedInput(str(exc)) from None
    if format in ("csv", "csv-edges"):
        return _load_csv(source)
    if format == "json":
        return _load_json(source)
    raise ValueError(f"unknown format {format!r}")


def assign_subtree_weights(h: Hierarchy, preserve_explicit: bool = False) -> Hierarchy:
    """Set each weight to the number of nodes in its subtree.

    With ``preserve_explicit`` only the sentinel (0) weights are replaced.
    """
    n = h.n
    size = np.ones(n, dtype=np.int64)
    parent = h.parent
    # reverse BFS order visits children before parents
    for i in range(n - 1, 0, -1):
        size[parent[i]] += size[i]
    nodes = []
    for r in h.nodes:
        w = r.weight if (preserve_explicit and r.weight > 0) else float(size[r.id])
        nodes.append(NodeRecord(r.id, r.label, r.parent, r.children, w, r.depth))
    return Hierarchy(tuple(nodes), h.root)


def scan_filesystem(path: str | os.PathLike, follow_symlinks: bool = False) -> Hierarchy:
    """Mirror a directory tree, weighting nodes by file size in bytes.

    Files become leaves weighing their size (at least 1); a directory
    weighs the sum of the file weights below it (at least 1). Entries are
    sorted by name. Unreadable entries are skipped with a ScanWarning.
    """
    path = os.fspath(path)
    try:
        st = os.stat(path) if follow_symlinks else os.lstat(path)
    except FileNotFoundError:
        raise PathNotFound(path) from None
    except PermissionError:
        raise PermissionDenied(path) from None

    labels: list[str] = []
    parents: list[int | None] = []
    sizes: list[int] = []
    is_dir: list[bool] = []
    root_label = os.path.basename(os.path.normpath(path)) or path
    labels.append(root_label)
    parents.append(None)
    sizes.append(0)
    is_dir.append(stat.S_ISDIR(st.st_mode))
    if not is_dir[0]:
        return build_hierarchy(labels, parents, [float(max(st.st_size, 1))])

    seen = {(st.st_dev, st.st_ino)}
    stack = [(path, 0)]
    while stack:
        dirpath, idx = stack.pop()
        try:
            with os.scandir(dirpath) as it:
                entries = sorted(it, key=lambda e: e.name)
        except PermissionError:
            if idx == 0:
                raise PermissionDenied(dirpath) from None
            warnings.warn(f"cannot read {dirpath}, skipped", ScanWarning, stacklevel=2)
            continue
        subdirs = []
        for entry in entries:
            try:
                est = entry.stat(follow_symlinks=follow_symlinks)
            except OSError as exc:
                warnings.warn(f"cannot stat {entry.path}: {exc}", ScanWarning, stacklevel=2)
                continue
            directory = stat.S_ISDIR(est.st_mode)
            if directory and (est.st_dev, est.st_ino) in seen:
                warnings.warn(f"directory loop at {entry.path}, skipped", ScanWarning, stacklevel=2)
                continue
            i = len(labels)
            labels.append(entry.name)
            parents.append(idx)
            is_dir.append(directory)
            sizes.append(0 if directory else est.st_size)
            if directory:
                seen.add((est.st_dev, est.st_ino))
                subdirs.append((entry.path, i))
        stack.extend(reversed(subdirs))

    # empty files count 1; empty directories add nothing to their parent
    total = [0.0 if d else float(max(s, 1)) for d, s in zip(is_dir, sizes)]
    # parents always precede children in scan order
    for i in range(len(labels) - 1, 0, -1):
        total[parents[i]] += total[i]
    return build_hierarchy(labels, parents, [max(t, 1.0) for t in total])
