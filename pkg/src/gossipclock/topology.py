"""Graph families used throughout the package, with symmetry-orbit labels.

Every family is produced by :func:`generate` from a descriptor, either a
mapping ``{"generator": "symstar", "params": {"n": 5, "k": 2}}`` or the
compact text form ``"symstar:n=5,k=2"``.  Arbitrary graphs are built with
:meth:`Topology.from_edges` and carry singleton orbits.

Vertex numbering per family (fixed so that probability vectors are
position-stable):

* ``path(n)``: vertices ``0..n-1`` along the line.
* ``cycle(n)``, ``complete(n)``: ``0..n-1``; cycle edges ``(i, i+1 mod n)``.
* ``star(n)``: center ``0``, leaves ``1..n-1`` (``n`` counts all vertices).
* ``symstar(n, k)``: center ``0``; branch ``b`` (0-based) at distance ``j``
  (1-based) is vertex ``1 + b*k + (j-1)``.
* ``ccs(n, k)``: branch ``b`` at position ``j`` (core is ``j = 1``) is vertex
  ``b*k + (j-1)``; cores form a clique.
* ``ccs2(n, k1, k2)``: blocks of ``1 + k1 + k2`` per branch: core, then the
  first tail outward, then the second tail outward.
* ``palm(n, k)``: center ``0``, leaves ``1..n``, tail ``n+1..n+k`` outward.
* ``lollipop(n, k)``: bridging vertex ``0``, other clique vertices ``1..n``,
  tail ``n+1..n+k`` outward (the clique has ``n + 1`` vertices).
* ``wheel(n)``: center ``0``, rim ``1..n`` in cyclic order.
* ``two-coupled(n1, n2, n3)``: group A ``0..n1-1``, shared group B next,
  group C last; A and B form one clique, B and C another.
* ``cartesian``: row-major order over the factor vertex tuples.
"""

from __future__ import annotations

import itertools
import json
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from gossipclock.errors import InvalidParameterError, UnsupportedDescriptorError

__all__ = [
    "Topology",
    "generate",
    "cartesian_product",
    "parse_descriptor",
    "format_descriptor",
    "FAMILIES",
]

Edge = tuple[int, int]


def _canon(i: int, j: int) -> Edge:
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class Topology:
    """An undirected simple graph plus generator metadata and orbit labels.

    Attributes:
        n_vertices: Number of vertices, labelled ``0..n_vertices-1``.
        edges: Sorted tuple of canonical ``(i, j)`` pairs with ``i < j``.
        generator: Family tag, ``"custom"`` for hand-built graphs.
        params: Generator parameters (``{"factors": [...]}`` for cartesian).
        vertex_orbit: Orbit label for each vertex.
        edge_orbit: Orbit label for each edge, parallel to ``edges``.
    """

    n_vertices: int
    edges: tuple[Edge, ...]
    generator: str = "custom"
    params: Mapping[str, Any] = field(default_factory=dict)
    vertex_orbit: tuple[str, ...] = ()
    edge_orbit: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.n_vertices < 1:
            raise InvalidParameterError(f"need at least one vertex, got {self.n_vertices}")
        canon = sorted({_canon(int(i), int(j)) for i, j in self.edges})
        if len(canon) != len(self.edges):
            raise InvalidParameterError("duplicate edges")
        for i, j in canon:
            if i == j:
                raise InvalidParameterError(f"self-loop at vertex {i}")
            if i < 0 or j >= self.n_vertices:
                raise InvalidParameterError(f"edge ({i}, {j}) references a missing vertex")
        if tuple(canon) != tuple(self.edges):
            # Keep edge orbits aligned with the canonical ordering.
            if self.edge_orbit:
                lookup = {_canon(int(i), int(j)): o for (i, j), o in zip(self.edges, self.edge_orbit)}
                object.__setattr__(self, "edge_orbit", tuple(lookup[e] for e in canon))
            object.__setattr__(self, "edges", tuple(canon))
        if not self.vertex_orbit:
            object.__setattr__(self, "vertex_orbit", tuple(f"v{i}" for i in range(self.n_vertices)))
        if not self.edge_orbit:
            object.__setattr__(self, "edge_orbit", tuple(f"e{i}-{j}" for i, j in self.edges))
        if len(self.vertex_orbit) != self.n_vertices:
            raise InvalidParameterError("vertex_orbit length does not match n_vertices")
        if len(self.edge_orbit) != len(self.edges):
            raise InvalidParameterError("edge_orbit length does not match edges")

    # -- construction -------------------------------------------------

    @classmethod
    def from_edges(cls, n_vertices: int, edges: Iterable[Sequence[int]]) -> Topology:
        """Build a custom topology with singleton orbits."""
        return cls(n_vertices=int(n_vertices), edges=tuple(_canon(int(a), int(b)) for a, b in edges))

    # -- queries ------------------------------------------------------

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def edge_index(self) -> dict[Edge, int]:
        """Map each canonical edge to its position in ``edges``."""
        return {e: k for k, e in enumerate(self.edges)}

    def has_edge(self, i: int, j: int) -> bool:
        return _canon(i, j) in self.edge_index()

    def neighbors(self, v: int) -> list[int]:
        out = [j for i, j in self.edges if i == v] + [i for i, j in self.edges if j == v]
        return sorted(out)

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n_vertices, dtype=int)
        for i, j in self.edges:
            deg[i] += 1
            deg[j] += 1
        return deg

    def adjacency(self) -> np.ndarray:
        """Dense 0/1 adjacency matrix."""
        a = np.zeros((self.n_vertices, self.n_vertices))
        for i, j in self.edges:
            a[i, j] = a[j, i] = 1.0
        return a

    def laplacian(self) -> np.ndarray:
        """Unweighted graph Laplacian."""
        a = self.adjacency()
        return np.diag(a.sum(axis=1)) - a

    def is_connected(self) -> bool:
        if self.n_vertices == 1:
            return True
        if not self.edges:
            return False
        rows = [i for i, _ in self.edges]
        cols = [j for _, j in self.edges]
        graph = coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(self.n_vertices,) * 2)
        count, _ = connected_components(graph, directed=False)
        return count == 1

    def is_regular(self) -> bool:
        deg = self.degrees()
        return bool(np.all(deg == deg[0]))

    def orbit_consistent(self) -> bool:
        """Check that orbits respect degrees and endpoint orbit pairs."""
        deg = self.degrees()
        seen_deg: dict[str, int] = {}
        for v, label in enumerate(self.vertex_orbit):
            if seen_deg.setdefault(label, int(deg[v])) != deg[v]:
                return False
        seen_pair: dict[str, frozenset] = {}
        for (i, j), label in zip(self.edges, self.edge_orbit):
            pair = frozenset((self.vertex_orbit[i], self.vertex_orbit[j]))
            if seen_pair.setdefault(label, pair) != pair:
                return False
        return True

    # -- serialization ------------------------------------------------

    def descriptor(self) -> dict[str, Any]:
        """Generator descriptor mapping, or the edge-list form for custom graphs."""
        if self.generator == "custom":
            return {"n_vertices": self.n_vertices, "edges": [list(e) for e in self.edges]}
        return {"generator": self.generator, "params": _plain(self.params)}

    def to_json(self) -> str:
        return json.dumps(self.descriptor(), sort_keys=True)

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any]) -> Topology:
        """Inverse of :meth:`descriptor`; accepts either JSON form."""
        if "generator" in data:
            return generate(data)
        if "edges" not in data:
            raise UnsupportedDescriptorError("topology mapping needs 'generator' or 'edges'")
        edges = [tuple(e) for e in data["edges"]]
        n = data.get("n_vertices")
        if n is None:
            n = 1 + max((max(e) for e in edges), default=0)
        return cls.from_edges(int(n), edges)

    @classmethod
    def from_json(cls, text: str) -> Topology:
        return cls.from_mapping(json.loads(text))


def _plain(params: Mapping[str, Any]) -> dict[str, Any]:
    out: dict[str, Any] = {}
    for key, val in params.items():
        if key == "factors":
            out[key] = [dict(f) for f in val]
        else:
            out[key] = int(val)
    return out


# ---------------------------------------------------------------------------
# family builders
# ---------------------------------------------------------------------------


def _require(name: str, params: Mapping[str, Any], minimums: Mapping[str, int]) -> dict[str, int]:
    missing = [key for key in minimums if key not in params]
    if missing:
        raise InvalidParameterError(f"{name}: missing parameter(s) {missing}")
    extra = [key for key in params if key not in minimums]
    if extra:
        raise InvalidParameterError(f"{name}: unknown parameter(s) {extra}")
    out = {}
    for key, low in minimums.items():
        val = params[key]
        if isinstance(val, bool) or int(val) != val:
            raise InvalidParameterError(f"{name}: {key} must be an integer, got {val!r}")
        if int(val) < low:
            raise InvalidParameterError(f"{name}: {key} must be >= {low}, got {val}")
        out[key] = int(val)
    return out


def _path(p: Mapping[str, Any]) -> Topology:
    n = _require("path", p, {"n": 2})["n"]
    edges = [(i, i + 1) for i in range(n - 1)]
    vorb = [f"d{min(i, n - 1 - i)}" for i in range(n)]
    eorb = [f"d{min(i, n - 2 - i)}" for i in range(n - 1)]
    return Topology(n, tuple(edges), "path", {"n": n}, tuple(vorb), tuple(eorb))


def _cycle(p: Mapping[str, Any]) -> Topology:
    n = _require("cycle", p, {"n": 3})["n"]
    edges = [_canon(i, (i + 1) % n) for i in range(n)]
    return Topology(n, tuple(sorted(edges)), "cycle", {"n": n}, ("ring",) * n, ("ring",) * n)


def _complete(p: Mapping[str, Any]) -> Topology:
    n = _require("complete", p, {"n": 2})["n"]
    edges = list(itertools.combinations(range(n), 2))
    return Topology(n, tuple(edges), "complete", {"n": n}, ("all",) * n, ("all",) * len(edges))


def _star(p: Mapping[str, Any]) -> Topology:
    n = _require("star", p, {"n": 2})["n"]
    edges = [(0, i) for i in range(1, n)]
    vorb = ("center",) + ("leaf",) * (n - 1)
    return Topology(n, tuple(edges), "star", {"n": n}, vorb, ("spoke",) * (n - 1))


def _symstar(p: Mapping[str, Any]) -> Topology:
    q = _require("symstar", p, {"n": 1, "k": 1})
    n, k = q["n"], q["k"]
    edges, eorb = [], []
    vorb = ["center"] + [""] * (n * k)
    for b in range(n):
        prev = 0
        for j in range(1, k + 1):
            v = 1 + b * k + (j - 1)
            vorb[v] = f"d{j}"
            edges.append((prev, v))
            eorb.append(f"d{j}")
            prev = v
    return Topology(1 + n * k, tuple(edges), "symstar", q, tuple(vorb), tuple(eorb))


def _ccs(p: Mapping[str, Any]) -> Topology:
    q = _require("ccs", p, {"n": 2, "k": 1})
    n, k = q["n"], q["k"]
    edges, eorb = [], []
    for a, b in itertools.combinations(range(n), 2):
        edges.append((a * k, b * k))
        eorb.append("core")
    vorb = [""] * (n * k)
    for b in range(n):
        vorb[b * k] = "d1"
        for j in range(2, k + 1):
            v = b * k + (j - 1)
            vorb[v] = f"d{j}"
            edges.append((v - 1, v))
            eorb.append(f"d{j}")
    return Topology(n * k, tuple(edges), "ccs", q, tuple(vorb), tuple(eorb))


def _ccs2(p: Mapping[str, Any]) -> Topology:
    q = _require("ccs2", p, {"n": 2, "k1": 1, "k2": 0})
    n, k1, k2 = q["n"], q["k1"], q["k2"]
    per = 1 + k1 + k2
    edges, eorb = [], []
    for a, b in itertools.combinations(range(n), 2):
        edges.append((a * per, b * per))
        eorb.append("core")
    vorb = [""] * (n * per)
    for b in range(n):
        core = b * per
        vorb[core] = "core"
        for tail, length, offset in (("a", k1, 0), ("b", k2, k1)):
            prev = core
            for j in range(1, length + 1):
                v = core + offset + j
                vorb[v] = f"{tail}{j}"
                edges.append((prev, v))
                eorb.append(f"{tail}{j}")
                prev = v
    return Topology(n * per, tuple(edges), "ccs2", q, tuple(vorb), tuple(eorb))


def _palm(p: Mapping[str, Any]) -> Topology:
    q = _require("palm", p, {"n": 1, "k": 1})
    n, k = q["n"], q["k"]
    edges = [(0, leaf) for leaf in range(1, n + 1)]
    eorb = ["leaf"] * n
    vorb = ["center"] + ["leaf"] * n + [f"t{j}" for j in range(1, k + 1)]
    prev = 0
    for j in range(1, k + 1):
        edges.append((prev, n + j))
        eorb.append(f"t{j}")
        prev = n + j
    return Topology(n + k + 1, tuple(edges), "palm", q, tuple(vorb), tuple(eorb))


def _lollipop(p: Mapping[str, Any]) -> Topology:
    q = _require("lollipop", p, {"n": 1, "k": 1})
    n, k = q["n"], q["k"]
    edges, eorb = [], []
    for a, b in itertools.combinations(range(n + 1), 2):
        edges.append((a, b))
        eorb.append("bridge" if a == 0 else "clique")
    vorb = ["bridging"] + ["clique"] * n + [f"t{j}" for j in range(1, k + 1)]
    prev = 0
    for j in range(1, k + 1):
        edges.append((prev, n + j))
        eorb.append(f"t{j}")
        prev = n + j
    return Topology(n + k + 1, tuple(edges), "lollipop", q, tuple(vorb), tuple(eorb))


def _wheel(p: Mapping[str, Any]) -> Topology:
    n = _require("wheel", p, {"n": 3})["n"]
    edges = [(0, i) for i in range(1, n + 1)]
    eorb = ["spoke"] * n
    for i in range(1, n + 1):
        edges.append(_canon(i, i % n + 1))
        eorb.append("rim")
    vorb = ("center",) + ("rim",) * n
    return Topology(n + 1, tuple(edges), "wheel", {"n": n}, vorb, tuple(eorb))


def _two_coupled(p: Mapping[str, Any]) -> Topology:
    q = _require("two-coupled", p, {"n1": 1, "n2": 1, "n3": 1})
    n1, n2, n3 = q["n1"], q["n2"], q["n3"]
    group_a = list(range(n1))
    group_b = list(range(n1, n1 + n2))
    group_c = list(range(n1 + n2, n1 + n2 + n3))
    symmetric = n1 == n3
    label_a, label_c = ("outer", "outer") if symmetric else ("a", "c")
    vorb = [label_a] * n1 + ["shared"] * n2 + [label_c] * n3
    pairs: dict[Edge, str] = {}
    for clique, label in ((group_a + group_b, label_a), (group_b + group_c, label_c)):
        for u, v in itertools.combinations(clique, 2):
            e = _canon(u, v)
            if u in group_b and v in group_b:
                pairs[e] = "shared"
            elif u in group_b or v in group_b:
                pairs[e] = f"{label}-shared"
            else:
                pairs[e] = label
    edges = sorted(pairs)
    return Topology(n1 + n2 + n3, tuple(edges), "two-coupled", q, tuple(vorb), tuple(pairs[e] for e in edges))


def _cartesian(p: Mapping[str, Any]) -> Topology:
    factors = p.get("factors")
    if not factors:
        raise InvalidParameterError("cartesian: need a non-empty 'factors' list")
    return cartesian_product([generate(f) for f in factors])


FAMILIES = {
    "path": _path,
    "cycle": _cycle,
    "complete": _complete,
    "star": _star,
    "symstar": _symstar,
    "ccs": _ccs,
    "ccs2": _ccs2,
    "palm": _palm,
    "lollipop": _lollipop,
    "wheel": _wheel,
    "two-coupled": _two_coupled,
    "cartesian": _cartesian,
}


def cartesian_product(factors: Sequence[Topology]) -> Topology:
    """Cartesian product of graphs.

    Vertices are tuples in row-major order; two tuples are adjacent when they
    differ in exactly one coordinate and that coordinate pair is an edge of the
    factor.  The edge orbit is the index of the differing factor (meaningful
    for edge-transitive factors), and the vertex orbit concatenates the factor
    vertex orbits.

    Raises:
        InvalidParameterError: if ``factors`` is empty or a factor is
            disconnected or has fewer than two vertices.
    """
    if not factors:
        raise InvalidParameterError("cartesian product needs at least one factor")
    for f in factors:
        if f.n_vertices < 2 or not f.is_connected():
            raise InvalidParameterError("every factor must be connected with >= 2 vertices")
    sizes = [f.n_vertices for f in factors]
    tuples = list(itertools.product(*[range(s) for s in sizes]))
    index = {t: i for i, t in enumerate(tuples)}
    edges, eorb = [], []
    for t in tuples:
        for pos, f in enumerate(factors):
            for a, b in f.edges:
                if t[pos] != a:
                    continue
                other = t[:pos] + (b,) + t[pos + 1 :]
                edges.append(_canon(index[t], index[other]))
                eorb.append(f"f{pos}")
    order = sorted(range(len(edges)), key=lambda k: edges[k])
    vorb = tuple("|".join(f.vertex_orbit[c] for f, c in zip(factors, t)) for t in tuples)
    params = {"factors": [f.descriptor() for f in factors]}
    return Topology(
        len(tuples),
        tuple(edges[k] for k in order),
        "cartesian",
        params,
        vorb,
        tuple(eorb[k] for k in order),
    )


# ---------------------------------------------------------------------------
# descriptors
# ---------------------------------------------------------------------------


def parse_descriptor(text: str) -> dict[str, Any]:
    """Parse the ``name:key=val,key=val`` grammar.

    Cartesian products join factor descriptors with ``*``, for example
    ``"complete:n=2*complete:n=3"``.
    """
    text = text.strip()
    if "*" in text:
        return {"generator": "cartesian", "params": {"factors": [parse_descriptor(t) for t in text.split("*")]}}
    name, _, rest = text.partition(":")
    name = name.strip()
    if not name:
        raise UnsupportedDescriptorError(f"empty generator name in {text!r}")
    params: dict[str, Any] = {}
    if rest.strip():
        for item in rest.split(","):
            key, eq, val = item.partition("=")
            if not eq:
                raise InvalidParameterError(f"malformed parameter {item!r} in {text!r}")
            try:
                params[key.strip()] = int(val)
            except ValueError as exc:
                raise InvalidParameterError(f"parameter {key.strip()!r} must be an integer") from exc
    return {"generator": name, "params": params}


def format_descriptor(desc: Mapping[str, Any]) -> str:
    """Inverse of :func:`parse_descriptor`."""
    if desc["generator"] == "cartesian":
        return "*".join(format_descriptor(f) for f in desc["params"]["factors"])
    body = ",".join(f"{k}={v}" for k, v in desc["params"].items())
    return f"{desc['generator']}:{body}" if body else desc["generator"]


def generate(descriptor: str | Mapping[str, Any]) -> Topology:
    """Build a topology from a descriptor string or mapping.

    Raises:
        UnsupportedDescriptorError: unknown family tag.
        InvalidParameterError: missing, extra or out-of-range parameters.
    """
    desc = parse_descriptor(descriptor) if isinstance(descriptor, str) else descriptor
    name = desc.get("generator")
    builder = FAMILIES.get(name)  # type: ignore[arg-type]
    if builder is None:
        raise UnsupportedDescriptorError(f"unknown topology family {name!r}")
    return builder(desc.get("params", {}))
