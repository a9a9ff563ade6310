"""Graph model for multicore-fiber optical networks.

Loads validated topologies from JSON documents, routes with deterministic
shortest paths, enumerates bounded simple cycles, and classifies every link
against each candidate protection cycle (on-cycle, straddling, or neither).
"""

import heapq
import json
from dataclasses import dataclass, field
from importlib import resources

__all__ = [
    "TopologyError",
    "Node",
    "Link",
    "Network",
    "Path",
    "ProtectionCycle",
    "hex_core_adjacency",
    "load_network",
    "load_network_file",
    "load_bundled",
    "bundled_names",
    "shortest_path",
    "disjoint_path_pair",
    "enumerate_cycles",
    "backup_routes",
]


class TopologyError(ValueError):
    """Unparseable or invalid topology document."""


@dataclass(frozen=True)
class Node:
    id: int
    name: str


@dataclass(frozen=True)
class Link:
    id: int
    a: int
    b: int
    length_km: float
    mttf_h: float

    @property
    def ends(self) -> tuple[int, int]:
        return (self.a, self.b)

    def other(self, node: int) -> int:
        return self.b if node == self.a else self.a


def hex_core_adjacency() -> tuple[tuple[int, int], ...]:
    """Adjacency pairs for the 7-core layout: center core 0 plus a ring of 6."""
    ring = [(i, i % 6 + 1) for i in range(1, 7)]
    return tuple((0, k) for k in range(1, 7)) + tuple(ring)


@dataclass
class Network:
    """Immutable-after-construction network; safe to share across runs."""

    nodes: list[Node]
    links: list[Link]
    cores_per_link: int
    core_adjacency: tuple[tuple[int, int], ...]
    name: str = ""
    # node id -> sorted list of (neighbor id, Link)
    _adj: dict = field(init=False, repr=False)
    _by_pair: dict = field(init=False, repr=False)

    def __post_init__(self):
        self._validate()
        adj = {n.id: [] for n in self.nodes}
        by_pair = {}
        for link in self.links:
            adj[link.a].append((link.b, link))
            adj[link.b].append((link.a, link))
            by_pair[frozenset((link.a, link.b))] = link
        for lst in adj.values():
            lst.sort(key=lambda pair: pair[0])
        self._adj = adj
        self._by_pair = by_pair

    def _validate(self):
        ids = [n.id for n in self.nodes]
        if sorted(ids) != list(range(len(self.nodes))):
            raise TopologyError("node ids must be dense 0..V-1 and unique")
        self.nodes.sort(key=lambda n: n.id)
        link_ids = [l.id for l in self.links]
        if sorted(link_ids) != list(range(len(self.links))):
            raise TopologyError("link ids must be dense 0..L-1 and unique")
        self.links.sort(key=lambda l: l.id)
        node_set = set(ids)
        seen_pairs = set()
        for link in self.links:
            if link.a == link.b:
                raise TopologyError(f"link {link.id}: endpoints must differ")
            if link.a not in node_set or link.b not in node_set:
                raise TopologyError(f"link {link.id}: unknown endpoint")
            pair = frozenset((link.a, link.b))
            if pair in seen_pairs:
                raise TopologyError(f"link {link.id}: duplicate node pair {tuple(sorted(pair))}")
            seen_pairs.add(pair)
            if not link.length_km > 0:
                raise TopologyError(f"link {link.id}: length_km must be > 0")
            if not link.mttf_h > 0:
                raise TopologyError(f"link {link.id}: mttf_h must be > 0")
        if self.cores_per_link < 1:
            raise TopologyError("cores_per_link must be >= 1")
        for i, j in self.core_adjacency:
            if i == j:
                raise TopologyError(f"core adjacency pair ({i},{j}) is reflexive")
            if not (0 <= i < self.cores_per_link and 0 <= j < self.cores_per_link):
                raise TopologyError(f"core adjacency pair ({i},{j}) out of range")
        if len(self.nodes) > 1 and not self._connected():
            raise TopologyError("graph is not connected")

    def _connected(self) -> bool:
        seen = {0}
        frontier = [0]
        adj = {n.id: set() for n in self.nodes}
        for l in self.links:
            adj[l.a].add(l.b)
            adj[l.b].add(l.a)
        while frontier:
            u = frontier.pop()
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    frontier.append(v)
        return len(seen) == len(self.nodes)

    def neighbors(self, node: int):
        """Sorted (neighbor id, Link) pairs of ``node``."""
        return self._adj[node]

    def link_between(self, a: int, b: int) -> Link:
        try:
            return self._by_pair[frozenset((a, b))]
        except KeyError:
            raise TopologyError(f"no link between nodes {a} and {b}") from None

    @property
    def core_neighbors(self) -> list[tuple[int, ...]]:
        """Per-core sorted tuple of adjacent core indices."""
        nbrs = [set() for _ in range(self.cores_per_link)]
        for i, j in self.core_adjacency:
            nbrs[i].add(j)
            nbrs[j].add(i)
        return [tuple(sorted(s)) for s in nbrs]


@dataclass(frozen=True)
class Path:
    """A simple path: node sequence, the link ids joining them, total length."""

    nodes: tuple[int, ...]
    links: tuple[int, ...]
    length_km: float

    def __len__(self):
        return len(self.links)


def path_from_nodes(net: Network, nodes) -> Path:
    """Build a Path through the given node sequence, resolving links and length."""
    nodes = tuple(nodes)
    links = []
    total = 0.0
    for u, v in zip(nodes, nodes[1:]):
        link = net.link_between(u, v)
        links.append(link.id)
        total += link.length_km
    if len(set(links)) != len(links):
        raise TopologyError(f"node sequence {nodes} repeats a link")
    return Path(nodes=nodes, links=tuple(links), length_km=total)


def _check_node(net: Network, node: int):
    if not (0 <= node < len(net.nodes)):
        raise TopologyError(f"unknown node id {node}")


def shortest_path(net: Network, src: int, dst: int, excluded=frozenset()):
    """Minimum-length path from src to dst avoiding the excluded link ids.

    Ties in total length break toward the lexicographically smallest node
    sequence, so routing is reproducible. Returns None when disconnected.
    """
    _check_node(net, src)
    _check_node(net, dst)
    if src == dst:
        raise TopologyError("src and dst must differ")
    excluded = frozenset(excluded)
    # heap entries (length, node sequence); the sequence doubles as tie-break
    heap = [(0.0, (src,))]
    settled = set()
    while heap:
        dist, seq = heapq.heappop(heap)
        u = seq[-1]
        if u in settled:
            continue
        settled.add(u)
        if u == dst:
            return path_from_nodes(net, seq)
        for v, link in net.neighbors(u):
            if v in settled or link.id in excluded:
                continue
            heapq.heappush(heap, (dist + link.length_km, seq + (v,)))
    return None


def disjoint_path_pair(net: Network, src: int, dst: int, excluded=frozenset()):
    """Shortest primary plus shortest link-disjoint backup, or None.

    The backup is the shortest path in the network with the primary's links
    removed, so the two never share a link.
    """
    primary = shortest_path(net, src, dst, excluded)
    if primary is None:
        return None
    backup = shortest_path(net, src, dst, frozenset(excluded) | set(primary.links))
    if backup is None:
        return None
    return primary, backup


@dataclass(frozen=True)
class ProtectionCycle:
    """A candidate protection cycle in canonical orientation.

    ``crosses[l]`` is 1 iff link l lies on the cycle. ``protection[l]`` is 1
    for on-cycle links (one backup route), 2 for straddling chords (two
    backup routes), 0 otherwise. Both are indexed by link id.
    """

    nodes: tuple[int, ...]
    links: tuple[int, ...]
    crosses: tuple[int, ...]
    protection: tuple[int, ...]

    def __len__(self):
        return len(self.links)

    @property
    def straddling_links(self) -> tuple[int, ...]:
        return tuple(l for l, v in enumerate(self.protection) if v == 2)


def _cycle_node_sets(net: Network, max_hops: int):
    """All simple cycles as canonical node tuples (min node first, smaller
    neighbor of it second)."""
    adj = {n.id: sorted(v for v, _ in net.neighbors(n.id)) for n in net.nodes}
    found = []

    def extend(root, path, on_path):
        u = path[-1]
        nbrs = adj[u]
        if len(path) >= 3 and root in nbrs and path[1] < u:
            found.append(tuple(path))
        if len(path) >= max_hops:
            return
        for v in nbrs:
            if v > root and v not in on_path:
                on_path.add(v)
                path.append(v)
                extend(root, path, on_path)
                path.pop()
                on_path.remove(v)

    for root in sorted(adj):
        extend(root, [root], {root})
    return sorted(found)


def enumerate_cycles(net: Network, max_hops: int = 8) -> list[ProtectionCycle]:
    """Every simple cycle of at most max_hops links, in canonical order,
    with the crossing/protection relation filled in for all links."""
    if max_hops < 3:
        raise ValueError("max_hops must be >= 3")
    num_links = len(net.links)
    cycles = []
    for nodes in _cycle_node_sets(net, max_hops):
        links = tuple(
            net.link_between(nodes[i], nodes[(i + 1) % len(nodes)]).id
            for i in range(len(nodes))
        )
        on_cycle = set(links)
        node_set = set(nodes)
        crosses = [0] * num_links
        protection = [0] * num_links
        for link in net.links:
            if link.id in on_cycle:
                crosses[link.id] = 1
                protection[link.id] = 1
            elif link.a in node_set and link.b in node_set:
                protection[link.id] = 2
        cycles.append(
            ProtectionCycle(
                nodes=nodes,
                links=links,
                crosses=tuple(crosses),
                protection=tuple(protection),
            )
        )
    return cycles


def backup_routes(net: Network, cycle: ProtectionCycle, failed: Link) -> list[Path]:
    """Backup route(s) a cycle provides once ``failed`` goes down.

    On-cycle failures get the single surviving arc, walked in the cycle's
    canonical orientation starting from the failed link's far endpoint.
    Straddling failures get both arcs, each oriented to start at the smaller
    endpoint id, ordered lexicographically.
    """
    kind = cycle.protection[failed.id]
    if kind == 0:
        raise ValueError(f"cycle {cycle.nodes} does not protect link {failed.id}")
    nodes = cycle.nodes
    m = len(nodes)
    pos = {v: i for i, v in enumerate(nodes)}
    if kind == 1:
        j = pos[failed.a]
        if nodes[(j + 1) % m] != failed.b:
            j = pos[failed.b]
        seq = [nodes[(j + 1 + k) % m] for k in range(m)]
        return [path_from_nodes(net, seq)]
    lo, hi = sorted((pos[failed.a], pos[failed.b]))
    arc_a = [nodes[i] for i in range(lo, hi + 1)]
    arc_b = [nodes[i % m] for i in range(hi, lo + m + 1)]
    start = min(failed.a, failed.b)
    arcs = []
    for seq in (arc_a, arc_b):
        if seq[0] != start:
            seq = seq[::-1]
        arcs.append(tuple(seq))
    arcs.sort()
    return [path_from_nodes(net, seq) for seq in arcs]


def load_network(doc: dict) -> Network:
    """Validate a parsed topology document and build the Network.

    Expected fields: ``nodes: [{id, name}]``,
    ``links: [{id, a, b, length_km, mttf_h}]``, ``cores_per_link`` and
    ``core_adjacency: [[i, j], ...]`` (defaults to the hex layout when
    cores_per_link is 7).
    """
    if not isinstance(doc, dict):
        raise TopologyError("topology document must be a JSON object")
    try:
        nodes = [
            Node(id=int(n["id"]), name=str(n.get("name", n["id"])))
            for n in doc["nodes"]
        ]
        links = [
            Link(
                id=int(l["id"]),
                a=int(l["a"]),
                b=int(l["b"]),
                length_km=float(l["length_km"]),
                mttf_h=float(l["mttf_h"]),
            )
            for l in doc["links"]
        ]
    except KeyError as exc:
        raise TopologyError(f"missing required field {exc}") from None
    except (TypeError, ValueError) as exc:
        raise TopologyError(f"malformed node/link entry: {exc}") from None
    cores = int(doc.get("cores_per_link", 7))
    if "core_adjacency" in doc:
        adjacency = tuple(tuple(int(x) for x in pair) for pair in doc["core_adjacency"])
    elif cores == 7:
        adjacency = hex_core_adjacency()
    else:
        raise TopologyError("core_adjacency required when cores_per_link != 7")
    return Network(
        nodes=nodes,
        links=links,
        cores_per_link=cores,
        core_adjacency=adjacency,
        name=str(doc.get("name", "")),
    )


def load_network_file(path) -> Network:
    """Load and validate a topology JSON file."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise TopologyError(f"cannot read topology file {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise TopologyError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from None
    return load_network(doc)


def bundled_names() -> list[str]:
    """Names of the topology fixtures shipped with the package."""
    pkg = resources.files("mcfeon.data")
    return sorted(p.name[: -len(".json")] for p in pkg.iterdir() if p.name.endswith(".json"))


def load_bundled(name: str) -> Network:
    """Load one of the shipped topology fixtures by name (e.g. 'finland12')."""
    pkg = resources.files("mcfeon.data")
    try:
        text = (pkg / f"{name}.json").read_text()
    except FileNotFoundError:
        raise TopologyError(f"no bundled topology named {name!r}; have {bundled_names()}") from None
    return load_network(json.loads(text))
