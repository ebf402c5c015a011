"""Directed multigraphs with orientation data: gradings, canonical forms, signs.

Vertices are labelled 1..nv.  Edges are an ordered list of (source, target)
pairs; parallel edges and self-loops are allowed at this layer.  Graphs may
carry outgoing external legs (a multiset of source vertices) and, for
operadic graphs, a number of distinguished external vertices (labels
1..n_ext) that are never permuted by canonicalization.

The orientation of a labelled graph is its vertex order, edge order and the
edge directions.  Which datum carries signs depends on the parity of n:

    n even:  an odd reordering of the edge list gives -1; vertex
             relabellings and edge-direction flips are free.
    n odd:   an odd vertex relabelling gives -1 and flipping a single edge
             gives -1; the edge order is free.

A graph admitting an automorphism of sign -1 is the zero vector of its
complex (an "odd symmetry").  ``canonicalize`` detects this.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import convention


@dataclass(frozen=True)
class DirectedGraph:
    """A finite directed multigraph with ordered vertex/edge lists.

    nv     -- number of vertices, labelled 1..nv
    edges  -- ordered tuple of (source, target) pairs
    legs   -- tuple of source vertices of outgoing external legs
    n_ext  -- number of external vertices (operadic graphs); externals are
              the vertices 1..n_ext and carry no degree
    """

    nv: int
    edges: tuple = ()
    legs: tuple = ()
    n_ext: int = 0

    def __post_init__(self):
        for s, t in self.edges:
            if not (1 <= s <= self.nv and 1 <= t <= self.nv):
                raise ValueError(f"edge ({s},{t}) out of range 1..{self.nv}")
        for s in self.legs:
            if not (1 <= s <= self.nv):
                raise ValueError(f"leg source {s} out of range")
        if not (0 <= self.n_ext <= self.nv):
            raise ValueError("n_ext out of range")

    @property
    def ne(self) -> int:
        return len(self.edges)

    @property
    def n_int(self) -> int:
        return self.nv - self.n_ext

    def out_degrees(self):
        out = [0] * (self.nv + 1)
        for s, _ in self.edges:
            out[s] += 1
        return out

    def in_degrees(self):
        ind = [0] * (self.nv + 1)
        for _, t in self.edges:
            ind[t] += 1
        return ind

    def leg_counts(self):
        nl = [0] * (self.nv + 1)
        for s in self.legs:
            nl[s] += 1
        return nl

    def valences(self, with_legs: bool = True):
        """Total valence per vertex; a self-loop counts twice."""
        val = [0] * (self.nv + 1)
        for s, t in self.edges:
            val[s] += 1
            val[t] += 1
        if with_legs:
            for s in self.legs:
                val[s] += 1
        return val


def graph(nv, edges=(), legs=(), n_ext=0) -> DirectedGraph:
    return DirectedGraph(nv, tuple(tuple(e) for e in edges), tuple(sorted(legs)), n_ext)


# ---------------------------------------------------------------------------
# gradings and basic predicates


def degree(g: DirectedGraph, n: int) -> int:
    """Cohomological degree n*(V-1) - (n-1)*E; legs contribute 0."""
    return n * (g.nv - 1) - (n - 1) * g.ne


def operad_degree(g: DirectedGraph, n: int) -> int:
    """Degree of an operadic graph: only internal vertices and edges count."""
    return n * g.n_int - (n - 1) * g.ne


def connected_components(g: DirectedGraph):
    """Components of the underlying undirected graph (legs ignored)."""
    parent = list(range(g.nv + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for s, t in g.edges:
        rs, rt = find(s), find(t)
        if rs != rt:
            parent[rs] = rt
    comps = {}
    for v in range(1, g.nv + 1):
        comps.setdefault(find(v), []).append(v)
    return list(comps.values())


def betti(g: DirectedGraph) -> int:
    """First Betti number E - V + #components; legs excluded."""
    return g.ne - g.nv + len(connected_components(g))


def is_connected(g: DirectedGraph) -> bool:
    return len(connected_components(g)) == 1


def is_oriented_acyclic(g: DirectedGraph) -> bool:
    """True iff the graph has no directed cycle (self-loops are cycles)."""
    out = {v: [] for v in range(1, g.nv + 1)}
    indeg = [0] * (g.nv + 1)
    for s, t in g.edges:
        if s == t:
            return False
        out[s].append(t)
        indeg[t] += 1
    queue = [v for v in range(1, g.nv + 1) if indeg[v] == 0]
    seen = 0
    while queue:
        v = queue.pop()
        seen += 1
        for w in out[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    return seen == g.nv


# ---------------------------------------------------------------------------
# flavors


_FLAVOR_TABLE = {
    # name:    (directed, acyclic, connected, min_valence)
    "fGC": (False, False, False, 0),
    "fcGC": (False, False, True, 0),
    "GC": (False, False, True, 3),
    "dfGC": (True, False, False, 0),
    "fGCor": (True, True, False, 0),
    "fcGCor": (True, True, True, 0),
    "GCor": (True, True, True, 2),
    "hGCor": (True, True, True, 0),
    "Graphs": (False, False, False, 3),
    "GraphsOr": (True, True, False, 2),
}

_ALIASES = {"dGC": "dfGC", "GChat": "hGCor", "hGC": "hGCor"}


@dataclass(frozen=True)
class ComplexSpec:
    """A graph-complex flavor together with the integer parameter n."""

    flavor: str
    n: int

    def __post_init__(self):
        name = _ALIASES.get(self.flavor, self.flavor)
        if name not in _FLAVOR_TABLE:
            raise ValueError(f"unknown flavor {self.flavor!r}")
        object.__setattr__(self, "flavor", name)

    @property
    def parity(self) -> int:
        return self.n % 2

    @property
    def directed(self) -> bool:
        return _FLAVOR_TABLE[self.flavor][0]

    @property
    def acyclic(self) -> bool:
        return _FLAVOR_TABLE[self.flavor][1]

    @property
    def connected(self) -> bool:
        return _FLAVOR_TABLE[self.flavor][2]

    @property
    def min_valence(self) -> int:
        return _FLAVOR_TABLE[self.flavor][3]

    @property
    def legs_allowed(self) -> bool:
        return self.flavor == "hGCor"

    @property
    def is_operad(self) -> bool:
        return self.flavor in ("Graphs", "GraphsOr")

    def __str__(self):
        return f"{self.flavor}_{self.n}"


def admissible(g: DirectedGraph, spec: ComplexSpec) -> bool:
    """Flavor admissibility of the raw graph; zero-ness is checked separately."""
    if spec.is_operad:
        return _operad_admissible(g, spec)
    if g.n_ext:
        return False
    if g.legs and not spec.legs_allowed:
        return False
    if spec.connected and not is_connected(g):
        return False
    if spec.acyclic and not is_oriented_acyclic(g):
        return False
    val = g.valences()
    if any(val[v] < spec.min_valence for v in range(1, g.nv + 1)):
        return False
    if spec.flavor == "hGCor":
        # every vertex needs an outgoing edge or a leg
        out = g.out_degrees()
        nlegs = g.leg_counts()
        if any(out[v] + nlegs[v] == 0 for v in range(1, g.nv + 1)):
            return False
    return True


def _operad_admissible(g: DirectedGraph, spec: ComplexSpec) -> bool:
    if g.n_ext < 1 or g.legs:
        return False
    for comp in connected_components(g):
        if all(v > g.n_ext for v in comp):
            return False
    val = g.valences(with_legs=False)
    if any(val[v] < spec.min_valence for v in range(g.n_ext + 1, g.nv + 1)):
        return False
    if spec.flavor == "GraphsOr":
        if not is_oriented_acyclic(g):
            return False
        out = g.out_degrees()
        if any(out[v] > 0 for v in range(1, g.n_ext + 1)):
            return False
        if any(out[v] == 0 for v in range(g.n_ext + 1, g.nv + 1)):
            return False
    return True


# ---------------------------------------------------------------------------
# encoding


def encode(g: DirectedGraph) -> str:
    """One-line ASCII key; assumes edges and legs are canonically ordered."""

    def tok(v):
        return f"e{v}" if v <= g.n_ext else str(v - g.n_ext)

    if g.n_ext:
        head = f"g e{g.n_ext} {g.n_int} {g.ne}"
    else:
        head = f"g {g.nv} {g.ne} {len(g.legs)}"
    edges = " ".join(f"{tok(s)}->{tok(t)}" for s, t in g.edges)
    legs = " ".join(f"{tok(s)}->*" for s in g.legs)
    return f"{head} : {edges} : {legs}".rstrip()


def decode(key: str) -> DirectedGraph:
    parts = key.split(":")
    if len(parts) == 2:
        parts.append("")
    if len(parts) != 3:
        raise ValueError(f"malformed graph key: {key!r}")
    head, edgepart, legpart = (p.strip() for p in parts)
    fields = head.split()
    if fields[0] != "g":
        raise ValueError(f"malformed graph key: {key!r}")
    if fields[1].startswith("e"):
        n_ext = int(fields[1][1:])
        nv = n_ext + int(fields[2])
    else:
        n_ext = 0
        nv = int(fields[1])

    def untok(t):
        return int(t[1:]) if t.startswith("e") else int(t) + n_ext

    edges = []
    for item in edgepart.split():
        s, t = item.split("->")
        edges.append((untok(s), untok(t)))
    legs = []
    for item in legpart.split():
        s, _ = item.split("->")
        legs.append(untok(s))
    return DirectedGraph(nv, tuple(edges), tuple(sorted(legs)), n_ext)


# ---------------------------------------------------------------------------
# canonical forms


@dataclass(frozen=True)
class CanonicalClass:
    """Canonical representative of an isomorphism class.

    zero is True iff some automorphism acts with sign -1 under the active
    convention, making the class the zero vector of the complex.
    """

    repr: DirectedGraph
    zero: bool
    key: str


def _edge_sort_parity(edges):
    """Parity of the stable sort of the edge list; None on duplicates."""
    idx = sorted(range(len(edges)), key=lambda i: (edges[i], i))
    for a, b in zip(idx, idx[1:]):
        if edges[a] == edges[b]:
            return None
    seen = [False] * len(idx)
    parity = 0
    for i in range(len(idx)):
        if seen[i]:
            continue
        j, clen = i, 0
        while not seen[j]:
            seen[j] = True
            j = idx[j]
            clen += 1
        parity ^= (clen - 1) & 1
    return parity


def _perm_parity(perm):
    """Parity of a permutation given as a 1-based image list."""
    n = len(perm) - 1
    seen = [False] * (n + 1)
    parity = 0
    for v in range(1, n + 1):
        if seen[v]:
            continue
        j, clen = v, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            clen += 1
        parity ^= (clen - 1) & 1
    return parity


class _CanonSearch:
    """Backtracking search for the minimal labelled representative.

    Finds every relabelling attaining the lexicographically minimal sequence
    of adjacency rows; these form a coset of the automorphism group, which is
    what the odd-symmetry detection needs.  Isolated internal vertices are
    interchangeable and are appended at the end without search.
    """

    def __init__(self, g: DirectedGraph, directed: bool):
        self.g = g
        self.directed = directed
        self.nv = g.nv
        self.n_ext = g.n_ext
        out = {}
        und = {}
        loops = [0] * (g.nv + 1)
        for s, t in g.edges:
            if s == t:
                loops[s] += 1
                continue
            out[(s, t)] = out.get((s, t), 0) + 1
            k = (s, t) if s < t else (t, s)
            und[k] = und.get(k, 0) + 1
        self.out = out
        self.und = und
        self.loops = loops
        self.nlegs = g.leg_counts()
        nbr = {v: set() for v in range(1, g.nv + 1)}
        for (s, t) in und:
            nbr[s].add(t)
            nbr[t].add(s)
        self.nbr = nbr

    def _mult(self, u, w):
        if self.directed:
            return (self.out.get((u, w), 0), self.out.get((w, u), 0))
        k = (u, w) if u < w else (w, u)
        return (self.und.get(k, 0),)

    def _refine(self):
        colors = {
            v: ("ext", v) if v <= self.n_ext else ("int", 0)
            for v in range(1, self.nv + 1)
        }
        ncolors = len(set(colors.values()))
        while True:
            sigs = {}
            for v in range(1, self.nv + 1):
                around = tuple(sorted(
                    (colors[w],) + self._mult(v, w) for w in self.nbr[v]
                ))
                sigs[v] = (colors[v], self.loops[v], self.nlegs[v], around)
            ordered = {s: i for i, s in enumerate(sorted(set(sigs.values())))}
            colors = {
                v: ("ext", v) if v <= self.n_ext else ("int", ordered[sigs[v]])
                for v in range(1, self.nv + 1)
            }
            n2 = len(set(colors.values()))
            if n2 == ncolors:
                return colors
            ncolors = n2

    def run(self):
        colors = self._refine()
        isolated = [
            v for v in range(self.n_ext + 1, self.nv + 1)
            if not self.nbr[v] and not self.loops[v] and not self.nlegs[v]
        ]
        isoset = set(isolated)
        cells = {}
        for v in range(self.n_ext + 1, self.nv + 1):
            if v not in isoset:
                cells.setdefault(colors[v], []).append(v)
        self.cell_order = [cells[c] for c in sorted(cells)]
        self.best_rows = None
        self.achievers = []
        order = [0] * (self.nv + 1)
        for v in range(1, self.n_ext + 1):
            order[v] = v
        self._assign(0, order, [])

        base = self.n_ext + (self.nv - self.n_ext - len(isolated))
        labelings = []
        for sigma in self.achievers:
            lab = list(sigma)
            for k, v in enumerate(isolated):
                lab[v] = base + k + 1
            labelings.append(tuple(lab))
        return labelings, len(isolated)

    def _assign(self, depth, order, rows):
        total = sum(len(c) for c in self.cell_order)
        if depth == total:
            if self.best_rows is None or rows < self.best_rows:
                self.best_rows = list(rows)
                self.achievers = [tuple(order)]
            elif rows == self.best_rows:
                self.achievers.append(tuple(order))
            return
        ci, off = 0, depth
        while off >= len(self.cell_order[ci]):
            off -= len(self.cell_order[ci])
            ci += 1
        cell = self.cell_order[ci]
        pos = self.n_ext + depth + 1
        best = self.best_rows
        prefix_eq = best is not None and rows == best[:depth]
        for v in cell:
            if order[v]:
                continue
            row = self._row(v, order, pos)
            if prefix_eq and row > best[depth]:
                continue
            order[v] = pos
            rows.append(row)
            self._assign(depth + 1, order, rows)
            rows.pop()
            order[v] = 0
            if self.best_rows is not best:
                best = self.best_rows
                prefix_eq = best is not None and rows == best[:depth]

    def _row(self, v, order, pos):
        entries = []
        for w in self.nbr[v]:
            j = order[w]
            if j and j < pos:
                entries.append((j,) + self._mult(v, w))
        entries.sort()
        return (self.loops[v], self.nlegs[v], tuple(entries))


def _flip_sign(parity: int, flip_rule: str) -> int:
    if flip_rule == "even_free":
        return 1 if parity == 0 else -1
    if flip_rule == "odd_free":
        return -1 if parity == 0 else 1
    raise ValueError(f"unknown flip rule {flip_rule!r}")


_canon_cache: dict = {}


def clear_caches():
    _canon_cache.clear()


def canonicalize(g: DirectedGraph, parity: int, directed_mode: bool,
                 flip_rule: str | None = None):
    """Canonical representative with relating sign and odd-symmetry flag.

    Returns (CanonicalClass, sign); sign relates the input labelled graph to
    the canonical representative.  With directed_mode=False edge directions
    are quotiented (with the flip sign of the convention); with
    directed_mode=True they are structural.
    """
    if flip_rule is None:
        flip_rule = convention.FLIP_RULE
    ckey = (g, parity, directed_mode, flip_rule)
    hit = _canon_cache.get(ckey)
    if hit is not None:
        return hit

    labelings, n_isolated = _CanonSearch(g, directed_mode).run()

    fsign = _flip_sign(parity, flip_rule)
    has_loop = any(s == t for s, t in g.edges)

    def transform(lab):
        edges = []
        flips = 0
        for s, t in g.edges:
            a, b = lab[s], lab[t]
            if not directed_mode and a > b:
                a, b = b, a
                flips += 1
            edges.append((a, b))
        return edges, flips

    def conv_sign(lab, edges, flips):
        if parity == 0:
            ep = _edge_sort_parity(edges)
            if ep is None:
                return None  # duplicate edges: zero for n even
            s = 1 if ep == 0 else -1
        else:
            s = -1 if _perm_parity(lab) else 1
        if not directed_mode:
            s *= fsign if flips & 1 else 1
        return s

    zero = False
    if not directed_mode and has_loop and fsign == -1:
        zero = True
    if parity == 1 and n_isolated >= 2:
        zero = True  # swapping two isolated vertices is odd

    best_lab = min(labelings)
    edges0, flips0 = transform(best_lab)
    sign0 = conv_sign(best_lab, edges0, flips0)
    if sign0 is None:
        zero = True
        sign0 = 1
    if not zero:
        for lab in labelings:
            if lab == best_lab:
                continue
            e, f = transform(lab)
            s = conv_sign(lab, e, f)
            if s is None or s != sign0:
                zero = True
                break

    cedges = tuple(sorted(edges0))
    clegs = tuple(sorted(best_lab[s] for s in g.legs))
    cg = DirectedGraph(g.nv, cedges, clegs, g.n_ext)
    cls = CanonicalClass(cg, zero, encode(cg))
    result = (cls, sign0)
    if len(_canon_cache) > 1 << 20:
        _canon_cache.clear()
    _canon_cache[ckey] = result
    return result


def canonicalize_in(g: DirectedGraph, spec: ComplexSpec):
    """Canonicalize under the group action of the given flavor."""
    return canonicalize(g, spec.parity, spec.directed)
