"""Valued stable translation quivers on finite windows.

Everything here is radius-bounded: infinite quivers enter as finite
truncations whose rim is marked ``boundary``, and every structural check
asserts only at interior vertices while reporting what it skipped.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .errors import InputError

Value = tuple[int, int]


class TranslationQuiver:
    """A valued quiver with a partial translation tau.

    Vertices carry optional text labels and optional rational weights.
    Boundary vertices are those whose neighbourhood may be clipped by the
    window; validators skip them.  Loops are stored as vertex flags rather
    than arrows, matching the convention of removing loops before applying
    tree-class machinery.
    """

    __slots__ = ("labels", "weights", "arrows", "tau", "boundary", "loops")

    def __init__(self) -> None:
        self.labels: dict = {}
        self.weights: dict = {}
        self.arrows: dict = {}
        self.tau: dict = {}
        self.boundary: set = set()
        self.loops: set = set()

    def add_vertex(self, v, label: str | None = None, weight=None,
                   boundary: bool = False) -> None:
        if v in self.labels:
            raise InputError("vertex %r already present" % (v,))
        self.labels[v] = label if label is not None else str(v)
        if weight is not None:
            self.weights[v] = Fraction(weight)
        if boundary:
            self.boundary.add(v)

    def add_arrow(self, src, dst, value: Value = (1, 1)) -> None:
        if src not in self.labels or dst not in self.labels:
            raise InputError("arrow endpoints must be vertices")
        if src == dst:
            self.loops.add(src)
            return
        if (src, dst) in self.arrows:
            raise InputError("multiple arrow %r -> %r" % (src, dst))
        a, b = value
        if a < 1 or b < 1:
            raise InputError("arrow values must be positive")
        self.arrows[(src, dst)] = (int(a), int(b))

    def set_tau(self, v, w) -> None:
        if v not in self.labels or w not in self.labels:
            raise InputError("tau endpoints must be vertices")
        self.tau[v] = w

    def flag_loop(self, v) -> None:
        self.loops.add(v)

    def successors(self, v) -> list:
        return [d for (s, d) in self.arrows if s == v]

    def predecessors(self, v) -> list:
        return [s for (s, d) in self.arrows if d == v]

    def neighbors(self, v) -> set:
        return set(self.successors(v)) | set(self.predecessors(v))

    def is_interior(self, v) -> bool:
        return v not in self.boundary

    def vertex_ids(self) -> list:
        return sorted(self.labels, key=lambda v: (str(type(v)), str(v)))


def validate(q: TranslationQuiver) -> list[str]:
    """Check the stable-translation-quiver axioms; an empty list is a pass.

    Reported violations: "loop" for an arrow with equal endpoints, "mesh"
    when x's in-neighbours differ from tau(x)'s out-neighbours, and
    "valuation" when v(x -> y) = (a, b) but v(tau y -> x) != (b, a).
    Checks involving a boundary vertex are skipped, not failed.
    """
    out: list[str] = []
    for (s, d) in sorted(q.arrows, key=lambda e: (str(e[0]), str(e[1]))):
        if s == d:
            out.append("loop at %s" % q.labels[s])
    for x, tx in sorted(q.tau.items(), key=lambda kv: str(kv[0])):
        if not (q.is_interior(x) and q.is_interior(tx)):
            continue
        left = set(q.predecessors(x))
        right = set(q.successors(tx))
        if left != right:
            out.append("mesh at %s: x- is %s but tau(x)+ is %s"
                       % (q.labels[x], sorted(map(str, left)),
                          sorted(map(str, right))))
    for (x, y), (a, b) in sorted(q.arrows.items(),
                                 key=lambda kv: (str(kv[0][0]), str(kv[0][1]))):
        ty = q.tau.get(y)
        if ty is None or not (q.is_interior(y) and q.is_interior(x)):
            continue
        back = q.arrows.get((ty, x))
        if back is None:
            if q.is_interior(ty):
                out.append("valuation: missing arrow %s -> %s"
                           % (q.labels[ty], q.labels[x]))
        elif back != (b, a):
            out.append("valuation: v(%s -> %s) = %s, expected %s"
                       % (q.labels[ty], q.labels[x], back, (b, a)))
    return out


class DirectedTree:
    """Finite directed tree with valued arrows and at most one parent each."""

    __slots__ = ("vertices", "arrows", "boundary")

    def __init__(self) -> None:
        self.vertices: list = []
        self.arrows: dict = {}
        self.boundary: set = set()

    def add_vertex(self, v, boundary: bool = False) -> None:
        if v in self.vertices:
            raise InputError("vertex %r already present" % (v,))
        self.vertices.append(v)
        if boundary:
            self.boundary.add(v)

    def add_arrow(self, src, dst, value: Value = (1, 1)) -> None:
        if src not in self.vertices or dst not in self.vertices:
            raise InputError("arrow endpoints must be vertices")
        if src == dst:
            raise InputError("trees have no loops")
        self.arrows[(src, dst)] = (int(value[0]), int(value[1]))

    def parents(self, v) -> list:
        return [s for (s, d) in self.arrows if d == v]

    def children(self, v) -> list:
        return [d for (s, d) in self.arrows if s == v]

    def validate(self) -> list[str]:
        out = []
        for v in self.vertices:
            if len(self.parents(v)) > 1:
                out.append("vertex %s has several parents" % (v,))
        # tree shape: connected with exactly |V| - 1 edges
        if self.vertices:
            seen = {self.vertices[0]}
            frontier = [self.vertices[0]]
            while frontier:
                v = frontier.pop()
                for w in self.children(v) + self.parents(v):
                    if w not in seen:
                        seen.add(w)
                        frontier.append(w)
            if len(seen) != len(self.vertices):
                out.append("underlying graph is disconnected")
            if len(self.arrows) != len(self.vertices) - 1:
                out.append("underlying graph has a cycle")
        return out

    def degree_signature(self) -> tuple:
        """Sorted multiset of undirected degrees; separates small trees."""
        degs = sorted(len(self.parents(v)) + len(self.children(v))
                      for v in self.vertices)
        return tuple(degs)


def a_ray(k: int, truncated: bool = True) -> DirectedTree:
    """Directed path x1 -> x2 -> ... -> xk with all values (1, 1).

    With ``truncated`` the far end xk is marked boundary, so the tree reads
    as a window on the infinite ray.
    """
    t = DirectedTree()
    for i in range(1, k + 1):
        t.add_vertex("x%d" % i, boundary=(truncated and i == k))
    for i in range(1, k):
        t.add_arrow("x%d" % i, "x%d" % (i + 1))
    return t


def zt_build(tree: DirectedTree, n_range) -> TranslationQuiver:
    """The window of Z(tree) over the given translation indices.

    Vertices are pairs (n, x).  A tree arrow x -> y of value (a, b) yields
    (n, x) -> (n, y) with value (a, b) and (n, y) -> (n-1, x) with value
    (b, a); the translation is tau(n, x) = (n+1, x).  Vertices at the ends
    of the index window, or over boundary tree vertices, are boundary.
    """
    bad = tree.validate()
    if bad:
        raise InputError("not a directed tree: " + "; ".join(bad))
    ns = sorted(set(int(n) for n in n_range))
    if not ns:
        raise InputError("empty index window")
    q = TranslationQuiver()
    for n in ns:
        for x in tree.vertices:
            rim = n == ns[0] or n == ns[-1] or x in tree.boundary
            q.add_vertex((n, x), label="(%d,%s)" % (n, x), boundary=rim)
    for n in ns:
        for (x, y), (a, b) in tree.arrows.items():
            q.add_arrow((n, x), (n, y), (a, b))
            if n - 1 in ns:
                q.add_arrow((n, y), (n - 1, x), (b, a))
    for n in ns:
        if n + 1 in ns:
            for x in tree.vertices:
                q.set_tau((n, x), (n + 1, x))
    return q


def quotient_tau(q: TranslationQuiver, n: int) -> TranslationQuiver:
    """Quotient a zt_build window by the n-th power of the translation.

    Window vertices (m, x) are identified along m mod n.  Admissibility is
    checked first: no tau-power orbit may meet {v} together with v's
    out-neighbours in more than one point.  The projection of each window
    arrow must land on a single valued arrow, which makes the projection a
    covering on interior vertices.
    """
    if n < 1:
        raise InputError("quotient order must be at least 1")
    for v in q.labels:
        if not isinstance(v, tuple) or len(v) != 2:
            raise InputError("quotient expects a zt_build window")
    for (m, x) in q.labels:
        cls = {(m % n, x)}
        for w in q.successors((m, x)):
            key = (w[0] % n, w[1])
            if key in cls:
                raise InputError("not admissible")
            cls.add(key)
    out = TranslationQuiver()
    reps: dict = {}
    for (m, x) in q.labels:
        key = (m % n, x)
        if key not in reps:
            reps[key] = []
        reps[key].append((m, x))
    for key in sorted(reps, key=lambda t: (str(t[1]), t[0])):
        interior = any(q.is_interior(v) for v in reps[key])
        out.add_vertex(key, label="[%d,%s]" % key, boundary=not interior)
    for (s, d), val in q.arrows.items():
        ks, kd = (s[0] % n, s[1]), (d[0] % n, d[1])
        prior = out.arrows.get((ks, kd))
        if prior is None:
            out.add_arrow(ks, kd, val)
        elif prior != val:
            raise InputError("projection tears a valued arrow at %s -> %s"
                             % (ks, kd))
    for (r, x) in out.labels:
        out.set_tau((r, x), ((r + 1) % n, x))
    for v in q.loops:
        out.flag_loop((v[0] % n, v[1]))
    return out


def orbit_collapse(q: TranslationQuiver) -> TranslationQuiver:
    """Collapse every tau-orbit of a fragment to a single class vertex.

    Weights must agree across each orbit (the functions of interest, like
    the multiplicity average, are translation invariant; disagreement is
    an input error).  Arrows project to class arrows and must carry one
    value each; an arrow inside a class becomes a loop flag.  A class is
    interior only when all of its members are, and the translation fixes
    every class.
    """
    parent = {v: v for v in q.labels}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for v in sorted(q.tau, key=str):
        rv, rw = find(v), find(q.tau[v])
        if rv != rw:
            if str(rw) < str(rv):
                rv, rw = rw, rv
            parent[rw] = rv
    members: dict = {}
    for v in q.labels:
        members.setdefault(find(v), []).append(v)
    name = {root: min(ms, key=str) for root, ms in members.items()}

    out = TranslationQuiver()
    for root in sorted(members, key=str):
        ms = members[root]
        weights = {q.weights[v] for v in ms if v in q.weights}
        if len(weights) > 1:
            raise InputError(
                "weights differ along the orbit of %s" % name[root])
        out.add_vertex(name[root],
                       label=",".join(sorted(q.labels[v] for v in ms)),
                       weight=weights.pop() if weights else None,
                       boundary=any(not q.is_interior(v) for v in ms))
    for (s, d), val in sorted(q.arrows.items(), key=str):
        cs, cd = name[find(s)], name[find(d)]
        if cs == cd:
            out.flag_loop(cs)
            continue
        prior = out.arrows.get((cs, cd))
        if prior is None:
            out.add_arrow(cs, cd, val)
        elif prior != val:
            raise InputError("projection tears a valued arrow at %s -> %s"
                             % (cs, cd))
    for root in members:
        if any(v in q.tau for v in members[root]):
            out.set_tau(name[root], name[root])
    for v in q.loops:
        out.flag_loop(name[find(v)])
    return out


def tree_class(q: TranslationQuiver, basepoint, radius: int) -> DirectedTree:
    """Riedtmann tree at a basepoint: no-backtrack paths up to a radius.

    Path vertices are tuples (y0, ..., yk) following arrows of q, subject
    to y_i != tau(y_{i+2}); extension by one arrow is the tree arrow, and
    each tree arrow inherits the value of the quiver arrow it extends by.
    A path ending on a boundary vertex is marked boundary in the tree.
    """
    if basepoint not in q.labels:
        raise InputError("basepoint is not a vertex")
    t = DirectedTree()
    root = (basepoint,)
    t.add_vertex(root, boundary=not q.is_interior(basepoint))
    layer = [root]
    for _ in range(radius):
        nxt = []
        for path in layer:
            tip = path[-1]
            if not q.is_interior(tip):
                continue
            for step in sorted(q.successors(tip), key=str):
                if len(path) >= 2 and q.tau.get(step) == path[-2]:
                    continue
                ext = path + (step,)
                t.add_vertex(ext, boundary=not q.is_interior(step))
                t.add_arrow(path, ext, q.arrows[(tip, step)])
                nxt.append(ext)
        layer = nxt
    return t


def check_subadditive(g, f: dict | None = None) -> dict:
    """Test the mesh inequality for f at every interior vertex.

    On a TranslationQuiver the condition at x is
    f(x) + f(tau x) >= sum over arrows y -> x of a_yx f(y), with a loop
    at x adding f(x) to the right side; interior vertices without tau
    are skipped.  On a DirectedTree it is the classical undirected form
    2 f(x) >= sum of the neighbours' values.  f maps vertices to
    positive rationals and defaults to the quiver's stored weights.
    Returns status "additive", "strictly-subadditive" or "fails", the
    vertices checked, the vertices skipped, and a witness per failure.
    """
    tree = isinstance(g, DirectedTree)
    if tree:
        ids = list(g.vertices)
        interior = [v for v in ids if v not in g.boundary]
        if f is None:
            raise InputError("trees carry no weights; pass f")
    else:
        ids = list(g.labels)
        interior = [v for v in ids if g.is_interior(v)]
        if f is None:
            f = g.weights
    missing = [v for v in ids if v not in f]
    if missing:
        raise InputError("no value for vertex %r" % (missing[0],))
    values = {v: Fraction(f[v]) for v in ids}
    for v in ids:
        if values[v] <= 0:
            raise InputError("subadditive functions must be positive")
    checked, skipped, fails = [], [v for v in ids if v not in interior], {}
    tight = True
    for x in interior:
        if tree:
            lhs = 2 * values[x]
            rhs = sum(values[y] for y in g.parents(x) + g.children(x))
        else:
            tx = g.tau.get(x)
            if tx is None:
                skipped.append(x)
                continue
            lhs = values[x] + values[tx]
            rhs = sum(val[0] * values[y]
                      for (y, z), val in g.arrows.items() if z == x)
            if x in g.loops:
                rhs += values[x]
        checked.append(x)
        if lhs < rhs:
            fails[x] = (lhs, rhs)
        elif lhs > rhs:
            tight = False
    if fails:
        status = "fails"
    elif tight:
        status = "additive"
    else:
        status = "strictly-subadditive"
    return {"status": status,
            "checked": sorted(checked, key=str),
            "skipped": sorted(skipped, key=str),
            "failures": {str(k): (str(a), str(b)) for k, (a, b) in fails.items()}}


def classify_fragment(q: TranslationQuiver) -> str:
    """Name the shape of a finite fragment, conservatively.

    Returns "tube(r)" when every interior vertex lies on a tau-cycle of one
    common length r, interior valuations are all (1, 1), and the tau-orbit
    classes form a path rooted at a mouth orbit.  Returns
    "A-infinity-consistent" for the same ray picture without periodicity.
    A window too small to see structure is "inconclusive"; anything else
    is "other".  Consistency is all a window can certify: the two-summand
    certificate from the sequence engine is the actual tube proof route.
    """
    if validate(q):
        return "other"
    interior = [v for v in q.labels if q.is_interior(v)]
    if len(interior) < 2:
        return "inconclusive"
    for (s, d), val in q.arrows.items():
        if q.is_interior(s) and q.is_interior(d) and val != (1, 1):
            return "other"

    def cycle_len(v):
        seen = {v: 0}
        w, k = v, 0
        while w in q.tau:
            w = q.tau[w]
            k += 1
            if w == v:
                return k
            if w in seen:
                return None
            seen[w] = k
        return None

    lengths = {cycle_len(v) for v in interior}
    periodic = None not in lengths
    if periodic and len(lengths) != 1:
        return "other"

    # collapse tau-orbits and ask the class graph to be a ray
    parent = {v: v for v in q.labels}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for v in sorted(q.tau, key=str):
        rv, rw = find(v), find(q.tau[v])
        if rv != rw:
            if str(rw) < str(rv):
                rv, rw = rw, rv
            parent[rw] = rv
    orbit = {v: find(v) for v in q.labels}
    classes = sorted(set(orbit.values()), key=str)
    adj: dict = {c: set() for c in classes}
    for (s, d) in q.arrows:
        cs, cd = orbit[s], orbit[d]
        if cs != cd:
            adj[cs].add(cd)
            adj[cd].add(cs)
    inner = sorted({orbit[v] for v in interior}, key=str)
    if len(inner) < 2:
        return "inconclusive"
    degs = sorted(len(adj[c]) for c in classes)
    is_path = (degs.count(1) == 2 and all(d in (1, 2) for d in degs)
               and len(classes) >= 2)
    if not is_path:
        return "other"
    # a ray window has one mouth end and one clipped open end; a genuinely
    # finite path (both ends interior) is a different shape entirely
    members: dict = {c: [] for c in classes}
    for v, c in orbit.items():
        members[c].append(v)
    ends = [c for c in classes if len(adj[c]) == 1]
    open_ends = [c for c in ends
                 if all(not q.is_interior(v) for v in members[c])]
    mouths = [c for c in ends if any(q.is_interior(v) for v in members[c])]
    if len(open_ends) != 1 or len(mouths) != 1:
        return "other"
    if periodic:
        return "tube(%d)" % lengths.pop()
    return "A-infinity-consistent"


def to_dot(q: TranslationQuiver) -> str:
    """DOT text: solid valued arrows, dashed grey tau edges."""
    ids = q.vertex_ids()
    name = {v: "v%d" % i for i, v in enumerate(ids)}
    lines = ["digraph fragment {", "  rankdir=LR;"]
    for v in ids:
        style = ["label=\"%s\"" % q.labels[v]]
        if v in q.weights:
            style[0] = "label=\"%s\\n%s\"" % (q.labels[v], q.weights[v])
        if not q.is_interior(v):
            style.append("style=dotted")
        if v in q.loops:
            style.append("peripheries=2")
        lines.append("  %s [%s];" % (name[v], ", ".join(style)))
    for (s, d) in sorted(q.arrows, key=lambda e: (name[e[0]], name[e[1]])):
        a, b = q.arrows[(s, d)]
        lines.append("  %s -> %s [label=\"(%d,%d)\"];" % (name[s], name[d], a, b))
    for v in sorted(q.tau, key=lambda v: name[v]):
        lines.append("  %s -> %s [style=dashed, color=gray, constraint=false];"
                     % (name[v], name[q.tau[v]]))
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_json(q: TranslationQuiver) -> str:
    """Deterministic JSON adjacency dump of a fragment."""
    ids = q.vertex_ids()
    key = {v: str(v) for v in ids}
    doc = {
        "vertices": [{"id": key[v], "label": q.labels[v],
                      "boundary": not q.is_interior(v),
                      "loop": v in q.loops,
                      "weight": str(q.weights[v]) if v in q.weights else None}
                     for v in ids],
        "arrows": [{"src": key[s], "dst": key[d],
                    "value": list(q.arrows[(s, d)])}
                   for (s, d) in sorted(q.arrows,
                                        key=lambda e: (key[e[0]], key[e[1]]))],
        "tau": {key[v]: key[w] for v, w in sorted(q.tau.items(),
                                                  key=lambda kv: key[kv[0]])},
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"
