"""Constrained Delaunay triangulation with Delaunay refinement.

Incremental Bowyer-Watson insertion inside a bounding super-triangle.  Input
segments are recovered by midpoint splitting and then act as constraints:
insertion cavities never cross them.  Refinement follows Ruppert: encroached
subsegments (a vertex strictly inside the diametral circle) are split at
their midpoints first; a triangle that is skinny or larger than the local
size field gets its circumcentre inserted, unless that point encroaches a
subsegment or lies beyond one, in which case the subsegment is split instead.

Everything is deterministic: vertices, segments and triangles are processed
in FIFO order with no randomisation.
"""

from __future__ import annotations

import math
from collections import deque

from ..errors import MeshError
from .predicates import incircle, orient2d


def _key(a, b):
    return (a, b) if a < b else (b, a)


class ConstrainedTriangulation:
    """Mutable triangulation state.  Vertices 0, 1, 2 form the super-triangle."""

    def __init__(self, xmin, xmax, ymin, ymax):
        cx = 0.5 * (xmin + xmax)
        cy = 0.5 * (ymin + ymax)
        span = max(xmax - xmin, ymax - ymin)
        self.xs = [cx - 40.0 * span, cx + 40.0 * span, cx]
        self.ys = [cy - 30.0 * span, cy - 30.0 * span, cy + 40.0 * span]
        self.vtri = [0, 0, 0]
        self.tv = [[0, 1, 2]]
        self.tn = [[-1, -1, -1]]
        self.alive = [True]
        self.n_alive = 1
        self.segments = {}
        self.last = 0

    # -- elementary queries --------------------------------------------------

    def orient(self, a, b, x, y):
        xs, ys = self.xs, self.ys
        return orient2d(xs[a], ys[a], xs[b], ys[b], x, y)

    def in_circumcircle(self, t, x, y):
        a, b, c = self.tv[t]
        xs, ys = self.xs, self.ys
        return incircle(xs[a], ys[a], xs[b], ys[b], xs[c], ys[c], x, y) > 0

    def is_super(self, v):
        return v < 3

    def locate(self, x, y, start=None):
        """Visibility walk ignoring constraints; returns a triangle whose
        closure contains (x, y)."""
        t = self.last if start is None else start
        if not self.alive[t]:
            t = self.last
        tv, tn = self.tv, self.tn
        limit = 4 * self.n_alive + 16
        for step in range(limit):
            v = tv[t]
            for k in range(3):
                i = (k + step) % 3
                if self.orient(v[(i + 1) % 3], v[(i + 2) % 3], x, y) < 0:
                    nxt = tn[t][i]
                    if nxt < 0:
                        raise MeshError(f"point ({x}, {y}) outside the super-triangle")
                    t = nxt
                    break
            else:
                return t
        return self._locate_exhaustive(x, y)

    def _locate_exhaustive(self, x, y):
        for t, ok in enumerate(self.alive):
            if not ok:
                continue
            a, b, c = self.tv[t]
            if (self.orient(a, b, x, y) >= 0 and self.orient(b, c, x, y) >= 0
                    and self.orient(c, a, x, y) >= 0):
                return t
        raise MeshError(f"point ({x}, {y}) could not be located")

    def find_edge(self, a, b):
        """(t, i) with ``tv[t][i]`` opposite the edge {a, b}, or None."""
        start = self.vtri[a]
        seen = {start}
        stack = [start]
        tv, tn = self.tv, self.tn
        while stack:
            t = stack.pop()
            v = tv[t]
            if b in v:
                for i in range(3):
                    if v[i] != a and v[i] != b:
                        return t, i
            for i in range(3):
                if v[i] == a:
                    continue
                n = tn[t][i]
                if n >= 0 and n not in seen and a in tv[n]:
                    seen.add(n)
                    stack.append(n)
        return None

    def edge_apexes(self, t, i):
        """Apex vertices of the (up to two) triangles sharing edge i of t."""
        out = [self.tv[t][i]]
        n = self.tn[t][i]
        if n >= 0:
            a, b = self.tv[t][(i + 1) % 3], self.tv[t][(i + 2) % 3]
            for w in self.tv[n]:
                if w != a and w != b:
                    out.append(w)
        return out

    # -- insertion -----------------------------------------------------------

    def cavity(self, x, y, t0, split_key=None):
        """Triangles whose circumcircle strictly contains (x, y), connected to
        t0 without crossing a constraint.  Returns (cavity, boundary) with
        boundary a list of (t, i) edges."""
        tv, tn, segs = self.tv, self.tn, self.segments
        members = {t0}
        order = [t0]
        boundary = []
        stack = [t0]
        while stack:
            t = stack.pop()
            v = tv[t]
            for i in range(3):
                n = tn[t][i]
                key = _key(v[(i + 1) % 3], v[(i + 2) % 3])
                if n < 0 or (key in segs and key != split_key):
                    boundary.append((t, i))
                    continue
                if n in members:
                    continue
                if self.in_circumcircle(n, x, y):
                    members.add(n)
                    order.append(n)
                    stack.append(n)
                else:
                    boundary.append((t, i))
        return order, boundary

    def insert(self, x, y, cavity, boundary):
        """Replace ``cavity`` by the fan of triangles joining (x, y) to its
        boundary edges.  Returns (vertex id, new triangle ids)."""
        tv, tn = self.tv, self.tn
        xs, ys = self.xs, self.ys
        vid = len(xs)
        for t in cavity:
            for w in tv[t]:
                if xs[w] == x and ys[w] == y:
                    raise MeshError(f"duplicate vertex at ({x}, {y})")
        xs.append(x)
        ys.append(y)
        self.vtri.append(-1)
        cav = set(cavity)
        by_first = {}
        by_second = {}
        new = []
        for t, i in boundary:
            v = tv[t]
            a, b = v[(i + 1) % 3], v[(i + 2) % 3]
            if not self.orient(a, b, x, y) > 0:
                raise MeshError(f"cavity for ({x}, {y}) is not star-shaped")
            outside = tn[t][i]
            nt = len(tv)
            tv.append([a, b, vid])
            tn.append([-1, -1, outside])
            self.alive.append(True)
            if outside >= 0:
                on = tn[outside]
                for j in range(3):
                    if on[j] == t:
                        on[j] = nt
                        break
            if a in by_first or b in by_second:
                raise MeshError(f"cavity boundary for ({x}, {y}) is not a simple cycle")
            by_first[a] = nt
            by_second[b] = nt
            new.append(nt)
        for nt in new:
            a, b, _ = tv[nt]
            tn[nt][0] = by_first[b]
            tn[nt][1] = by_second[a]
            for w in (a, b):
                self.vtri[w] = nt
        self.vtri[vid] = new[0]
        for t in cav:
            self.alive[t] = False
        self.n_alive += len(new) - len(cav)
        self.last = new[0]
        return vid, new

    def insert_point(self, x, y, start=None):
        t0 = self.locate(x, y, start)
        cav, bnd = self.cavity(x, y, t0)
        return self.insert(x, y, cav, bnd)

    def split_segment(self, key):
        """Insert the midpoint of subsegment ``key``; returns (vid, new tris)."""
        a, b = key
        tag = self.segments[key]
        x = 0.5 * (self.xs[a] + self.xs[b])
        y = 0.5 * (self.ys[a] + self.ys[b])
        loc = self.find_edge(a, b)
        if loc is not None:
            cav, bnd = self.cavity(x, y, loc[0], split_key=key)
        else:
            t0 = self.locate(x, y, self.vtri[a])
            cav, bnd = self.cavity(x, y, t0)
        vid, new = self.insert(x, y, cav, bnd)
        del self.segments[key]
        self.segments[_key(a, vid)] = tag
        self.segments[_key(vid, b)] = tag
        return vid, new

    def encroached(self, key):
        """True if the subsegment is missing or a neighbouring apex lies
        strictly inside its diametral circle."""
        a, b = key
        loc = self.find_edge(a, b)
        if loc is None:
            return True
        xs, ys = self.xs, self.ys
        for w in self.edge_apexes(*loc):
            if self.is_super(w):
                continue
            if (xs[w] - xs[a]) * (xs[w] - xs[b]) + (ys[w] - ys[a]) * (ys[w] - ys[b]) < 0:
                return True
        return False

    def point_encroaches(self, key, x, y):
        a, b = key
        xs, ys = self.xs, self.ys
        return (x - xs[a]) * (x - xs[b]) + (y - ys[a]) * (y - ys[b]) < 0

    def walk_to(self, t, x, y):
        """Straight walk from the centroid of t toward (x, y).

        Returns ('found', t'), ('blocked', segment key) or ('outside', None).
        """
        tv, tn, segs = self.tv, self.tn, self.segments
        xs, ys = self.xs, self.ys
        a, b, c = tv[t]
        ox = (xs[a] + xs[b] + xs[c]) / 3.0
        oy = (ys[a] + ys[b] + ys[c]) / 3.0
        prev = -1
        for _ in range(4 * self.n_alive + 16):
            v = tv[t]
            exit_i = None
            fallback = None
            for i in range(3):
                p, q = v[(i + 1) % 3], v[(i + 2) % 3]
                if self.orient(p, q, x, y) >= 0 or tn[t][i] == prev and prev >= 0:
                    continue
                if fallback is None:
                    fallback = i
                sp = orient2d(ox, oy, x, y, xs[p], ys[p])
                sq = orient2d(ox, oy, x, y, xs[q], ys[q])
                if (sp >= 0 >= sq) or (sp <= 0 <= sq):
                    exit_i = i
                    break
            if exit_i is None:
                exit_i = fallback
            if exit_i is None:
                return "found", t
            p, q = v[(exit_i + 1) % 3], v[(exit_i + 2) % 3]
            key = _key(p, q)
            if key in segs:
                return "blocked", key
            nxt = tn[t][exit_i]
            if nxt < 0:
                return "outside", None
            prev, t = t, nxt
        return "found", self.locate(x, y, t)

    def circumcenter(self, t):
        a, b, c = self.tv[t]
        xs, ys = self.xs, self.ys
        ax, ay = xs[a], ys[a]
        bx, by = xs[b] - ax, ys[b] - ay
        cx, cy = xs[c] - ax, ys[c] - ay
        d = 2.0 * (bx * cy - by * cx)
        b2 = bx * bx + by * by
        c2 = cx * cx + cy * cy
        return ax + (cy * b2 - by * c2) / d, ay + (bx * c2 - cx * b2) / d


class Refiner:
    """Ruppert refinement of a ConstrainedTriangulation.

    ``in_domain(x, y)`` classifies triangle centroids; ``size(x, y)`` is the
    target edge length.  A triangle is refined when its smallest angle is
    below ``min_angle`` degrees or its longest edge exceeds the local size.
    """

    def __init__(self, cdt, in_domain, size, min_angle, max_triangles):
        self.cdt = cdt
        self.in_domain = in_domain
        self.size = size
        self.cos_min = math.cos(math.radians(min_angle))
        self.max_triangles = max_triangles
        self.seg_queue = deque()
        self.tri_queue = deque()
        self._domain_cache = {}
        self.splits = 0
        self.insertions = 0

    def _check_budget(self):
        if self.cdt.n_alive > self.max_triangles:
            raise MeshError(
                f"refinement exceeded the triangle budget of {self.max_triangles} "
                f"({self.cdt.n_alive} triangles, {len(self.cdt.xs) - 3} vertices, "
                f"{self.splits} segment splits, {self.insertions} circumcentres)")

    def triangle_in_domain(self, t):
        hit = self._domain_cache.get(t)
        if hit is None:
            cdt = self.cdt
            v = cdt.tv[t]
            if v[0] < 3 or v[1] < 3 or v[2] < 3:
                hit = False
            else:
                x = (cdt.xs[v[0]] + cdt.xs[v[1]] + cdt.xs[v[2]]) / 3.0
                y = (cdt.ys[v[0]] + cdt.ys[v[1]] + cdt.ys[v[2]]) / 3.0
                hit = bool(self.in_domain(x, y))
            self._domain_cache[t] = hit
        return hit

    def is_bad(self, t):
        cdt = self.cdt
        a, b, c = cdt.tv[t]
        xs, ys = cdt.xs, cdt.ys
        la = (xs[b] - xs[c]) ** 2 + (ys[b] - ys[c]) ** 2
        lb = (xs[c] - xs[a]) ** 2 + (ys[c] - ys[a]) ** 2
        lc = (xs[a] - xs[b]) ** 2 + (ys[a] - ys[b]) ** 2
        s = sorted((la, lb, lc))
        # cosine of the smallest angle, opposite the shortest edge
        cos_small = (s[1] + s[2] - s[0]) / (2.0 * math.sqrt(s[1] * s[2]))
        if cos_small > self.cos_min:
            return True
        h = self.size((xs[a] + xs[b] + xs[c]) / 3.0, (ys[a] + ys[b] + ys[c]) / 3.0)
        return s[2] > h * h

    def _after_insert(self, vid, new):
        cdt = self.cdt
        segs = cdt.segments
        for nt in new:
            a, b, _ = cdt.tv[nt]
            key = _key(a, b)
            if key in segs and cdt.point_encroaches(key, cdt.xs[vid], cdt.ys[vid]):
                self.seg_queue.append(key)
            self.tri_queue.append(nt)
        self._check_budget()

    def split(self, key):
        vid, new = self.cdt.split_segment(key)
        self.splits += 1
        a, b = key
        self.seg_queue.append(_key(a, vid))
        self.seg_queue.append(_key(vid, b))
        self._after_insert(vid, new)

    def drain_segments(self):
        cdt = self.cdt
        while self.seg_queue:
            key = self.seg_queue.popleft()
            if key in cdt.segments and cdt.encroached(key):
                self.split(key)

    def run(self):
        cdt = self.cdt
        self.seg_queue.extend(sorted(cdt.segments))
        self.drain_segments()
        self.tri_queue.extend(t for t, ok in enumerate(cdt.alive) if ok)
        while self.tri_queue:
            t = self.tri_queue.popleft()
            if not cdt.alive[t] or not self.triangle_in_domain(t) or not self.is_bad(t):
                continue
            x, y = cdt.circumcenter(t)
            status, where = cdt.walk_to(t, x, y)
            if status == "blocked":
                self.split(where)
            elif status == "outside":
                raise MeshError(f"circumcentre ({x}, {y}) left the triangulation")
            else:
                cav, bnd = cdt.cavity(x, y, where)
                encroached = []
                for tb, i in bnd:
                    v = cdt.tv[tb]
                    key = _key(v[(i + 1) % 3], v[(i + 2) % 3])
                    if key in cdt.segments and key not in encroached \
                            and cdt.point_encroaches(key, x, y):
                        encroached.append(key)
                if encroached:
                    for key in encroached:
                        if key in cdt.segments:
                            self.split(key)
                else:
                    vid, new = cdt.insert(x, y, cav, bnd)
                    self.insertions += 1
                    self._after_insert(vid, new)
            self.drain_segments()
            if cdt.alive[t]:
                self.tri_queue.append(t)
