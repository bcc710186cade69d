"""Small exact helpers for convex polygons in the rate quadrant."""

from __future__ import annotations

import math


def clip_halfplane(vertices, a: float, b: float, c: float, eps: float = 1e-12):
    """Sutherland-Hodgman clip of a convex polygon against a*x + b*y <= c."""
    if not vertices:
        return []
    out = []
    n = len(vertices)
    for i in range(n):
        px, py = vertices[i]
        qx, qy = vertices[(i + 1) % n]
        p_in = a * px + b * py <= c + eps
        q_in = a * qx + b * qy <= c + eps
        if p_in:
            out.append((px, py))
        if p_in != q_in:
            denom = a * (qx - px) + b * (qy - py)
            if abs(denom) > 0:
                t = (c - a * px - b * py) / denom
                t = min(max(t, 0.0), 1.0)
                out.append((px + t * (qx - px), py + t * (qy - py)))
    return _dedupe(out)


def polygon_from_halfplanes(halfplanes, bound: float = 16.0):
    """Intersect a*x + b*y <= c constraints with the [0, bound]^2 box.

    The box keeps every region bounded; callers pick ``bound`` beyond any
    meaningful rate.  Vertices come back counterclockwise.
    """
    verts = [(0.0, 0.0), (bound, 0.0), (bound, bound), (0.0, bound)]
    for a, b, c in halfplanes:
        verts = clip_halfplane(verts, a, b, c)
        if not verts:
            return []
    return verts


def _dedupe(vertices, tol: float = 1e-12):
    out = []
    for v in vertices:
        if not out or (abs(v[0] - out[-1][0]) > tol or abs(v[1] - out[-1][1]) > tol):
            out.append(v)
    if len(out) > 1 and (abs(out[0][0] - out[-1][0]) <= tol
                         and abs(out[0][1] - out[-1][1]) <= tol):
        out.pop()
    return out


def convex_hull(points):
    """Andrew monotone chain; returns counterclockwise vertices."""
    pts = sorted(set((float(x), float(y)) for x, y in points))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def contains(vertices, point, tol: float = 1e-9) -> bool:
    """Point-in-convex-polygon test for counterclockwise vertices."""
    n = len(vertices)
    if n == 0:
        return False
    if n == 1:
        return (abs(point[0] - vertices[0][0]) <= tol
                and abs(point[1] - vertices[0][1]) <= tol)
    x, y = point
    for i in range(n):
        px, py = vertices[i]
        qx, qy = vertices[(i + 1) % n]
        if (qx - px) * (y - py) - (qy - py) * (x - px) < -tol:
            return False
    return True


def polygon_area(vertices) -> float:
    n = len(vertices)
    if n < 3:
        return 0.0
    s = 0.0
    for i in range(n):
        x0, y0 = vertices[i]
        x1, y1 = vertices[(i + 1) % n]
        s += x0 * y1 - x1 * y0
    return abs(s) / 2.0


def is_convex_ccw(vertices, tol: float = 1e-9) -> bool:
    n = len(vertices)
    if n < 3:
        return True
    for i in range(n):
        ox, oy = vertices[i]
        ax, ay = vertices[(i + 1) % n]
        bx, by = vertices[(i + 2) % n]
        if (ax - ox) * (by - oy) - (ay - oy) * (bx - ox) < -tol:
            return False
    return True


def segment_point(p, q, t: float):
    return (p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1]))


def finite(vertices) -> bool:
    return all(math.isfinite(x) and math.isfinite(y) for x, y in vertices)
