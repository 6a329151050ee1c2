"""OFF export of a 3-D Newton polyhedron clipped to the cube ``[0, clip]^3``.

``conv(V + R_+^3) ∩ [0, c]^3`` equals the convex hull of every vertex with
any subset of its coordinates raised to ``c`` (valid once ``c`` exceeds all
vertex coordinates). The hull is computed exactly with integer arithmetic;
coplanar facets are merged into single polygons.
"""

from __future__ import annotations

from itertools import combinations, product

from .errors import ValidationError
from .newton import NewtonPolyhedron


def _sub(a, b):
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def _cross(a, b):
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def _dot(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def _primitive(v):
    from math import gcd
    g = gcd(gcd(abs(v[0]), abs(v[1])), abs(v[2]))
    return tuple(x // g for x in v)


def _facets(points):
    """Outward facet planes ``(normal, offset)`` with ``normal·x <= offset``."""
    planes = set()
    for a, b, c in combinations(points, 3):
        n = _cross(_sub(b, a), _sub(c, a))
        if n == (0, 0, 0):
            continue
        n = _primitive(n)
        off = _dot(n, a)
        side = [_dot(n, p) - off for p in points]
        if all(s <= 0 for s in side):
            planes.add((n, off))
        elif all(s >= 0 for s in side):
            planes.add((tuple(-x for x in n), -off))
    return sorted(planes)


def _polygon(normal, pts):
    """Order coplanar points counterclockwise seen from outside; drop
    non-corner points."""
    # 2-D convex hull (monotone chain) in a projection that keeps orientation
    axis = max(range(3), key=lambda k: abs(normal[k]))
    keep = [k for k in range(3) if k != axis]
    flip = normal[axis] < 0
    if axis == 1:
        flip = not flip

    def proj(p):
        u, v = p[keep[0]], p[keep[1]]
        return (u, -v) if flip else (u, v)

    def turn(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    ordered = sorted(set(pts), key=proj)
    lower, upper = [], []
    for p in ordered:
        while len(lower) >= 2 and turn(proj(lower[-2]), proj(lower[-1]), proj(p)) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(ordered):
        while len(upper) >= 2 and turn(proj(upper[-2]), proj(upper[-1]), proj(p)) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def clipped_mesh(N: NewtonPolyhedron, clip: int):
    """Vertices and faces (index lists) of the clipped polyhedron, plus
    the clip plane (if any) each face lies on."""
    if N.dim != 3:
        raise ValidationError(f"OFF export supports dimension 3 only, got {N.dim}")
    if isinstance(clip, bool) or not isinstance(clip, int) or clip < 1:
        raise ValidationError("clip must be a positive integer")
    top = max((max(v) for v in N.vertices), default=0)
    if clip <= top:
        raise ValidationError(f"clip {clip} must exceed the largest vertex coordinate {top}")
    cloud = set()
    for v in N.vertices:
        for mask in product((False, True), repeat=3):
            cloud.add(tuple(clip if m else x for x, m in zip(v, mask)))
    cloud = sorted(cloud)
    faces = []
    corners = set()
    for normal, off in _facets(cloud):
        on = [p for p in cloud if _dot(normal, p) == off]
        poly = _polygon(normal, on)
        corners.update(poly)
        faces.append((normal, off, poly))
    verts = sorted(corners)
    index = {p: i for i, p in enumerate(verts)}
    out = []
    for normal, off, poly in faces:
        # rotate so the smallest index comes first; deterministic output
        ids = [index[p] for p in poly]
        k = ids.index(min(ids))
        ids = ids[k:] + ids[:k]
        tag = None
        for axis in range(3):
            unit = tuple(int(j == axis) for j in range(3))
            if normal == unit and off == clip:
                tag = f"x{axis + 1}={clip}"
        out.append((ids, tag))
    out.sort(key=lambda f: f[0])
    return verts, out


def export_off(N: NewtonPolyhedron, clip: int) -> str:
    verts, faces = clipped_mesh(N, clip)
    lines = ["OFF"]
    lines.append(f"# Newton polyhedron clipped to [0,{clip}]^3")
    for i, (_, tag) in enumerate(faces):
        if tag:
            lines.append(f"# clip face {i} on plane {tag}")
    lines.append(f"{len(verts)} {len(faces)} 0")
    lines.extend(" ".join(str(c) for c in v) for v in verts)
    lines.extend(" ".join([str(len(ids))] + [str(i) for i in ids]) for ids, _ in faces)
    return "\n".join(lines) + "\n"


def parse_off(text: str):
    """Read back vertices and faces from OFF text (comments skipped)."""
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not rows or rows[0] != ["OFF"]:
        raise ValidationError("missing OFF header")
    nv, nf, _ = (int(x) for x in rows[1])
    verts = [tuple(int(x) for x in r) for r in rows[2:2 + nv]]
    faces = [[int(x) for x in r[1:]] for r in rows[2 + nv:2 + nv + nf]]
    return verts, faces
