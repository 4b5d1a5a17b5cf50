#!/usr/bin/env python3
"""Coarse triangulation of the channel [0, 2.2] x [0, 0.41] minus the disk of
radius 0.05 centred at (0.2, 0.2), written as Gmsh MSH 2.2 ASCII with physical
lines inflow / outflow / walls / cylinder.

Points: the cylinder circle, graded rings around it, boundary points and a
hexagonal fill; connectivity from scipy's Delaunay triangulation with the
triangles inside the cylinder removed.
"""

import argparse
import math

import numpy as np
from scipy.spatial import Delaunay

L, H = 2.2, 0.41
XC, YC, R = 0.2, 0.2, 0.05


def size_at(x, y, h_far, h_near):
    d = math.hypot(x - XC, y - YC) - R
    return min(h_far, h_near + 0.25 * d)


def boundary_points(h_far, h_near, n_circle):
    pts = []
    for k in range(n_circle):
        a = 2 * math.pi * k / n_circle
        pts.append((XC + R * math.cos(a), YC + R * math.sin(a)))
    circle = list(range(n_circle))

    def segment(p, q):
        out = [p]
        x, y = p
        total = math.dist(p, q)
        s = 0.0
        while True:
            s += size_at(x, y, h_far, h_near)
            if s > total - 0.5 * size_at(*q, h_far, h_near):
                break
            t = s / total
            x, y = p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])
            out.append((x, y))
        return out

    corners = [(0.0, 0.0), (L, 0.0), (L, H), (0.0, H)]
    for i in range(4):
        pts.extend(segment(corners[i], corners[(i + 1) % 4]))
    return pts, circle


def interior_points(existing, h_far, h_near):
    candidates = []
    # graded rings around the cylinder
    r = R
    while True:
        r += size_at(XC + r, YC, h_far, h_near) * math.sqrt(3) / 2
        if r - R > 0.12 or r > YC - 0.01:
            break
        n = max(8, int(round(2 * math.pi * r / size_at(XC + r, YC, h_far, h_near))))
        off = 0.5 * (len(candidates) % 2)
        for k in range(n):
            a = 2 * math.pi * (k + off) / n
            candidates.append((XC + r * math.cos(a), YC + r * math.sin(a)))
    # hexagonal fill
    dy = h_far * math.sqrt(3) / 2
    y, j = dy, 0
    while y < H - 0.3 * h_far:
        x = (0.5 * h_far if j % 2 else 0.0) + 0.5 * h_far
        while x < L - 0.3 * h_far:
            candidates.append((x, y))
            x += h_far
        y += dy
        j += 1

    # greedy acceptance, nearest to the cylinder first, on a bucket grid
    cell = h_near
    grid = {}

    def add(p):
        grid.setdefault((int(p[0] // cell), int(p[1] // cell)), []).append(p)

    def too_close(p, h):
        reach = int(math.ceil(h / cell))
        ci, cj = int(p[0] // cell), int(p[1] // cell)
        for i in range(ci - reach, ci + reach + 1):
            for k in range(cj - reach, cj + reach + 1):
                for q in grid.get((i, k), ()):
                    if math.dist(p, q) < h:
                        return True
        return False

    for p in existing:
        add(p)
    chosen = []
    for p in sorted(candidates, key=lambda q: math.hypot(q[0] - XC, q[1] - YC)):
        h = size_at(*p, h_far, h_near)
        if math.hypot(p[0] - XC, p[1] - YC) < R + 0.5 * h:
            continue
        if min(p[0], L - p[0], p[1], H - p[1]) < 0.4 * h:
            continue
        if too_close(p, 0.7 * h):
            continue
        add(p)
        chosen.append(p)
    return chosen


def build(h_far, h_near, n_circle):
    bpts, circle = boundary_points(h_far, h_near, n_circle)
    ipts = interior_points(bpts, h_far, h_near)
    pts = np.array(bpts + ipts)
    tri = Delaunay(pts).simplices
    cent = pts[tri].mean(axis=1)
    inside = np.hypot(cent[:, 0] - XC, cent[:, 1] - YC) < R
    tri = tri[~inside]
    # counterclockwise orientation, drop degenerate hull slivers
    good = []
    for t in tri:
        a, b, c = pts[t]
        area = 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))
        if abs(area) < 1e-12:
            continue
        good.append(t if area > 0 else t[[0, 2, 1]])
    tri = np.array(good)

    edges = {}
    for t in tri:
        for i in range(3):
            e = tuple(sorted((t[i], t[(i + 1) % 3])))
            edges[e] = edges.get(e, 0) + 1
    tagged = []
    circle_set = set(circle)
    for (a, b), n in edges.items():
        if n != 1:
            continue
        pa, pb = pts[a], pts[b]
        if a in circle_set and b in circle_set:
            tag = 4
        elif abs(pa[0]) < 1e-12 and abs(pb[0]) < 1e-12:
            tag = 1
        elif abs(pa[0] - L) < 1e-12 and abs(pb[0] - L) < 1e-12:
            tag = 2
        elif (abs(pa[1]) < 1e-12 and abs(pb[1]) < 1e-12) or (abs(pa[1] - H) < 1e-12 and abs(pb[1] - H) < 1e-12):
            tag = 3
        else:
            raise SystemExit(f"boundary edge {a}-{b} is on no physical boundary")
        tagged.append((a, b, tag))
    for k in range(n_circle):
        e = tuple(sorted((circle[k], circle[(k + 1) % n_circle])))
        if edges.get(e) != 1:
            raise SystemExit("cylinder polygon edge missing from the triangulation")
    return pts, tri, tagged


def write_msh(path, pts, tri, tagged):
    with open(path, "w") as f:
        f.write("$MeshFormat\n2.2 0 8\n$EndMeshFormat\n")
        f.write("$PhysicalNames\n5\n1 1 \"inflow\"\n1 2 \"outflow\"\n1 3 \"walls\"\n1 4 \"cylinder\"\n2 5 \"fluid\"\n$EndPhysicalNames\n")
        f.write(f"$Nodes\n{len(pts)}\n")
        for i, (x, y) in enumerate(pts):
            f.write(f"{i + 1} {x:.17g} {y:.17g} 0\n")
        f.write("$EndNodes\n")
        f.write(f"$Elements\n{len(tagged) + len(tri)}\n")
        k = 1
        for a, b, tag in sorted(tagged, key=lambda e: (e[2], e[0], e[1])):
            f.write(f"{k} 1 2 {tag} {tag} {a + 1} {b + 1}\n")
            k += 1
        for t in tri:
            f.write(f"{k} 2 2 5 5 {t[0] + 1} {t[1] + 1} {t[2] + 1}\n")
            k += 1
        f.write("$EndElements\n")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("output")
    ap.add_argument("--h-far", type=float, default=0.032)
    ap.add_argument("--h-near", type=float, default=0.0105)
    ap.add_argument("--n-circle", type=int, default=30)
    args = ap.parse_args()
    pts, tri, tagged = build(args.h_far, args.h_near, args.n_circle)
    write_msh(args.output, pts, tri, tagged)
    nv, nt = len(pts), len(tri)
    ne = (3 * nt + len(tagged)) // 2
    print(f"vertices {nv} triangles {nt} edges {ne} euler {nv - ne + nt} velocity dofs {2 * (nv + ne)}")


if __name__ == "__main__":
    main()
