"""Pure-Python hot kernels.

Mirror of ``_ckernels.pyx``; every function returns bit-identical results
because both evaluate the same IEEE double expressions in the same order.
Predicate filters return ``UNCERTAIN`` when the floating-point error bound
cannot certify the sign; callers then re-evaluate exactly.
"""

from __future__ import annotations

import math

BACKEND = "python"

UNCERTAIN = 2
WALK_OUTSIDE = -1
WALK_UNCERTAIN = -2
WALK_FAILED = -3

_EPS = 2.0**-53
_CCW_A = (3.0 + 16.0 * _EPS) * _EPS
_O3D_A = (7.0 + 56.0 * _EPS) * _EPS
_ICC_A = (10.0 + 96.0 * _EPS) * _EPS
_ISP_A = (16.0 + 224.0 * _EPS) * _EPS


def orient2d(ax, ay, bx, by, cx, cy):
    """Sign of twice the signed area of (a, b, c); positive when CCW."""
    detleft = (ax - cx) * (by - cy)
    detright = (ay - cy) * (bx - cx)
    det = detleft - detright
    errbound = _CCW_A * (abs(detleft) + abs(detright))
    if det > errbound:
        return 1
    if -det > errbound:
        return -1
    if errbound == 0.0:
        return 0
    return UNCERTAIN


def orient3d(ax, ay, az, bx, by, bz, cx, cy, cz, dx, dy, dz):
    """Sign of det[b-a; c-a; d-a]."""
    adx = ax - dx
    bdx = bx - dx
    cdx = cx - dx
    ady = ay - dy
    bdy = by - dy
    cdy = cy - dy
    adz = az - dz
    bdz = bz - dz
    cdz = cz - dz
    bdxcdy = bdx * cdy
    cdxbdy = cdx * bdy
    cdxady = cdx * ady
    adxcdy = adx * cdy
    adxbdy = adx * bdy
    bdxady = bdx * ady
    det = adz * (bdxcdy - cdxbdy) + bdz * (cdxady - adxcdy) + cdz * (adxbdy - bdxady)
    permanent = (
        (abs(bdxcdy) + abs(cdxbdy)) * abs(adz)
        + (abs(cdxady) + abs(adxcdy)) * abs(bdz)
        + (abs(adxbdy) + abs(bdxady)) * abs(cdz)
    )
    errbound = _O3D_A * permanent
    # det above is det[a-d; b-d; c-d], the negation of det[b-a; c-a; d-a]
    if det > errbound:
        return -1
    if -det > errbound:
        return 1
    if errbound == 0.0:
        return 0
    return UNCERTAIN


def incircle(ax, ay, bx, by, cx, cy, dx, dy):
    """Sign of the lifted determinant; positive iff d is inside when abc is CCW."""
    adx = ax - dx
    bdx = bx - dx
    cdx = cx - dx
    ady = ay - dy
    bdy = by - dy
    cdy = cy - dy
    bdxcdy = bdx * cdy
    cdxbdy = cdx * bdy
    alift = adx * adx + ady * ady
    cdxady = cdx * ady
    adxcdy = adx * cdy
    blift = bdx * bdx + bdy * bdy
    adxbdy = adx * bdy
    bdxady = bdx * ady
    clift = cdx * cdx + cdy * cdy
    det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) + clift * (adxbdy - bdxady)
    permanent = (
        (abs(bdxcdy) + abs(cdxbdy)) * alift
        + (abs(cdxady) + abs(adxcdy)) * blift
        + (abs(adxbdy) + abs(bdxady)) * clift
    )
    errbound = _ICC_A * permanent
    if det > errbound:
        return 1
    if -det > errbound:
        return -1
    if errbound == 0.0:
        return 0
    return UNCERTAIN


def insphere(ax, ay, az, bx, by, bz, cx, cy, cz, dx, dy, dz, ex, ey, ez):
    """Sign of the 3D lifted determinant (rows a..d taken relative to e)."""
    aex = ax - ex
    bex = bx - ex
    cex = cx - ex
    dex = dx - ex
    aey = ay - ey
    bey = by - ey
    cey = cy - ey
    dey = dy - ey
    aez = az - ez
    bez = bz - ez
    cez = cz - ez
    dez = dz - ez

    aexbey = aex * bey
    bexaey = bex * aey
    ab = aexbey - bexaey
    bexcey = bex * cey
    cexbey = cex * bey
    bc = bexcey - cexbey
    cexdey = cex * dey
    dexcey = dex * cey
    cd = cexdey - dexcey
    dexaey = dex * aey
    aexdey = aex * dey
    da = dexaey - aexdey
    aexcey = aex * cey
    cexaey = cex * aey
    ac = aexcey - cexaey
    bexdey = bex * dey
    dexbey = dex * bey
    bd = bexdey - dexbey

    abc = aez * bc - bez * ac + cez * ab
    bcd = bez * cd - cez * bd + dez * bc
    cda = cez * da + dez * ac + aez * cd
    dab = dez * ab + aez * bd + bez * da

    alift = aex * aex + aey * aey + aez * aez
    blift = bex * bex + bey * bey + bez * bez
    clift = cex * cex + cey * cey + cez * cez
    dlift = dex * dex + dey * dey + dez * dez

    det = (dlift * abc - clift * dab) + (blift * cda - alift * bcd)

    aezplus = abs(aez)
    bezplus = abs(bez)
    cezplus = abs(cez)
    dezplus = abs(dez)
    aexbeyplus = abs(aexbey)
    bexaeyplus = abs(bexaey)
    bexceyplus = abs(bexcey)
    cexbeyplus = abs(cexbey)
    cexdeyplus = abs(cexdey)
    dexceyplus = abs(dexcey)
    dexaeyplus = abs(dexaey)
    aexdeyplus = abs(aexdey)
    aexceyplus = abs(aexcey)
    cexaeyplus = abs(cexaey)
    bexdeyplus = abs(bexdey)
    dexbeyplus = abs(dexbey)
    permanent = (
        ((cexdeyplus + dexceyplus) * bezplus
         + (dexbeyplus + bexdeyplus) * cezplus
         + (bexceyplus + cexbeyplus) * dezplus) * alift
        + ((dexaeyplus + aexdeyplus) * cezplus
           + (aexceyplus + cexaeyplus) * dezplus
           + (cexdeyplus + dexceyplus) * aezplus) * blift
        + ((aexbeyplus + bexaeyplus) * dezplus
           + (bexdeyplus + dexbeyplus) * aezplus
           + (dexaeyplus + aexdeyplus) * bezplus) * clift
        + ((bexceyplus + cexbeyplus) * aezplus
           + (cexaeyplus + aexceyplus) * bezplus
           + (aexbeyplus + bexaeyplus) * cezplus) * dlift
    )
    errbound = _ISP_A * permanent
    if det > errbound:
        return 1
    if -det > errbound:
        return -1
    if errbound == 0.0:
        return 0
    return UNCERTAIN


def mesh(coords, simplices, neighbors):
    """Backend storage for a simplicial mesh passed to the walk kernels."""
    return ([tuple(map(float, c)) for c in coords],
            [tuple(map(int, v)) for v in simplices],
            [tuple(map(int, n)) for n in neighbors])


def polygons(rings):
    """Backend storage for a list of closed 2D vertex rings."""
    return [[(float(x), float(y)) for x, y in ring] for ring in rings]


def _xorshift(state):
    state ^= (state << 13) & 0xFFFFFFFF
    state ^= state >> 17
    state ^= (state << 5) & 0xFFFFFFFF
    return state & 0xFFFFFFFF


def walk2d(mesh, start, qx, qy):
    """Visibility walk towards (qx, qy) through a 2D triangulation.

    Returns the index of a triangle whose closure contains q, ``WALK_OUTSIDE``
    when the walk leaves the convex hull, ``WALK_UNCERTAIN`` when a predicate
    could not be certified, or ``WALK_FAILED`` past the step cap.
    """
    coords, simplices, neighbors = mesh
    m = len(simplices)
    s = start
    state = 2463534242
    for _ in range(4 * m + 64):
        v = simplices[s]
        p0 = coords[v[0]]
        p1 = coords[v[1]]
        p2 = coords[v[2]]
        o = orient2d(p0[0], p0[1], p1[0], p1[1], p2[0], p2[1])
        if o == UNCERTAIN:
            return WALK_UNCERTAIN
        state = _xorshift(state)
        first = state % 3
        moved = False
        for j in range(3):
            k = (first + j) % 3
            if k == 0:
                ok = orient2d(qx, qy, p1[0], p1[1], p2[0], p2[1])
            elif k == 1:
                ok = orient2d(p0[0], p0[1], qx, qy, p2[0], p2[1])
            else:
                ok = orient2d(p0[0], p0[1], p1[0], p1[1], qx, qy)
            if ok == UNCERTAIN:
                return WALK_UNCERTAIN
            if ok * o < 0:
                nb = neighbors[s][k]
                if nb < 0:
                    return WALK_OUTSIDE
                s = nb
                moved = True
                break
        if not moved:
            return s
    return WALK_FAILED


def walk3d(mesh, start, qx, qy, qz):
    """3D counterpart of :func:`walk2d` over tetrahedra."""
    coords, simplices, neighbors = mesh
    m = len(simplices)
    s = start
    state = 2463534242
    for _ in range(4 * m + 64):
        v = simplices[s]
        p = [coords[v[0]], coords[v[1]], coords[v[2]], coords[v[3]]]
        o = orient3d(p[0][0], p[0][1], p[0][2], p[1][0], p[1][1], p[1][2],
                     p[2][0], p[2][1], p[2][2], p[3][0], p[3][1], p[3][2])
        if o == UNCERTAIN:
            return WALK_UNCERTAIN
        state = _xorshift(state)
        first = state % 4
        moved = False
        for j in range(4):
            k = (first + j) % 4
            r = list(p)
            r[k] = (qx, qy, qz)
            ok = orient3d(r[0][0], r[0][1], r[0][2], r[1][0], r[1][1], r[1][2],
                          r[2][0], r[2][1], r[2][2], r[3][0], r[3][1], r[3][2])
            if ok == UNCERTAIN:
                return WALK_UNCERTAIN
            if ok * o < 0:
                nb = neighbors[s][k]
                if nb < 0:
                    return WALK_OUTSIDE
                s = nb
                moved = True
                break
        if not moved:
            return s
    return WALK_FAILED


def _seg_seg_dist2(ax, ay, bx, by, cx, cy, dx, dy):
    # squared distance between segments ab and cd
    ux = bx - ax
    uy = by - ay
    vx = dx - cx
    vy = dy - cy
    d1 = (cx - ax) * uy - (cy - ay) * ux
    d2 = (dx - ax) * uy - (dy - ay) * ux
    d3 = (ax - cx) * vy - (ay - cy) * vx
    d4 = (bx - cx) * vy - (by - cy) * vx
    if ((d1 > 0.0 and d2 < 0.0) or (d1 < 0.0 and d2 > 0.0)) and (
        (d3 > 0.0 and d4 < 0.0) or (d3 < 0.0 and d4 > 0.0)
    ):
        return 0.0
    return min(
        _pt_seg_dist2(ax, ay, cx, cy, dx, dy),
        _pt_seg_dist2(bx, by, cx, cy, dx, dy),
        _pt_seg_dist2(cx, cy, ax, ay, bx, by),
        _pt_seg_dist2(dx, dy, ax, ay, bx, by),
    )


def _pt_seg_dist2(px, py, ax, ay, bx, by):
    ux = bx - ax
    uy = by - ay
    wx = px - ax
    wy = py - ay
    den = ux * ux + uy * uy
    t = 0.0
    if den > 0.0:
        t = (wx * ux + wy * uy) / den
        if t < 0.0:
            t = 0.0
        elif t > 1.0:
            t = 1.0
    ex = wx - t * ux
    ey = wy - t * uy
    return ex * ex + ey * ey


def _point_in_ring(px, py, ring):
    # even-odd crossing test on a closed vertex ring
    inside = False
    n = len(ring)
    j = n - 1
    for i in range(n):
        xi, yi = ring[i]
        xj, yj = ring[j]
        if (yi > py) != (yj > py):
            xint = xj + (py - yj) * (xi - xj) / (yi - yj)
            if px < xint:
                inside = not inside
        j = i
    return inside


def segment_polygon_dist(ax, ay, bx, by, ring):
    """Distance from segment ab to a closed polygon region (0 when they meet)."""
    if _point_in_ring(ax, ay, ring) or _point_in_ring(bx, by, ring):
        return 0.0
    best = math.inf
    n = len(ring)
    for i in range(n):
        cx, cy = ring[i]
        dx, dy = ring[(i + 1) % n]
        d2 = _seg_seg_dist2(ax, ay, bx, by, cx, cy, dx, dy)
        if d2 < best:
            best = d2
            if best == 0.0:
                break
    return math.sqrt(best)


def capsules_hit(segments, radius, rings):
    """True iff any segment, inflated by ``radius``, touches any ring."""
    for ax, ay, bx, by in segments:
        for ring in rings:
            if segment_polygon_dist(ax, ay, bx, by, ring) <= radius:
                return True
    return False
