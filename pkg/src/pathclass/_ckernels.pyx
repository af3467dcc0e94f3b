# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; see ``_pykernels`` for the reference semantics."""

import numpy as np

from libc.math cimport fabs, sqrt, INFINITY

BACKEND = "cython"

cdef enum:
    C_OUTSIDE = -1
    C_UNCERTAIN = -2
    C_FAILED = -3

UNCERTAIN = 2
WALK_OUTSIDE = C_OUTSIDE
WALK_UNCERTAIN = C_UNCERTAIN
WALK_FAILED = C_FAILED

cdef double _EPS = 2.0 ** -53
cdef double _CCW_A = (3.0 + 16.0 * _EPS) * _EPS
cdef double _O3D_A = (7.0 + 56.0 * _EPS) * _EPS
cdef double _ICC_A = (10.0 + 96.0 * _EPS) * _EPS
cdef double _ISP_A = (16.0 + 224.0 * _EPS) * _EPS


cdef inline int _sign(double det, double errbound) noexcept nogil:
    if det > errbound:
        return 1
    if -det > errbound:
        return -1
    if errbound == 0.0:
        return 0
    return 2


cdef int _orient2d(double ax, double ay, double bx, double by,
                   double cx, double cy) noexcept nogil:
    cdef double detleft = (ax - cx) * (by - cy)
    cdef double detright = (ay - cy) * (bx - cx)
    cdef double det = detleft - detright
    return _sign(det, _CCW_A * (fabs(detleft) + fabs(detright)))


cdef int _orient3d(double ax, double ay, double az, double bx, double by, double bz,
                   double cx, double cy, double cz, double dx, double dy,
                   double dz) noexcept nogil:
    cdef double adx = ax - dx, bdx = bx - dx, cdx = cx - dx
    cdef double ady = ay - dy, bdy = by - dy, cdy = cy - dy
    cdef double adz = az - dz, bdz = bz - dz, cdz = cz - dz
    cdef double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy
    cdef double cdxady = cdx * ady, adxcdy = adx * cdy
    cdef double adxbdy = adx * bdy, bdxady = bdx * ady
    cdef double det = adz * (bdxcdy - cdxbdy) + bdz * (cdxady - adxcdy) + cdz * (adxbdy - bdxady)
    cdef double permanent = ((fabs(bdxcdy) + fabs(cdxbdy)) * fabs(adz)
                             + (fabs(cdxady) + fabs(adxcdy)) * fabs(bdz)
                             + (fabs(adxbdy) + fabs(bdxady)) * fabs(cdz))
    cdef int s = _sign(det, _O3D_A * permanent)
    if s == 2:
        return 2
    return -s


cdef int _incircle(double ax, double ay, double bx, double by, double cx, double cy,
                   double dx, double dy) noexcept nogil:
    cdef double adx = ax - dx, bdx = bx - dx, cdx = cx - dx
    cdef double ady = ay - dy, bdy = by - dy, cdy = cy - dy
    cdef double bdxcdy = bdx * cdy
    cdef double cdxbdy = cdx * bdy
    cdef double alift = adx * adx + ady * ady
    cdef double cdxady = cdx * ady
    cdef double adxcdy = adx * cdy
    cdef double blift = bdx * bdx + bdy * bdy
    cdef double adxbdy = adx * bdy
    cdef double bdxady = bdx * ady
    cdef double clift = cdx * cdx + cdy * cdy
    cdef double det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) + clift * (adxbdy - bdxady)
    cdef double permanent = ((fabs(bdxcdy) + fabs(cdxbdy)) * alift
                             + (fabs(cdxady) + fabs(adxcdy)) * blift
                             + (fabs(adxbdy) + fabs(bdxady)) * clift)
    return _sign(det, _ICC_A * permanent)


cdef int _insphere(double ax, double ay, double az, double bx, double by, double bz,
                   double cx, double cy, double cz, double dx, double dy, double dz,
                   double ex, double ey, double ez) noexcept nogil:
    cdef double aex = ax - ex, bex = bx - ex, cex = cx - ex, dex = dx - ex
    cdef double aey = ay - ey, bey = by - ey, cey = cy - ey, dey = dy - ey
    cdef double aez = az - ez, bez = bz - ez, cez = cz - ez, dez = dz - ez

    cdef double aexbey = aex * bey
    cdef double bexaey = bex * aey
    cdef double ab = aexbey - bexaey
    cdef double bexcey = bex * cey
    cdef double cexbey = cex * bey
    cdef double bc = bexcey - cexbey
    cdef double cexdey = cex * dey
    cdef double dexcey = dex * cey
    cdef double cd = cexdey - dexcey
    cdef double dexaey = dex * aey
    cdef double aexdey = aex * dey
    cdef double da = dexaey - aexdey
    cdef double aexcey = aex * cey
    cdef double cexaey = cex * aey
    cdef double ac = aexcey - cexaey
    cdef double bexdey = bex * dey
    cdef double dexbey = dex * bey
    cdef double bd = bexdey - dexbey

    cdef double abc = aez * bc - bez * ac + cez * ab
    cdef double bcd = bez * cd - cez * bd + dez * bc
    cdef double cda = cez * da + dez * ac + aez * cd
    cdef double dab = dez * ab + aez * bd + bez * da

    cdef double alift = aex * aex + aey * aey + aez * aez
    cdef double blift = bex * bex + bey * bey + bez * bez
    cdef double clift = cex * cex + cey * cey + cez * cez
    cdef double dlift = dex * dex + dey * dey + dez * dez

    cdef double det = (dlift * abc - clift * dab) + (blift * cda - alift * bcd)

    cdef double aezplus = fabs(aez), bezplus = fabs(bez)
    cdef double cezplus = fabs(cez), dezplus = fabs(dez)
    cdef double aexbeyplus = fabs(aexbey), bexaeyplus = fabs(bexaey)
    cdef double bexceyplus = fabs(bexcey), cexbeyplus = fabs(cexbey)
    cdef double cexdeyplus = fabs(cexdey), dexceyplus = fabs(dexcey)
    cdef double dexaeyplus = fabs(dexaey), aexdeyplus = fabs(aexdey)
    cdef double aexceyplus = fabs(aexcey), cexaeyplus = fabs(cexaey)
    cdef double bexdeyplus = fabs(bexdey), dexbeyplus = fabs(dexbey)
    cdef double permanent = (
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
    return _sign(det, _ISP_A * permanent)


def orient2d(double ax, double ay, double bx, double by, double cx, double cy):
    return _orient2d(ax, ay, bx, by, cx, cy)


def orient3d(double ax, double ay, double az, double bx, double by, double bz,
             double cx, double cy, double cz, double dx, double dy, double dz):
    return _orient3d(ax, ay, az, bx, by, bz, cx, cy, cz, dx, dy, dz)


def incircle(double ax, double ay, double bx, double by, double cx, double cy,
             double dx, double dy):
    return _incircle(ax, ay, bx, by, cx, cy, dx, dy)


def insphere(double ax, double ay, double az, double bx, double by, double bz,
             double cx, double cy, double cz, double dx, double dy, double dz,
             double ex, double ey, double ez):
    return _insphere(ax, ay, az, bx, by, bz, cx, cy, cz, dx, dy, dz, ex, ey, ez)


def mesh(coords, simplices, neighbors):
    return (np.ascontiguousarray(coords, dtype=np.float64),
            np.ascontiguousarray(simplices, dtype=np.int64),
            np.ascontiguousarray(neighbors, dtype=np.int64))


def polygons(rings):
    cdef list flat = []
    cdef list offsets = [0]
    for ring in rings:
        for x, y in ring:
            flat.append((float(x), float(y)))
        offsets.append(len(flat))
    verts = np.asarray(flat, dtype=np.float64).reshape(-1, 2)
    return (np.ascontiguousarray(verts), np.asarray(offsets, dtype=np.int64))


cdef inline unsigned int _xorshift(unsigned int state) noexcept nogil:
    state ^= state << 13
    state ^= state >> 17
    state ^= state << 5
    return state


cdef long _walk2d(const double[:, ::1] coords, const long long[:, ::1] simplices,
                  const long long[:, ::1] neighbors, long start,
                  double qx, double qy) noexcept nogil:
    cdef long m = simplices.shape[0]
    cdef long s = start
    cdef unsigned int state = 2463534242u
    cdef long it, j, k, nb
    cdef int o, ok, first, moved
    cdef double x0, y0, x1, y1, x2, y2
    for it in range(4 * m + 64):
        x0 = coords[simplices[s, 0], 0]
        y0 = coords[simplices[s, 0], 1]
        x1 = coords[simplices[s, 1], 0]
        y1 = coords[simplices[s, 1], 1]
        x2 = coords[simplices[s, 2], 0]
        y2 = coords[simplices[s, 2], 1]
        o = _orient2d(x0, y0, x1, y1, x2, y2)
        if o == 2:
            return C_UNCERTAIN
        state = _xorshift(state)
        first = state % 3
        moved = 0
        for j in range(3):
            k = (first + j) % 3
            if k == 0:
                ok = _orient2d(qx, qy, x1, y1, x2, y2)
            elif k == 1:
                ok = _orient2d(x0, y0, qx, qy, x2, y2)
            else:
                ok = _orient2d(x0, y0, x1, y1, qx, qy)
            if ok == 2:
                return C_UNCERTAIN
            if ok * o < 0:
                nb = neighbors[s, k]
                if nb < 0:
                    return C_OUTSIDE
                s = nb
                moved = 1
                break
        if not moved:
            return s
    return C_FAILED


cdef long _walk3d(const double[:, ::1] coords, const long long[:, ::1] simplices,
                  const long long[:, ::1] neighbors, long start,
                  double qx, double qy, double qz) noexcept nogil:
    cdef long m = simplices.shape[0]
    cdef long s = start
    cdef unsigned int state = 2463534242u
    cdef long it, j, k, nb, i
    cdef int o, ok, first, moved
    cdef double p[4][3]
    cdef double r[4][3]
    for it in range(4 * m + 64):
        for i in range(4):
            p[i][0] = coords[simplices[s, i], 0]
            p[i][1] = coords[simplices[s, i], 1]
            p[i][2] = coords[simplices[s, i], 2]
        o = _orient3d(p[0][0], p[0][1], p[0][2], p[1][0], p[1][1], p[1][2],
                      p[2][0], p[2][1], p[2][2], p[3][0], p[3][1], p[3][2])
        if o == 2:
            return C_UNCERTAIN
        state = _xorshift(state)
        first = state % 4
        moved = 0
        for j in range(4):
            k = (first + j) % 4
            for i in range(4):
                if i == k:
                    r[i][0] = qx
                    r[i][1] = qy
                    r[i][2] = qz
                else:
                    r[i][0] = p[i][0]
                    r[i][1] = p[i][1]
                    r[i][2] = p[i][2]
            ok = _orient3d(r[0][0], r[0][1], r[0][2], r[1][0], r[1][1], r[1][2],
                           r[2][0], r[2][1], r[2][2], r[3][0], r[3][1], r[3][2])
            if ok == 2:
                return C_UNCERTAIN
            if ok * o < 0:
                nb = neighbors[s, k]
                if nb < 0:
                    return C_OUTSIDE
                s = nb
                moved = 1
                break
        if not moved:
            return s
    return C_FAILED


def walk2d(mesh, long start, double qx, double qy):
    coords, simplices, neighbors = mesh
    return _walk2d(coords, simplices, neighbors, start, qx, qy)


def walk3d(mesh, long start, double qx, double qy, double qz):
    coords, simplices, neighbors = mesh
    return _walk3d(coords, simplices, neighbors, start, qx, qy, qz)


cdef inline double _pt_seg_dist2(double px, double py, double ax, double ay,
                                 double bx, double by) noexcept nogil:
    cdef double ux = bx - ax
    cdef double uy = by - ay
    cdef double wx = px - ax
    cdef double wy = py - ay
    cdef double den = ux * ux + uy * uy
    cdef double t = 0.0
    cdef double ex, ey
    if den > 0.0:
        t = (wx * ux + wy * uy) / den
        if t < 0.0:
            t = 0.0
        elif t > 1.0:
            t = 1.0
    ex = wx - t * ux
    ey = wy - t * uy
    return ex * ex + ey * ey


cdef double _seg_seg_dist2(double ax, double ay, double bx, double by,
                           double cx, double cy, double dx, double dy) noexcept nogil:
    cdef double ux = bx - ax
    cdef double uy = by - ay
    cdef double vx = dx - cx
    cdef double vy = dy - cy
    cdef double d1 = (cx - ax) * uy - (cy - ay) * ux
    cdef double d2 = (dx - ax) * uy - (dy - ay) * ux
    cdef double d3 = (ax - cx) * vy - (ay - cy) * vx
    cdef double d4 = (bx - cx) * vy - (by - cy) * vx
    cdef double best, v
    if ((d1 > 0.0 and d2 < 0.0) or (d1 < 0.0 and d2 > 0.0)) and (
            (d3 > 0.0 and d4 < 0.0) or (d3 < 0.0 and d4 > 0.0)):
        return 0.0
    best = _pt_seg_dist2(ax, ay, cx, cy, dx, dy)
    v = _pt_seg_dist2(bx, by, cx, cy, dx, dy)
    if v < best:
        best = v
    v = _pt_seg_dist2(cx, cy, ax, ay, bx, by)
    if v < best:
        best = v
    v = _pt_seg_dist2(dx, dy, ax, ay, bx, by)
    if v < best:
        best = v
    return best


cdef bint _point_in_ring(double px, double py, const double[:, ::1] verts,
                         long lo, long hi) noexcept nogil:
    cdef bint inside = False
    cdef long i, j = hi - 1
    cdef double xi, yi, xj, yj, xint
    for i in range(lo, hi):
        xi = verts[i, 0]
        yi = verts[i, 1]
        xj = verts[j, 0]
        yj = verts[j, 1]
        if (yi > py) != (yj > py):
            xint = xj + (py - yj) * (xi - xj) / (yi - yj)
            if px < xint:
                inside = not inside
        j = i
    return inside


cdef double _segment_polygon_dist(double ax, double ay, double bx, double by,
                                  const double[:, ::1] verts, long lo,
                                  long hi) noexcept nogil:
    cdef double best = INFINITY
    cdef double d2
    cdef long i, nxt
    if _point_in_ring(ax, ay, verts, lo, hi) or _point_in_ring(bx, by, verts, lo, hi):
        return 0.0
    for i in range(lo, hi):
        nxt = i + 1
        if nxt == hi:
            nxt = lo
        d2 = _seg_seg_dist2(ax, ay, bx, by, verts[i, 0], verts[i, 1],
                            verts[nxt, 0], verts[nxt, 1])
        if d2 < best:
            best = d2
            if best == 0.0:
                break
    return sqrt(best)


def segment_polygon_dist(double ax, double ay, double bx, double by, ring):
    verts, offsets = polygons([ring])
    return _segment_polygon_dist(ax, ay, bx, by, verts, 0, offsets[1])


def capsules_hit(segments, double radius, polys):
    cdef const double[:, ::1] verts = polys[0]
    cdef const long long[::1] offsets = polys[1]
    cdef const double[:, ::1] segs = np.ascontiguousarray(segments, dtype=np.float64).reshape(-1, 4)
    cdef long i, r
    cdef long nseg = segs.shape[0]
    cdef long nring = offsets.shape[0] - 1
    cdef bint hit = False
    with nogil:
        for i in range(nseg):
            for r in range(nring):
                if _segment_polygon_dist(segs[i, 0], segs[i, 1], segs[i, 2], segs[i, 3],
                                         verts, offsets[r], offsets[r + 1]) <= radius:
                    hit = True
                    break
            if hit:
                break
    return hit
