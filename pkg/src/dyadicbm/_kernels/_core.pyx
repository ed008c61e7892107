# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: keyed noise, path pyramids, window maxima.

Must stay bit-identical to ``numpy_backend``: same splitmix64 hashing, same
(0,1) mapping, the same cephes ``ndtri`` (cimported from scipy), and the same
order of IEEE-754 operations.  Compiled with -ffp-contract=off so no fused
multiply-adds sneak in.
"""

import numpy as np

from libc.math cimport fabs, sqrt
from scipy.special.cython_special cimport ndtri

BACKEND = "compiled"

ctypedef unsigned long long u64


cdef inline u64 _mix64(u64 z) noexcept nogil:
    z = (z ^ (z >> 30)) * <u64>0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <u64>0x94D049BB133111EB
    return z ^ (z >> 31)


cdef inline u64 _keyed(u64 seed, u64 num, u64 lvl) noexcept nogil:
    cdef u64 h = _mix64(seed + <u64>0x9E3779B97F4A7C15)
    h = _mix64(h + num * <u64>0x9E3779B97F4A7C15)
    h = _mix64(h + lvl * <u64>0xC2B2AE3D27D4EB4F)
    return h


cdef inline double _to_unit(u64 h) noexcept nogil:
    return (<double>(h >> 11) + 0.5) * (1.0 / 9007199254740992.0)


cdef inline double _normal(u64 seed, u64 num, u64 lvl) noexcept nogil:
    return ndtri(_to_unit(_keyed(seed, num, lvl)))


def uniforms(seeds, nums, lvls):
    """Uniform(0,1) draws keyed by (seed, numerator, level); 1-d arrays."""
    cdef const u64[::1] s = np.ascontiguousarray(seeds, dtype=np.uint64)
    cdef const u64[::1] a = np.ascontiguousarray(nums, dtype=np.uint64)
    cdef const u64[::1] b = np.ascontiguousarray(lvls, dtype=np.uint64)
    out = np.empty(s.shape[0])
    cdef double[::1] o = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(s.shape[0]):
            o[i] = _to_unit(_keyed(s[i], a[i], b[i]))
    return out


def normals(seeds, nums, lvls):
    """Standard normal draws keyed by (seed, numerator, level); 1-d arrays."""
    cdef const u64[::1] s = np.ascontiguousarray(seeds, dtype=np.uint64)
    cdef const u64[::1] a = np.ascontiguousarray(nums, dtype=np.uint64)
    cdef const u64[::1] b = np.ascontiguousarray(lvls, dtype=np.uint64)
    out = np.empty(s.shape[0])
    cdef double[::1] o = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(s.shape[0]):
            o[i] = _normal(s[i], a[i], b[i])
    return out


cdef void _fill_path(double* v, u64 seed, Py_ssize_t horizon,
                     Py_ssize_t level) noexcept nogil:
    cdef Py_ssize_t stride = (<Py_ssize_t>1) << level
    cdef Py_ssize_t k, lvl, step, half, count, j
    cdef double acc = 0.0
    cdef double scale
    for k in range(1, horizon + 1):
        acc = acc + _normal(seed, <u64>k, 0)
        v[k * stride] = acc
    for lvl in range(level):
        step = stride >> lvl
        half = step >> 1
        scale = 1.0 / sqrt(<double>((<Py_ssize_t>1) << (lvl + 2)))
        count = horizon << lvl
        for j in range(count):
            v[j * step + half] = (
                0.5 * (v[j * step] + v[(j + 1) * step])
                + _normal(seed, <u64>(2 * j + 1), <u64>(lvl + 1)) * scale
            )


def build_paths(seeds, horizon, level):
    """Build one path per seed; see numpy_backend.build_paths."""
    cdef const u64[::1] s = np.ascontiguousarray(seeds, dtype=np.uint64)
    cdef Py_ssize_t n_paths = s.shape[0]
    cdef Py_ssize_t t = horizon
    cdef Py_ssize_t lv = level
    out = np.zeros((n_paths, t * ((<Py_ssize_t>1) << lv) + 1))
    cdef double[:, ::1] o = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(n_paths):
            _fill_path(&o[i, 0], s[i], t, lv)
    return out


def interval_abs_max(values, step, n_intervals):
    """Per-row window maxima; see numpy_backend.interval_abs_max."""
    cdef const double[:, ::1] v = np.ascontiguousarray(values, dtype=np.float64)
    cdef Py_ssize_t st = step
    cdef Py_ssize_t nk = n_intervals
    if st < 1 or nk < 1:
        raise ValueError("step and n_intervals must be positive")
    if (nk - 1) * st + 2 * st + 1 > v.shape[1]:
        raise ValueError(
            f"{nk} windows of width {2 * st + 1} at stride {st} "
            f"overrun a grid of {v.shape[1]} points"
        )
    out = np.empty((v.shape[0], nk))
    cdef double[:, ::1] o = out
    cdef Py_ssize_t i, k, j, base
    cdef double ref, m, d
    with nogil:
        for i in range(v.shape[0]):
            for k in range(nk):
                base = k * st
                ref = v[i, base]
                m = 0.0
                for j in range(base, base + 2 * st + 1):
                    d = fabs(v[i, j] - ref)
                    if d > m:
                        m = d
                o[i, k] = m
    return out
