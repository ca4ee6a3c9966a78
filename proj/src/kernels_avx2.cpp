// Copyright 2026 The loccsim Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// AVX2 variants of the statevector inner loops. Amplitudes are
// std::complex<double>, i.e. interleaved re/im pairs; one __m256d holds two
// complex values. Semantics match kernels_scalar.cpp (equivalence-tested).
#include "loccsim/kernels.hpp"

#if defined(__x86_64__)

#include <immintrin.h>

#include <cmath>
#include <stdexcept>

namespace loccsim::kernels {

namespace {

inline double* dp(cplx* a) { return reinterpret_cast<double*>(a); }
inline const double* dp(const cplx* a) { return reinterpret_cast<const double*>(a); }

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_hadd_pd(lo, lo));
}

// Multiply two complex values held in a vector by (x + iy):
// (a+ib)(x+iy) = (ax - by) + i(ay + bx).
inline __m256d cmul_const(__m256d v, __m256d x, __m256d y) {
    __m256d swapped = _mm256_permute_pd(v, 0b0101);  // [im, re, im, re]
    return _mm256_addsub_pd(_mm256_mul_pd(v, x), _mm256_mul_pd(swapped, y));
}

double v_norm_sq(const cplx* a, std::size_t n) {
    const double* p = dp(a);
    const std::size_t len = 2 * n;
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= len; i += 4) {
        __m256d v = _mm256_loadu_pd(p + i);
        acc = _mm256_fmadd_pd(v, v, acc);
    }
    double s = hsum(acc);
    for (; i < len; ++i) s += p[i] * p[i];
    return s;
}

cplx v_dot(const cplx* a, const cplx* b, std::size_t n) {
    // conj(a)*b: re = ar*br + ai*bi, im = ar*bi - ai*br.
    const double* pa = dp(a);
    const double* pb = dp(b);
    __m256d accr = _mm256_setzero_pd();
    __m256d acci = _mm256_setzero_pd();
    const __m256d conj_mask = _mm256_set_pd(-0.0, 0.0, -0.0, 0.0);
    std::size_t i = 0;
    const std::size_t len = 2 * n;
    for (; i + 4 <= len; i += 4) {
        __m256d va = _mm256_loadu_pd(pa + i);
        __m256d vb = _mm256_loadu_pd(pb + i);
        accr = _mm256_fmadd_pd(va, vb, accr);
        __m256d vbs = _mm256_permute_pd(vb, 0b0101);
        __m256d vax = _mm256_xor_pd(va, conj_mask);  // [ar, -ai, ...]
        acci = _mm256_fmadd_pd(vax, vbs, acci);
    }
    double re = hsum(accr), im = hsum(acci);
    for (; i < len; i += 2) {
        re += pa[i] * pb[i] + pa[i + 1] * pb[i + 1];
        im += pa[i] * pb[i + 1] - pa[i + 1] * pb[i];
    }
    return {re, im};
}

void v_scale(cplx* a, double s, std::size_t n) {
    double* p = dp(a);
    const std::size_t len = 2 * n;
    const __m256d vs = _mm256_set1_pd(s);
    std::size_t i = 0;
    for (; i + 4 <= len; i += 4)
        _mm256_storeu_pd(p + i, _mm256_mul_pd(_mm256_loadu_pd(p + i), vs));
    for (; i < len; ++i) p[i] *= s;
}

void v_axpy(cplx* y, cplx alpha, const cplx* x, std::size_t n) {
    double* py = dp(y);
    const double* px = dp(x);
    const __m256d ar = _mm256_set1_pd(alpha.real());
    const __m256d ai = _mm256_set1_pd(alpha.imag());
    const std::size_t len = 2 * n;
    std::size_t i = 0;
    for (; i + 4 <= len; i += 4) {
        __m256d vx = _mm256_loadu_pd(px + i);
        __m256d vy = _mm256_loadu_pd(py + i);
        _mm256_storeu_pd(py + i, _mm256_add_pd(vy, cmul_const(vx, ar, ai)));
    }
    for (; i < len; i += 2) {
        const double xr = px[i], xi = px[i + 1];
        py[i] += alpha.real() * xr - alpha.imag() * xi;
        py[i + 1] += alpha.real() * xi + alpha.imag() * xr;
    }
}

double v_prob_one(const cplx* a, std::size_t n, int q) {
    const std::size_t step = std::size_t{1} << q;
    const double* p = dp(a);
    __m256d acc = _mm256_setzero_pd();
    double tail = 0.0;
    for (std::size_t base = 0; base < n; base += 2 * step) {
        const double* blk = p + 2 * (base + step);
        std::size_t i = 0;
        const std::size_t len = 2 * step;
        for (; i + 4 <= len; i += 4) {
            __m256d v = _mm256_loadu_pd(blk + i);
            acc = _mm256_fmadd_pd(v, v, acc);
        }
        for (; i < len; ++i) tail += blk[i] * blk[i];
    }
    return hsum(acc) + tail;
}

// --- rotations ---
// For q >= 1 the two halves of each pair are contiguous runs of >= 2 complex
// values; for q == 0 partners sit in adjacent lanes of one vector and are
// exchanged with a 128-bit lane swap.

void rot1_x(cplx* a, std::size_t n, int q, double c, double s) {
    double* p = dp(a);
    const __m256d vc = _mm256_set1_pd(c);
    const __m256d vzero = _mm256_setzero_pd();
    const __m256d vms = _mm256_set1_pd(-s);  // multiply by -i*s
    const std::size_t step = std::size_t{1} << q;
    if (q == 0) {
        for (std::size_t z = 0; z + 2 <= n; z += 2) {
            __m256d v = _mm256_loadu_pd(p + 2 * z);        // [a0, a1]
            __m256d sw = _mm256_permute2f128_pd(v, v, 1);  // [a1, a0]
            __m256d r = _mm256_add_pd(_mm256_mul_pd(vc, v), cmul_const(sw, vzero, vms));
            _mm256_storeu_pd(p + 2 * z, r);
        }
        return;
    }
    for (std::size_t base = 0; base < n; base += 2 * step) {
        double* p0 = p + 2 * base;
        double* p1 = p + 2 * (base + step);
        for (std::size_t i = 0; i < 2 * step; i += 4) {
            __m256d v0 = _mm256_loadu_pd(p0 + i);
            __m256d v1 = _mm256_loadu_pd(p1 + i);
            __m256d r0 = _mm256_add_pd(_mm256_mul_pd(vc, v0), cmul_const(v1, vzero, vms));
            __m256d r1 = _mm256_add_pd(_mm256_mul_pd(vc, v1), cmul_const(v0, vzero, vms));
            _mm256_storeu_pd(p0 + i, r0);
            _mm256_storeu_pd(p1 + i, r1);
        }
    }
}

void rot1_y(cplx* a, std::size_t n, int q, double c, double s) {
    double* p = dp(a);
    const __m256d vc = _mm256_set1_pd(c);
    const __m256d vs = _mm256_set1_pd(s);
    const std::size_t step = std::size_t{1} << q;
    if (q == 0) {
        // a0' = c a0 - s a1; a1' = c a1 + s a0 -> opposite sign per lane.
        const __m256d vsgn = _mm256_set_pd(s, s, -s, -s);
        for (std::size_t z = 0; z + 2 <= n; z += 2) {
            __m256d v = _mm256_loadu_pd(p + 2 * z);
            __m256d sw = _mm256_permute2f128_pd(v, v, 1);
            __m256d r = _mm256_fmadd_pd(vsgn, sw, _mm256_mul_pd(vc, v));
            _mm256_storeu_pd(p + 2 * z, r);
        }
        return;
    }
    for (std::size_t base = 0; base < n; base += 2 * step) {
        double* p0 = p + 2 * base;
        double* p1 = p + 2 * (base + step);
        for (std::size_t i = 0; i < 2 * step; i += 4) {
            __m256d v0 = _mm256_loadu_pd(p0 + i);
            __m256d v1 = _mm256_loadu_pd(p1 + i);
            __m256d r0 = _mm256_fnmadd_pd(vs, v1, _mm256_mul_pd(vc, v0));
            __m256d r1 = _mm256_fmadd_pd(vs, v0, _mm256_mul_pd(vc, v1));
            _mm256_storeu_pd(p0 + i, r0);
            _mm256_storeu_pd(p1 + i, r1);
        }
    }
}

void rot1_z(cplx* a, std::size_t n, int q, double c, double s) {
    double* p = dp(a);
    const std::size_t step = std::size_t{1} << q;
    if (q == 0) {
        // Alternating phases within one vector: [e^{-i}, e^{+i}].
        const __m256d x = _mm256_set1_pd(c);
        const __m256d y = _mm256_set_pd(s, s, -s, -s);
        for (std::size_t z = 0; z + 2 <= n; z += 2) {
            __m256d v = _mm256_loadu_pd(p + 2 * z);
            _mm256_storeu_pd(p + 2 * z, cmul_const(v, x, y));
        }
        return;
    }
    const __m256d x = _mm256_set1_pd(c);
    const __m256d y0 = _mm256_set1_pd(-s);
    const __m256d y1 = _mm256_set1_pd(s);
    for (std::size_t base = 0; base < n; base += 2 * step) {
        double* p0 = p + 2 * base;
        double* p1 = p + 2 * (base + step);
        for (std::size_t i = 0; i < 2 * step; i += 4) {
            _mm256_storeu_pd(p0 + i, cmul_const(_mm256_loadu_pd(p0 + i), x, y0));
            _mm256_storeu_pd(p1 + i, cmul_const(_mm256_loadu_pd(p1 + i), x, y1));
        }
    }
}

void v_rot1(cplx* a, std::size_t n, int q, Axis ax, double theta) {
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    switch (ax) {
        case Axis::X: rot1_x(a, n, q, c, s); break;
        case Axis::Y: rot1_y(a, n, q, c, s); break;
        case Axis::Z: rot1_z(a, n, q, c, s); break;
    }
}

void v_rot2(cplx* a, std::size_t n, int q1, int q2, Axis ax, double theta) {
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    if (q1 > q2) std::swap(q1, q2);  // q1 is the low qubit
    const std::size_t m1 = std::size_t{1} << q1;
    const std::size_t m2 = std::size_t{1} << q2;
    double* p = dp(a);
    // Cosets of constant (b2, b1) are contiguous runs of m1 complex values
    // starting at hi + mid (+ m1 / + m2). Vectorize over the run when m1 >= 2.
    if (ax == Axis::Z) {
        const __m256d x = _mm256_set1_pd(c);
        const __m256d ye = _mm256_set1_pd(-s);
        const __m256d yo = _mm256_set1_pd(s);
        const cplx pe(c, -s), po(c, s);
        for (std::size_t hi = 0; hi < n; hi += 2 * m2)
            for (std::size_t mid = 0; mid < m2; mid += 2 * m1) {
                const std::size_t i00 = hi + mid;
                if (m1 >= 2) {
                    for (std::size_t i = 0; i < 2 * m1; i += 4) {
                        double* p00 = p + 2 * i00 + i;
                        double* p01 = p + 2 * (i00 + m1) + i;
                        double* p10 = p + 2 * (i00 + m2) + i;
                        double* p11 = p + 2 * (i00 + m2 + m1) + i;
                        _mm256_storeu_pd(p00, cmul_const(_mm256_loadu_pd(p00), x, ye));
                        _mm256_storeu_pd(p01, cmul_const(_mm256_loadu_pd(p01), x, yo));
                        _mm256_storeu_pd(p10, cmul_const(_mm256_loadu_pd(p10), x, yo));
                        _mm256_storeu_pd(p11, cmul_const(_mm256_loadu_pd(p11), x, ye));
                    }
                } else {
                    a[i00] *= pe;
                    a[i00 + m1] *= po;
                    a[i00 + m2] *= po;
                    a[i00 + m2 + m1] *= pe;
                }
            }
        return;
    }
    // XX / YY pair (z, z^(m1|m2)); phase is -1 for YY when the bits agree.
    const bool yy = (ax == Axis::Y);
    const double pha = yy ? -1.0 : 1.0;
    const __m256d vc = _mm256_set1_pd(c);
    const __m256d vzero = _mm256_setzero_pd();
    const __m256d ysa = _mm256_set1_pd(-s * pha);
    const __m256d ysd = _mm256_set1_pd(-s);
    const cplx misa(0.0, -s * pha), misd(0.0, -s);
    for (std::size_t hi = 0; hi < n; hi += 2 * m2)
        for (std::size_t mid = 0; mid < m2; mid += 2 * m1) {
            const std::size_t i00 = hi + mid;
            if (m1 >= 2) {
                for (std::size_t i = 0; i < 2 * m1; i += 4) {
                    double* p00 = p + 2 * i00 + i;
                    double* p01 = p + 2 * (i00 + m1) + i;
                    double* p10 = p + 2 * (i00 + m2) + i;
                    double* p11 = p + 2 * (i00 + m2 + m1) + i;
                    __m256d v00 = _mm256_loadu_pd(p00);
                    __m256d v11 = _mm256_loadu_pd(p11);
                    _mm256_storeu_pd(p00, _mm256_add_pd(_mm256_mul_pd(vc, v00),
                                                        cmul_const(v11, vzero, ysa)));
                    _mm256_storeu_pd(p11, _mm256_add_pd(_mm256_mul_pd(vc, v11),
                                                        cmul_const(v00, vzero, ysa)));
                    __m256d v01 = _mm256_loadu_pd(p01);
                    __m256d v10 = _mm256_loadu_pd(p10);
                    _mm256_storeu_pd(p01, _mm256_add_pd(_mm256_mul_pd(vc, v01),
                                                        cmul_const(v10, vzero, ysd)));
                    _mm256_storeu_pd(p10, _mm256_add_pd(_mm256_mul_pd(vc, v10),
                                                        cmul_const(v01, vzero, ysd)));
                }
            } else {
                {
                    cplx& a0 = a[i00];
                    cplx& a1 = a[i00 + m2 + m1];
                    const cplx t0 = a0, t1 = a1;
                    a0 = c * t0 + misa * t1;
                    a1 = c * t1 + misa * t0;
                }
                {
                    cplx& a0 = a[i00 + m1];
                    cplx& a1 = a[i00 + m2];
                    const cplx t0 = a0, t1 = a1;
                    a0 = c * t0 + misd * t1;
                    a1 = c * t1 + misd * t0;
                }
            }
        }
}

}  // namespace

const Ops& avx2_ops() {
    if (!avx2_available())
        throw std::runtime_error("AVX2 backend requested but CPU lacks AVX2");
    static const Ops ops{"avx2",  v_norm_sq, v_dot,  v_scale,
                         v_axpy,  v_prob_one, v_rot1, v_rot2};
    return ops;
}

}  // namespace loccsim::kernels

#else

namespace loccsim::kernels {
const Ops& avx2_ops() {
    throw std::runtime_error("AVX2 backend not built on this architecture");
}
}  // namespace loccsim::kernels

#endif
