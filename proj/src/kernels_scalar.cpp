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
#include "loccsim/kernels.hpp"

#include <bit>
#include <cmath>

namespace loccsim::kernels {

namespace {

double s_norm_sq(const cplx* a, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::norm(a[i]);
    return s;
}

cplx s_dot(const cplx* a, const cplx* b, std::size_t n) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::conj(a[i]) * b[i];
    return s;
}

void s_scale(cplx* a, double s, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) a[i] *= s;
}

void s_axpy(cplx* y, cplx alpha, const cplx* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double s_prob_one(const cplx* a, std::size_t n, int q) {
    const std::size_t step = std::size_t{1} << q;
    double s = 0.0;
    for (std::size_t base = 0; base < n; base += 2 * step)
        for (std::size_t i = 0; i < step; ++i) s += std::norm(a[base + step + i]);
    return s;
}

void s_rot1(cplx* a, std::size_t n, int q, Axis ax, double theta) {
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    const std::size_t step = std::size_t{1} << q;
    switch (ax) {
        case Axis::X: {
            const cplx mis(0.0, -s);  // -i sin
            for (std::size_t base = 0; base < n; base += 2 * step)
                for (std::size_t i = 0; i < step; ++i) {
                    cplx& a0 = a[base + i];
                    cplx& a1 = a[base + step + i];
                    const cplx t0 = a0, t1 = a1;
                    a0 = c * t0 + mis * t1;
                    a1 = c * t1 + mis * t0;
                }
            break;
        }
        case Axis::Y: {
            for (std::size_t base = 0; base < n; base += 2 * step)
                for (std::size_t i = 0; i < step; ++i) {
                    cplx& a0 = a[base + i];
                    cplx& a1 = a[base + step + i];
                    const cplx t0 = a0, t1 = a1;
                    a0 = c * t0 - s * t1;
                    a1 = c * t1 + s * t0;
                }
            break;
        }
        case Axis::Z: {
            const cplx p0(c, -s), p1(c, s);
            for (std::size_t base = 0; base < n; base += 2 * step)
                for (std::size_t i = 0; i < step; ++i) {
                    a[base + i] *= p0;
                    a[base + step + i] *= p1;
                }
            break;
        }
    }
}

void s_rot2(cplx* a, std::size_t n, int q1, int q2, Axis ax, double theta) {
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    const std::uint64_t m1 = std::uint64_t{1} << q1;
    const std::uint64_t m2 = std::uint64_t{1} << q2;
    const std::uint64_t mask = m1 | m2;
    switch (ax) {
        case Axis::X: {
            const cplx mis(0.0, -s);
            for (std::uint64_t z = 0; z < n; ++z) {
                if (z & m1) continue;  // pair on the q1 bit
                cplx& a0 = a[z];
                cplx& a1 = a[z ^ mask];
                const cplx t0 = a0, t1 = a1;
                a0 = c * t0 + mis * t1;
                a1 = c * t1 + mis * t0;
            }
            break;
        }
        case Axis::Y: {
            // YY|b1 b2> phase: -1 when the two bits agree, +1 otherwise.
            const cplx mis(0.0, -s);
            for (std::uint64_t z = 0; z < n; ++z) {
                if (z & m1) continue;
                const double ph = (z & m2) ? 1.0 : -1.0;  // bits (0,1) vs (0,0)
                cplx& a0 = a[z];
                cplx& a1 = a[z ^ mask];
                const cplx t0 = a0, t1 = a1;
                a0 = c * t0 + ph * mis * t1;
                a1 = c * t1 + ph * mis * t0;
            }
            break;
        }
        case Axis::Z: {
            const cplx peven(c, -s), podd(c, s);  // ZZ eigenvalue +1 / -1
            for (std::uint64_t z = 0; z < n; ++z) {
                const bool b1 = z & m1, b2 = z & m2;
                a[z] *= (b1 == b2) ? peven : podd;
            }
            break;
        }
    }
}

}  // namespace

const Ops& scalar_ops() {
    static const Ops ops{"scalar", s_norm_sq, s_dot,  s_scale, s_axpy,
                         s_prob_one, s_rot1, s_rot2};
    return ops;
}

// ---- generic scalar helpers ----

namespace {
inline cplx i_pow(int k) {
    switch (k & 3) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}
inline double parity_sign(std::uint64_t bits) {
    return (std::popcount(bits) & 1) ? -1.0 : 1.0;
}
}  // namespace

void rot_generic(cplx* a, std::size_t n, const PauliMasks& p, double theta) {
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    const cplx mis(0.0, -s);
    if (p.xflip == 0) {
        // Diagonal word: eigenvalue (-1)^{|z & sign|}.
        const cplx pp(c, -s), pm(c, s);
        for (std::uint64_t z = 0; z < n; ++z)
            a[z] *= (parity_sign(z & p.sign) > 0) ? pp : pm;
        return;
    }
    const std::uint64_t pivot = p.xflip & (~p.xflip + 1);
    const cplx iy = i_pow(p.nY);
    for (std::uint64_t z = 0; z < n; ++z) {
        if (z & pivot) continue;
        const std::uint64_t w = z ^ p.xflip;
        const cplx cz = iy * parity_sign(z & p.sign);  // P|z> = cz |w>
        const cplx cw = std::conj(cz);                 // P Hermitian
        cplx& az = a[z];
        cplx& aw = a[w];
        const cplx tz = az, tw = aw;
        az = c * tz + mis * cw * tw;
        aw = c * tw + mis * cz * tz;
    }
}

double pauli_expectation(const cplx* a, std::size_t n, const PauliMasks& p) {
    if (p.xflip == 0) {
        double s = 0.0;
        for (std::uint64_t z = 0; z < n; ++z)
            s += parity_sign(z & p.sign) * std::norm(a[z]);
        return s;
    }
    const std::uint64_t pivot = p.xflip & (~p.xflip + 1);
    const cplx iy = i_pow(p.nY);
    double s = 0.0;
    // <a|P|a> = sum_z conj(a[z^x]) c(z) a[z]; pairs contribute 2 Re(...).
    for (std::uint64_t z = 0; z < n; ++z) {
        if (z & pivot) continue;
        const std::uint64_t w = z ^ p.xflip;
        const cplx cz = iy * parity_sign(z & p.sign);
        s += 2.0 * std::real(std::conj(a[w]) * cz * a[z]);
    }
    return s;
}

void pauli_apply_acc(cplx* out, const cplx* in, std::size_t n,
                     const PauliMasks& p, double coeff) {
    if (p.xflip == 0) {
        for (std::uint64_t z = 0; z < n; ++z)
            out[z] += coeff * parity_sign(z & p.sign) * in[z];
        return;
    }
    const cplx iy = i_pow(p.nY);
    for (std::uint64_t z = 0; z < n; ++z) {
        const cplx cz = coeff * iy * parity_sign(z & p.sign);
        out[z ^ p.xflip] += cz * in[z];
    }
}

double project_qubit(cplx* a, std::size_t n, int q, int outcome) {
    const std::size_t step = std::size_t{1} << q;
    double kept = 0.0;
    for (std::size_t base = 0; base < n; base += 2 * step)
        for (std::size_t i = 0; i < step; ++i) {
            cplx& keep = outcome ? a[base + step + i] : a[base + i];
            cplx& kill = outcome ? a[base + i] : a[base + step + i];
            kept += std::norm(keep);
            kill = 0.0;
        }
    return kept;
}

}  // namespace loccsim::kernels
