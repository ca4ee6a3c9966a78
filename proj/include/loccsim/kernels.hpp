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
#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>

namespace loccsim::kernels {

using cplx = std::complex<double>;

enum class Axis : int { X = 0, Y = 1, Z = 2 };

// Bitmask form of a Pauli word. xflip has a bit set for every X or Y site,
// sign has a bit set for every Y or Z site, nY counts Y sites (for the i^nY
// prefactor).
struct PauliMasks {
    std::uint64_t xflip = 0;
    std::uint64_t sign = 0;
    int nY = 0;
};

// Data-parallel inner loops over an amplitude array of length n = 2^qubits.
// `backend()` returns the active variant; scalar versions are the reference
// semantics, SIMD variants must match them bit-for-bit up to FP reassociation
// (equivalence-tested in tests/test_kernels.cpp).
struct Ops {
    const char* name;

    double (*norm_sq)(const cplx* a, std::size_t n);
    cplx (*dot)(const cplx* a, const cplx* b, std::size_t n);  // <a|b>
    void (*scale)(cplx* a, double s, std::size_t n);
    void (*axpy)(cplx* y, cplx alpha, const cplx* x, std::size_t n);

    // Probability of measuring |1> on qubit q (sum of |a_z|^2 over bit set).
    double (*prob_one)(const cplx* a, std::size_t n, int q);

    // In-place exp(-i theta/2 P) for single-qubit P on qubit q.
    void (*rot1)(cplx* a, std::size_t n, int q, Axis ax, double theta);
    // In-place exp(-i theta/2 P) for P in {XX, YY, ZZ} on qubits (q1, q2).
    void (*rot2)(cplx* a, std::size_t n, int q1, int q2, Axis ax, double theta);
};

const Ops& backend();
// Force a backend by name ("scalar", "avx2"); throws on unknown or
// unsupported. Also honors env LOCCSIM_KERNELS at first use.
void set_backend(const std::string& name);
bool avx2_available();

// --- scalar-only helpers (not performance critical enough to specialize) ---

// In-place exp(-i theta/2 P) for an arbitrary Pauli word.
void rot_generic(cplx* a, std::size_t n, const PauliMasks& p, double theta);
// Re <a| P |a>.
double pauli_expectation(const cplx* a, std::size_t n, const PauliMasks& p);
// out += coeff * P * in  (matrix-free Hamiltonian application).
void pauli_apply_acc(cplx* out, const cplx* in, std::size_t n,
                     const PauliMasks& p, double coeff);
// Zero amplitudes inconsistent with measuring `outcome` on qubit q; returns
// the squared norm of the kept component.
double project_qubit(cplx* a, std::size_t n, int q, int outcome);

// Reference scalar table, exposed for equivalence tests.
const Ops& scalar_ops();
const Ops& avx2_ops();  // throws if unsupported

}  // namespace loccsim::kernels
