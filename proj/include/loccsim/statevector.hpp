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
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "loccsim/pauli.hpp"

namespace loccsim {

using cplx = std::complex<double>;

inline constexpr int kMaxQubits = 24;

class DensityMatrix;

// Dense complex statevector. Qubit 0 is the least-significant bit of the
// amplitude index. Branch states after projective measurement are kept
// unnormalized: their squared norm is the branch probability.
class StateVector {
  public:
    // Zero-qubit scalar state (amplitude 1); placeholder / compaction limit.
    StateVector();
    // |0...0> on qubit_count qubits.
    explicit StateVector(int qubit_count);

    // |bits>, bits[i] is the character for qubit i ('0'/'1').
    static StateVector computational(int qubit_count, const std::string& bits);

    int qubit_count() const { return n_; }
    std::size_t dim() const { return amps_.size(); }
    cplx* data() { return amps_.data(); }
    const cplx* data() const { return amps_.data(); }
    const std::vector<cplx>& amplitudes() const { return amps_; }
    cplx& operator[](std::size_t i) { return amps_[i]; }
    const cplx& operator[](std::size_t i) const { return amps_[i]; }

    double norm_sq() const;
    void scale(double s);

    // In-place exp(-i theta/2 * c * P) where P is the generator word and c
    // its coefficient (|c| = 1 expected; the sign folds into the angle).
    void apply_rotation(const PauliString& generator, double theta);

    struct MeasureResult {
        int outcome;
        // project(): absolute squared norm of the kept component (cumulative
        // over repeated projections). sample(): conditional probability of
        // the drawn outcome.
        double probability;
    };
    // Project onto `outcome` for qubit q; state left UNNORMALIZED.
    // probability is the squared norm of the kept component. Both outcomes
    // having probability < 1e-14 signals a dead branch (probability 0).
    MeasureResult project(int q, int outcome);
    // Sample an outcome by the Born rule and renormalize.
    MeasureResult sample(int q, std::mt19937_64& rng);

    // Sum over terms of coeff * <psi|P|psi>; for unnormalized branch states
    // this is the branch-weighted energy Tr[H Phi~].
    double expectation(const Hamiltonian& h) const;
    double expectation(const PauliString& p) const;

    // Partial trace onto `subset` (ascending order defines the row index:
    // subset[0] is the least-significant bit of the reduced index).
    DensityMatrix reduced_density(const std::vector<int>& subset) const;

    // |<a|b>|^2 / (|a|^2 |b|^2).
    static double fidelity(const StateVector& a, const StateVector& b);

    // Drop qubit q, which must be in the computational state `pinned`
    // (all amplitudes with the other bit value zero). Used after projective
    // measurement of an ancilla that no later gate touches.
    StateVector drop_qubit(int q, int pinned) const;

    // Little-endian interleaved re/im doubles; debugging aid only.
    std::vector<std::uint8_t> to_bytes() const;

  private:
    int n_;
    std::vector<cplx> amps_;
    void check_qubit(int q) const;
};

class DensityMatrix {
  public:
    DensityMatrix(Eigen::MatrixXcd entries, std::vector<int> qubits);

    const Eigen::MatrixXcd& entries() const { return m_; }
    const std::vector<int>& qubits() const { return qubits_; }
    double trace() const { return m_.trace().real(); }

    void validate(double tol = 1e-10) const;  // Hermitian, unit trace, PSD

    // -sum lambda ln lambda in nats (eigenvalues <= 1e-12 skipped, tiny
    // negatives clamped; trace must be 1 within 1e-6).
    double von_neumann_entropy() const;

  private:
    Eigen::MatrixXcd m_;
    std::vector<int> qubits_;
};

// I(A:B) = S(A) + S(B) - S(AB) in nats, for a pure state.
double qmi(const StateVector& state, const std::vector<int>& a,
           const std::vector<int>& b);
// Same for an explicit (possibly mixed) pair of subsystems: caller supplies
// already-accumulated density matrices.
double qmi(const DensityMatrix& rho_a, const DensityMatrix& rho_b,
           const DensityMatrix& rho_ab);

double entropy_nats_to_bits(double nats);

}  // namespace loccsim
