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

#include <cstdint>
#include <random>
#include <vector>

#include "loccsim/circuit.hpp"
#include "loccsim/protocol.hpp"

namespace loccsim {

// The branch-energy derivative matrix G^Q (rows: outcome strings v encoded as
// integers, bit i = outcome slot i; columns: theta indices) and the protocol
// Jacobian matrices G^{C_k} of the same shape. Rows of gq for
// zero-probability branches are exactly zero. The energy gradient is
// d E / d gamma_k = <G^{C_k}, G^Q>_F.
struct GradientMatrices {
    int outcome_len = 0;
    int theta_len = 0;
    int gamma_len = 0;
    std::vector<std::vector<double>> gq;               // 2^m x |theta|
    std::vector<std::vector<std::vector<double>>> gc;  // |gamma| x 2^m x |theta|

    std::vector<double> contract() const;  // Frobenius inner products per k
};

struct EnergyGradient {
    double energy = 0.0;
    std::vector<double> grad;
};

struct SampledGradient {
    std::vector<double> grad;
    long executions = 0;  // circuit runs consumed; always 2 * |theta| * M
};

enum class GradMethod { Auto, Adjoint, Shift };

enum class EstimatorMode { Shot, Branch };

// Unnormalized branch energy Tr[H Phi~_{theta,v}]: run the circuit with the
// fixed angle vector theta, post-selecting every measurement on v.
double branch_energy(const LoccCircuit& circuit, const std::vector<double>& theta,
                     const Outcomes& v, const Hamiltonian& h,
                     const StateVector* initial = nullptr);

// The mid-circuit parameter-shift rule on the unnormalized branch energy:
// d Tr[H Phi~_{theta,v}] / d theta_j
//   = (Tr[H Phi~_{theta + pi/2 e_j, v}] - Tr[H Phi~_{theta - pi/2 e_j, v}]) / 2.
double branch_theta_gradient(const LoccCircuit& circuit,
                             const std::vector<double>& theta, const Outcomes& v,
                             const Hamiltonian& h, int j,
                             const StateVector* initial = nullptr);

// Explicit G^Q / G^{C_k} construction by per-branch shifts. Exponential in the
// outcome count; refuses m > 16.
GradientMatrices gradient_matrices(const LoccCircuit& circuit,
                                   const LoccProtocol& protocol,
                                   const std::vector<double>& gamma,
                                   const Hamiltonian& h,
                                   const StateVector* initial = nullptr);

// Total energy Tr[H Psi_gamma] = sum over branches of the unnormalized branch
// energies.
double energy(const LoccCircuit& circuit, const LoccProtocol& protocol,
              const std::vector<double>& gamma, const Hamiltonian& h,
              const StateVector* initial = nullptr);

// Exact gradient of Tr[H Psi_gamma]. Method Shift evaluates the per-branch
// parameter-shift sums directly (one branch enumeration per shifted
// protocol). Method Adjoint uses a reverse-mode sweep over the unitary prefix
// combined with per-leaf shifts for feedforward angles; it requires the
// circuit to be a unitary prefix, one contiguous run of measure layers, and a
// unitary suffix, with every theta slot bound to exactly one gate and prefix
// slots reading no outcome bits. Auto picks Adjoint when eligible. Both
// methods compute the same value (equivalence-tested).
EnergyGradient energy_and_gradient(const LoccCircuit& circuit,
                                   const LoccProtocol& protocol,
                                   const std::vector<double>& gamma,
                                   const Hamiltonian& h,
                                   GradMethod method = GradMethod::Auto,
                                   const StateVector* initial = nullptr);

std::vector<double> exact_gradient(const LoccCircuit& circuit,
                                   const LoccProtocol& protocol,
                                   const std::vector<double>& gamma,
                                   const Hamiltonian& h,
                                   GradMethod method = GradMethod::Auto,
                                   const StateVector* initial = nullptr);

// Sampling estimator: for each theta index i and sign, draw M trajectories
// under the shifted protocol, record (v, c), and reweight by the protocol
// Jacobian: G_k = sum_i (G_{i+} - G_{i-}) / M with
// G_{i+-} = sum over shots of (1/2) (dg_i/dgamma_k)(v) * c.
// Branch mode: c = exact conditional energy of the sampled branch (unbiased
// for exact_gradient). Shot mode: c = one-shot eigenvalue estimate, each
// Hamiltonian term measured in its rotated basis on an independent sub-shot
// of the final state. Exactly 2 * |theta| * M circuit executions.
SampledGradient sampled_gradient(const LoccCircuit& circuit,
                                 const LoccProtocol& protocol,
                                 const std::vector<double>& gamma,
                                 const Hamiltonian& h, int shots,
                                 std::mt19937_64& rng,
                                 EstimatorMode mode = EstimatorMode::Branch,
                                 const StateVector* initial = nullptr);

}  // namespace loccsim
