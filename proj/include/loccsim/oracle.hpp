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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "loccsim/pauli.hpp"
#include "loccsim/statevector.hpp"

namespace loccsim {

// Ground-truth spectral data for a desk-scale Hamiltonian.
struct SpectrumResult {
    std::vector<double> eigenvalues;  // lowest k, ascending
    std::vector<StateVector> states;  // matching eigenvectors, normalized
    double gap = 0.0;                 // eigenvalues[1] - eigenvalues[0]
    int degeneracy = 1;  // eigenvalues within 1e-9 of the ground energy
};

// Lowest-k eigensolve. Primary path is a restarted, fully reorthogonalized
// Lanczos iteration on the matrix-free Pauli-sum operator (n <= 18), with
// deflation for the higher states; for n <= 10 a dense eigensolve runs as a
// cross-check and both must agree within 1e-8. Every returned pair satisfies
// ||H psi - E psi|| <= 1e-8. Throws std::runtime_error on non-convergence.
SpectrumResult ground(const Hamiltonian& h, int k = 2);

// Quantum mutual information I(A:B) (nats) of the oracle ground state.
// Requires a unique ground state: throws std::runtime_error
// ("degenerate ground space") when the spectral gap is <= 1e-9.
double ground_qmi(const Hamiltonian& h, const std::vector<int>& a,
                  const std::vector<int>& b);

// H |in> accumulated matrix-free, one Pauli term at a time.
StateVector apply_hamiltonian(const Hamiltonian& h, const StateVector& in);

// Ground-energy cache keyed by the FNV-1a hash of the canonical Hamiltonian
// serialization, persisted as JSON so repeated CLI runs skip the eigensolve.
class GoldenCache {
  public:
    explicit GoldenCache(std::string path);

    std::optional<double> lookup(const Hamiltonian& h) const;
    // Stores and persists immediately.
    void store(const Hamiltonian& h, double e0);
    // Cached value if present, else ground(h) (storing the result).
    double ground_energy(const Hamiltonian& h);

  private:
    std::string path_;
    std::map<std::string, double> entries_;
};

}  // namespace loccsim
