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
#include <map>
#include <set>
#include <string>
#include <vector>

#include "loccsim/kernels.hpp"

namespace loccsim {

enum class PauliOp : char { X = 'X', Y = 'Y', Z = 'Z' };

// A weighted Pauli word, stored sparsely as qubit -> letter. Identity sites
// are never stored. Immutable in spirit: all mutation happens at build time.
class PauliString {
  public:
    PauliString() = default;
    PauliString(std::map<int, PauliOp> word, double coefficient);

    const std::map<int, PauliOp>& word() const { return word_; }
    double coefficient() const { return coeff_; }
    bool is_identity() const { return word_.empty(); }

    std::set<int> support() const;
    int max_qubit() const;  // -1 for identity

    // Bitmask form for the statevector kernels (requires indices < 64).
    kernels::PauliMasks masks() const;

    // +/- coefficient from measured bits: each site contributes (-1)^bit,
    // bits are outcomes in the word's per-site measurement basis.
    double eigenvalue(const std::map<int, int>& bits) const;

    // "0.5 X0 Z3" style token form (coefficient first).
    std::string to_string() const;
    static PauliString parse(const std::string& line);

    bool operator==(const PauliString& o) const {
        return word_ == o.word_ && coeff_ == o.coeff_;
    }

  private:
    std::map<int, PauliOp> word_;
    double coeff_ = 1.0;
};

// An ordered sum of Pauli words over qubits [0, qubit_count). Terms are kept
// in a canonical sort so serialized output is byte-stable.
class Hamiltonian {
  public:
    Hamiltonian(std::vector<PauliString> terms, int qubit_count);

    const std::vector<PauliString>& terms() const { return terms_; }
    int qubit_count() const { return n_; }

    // max_i |supp(H_i)|; throws on an empty term list.
    int locality() const;

    std::string serialize() const;  // one term per line, header "qubits N"
    static Hamiltonian parse(const std::string& text);

    // FNV-1a over the canonical serialization; keys golden-value caches.
    std::uint64_t hash() const;

    bool operator==(const Hamiltonian& o) const {
        return n_ == o.n_ && terms_ == o.terms_;
    }

  private:
    std::vector<PauliString> terms_;
    int n_ = 0;
};

std::uint64_t fnv1a(const std::string& s);

}  // namespace loccsim
