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

#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <variant>
#include <vector>

#include "loccsim/pauli.hpp"
#include "loccsim/protocol.hpp"
#include "loccsim/statevector.hpp"

namespace loccsim {

// One parameterized rotation exp(-i angle/2 * generator). The angle is either
// fixed at circuit-build time or bound to a feedforward slot theta_j at run
// time. The generator coefficient multiplies the angle.
struct GateSlot {
    PauliString generator;
    bool fixed = true;
    double angle = 0.0;  // used when fixed
    int slot = -1;       // theta index when !fixed
};

// A block is a short gate sequence confined to `qubits` (one or two of them).
// Blocks within a layer act on pairwise disjoint qubits, so a layer is one
// parallel time step.
struct Block {
    std::vector<int> qubits;
    std::vector<GateSlot> gates;
};

struct UnitaryLayer {
    std::vector<Block> blocks;
};

// Mid-circuit computational-basis measurement. Outcome of qubits[i] is
// written to outcome slot outcome_slot[i].
struct MeasureLayer {
    std::vector<int> qubits;
    std::vector<int> outcome_slot;
};

using Stage = std::variant<UnitaryLayer, MeasureLayer>;

// theta(slot, v) where v holds the outcomes recorded so far (slots not yet
// measured are 0 and, by causality validation, never read).
using ThetaResolver = std::function<double(int slot, const Outcomes& v)>;

// A leaf of the measurement tree. `state` is the UNNORMALIZED post-selected
// state; prob = <psi|psi> is the branch probability. When ancilla compaction
// dropped measured qubits, `qubit_map` sends each live logical qubit to its
// index inside `state` and `pinned` records the outcomes of dropped qubits.
struct Branch {
    Outcomes v;
    StateVector state;
    double prob = 0.0;
    std::map<int, int> qubit_map;
    std::map<int, int> pinned;

    // <psi|H|psi> (unnormalized) with logical qubits remapped through
    // qubit_map; Z factors on pinned qubits fold into the coefficient and
    // X/Y on a pinned qubit kill the term.
    double expectation(const Hamiltonian& h) const;
    double expectation(const PauliString& term) const;
};

// Remap a Pauli word through a live-qubit map: Z on a pinned qubit folds its
// eigenvalue into the coefficient, X/Y on a pinned qubit annihilates the term
// (returns nullopt). Throws if a qubit is neither live nor pinned.
std::optional<PauliString> remap_through(const PauliString& term,
                                         const std::map<int, int>& qubit_map,
                                         const std::map<int, int>& pinned);

struct ConeReport {
    std::set<int> cone_qubits;  // qubits in the cone at the circuit input
    int projector_count = 0;    // chi: measurement events inside the cone
};

class LoccCircuit {
  public:
    LoccCircuit(int qubit_count, std::vector<Stage> stages);

    int qubit_count() const { return qubit_count_; }
    int theta_len() const { return theta_len_; }
    int outcome_len() const { return outcome_len_; }
    const std::vector<Stage>& stages() const { return stages_; }

    // Entangling depth: layers containing at least one multi-qubit generator.
    // Single-qubit-only layers (e.g. the feedforward corrections) count zero.
    int depth() const;

    // Measurement event for an outcome slot: (stage index, qubit).
    std::pair<int, int> slot_origin(int slot) const;

    // Enumerate all measurement branches depth-first, invoking the visitor on
    // each leaf. Branches whose probability falls to <= prune_eps are
    // discarded (exact zero branches always are). `compact` drops measured
    // qubits that no later stage touches. `keep` lists logical qubits that
    // must never be dropped (e.g. the Hamiltonian support).
    void enumerate_branches(const ThetaResolver& resolver,
                            const std::function<void(const Branch&)>& visitor,
                            double prune_eps = 0.0, bool compact = true,
                            const std::set<int>& keep = {},
                            const StateVector* initial = nullptr) const;

    std::vector<Branch> all_branches(const ThetaResolver& resolver,
                                     double prune_eps = 0.0,
                                     bool compact = true,
                                     const std::set<int>& keep = {},
                                     const StateVector* initial = nullptr) const;

    // Single post-selected run: every measurement is projected onto the
    // outcome prescribed by v. The returned state is unnormalized; prob is
    // the branch probability (0 for a dead branch).
    Branch run_postselected(const ThetaResolver& resolver, const Outcomes& v,
                            bool compact = true, const std::set<int>& keep = {},
                            const StateVector* initial = nullptr) const;

    // One Born-rule trajectory; the returned state is normalized and prob is
    // the product of the sampled outcome probabilities.
    Branch sample_run(const ThetaResolver& resolver, std::mt19937_64& rng,
                      bool compact = true, const std::set<int>& keep = {},
                      const StateVector* initial = nullptr) const;

    // Backward light cone of `observable_support`. `theta_to_bits` (from
    // LoccProtocol::structural_supports) supplies the classical edges: a
    // slot-bound gate inside the cone pulls the measured qubits of the bits
    // it reads into the cone.
    ConeReport backward_light_cone(
        const std::set<int>& observable_support,
        const std::vector<std::set<int>>& theta_to_bits) const;

    // Check that every slot-bound gate only reads outcome bits measured in an
    // earlier stage (theta_to_bits from LoccProtocol::structural_supports).
    // Throws std::logic_error on a causality violation.
    void validate_causality(
        const std::vector<std::set<int>>& theta_to_bits) const;

    // Adapt a protocol + gamma into a resolver.
    static ThetaResolver resolve_with(const LoccProtocol& protocol,
                                      std::vector<double> gamma);

  private:
    void validate_and_index();

    int qubit_count_ = 0;
    int theta_len_ = 0;
    int outcome_len_ = 0;
    std::vector<Stage> stages_;
    std::vector<std::pair<int, int>> slot_origin_;  // slot -> (stage, qubit)
    std::vector<int> last_use_;                     // qubit -> last stage index
};

}  // namespace loccsim
