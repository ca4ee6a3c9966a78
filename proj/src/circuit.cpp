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
#include "loccsim/circuit.hpp"

#include <algorithm>
#include <stdexcept>

namespace loccsim {

std::optional<PauliString> remap_through(const PauliString& term,
                                         const std::map<int, int>& qubit_map,
                                         const std::map<int, int>& pinned) {
    std::map<int, PauliOp> word;
    double coeff = term.coefficient();
    for (const auto& [q, op] : term.word()) {
        auto live = qubit_map.find(q);
        if (live != qubit_map.end()) {
            word.emplace(live->second, op);
            continue;
        }
        auto pin = pinned.find(q);
        if (pin == pinned.end())
            throw std::logic_error("branch: term touches unknown qubit");
        if (op != PauliOp::Z) return std::nullopt;
        if (pin->second) coeff = -coeff;
    }
    return PauliString(std::move(word), coeff);
}

double Branch::expectation(const PauliString& term) const {
    auto mapped = remap_through(term, qubit_map, pinned);
    return mapped ? state.expectation(*mapped) : 0.0;
}

double Branch::expectation(const Hamiltonian& h) const {
    double e = 0.0;
    for (const auto& t : h.terms()) e += expectation(t);
    return e;
}

LoccCircuit::LoccCircuit(int qubit_count, std::vector<Stage> stages)
    : qubit_count_(qubit_count), stages_(std::move(stages)) {
    if (qubit_count <= 0 || qubit_count > kMaxQubits)
        throw std::invalid_argument("circuit: qubit count out of range");
    validate_and_index();
}

void LoccCircuit::validate_and_index() {
    last_use_.assign(static_cast<std::size_t>(qubit_count_), -1);
    std::set<int> slots_seen;
    std::set<int> measured;  // each qubit measured at most once
    int max_slot = -1;
    for (std::size_t s = 0; s < stages_.size(); ++s) {
        const int si = static_cast<int>(s);
        if (const auto* u = std::get_if<UnitaryLayer>(&stages_[s])) {
            std::set<int> layer_qubits;
            for (const auto& blk : u->blocks) {
                if (blk.qubits.empty() || blk.qubits.size() > 2)
                    throw std::invalid_argument("circuit: block must hold 1-2 qubits");
                for (int q : blk.qubits) {
                    if (q < 0 || q >= qubit_count_)
                        throw std::invalid_argument("circuit: qubit out of range");
                    if (!layer_qubits.insert(q).second)
                        throw std::invalid_argument("circuit: overlapping blocks in layer");
                    last_use_[static_cast<std::size_t>(q)] = si;
                }
                std::set<int> blk_set(blk.qubits.begin(), blk.qubits.end());
                for (const auto& g : blk.gates) {
                    if (g.generator.word().empty())
                        throw std::invalid_argument("circuit: identity generator");
                    for (const auto& [q, op] : g.generator.word())
                        if (!blk_set.count(q))
                            throw std::invalid_argument(
                                "circuit: generator escapes its block");
                    if (!g.fixed) {
                        if (g.slot < 0)
                            throw std::invalid_argument("circuit: negative theta slot");
                        max_slot = std::max(max_slot, g.slot);
                    }
                }
            }
        } else {
            const auto& m = std::get<MeasureLayer>(stages_[s]);
            if (m.qubits.size() != m.outcome_slot.size() || m.qubits.empty())
                throw std::invalid_argument("circuit: malformed measure layer");
            for (std::size_t i = 0; i < m.qubits.size(); ++i) {
                int q = m.qubits[i];
                int slot = m.outcome_slot[i];
                if (q < 0 || q >= qubit_count_)
                    throw std::invalid_argument("circuit: qubit out of range");
                if (!measured.insert(q).second)
                    throw std::invalid_argument("circuit: qubit measured twice");
                if (slot < 0)
                    throw std::invalid_argument("circuit: negative outcome slot");
                if (!slots_seen.insert(slot).second)
                    throw std::invalid_argument("circuit: outcome slot reused");
                if (static_cast<std::size_t>(slot) >= slot_origin_.size())
                    slot_origin_.resize(static_cast<std::size_t>(slot) + 1, {-1, -1});
                slot_origin_[static_cast<std::size_t>(slot)] = {si, q};
                last_use_[static_cast<std::size_t>(q)] = si;
            }
        }
    }
    outcome_len_ = static_cast<int>(slot_origin_.size());
    for (int slot = 0; slot < outcome_len_; ++slot)
        if (slot_origin_[static_cast<std::size_t>(slot)].first < 0)
            throw std::invalid_argument("circuit: outcome slots not contiguous");
    theta_len_ = max_slot + 1;
}

int LoccCircuit::depth() const {
    int d = 0;
    for (const auto& st : stages_) {
        const auto* u = std::get_if<UnitaryLayer>(&st);
        if (!u) continue;
        bool entangling = false;
        for (const auto& blk : u->blocks)
            for (const auto& g : blk.gates)
                if (g.generator.word().size() >= 2) entangling = true;
        if (entangling) ++d;
    }
    return d;
}

std::pair<int, int> LoccCircuit::slot_origin(int slot) const {
    if (slot < 0 || slot >= outcome_len_)
        throw std::out_of_range("circuit: outcome slot out of range");
    return slot_origin_[static_cast<std::size_t>(slot)];
}

void LoccCircuit::validate_causality(
    const std::vector<std::set<int>>& theta_to_bits) const {
    std::set<int> measured_slots;
    for (const auto& st : stages_) {
        if (const auto* u = std::get_if<UnitaryLayer>(&st)) {
            for (const auto& blk : u->blocks)
                for (const auto& g : blk.gates) {
                    if (g.fixed) continue;
                    if (static_cast<std::size_t>(g.slot) >= theta_to_bits.size())
                        throw std::logic_error("circuit: slot missing from protocol");
                    for (int bit : theta_to_bits[static_cast<std::size_t>(g.slot)])
                        if (!measured_slots.count(bit))
                            throw std::logic_error(
                                "circuit: gate reads a bit measured later");
                }
        } else {
            for (int slot : std::get<MeasureLayer>(st).outcome_slot)
                measured_slots.insert(slot);
        }
    }
}

ThetaResolver LoccCircuit::resolve_with(const LoccProtocol& protocol,
                                        std::vector<double> gamma) {
    return [protocol, gamma = std::move(gamma)](int slot, const Outcomes& v) {
        return protocol.eval_theta(slot, gamma, v);
    };
}

namespace {

struct ExecFrame {
    StateVector state;
    Outcomes v;
    double prob = 1.0;
    std::map<int, int> qubit_map;
    std::map<int, int> pinned;
};

}  // namespace

void LoccCircuit::enumerate_branches(
    const ThetaResolver& resolver,
    const std::function<void(const Branch&)>& visitor, double prune_eps,
    bool compact, const std::set<int>& keep, const StateVector* initial) const {
    if (prune_eps < 0) throw std::invalid_argument("circuit: negative prune_eps");

    ExecFrame root{initial ? *initial : StateVector(qubit_count_),
                   Outcomes(static_cast<std::size_t>(outcome_len_), 0)};
    if (root.state.qubit_count() != qubit_count_)
        throw std::invalid_argument("circuit: initial state size mismatch");
    for (int q = 0; q < qubit_count_; ++q) root.qubit_map[q] = q;

    // Depth-first over stages; recursion only at measure layers.
    std::function<void(ExecFrame&, std::size_t)> walk =
        [&](ExecFrame& frame, std::size_t stage) {
        for (std::size_t s = stage; s < stages_.size(); ++s) {
            if (const auto* u = std::get_if<UnitaryLayer>(&stages_[s])) {
                for (const auto& blk : u->blocks)
                    for (const auto& g : blk.gates) {
                        double theta = g.fixed ? g.angle : resolver(g.slot, frame.v);
                        std::map<int, PauliOp> word;
                        for (const auto& [q, op] : g.generator.word())
                            word.emplace(frame.qubit_map.at(q), op);
                        frame.state.apply_rotation(
                            PauliString(std::move(word), g.generator.coefficient()),
                            theta);
                    }
                continue;
            }
            const auto& m = std::get<MeasureLayer>(stages_[s]);
            std::vector<ExecFrame> frontier;
            frontier.push_back(std::move(frame));
            for (std::size_t i = 0; i < m.qubits.size(); ++i) {
                const int q = m.qubits[i];
                const int slot = m.outcome_slot[i];
                const bool droppable =
                    compact && last_use_[static_cast<std::size_t>(q)] ==
                                   static_cast<int>(s) &&
                    !keep.count(q);
                std::vector<ExecFrame> split;
                split.swap(frontier);
                for (auto& f : split) {
                    const int phys = f.qubit_map.at(q);
                    for (int outcome = 0; outcome < 2; ++outcome) {
                        // Copy keeps the pre-measurement state for the other
                        // outcome; the last copy could move, but measurement
                        // fan-out is not the hot path.
                        ExecFrame g2 = f;
                        auto res = g2.state.project(phys, outcome);
                        const double p = res.probability;  // cumulative norm
                        if (p <= prune_eps || p <= 1e-14) continue;
                        g2.prob = p;
                        g2.v[static_cast<std::size_t>(slot)] =
                            static_cast<std::uint8_t>(outcome);
                        if (droppable) {
                            g2.state = g2.state.drop_qubit(phys, outcome);
                            g2.qubit_map.erase(q);
                            for (auto& [lq, pq] : g2.qubit_map)
                                if (pq > phys) --pq;
                            g2.pinned[q] = outcome;
                        }
                        frontier.push_back(std::move(g2));
                    }
                }
            }
            for (std::size_t fi = 0; fi + 1 < frontier.size(); ++fi)
                walk(frontier[fi], s + 1);
            if (!frontier.empty()) {
                frame = std::move(frontier.back());
                continue;  // tail branch proceeds in this frame
            }
            return;  // all branches pruned
        }
        Branch leaf;
        leaf.v = frame.v;
        leaf.prob = frame.prob;
        leaf.qubit_map = frame.qubit_map;
        leaf.pinned = frame.pinned;
        leaf.state = std::move(frame.state);
        visitor(leaf);
    };
    walk(root, 0);
}

std::vector<Branch> LoccCircuit::all_branches(const ThetaResolver& resolver,
                                              double prune_eps, bool compact,
                                              const std::set<int>& keep,
                                              const StateVector* initial) const {
    std::vector<Branch> out;
    enumerate_branches(resolver, [&](const Branch& b) { out.push_back(b); },
                       prune_eps, compact, keep, initial);
    return out;
}

Branch LoccCircuit::run_postselected(const ThetaResolver& resolver,
                                     const Outcomes& v, bool compact,
                                     const std::set<int>& keep,
                                     const StateVector* initial) const {
    if (static_cast<int>(v.size()) != outcome_len_)
        throw std::invalid_argument("circuit: outcome length mismatch");
    ExecFrame f{initial ? *initial : StateVector(qubit_count_), v};
    if (f.state.qubit_count() != qubit_count_)
        throw std::invalid_argument("circuit: initial state size mismatch");
    for (int q = 0; q < qubit_count_; ++q) f.qubit_map[q] = q;

    bool dead = false;
    for (std::size_t s = 0; s < stages_.size() && !dead; ++s) {
        if (const auto* u = std::get_if<UnitaryLayer>(&stages_[s])) {
            for (const auto& blk : u->blocks)
                for (const auto& g : blk.gates) {
                    double theta = g.fixed ? g.angle : resolver(g.slot, f.v);
                    std::map<int, PauliOp> word;
                    for (const auto& [q, op] : g.generator.word())
                        word.emplace(f.qubit_map.at(q), op);
                    f.state.apply_rotation(
                        PauliString(std::move(word), g.generator.coefficient()),
                        theta);
                }
            continue;
        }
        const auto& m = std::get<MeasureLayer>(stages_[s]);
        for (std::size_t i = 0; i < m.qubits.size(); ++i) {
            const int q = m.qubits[i];
            const int phys = f.qubit_map.at(q);
            const int outcome = v[static_cast<std::size_t>(m.outcome_slot[i])];
            auto res = f.state.project(phys, outcome);
            f.prob = res.probability;  // cumulative norm
            if (res.probability <= 1e-14) {
                f.prob = 0.0;
                dead = true;
                break;
            }
            if (compact &&
                last_use_[static_cast<std::size_t>(q)] == static_cast<int>(s) &&
                !keep.count(q)) {
                f.state = f.state.drop_qubit(phys, outcome);
                f.qubit_map.erase(q);
                for (auto& [lq, pq] : f.qubit_map)
                    if (pq > phys) --pq;
                f.pinned[q] = outcome;
            }
        }
    }
    Branch b;
    b.v = v;
    b.prob = f.prob;
    b.qubit_map = std::move(f.qubit_map);
    b.pinned = std::move(f.pinned);
    if (dead) {
        StateVector zero(f.state.qubit_count());
        zero.scale(0.0);
        b.state = std::move(zero);
    } else {
        b.state = std::move(f.state);
    }
    return b;
}

Branch LoccCircuit::sample_run(const ThetaResolver& resolver,
                               std::mt19937_64& rng, bool compact,
                               const std::set<int>& keep,
                               const StateVector* initial) const {
    ExecFrame f{initial ? *initial : StateVector(qubit_count_),
                Outcomes(static_cast<std::size_t>(outcome_len_), 0)};
    if (f.state.qubit_count() != qubit_count_)
        throw std::invalid_argument("circuit: initial state size mismatch");
    for (int q = 0; q < qubit_count_; ++q) f.qubit_map[q] = q;

    for (std::size_t s = 0; s < stages_.size(); ++s) {
        if (const auto* u = std::get_if<UnitaryLayer>(&stages_[s])) {
            for (const auto& blk : u->blocks)
                for (const auto& g : blk.gates) {
                    double theta = g.fixed ? g.angle : resolver(g.slot, f.v);
                    std::map<int, PauliOp> word;
                    for (const auto& [q, op] : g.generator.word())
                        word.emplace(f.qubit_map.at(q), op);
                    f.state.apply_rotation(
                        PauliString(std::move(word), g.generator.coefficient()),
                        theta);
                }
            continue;
        }
        const auto& m = std::get<MeasureLayer>(stages_[s]);
        for (std::size_t i = 0; i < m.qubits.size(); ++i) {
            const int q = m.qubits[i];
            const int phys = f.qubit_map.at(q);
            auto res = f.state.sample(phys, rng);
            f.prob *= res.probability;
            f.v[static_cast<std::size_t>(m.outcome_slot[i])] =
                static_cast<std::uint8_t>(res.outcome);
            if (compact &&
                last_use_[static_cast<std::size_t>(q)] == static_cast<int>(s) &&
                !keep.count(q)) {
                f.state = f.state.drop_qubit(phys, res.outcome);
                f.qubit_map.erase(q);
                for (auto& [lq, pq] : f.qubit_map)
                    if (pq > phys) --pq;
                f.pinned[q] = res.outcome;
            }
        }
    }
    Branch b;
    b.v = std::move(f.v);
    b.prob = f.prob;
    b.qubit_map = std::move(f.qubit_map);
    b.pinned = std::move(f.pinned);
    b.state = std::move(f.state);
    return b;
}

ConeReport LoccCircuit::backward_light_cone(
    const std::set<int>& observable_support,
    const std::vector<std::set<int>>& theta_to_bits) const {
    for (int q : observable_support)
        if (q < 0 || q >= qubit_count_)
            throw std::invalid_argument("circuit: cone support out of range");
    ConeReport rep;
    rep.cone_qubits = observable_support;
    for (std::size_t si = stages_.size(); si-- > 0;) {
        if (const auto* u = std::get_if<UnitaryLayer>(&stages_[si])) {
            for (const auto& blk : u->blocks) {
                bool touches = false;
                for (int q : blk.qubits)
                    if (rep.cone_qubits.count(q)) touches = true;
                if (!touches) continue;
                for (int q : blk.qubits) rep.cone_qubits.insert(q);
                // Classical edges: a feedforward gate in the cone depends on
                // the measured qubits behind the bits its theta reads.
                for (const auto& g : blk.gates) {
                    if (g.fixed) continue;
                    if (static_cast<std::size_t>(g.slot) >= theta_to_bits.size())
                        throw std::invalid_argument(
                            "circuit: slot missing from theta_to_bits");
                    for (int bit : theta_to_bits[static_cast<std::size_t>(g.slot)])
                        rep.cone_qubits.insert(slot_origin(bit).second);
                }
            }
        } else {
            const auto& m = std::get<MeasureLayer>(stages_[si]);
            for (int q : m.qubits)
                if (rep.cone_qubits.count(q)) ++rep.projector_count;
        }
    }
    return rep;
}

}  // namespace loccsim
