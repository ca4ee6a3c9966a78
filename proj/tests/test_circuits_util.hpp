// Random LOCC circuit + protocol instances for the property suites, built to
// satisfy the structural validity rules (disjoint blocks, measure-once,
// causal feedforward).
#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "loccsim/circuit.hpp"
#include "loccsim/protocol.hpp"
#include "test_util.hpp"

namespace testutil {

struct RandomInstance {
    loccsim::LoccCircuit circuit;
    loccsim::LoccProtocol protocol;
    std::vector<double> gamma;
    loccsim::Hamiltonian h;
};

// n qubits, m measured qubits, a handful of unitary layers. When
// single_measure_block is true the circuit has the prefix / measure / suffix
// shape; otherwise measurements are interleaved with unitary layers.
inline RandomInstance random_instance(int n, int m, std::mt19937_64& rng,
                                      bool single_measure_block) {
    using namespace loccsim;
    std::uniform_real_distribution<double> ang(-3.0, 3.0);
    std::uniform_real_distribution<double> gdist(-1.0, 1.0);

    std::vector<int> qubits(static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q) qubits[static_cast<std::size_t>(q)] = q;

    std::vector<Stage> stages;
    std::vector<std::vector<LoccProtocol::Feature>> per_theta;
    std::vector<int> measured_slots;  // bits available to later gates
    const int gamma_len = 3 + static_cast<int>(rng() % 4);

    auto add_gate = [&](Block& blk) {
        // Random generator word within the block's qubits.
        std::map<int, PauliOp> word;
        const char ops[] = {'X', 'Y', 'Z'};
        for (int q : blk.qubits)
            if (word.empty() || (rng() & 1))
                word[q] = static_cast<PauliOp>(ops[rng() % 3]);
        GateSlot g;
        g.generator = PauliString(word, 1.0);
        if (per_theta.empty() || rng() % 10 < 7) {
            g.fixed = false;
            g.slot = static_cast<int>(per_theta.size());
            std::vector<LoccProtocol::Feature> feats;
            feats.push_back({LoccProtocol::Feature::Kind::Bias, {},
                             static_cast<int>(rng() % gamma_len)});
            for (int bit : measured_slots)
                if (rng() % 3 == 0)
                    feats.push_back({LoccProtocol::Feature::Kind::Bit, {bit},
                                     static_cast<int>(rng() % gamma_len)});
            if (measured_slots.size() >= 2 && rng() % 3 == 0)
                feats.push_back({LoccProtocol::Feature::Kind::Parity,
                                 {measured_slots[0], measured_slots[1]},
                                 static_cast<int>(rng() % gamma_len)});
            per_theta.push_back(std::move(feats));
        } else {
            g.fixed = true;
            g.angle = ang(rng);
        }
        blk.gates.push_back(std::move(g));
    };

    auto add_unitary_layer = [&] {
        UnitaryLayer layer;
        auto perm = qubits;
        std::shuffle(perm.begin(), perm.end(), rng);
        std::size_t i = 0;
        while (i < perm.size()) {
            Block blk;
            if (i + 1 < perm.size() && (rng() & 1)) {
                blk.qubits = {perm[i], perm[i + 1]};
                i += 2;
            } else {
                blk.qubits = {perm[i]};
                i += 1;
            }
            const int gates = 1 + static_cast<int>(rng() % 2);
            for (int g = 0; g < gates; ++g) add_gate(blk);
            layer.blocks.push_back(std::move(blk));
            if (rng() % 3 == 0) break;  // leave some qubits idle
        }
        stages.push_back(std::move(layer));
    };

    std::vector<int> to_measure = qubits;
    std::shuffle(to_measure.begin(), to_measure.end(), rng);
    to_measure.resize(static_cast<std::size_t>(m));

    add_unitary_layer();
    if (single_measure_block) {
        add_unitary_layer();
        if (m > 0) {
            MeasureLayer ml;
            for (int q : to_measure) {
                ml.qubits.push_back(q);
                ml.outcome_slot.push_back(static_cast<int>(measured_slots.size()));
                measured_slots.push_back(static_cast<int>(measured_slots.size()));
            }
            stages.push_back(std::move(ml));
        }
        add_unitary_layer();
    } else {
        for (int q : to_measure) {
            MeasureLayer ml;
            ml.qubits.push_back(q);
            ml.outcome_slot.push_back(static_cast<int>(measured_slots.size()));
            measured_slots.push_back(static_cast<int>(measured_slots.size()));
            stages.push_back(std::move(ml));
            add_unitary_layer();
        }
    }

    LoccCircuit circuit(n, std::move(stages));
    auto protocol = LoccProtocol::affine(
        gamma_len, static_cast<int>(measured_slots.size()), per_theta);
    std::vector<double> gamma(static_cast<std::size_t>(gamma_len));
    for (auto& g : gamma) g = gdist(rng);
    auto h = random_hamiltonian(n, 3 + static_cast<int>(rng() % 3), rng);
    return {std::move(circuit), std::move(protocol), std::move(gamma),
            std::move(h)};
}

}  // namespace testutil
