#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>

#include "loccsim/circuit.hpp"
#include "test_circuits_util.hpp"
#include "test_util.hpp"

using namespace loccsim;
namespace tu = testutil;

namespace {

std::string key_of(const Outcomes& v) {
    std::string s;
    for (auto b : v) s.push_back(b ? '1' : '0');
    return s;
}

// Independent dense enumeration: Eigen matrices for every gate, explicit
// diagonal projectors at measurements. `within` indexes the next unmeasured
// qubit inside a measure layer.
void dense_enumerate(const LoccCircuit& c, const ThetaResolver& resolver,
                     std::size_t stage, std::size_t within, tu::Vec state,
                     Outcomes v, std::map<std::string, tu::Vec>& leaves) {
    const int n = c.qubit_count();
    for (std::size_t s = stage; s < c.stages().size(); ++s, within = 0) {
        if (const auto* u = std::get_if<UnitaryLayer>(&c.stages()[s])) {
            for (const auto& blk : u->blocks)
                for (const auto& g : blk.gates) {
                    const double theta = g.fixed ? g.angle : resolver(g.slot, v);
                    state = tu::dense_rotation(g.generator, n, theta) * state;
                }
            continue;
        }
        const auto& m = std::get<MeasureLayer>(c.stages()[s]);
        if (within < m.qubits.size()) {
            const int q = m.qubits[within];
            for (int outcome = 0; outcome < 2; ++outcome) {
                tu::Vec proj = state;
                for (Eigen::Index z = 0; z < proj.size(); ++z)
                    if (((z >> q) & 1) != outcome) proj[z] = 0.0;
                if (proj.squaredNorm() <= 1e-14) continue;
                Outcomes v2 = v;
                v2[static_cast<std::size_t>(m.outcome_slot[within])] =
                    static_cast<std::uint8_t>(outcome);
                dense_enumerate(c, resolver, s, within + 1, proj, v2, leaves);
            }
            return;
        }
    }
    leaves[key_of(v)] = state;
}

}  // namespace

TEST_CASE("branch enumeration matches the dense oracle") {
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 15; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 3);
        const int m = static_cast<int>(rng() % 3);
        auto inst = tu::random_instance(n, m, rng, trial % 2 == 0);
        const auto resolver =
            LoccCircuit::resolve_with(inst.protocol, inst.gamma);

        std::map<std::string, tu::Vec> expected;
        dense_enumerate(inst.circuit, resolver, 0, 0,
                        tu::to_eigen(StateVector(n)),
                        Outcomes(static_cast<std::size_t>(
                                     inst.circuit.outcome_len()),
                                 0),
                        expected);

        const auto branches =
            inst.circuit.all_branches(resolver, 0.0, /*compact=*/false);
        CHECK(branches.size() == expected.size());
        double total = 0.0;
        for (const auto& b : branches) {
            REQUIRE(expected.count(key_of(b.v)) == 1);
            const auto& ev = expected.at(key_of(b.v));
            CHECK((tu::to_eigen(b.state) - ev).norm() < 1e-10);
            CHECK(b.prob == doctest::Approx(ev.squaredNorm()).epsilon(1e-10));
            total += b.prob;
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("ancilla compaction preserves probabilities and energies") {
    std::mt19937_64 rng(62);
    for (int trial = 0; trial < 15; ++trial) {
        const int n = 3 + static_cast<int>(rng() % 3);
        const int m = 1 + static_cast<int>(rng() % 3);
        auto inst = tu::random_instance(n, m, rng, trial % 2 == 0);
        const auto resolver =
            LoccCircuit::resolve_with(inst.protocol, inst.gamma);
        std::set<int> keep;
        for (const auto& t : inst.h.terms())
            for (const auto& [q, op] : t.word()) keep.insert(q);

        auto plain = inst.circuit.all_branches(resolver, 0.0, false);
        auto compact = inst.circuit.all_branches(resolver, 0.0, true, keep);
        REQUIRE(plain.size() == compact.size());
        std::map<std::string, const Branch*> by_v;
        for (const auto& b : plain) by_v[key_of(b.v)] = &b;
        for (const auto& b : compact) {
            const Branch* ref = by_v.at(key_of(b.v));
            CHECK(b.prob == doctest::Approx(ref->prob).epsilon(1e-10));
            CHECK(b.expectation(inst.h) ==
                  doctest::Approx(ref->expectation(inst.h)).epsilon(1e-9));
        }
    }
}

TEST_CASE("run_postselected reproduces the enumerated branch") {
    std::mt19937_64 rng(63);
    auto inst = tu::random_instance(4, 3, rng, true);
    const auto resolver = LoccCircuit::resolve_with(inst.protocol, inst.gamma);
    for (const auto& b : inst.circuit.all_branches(resolver, 0.0, false)) {
        auto single = inst.circuit.run_postselected(resolver, b.v, false);
        CHECK(single.prob == doctest::Approx(b.prob).epsilon(1e-10));
        CHECK((tu::to_eigen(single.state) - tu::to_eigen(b.state)).norm() <
              1e-10);
    }
    // A dead branch comes back with probability zero.
    StateVector plus0(2);  // |00>
    LoccCircuit tiny(2, {MeasureLayer{{0}, {0}}});
    auto dead = tiny.run_postselected([](int, const Outcomes&) { return 0.0; },
                                      {1}, false);
    CHECK(dead.prob == 0.0);
}

TEST_CASE("sample_run follows the branch distribution") {
    std::mt19937_64 rng(64);
    auto inst = tu::random_instance(3, 2, rng, true);
    const auto resolver = LoccCircuit::resolve_with(inst.protocol, inst.gamma);
    std::map<std::string, double> probs;
    for (const auto& b : inst.circuit.all_branches(resolver))
        probs[key_of(b.v)] = b.prob;

    std::map<std::string, int> counts;
    const int shots = 6000;
    for (int i = 0; i < shots; ++i) {
        auto b = inst.circuit.sample_run(resolver, rng);
        counts[key_of(b.v)]++;
        CHECK(b.state.norm_sq() == doctest::Approx(1.0).epsilon(1e-9));
    }
    for (const auto& [k, p] : probs) {
        const double freq = static_cast<double>(counts[k]) / shots;
        CHECK(std::abs(freq - p) < 4.0 * std::sqrt(p * (1 - p) / shots) + 2e-3);
    }
}

TEST_CASE("depth counts entangling layers only") {
    const auto zz = PauliString::parse("1.0 Z0 Z1");
    const auto x0 = PauliString::parse("1.0 X0");
    UnitaryLayer ent{{Block{{0, 1}, {GateSlot{zz, true, 0.3, -1}}}}};
    UnitaryLayer singles{{Block{{0}, {GateSlot{x0, true, 0.1, -1}}}}};
    LoccCircuit c(2, {singles, ent, MeasureLayer{{1}, {0}}, singles, ent});
    CHECK(c.depth() == 2);
    CHECK(c.outcome_len() == 1);
    CHECK(c.slot_origin(0) == std::pair<int, int>{2, 1});
}

TEST_CASE("backward light cone and projector count") {
    // q0 -entangle- q1; measure q1; feedforward on q2 reads the bit.
    const auto zz01 = PauliString::parse("1.0 Z0 Z1");
    const auto x2 = PauliString::parse("1.0 X2");
    UnitaryLayer ent{{Block{{0, 1}, {GateSlot{zz01, true, 0.4, -1}}}}};
    UnitaryLayer ff{{Block{{2}, {GateSlot{x2, false, 0.0, 0}}}}};
    LoccCircuit c(3, {ent, MeasureLayer{{1}, {0}}, ff});
    const std::vector<std::set<int>> bits{{0}};  // theta_0 reads bit 0

    auto rep = c.backward_light_cone({2}, bits);
    CHECK(rep.projector_count == 1);
    CHECK(rep.cone_qubits == std::set<int>{0, 1, 2});

    // An observable on q0 never sees the projector: dephasing on q1 does not
    // change the marginal on q0.
    auto rep0 = c.backward_light_cone({0}, bits);
    CHECK(rep0.projector_count == 0);
    CHECK(rep0.cone_qubits == std::set<int>{0, 1});
}

TEST_CASE("structural validation rejects malformed circuits") {
    const auto zz = PauliString::parse("1.0 Z0 Z1");
    const auto z2 = PauliString::parse("1.0 Z2");
    // Overlapping blocks in one layer.
    CHECK_THROWS(LoccCircuit(
        2, {UnitaryLayer{{Block{{0, 1}, {GateSlot{zz, true, 0.1, -1}}},
                          Block{{1}, {GateSlot{zz, true, 0.1, -1}}}}}}));
    // Generator escaping its block.
    CHECK_THROWS(LoccCircuit(
        3, {UnitaryLayer{{Block{{0, 1}, {GateSlot{z2, true, 0.1, -1}}}}}}));
    // Qubit measured twice.
    CHECK_THROWS(LoccCircuit(2, {MeasureLayer{{0}, {0}}, MeasureLayer{{0}, {1}}}));
    // Outcome slots not contiguous.
    CHECK_THROWS(LoccCircuit(2, {MeasureLayer{{0}, {1}}}));
}

TEST_CASE("causality validation catches bits read before measurement") {
    const auto x0 = PauliString::parse("1.0 X0");
    UnitaryLayer ff{{Block{{0}, {GateSlot{x0, false, 0.0, 0}}}}};
    LoccCircuit bad(2, {ff, MeasureLayer{{1}, {0}}});
    const std::vector<std::set<int>> reads_bit{{0}};
    CHECK_THROWS(bad.validate_causality(reads_bit));
    const std::vector<std::set<int>> reads_none{{}};
    CHECK_NOTHROW(bad.validate_causality(reads_none));
}
