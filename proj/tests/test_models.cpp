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
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>
#include <random>

#include "loccsim/gradient.hpp"
#include "loccsim/models.hpp"
#include "test_util.hpp"

using namespace loccsim;
using namespace testutil;

namespace {

double ground_energy(const Hamiltonian& h) {
    Eigen::SelfAdjointEigenSolver<Mat> es(dense_hamiltonian(h));
    return es.eigenvalues()(0);
}

double spectral_gap(const Hamiltonian& h) {
    Eigen::SelfAdjointEigenSolver<Mat> es(dense_hamiltonian(h));
    return es.eigenvalues()(1) - es.eigenvalues()(0);
}

// The 4x4 unitary realized by a single two-qubit block at the given angles.
Mat block_unitary(const Block& block, const std::vector<double>& theta) {
    LoccCircuit c(2, {UnitaryLayer{{block}}});
    Mat u(4, 4);
    for (int b = 0; b < 4; ++b) {
        std::string bits = {char('0' + (b & 1)), char('0' + (b >> 1))};
        StateVector init = StateVector::computational(2, bits);
        auto resolver = [&](int slot, const Outcomes&) {
            return theta[static_cast<std::size_t>(slot)];
        };
        auto branches = c.all_branches(resolver, 0.0, false, {}, &init);
        REQUIRE(branches.size() == 1);
        u.col(b) = to_eigen(branches[0].state);
    }
    return u;
}

// |G1| Makhlin invariant: 1 for local (single-qubit) gates, 0 for CNOT.
double makhlin_g1_abs(Mat u) {
    using namespace std::complex_literals;
    Mat q(4, 4);
    q << 1, 0, 0, 1i, 0, 1i, 1, 0, 0, 1i, -1, 0, 1, 0, 0, -1i;
    q /= std::sqrt(2.0);
    u /= std::pow(u.determinant(), 0.25);
    Mat ub = q.adjoint() * u * q;
    Mat m = ub.transpose() * ub;
    std::complex<double> tr = m.trace();
    return std::abs(tr * tr) / 16.0;
}

bool words_commute(const PauliString& a, const PauliString& b) {
    int anti = 0;
    for (const auto& [q, op] : a.word()) {
        auto it = b.word().find(q);
        if (it != b.word().end() && it->second != op) ++anti;
    }
    return anti % 2 == 0;
}

}  // namespace

TEST_CASE("ghz_parent structure and stabilizer limit") {
    auto h = ghz_parent(8, 16.0, 0.0, PauliOp::X);
    CHECK(h.qubit_count() == 8);
    CHECK(h.terms().size() == 7 + 1 + 8);
    CHECK(ground_energy(h) == doctest::Approx(-23.0).epsilon(1e-12));
    CHECK(spectral_gap(h) > 1.0);

    auto h4 = ghz_parent(4, 16.0, 0.3, PauliOp::Y);
    CHECK(h4.terms().size() == 3 + 1 + 4);
    // The stabilizer part alone floors at -(1-l)*3 - (h-l) = -17.8; the Y
    // perturbation can only lower the ground energy, by at most l*n = 1.2.
    double e4 = ground_energy(h4);
    CHECK(e4 < -17.8);
    CHECK(e4 > -19.0);
    CHECK_THROWS(ghz_parent(8, 16.0, 1.5, PauliOp::X));
    CHECK_THROWS(ghz_parent(1, 16.0, 0.0, PauliOp::X));
}

TEST_CASE("tfim closed forms") {
    CHECK(ground_energy(tfim(8, 0.0)) == doctest::Approx(-7.0).epsilon(1e-12));
    CHECK(ground_energy(tfim(2, 1.0)) ==
          doctest::Approx(-std::sqrt(5.0)).epsilon(1e-12));
    CHECK(tfim(8, 1.0).terms().size() == 7 + 8);
}

TEST_CASE("rotated surface code 3x3") {
    auto [h0, layout] = rotated_surface_code(3, 3, 0.0);
    CHECK(h0.qubit_count() == 9);
    CHECK(h0.terms().size() == 8 + 9);
    CHECK(layout.ancilla_count() == 8);
    // Stabilizers are the 8 terms of weight >= 2; they must pairwise commute
    // and split into bulk weight-4 and boundary weight-2.
    std::vector<PauliString> stabs;
    int w4 = 0, w2 = 0;
    for (const auto& t : h0.terms()) {
        if (t.word().size() < 2) continue;
        stabs.push_back(t);
        if (t.word().size() == 4) ++w4;
        if (t.word().size() == 2) ++w2;
    }
    CHECK(stabs.size() == 8);
    CHECK(w4 == 4);
    CHECK(w2 == 4);
    for (std::size_t i = 0; i < stabs.size(); ++i)
        for (std::size_t j = i + 1; j < stabs.size(); ++j)
            CHECK(words_commute(stabs[i], stabs[j]));
    CHECK(ground_energy(h0) == doctest::Approx(-8.0).epsilon(1e-12));
    auto [h1, l1] = rotated_surface_code(3, 3, 1.0);
    CHECK(ground_energy(h1) == doctest::Approx(-9.0).epsilon(1e-12));
    auto [hm, lm] = rotated_surface_code(3, 3, 0.5);
    CHECK(ground_energy(hm) < -4.5);  // below both pure limits' midpoint floor
}

TEST_CASE("toric code 2x2") {
    auto [h, layout] = toric_code(2, 2, 0.0, PauliOp::Z);
    CHECK(h.qubit_count() == 8);
    CHECK(h.terms().size() == 8 + 8);
    CHECK(layout.ancilla_count() == 8);
    CHECK(ground_energy(h) == doctest::Approx(-8.0).epsilon(1e-12));

    // Product of all vertex stars is the identity: every edge hosts exactly
    // two Z factors.
    Mat prod = Mat::Identity(256, 256);
    int stars = 0;
    for (const auto& t : h.terms()) {
        if (t.word().size() == 4 && t.word().begin()->second == PauliOp::Z) {
            prod = dense_pauli(PauliString(t.word(), 1.0), 8) * prod;
            ++stars;
        }
    }
    CHECK(stars == 4);
    CHECK((prod - Mat::Identity(256, 256)).cwiseAbs().maxCoeff() < 1e-12);

    auto [hy, ly] = toric_code(2, 2, 0.3, PauliOp::Y);
    CHECK(ground_energy(hy) < -5.6);  // (1-lambda) * 8 stabilizer floor
}

TEST_CASE("cartan block: identity at zero, 15 slots, entangling power") {
    Block b = cartan_block(0, 1, 0);
    CHECK(b.gates.size() == 15);
    CHECK_THROWS(cartan_block(2, 2));

    std::vector<double> zero(15, 0.0);
    Mat id = block_unitary(b, zero);
    CHECK((id - Mat::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(makhlin_g1_abs(id) == doctest::Approx(1.0).epsilon(1e-9));

    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> ang(-M_PI, M_PI);
    double min_g1 = 1.0;
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> theta(15);
        for (auto& t : theta) t = ang(rng);
        min_g1 = std::min(min_g1, makhlin_g1_abs(block_unitary(b, theta)));
    }
    CHECK(min_g1 < 0.5);  // random draws reach entangling two-qubit gates
}

TEST_CASE("ghz locc ansatz shape") {
    auto bundle = ghz_locc_ansatz(8);
    CHECK(bundle.circuit.depth() == 2);
    CHECK(bundle.circuit.outcome_len() == 7);
    CHECK(bundle.circuit.qubit_count() == 15);
    CHECK(bundle.circuit.theta_len() == 30 * 7 + 24);
    CHECK(bundle.protocol.theta_len() == bundle.circuit.theta_len());
    CHECK(bundle.protocol.outcome_len() == 7);
    CHECK(bundle.gamma_len == bundle.protocol.gamma_len());
    CHECK(bundle.declared_depth == 2);
    bundle.circuit.validate_causality(
        bundle.protocol.structural_supports().theta_to_bits);

    // The feedforward stage touches only data qubits.
    const auto& last = std::get<UnitaryLayer>(bundle.circuit.stages().back());
    for (const auto& blk : last.blocks)
        for (int q : blk.qubits) CHECK(q < 8);

    // Layout: 1D chain with contiguous thirds.
    CHECK(bundle.layout.region_a == std::set<int>{0, 1, 2});
    CHECK(bundle.layout.region_b == std::set<int>{3, 4});
    CHECK(bundle.layout.region_c == std::set<int>{5, 6, 7});
    CHECK(bundle.layout.adjacency.size() == 7);
}

TEST_CASE("ghz exact protocol reaches the stabilizer ground state") {
    auto bundle = ghz_locc_ansatz(8);
    auto gamma = ghz_exact_gamma(8);
    REQUIRE(static_cast<int>(gamma.size()) == bundle.gamma_len);
    auto h = ghz_parent(8, 16.0, 0.0, PauliOp::X);
    double e = energy(bundle.circuit, bundle.protocol, gamma, h);
    CHECK(e == doctest::Approx(-23.0).epsilon(1e-9));

    // Every branch is the GHZ state up to phase, with uniform probability.
    Vec ghz = Vec::Zero(256);
    ghz(0) = 1.0 / std::sqrt(2.0);
    ghz(255) = 1.0 / std::sqrt(2.0);
    auto resolver = LoccCircuit::resolve_with(bundle.protocol, gamma);
    std::set<int> keep;
    for (int q = 0; q < 8; ++q) keep.insert(q);
    auto branches = bundle.circuit.all_branches(resolver, 1e-12, true, keep);
    CHECK(branches.size() == 128);
    for (const auto& br : branches) {
        CHECK(br.prob == doctest::Approx(1.0 / 128).epsilon(1e-9));
        Vec psi = to_eigen(br.state);
        double fid = std::norm(ghz.dot(psi)) / psi.squaredNorm();
        CHECK(fid == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("ghz exact protocol works for small n") {
    for (int n : {2, 3}) {
        auto bundle = ghz_locc_ansatz(n);
        auto h = ghz_parent(n, 4.0, 0.0, PauliOp::X);
        double e = energy(bundle.circuit, bundle.protocol, ghz_exact_gamma(n), h);
        CHECK(e == doctest::Approx(-(n - 1) - 4.0).epsilon(1e-9));
    }
}

TEST_CASE("surface code locc ansatz shape") {
    auto bundle = surface_code_locc_ansatz(3, 3);
    CHECK(bundle.circuit.depth() == 4);
    CHECK(bundle.circuit.outcome_len() == 8);
    CHECK(bundle.circuit.qubit_count() == 17);
    // 4 weight-4 + 4 weight-2 stabilizers: 24 coupling blocks.
    CHECK(bundle.circuit.theta_len() == 24 * 15 + 27);
    CHECK(bundle.protocol.theta_len() == bundle.circuit.theta_len());
    CHECK(bundle.gamma_len == bundle.protocol.gamma_len());
    bundle.circuit.validate_causality(
        bundle.protocol.structural_supports().theta_to_bits);
    const auto& last = std::get<UnitaryLayer>(bundle.circuit.stages().back());
    CHECK(last.blocks.size() == 9);
    for (const auto& blk : last.blocks)
        for (int q : blk.qubits) CHECK(q < 9);
}

TEST_CASE("brick wall ansatz") {
    auto bundle = brick_wall_ansatz(8, 2);
    CHECK(bundle.circuit.depth() == 2);
    CHECK(bundle.circuit.outcome_len() == 0);
    CHECK(bundle.gamma_len == bundle.circuit.theta_len());
    // Pure bias protocol: identity Jacobian.
    auto sup = bundle.protocol.structural_supports();
    for (const auto& bits : sup.theta_to_bits) CHECK(bits.empty());

    // Light cone of one qubit after depth 2 spans at most 5 qubits.
    for (int q = 0; q < 8; ++q) {
        auto report = bundle.circuit.backward_light_cone({q}, sup.theta_to_bits);
        CHECK(report.cone_qubits.size() <= 5);
        CHECK(report.projector_count == 0);
    }
}
