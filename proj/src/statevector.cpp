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
#include "loccsim/statevector.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstring>
#include <stdexcept>

namespace loccsim {

namespace ker = kernels;

StateVector::StateVector() : n_(0), amps_{cplx{1.0, 0.0}} {}

StateVector::StateVector(int qubit_count) : n_(qubit_count) {
    if (n_ < 1) throw std::invalid_argument("StateVector: need at least 1 qubit");
    if (n_ > kMaxQubits)
        throw std::runtime_error("StateVector: " + std::to_string(n_) +
                                 " qubits exceeds limit " + std::to_string(kMaxQubits));
    amps_.assign(std::size_t{1} << n_, cplx{0.0, 0.0});
    amps_[0] = 1.0;
}

StateVector StateVector::computational(int qubit_count, const std::string& bits) {
    if (static_cast<int>(bits.size()) != qubit_count)
        throw std::invalid_argument("computational: bits length mismatch");
    StateVector sv(qubit_count);
    sv.amps_[0] = 0.0;
    std::size_t idx = 0;
    for (int q = 0; q < qubit_count; ++q) {
        const char c = bits[q];
        if (c != '0' && c != '1')
            throw std::invalid_argument("computational: bits must be 0/1");
        if (c == '1') idx |= std::size_t{1} << q;
    }
    sv.amps_[idx] = 1.0;
    return sv;
}

void StateVector::check_qubit(int q) const {
    if (q < 0 || q >= n_)
        throw std::out_of_range("qubit index " + std::to_string(q) +
                                " out of range for " + std::to_string(n_) + " qubits");
}

double StateVector::norm_sq() const {
    return ker::backend().norm_sq(amps_.data(), amps_.size());
}

void StateVector::scale(double s) {
    ker::backend().scale(amps_.data(), s, amps_.size());
}

void StateVector::apply_rotation(const PauliString& generator, double theta) {
    if (!std::isfinite(theta)) throw std::invalid_argument("rotation: non-finite angle");
    if (generator.max_qubit() >= n_)
        throw std::out_of_range("rotation: generator support out of range");
    const double eff = theta * generator.coefficient();
    const auto& w = generator.word();
    const auto& ops = ker::backend();
    if (w.size() == 1) {
        const auto& [q, op] = *w.begin();
        const ker::Axis ax = op == PauliOp::X   ? ker::Axis::X
                             : op == PauliOp::Y ? ker::Axis::Y
                                                : ker::Axis::Z;
        ops.rot1(amps_.data(), amps_.size(), q, ax, eff);
        return;
    }
    if (w.size() == 2) {
        auto it = w.begin();
        const auto [q1, op1] = *it++;
        const auto [q2, op2] = *it;
        if (op1 == op2) {
            const ker::Axis ax = op1 == PauliOp::X   ? ker::Axis::X
                                 : op1 == PauliOp::Y ? ker::Axis::Y
                                                     : ker::Axis::Z;
            ops.rot2(amps_.data(), amps_.size(), q1, q2, ax, eff);
            return;
        }
    }
    ker::rot_generic(amps_.data(), amps_.size(), generator.masks(), eff);
}

StateVector::MeasureResult StateVector::project(int q, int outcome) {
    check_qubit(q);
    if (outcome != 0 && outcome != 1)
        throw std::invalid_argument("project: outcome must be 0 or 1");
    const double p = ker::project_qubit(amps_.data(), amps_.size(), q, outcome);
    return {outcome, p};
}

StateVector::MeasureResult StateVector::sample(int q, std::mt19937_64& rng) {
    check_qubit(q);
    const double total = norm_sq();
    if (total < 1e-14) throw std::runtime_error("sample: zero-norm state");
    const double p1 = ker::backend().prob_one(amps_.data(), amps_.size(), q) / total;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int outcome = (u(rng) < p1) ? 1 : 0;
    const double p = outcome ? p1 : 1.0 - p1;
    ker::project_qubit(amps_.data(), amps_.size(), q, outcome);
    scale(1.0 / std::sqrt(p * total));
    return {outcome, p};
}

double StateVector::expectation(const PauliString& p) const {
    if (p.max_qubit() >= n_)
        throw std::out_of_range("expectation: term support out of range");
    return p.coefficient() * ker::pauli_expectation(amps_.data(), amps_.size(), p.masks());
}

double StateVector::expectation(const Hamiltonian& h) const {
    double e = 0.0;
    for (const auto& t : h.terms()) e += expectation(t);
    return e;
}

DensityMatrix StateVector::reduced_density(const std::vector<int>& subset) const {
    constexpr int kMaxSubset = 12;
    if (static_cast<int>(subset.size()) > kMaxSubset)
        throw std::runtime_error("reduced_density: subset larger than 12 qubits");
    std::vector<int> qs = subset;
    std::sort(qs.begin(), qs.end());
    for (std::size_t i = 0; i < qs.size(); ++i) {
        check_qubit(qs[i]);
        if (i > 0 && qs[i] == qs[i - 1])
            throw std::invalid_argument("reduced_density: duplicate qubit");
    }
    const int k = static_cast<int>(qs.size());
    const std::size_t dim_k = std::size_t{1} << k;
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim_k, dim_k);

    // Split each global index into (kept bits, environment bits).
    std::vector<int> env;
    std::vector<char> in_subset(n_, 0);
    for (int q : qs) in_subset[q] = 1;
    for (int q = 0; q < n_; ++q)
        if (!in_subset[q]) env.push_back(q);
    const std::size_t dim_e = std::size_t{1} << env.size();

    auto compose = [&](std::size_t kept, std::size_t e) {
        std::size_t idx = 0;
        for (int i = 0; i < k; ++i)
            if (kept >> i & 1) idx |= std::size_t{1} << qs[i];
        for (std::size_t i = 0; i < env.size(); ++i)
            if (e >> i & 1) idx |= std::size_t{1} << env[i];
        return idx;
    };

    std::vector<cplx> col(dim_k);
    for (std::size_t e = 0; e < dim_e; ++e) {
        for (std::size_t kk = 0; kk < dim_k; ++kk) col[kk] = amps_[compose(kk, e)];
        for (std::size_t i = 0; i < dim_k; ++i)
            for (std::size_t j = 0; j < dim_k; ++j)
                rho(i, j) += col[i] * std::conj(col[j]);
    }
    return DensityMatrix(std::move(rho), qs);
}

double StateVector::fidelity(const StateVector& a, const StateVector& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("fidelity: dimension mismatch");
    const cplx ov = ker::backend().dot(a.data(), b.data(), a.dim());
    return std::norm(ov) / (a.norm_sq() * b.norm_sq());
}

StateVector StateVector::drop_qubit(int q, int pinned) const {
    check_qubit(q);
    if (n_ == 1) throw std::runtime_error("drop_qubit: cannot drop last qubit");
    if (pinned != 0 && pinned != 1)
        throw std::invalid_argument("drop_qubit: pinned must be 0 or 1");
    const std::size_t low = (std::size_t{1} << q) - 1;
    const std::size_t pin = pinned ? std::size_t{1} << q : 0;
    const std::size_t other = pin ^ (std::size_t{1} << q);
    StateVector out(n_ - 1);
    double leak = 0.0;
    for (std::size_t i = 0; i < out.dim(); ++i) {
        const std::size_t base = ((i & ~low) << 1) | (i & low);
        out.amps_[i] = amps_[base | pin];
        leak += std::norm(amps_[base | other]);
    }
    if (leak > 1e-20 * std::max(1.0, norm_sq()))
        throw std::logic_error("drop_qubit: qubit not pinned to the outcome");
    return out;
}

std::vector<std::uint8_t> StateVector::to_bytes() const {
    std::vector<std::uint8_t> out(amps_.size() * sizeof(cplx));
    std::memcpy(out.data(), amps_.data(), out.size());
    return out;
}

DensityMatrix::DensityMatrix(Eigen::MatrixXcd entries, std::vector<int> qubits)
    : m_(std::move(entries)), qubits_(std::move(qubits)) {
    if (m_.rows() != m_.cols()) throw std::invalid_argument("DensityMatrix: not square");
    if (m_.rows() != (Eigen::Index{1} << qubits_.size()))
        throw std::invalid_argument("DensityMatrix: dimension/qubit mismatch");
}

void DensityMatrix::validate(double tol) const {
    if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > tol)
        throw std::runtime_error("DensityMatrix: not Hermitian");
    if (std::abs(trace() - 1.0) > tol)
        throw std::runtime_error("DensityMatrix: trace != 1");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tol)
        throw std::runtime_error("DensityMatrix: negative eigenvalue");
}

double DensityMatrix::von_neumann_entropy() const {
    if (std::abs(trace() - 1.0) > 1e-6)
        throw std::runtime_error("entropy: density matrix trace deviates from 1");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m_, Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        double lam = es.eigenvalues()(i);
        if (lam < -1e-10) throw std::runtime_error("entropy: eigenvalue below -1e-10");
        if (lam <= 1e-12) continue;  // clamp roundoff
        s -= lam * std::log(lam);
    }
    return s;
}

namespace {
std::vector<int> merge_disjoint(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> ab = a;
    ab.insert(ab.end(), b.begin(), b.end());
    std::sort(ab.begin(), ab.end());
    for (std::size_t i = 1; i < ab.size(); ++i)
        if (ab[i] == ab[i - 1])
            throw std::invalid_argument("qmi: regions overlap");
    return ab;
}
}  // namespace

double qmi(const StateVector& state, const std::vector<int>& a,
           const std::vector<int>& b) {
    const auto ab = merge_disjoint(a, b);
    const double sa = state.reduced_density(a).von_neumann_entropy();
    const double sb = state.reduced_density(b).von_neumann_entropy();
    const double sab = state.reduced_density(ab).von_neumann_entropy();
    return sa + sb - sab;
}

double qmi(const DensityMatrix& rho_a, const DensityMatrix& rho_b,
           const DensityMatrix& rho_ab) {
    merge_disjoint(rho_a.qubits(), rho_b.qubits());
    return rho_a.von_neumann_entropy() + rho_b.von_neumann_entropy() -
           rho_ab.von_neumann_entropy();
}

double entropy_nats_to_bits(double nats) { return nats / std::log(2.0); }

}  // namespace loccsim
