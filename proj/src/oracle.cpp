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
#include "loccsim/oracle.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "loccsim/kernels.hpp"

namespace loccsim {

namespace {

constexpr double kDegeneracyTol = 1e-9;
constexpr double kResidualTol = 1e-8;

using Vec = Eigen::VectorXcd;

Vec to_vec(const StateVector& sv) {
    Vec v(static_cast<Eigen::Index>(sv.dim()));
    for (std::size_t i = 0; i < sv.dim(); ++i)
        v(static_cast<Eigen::Index>(i)) = sv[i];
    return v;
}

StateVector to_state(const Vec& v, int n) {
    StateVector sv(n);
    for (Eigen::Index i = 0; i < v.size(); ++i)
        sv[static_cast<std::size_t>(i)] = v(i);
    return sv;
}

Vec apply_op(const Hamiltonian& h, const Vec& in) {
    Vec out = Vec::Zero(in.size());
    for (const auto& term : h.terms())
        kernels::pauli_apply_acc(out.data(), in.data(),
                                 static_cast<std::size_t>(in.size()),
                                 term.masks(), term.coefficient());
    return out;
}

void orthogonalize(Vec& v, const std::vector<Vec>& basis) {
    for (const Vec& b : basis) v -= b.dot(v) * b;
}

// One restarted, fully reorthogonalized Lanczos solve for the lowest
// eigenpair of H restricted to the complement of `deflate`.
std::pair<double, Vec> lanczos_lowest(const Hamiltonian& h,
                                      const std::vector<Vec>& deflate,
                                      std::mt19937_64& rng) {
    const Eigen::Index dim = Eigen::Index(1) << h.qubit_count();
    const int block = std::min<Eigen::Index>(60, dim);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vec x(dim);
    for (Eigen::Index i = 0; i < dim; ++i) x(i) = {gauss(rng), gauss(rng)};
    orthogonalize(x, deflate);
    x.normalize();

    for (int restart = 0; restart < 80; ++restart) {
        // Krylov basis from the Lanczos recurrence with full (doubled)
        // reorthogonalization; H-applied copies are kept so the small
        // eigenproblem is an explicit Rayleigh-Ritz projection T = B' H B
        // rather than the three-term tridiagonal, which loses fidelity near
        // breakdown.
        std::vector<Vec> basis, hbasis;
        Vec v = x;
        for (int j = 0; j < block; ++j) {
            basis.push_back(v);
            Vec w = apply_op(h, v);
            hbasis.push_back(w);
            // Deflate last in each pass: projecting onto the Krylov basis can
            // reintroduce deflated components (the basis vectors carry their
            // own rounding-level leaks, which otherwise compound across the
            // recurrence).
            orthogonalize(w, basis);
            orthogonalize(w, deflate);
            orthogonalize(w, basis);
            orthogonalize(w, deflate);
            double nb = w.norm();
            if (nb < 1e-10 || j + 1 == block) break;
            v = w / nb;
        }
        const int m = static_cast<int>(basis.size());
        Eigen::MatrixXcd t(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                t(i, j) = basis[static_cast<std::size_t>(i)].dot(
                    hbasis[static_cast<std::size_t>(j)]);
        t = ((t + t.adjoint()) / 2.0).eval();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(t);
        double eval = es.eigenvalues()(0);
        Vec ritz = Vec::Zero(dim);
        for (int i = 0; i < m; ++i)
            ritz += es.eigenvectors()(i, 0) * basis[static_cast<std::size_t>(i)];
        orthogonalize(ritz, deflate);
        ritz.normalize();
        orthogonalize(ritz, deflate);
        x = ritz;
        double residual = (apply_op(h, x) - eval * x).norm();
        if (residual <= 1e-9) return {eval, x};
    }
    throw std::runtime_error("oracle: Lanczos did not converge");
}

SpectrumResult iterative_ground(const Hamiltonian& h, int k) {
    std::mt19937_64 rng(0xfeedbeef5eedULL ^ h.hash());
    SpectrumResult res;
    std::vector<Vec> found;
    for (int i = 0; i < k; ++i) {
        auto [e, v] = lanczos_lowest(h, found, rng);
        res.eigenvalues.push_back(e);
        found.push_back(v);
    }
    // Deflated solves can return states out of order in a degenerate or
    // near-degenerate space; sort the pairs.
    std::vector<int> order(found.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return res.eigenvalues[static_cast<std::size_t>(a)] <
               res.eigenvalues[static_cast<std::size_t>(b)];
    });
    std::sort(res.eigenvalues.begin(), res.eigenvalues.end());
    for (int i : order)
        res.states.push_back(to_state(found[static_cast<std::size_t>(i)],
                                      h.qubit_count()));
    return res;
}

SpectrumResult dense_ground(const Hamiltonian& h, int k) {
    const Eigen::Index dim = Eigen::Index(1) << h.qubit_count();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (Eigen::Index col = 0; col < dim; ++col) {
        Vec e = Vec::Zero(dim);
        e(col) = 1.0;
        m.col(col) = apply_op(h, e);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
    SpectrumResult res;
    for (int i = 0; i < k; ++i) {
        res.eigenvalues.push_back(es.eigenvalues()(i));
        res.states.push_back(to_state(es.eigenvectors().col(i), h.qubit_count()));
    }
    return res;
}

void finalize(const Hamiltonian& h, SpectrumResult& res) {
    res.gap = res.eigenvalues.size() > 1
                  ? res.eigenvalues[1] - res.eigenvalues[0]
                  : 0.0;
    res.degeneracy = 0;
    for (double e : res.eigenvalues)
        if (e - res.eigenvalues[0] <= kDegeneracyTol) ++res.degeneracy;
    for (std::size_t i = 0; i < res.states.size(); ++i) {
        Vec v = to_vec(res.states[i]);
        double residual = (apply_op(h, v) - res.eigenvalues[i] * v).norm();
        if (residual > kResidualTol)
            throw std::runtime_error("oracle: eigenpair residual " +
                                     std::to_string(residual) +
                                     " exceeds tolerance");
    }
}

}  // namespace

StateVector apply_hamiltonian(const Hamiltonian& h, const StateVector& in) {
    StateVector out(in.qubit_count());
    out[0] = 0.0;
    for (const auto& term : h.terms())
        kernels::pauli_apply_acc(out.data(), in.data(), in.dim(), term.masks(),
                                 term.coefficient());
    return out;
}

SpectrumResult ground(const Hamiltonian& h, int k) {
    if (k < 1) throw std::invalid_argument("oracle: k >= 1 required");
    const int n = h.qubit_count();
    const Eigen::Index dim = Eigen::Index(1) << n;
    if (k > dim) throw std::invalid_argument("oracle: k exceeds dimension");
    if (n > 18) throw std::invalid_argument("oracle: n <= 18 required");
    SpectrumResult res;
    if (n <= 10) {
        res = dense_ground(h, k);
        SpectrumResult it = iterative_ground(h, k);
        for (int i = 0; i < k; ++i) {
            if (std::abs(res.eigenvalues[static_cast<std::size_t>(i)] -
                         it.eigenvalues[static_cast<std::size_t>(i)]) > 1e-8)
                throw std::runtime_error(
                    "oracle: dense/iterative eigenvalue disagreement");
        }
    } else {
        res = iterative_ground(h, k);
    }
    finalize(h, res);
    return res;
}

double ground_qmi(const Hamiltonian& h, const std::vector<int>& a,
                  const std::vector<int>& b) {
    SpectrumResult res = ground(h, 2);
    if (res.gap <= kDegeneracyTol)
        throw std::runtime_error("degenerate ground space");
    return qmi(res.states[0], a, b);
}

GoldenCache::GoldenCache(std::string path) : path_(std::move(path)) {
    std::ifstream in(path_);
    if (!in) return;
    nlohmann::json j;
    in >> j;
    for (auto it = j.begin(); it != j.end(); ++it)
        entries_[it.key()] = it.value().get<double>();
}

std::optional<double> GoldenCache::lookup(const Hamiltonian& h) const {
    std::ostringstream key;
    key << std::hex << h.hash();
    auto it = entries_.find(key.str());
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void GoldenCache::store(const Hamiltonian& h, double e0) {
    std::ostringstream key;
    key << std::hex << h.hash();
    entries_[key.str()] = e0;
    nlohmann::json j;
    for (const auto& [k, v] : entries_) j[k] = v;
    std::ofstream out(path_);
    out << j.dump(2) << "\n";
}

double GoldenCache::ground_energy(const Hamiltonian& h) {
    if (auto hit = lookup(h)) return *hit;
    double e0 = ground(h, 1).eigenvalues[0];
    store(h, e0);
    return e0;
}

}  // namespace loccsim
