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
#include "loccsim/protocol.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace loccsim {

namespace {

void check_bit(int b, int outcome_len) {
    if (b < 0 || b >= outcome_len)
        throw std::invalid_argument("protocol: outcome bit index out of range");
}

double feature_value(const LoccProtocol::Feature& f, const Outcomes& v) {
    switch (f.kind) {
        case LoccProtocol::Feature::Kind::Bias:
            return 1.0;
        case LoccProtocol::Feature::Kind::Bit:
            return v[static_cast<std::size_t>(f.bits[0])] ? -1.0 : 1.0;
        case LoccProtocol::Feature::Kind::Parity: {
            int p = 0;
            for (int b : f.bits) p ^= v[static_cast<std::size_t>(b)];
            return p ? -1.0 : 1.0;
        }
    }
    throw std::logic_error("protocol: bad feature kind");
}

std::size_t table_pattern(const LoccProtocol::TableEntry& t, const Outcomes& v) {
    std::size_t p = 0;
    for (std::size_t i = 0; i < t.bits.size(); ++i)
        if (v[static_cast<std::size_t>(t.bits[i])]) p |= std::size_t{1} << i;
    return p;
}

}  // namespace

LoccProtocol LoccProtocol::affine(int gamma_len, int outcome_len,
                                  std::vector<std::vector<Feature>> per_theta) {
    if (gamma_len <= 0 || outcome_len < 0 || per_theta.empty())
        throw std::invalid_argument("protocol: empty or degenerate definition");
    LoccProtocol p;
    p.gamma_len_ = gamma_len;
    p.outcome_len_ = outcome_len;
    p.theta_len_ = static_cast<int>(per_theta.size());
    for (const auto& feats : per_theta) {
        for (const auto& f : feats) {
            if (f.gamma_index < 0 || f.gamma_index >= gamma_len)
                throw std::invalid_argument("protocol: gamma index out of range");
            if (f.kind == Feature::Kind::Bit && f.bits.size() != 1)
                throw std::invalid_argument("protocol: bit feature needs one bit");
            if (f.kind == Feature::Kind::Bias && !f.bits.empty())
                throw std::invalid_argument("protocol: bias feature reads no bits");
            if (f.kind == Feature::Kind::Parity && f.bits.empty())
                throw std::invalid_argument("protocol: empty parity feature");
            for (int b : f.bits) check_bit(b, outcome_len);
        }
    }
    p.affine_ = std::move(per_theta);
    p.shift_.assign(static_cast<std::size_t>(p.theta_len_), 0.0);
    return p;
}

LoccProtocol LoccProtocol::lookup(int gamma_len, int outcome_len,
                                  std::vector<TableEntry> per_theta) {
    if (gamma_len <= 0 || outcome_len < 0 || per_theta.empty())
        throw std::invalid_argument("protocol: empty or degenerate definition");
    LoccProtocol p;
    p.gamma_len_ = gamma_len;
    p.outcome_len_ = outcome_len;
    p.theta_len_ = static_cast<int>(per_theta.size());
    for (const auto& t : per_theta) {
        if (t.bits.size() > 20)
            throw std::invalid_argument("protocol: lookup table too wide");
        for (int b : t.bits) check_bit(b, outcome_len);
        if (t.gamma_index.size() != (std::size_t{1} << t.bits.size()))
            throw std::invalid_argument("protocol: table size != 2^bits");
        for (int gi : t.gamma_index)
            if (gi < 0 || gi >= gamma_len)
                throw std::invalid_argument("protocol: gamma index out of range");
    }
    p.tables_ = std::move(per_theta);
    p.shift_.assign(static_cast<std::size_t>(p.theta_len_), 0.0);
    return p;
}

double LoccProtocol::eval_theta(int j, const std::vector<double>& gamma,
                                const Outcomes& v) const {
    if (j < 0 || j >= theta_len_)
        throw std::out_of_range("protocol: theta index out of range");
    if (static_cast<int>(gamma.size()) != gamma_len_)
        throw std::invalid_argument("protocol: gamma length mismatch");
    if (static_cast<int>(v.size()) != outcome_len_)
        throw std::invalid_argument("protocol: outcome length mismatch");
    double th = shift_[static_cast<std::size_t>(j)];
    if (!affine_.empty()) {
        for (const auto& f : affine_[static_cast<std::size_t>(j)])
            th += gamma[static_cast<std::size_t>(f.gamma_index)] * feature_value(f, v);
    } else {
        const auto& t = tables_[static_cast<std::size_t>(j)];
        th += gamma[static_cast<std::size_t>(t.gamma_index[table_pattern(t, v)])];
    }
    return th;
}

std::vector<double> LoccProtocol::eval(const std::vector<double>& gamma,
                                       const Outcomes& v) const {
    std::vector<double> theta(static_cast<std::size_t>(theta_len_));
    for (int j = 0; j < theta_len_; ++j)
        theta[static_cast<std::size_t>(j)] = eval_theta(j, gamma, v);
    return theta;
}

std::vector<std::pair<int, double>> LoccProtocol::jacobian_row(
    int j, const Outcomes& v) const {
    if (j < 0 || j >= theta_len_)
        throw std::out_of_range("protocol: theta index out of range");
    if (static_cast<int>(v.size()) != outcome_len_)
        throw std::invalid_argument("protocol: outcome length mismatch");
    std::vector<std::pair<int, double>> row;
    if (!affine_.empty()) {
        for (const auto& f : affine_[static_cast<std::size_t>(j)]) {
            double val = feature_value(f, v);
            bool merged = false;
            for (auto& [k, acc] : row)
                if (k == f.gamma_index) { acc += val; merged = true; break; }
            if (!merged) row.emplace_back(f.gamma_index, val);
        }
    } else {
        const auto& t = tables_[static_cast<std::size_t>(j)];
        row.emplace_back(t.gamma_index[table_pattern(t, v)], 1.0);
    }
    return row;
}

std::vector<std::vector<double>> LoccProtocol::jacobian(
    const std::vector<double>& gamma, const Outcomes& v) const {
    if (static_cast<int>(gamma.size()) != gamma_len_)
        throw std::invalid_argument("protocol: gamma length mismatch");
    std::vector<std::vector<double>> jac(
        static_cast<std::size_t>(theta_len_),
        std::vector<double>(static_cast<std::size_t>(gamma_len_), 0.0));
    for (int j = 0; j < theta_len_; ++j)
        for (const auto& [k, val] : jacobian_row(j, v))
            jac[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] += val;
    return jac;
}

LoccProtocol LoccProtocol::shifted(int theta_index, int sign) const {
    if (theta_index < 0 || theta_index >= theta_len_)
        throw std::out_of_range("protocol: theta index out of range");
    if (sign != 1 && sign != -1)
        throw std::invalid_argument("protocol: shift sign must be +-1");
    LoccProtocol p = *this;
    p.shift_[static_cast<std::size_t>(theta_index)] +=
        sign * std::numbers::pi / 2.0;
    return p;
}

LoccProtocol::Supports LoccProtocol::structural_supports() const {
    Supports s;
    s.gamma_to_theta.resize(static_cast<std::size_t>(gamma_len_));
    s.theta_to_bits.resize(static_cast<std::size_t>(theta_len_));
    for (int j = 0; j < theta_len_; ++j) {
        if (!affine_.empty()) {
            for (const auto& f : affine_[static_cast<std::size_t>(j)]) {
                s.gamma_to_theta[static_cast<std::size_t>(f.gamma_index)].insert(j);
                for (int b : f.bits)
                    s.theta_to_bits[static_cast<std::size_t>(j)].insert(b);
            }
        } else {
            const auto& t = tables_[static_cast<std::size_t>(j)];
            for (int gi : t.gamma_index)
                s.gamma_to_theta[static_cast<std::size_t>(gi)].insert(j);
            for (int b : t.bits)
                s.theta_to_bits[static_cast<std::size_t>(j)].insert(b);
        }
    }
    return s;
}

void LoccProtocol::verify_supports(const std::vector<double>& gamma,
                                   std::mt19937_64& rng) const {
    if (outcome_len_ > 16)
        throw std::invalid_argument("protocol: verify_supports limited to 16 bits");
    const Supports s = structural_supports();
    std::uniform_real_distribution<double> unif(-0.5, 0.5);
    const int trials = 8;
    for (int t = 0; t < trials; ++t) {
        Outcomes v(static_cast<std::size_t>(outcome_len_));
        for (auto& b : v) b = static_cast<std::uint8_t>(rng() & 1);
        std::vector<double> g = gamma;
        for (auto& x : g) x += unif(rng);
        const auto base = eval(g, v);
        // Single-bit flips must only move thetas that declare the bit.
        for (int b = 0; b < outcome_len_; ++b) {
            Outcomes vf = v;
            vf[static_cast<std::size_t>(b)] ^= 1;
            const auto got = eval(g, vf);
            for (int j = 0; j < theta_len_; ++j) {
                bool declared = s.theta_to_bits[static_cast<std::size_t>(j)].count(b) > 0;
                if (!declared && std::abs(got[static_cast<std::size_t>(j)] -
                                          base[static_cast<std::size_t>(j)]) > 1e-12)
                    throw std::logic_error("protocol: theta reads undeclared bit");
            }
        }
        // Single-gamma bumps must only move thetas in supp(gamma_k).
        for (int k = 0; k < gamma_len_; ++k) {
            std::vector<double> gb = g;
            gb[static_cast<std::size_t>(k)] += 0.37;
            const auto got = eval(gb, v);
            for (int j = 0; j < theta_len_; ++j) {
                bool declared = s.gamma_to_theta[static_cast<std::size_t>(k)].count(j) > 0;
                if (!declared && std::abs(got[static_cast<std::size_t>(j)] -
                                          base[static_cast<std::size_t>(j)]) > 1e-12)
                    throw std::logic_error("protocol: theta depends on undeclared gamma");
            }
        }
    }
}

std::vector<double> init_gamma(int gamma_len, std::uint64_t seed) {
    if (gamma_len <= 0) throw std::invalid_argument("init_gamma: bad length");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-0.1, 0.1);
    std::vector<double> g(static_cast<std::size_t>(gamma_len));
    for (auto& x : g) x = unif(rng);
    return g;
}

}  // namespace loccsim
