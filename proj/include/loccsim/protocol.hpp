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
#include <random>
#include <set>
#include <vector>

namespace loccsim {

using Outcomes = std::vector<std::uint8_t>;  // one 0/1 entry per outcome slot

// The classical feedforward function theta = g(gamma, v) with an analytic
// Jacobian. Two forms:
//  - LookupTable: theta_j = gamma[table_j[pattern of the bits nu_j]]
//  - AffineFeatureNet: theta_j = sum_f gamma[f.gamma_index] * f(v), with
//    features bias (1), bit b (0 -> +1, 1 -> -1), and parity over a bit set
//    ((-1)^xor). Identity activation, so the Jacobian is exact.
// A fixed per-theta shift (the g_{i+-} protocols) rides on top of either form.
class LoccProtocol {
  public:
    struct Feature {
        enum class Kind { Bias, Bit, Parity } kind;
        std::vector<int> bits;  // empty for Bias, one entry for Bit
        int gamma_index;
    };
    struct TableEntry {
        std::vector<int> bits;        // nu_j, the outcome bits read
        std::vector<int> gamma_index; // size 2^|bits|, indexed by bit pattern
    };

    static LoccProtocol affine(int gamma_len, int outcome_len,
                               std::vector<std::vector<Feature>> per_theta);
    static LoccProtocol lookup(int gamma_len, int outcome_len,
                               std::vector<TableEntry> per_theta);

    int theta_len() const { return theta_len_; }
    int gamma_len() const { return gamma_len_; }
    int outcome_len() const { return outcome_len_; }

    std::vector<double> eval(const std::vector<double>& gamma,
                             const Outcomes& v) const;
    double eval_theta(int j, const std::vector<double>& gamma,
                      const Outcomes& v) const;

    // Dense |theta| x |gamma| Jacobian d g_j / d gamma_k.
    std::vector<std::vector<double>> jacobian(const std::vector<double>& gamma,
                                              const Outcomes& v) const;
    // Nonzero entries of row j only: pairs (k, d g_j / d gamma_k).
    std::vector<std::pair<int, double>> jacobian_row(int j, const Outcomes& v) const;

    // g(gamma, v) +- (pi/2) e_i.
    LoccProtocol shifted(int theta_index, int sign) const;
    const std::vector<double>& shift() const { return shift_; }

    struct Supports {
        std::vector<std::set<int>> gamma_to_theta;  // supp(gamma_k), size iota_k
        std::vector<std::set<int>> theta_to_bits;   // nu_j
    };
    Supports structural_supports() const;

    // Probe-test declared supports: exhaustive single-bit flips and single-
    // gamma perturbations; throws on undeclared dependence. Requires
    // outcome_len <= 16.
    void verify_supports(const std::vector<double>& gamma,
                         std::mt19937_64& rng) const;

    bool is_affine() const { return !affine_.empty() || tables_.empty(); }

  private:
    int gamma_len_ = 0;
    int theta_len_ = 0;
    int outcome_len_ = 0;
    std::vector<std::vector<Feature>> affine_;  // one list per theta
    std::vector<TableEntry> tables_;            // or one table per theta
    std::vector<double> shift_;
};

// Seeded uniform [-0.1, 0.1] initialization for gamma.
std::vector<double> init_gamma(int gamma_len, std::uint64_t seed);

}  // namespace loccsim
