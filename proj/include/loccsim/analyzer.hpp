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
#include <functional>
#include <string>
#include <vector>

#include "loccsim/models.hpp"

namespace loccsim {

// Configurable stand-ins for "constant": a single instance cannot witness
// asymptotic behavior, so the report prints raw quantities next to verdicts.
struct CertifyThresholds {
    int max_kappa = 4;            // A1: max Hamiltonian term support
    int max_depth = 8;            // A2: entangling circuit depth
    double jacobian_floor = 1e-6; // A3: min |J| over probes, declared entries
    int max_iota = 4;             // A4: gates controlled per gamma_k
    int max_nu = 4;               // A5: outcome bits read per theta_j
    int probes = 8;               // A3 probe count
    std::uint64_t seed = 0;       // A3 probe seed
};

// Structural gradient-trainability certificate: the locality and fan-in/out
// quantities of the instance against the configured thresholds.
struct ConditionReport {
    int kappa = 0;               // max term support size
    int depth = 0;               // entangling depth
    std::vector<int> iota;       // per gamma_k: |supp(gamma_k)|
    std::vector<int> nu;         // per theta_j: |outcome bits read|
    std::vector<int> chi;        // per H term: projectors in its cone
    int chi_bound = 0;           // kappa*d + d*(d+1)
    bool chi_within_bound = false;
    double min_declared_jacobian = 0.0;
    bool a1 = false, a2 = false, a3 = false, a4 = false, a5 = false;
    bool verdict = false;

    std::string to_string() const;
    std::string to_json() const;
};

// Static certification of the five trainability conditions. A1/A2/A4/A5 are
// purely structural; A3 probes the protocol Jacobian at `probes` seeded
// (gamma, v) draws and requires every declared-support entry to stay above
// the floor. Also probe-verifies the protocol's declared supports; throws on
// an integrity failure.
ConditionReport certify(const AnsatzBundle& bundle, const Hamiltonian& h,
                        const CertifyThresholds& thresholds = {});

// chi for one Hamiltonian term: measurement events inside its backward
// light cone (classical feedforward edges included).
int projector_count(const LoccCircuit& circuit, const LoccProtocol& protocol,
                    const PauliString& term);

// One Fig.-7-style scaling row: mean over seeds of mean_k |dE/dgamma_k| at
// the first iteration from seeded initializations.
struct ScalingRow {
    int n = 0;
    double g = 0.0;
    double mean_abs_grad = 0.0;
};

using AnsatzFactory = std::function<AnsatzBundle(int n)>;
using ModelFactory = std::function<Hamiltonian(int n, double g)>;

// Exact first-iteration gradient magnitudes for the given model family over
// n in [n_lo, n_hi] and the listed couplings, averaged over `seeds` seeded
// initializations (seed, seed+1, ...). Deterministic: bitwise reproducible.
std::vector<ScalingRow> gradient_scaling(const ModelFactory& model,
                                         const AnsatzFactory& ansatz,
                                         int n_lo, int n_hi,
                                         const std::vector<double>& couplings,
                                         int seeds, std::uint64_t seed = 0);

// "n,g,mean_abs_grad" CSV with a header line.
std::string scaling_csv(const std::vector<ScalingRow>& rows);

}  // namespace loccsim
