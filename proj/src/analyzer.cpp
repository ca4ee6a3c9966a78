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
#include "loccsim/analyzer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <json.hpp>

#include "loccsim/gradient.hpp"

namespace loccsim {

namespace {

int max_of(const std::vector<int>& v) {
    return v.empty() ? 0 : *std::max_element(v.begin(), v.end());
}

}  // namespace

std::string ConditionReport::to_string() const {
    std::ostringstream os;
    os << "kappa=" << kappa << " depth=" << depth
       << " max_iota=" << max_of(iota) << " max_nu=" << max_of(nu)
       << " max_chi=" << max_of(chi) << " chi_bound=" << chi_bound
       << " min_declared_jacobian=" << min_declared_jacobian << "\n"
       << "A1(local H)=" << (a1 ? "pass" : "FAIL")
       << " A2(depth)=" << (a2 ? "pass" : "FAIL")
       << " A3(jacobian floor)=" << (a3 ? "pass" : "FAIL")
       << " A4(iota)=" << (a4 ? "pass" : "FAIL")
       << " A5(nu)=" << (a5 ? "pass" : "FAIL")
       << " verdict=" << (verdict ? "PASS" : "FAIL") << "\n";
    return os.str();
}

std::string ConditionReport::to_json() const {
    nlohmann::json j;
    j["kappa"] = kappa;
    j["depth"] = depth;
    j["iota"] = iota;
    j["nu"] = nu;
    j["chi"] = chi;
    j["chi_bound"] = chi_bound;
    j["chi_within_bound"] = chi_within_bound;
    j["min_declared_jacobian"] = min_declared_jacobian;
    j["a1"] = a1;
    j["a2"] = a2;
    j["a3"] = a3;
    j["a4"] = a4;
    j["a5"] = a5;
    j["verdict"] = verdict;
    return j.dump(2);
}

int projector_count(const LoccCircuit& circuit, const LoccProtocol& protocol,
                    const PauliString& term) {
    auto supports = protocol.structural_supports();
    return circuit.backward_light_cone(term.support(), supports.theta_to_bits)
        .projector_count;
}

ConditionReport certify(const AnsatzBundle& bundle, const Hamiltonian& h,
                        const CertifyThresholds& thresholds) {
    ConditionReport rep;
    rep.kappa = h.locality();
    rep.depth = bundle.circuit.depth();

    auto supports = bundle.protocol.structural_supports();
    for (const auto& thetas : supports.gamma_to_theta)
        rep.iota.push_back(static_cast<int>(thetas.size()));
    for (const auto& bits : supports.theta_to_bits)
        rep.nu.push_back(static_cast<int>(bits.size()));
    for (const auto& term : h.terms())
        rep.chi.push_back(
            bundle.circuit
                .backward_light_cone(term.support(), supports.theta_to_bits)
                .projector_count);
    rep.chi_bound = rep.kappa * rep.depth + rep.depth * (rep.depth + 1);
    rep.chi_within_bound = max_of(rep.chi) <= rep.chi_bound;

    // Support integrity, then the A3 Jacobian probes.
    std::mt19937_64 rng(thresholds.seed ^ 0xa3a3a3a3ULL);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::bernoulli_distribution coin(0.5);
    {
        auto gamma = init_gamma(bundle.protocol.gamma_len(), thresholds.seed);
        bundle.protocol.verify_supports(gamma, rng);
    }
    rep.min_declared_jacobian = std::numeric_limits<double>::infinity();
    for (int probe = 0; probe < thresholds.probes; ++probe) {
        std::vector<double> gamma(
            static_cast<std::size_t>(bundle.protocol.gamma_len()));
        for (auto& x : gamma) x = unif(rng);
        Outcomes v(static_cast<std::size_t>(bundle.protocol.outcome_len()));
        for (auto& b : v) b = coin(rng) ? 1 : 0;
        for (int j = 0; j < bundle.protocol.theta_len(); ++j) {
            auto row = bundle.protocol.jacobian_row(j, v);
            for (const auto& [k, val] : row) {
                if (!supports.gamma_to_theta[static_cast<std::size_t>(k)]
                         .count(j))
                    continue;
                rep.min_declared_jacobian =
                    std::min(rep.min_declared_jacobian, std::abs(val));
            }
        }
    }
    if (!std::isfinite(rep.min_declared_jacobian))
        rep.min_declared_jacobian = 0.0;

    rep.a1 = rep.kappa <= thresholds.max_kappa;
    rep.a2 = rep.depth <= thresholds.max_depth;
    rep.a3 = rep.min_declared_jacobian >= thresholds.jacobian_floor;
    rep.a4 = max_of(rep.iota) <= thresholds.max_iota;
    rep.a5 = max_of(rep.nu) <= thresholds.max_nu;
    rep.verdict = rep.a1 && rep.a2 && rep.a3 && rep.a4 && rep.a5;
    return rep;
}

std::vector<ScalingRow> gradient_scaling(const ModelFactory& model,
                                         const AnsatzFactory& ansatz,
                                         int n_lo, int n_hi,
                                         const std::vector<double>& couplings,
                                         int seeds, std::uint64_t seed) {
    std::vector<ScalingRow> rows;
    for (int n = n_lo; n <= n_hi; ++n) {
        AnsatzBundle bundle = ansatz(n);
        for (double g : couplings) {
            Hamiltonian h = model(n, g);
            double acc = 0.0;
            for (int s = 0; s < seeds; ++s) {
                auto gamma = init_gamma(bundle.gamma_len,
                                        seed + static_cast<std::uint64_t>(s));
                auto grad = exact_gradient(bundle.circuit, bundle.protocol,
                                           gamma, h);
                double mean = 0.0;
                for (double x : grad) mean += std::abs(x);
                mean /= static_cast<double>(grad.size());
                acc += mean;
            }
            rows.push_back({n, g, acc / seeds});
        }
    }
    return rows;
}

std::string scaling_csv(const std::vector<ScalingRow>& rows) {
    std::ostringstream os;
    os << "n,g,mean_abs_grad\n";
    os.precision(17);
    for (const auto& r : rows)
        os << r.n << "," << r.g << "," << r.mean_abs_grad << "\n";
    return os.str();
}

}  // namespace loccsim
