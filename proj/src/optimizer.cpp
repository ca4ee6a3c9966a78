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
#include "loccsim/optimizer.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "loccsim/protocol.hpp"

namespace loccsim {

namespace {

double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

bool finite(double x) { return std::isfinite(x); }

struct RestartResult {
    std::vector<IterationRecord> records;
    std::vector<double> gamma;
    double energy = 0.0;
    bool aborted = false;
    std::string diagnostic;
};

RestartResult run_restart(const Objective& objective,
                          std::vector<double> gamma,
                          const OptimizerConfig& config) {
    RestartResult out;
    const std::size_t len = gamma.size();
    std::vector<double> m(len, 0.0), v(len, 0.0);
    const double b1 = 0.9, b2 = 0.999, eps = 1e-8;
    std::vector<double> best_gamma = gamma;
    double best_energy = std::numeric_limits<double>::infinity();
    auto start = std::chrono::steady_clock::now();
    for (int it = 0; it < config.iterations; ++it) {
        EnergyGradient eg = objective(gamma);
        bool bad = !finite(eg.energy);
        for (double g : eg.grad) bad = bad || !finite(g);
        if (bad) {
            out.aborted = true;
            std::ostringstream msg;
            msg << "non-finite energy/gradient at iteration " << it
                << " (energy=" << eg.energy << ")";
            out.diagnostic = msg.str();
            break;
        }
        double gn = norm2(eg.grad);
        double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
        out.records.push_back({it, eg.energy, gn, secs});
        if (eg.energy < best_energy) {
            best_energy = eg.energy;
            best_gamma = gamma;
        }
        if (gn < config.grad_norm_tol) break;
        if (config.method == OptMethod::Adam) {
            double t = it + 1;
            for (std::size_t k = 0; k < len; ++k) {
                m[k] = b1 * m[k] + (1 - b1) * eg.grad[k];
                v[k] = b2 * v[k] + (1 - b2) * eg.grad[k] * eg.grad[k];
                double mhat = m[k] / (1 - std::pow(b1, t));
                double vhat = v[k] / (1 - std::pow(b2, t));
                gamma[k] -= config.learning_rate * mhat /
                            (std::sqrt(vhat) + eps);
            }
        } else {
            for (std::size_t k = 0; k < len; ++k)
                gamma[k] -= config.learning_rate * eg.grad[k];
        }
    }
    out.gamma = std::move(best_gamma);
    out.energy = best_energy;
    return out;
}

}  // namespace

std::string TrainingTrace::to_csv() const {
    std::ostringstream os;
    os << "iter,energy,grad_norm,seconds\n";
    os.precision(17);
    for (const auto& r : records)
        os << r.iteration << "," << r.energy << "," << r.grad_norm << ","
           << r.seconds << "\n";
    return os.str();
}

TrainingTrace minimize_function(const Objective& objective, int gamma_len,
                                const OptimizerConfig& config) {
    if (config.learning_rate <= 0.0 || config.iterations <= 0 ||
        config.restarts <= 0)
        throw std::invalid_argument("optimizer: positive rates and budgets");
    TrainingTrace trace;
    trace.best_energy = std::numeric_limits<double>::infinity();
    for (int r = 0; r < config.restarts; ++r) {
        std::vector<double> gamma0;
        if (config.warm_start &&
            (r == 0 || config.warm_start_jitter > 0.0)) {
            gamma0 = *config.warm_start;
            if (static_cast<int>(gamma0.size()) != gamma_len)
                throw std::invalid_argument("optimizer: warm start length");
            if (r > 0) {
                std::mt19937_64 rng(config.seed +
                                    static_cast<std::uint64_t>(r));
                std::normal_distribution<double> gauss(
                    0.0, config.warm_start_jitter);
                for (double& g : gamma0) g += gauss(rng);
            }
        } else {
            gamma0 = init_gamma(gamma_len, config.seed + static_cast<std::uint64_t>(r));
        }
        RestartResult res = run_restart(objective, std::move(gamma0), config);
        if (res.aborted) {
            ++trace.aborted_restarts;
            trace.diagnostics.push_back("restart " + std::to_string(r) + ": " +
                                        res.diagnostic);
            if (res.records.empty()) continue;
        }
        if (res.energy < trace.best_energy) {
            trace.best_energy = res.energy;
            trace.best_gamma = res.gamma;
            trace.best_restart = r;
            trace.records = std::move(res.records);
        }
    }
    if (trace.best_restart < 0)
        throw std::runtime_error(
            "optimizer: every restart aborted (non-finite objective)");
    return trace;
}

TrainingTrace minimize(const AnsatzBundle& bundle, const Hamiltonian& h,
                       const OptimizerConfig& config) {
    std::mt19937_64 sample_rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
    Objective objective = [&](const std::vector<double>& gamma) {
        if (config.exact_gradient)
            return energy_and_gradient(bundle.circuit, bundle.protocol, gamma, h);
        EnergyGradient eg;
        eg.energy = energy(bundle.circuit, bundle.protocol, gamma, h);
        eg.grad = sampled_gradient(bundle.circuit, bundle.protocol, gamma, h,
                                   config.shots, sample_rng, config.estimator)
                      .grad;
        return eg;
    };
    return minimize_function(objective, bundle.gamma_len, config);
}

}  // namespace loccsim
