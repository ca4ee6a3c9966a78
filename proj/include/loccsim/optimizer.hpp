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
#include <optional>
#include <string>
#include <vector>

#include "loccsim/gradient.hpp"
#include "loccsim/models.hpp"

namespace loccsim {

enum class OptMethod { GradientDescent, Adam };

struct OptimizerConfig {
    OptMethod method = OptMethod::Adam;
    double learning_rate = 0.05;
    int iterations = 2000;
    int restarts = 5;
    std::uint64_t seed = 0;
    bool exact_gradient = true;     // false: Algorithm-1 sampling estimator
    int shots = 100;                // per shifted protocol when sampling
    EstimatorMode estimator = EstimatorMode::Branch;
    double grad_norm_tol = 1e-8;    // early stop on the gradient norm
    // Optional warm start used for restart 0; later restarts draw fresh
    // seeded initializations, unless warm_start_jitter > 0, in which case
    // restart r > 0 samples warm_start + jitter * N(0, 1) instead (basin
    // exploration around a known-good point).
    std::optional<std::vector<double>> warm_start;
    double warm_start_jitter = 0.0;
};

struct IterationRecord {
    int iteration = 0;
    double energy = 0.0;
    double grad_norm = 0.0;
    double seconds = 0.0;  // wall time since the restart began
};

struct TrainingTrace {
    std::vector<IterationRecord> records;  // trace of the best restart
    std::vector<double> best_gamma;
    double best_energy = 0.0;
    int best_restart = -1;
    int aborted_restarts = 0;
    std::vector<std::string> diagnostics;  // one entry per aborted restart

    // "iter,energy,grad_norm,seconds" rows with a header line.
    std::string to_csv() const;
};

// Objective for minimize_function: value and gradient at gamma.
using Objective = std::function<EnergyGradient(const std::vector<double>&)>;

// Core loop over an arbitrary differentiable objective. Each restart draws
// init_gamma(gamma_len, seed + restart) (or the warm start for restart 0),
// runs the configured first-order method, and keeps the best-energy result.
// A NaN energy or gradient aborts the restart and records a diagnostic.
// Deterministic for a fixed config when the objective is.
TrainingTrace minimize_function(const Objective& objective, int gamma_len,
                                const OptimizerConfig& config);

// Energy minimization of Tr[H Psi_gamma] over the bundle's protocol
// parameters.
TrainingTrace minimize(const AnsatzBundle& bundle, const Hamiltonian& h,
                       const OptimizerConfig& config);

}  // namespace loccsim
