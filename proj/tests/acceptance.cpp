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
//
// Acceptance gate: the ten criteria the artifact is judged by, each printed
// as a single pass/fail line with its pinned tolerance. Criteria 7 and 8
// (multi-hour training runs) only execute with --extended and are reported
// as SKIP otherwise. Exit status is the number of failed criteria.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "loccsim/analyzer.hpp"
#include "loccsim/gradient.hpp"
#include "loccsim/models.hpp"
#include "loccsim/optimizer.hpp"
#include "loccsim/oracle.hpp"
#include "../tests/test_circuits_util.hpp"

using namespace loccsim;

namespace {

struct Outcome {
    bool pass = false;
    bool skipped = false;
    std::string detail;
};

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

// Shared training budget for the energy-accuracy criteria. One restart from
// the documented warm start (branching ansatz) or a seeded random init
// (baseline); identical iteration budgets for both methods.
constexpr int kIters = 300;
constexpr double kLearningRate = 0.05;

std::vector<double> lambda_grid() {
    std::vector<double> g;
    for (int i = 1; i <= 9; ++i) g.push_back(i / 10.0);
    return g;
}

struct GridPoint {
    double lambda = 0.0;
    double e_gs = 0.0;
    double locc_rel = 0.0, brick_rel = 0.0;
    std::vector<double> locc_gamma, brick_gamma;
};

// Per lambda, both methods get three single-run candidates of kIters each
// (identical iteration budgets): the method's warm start if any, grid
// continuation from the previous lambda's optimum, and a seeded random init.
std::vector<GridPoint> train_grid(
    const std::function<Hamiltonian(double)>& model, int n,
    const std::optional<std::vector<double>>& locc_warm,
    const AnsatzBundle& locc_bundle, int brick_depth,
    std::uint64_t seed) {
    std::vector<GridPoint> out;
    AnsatzBundle brick = brick_wall_ansatz(n, brick_depth);
    std::optional<std::vector<double>> locc_prev, brick_prev;

    auto best_of = [&](const AnsatzBundle& bundle, const Hamiltonian& h,
                       const std::optional<std::vector<double>>& warm,
                       const std::optional<std::vector<double>>& prev) {
        std::vector<std::optional<std::vector<double>>> starts = {
            warm, prev, std::nullopt};
        TrainingTrace best;
        best.best_energy = std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < starts.size(); ++s) {
            OptimizerConfig cfg;
            cfg.iterations = kIters;
            cfg.learning_rate = kLearningRate;
            cfg.restarts = 1;
            cfg.grad_norm_tol = 1e-5;
            cfg.seed = seed + s;
            if (starts[s] && !(s > 0 && starts[s] == warm))
                cfg.warm_start = starts[s];
            else if (starts[s])
                continue;  // chain start identical to the warm start
            TrainingTrace t = minimize(bundle, h, cfg);
            if (t.best_energy < best.best_energy) best = std::move(t);
        }
        return best;
    };

    for (double lambda : lambda_grid()) {
        Hamiltonian h = model(lambda);
        GridPoint pt;
        pt.lambda = lambda;
        pt.e_gs = ground(h, 1).eigenvalues[0];

        TrainingTrace locc = best_of(locc_bundle, h, locc_warm, locc_prev);
        locc_prev = locc.best_gamma;
        pt.locc_rel = std::abs((locc.best_energy - pt.e_gs) / pt.e_gs);
        pt.locc_gamma = locc.best_gamma;

        TrainingTrace bw = best_of(brick, h, std::nullopt, brick_prev);
        brick_prev = bw.best_gamma;
        pt.brick_rel = std::abs((bw.best_energy - pt.e_gs) / pt.e_gs);
        pt.brick_gamma = bw.best_gamma;
        out.push_back(std::move(pt));
    }
    return out;
}

// Mixed-state I(A:C) of the trained output, accumulated over branches.
double trained_qmi(const AnsatzBundle& bundle,
                   const std::vector<double>& gamma) {
    const auto& lay = bundle.layout;
    std::vector<int> a(lay.region_a.begin(), lay.region_a.end());
    std::vector<int> c(lay.region_c.begin(), lay.region_c.end());
    std::vector<int> ac = a;
    ac.insert(ac.end(), c.begin(), c.end());
    std::sort(ac.begin(), ac.end());
    std::set<int> keep;
    for (int q = 0; q < lay.data_count(); ++q) keep.insert(q);
    auto resolver = LoccCircuit::resolve_with(bundle.protocol, gamma);
    Eigen::MatrixXcd rho_a, rho_c, rho_ac;
    bool first = true;
    bundle.circuit.enumerate_branches(
        resolver,
        [&](const Branch& br) {
            auto remap = [&](const std::vector<int>& qs) {
                std::vector<int> m;
                for (int q : qs) m.push_back(br.qubit_map.at(q));
                std::sort(m.begin(), m.end());
                return m;
            };
            auto da = br.state.reduced_density(remap(a)).entries();
            auto dc = br.state.reduced_density(remap(c)).entries();
            auto dac = br.state.reduced_density(remap(ac)).entries();
            if (first) {
                rho_a = da;
                rho_c = dc;
                rho_ac = dac;
                first = false;
            } else {
                rho_a += da;
                rho_c += dc;
                rho_ac += dac;
            }
        },
        1e-14, true, keep);
    return qmi(DensityMatrix(rho_a, a), DensityMatrix(rho_c, c),
               DensityMatrix(rho_ac, ac));
}

// Results of the GHZ grid runs, shared between criteria 4 and 5.
std::map<char, std::vector<GridPoint>> ghz_runs;

Outcome criterion_1() {
    std::mt19937_64 rng(20260826);
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
        int n = 2 + static_cast<int>(rng() % 4);
        int m = static_cast<int>(rng() % static_cast<std::uint64_t>(
                                           std::min(n, 4) + 1));
        auto inst = testutil::random_instance(n, m, rng, (rng() & 1) != 0);
        auto grad = exact_gradient(inst.circuit, inst.protocol, inst.gamma,
                                   inst.h);
        const double delta = 1e-5;
        for (std::size_t k = 0; k < inst.gamma.size(); ++k) {
            auto gp = inst.gamma, gm = inst.gamma;
            gp[k] += delta;
            gm[k] -= delta;
            double fd = (energy(inst.circuit, inst.protocol, gp, inst.h) -
                         energy(inst.circuit, inst.protocol, gm, inst.h)) /
                        (2 * delta);
            worst = std::max(worst, std::abs(fd - grad[k]));
        }
    }
    return {worst <= 1e-6, false,
            "exact gradient vs finite differences on 50 random instances: "
            "max diff " + fmt(worst) + " (tol 1e-06)"};
}

Outcome criterion_2() {
    std::mt19937_64 rng(4242);
    double worst = 0.0;
    int checked = 0;
    while (checked < 50) {
        int n = 2 + static_cast<int>(rng() % 4);
        int m = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(
                                               std::min(n, 4)));
        auto inst = testutil::random_instance(n, m, rng, (rng() & 1) != 0);
        std::vector<double> theta(
            static_cast<std::size_t>(inst.circuit.theta_len()));
        std::uniform_real_distribution<double> ang(-3.0, 3.0);
        for (auto& t : theta) t = ang(rng);
        Outcomes v(static_cast<std::size_t>(inst.circuit.outcome_len()));
        for (auto& b : v) b = static_cast<int>(rng() & 1);
        int j = static_cast<int>(rng() % theta.size());
        double g = branch_theta_gradient(inst.circuit, theta, v, inst.h, j);
        const double delta = 1e-5;
        auto tp = theta, tm = theta;
        tp[static_cast<std::size_t>(j)] += delta;
        tm[static_cast<std::size_t>(j)] -= delta;
        double fd = (branch_energy(inst.circuit, tp, v, inst.h) -
                     branch_energy(inst.circuit, tm, v, inst.h)) /
                    (2 * delta);
        worst = std::max(worst, std::abs(fd - g));
        ++checked;
    }
    return {worst <= 1e-7, false,
            "per-branch shift rule vs finite differences on 50 post-selected "
            "branches: max diff " + fmt(worst) + " (tol 1e-07)"};
}

Outcome criterion_3() {
    AnsatzBundle bundle = ghz_locc_ansatz(4);
    Hamiltonian h = ghz_parent(4, 16.0, 0.5, PauliOp::X);
    auto gamma = init_gamma(bundle.gamma_len, 7);
    auto exact = exact_gradient(bundle.circuit, bundle.protocol, gamma, h);
    const int reps = 200, shots = 100;
    std::vector<double> mean(exact.size(), 0.0), m2(exact.size(), 0.0);
    for (int r = 0; r < reps; ++r) {
        std::mt19937_64 rng(0xabcdef12u + static_cast<std::uint64_t>(r));
        auto s = sampled_gradient(bundle.circuit, bundle.protocol, gamma, h,
                                  shots, rng);
        for (std::size_t k = 0; k < exact.size(); ++k) {
            double d = s.grad[k] - mean[k];
            mean[k] += d / (r + 1);
            m2[k] += d * (s.grad[k] - mean[k]);
        }
    }
    int outside = 0;
    double worst_sigma = 0.0;
    for (std::size_t k = 0; k < exact.size(); ++k) {
        double se = std::sqrt(m2[k] / (reps - 1)) / std::sqrt(double(reps));
        double dev = std::abs(mean[k] - exact[k]);
        if (se < 1e-12) {
            if (dev > 1e-9) ++outside;
            continue;
        }
        worst_sigma = std::max(worst_sigma, dev / se);
        if (dev > 3 * se) ++outside;
    }
    return {outside == 0, false,
            "sampling estimator mean vs exact gradient, M=100 R=200: " +
                std::to_string(outside) + " of " +
                std::to_string(exact.size()) +
                " coordinates outside 3 standard errors (worst " +
                fmt(worst_sigma) + " sigma)"};
}

Outcome criterion_4() {
    AnsatzBundle locc = ghz_locc_ansatz(8);
    auto warm = ghz_exact_gamma(8);
    double worst_locc = 0.0, min_brick_low = 1e9;
    for (char p : {'X', 'Y', 'Z'}) {
        PauliOp op = p == 'X' ? PauliOp::X : p == 'Y' ? PauliOp::Y
                                                      : PauliOp::Z;
        auto pts = train_grid(
            [&](double l) { return ghz_parent(8, 16.0, l, op); }, 8,
            warm, locc, 2, 1);
        for (const auto& pt : pts) {
            worst_locc = std::max(worst_locc, pt.locc_rel);
            if (pt.lambda <= 0.3 + 1e-12)
                min_brick_low = std::min(min_brick_low, pt.brick_rel);
        }
        ghz_runs[p] = std::move(pts);
    }
    bool pass = worst_locc <= 1e-3 && min_brick_low >= 1e-2;
    return {pass, false,
            "ghz n=8 grid, P in {X,Y,Z}: max branching-ansatz rel err " +
                fmt(worst_locc) + " (tol 1e-03); min depth-2 baseline rel "
                "err at lambda<=0.3 " + fmt(min_brick_low) + " (floor 1e-02)"};
}

Outcome criterion_5() {
    if (!ghz_runs.count('X'))
        return {false, false, "requires criterion 4 results (run 4 first)"};
    AnsatzBundle locc = ghz_locc_ansatz(8);
    AnsatzBundle brick = brick_wall_ansatz(8, 2);

    // The depth-2 baseline must have disjoint A/C light cones for the zero
    // QMI claim to be structural rather than numerical.
    std::set<int> a(locc.layout.region_a.begin(), locc.layout.region_a.end());
    std::set<int> c(locc.layout.region_c.begin(), locc.layout.region_c.end());
    auto supports = brick.protocol.structural_supports();
    auto cone_a = brick.circuit.backward_light_cone(a, supports.theta_to_bits);
    auto cone_c = brick.circuit.backward_light_cone(c, supports.theta_to_bits);
    for (int q : cone_a.cone_qubits)
        if (cone_c.cone_qubits.count(q))
            return {false, false, "baseline light cones are not disjoint"};

    double worst_gap = 0.0, worst_brick = 0.0;
    for (const auto& pt : ghz_runs['X']) {
        Hamiltonian h = ghz_parent(8, 16.0, pt.lambda, PauliOp::X);
        std::vector<int> av(a.begin(), a.end()), cv(c.begin(), c.end());
        double oracle_q = ground_qmi(h, av, cv);
        double locc_q = trained_qmi(locc, pt.locc_gamma);
        worst_gap = std::max(worst_gap, std::abs(locc_q - oracle_q));
        worst_brick = std::max(worst_brick,
                               trained_qmi(brick, pt.brick_gamma));
    }
    bool pass = worst_gap <= 0.05 && worst_brick <= 1e-10;
    return {pass, false,
            "I(A:C): max |trained - oracle| " + fmt(worst_gap) +
                " nats (tol 0.05); disjoint-cone baseline max " +
                fmt(worst_brick) + " (tol 1e-10)"};
}

Outcome criterion_6() {
    AnsatzBundle locc = ghz_locc_ansatz(8);
    auto pts = train_grid([](double l) { return tfim(8, l); }, 8,
                          ghz_exact_gamma(8), locc, 2, 1);
    const auto& last = pts.back();  // lambda = 0.9
    bool pass = last.locc_rel <= 1e-2 && last.locc_rel < last.brick_rel;
    return {pass, false,
            "tfim n=8 at lambda=0.9: branching rel err " +
                fmt(last.locc_rel) + " (tol 1e-02) vs baseline " +
                fmt(last.brick_rel)};
}

Outcome train_code_grid(const std::string& label,
                        const std::function<Hamiltonian(double)>& model,
                        const AnsatzBundle& bundle, double tol,
                        double* max_rel_out) {
    double worst = 0.0;
    for (double lambda : lambda_grid()) {
        Hamiltonian h = model(lambda);
        double e_gs = ground(h, 1).eigenvalues[0];
        OptimizerConfig cfg;
        cfg.iterations = kIters;
        cfg.learning_rate = kLearningRate;
        cfg.restarts = 2;
        cfg.grad_norm_tol = 1e-5;
        cfg.seed = 1;
        TrainingTrace t = minimize(bundle, h, cfg);
        worst = std::max(worst, std::abs((t.best_energy - e_gs) / e_gs));
    }
    if (max_rel_out) *max_rel_out = worst;
    return {worst <= tol, false,
            label + ": max rel err " + fmt(worst) + " (tol " + fmt(tol) + ")"};
}

Outcome criterion_7() {
    auto bundle = surface_code_locc_ansatz(3, 3);
    return train_code_grid(
        "3x3 rotated surface code, depth-4 ansatz",
        [](double l) { return rotated_surface_code(3, 3, l).first; }, bundle,
        1e-2, nullptr);
}

Outcome criterion_8() {
    auto [h0, layout] = toric_code(2, 2, 0.0, PauliOp::Z);
    auto bundle = stabilizer_locc_ansatz(layout, "toric");
    std::string detail;
    bool pass = true;
    for (char p : {'X', 'Y', 'Z'}) {
        PauliOp op = p == 'X' ? PauliOp::X : p == 'Y' ? PauliOp::Y
                                                      : PauliOp::Z;
        double tol = p == 'Y' ? 0.0735 : 0.0234;
        double worst = 0.0;
        Outcome o = train_code_grid(
            std::string("P=") + p,
            [&](double l) { return toric_code(2, 2, l, op).first; }, bundle,
            tol, &worst);
        pass = pass && o.pass;
        if (!detail.empty()) detail += "; ";
        detail += std::string("P=") + p + " max rel err " + fmt(worst) +
                  " (tol " + fmt(tol) + ")";
    }
    return {pass, false, "2x2 toric code: " + detail};
}

// Ratio of the measured mean |grad| at n=10 over the exponential fit of
// log(mean) vs n on {2,3,4}.
double extrapolation_ratio(const std::vector<ScalingRow>& rows, double g) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    double mean10 = 0;
    for (const auto& r : rows) {
        if (std::abs(r.g - g) > 1e-12) continue;
        if (r.n >= 2 && r.n <= 4) {
            double x = r.n, y = std::log(r.mean_abs_grad);
            sx += x; sy += y; sxx += x * x; sxy += x * y;
        }
        if (r.n == 10) mean10 = r.mean_abs_grad;
    }
    double slope = (3 * sxy - sx * sy) / (3 * sxx - sx * sx);
    double intercept = (sy - slope * sx) / 3;
    return mean10 / std::exp(intercept + slope * 10);
}

Outcome criterion_9() {
    ModelFactory model = [](int n, double g) { return tfim(n, g); };
    AnsatzFactory ansatz = [](int n) { return ghz_locc_ansatz(n); };
    auto rows = gradient_scaling(model, ansatz, 2, 10, {0.7, 0.8, 0.9}, 20, 1);
    // Side-by-side decay diagnostic: the purely unitary brick wall at depth
    // n/2 measured the same way. Not part of the pass verdict.
    AnsatzFactory brick = [](int n) {
        return brick_wall_ansatz(n, std::max(1, n / 2));
    };
    auto brows = gradient_scaling(model, brick, 2, 10, {0.8}, 20, 1);
    bool pass = true;
    std::string detail;
    for (double g : {0.7, 0.8, 0.9}) {
        double ratio = extrapolation_ratio(rows, g);
        pass = pass && ratio >= 2.0;
        if (!detail.empty()) detail += "; ";
        detail += "g=" + fmt(g) + " ratio " + fmt(ratio);
    }
    detail += "; unitary baseline g=0.8 ratio " +
              fmt(extrapolation_ratio(brows, 0.8));
    return {pass, false,
            "mean |grad| at n=10 vs exponential fit from n in {2,3,4} "
            "(floor 2x): " + detail};
}

Outcome criterion_10() {
    struct Anchor {
        std::string name;
        Hamiltonian h;
        double e0;
    };
    std::vector<Anchor> anchors;
    anchors.push_back({"ghz(8,16)", ghz_parent(8, 16.0, 0.0, PauliOp::X),
                       -23.0});
    anchors.push_back({"tfim(8)", tfim(8, 0.0), -7.0});
    anchors.push_back({"surface 3x3",
                       rotated_surface_code(3, 3, 0.0).first, -8.0});
    anchors.push_back({"toric 2x2", toric_code(2, 2, 0.0, PauliOp::Z).first,
                       -8.0});
    double worst = 0.0;
    for (const auto& a : anchors)
        worst = std::max(worst,
                         std::abs(ground(a.h, 1).eigenvalues[0] - a.e0));

    // Variational bound on a live optimizer run.
    AnsatzBundle bundle = ghz_locc_ansatz(4);
    Hamiltonian h = ghz_parent(4, 16.0, 0.2, PauliOp::X);
    double e0 = ground(h, 1).eigenvalues[0];
    OptimizerConfig cfg;
    cfg.iterations = 50;
    cfg.restarts = 2;
    cfg.seed = 3;
    TrainingTrace t = minimize(bundle, h, cfg);
    bool bound_ok = t.best_energy >= e0 - 1e-9;
    for (const auto& rec : t.records)
        bound_ok = bound_ok && rec.energy >= e0 - 1e-9;
    return {worst <= 1e-9 && bound_ok, false,
            "analytic lambda=0 anchors: max |E0 - expected| " + fmt(worst) +
                " (tol 1e-09); variational bound " +
                (bound_ok ? "holds" : "VIOLATED")};
}

}  // namespace

int main(int argc, char** argv) {
    bool extended = false;
    std::set<int> only;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--extended") == 0)
            extended = true;
        else
            only.insert(std::atoi(argv[i]));
    }
    struct Entry {
        int id;
        bool extended_only;
        std::function<Outcome()> run;
    };
    std::vector<Entry> entries = {
        {1, false, criterion_1},  {2, false, criterion_2},
        {3, false, criterion_3},  {4, false, criterion_4},
        {5, false, criterion_5},  {6, false, criterion_6},
        {7, true, criterion_7},   {8, true, criterion_8},
        {9, false, criterion_9},  {10, false, criterion_10},
    };
    int failures = 0;
    for (const auto& e : entries) {
        if (!only.empty() && !only.count(e.id)) continue;
        if (e.extended_only && !extended) {
            std::printf("criterion %2d [SKIP] extended runtime; rerun with "
                        "--extended\n", e.id);
            std::fflush(stdout);
            continue;
        }
        auto t0 = std::chrono::steady_clock::now();
        Outcome o = e.run();
        double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
        std::printf("criterion %2d [%s] %s (%.1f s)\n", e.id,
                    o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
        std::fflush(stdout);
        if (!o.pass) ++failures;
    }
    return failures;
}
