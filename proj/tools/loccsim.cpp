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
// loccsim: experiment configs in, deterministic CSV/JSON results out.
//
// Subcommands: solve, grad-check, scaling, qmi, certify, compare.
// Exit codes: 0 pass, 1 criterion failure, 2 usage/schema error,
// 3 resource/runtime error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "loccsim/analyzer.hpp"
#include "loccsim/gradient.hpp"
#include "loccsim/models.hpp"
#include "loccsim/optimizer.hpp"
#include "loccsim/oracle.hpp"

using json = nlohmann::json;
using namespace loccsim;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCriterion = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

PauliOp parse_pauli(const std::string& s) {
    if (s == "X") return PauliOp::X;
    if (s == "Y") return PauliOp::Y;
    if (s == "Z") return PauliOp::Z;
    throw UsageError("pauli must be X, Y, or Z");
}

// ---- Experiment configuration ----

struct ModelSpec {
    std::string name;  // ghz | tfim | surface | toric
    int n = 8;         // chain length (ghz/tfim)
    int nx = 3, ny = 3;
    double h = 16.0;
    std::string pauli = "X";
    std::vector<double> lambdas;
};

struct ExperimentConfig {
    std::string kind;  // solve | grad-check | scaling | qmi | certify
    ModelSpec model;
    std::vector<std::string> methods = {"locc"};  // locc | brick
    int brick_depth = 2;
    OptimizerConfig opt;
    std::string warm_start;  // "" | "ghz-exact"
    std::uint64_t seed = 0;
    // scaling only
    int n_lo = 2, n_hi = 6, scaling_seeds = 20;
    std::vector<double> couplings = {0.7, 0.8, 0.9};

    json canonical;  // normalized config used for hashing
    std::uint64_t hash() const { return fnv1a(canonical.dump()); }
};

std::vector<double> default_grid() {
    std::vector<double> g;
    for (int i = 1; i <= 9; ++i) g.push_back(i / 10.0);
    return g;
}

ExperimentConfig parse_config(const json& j) {
    ExperimentConfig c;
    if (!j.is_object()) throw UsageError("config must be a JSON object");
    c.kind = j.value("kind", "solve");
    if (!j.contains("model") || !j["model"].is_object())
        throw UsageError("config.model object required");
    const json& m = j["model"];
    c.model.name = m.value("name", "");
    if (c.model.name != "ghz" && c.model.name != "tfim" &&
        c.model.name != "surface" && c.model.name != "toric")
        throw UsageError("model.name must be ghz|tfim|surface|toric");
    c.model.n = m.value("n", 8);
    c.model.nx = m.value("nx", c.model.name == "toric" ? 2 : 3);
    c.model.ny = m.value("ny", c.model.name == "toric" ? 2 : 3);
    c.model.h = m.value("h", 16.0);
    c.model.pauli = m.value("pauli", "X");
    parse_pauli(c.model.pauli);  // validate
    if (m.contains("lambda_grid"))
        c.model.lambdas = m["lambda_grid"].get<std::vector<double>>();
    else if (m.contains("lambda"))
        c.model.lambdas = {m["lambda"].get<double>()};
    else
        c.model.lambdas = default_grid();
    for (double l : c.model.lambdas)
        if (l < 0.0 || l > 1.0) throw UsageError("lambda outside [0, 1]");

    if (j.contains("methods"))
        c.methods = j["methods"].get<std::vector<std::string>>();
    for (const auto& meth : c.methods)
        if (meth != "locc" && meth != "brick")
            throw UsageError("method must be locc or brick");
    c.brick_depth = j.value("brick_depth", 2);

    const json o = j.value("optimizer", json::object());
    std::string method = o.value("method", "adam");
    if (method == "adam")
        c.opt.method = OptMethod::Adam;
    else if (method == "gd")
        c.opt.method = OptMethod::GradientDescent;
    else
        throw UsageError("optimizer.method must be adam or gd");
    c.opt.learning_rate = o.value("learning_rate", 0.05);
    c.opt.iterations = o.value("iterations", 2000);
    c.opt.restarts = o.value("restarts", 5);
    c.opt.warm_start_jitter = o.value("warm_start_jitter", 0.0);
    if (c.opt.learning_rate <= 0 || c.opt.iterations <= 0 || c.opt.restarts <= 0)
        throw UsageError("optimizer rates and budgets must be positive");

    const json g = j.value("gradient", json::object());
    std::string source = g.value("source", "exact");
    if (source == "exact") {
        c.opt.exact_gradient = true;
    } else if (source == "sampled") {
        c.opt.exact_gradient = false;
        c.opt.shots = g.value("shots", 100);
    } else {
        throw UsageError("gradient.source must be exact or sampled");
    }
    c.warm_start = j.value("warm_start", "");
    if (!c.warm_start.empty() && c.warm_start != "ghz-exact" &&
        c.warm_start != "chain" && c.warm_start != "ghz-exact-chain")
        throw UsageError(
            "warm_start must be empty, ghz-exact, chain, or ghz-exact-chain");
    c.seed = j.value("seed", 0);
    c.opt.seed = c.seed;

    c.n_lo = j.value("n_lo", 2);
    c.n_hi = j.value("n_hi", 6);
    c.scaling_seeds = j.value("seeds", 20);
    if (j.contains("couplings"))
        c.couplings = j["couplings"].get<std::vector<double>>();

    c.canonical = j;
    return c;
}

json preset_config(const std::string& name) {
    auto grid = json::array();
    for (double l : default_grid()) grid.push_back(l);
    json j;
    if (name == "ghz8-x" || name == "ghz8-y" || name == "ghz8-z") {
        std::string p(1, static_cast<char>(std::toupper(name.back())));
        j = {{"kind", "solve"},
             {"model", {{"name", "ghz"}, {"n", 8}, {"h", 16.0}, {"pauli", p},
                        {"lambda_grid", grid}}},
             {"methods", {"locc", "brick"}},
             {"brick_depth", 2},
             {"optimizer", {{"method", "adam"}, {"learning_rate", 0.05},
                            {"iterations", 400}, {"restarts", 2}}},
             {"warm_start", "ghz-exact"},
             {"seed", 1}};
    } else if (name == "tfim8") {
        j = {{"kind", "solve"},
             {"model", {{"name", "tfim"}, {"n", 8}, {"lambda_grid", grid}}},
             {"methods", {"locc", "brick"}},
             {"brick_depth", 2},
             {"optimizer", {{"method", "adam"}, {"learning_rate", 0.05},
                            {"iterations", 400}, {"restarts", 2}}},
             {"seed", 1}};
    } else if (name == "surface33") {
        j = {{"kind", "solve"},
             {"model", {{"name", "surface"}, {"nx", 3}, {"ny", 3},
                        {"lambda_grid", grid}}},
             {"methods", {"locc", "brick"}},
             {"brick_depth", 4},
             {"optimizer", {{"method", "adam"}, {"learning_rate", 0.05},
                            {"iterations", 300}, {"restarts", 2}}},
             {"seed", 1}};
    } else if (name == "toric22-z" || name == "toric22-y" ||
               name == "toric22-x") {
        std::string p(1, static_cast<char>(std::toupper(name.back())));
        j = {{"kind", "solve"},
             {"model", {{"name", "toric"}, {"nx", 2}, {"ny", 2}, {"pauli", p},
                        {"lambda_grid", grid}}},
             {"methods", {"locc", "brick"}},
             {"brick_depth", 4},
             {"optimizer", {{"method", "adam"}, {"learning_rate", 0.05},
                            {"iterations", 300}, {"restarts", 2}}},
             {"seed", 1}};
    } else if (name == "scaling-tfim") {
        j = {{"kind", "scaling"},
             {"model", {{"name", "tfim"}}},
             {"n_lo", 2},
             {"n_hi", 12},
             {"seeds", 20},
             {"couplings", {0.7, 0.8, 0.9}},
             {"seed", 1}};
    } else {
        throw UsageError("unknown preset: " + name);
    }
    return j;
}

json load_config(const std::string& config_path, const std::string& preset,
                 std::uint64_t seed_override, bool has_seed) {
    json j;
    if (!preset.empty()) {
        j = preset_config(preset);
    } else if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw UsageError("cannot open config file " + config_path);
        try {
            in >> j;
        } catch (const std::exception& e) {
            throw UsageError(std::string("config parse error: ") + e.what());
        }
    } else {
        throw UsageError("either --config or --preset is required");
    }
    if (has_seed) j["seed"] = seed_override;
    return j;
}

// ---- Instances ----

struct Instance {
    Hamiltonian h;
    LatticeLayout layout;
};

Instance make_model(const ModelSpec& spec, double lambda) {
    PauliOp p = parse_pauli(spec.pauli);
    if (spec.name == "ghz")
        return {ghz_parent(spec.n, spec.h, lambda, p),
                ghz_locc_ansatz(spec.n).layout};
    if (spec.name == "tfim")
        return {tfim(spec.n, lambda), ghz_locc_ansatz(spec.n).layout};
    if (spec.name == "surface") {
        auto [h, layout] = rotated_surface_code(spec.nx, spec.ny, lambda);
        return {std::move(h), std::move(layout)};
    }
    auto [h, layout] = toric_code(spec.nx, spec.ny, lambda, p);
    return {std::move(h), std::move(layout)};
}

AnsatzBundle make_ansatz(const ExperimentConfig& cfg, const Instance& inst,
                         const std::string& method) {
    if (method == "brick")
        return brick_wall_ansatz(inst.h.qubit_count(), cfg.brick_depth);
    if (cfg.model.name == "ghz" || cfg.model.name == "tfim")
        return ghz_locc_ansatz(cfg.model.n);
    if (cfg.model.name == "surface")
        return surface_code_locc_ansatz(cfg.model.nx, cfg.model.ny);
    return stabilizer_locc_ansatz(inst.layout, "toric");
}

// QMI of the trained (generally mixed) output state between layout regions A
// and C, from branch-accumulated reduced density matrices.
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
                std::vector<int> out;
                for (int q : qs) out.push_back(br.qubit_map.at(q));
                std::sort(out.begin(), out.end());
                return out;
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

// ---- solve ----

int run_solve(const ExperimentConfig& cfg, const std::string& out_path,
              bool report_bits) {
    std::ostringstream os;
    os << "lambda,method,energy,E_GS,rel_error,qmi,seed,config_hash\n";
    char hash_hex[20];
    std::snprintf(hash_hex, sizeof hash_hex, "%016llx",
                  static_cast<unsigned long long>(cfg.hash()));
    // Grid continuation ("chain" modes): each lambda's restart 0 starts from
    // the previous lambda's optimum, tracking the ground-state branch across
    // the grid instead of re-descending from scratch.
    std::map<std::string, std::vector<double>> chain_start;
    for (double lambda : cfg.model.lambdas) {
        Instance inst = make_model(cfg.model, lambda);
        double e_gs = ground(inst.h, 1).eigenvalues[0];
        for (const auto& method : cfg.methods) {
            AnsatzBundle bundle = make_ansatz(cfg, inst, method);
            OptimizerConfig opt = cfg.opt;
            bool chain = cfg.warm_start == "chain" ||
                         cfg.warm_start == "ghz-exact-chain";
            bool ghz_seed = cfg.warm_start == "ghz-exact" ||
                            cfg.warm_start == "ghz-exact-chain";
            if (chain && chain_start.count(method))
                opt.warm_start = chain_start[method];
            else if (method == "locc" && ghz_seed &&
                     (cfg.model.name == "ghz" || cfg.model.name == "tfim"))
                opt.warm_start = ghz_exact_gamma(cfg.model.n);
            TrainingTrace trace = minimize(bundle, inst.h, opt);
            if (chain) chain_start[method] = trace.best_gamma;
            if (trace.best_energy < e_gs - 1e-9)
                throw std::runtime_error("variational bound violated");
            double rel = std::abs((trace.best_energy - e_gs) / e_gs);
            double q = trained_qmi(bundle, trace.best_gamma);
            if (report_bits) q = entropy_nats_to_bits(q);
            os << fmt(lambda) << "," << method << ","
               << fmt(trace.best_energy) << "," << fmt(e_gs) << ","
               << fmt(rel) << "," << fmt(q) << "," << cfg.seed << ","
               << hash_hex << "\n";
        }
    }
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << os.str();
    std::cout << "wrote " << out_path << "\n";
    return kExitPass;
}

// ---- grad-check ----

int run_grad_check(const ExperimentConfig& cfg, const std::string& out_path) {
    double lambda = cfg.model.lambdas.front();
    Instance inst = make_model(cfg.model, lambda);
    AnsatzBundle bundle = make_ansatz(cfg, inst, cfg.methods.front());
    auto gamma = init_gamma(bundle.gamma_len, cfg.seed);

    auto shift = exact_gradient(bundle.circuit, bundle.protocol, gamma, inst.h,
                                GradMethod::Shift);
    double method_diff = 0.0;
    try {
        auto adj = exact_gradient(bundle.circuit, bundle.protocol, gamma,
                                  inst.h, GradMethod::Adjoint);
        for (std::size_t i = 0; i < shift.size(); ++i)
            method_diff = std::max(method_diff, std::abs(shift[i] - adj[i]));
    } catch (const std::exception&) {
        method_diff = 0.0;  // adjoint ineligible for this circuit shape
    }

    // Central finite differences on a deterministic coordinate subset.
    double fd_diff = 0.0;
    const double eps = 1e-5;
    int checked = 0;
    for (std::size_t k = 0; k < gamma.size() && checked < 12;
         k += std::max<std::size_t>(1, gamma.size() / 12), ++checked) {
        auto gp = gamma, gm = gamma;
        gp[k] += eps;
        gm[k] -= eps;
        double fd = (energy(bundle.circuit, bundle.protocol, gp, inst.h) -
                     energy(bundle.circuit, bundle.protocol, gm, inst.h)) /
                    (2 * eps);
        fd_diff = std::max(fd_diff, std::abs(fd - shift[k]));
    }
    bool pass = method_diff < 1e-9 && fd_diff < 1e-6;
    json report = {{"method_max_diff", method_diff},
                   {"fd_max_diff", fd_diff},
                   {"coords_checked", checked},
                   {"pass", pass}};
    std::string text = report.dump(2) + "\n";
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        out << text;
    }
    std::cout << text;
    return pass ? kExitPass : kExitCriterion;
}

// ---- scaling ----

int run_scaling(const ExperimentConfig& cfg, const std::string& out_path) {
    if (cfg.model.name != "tfim" && cfg.model.name != "ghz")
        throw UsageError("scaling supports chain models (tfim, ghz)");
    ModelFactory model;
    if (cfg.model.name == "tfim") {
        model = [](int n, double g) { return tfim(n, g); };
    } else {
        double h = cfg.model.h;
        PauliOp p = parse_pauli(cfg.model.pauli);
        model = [h, p](int n, double g) { return ghz_parent(n, h, g, p); };
    }
    AnsatzFactory ansatz = [](int n) { return ghz_locc_ansatz(n); };
    auto rows = gradient_scaling(model, ansatz, cfg.n_lo, cfg.n_hi,
                                 cfg.couplings, cfg.scaling_seeds, cfg.seed);
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << scaling_csv(rows);
    std::cout << "wrote " << out_path << "\n";
    return kExitPass;
}

// ---- qmi ----

int run_qmi(const ExperimentConfig& cfg, const std::string& out_path,
            bool report_bits) {
    std::ostringstream os;
    os << "lambda,method,energy,E_GS,rel_error,qmi,seed,config_hash\n";
    char hash_hex[20];
    std::snprintf(hash_hex, sizeof hash_hex, "%016llx",
                  static_cast<unsigned long long>(cfg.hash()));
    for (double lambda : cfg.model.lambdas) {
        Instance inst = make_model(cfg.model, lambda);
        auto res = ground(inst.h, 2);
        const auto& lay = inst.layout;
        std::vector<int> a(lay.region_a.begin(), lay.region_a.end());
        std::vector<int> c(lay.region_c.begin(), lay.region_c.end());
        double q = ground_qmi(inst.h, a, c);
        if (report_bits) q = entropy_nats_to_bits(q);
        os << fmt(lambda) << ",oracle," << fmt(res.eigenvalues[0]) << ","
           << fmt(res.eigenvalues[0]) << ",0," << fmt(q) << "," << cfg.seed
           << "," << hash_hex << "\n";
    }
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        out << os.str();
        std::cout << "wrote " << out_path << "\n";
    } else {
        std::cout << os.str();
    }
    return kExitPass;
}

// ---- certify ----

int run_certify(const ExperimentConfig& cfg, const std::string& out_path) {
    double lambda = cfg.model.lambdas.front();
    Instance inst = make_model(cfg.model, lambda);
    AnsatzBundle bundle = make_ansatz(cfg, inst, cfg.methods.front());
    CertifyThresholds thr;
    thr.seed = cfg.seed;
    ConditionReport rep = certify(bundle, inst.h, thr);
    std::string text = rep.to_json() + "\n";
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        out << text;
    }
    std::cout << text;
    return rep.verdict ? kExitPass : kExitCriterion;
}

// ---- compare ----

struct ResultRow {
    double lambda;
    std::string method;
    double energy, e_gs, rel_error, qmi_value;
    std::string seed, hash;
};

std::vector<ResultRow> read_results(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open results file " + path);
    std::string line;
    if (!std::getline(in, line) ||
        line != "lambda,method,energy,E_GS,rel_error,qmi,seed,config_hash")
        throw UsageError("bad results header in " + path);
    std::vector<ResultRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) f.push_back(tok);
        if (f.size() != 8) throw UsageError("bad results row: " + line);
        try {
            rows.push_back({std::stod(f[0]), f[1], std::stod(f[2]),
                            std::stod(f[3]), std::stod(f[4]), std::stod(f[5]),
                            f[6], f[7]});
        } catch (const std::exception&) {
            throw UsageError("non-numeric field in row: " + line);
        }
    }
    if (rows.empty()) throw UsageError("no data rows in " + path);
    return rows;
}

int run_compare(const std::string& results_path, const std::string& baseline,
                double tolerance, const std::string& method_filter,
                bool allow_mixed, const std::string& out_path) {
    auto rows = read_results(results_path);
    for (const auto& r : rows)
        if (!allow_mixed && r.hash != rows.front().hash)
            throw UsageError("mixed config hashes in results (use "
                             "--allow-mixed to override)");
    json criteria = json::array();
    bool all_pass = true;
    if (!baseline.empty()) {
        // Row-by-row comparison against another results file.
        auto base = read_results(baseline);
        if (base.size() != rows.size())
            throw UsageError("baseline row count mismatch");
        for (std::size_t i = 0; i < rows.size(); ++i) {
            bool ok = rows[i].method == base[i].method &&
                      std::abs(rows[i].lambda - base[i].lambda) < 1e-12 &&
                      std::abs(rows[i].energy - base[i].energy) <= tolerance;
            all_pass = all_pass && ok;
            criteria.push_back({{"lambda", rows[i].lambda},
                                {"method", rows[i].method},
                                {"energy", rows[i].energy},
                                {"baseline_energy", base[i].energy},
                                {"tolerance", tolerance},
                                {"pass", ok}});
        }
    } else {
        // Threshold check on the relative error column.
        for (const auto& r : rows) {
            if (!method_filter.empty() && r.method != method_filter) continue;
            bool ok = r.rel_error <= tolerance;
            all_pass = all_pass && ok;
            criteria.push_back({{"lambda", r.lambda},
                                {"method", r.method},
                                {"rel_error", r.rel_error},
                                {"tolerance", tolerance},
                                {"pass", ok}});
        }
        if (criteria.empty()) throw UsageError("no rows match the filter");
    }
    json verdict = {{"criteria", criteria}, {"all_pass", all_pass}};
    std::string text = verdict.dump(2) + "\n";
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        out << text;
    }
    std::cout << text;
    return all_pass ? kExitPass : kExitCriterion;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"loccsim: variational LOCC circuit experiments"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, preset, out_path = "results.csv";
    std::uint64_t seed = 0;
    int threads = 1;
    bool bits = false;
    app.add_option("--seed", seed, "override the config seed");
    app.add_option("--threads", threads,
                   "worker pool size (accepted; execution is sequential)");
    app.add_option("--out", out_path, "output file path");

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON experiment config");
        sub->add_option("--preset", preset, "built-in experiment preset");
    };
    CLI::App* solve = app.add_subcommand("solve", "optimize over a lambda grid");
    add_common(solve);
    solve->add_flag("--bits", bits, "report QMI in bits instead of nats");
    CLI::App* gradc = app.add_subcommand("grad-check",
                                         "cross-validate gradient methods");
    add_common(gradc);
    CLI::App* scal = app.add_subcommand("scaling",
                                        "first-iteration gradient scaling");
    add_common(scal);
    CLI::App* qmic = app.add_subcommand("qmi", "oracle ground-state QMI");
    add_common(qmic);
    qmic->add_flag("--bits", bits, "report QMI in bits instead of nats");
    CLI::App* cert = app.add_subcommand("certify",
                                        "trainability condition report");
    add_common(cert);

    CLI::App* comp = app.add_subcommand("compare", "results vs baseline");
    std::string results_path, baseline_path, method_filter;
    double tolerance = 1e-3;
    bool allow_mixed = false;
    comp->add_option("--results", results_path, "results CSV")->required();
    comp->add_option("--baseline", baseline_path,
                     "baseline results CSV (row-by-row mode)");
    comp->add_option("--tolerance", tolerance, "acceptance tolerance");
    comp->add_option("--method", method_filter, "restrict to one method");
    comp->add_flag("--allow-mixed", allow_mixed, "permit mixed config hashes");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (comp->parsed())
            return run_compare(results_path, baseline_path, tolerance,
                               method_filter, allow_mixed,
                               out_path == "results.csv" ? "" : out_path);
        json raw = load_config(config_path, preset,
                               seed, app.count("--seed") > 0);
        ExperimentConfig cfg = parse_config(raw);
        if (solve->parsed()) return run_solve(cfg, out_path, bits);
        if (gradc->parsed())
            return run_grad_check(cfg, out_path == "results.csv" ? "" : out_path);
        if (scal->parsed()) return run_scaling(cfg, out_path);
        if (qmic->parsed())
            return run_qmi(cfg, out_path == "results.csv" ? "" : out_path, bits);
        if (cert->parsed())
            return run_certify(cfg, out_path == "results.csv" ? "" : out_path);
        throw UsageError("no subcommand");
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return kExitRuntime;
    }
}
