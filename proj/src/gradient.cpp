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
#include "loccsim/gradient.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "loccsim/kernels.hpp"

namespace loccsim {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

std::set<int> ham_support(const Hamiltonian& h) {
    std::set<int> s;
    for (const auto& t : h.terms())
        for (const auto& [q, op] : t.word()) s.insert(q);
    return s;
}

ThetaResolver fixed_theta_resolver(const std::vector<double>& theta) {
    return [theta](int slot, const Outcomes&) {
        return theta.at(static_cast<std::size_t>(slot));
    };
}

// Every theta slot must bind exactly one gate occurrence, otherwise the
// single-angle parameter-shift rule (branch energies of trig degree 1) does
// not apply.
void require_single_binding(const LoccCircuit& circuit) {
    std::vector<int> count(static_cast<std::size_t>(circuit.theta_len()), 0);
    for (const auto& st : circuit.stages()) {
        const auto* u = std::get_if<UnitaryLayer>(&st);
        if (!u) continue;
        for (const auto& blk : u->blocks)
            for (const auto& g : blk.gates)
                if (!g.fixed) ++count[static_cast<std::size_t>(g.slot)];
    }
    for (int c : count)
        if (c > 1)
            throw std::invalid_argument(
                "gradient: theta slot bound to multiple gates");
}

Outcomes decode_outcomes(std::size_t index, int m) {
    Outcomes v(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i)
        v[static_cast<std::size_t>(i)] =
            static_cast<std::uint8_t>((index >> i) & 1);
    return v;
}

}  // namespace

std::vector<double> GradientMatrices::contract() const {
    std::vector<double> grad(static_cast<std::size_t>(gamma_len), 0.0);
    for (int k = 0; k < gamma_len; ++k) {
        double acc = 0.0;
        for (std::size_t r = 0; r < gq.size(); ++r)
            for (std::size_t j = 0; j < gq[r].size(); ++j)
                acc += gc[static_cast<std::size_t>(k)][r][j] * gq[r][j];
        grad[static_cast<std::size_t>(k)] = acc;
    }
    return grad;
}

double branch_energy(const LoccCircuit& circuit, const std::vector<double>& theta,
                     const Outcomes& v, const Hamiltonian& h,
                     const StateVector* initial) {
    if (static_cast<int>(theta.size()) != circuit.theta_len())
        throw std::invalid_argument("gradient: theta length mismatch");
    Branch b = circuit.run_postselected(fixed_theta_resolver(theta), v,
                                        /*compact=*/true, ham_support(h), initial);
    if (b.prob == 0.0) return 0.0;
    return b.expectation(h);
}

double branch_theta_gradient(const LoccCircuit& circuit,
                             const std::vector<double>& theta, const Outcomes& v,
                             const Hamiltonian& h, int j,
                             const StateVector* initial) {
    if (j < 0 || j >= circuit.theta_len())
        throw std::out_of_range("gradient: theta index out of range");
    require_single_binding(circuit);
    std::vector<double> tp = theta, tm = theta;
    tp[static_cast<std::size_t>(j)] += kHalfPi;
    tm[static_cast<std::size_t>(j)] -= kHalfPi;
    return 0.5 * (branch_energy(circuit, tp, v, h, initial) -
                  branch_energy(circuit, tm, v, h, initial));
}

GradientMatrices gradient_matrices(const LoccCircuit& circuit,
                                   const LoccProtocol& protocol,
                                   const std::vector<double>& gamma,
                                   const Hamiltonian& h,
                                   const StateVector* initial) {
    const int m = circuit.outcome_len();
    if (m > 16)
        throw std::runtime_error("gradient: 2^m branch table infeasible for m > 16");
    require_single_binding(circuit);
    circuit.validate_causality(protocol.structural_supports().theta_to_bits);

    const std::size_t rows = std::size_t{1} << m;
    const int tl = circuit.theta_len();
    const int gl = protocol.gamma_len();
    GradientMatrices gm;
    gm.outcome_len = m;
    gm.theta_len = tl;
    gm.gamma_len = gl;
    gm.gq.assign(rows, std::vector<double>(static_cast<std::size_t>(tl), 0.0));
    gm.gc.assign(static_cast<std::size_t>(gl),
                 std::vector<std::vector<double>>(
                     rows, std::vector<double>(static_cast<std::size_t>(tl), 0.0)));

    const auto keep = ham_support(h);
    for (std::size_t r = 0; r < rows; ++r) {
        const Outcomes v = decode_outcomes(r, m);
        const auto theta = protocol.eval(gamma, v);
        for (int j = 0; j < tl; ++j)
            for (const auto& [k, val] : protocol.jacobian_row(j, v))
                gm.gc[static_cast<std::size_t>(k)][r][static_cast<std::size_t>(j)] +=
                    val;
        Branch b = circuit.run_postselected(fixed_theta_resolver(theta), v,
                                            /*compact=*/true, keep, initial);
        if (b.prob <= 1e-14) continue;  // zero-probability rows stay exactly 0
        for (int j = 0; j < tl; ++j)
            gm.gq[r][static_cast<std::size_t>(j)] =
                branch_theta_gradient(circuit, theta, v, h, j, initial);
    }
    return gm;
}

double energy(const LoccCircuit& circuit, const LoccProtocol& protocol,
              const std::vector<double>& gamma, const Hamiltonian& h,
              const StateVector* initial) {
    double e = 0.0;
    circuit.enumerate_branches(
        LoccCircuit::resolve_with(protocol, gamma),
        [&](const Branch& b) { e += b.expectation(h); },
        /*prune_eps=*/0.0, /*compact=*/true, ham_support(h), initial);
    return e;
}

namespace {

// --- Shift method: one branch enumeration per shifted protocol -------------

EnergyGradient shift_gradient(const LoccCircuit& circuit,
                              const LoccProtocol& protocol,
                              const std::vector<double>& gamma,
                              const Hamiltonian& h, const StateVector* initial) {
    const int tl = circuit.theta_len();
    const int gl = protocol.gamma_len();
    const auto keep = ham_support(h);
    EnergyGradient out;
    out.energy = energy(circuit, protocol, gamma, h, initial);
    out.grad.assign(static_cast<std::size_t>(gl), 0.0);
    for (int j = 0; j < tl; ++j) {
        for (int sign : {+1, -1}) {
            const auto shifted = protocol.shifted(j, sign);
            circuit.enumerate_branches(
                LoccCircuit::resolve_with(shifted, gamma),
                [&](const Branch& b) {
                    const double e = b.expectation(h);
                    for (const auto& [k, val] : protocol.jacobian_row(j, b.v))
                        out.grad[static_cast<std::size_t>(k)] +=
                            sign * 0.5 * e * val;
                },
                0.0, true, keep, initial);
        }
    }
    return out;
}

// --- Adjoint method ---------------------------------------------------------

struct PlainGate {
    PauliString generator;
    int slot = -1;  // -1 for fixed
    double angle = 0.0;
};

struct CircuitShape {
    bool eligible = false;
    std::vector<PlainGate> prefix;                 // full-register unitaries
    std::vector<std::pair<int, int>> measurements; // (qubit, slot) in order
    std::vector<PlainGate> suffix;                 // logical-qubit unitaries
};

CircuitShape analyze_shape(const LoccCircuit& circuit) {
    CircuitShape sh;
    int phase = 0;  // 0 prefix, 1 measure block, 2 suffix
    for (const auto& st : circuit.stages()) {
        if (const auto* u = std::get_if<UnitaryLayer>(&st)) {
            if (phase == 1) phase = 2;
            for (const auto& blk : u->blocks)
                for (const auto& g : blk.gates) {
                    PlainGate pg{g.generator, g.fixed ? -1 : g.slot, g.angle};
                    (phase == 0 ? sh.prefix : sh.suffix).push_back(std::move(pg));
                }
        } else {
            if (phase == 2) return sh;  // second measurement block: ineligible
            phase = 1;
            const auto& m = std::get<MeasureLayer>(st);
            for (std::size_t i = 0; i < m.qubits.size(); ++i)
                sh.measurements.emplace_back(m.qubits[i], m.outcome_slot[i]);
        }
    }
    sh.eligible = true;
    return sh;
}

void apply_plain(StateVector& sv, const PlainGate& g,
                 const std::map<int, int>& qubit_map, double theta) {
    std::map<int, PauliOp> word;
    for (const auto& [q, op] : g.generator.word())
        word.emplace(qubit_map.at(q), op);
    sv.apply_rotation(PauliString(std::move(word), g.generator.coefficient()),
                      theta);
}

// State of one measurement-tree path in the adjoint sweep.
struct AdjFrame {
    StateVector state;  // compacted, unnormalized
    Outcomes v;
    std::map<int, int> qubit_map;
    std::map<int, int> pinned;
    std::vector<std::pair<int, int>> kept_meas;  // measured but still live
};

EnergyGradient adjoint_gradient(const LoccCircuit& circuit,
                                const LoccProtocol& protocol,
                                const std::vector<double>& gamma,
                                const Hamiltonian& h, const CircuitShape& sh,
                                const StateVector* initial) {
    namespace ker = kernels;
    const auto& ops = ker::backend();
    const int n = circuit.qubit_count();
    const int gl = protocol.gamma_len();
    const auto keep = ham_support(h);

    // Qubits the suffix touches must stay live through compaction.
    std::set<int> keep_all = keep;
    for (const auto& g : sh.suffix)
        for (const auto& [q, op] : g.generator.word()) keep_all.insert(q);

    EnergyGradient out;
    out.grad.assign(static_cast<std::size_t>(gl), 0.0);

    // Prefix angles: by causality these read no bits, so v = 0s is exact.
    const Outcomes zeros(static_cast<std::size_t>(circuit.outcome_len()), 0);
    std::vector<double> prefix_theta(sh.prefix.size(), 0.0);
    for (std::size_t i = 0; i < sh.prefix.size(); ++i)
        prefix_theta[i] = sh.prefix[i].slot < 0
                              ? sh.prefix[i].angle
                              : protocol.eval_theta(sh.prefix[i].slot, gamma, zeros);

    // Forward through the prefix.
    StateVector phi = initial ? *initial : StateVector(n);
    if (phi.qubit_count() != n)
        throw std::invalid_argument("gradient: initial state size mismatch");
    {
        std::map<int, int> ident;
        for (int q = 0; q < n; ++q) ident[q] = q;
        for (std::size_t i = 0; i < sh.prefix.size(); ++i)
            apply_plain(phi, sh.prefix[i], ident, prefix_theta[i]);
    }

    // lambda = sum_v P_v F_v^dag H F_v P_v phi, assembled sector by sector.
    StateVector lambda(n);
    lambda[0] = 0.0;

    // Suffix slots (for the per-leaf feedforward shifts).
    std::vector<int> suffix_slots;
    for (const auto& g : sh.suffix)
        if (g.slot >= 0) suffix_slots.push_back(g.slot);

    // DFS over the measurement tree.
    std::function<void(AdjFrame&, std::size_t)> walk = [&](AdjFrame& f,
                                                           std::size_t mi) {
        if (mi < sh.measurements.size()) {
            const auto [q, slot] = sh.measurements[mi];
            const bool droppable = !keep_all.count(q);
            const int phys = f.qubit_map.at(q);
            for (int outcome = 0; outcome < 2; ++outcome) {
                AdjFrame g2 = f;
                auto res = g2.state.project(phys, outcome);
                if (res.probability <= 1e-14) continue;
                g2.v[static_cast<std::size_t>(slot)] =
                    static_cast<std::uint8_t>(outcome);
                if (droppable) {
                    g2.state = g2.state.drop_qubit(phys, outcome);
                    g2.qubit_map.erase(q);
                    for (auto& [lq, pq] : g2.qubit_map)
                        if (pq > phys) --pq;
                    g2.pinned[q] = outcome;
                } else {
                    g2.kept_meas.emplace_back(q, outcome);
                }
                walk(g2, mi + 1);
            }
            return;
        }

        // Leaf: resolve suffix angles, apply the suffix.
        std::vector<double> suf_theta(sh.suffix.size(), 0.0);
        for (std::size_t i = 0; i < sh.suffix.size(); ++i)
            suf_theta[i] = sh.suffix[i].slot < 0
                               ? sh.suffix[i].angle
                               : protocol.eval_theta(sh.suffix[i].slot, gamma, f.v);
        StateVector psi = f.state;
        for (std::size_t i = 0; i < sh.suffix.size(); ++i)
            apply_plain(psi, sh.suffix[i], f.qubit_map, suf_theta[i]);

        // Remapped Hamiltonian terms for this leaf.
        std::vector<PauliString> terms;
        for (const auto& t : h.terms())
            if (auto mt = remap_through(t, f.qubit_map, f.pinned)) terms.push_back(*mt);
        double e = 0.0;
        for (const auto& t : terms) e += psi.expectation(t);
        out.energy += e;

        // Feedforward gradients by per-leaf parameter shift from the
        // pre-suffix state (the suffix is short; this is cheap).
        for (int j : suffix_slots) {
            double pm[2];
            for (int s = 0; s < 2; ++s) {
                StateVector sp = f.state;
                for (std::size_t i = 0; i < sh.suffix.size(); ++i) {
                    double th = suf_theta[i];
                    if (sh.suffix[i].slot == j) th += (s == 0 ? kHalfPi : -kHalfPi);
                    apply_plain(sp, sh.suffix[i], f.qubit_map, th);
                }
                double es = 0.0;
                for (const auto& t : terms) es += sp.expectation(t);
                pm[s] = es;
            }
            const double gq = 0.5 * (pm[0] - pm[1]);
            for (const auto& [k, val] : protocol.jacobian_row(j, f.v))
                out.grad[static_cast<std::size_t>(k)] += gq * val;
        }

        // chi = F^dag H F (leaf state), scattered back into the full register.
        StateVector z(psi.qubit_count() > 0 ? psi.qubit_count() : 1);
        if (psi.qubit_count() == 0) z = StateVector();
        z.scale(0.0);
        for (const auto& t : terms)
            ker::pauli_apply_acc(z.data(), psi.data(), psi.dim(), t.masks(),
                                 t.coefficient());
        for (std::size_t i = sh.suffix.size(); i-- > 0;)
            apply_plain(z, sh.suffix[i], f.qubit_map, -suf_theta[i]);
        // Outer projector P_v: the suffix (or H) may have rotated a measured
        // qubit that stayed live, leaking amplitude into the sibling sector.
        for (const auto& [q, outcome] : f.kept_meas)
            z.project(f.qubit_map.at(q), outcome);

        std::size_t base = 0;
        for (const auto& [q, bit] : f.pinned)
            if (bit) base |= std::size_t{1} << q;
        std::vector<int> live;
        for (const auto& [q, phys] : f.qubit_map) live.push_back(q);
        for (std::size_t t = 0; t < z.dim(); ++t) {
            std::size_t full = base;
            for (std::size_t b = 0; b < live.size(); ++b)
                if ((t >> b) & 1)
                    full |= std::size_t{1} << live[static_cast<std::size_t>(b)];
            lambda[full] += z[t];
        }
    };
    AdjFrame root{phi, zeros, {}, {}};
    for (int q = 0; q < n; ++q) root.qubit_map[q] = q;
    walk(root, 0);

    // Reverse sweep over the prefix: d E / d theta_i = c * Im <lambda|G|phi>.
    std::vector<ker::cplx> scratch(phi.dim());
    for (std::size_t i = sh.prefix.size(); i-- > 0;) {
        const auto& g = sh.prefix[i];
        if (g.slot >= 0) {
            std::fill(scratch.begin(), scratch.end(), ker::cplx{0.0, 0.0});
            ker::pauli_apply_acc(scratch.data(), phi.data(), phi.dim(),
                                 g.generator.masks(), 1.0);
            const ker::cplx ip =
                ops.dot(lambda.data(), scratch.data(), phi.dim());
            const double gtheta = g.generator.coefficient() * ip.imag();
            for (const auto& [k, val] : protocol.jacobian_row(g.slot, zeros))
                out.grad[static_cast<std::size_t>(k)] += gtheta * val;
        }
        std::map<int, int> ident;
        for (const auto& [q, op] : g.generator.word()) ident[q] = q;
        apply_plain(phi, g, ident, -prefix_theta[i]);
        apply_plain(lambda, g, ident, -prefix_theta[i]);
    }
    return out;
}

}  // namespace

EnergyGradient energy_and_gradient(const LoccCircuit& circuit,
                                   const LoccProtocol& protocol,
                                   const std::vector<double>& gamma,
                                   const Hamiltonian& h, GradMethod method,
                                   const StateVector* initial) {
    if (static_cast<int>(gamma.size()) != protocol.gamma_len())
        throw std::invalid_argument("gradient: gamma length mismatch");
    if (protocol.theta_len() < circuit.theta_len())
        throw std::invalid_argument("gradient: protocol misses theta slots");
    require_single_binding(circuit);
    circuit.validate_causality(protocol.structural_supports().theta_to_bits);

    if (method == GradMethod::Shift)
        return shift_gradient(circuit, protocol, gamma, h, initial);
    const CircuitShape sh = analyze_shape(circuit);
    if (sh.eligible)
        return adjoint_gradient(circuit, protocol, gamma, h, sh, initial);
    if (method == GradMethod::Adjoint)
        throw std::invalid_argument(
            "gradient: circuit shape not adjoint-eligible "
            "(need unitary prefix, one measure block, unitary suffix)");
    return shift_gradient(circuit, protocol, gamma, h, initial);
}

std::vector<double> exact_gradient(const LoccCircuit& circuit,
                                   const LoccProtocol& protocol,
                                   const std::vector<double>& gamma,
                                   const Hamiltonian& h, GradMethod method,
                                   const StateVector* initial) {
    return energy_and_gradient(circuit, protocol, gamma, h, method, initial).grad;
}

SampledGradient sampled_gradient(const LoccCircuit& circuit,
                                 const LoccProtocol& protocol,
                                 const std::vector<double>& gamma,
                                 const Hamiltonian& h, int shots,
                                 std::mt19937_64& rng, EstimatorMode mode,
                                 const StateVector* initial) {
    if (shots < 1) throw std::invalid_argument("gradient: need shots >= 1");
    require_single_binding(circuit);
    circuit.validate_causality(protocol.structural_supports().theta_to_bits);

    const int tl = circuit.theta_len();
    const int gl = protocol.gamma_len();
    const auto keep = ham_support(h);
    SampledGradient out;
    out.grad.assign(static_cast<std::size_t>(gl), 0.0);

    for (int i = 0; i < tl; ++i) {
        for (int sign : {+1, -1}) {
            const auto shifted = protocol.shifted(i, sign);
            const auto resolver = LoccCircuit::resolve_with(shifted, gamma);
            for (int s = 0; s < shots; ++s) {
                Branch b = circuit.sample_run(
                    resolver, rng, /*compact=*/mode == EstimatorMode::Branch,
                    keep, initial);
                ++out.executions;
                double c = 0.0;
                if (mode == EstimatorMode::Branch) {
                    c = b.expectation(h);  // state normalized: conditional energy
                } else {
                    // One-shot estimate: each term measured in its rotated
                    // basis on an independent sub-shot of the final state.
                    for (const auto& t : h.terms()) {
                        StateVector sv = b.state;
                        int parity = 0;
                        for (const auto& [q, op] : t.word()) {
                            const int phys = b.qubit_map.at(q);
                            if (op == PauliOp::X)
                                sv.apply_rotation(
                                    PauliString({{phys, PauliOp::Y}}, 1.0),
                                    -kHalfPi);
                            else if (op == PauliOp::Y)
                                sv.apply_rotation(
                                    PauliString({{phys, PauliOp::X}}, 1.0),
                                    kHalfPi);
                            parity ^= sv.sample(phys, rng).outcome;
                        }
                        c += parity ? -t.coefficient() : t.coefficient();
                    }
                }
                if (!std::isfinite(c))
                    throw std::runtime_error("gradient: non-finite shot value");
                for (const auto& [k, val] : protocol.jacobian_row(i, b.v))
                    out.grad[static_cast<std::size_t>(k)] +=
                        sign * 0.5 * val * c / shots;
            }
        }
    }
    return out;
}

}  // namespace loccsim
