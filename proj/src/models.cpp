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
#include "loccsim/models.hpp"

#include <cmath>
#include <stdexcept>

namespace loccsim {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_lambda(double lambda) {
    if (lambda < 0.0 || lambda > 1.0)
        throw std::invalid_argument("models: lambda must lie in [0, 1]");
}

PauliString single(int q, PauliOp op, double coeff) {
    return PauliString({{q, op}}, coeff);
}

void thirds_regions(int n, LatticeLayout& layout) {
    int q = (n + 2) / 3;
    for (int i = 0; i < q; ++i) layout.region_a.insert(i);
    for (int i = n - q; i < n; ++i) layout.region_c.insert(i);
    for (int i = q; i < n - q; ++i) layout.region_b.insert(i);
}

LatticeLayout chain_layout(int n, bool with_ancillas) {
    LatticeLayout layout;
    for (int i = 0; i < n; ++i) layout.data.push_back({double(i), 0.0});
    if (with_ancillas) {
        for (int i = 0; i + 1 < n; ++i) {
            layout.ancilla.push_back({i + 0.5, 0.0});
            layout.ancilla_role.push_back("chain");
            layout.adjacency.push_back({i, i + 1});
        }
    }
    thirds_regions(n, layout);
    return layout;
}

// One rotated-surface-code stabilizer: type, anchor coordinates, and its
// data qubits keyed by corner tag in the fixed coupling-schedule order.
struct Plaquette {
    char type;        // 'X' or 'Z'
    double cx, cy;    // plaquette center
    std::vector<int> step_qubit;  // data qubit at schedule step, -1 if none
    std::vector<int> data;        // data qubits present
};

// Bulk checkerboard plaquettes plus alternating weight-2 boundary halves:
// X-type on the left/right edges, Z-type on the top/bottom edges. The
// per-stabilizer coupling order ("Z" path for X-type, "N" path for Z-type)
// makes the four coupling layers conflict-free.
std::vector<Plaquette> surface_plaquettes(int nx, int ny) {
    auto idx = [nx](int x, int y) { return y * nx + x; };
    std::vector<Plaquette> out;
    for (int x = -1; x < nx; ++x) {
        for (int y = -1; y < ny; ++y) {
            struct Corner { const char* tag; int dx, dy; };
            const Corner corners[] = {
                {"NW", 0, 1}, {"NE", 1, 1}, {"SW", 0, 0}, {"SE", 1, 0}};
            std::vector<std::pair<std::string, int>> cells;
            for (const auto& c : corners) {
                int cx = x + c.dx, cy = y + c.dy;
                if (cx >= 0 && cx < nx && cy >= 0 && cy < ny)
                    cells.emplace_back(c.tag, idx(cx, cy));
            }
            if (cells.size() < 2) continue;
            char type = ((x + y) % 2 == 0) ? 'Z' : 'X';
            if (cells.size() == 2) {
                bool left_right = (x == -1 || x == nx - 1);
                if (left_right != (type == 'X')) continue;
            }
            Plaquette p;
            p.type = type;
            p.cx = x + 0.5;
            p.cy = y + 0.5;
            const std::vector<std::string> order =
                type == 'X' ? std::vector<std::string>{"NW", "NE", "SW", "SE"}
                            : std::vector<std::string>{"NW", "SW", "NE", "SE"};
            for (const auto& tag : order) {
                int q = -1;
                for (const auto& [t, d] : cells)
                    if (t == tag) q = d;
                p.step_qubit.push_back(q);
                if (q >= 0) p.data.push_back(q);
            }
            out.push_back(std::move(p));
        }
    }
    return out;
}

GateSlot bound(PauliString generator, int slot) {
    GateSlot g;
    g.generator = std::move(generator);
    g.fixed = false;
    g.slot = slot;
    return g;
}

Block feedforward_block(int qubit, int first_slot) {
    Block b;
    b.qubits = {qubit};
    b.gates = {bound(single(qubit, PauliOp::X, 1.0), first_slot),
               bound(single(qubit, PauliOp::Y, 1.0), first_slot + 1),
               bound(single(qubit, PauliOp::Z, 1.0), first_slot + 2)};
    return b;
}

using Features = std::vector<LoccProtocol::Feature>;

Features bias_only(int gamma_index) {
    return {{LoccProtocol::Feature::Kind::Bias, {}, gamma_index}};
}

}  // namespace

Hamiltonian ghz_parent(int n, double h, double lambda, PauliOp perturbation) {
    if (n < 2) throw std::invalid_argument("ghz_parent: n >= 2 required");
    check_lambda(lambda);
    std::vector<PauliString> terms;
    for (int i = 0; i + 1 < n; ++i)
        terms.push_back(PauliString(
            {{i, PauliOp::Z}, {i + 1, PauliOp::Z}}, -(1.0 - lambda)));
    std::map<int, PauliOp> all_x;
    for (int i = 0; i < n; ++i) all_x[i] = PauliOp::X;
    terms.push_back(PauliString(all_x, -(h - lambda)));
    for (int i = 0; i < n; ++i)
        terms.push_back(single(i, perturbation, -lambda));
    return Hamiltonian(std::move(terms), n);
}

Hamiltonian tfim(int n, double lambda) {
    if (n < 2) throw std::invalid_argument("tfim: n >= 2 required");
    std::vector<PauliString> terms;
    for (int i = 0; i + 1 < n; ++i)
        terms.push_back(
            PauliString({{i, PauliOp::Z}, {i + 1, PauliOp::Z}}, -1.0));
    for (int i = 0; i < n; ++i) terms.push_back(single(i, PauliOp::X, -lambda));
    return Hamiltonian(std::move(terms), n);
}

std::pair<Hamiltonian, LatticeLayout> rotated_surface_code(int nx, int ny,
                                                           double lambda) {
    if (nx < 2 || ny < 2)
        throw std::invalid_argument("rotated_surface_code: size >= 2 required");
    check_lambda(lambda);
    int n = nx * ny;
    LatticeLayout layout;
    for (int y = 0; y < ny; ++y)
        for (int x = 0; x < nx; ++x) layout.data.push_back({double(x), double(y)});
    std::vector<PauliString> terms;
    for (const auto& p : surface_plaquettes(nx, ny)) {
        PauliOp op = p.type == 'X' ? PauliOp::X : PauliOp::Z;
        std::map<int, PauliOp> word;
        for (int q : p.data) word[q] = op;
        terms.push_back(PauliString(std::move(word), -(1.0 - lambda)));
        layout.ancilla.push_back({p.cx, p.cy});
        layout.ancilla_role.push_back(std::string(1, p.type));
        layout.adjacency.push_back(p.data);
    }
    for (int i = 0; i < n; ++i) terms.push_back(single(i, PauliOp::Z, -lambda));
    thirds_regions(n, layout);
    return {Hamiltonian(std::move(terms), n), std::move(layout)};
}

std::pair<Hamiltonian, LatticeLayout> toric_code(int nx, int ny, double lambda,
                                                 PauliOp perturbation) {
    if (nx < 2 || ny < 2)
        throw std::invalid_argument("toric_code: size >= 2 required");
    check_lambda(lambda);
    int n = 2 * nx * ny;
    auto hedge = [&](int x, int y) { return ((y + ny) % ny) * nx + (x + nx) % nx; };
    auto vedge = [&](int x, int y) {
        return nx * ny + ((y + ny) % ny) * nx + (x + nx) % nx;
    };
    LatticeLayout layout;
    for (int y = 0; y < ny; ++y)
        for (int x = 0; x < nx; ++x) layout.data.push_back({x + 0.5, double(y)});
    for (int y = 0; y < ny; ++y)
        for (int x = 0; x < nx; ++x) layout.data.push_back({double(x), y + 0.5});
    std::vector<PauliString> terms;
    for (int y = 0; y < ny; ++y) {
        for (int x = 0; x < nx; ++x) {
            // Vertex star: the four edges meeting (x, y), Z-type.
            std::vector<int> star = {hedge(x, y), hedge(x - 1, y), vedge(x, y),
                                     vedge(x, y - 1)};
            std::map<int, PauliOp> word;
            for (int q : star) word[q] = PauliOp::Z;
            terms.push_back(PauliString(std::move(word), -(1.0 - lambda)));
            layout.ancilla.push_back({double(x), double(y)});
            layout.ancilla_role.push_back("Z");
            layout.adjacency.push_back(star);
        }
    }
    for (int y = 0; y < ny; ++y) {
        for (int x = 0; x < nx; ++x) {
            // Plaquette with corner (x, y): its four bounding edges, X-type.
            std::vector<int> plaq = {hedge(x, y), hedge(x, y + 1), vedge(x, y),
                                     vedge(x + 1, y)};
            std::map<int, PauliOp> word;
            for (int q : plaq) word[q] = PauliOp::X;
            terms.push_back(PauliString(std::move(word), -(1.0 - lambda)));
            layout.ancilla.push_back({x + 0.5, y + 0.5});
            layout.ancilla_role.push_back("X");
            layout.adjacency.push_back(plaq);
        }
    }
    for (int i = 0; i < n; ++i)
        terms.push_back(single(i, perturbation, -lambda));
    thirds_regions(n, layout);
    return {Hamiltonian(std::move(terms), n), std::move(layout)};
}

Block cartan_block(int q1, int q2, int first_slot) {
    if (q1 == q2) throw std::invalid_argument("cartan_block: q1 != q2 required");
    Block b;
    b.qubits = {q1, q2};
    int s = first_slot;
    for (int q : {q1, q2})
        for (PauliOp op : {PauliOp::X, PauliOp::Y, PauliOp::Z})
            b.gates.push_back(bound(single(q, op, 1.0), s++));
    for (PauliOp op : {PauliOp::X, PauliOp::Y, PauliOp::Z})
        b.gates.push_back(bound(
            PauliString({{q1, op}, {q2, op}}, 1.0), s++));
    for (int q : {q1, q2})
        for (PauliOp op : {PauliOp::X, PauliOp::Y, PauliOp::Z})
            b.gates.push_back(bound(single(q, op, 1.0), s++));
    return b;
}

namespace {

struct GhzBuild {
    AnsatzBundle bundle;
    int cartan_thetas = 0;   // gamma k == theta k for k < cartan_thetas
    int ff_gamma_base = 0;   // feedforward gammas start here
};

GhzBuild build_ghz(int n) {
    if (n < 2) throw std::invalid_argument("ghz_locc_ansatz: n >= 2 required");
    int m = n - 1;                       // ancillas / outcomes
    auto anc = [n](int i) { return n + i; };
    int slot = 0;
    UnitaryLayer l1, l2;
    for (int i = 0; i < m; ++i) {
        l1.blocks.push_back(cartan_block(i, anc(i), slot));
        slot += 15;
    }
    for (int i = 0; i < m; ++i) {
        l2.blocks.push_back(cartan_block(anc(i), i + 1, slot));
        slot += 15;
    }
    MeasureLayer meas;
    for (int i = 0; i < m; ++i) {
        meas.qubits.push_back(anc(i));
        meas.outcome_slot.push_back(i);
    }
    int cartan_thetas = slot;
    UnitaryLayer ff;
    for (int j = 0; j < n; ++j) {
        ff.blocks.push_back(feedforward_block(j, slot));
        slot += 3;
    }
    LoccCircuit circuit(2 * n - 1, {l1, l2, meas, ff});

    std::vector<Features> per_theta(static_cast<std::size_t>(slot));
    for (int k = 0; k < cartan_thetas; ++k) per_theta[k] = bias_only(k);
    int g = cartan_thetas;
    int ff_gamma_base = g;
    // Correction parities are anchored at the middle data qubit: the chain
    // feeding data qubit j covers the links between j and the pivot, so no
    // theta reads more than ceil((n-1)/2) outcome bits.
    const int pivot = n / 2;
    for (int j = 0; j < n; ++j) {
        std::vector<int> chain;
        for (int b = std::min(j, pivot); b < std::max(j, pivot); ++b)
            chain.push_back(b);
        for (int r = 0; r < 3; ++r) {
            Features f = bias_only(g++);
            if (j != pivot) {
                f.push_back({LoccProtocol::Feature::Kind::Parity, chain, g++});
            }
            per_theta[cartan_thetas + 3 * j + r] = std::move(f);
        }
    }
    GhzBuild out{AnsatzBundle{std::move(circuit),
                              LoccProtocol::affine(g, m, std::move(per_theta)),
                              chain_layout(n, true), g, "ghz", n, 2},
                 cartan_thetas, ff_gamma_base};
    return out;
}

}  // namespace

AnsatzBundle ghz_locc_ansatz(int n) { return build_ghz(n).bundle; }

std::vector<double> ghz_exact_gamma(int n) {
    GhzBuild b = build_ghz(n);
    std::vector<double> gamma(static_cast<std::size_t>(b.bundle.gamma_len), 0.0);
    const double p = kPi / 2.0;
    // Per-block angle tables (slot order of cartan_block). Layer 1 realizes
    // CNOT(data -> anc) after preparing the data qubit in |+>; layer 2
    // realizes CNOT(data -> anc) with the roles swapped on the wires, and the
    // final block also prepares the last data qubit.
    const double layer1[15] = {0, p, p, 0, -p, 3 * p, 0, 0, -p,
                               0, 0, 0, p, -p, p};
    const double layer2[15] = {0, -p, 3 * p, 0, 0, p, 0, 0, -p,
                               p, -p, p, 0, 0, 0};
    const double layer2_last[15] = {0, -p, 3 * p, 0, p, p, 0, 0, -p,
                                    p, -p, p, 0, 0, 0};
    int m = n - 1;
    for (int i = 0; i < m; ++i)
        for (int s = 0; s < 15; ++s) gamma[15 * i + s] = layer1[s];
    for (int i = 0; i < m; ++i) {
        const double* table = (i == m - 1) ? layer2_last : layer2;
        for (int s = 0; s < 15; ++s) gamma[15 * (m + i) + s] = table[s];
    }
    // Feedforward: X^{c_j} on data j where c_j is the outcome parity between
    // j and the pivot, via theta_x = pi/2 - (pi/2)(-1)^{c_j}. The pivot data
    // qubit needs no correction.
    const int pivot = n / 2;
    int g = b.ff_gamma_base;
    for (int j = 0; j < n; ++j) {
        if (j == pivot) {
            g += 3;  // three bias-only rotations
            continue;
        }
        gamma[g] = p;        // Rx bias
        gamma[g + 1] = -p;   // Rx parity weight
        g += 6;              // Rx pair, Ry pair, Rz pair
    }
    return gamma;
}

AnsatzBundle surface_code_locc_ansatz(int nx, int ny) {
    auto [ham, layout] = rotated_surface_code(nx, ny, 0.0);
    (void)ham;
    int n = nx * ny;
    auto plaqs = surface_plaquettes(nx, ny);
    int m = static_cast<int>(plaqs.size());
    int slot = 0;
    std::vector<UnitaryLayer> coupling(4);
    for (int step = 0; step < 4; ++step) {
        for (int a = 0; a < m; ++a) {
            int q = plaqs[static_cast<std::size_t>(a)]
                        .step_qubit[static_cast<std::size_t>(step)];
            if (q < 0) continue;
            coupling[static_cast<std::size_t>(step)].blocks.push_back(
                cartan_block(layout.ancilla_qubit(a), q, slot));
            slot += 15;
        }
    }
    MeasureLayer meas;
    for (int a = 0; a < m; ++a) {
        meas.qubits.push_back(layout.ancilla_qubit(a));
        meas.outcome_slot.push_back(a);
    }
    int cartan_thetas = slot;
    UnitaryLayer ff;
    for (int i = 0; i < n; ++i) {
        ff.blocks.push_back(feedforward_block(i, slot));
        slot += 3;
    }
    LoccCircuit circuit(n + m,
                        {coupling[0], coupling[1], coupling[2], coupling[3],
                         meas, ff});

    // Data qubit -> adjacent ancillas (its stabilizer neighborhood).
    std::vector<std::vector<int>> neighbors(static_cast<std::size_t>(n));
    for (int a = 0; a < m; ++a)
        for (int q : layout.adjacency[static_cast<std::size_t>(a)])
            neighbors[static_cast<std::size_t>(q)].push_back(a);
    std::vector<Features> per_theta(static_cast<std::size_t>(slot));
    for (int k = 0; k < cartan_thetas; ++k) per_theta[k] = bias_only(k);
    int g = cartan_thetas;
    for (int i = 0; i < n; ++i) {
        for (int r = 0; r < 3; ++r) {
            Features f = bias_only(g++);
            for (int a : neighbors[static_cast<std::size_t>(i)])
                f.push_back({LoccProtocol::Feature::Kind::Bit, {a}, g++});
            per_theta[cartan_thetas + 3 * i + r] = std::move(f);
        }
    }
    return AnsatzBundle{std::move(circuit),
                        LoccProtocol::affine(g, m, std::move(per_theta)),
                        std::move(layout), g, "surface", n, 4};
}

AnsatzBundle stabilizer_locc_ansatz(const LatticeLayout& layout,
                                    const std::string& model_name) {
    const int n = layout.data_count();
    const int m = layout.ancilla_count();
    if (m == 0)
        throw std::invalid_argument("stabilizer_locc_ansatz: no ancillas");
    // Greedy edge coloring of the ancilla-data coupling graph: a color is a
    // circuit layer, so edges sharing a qubit land in different layers.
    std::vector<std::vector<std::pair<int, int>>> layers;  // (ancilla, data)
    for (int a = 0; a < m; ++a) {
        for (int q : layout.adjacency[static_cast<std::size_t>(a)]) {
            std::size_t color = 0;
            for (;; ++color) {
                if (color == layers.size()) {
                    layers.emplace_back();
                    break;
                }
                bool clash = false;
                for (const auto& [la, lq] : layers[color])
                    if (la == a || lq == q) clash = true;
                if (!clash) break;
            }
            layers[color].emplace_back(a, q);
        }
    }
    int slot = 0;
    std::vector<Stage> stages;
    for (const auto& layer : layers) {
        UnitaryLayer ul;
        for (const auto& [a, q] : layer) {
            ul.blocks.push_back(cartan_block(layout.ancilla_qubit(a), q, slot));
            slot += 15;
        }
        stages.push_back(std::move(ul));
    }
    MeasureLayer meas;
    for (int a = 0; a < m; ++a) {
        meas.qubits.push_back(layout.ancilla_qubit(a));
        meas.outcome_slot.push_back(a);
    }
    stages.push_back(meas);
    int cartan_thetas = slot;
    UnitaryLayer ff;
    for (int i = 0; i < n; ++i) {
        ff.blocks.push_back(feedforward_block(i, slot));
        slot += 3;
    }
    stages.push_back(ff);
    LoccCircuit circuit(n + m, std::move(stages));

    std::vector<std::vector<int>> neighbors(static_cast<std::size_t>(n));
    for (int a = 0; a < m; ++a)
        for (int q : layout.adjacency[static_cast<std::size_t>(a)])
            neighbors[static_cast<std::size_t>(q)].push_back(a);
    std::vector<Features> per_theta(static_cast<std::size_t>(slot));
    for (int k = 0; k < cartan_thetas; ++k) per_theta[k] = bias_only(k);
    int g = cartan_thetas;
    for (int i = 0; i < n; ++i) {
        for (int r = 0; r < 3; ++r) {
            Features f = bias_only(g++);
            for (int a : neighbors[static_cast<std::size_t>(i)])
                f.push_back({LoccProtocol::Feature::Kind::Bit, {a}, g++});
            per_theta[cartan_thetas + 3 * i + r] = std::move(f);
        }
    }
    int depth = static_cast<int>(layers.size());
    return AnsatzBundle{std::move(circuit),
                        LoccProtocol::affine(g, m, std::move(per_theta)),
                        layout, g, model_name, n, depth};
}

AnsatzBundle brick_wall_ansatz(int n, int d) {
    if (n < 2 || d < 1)
        throw std::invalid_argument("brick_wall_ansatz: n >= 2, d >= 1");
    int slot = 0;
    std::vector<Stage> stages;
    for (int t = 0; t < d; ++t) {
        UnitaryLayer layer;
        for (int q = t % 2; q + 1 < n; q += 2) {
            layer.blocks.push_back(cartan_block(q, q + 1, slot));
            slot += 15;
        }
        stages.push_back(std::move(layer));
    }
    LoccCircuit circuit(n, std::move(stages));
    std::vector<Features> per_theta(static_cast<std::size_t>(slot));
    for (int k = 0; k < slot; ++k) per_theta[k] = bias_only(k);
    return AnsatzBundle{std::move(circuit),
                        LoccProtocol::affine(slot, 0, std::move(per_theta)),
                        chain_layout(n, false), slot, "brick_wall", n, d};
}

}  // namespace loccsim
