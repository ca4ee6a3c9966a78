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

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "loccsim/circuit.hpp"
#include "loccsim/pauli.hpp"
#include "loccsim/protocol.hpp"

namespace loccsim {

// Geometry of a model instance: data-qubit coordinates, ancilla coordinates
// with their role (which stabilizer or chain link they serve), the
// ancilla -> data adjacency, and the A/B/C data regions used for the
// quantum-mutual-information diagnostic. Qubit numbering convention shared
// with the ansatz constructors: data qubits come first (0 .. n_data-1),
// ancilla a is circuit qubit n_data + a.
struct LatticeLayout {
    struct Site {
        double x = 0.0;
        double y = 0.0;
    };
    std::vector<Site> data;
    std::vector<Site> ancilla;
    std::vector<std::string> ancilla_role;     // "chain", "X", or "Z"
    std::vector<std::vector<int>> adjacency;   // ancilla -> data qubits
    std::set<int> region_a, region_b, region_c;

    int data_count() const { return static_cast<int>(data.size()); }
    int ancilla_count() const { return static_cast<int>(ancilla.size()); }
    int ancilla_qubit(int a) const { return data_count() + a; }
};

// A circuit/protocol pair ready for optimization, with the layout and enough
// metadata to recognize the instance in logs.
struct AnsatzBundle {
    LoccCircuit circuit;
    LoccProtocol protocol;
    LatticeLayout layout;
    int gamma_len = 0;
    std::string model;
    int n = 0;           // data qubits
    int declared_depth = 0;
};

// ---- Hamiltonians ----

// -(1-lambda) sum Z_i Z_{i+1}  -  (h-lambda) X^{(x)n}  -  lambda sum P_i
// on an open chain of n qubits. The weight-n X term gaps the two GHZ states.
Hamiltonian ghz_parent(int n, double h, double lambda, PauliOp perturbation);

// Open-chain transverse-field Ising model -sum Z_i Z_{i+1} - lambda sum X_j.
Hamiltonian tfim(int n, double lambda);

// Rotated surface code on an Nx x Ny data grid with checkerboard X/Z
// stabilizers (bulk weight 4, boundary weight 2) plus a -lambda sum Z_i
// field:  -(1-lambda) sum A_v - (1-lambda) sum B_p - lambda sum Z_i.
// The Hamiltonian acts on the Nx*Ny data qubits only; the layout also
// carries one ancilla per stabilizer for the LOCC ansatz.
std::pair<Hamiltonian, LatticeLayout> rotated_surface_code(int nx, int ny,
                                                           double lambda);

// Toric code on a periodic Nx x Ny lattice (2*Nx*Ny edge qubits): Z-type
// vertex stars A_v and X-type plaquettes B_p, perturbed by -lambda sum P_i:
//   -(1-lambda) sum A_v - (1-lambda) sum B_p - lambda sum P_i.
std::pair<Hamiltonian, LatticeLayout> toric_code(int nx, int ny, double lambda,
                                                 PauliOp perturbation);

// ---- Circuit building blocks ----

// KAK-form two-qubit block: Rx Ry Rz on each qubit, Rxx Ryy Rzz, then
// Rx Ry Rz on each qubit again — 15 slot-bound gates with theta indices
// first_slot .. first_slot+14 in that order.
Block cartan_block(int q1, int q2, int first_slot = 0);

// ---- Ansatze ----

// Depth-2 LOCC ansatz for the n-qubit GHZ/TFIM chain: n-1 ancillas, one
// between each adjacent data pair. Layer 1 couples (data_i, anc_i), layer 2
// couples (anc_i, data_{i+1}) with Cartan blocks; all ancillas are measured;
// a final single-qubit Rx Ry Rz layer on the data qubits is fed forward
// through an affine protocol with cumulative-parity features.
AnsatzBundle ghz_locc_ansatz(int n);

// Gamma vector under which ghz_locc_ansatz(n) prepares the exact GHZ state
// (|0..0> + |1..1>)/sqrt(2) on every measurement branch.
std::vector<double> ghz_exact_gamma(int n);

// Depth-4 LOCC ansatz for the rotated surface code: each stabilizer ancilla
// is coupled to its data qubits by Cartan blocks over four conflict-free
// layers, all ancillas are measured, and a feedforward Rx Ry Rz layer acts
// on the data qubits with per-stabilizer-neighborhood features.
AnsatzBundle surface_code_locc_ansatz(int nx, int ny);

// LOCC ansatz for an arbitrary stabilizer layout (used for the toric code):
// each ancilla is coupled to its adjacent data qubits by Cartan blocks,
// scheduled into conflict-free layers by greedy edge coloring, then measured
// and fed into a per-neighborhood feedforward layer on the data qubits.
AnsatzBundle stabilizer_locc_ansatz(const LatticeLayout& layout,
                                    const std::string& model_name);

// Measurement-free brick-wall baseline: d alternating-offset layers of
// Cartan blocks on n qubits. The protocol is a pure bias net, so gamma and
// theta coincide.
AnsatzBundle brick_wall_ansatz(int n, int d);

}  // namespace loccsim
