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
#include "loccsim/pauli.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace loccsim {

PauliString::PauliString(std::map<int, PauliOp> word, double coefficient)
    : word_(std::move(word)), coeff_(coefficient) {
    if (!std::isfinite(coeff_))
        throw std::invalid_argument("PauliString: non-finite coefficient");
    for (const auto& [q, op] : word_) {
        (void)op;
        if (q < 0) throw std::invalid_argument("PauliString: negative qubit index");
    }
}

std::set<int> PauliString::support() const {
    std::set<int> s;
    for (const auto& [q, op] : word_) {
        (void)op;
        s.insert(q);
    }
    return s;
}

int PauliString::max_qubit() const {
    return word_.empty() ? -1 : word_.rbegin()->first;
}

kernels::PauliMasks PauliString::masks() const {
    kernels::PauliMasks m;
    for (const auto& [q, op] : word_) {
        if (q >= 64) throw std::invalid_argument("PauliString: index >= 64");
        const std::uint64_t bit = std::uint64_t{1} << q;
        switch (op) {
            case PauliOp::X: m.xflip |= bit; break;
            case PauliOp::Y: m.xflip |= bit; m.sign |= bit; ++m.nY; break;
            case PauliOp::Z: m.sign |= bit; break;
        }
    }
    return m;
}

double PauliString::eigenvalue(const std::map<int, int>& bits) const {
    double v = coeff_;
    for (const auto& [q, op] : word_) {
        (void)op;
        auto it = bits.find(q);
        if (it == bits.end())
            throw std::invalid_argument("eigenvalue: missing bit for qubit " +
                                        std::to_string(q));
        if (it->second) v = -v;
    }
    return v;
}

std::string PauliString::to_string() const {
    std::ostringstream os;
    os.precision(17);
    os << coeff_;
    for (const auto& [q, op] : word_) os << ' ' << static_cast<char>(op) << q;
    return os.str();
}

PauliString PauliString::parse(const std::string& line) {
    std::istringstream is(line);
    double coeff;
    if (!(is >> coeff)) throw std::invalid_argument("PauliString: bad coefficient");
    std::map<int, PauliOp> word;
    std::string tok;
    while (is >> tok) {
        if (tok.size() < 2) throw std::invalid_argument("PauliString: bad token " + tok);
        const char c = tok[0];
        if (c != 'X' && c != 'Y' && c != 'Z')
            throw std::invalid_argument("PauliString: bad letter in " + tok);
        const int q = std::stoi(tok.substr(1));
        if (!word.emplace(q, static_cast<PauliOp>(c)).second)
            throw std::invalid_argument("PauliString: duplicate qubit in " + tok);
    }
    return PauliString(std::move(word), coeff);
}

namespace {
bool term_less(const PauliString& a, const PauliString& b) {
    auto ia = a.word().begin(), ib = b.word().begin();
    for (; ia != a.word().end() && ib != b.word().end(); ++ia, ++ib) {
        if (ia->first != ib->first) return ia->first < ib->first;
        if (ia->second != ib->second)
            return static_cast<char>(ia->second) < static_cast<char>(ib->second);
    }
    if (a.word().size() != b.word().size()) return a.word().size() < b.word().size();
    return a.coefficient() < b.coefficient();
}
}  // namespace

Hamiltonian::Hamiltonian(std::vector<PauliString> terms, int qubit_count)
    : terms_(std::move(terms)), n_(qubit_count) {
    if (n_ <= 0) throw std::invalid_argument("Hamiltonian: qubit_count must be positive");
    for (const auto& t : terms_)
        if (t.max_qubit() >= n_)
            throw std::invalid_argument("Hamiltonian: term exceeds qubit_count");
    std::stable_sort(terms_.begin(), terms_.end(), term_less);
}

int Hamiltonian::locality() const {
    if (terms_.empty()) throw std::runtime_error("Hamiltonian: no terms");
    int k = 0;
    for (const auto& t : terms_) k = std::max(k, static_cast<int>(t.word().size()));
    return k;
}

std::string Hamiltonian::serialize() const {
    std::ostringstream os;
    os << "qubits " << n_ << '\n';
    for (const auto& t : terms_) os << t.to_string() << '\n';
    return os.str();
}

Hamiltonian Hamiltonian::parse(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    int n = -1;
    std::vector<PauliString> terms;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line.rfind("qubits ", 0) == 0) {
            n = std::stoi(line.substr(7));
            continue;
        }
        terms.push_back(PauliString::parse(line));
    }
    if (n < 0) throw std::invalid_argument("Hamiltonian: missing qubits header");
    return Hamiltonian(std::move(terms), n);
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t Hamiltonian::hash() const { return fnv1a(serialize()); }

}  // namespace loccsim
