// Copyright 2026 The hea-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Pauli-string observables, their text grammar, support clustering and the
 * Hilbert-Schmidt deviation measure used by variance lower bounds.
 *
 * Grammar (whitespace-insensitive):
 *
 *     observable := term ("+" term)*
 *     term       := float ("*" pauli)+ | float
 *     pauli      := [XYZ][0-9]+
 *
 * A bare float is a multiple of the identity.
 */

#pragma once

#include "hea_lab/core.hpp"

#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hea_lab {

/// A tensor product of single-qubit Paulis, stored as X and Z bit masks.
///
/// Letter at qubit q: I if neither bit is set, X if only x, Z if only z and
/// Y if both. With Y = iXZ the action on a basis state is
/// P|b> = i^{#Y} (-1)^{popcount(b & z)} |b ^ x>.
class PauliString {
  public:
    PauliString() = default;
    PauliString(int num_qubits, std::uint64_t x_mask, std::uint64_t z_mask)
        : num_qubits_(num_qubits), x_(x_mask), z_(z_mask) {
        if (num_qubits < 0 || num_qubits > 63) {
            throw std::invalid_argument("PauliString: unsupported qubit count");
        }
        const std::uint64_t limit =
            num_qubits == 0 ? 0 : (~std::uint64_t{0} >> (64 - num_qubits));
        if ((x_mask | z_mask) & ~limit) {
            throw std::out_of_range("PauliString: letter outside register");
        }
    }

    static PauliString identity(int num_qubits) { return {num_qubits, 0, 0}; }

    /// Parses a length-n word over {I,X,Y,Z}; character i is qubit i.
    static PauliString from_letters(std::string_view letters) {
        std::uint64_t x = 0;
        std::uint64_t z = 0;
        for (std::size_t q = 0; q < letters.size(); ++q) {
            const std::uint64_t bit = std::uint64_t{1} << q;
            switch (letters[q]) {
            case 'I': break;
            case 'X': x |= bit; break;
            case 'Y': x |= bit; z |= bit; break;
            case 'Z': z |= bit; break;
            default:
                throw std::invalid_argument("PauliString: bad letter '" +
                                            std::string(1, letters[q]) + "'");
            }
        }
        return {static_cast<int>(letters.size()), x, z};
    }

    /// Single-letter string `letter` on qubit q of an n-qubit register.
    static PauliString single(int num_qubits, char letter, int q) {
        std::string word(static_cast<std::size_t>(num_qubits), 'I');
        if (q < 0 || q >= num_qubits) {
            throw std::out_of_range("PauliString::single: qubit out of range");
        }
        word[static_cast<std::size_t>(q)] = letter;
        return from_letters(word);
    }

    [[nodiscard]] int num_qubits() const { return num_qubits_; }
    [[nodiscard]] std::uint64_t x_mask() const { return x_; }
    [[nodiscard]] std::uint64_t z_mask() const { return z_; }
    [[nodiscard]] std::uint64_t support_mask() const { return x_ | z_; }
    [[nodiscard]] bool is_identity() const { return (x_ | z_) == 0; }
    [[nodiscard]] QubitSet support() const { return QubitSet::from_mask(x_ | z_); }
    [[nodiscard]] int weight() const { return std::popcount(x_ | z_); }
    [[nodiscard]] int num_y() const { return std::popcount(x_ & z_); }

    [[nodiscard]] char letter(int q) const {
        const bool xb = (x_ >> q) & 1U;
        const bool zb = (z_ >> q) & 1U;
        if (xb && zb) return 'Y';
        if (xb) return 'X';
        if (zb) return 'Z';
        return 'I';
    }

    [[nodiscard]] std::string letters() const {
        std::string out;
        for (int q = 0; q < num_qubits_; ++q) {
            out.push_back(letter(q));
        }
        return out;
    }

    /// Compact form, e.g. "Z0*X3"; "I" for the identity.
    [[nodiscard]] std::string str() const {
        if (is_identity()) {
            return "I";
        }
        std::string out;
        for (int q = 0; q < num_qubits_; ++q) {
            const char c = letter(q);
            if (c != 'I') {
                if (!out.empty()) out += '*';
                out += c;
                out += std::to_string(q);
            }
        }
        return out;
    }

    friend bool operator==(const PauliString &, const PauliString &) = default;

  private:
    int num_qubits_ = 0;
    std::uint64_t x_ = 0;
    std::uint64_t z_ = 0;
};

struct PauliTerm {
    double coefficient = 0.0;
    PauliString string;
};

/// Real linear combination of Pauli strings with duplicates merged.
class Observable {
  public:
    Observable() = default;
    explicit Observable(int num_qubits) : num_qubits_(num_qubits) {}

    /// Adds `coefficient * string`, merging with an existing equal string.
    /// Terms that merge to exactly zero are dropped.
    void add(double coefficient, const PauliString &string) {
        if (string.num_qubits() != num_qubits_) {
            throw std::invalid_argument("Observable::add: qubit count mismatch");
        }
        for (auto it = terms_.begin(); it != terms_.end(); ++it) {
            if (it->string == string) {
                it->coefficient += coefficient;
                if (it->coefficient == 0.0) {
                    terms_.erase(it);
                }
                return;
            }
        }
        if (coefficient != 0.0) {
            terms_.push_back({coefficient, string});
        }
    }

    [[nodiscard]] int num_qubits() const { return num_qubits_; }
    [[nodiscard]] const std::vector<PauliTerm> &terms() const { return terms_; }
    [[nodiscard]] bool empty() const { return terms_.empty(); }

    [[nodiscard]] bool is_traceless() const {
        for (const auto &t : terms_) {
            if (t.string.is_identity()) return false;
        }
        return true;
    }

    /// Union of the supports of all terms.
    [[nodiscard]] QubitSet support() const {
        std::uint64_t m = 0;
        for (const auto &t : terms_) m |= t.string.support_mask();
        return QubitSet::from_mask(m);
    }

    [[nodiscard]] Observable scaled(double factor) const {
        Observable out(num_qubits_);
        for (const auto &t : terms_) out.add(factor * t.coefficient, t.string);
        return out;
    }

    [[nodiscard]] std::string str() const {
        std::ostringstream os;
        os.precision(17);
        for (std::size_t i = 0; i < terms_.size(); ++i) {
            if (i) os << " + ";
            os << terms_[i].coefficient;
            if (!terms_[i].string.is_identity()) {
                os << '*' << terms_[i].string.str();
            }
        }
        return os.str();
    }

  private:
    int num_qubits_ = 0;
    std::vector<PauliTerm> terms_;
};

/// Sum of Z_q over every qubit.
inline Observable total_z(int num_qubits) {
    Observable o(num_qubits);
    for (int q = 0; q < num_qubits; ++q) o.add(1.0, PauliString::single(num_qubits, 'Z', q));
    return o;
}

// ---------------------------------------------------------------------------
// Parsing

class ParseError : public std::invalid_argument {
  public:
    ParseError(const std::string &what, std::size_t position)
        : std::invalid_argument(what + " at position " + std::to_string(position)),
          position_(position) {}
    [[nodiscard]] std::size_t position() const { return position_; }

  private:
    std::size_t position_;
};

namespace detail {

class ObservableParser {
  public:
    ObservableParser(std::string_view text, int num_qubits)
        : text_(text), n_(num_qubits) {}

    Observable parse() {
        Observable obs(n_);
        skip_ws();
        if (pos_ == text_.size()) {
            throw ParseError("empty observable", pos_);
        }
        parse_term(obs);
        skip_ws();
        while (pos_ < text_.size()) {
            if (text_[pos_] != '+') {
                throw ParseError(std::string("expected '+' but found '") +
                                     text_[pos_] + "'",
                                 pos_);
            }
            ++pos_;
            skip_ws();
            parse_term(obs);
            skip_ws();
        }
        return obs;
    }

  private:
    void skip_ws() {
        while (pos_ < text_.size() &&
               std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    double parse_float() {
        const std::size_t start = pos_;
        std::size_t p = pos_;
        if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
        bool digits = false;
        while (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
            ++p;
            digits = true;
        }
        if (p < text_.size() && text_[p] == '.') {
            ++p;
            while (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
                ++p;
                digits = true;
            }
        }
        if (!digits) {
            throw ParseError("expected a coefficient", start);
        }
        if (p < text_.size() && (text_[p] == 'e' || text_[p] == 'E')) {
            std::size_t q = p + 1;
            if (q < text_.size() && (text_[q] == '+' || text_[q] == '-')) ++q;
            const std::size_t exp_start = q;
            while (q < text_.size() && std::isdigit(static_cast<unsigned char>(text_[q]))) ++q;
            if (q == exp_start) {
                throw ParseError("malformed exponent", p);
            }
            p = q;
        }
        pos_ = p;
        return std::strtod(std::string(text_.substr(start, p - start)).c_str(), nullptr);
    }

    void parse_term(Observable &obs) {
        const double coefficient = parse_float();
        std::uint64_t x = 0;
        std::uint64_t z = 0;
        skip_ws();
        while (pos_ < text_.size() && text_[pos_] == '*') {
            ++pos_;
            skip_ws();
            const std::size_t letter_pos = pos_;
            if (pos_ >= text_.size()) {
                throw ParseError("expected a Pauli factor", pos_);
            }
            const char letter = text_[pos_];
            if (letter != 'X' && letter != 'Y' && letter != 'Z') {
                throw ParseError(std::string("expected X, Y or Z but found '") +
                                     letter + "'",
                                 pos_);
            }
            ++pos_;
            const std::size_t digits_start = pos_;
            while (pos_ < text_.size() &&
                   std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
            }
            if (pos_ == digits_start) {
                throw ParseError("expected a qubit index", pos_);
            }
            const long index = std::strtol(
                std::string(text_.substr(digits_start, pos_ - digits_start)).c_str(),
                nullptr, 10);
            if (index >= n_ || pos_ - digits_start > 6) {
                throw ParseError("qubit index " +
                                     std::string(text_.substr(digits_start, pos_ - digits_start)) +
                                     " out of range for " + std::to_string(n_) + " qubits",
                                 digits_start);
            }
            const std::uint64_t bit = std::uint64_t{1} << index;
            if ((x | z) & bit) {
                throw ParseError("qubit " + std::to_string(index) +
                                     " repeated within one term",
                                 letter_pos);
            }
            if (letter != 'Z') x |= bit;
            if (letter != 'X') z |= bit;
            skip_ws();
        }
        obs.add(coefficient, PauliString(n_, x, z));
    }

    std::string_view text_;
    int n_;
    std::size_t pos_ = 0;
};

} // namespace detail

/// Parses an observable such as "1.0*Z0*Z1 + -0.5*X3" on `num_qubits` qubits.
inline Observable parse_observable(std::string_view text, int num_qubits) {
    if (num_qubits <= 0 || num_qubits > 63) {
        throw std::invalid_argument("parse_observable: unsupported qubit count");
    }
    return detail::ObservableParser(text, num_qubits).parse();
}

// ---------------------------------------------------------------------------
// Support clustering

struct ClusterSet {
    std::vector<QubitSet> clusters;
    int threshold = 0;
};

enum class GapRule {
    inclusive, ///< join while gap <= threshold
    strict,    ///< join while gap < threshold
};

/// Greedy left-to-right partition of a support: qubit q_{k+1} joins the
/// current cluster iff q_{k+1} - q_k <= threshold (or < for GapRule::strict).
inline ClusterSet clusterize(const QubitSet &support, int threshold,
                             GapRule rule = GapRule::inclusive) {
    if (threshold < 0) {
        throw std::invalid_argument("clusterize: threshold must be non-negative");
    }
    ClusterSet out;
    out.threshold = threshold;
    std::vector<int> current;
    for (int q : support) {
        if (!current.empty()) {
            const int gap = q - current.back();
            const bool joins = rule == GapRule::inclusive ? gap <= threshold : gap < threshold;
            if (!joins) {
                out.clusters.emplace_back(std::move(current));
                current.clear();
            }
        }
        current.push_back(q);
    }
    if (!current.empty()) {
        out.clusters.emplace_back(std::move(current));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Scalar summaries

/// Tr[O] / 2^n: the coefficient of the identity term.
inline double trivial_value(const Observable &obs) {
    for (const auto &t : obs.terms()) {
        if (t.string.is_identity()) return t.coefficient;
    }
    return 0.0;
}

inline double coefficient_l1(const Observable &obs) {
    double s = 0.0;
    for (const auto &t : obs.terms()) s += std::abs(t.coefficient);
    return s;
}

/// Squared Hilbert-Schmidt deviation Tr[(M - Tr[M] I/d)^2]. Equals 4 for a
/// two-qubit Pauli product and 1 - 1/d for a pure state on d dimensions.
inline double eta(const CMatrix &m) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw std::invalid_argument("eta: matrix must be square and non-empty");
    }
    if (hermitian_deviation(m) > 1e-8) {
        throw std::invalid_argument("eta: matrix is not Hermitian");
    }
    const auto d = static_cast<double>(m.rows());
    const CMatrix dev = m - (m.trace() / d) * CMatrix::Identity(m.rows(), m.cols());
    return (dev * dev).trace().real();
}

/// Non-squared Hilbert-Schmidt distance ||M - Tr[M] I/d||_2.
inline double eta_norm(const CMatrix &m) { return std::sqrt(std::max(0.0, eta(m))); }

// ---------------------------------------------------------------------------
// Dense forms (small registers only)

/// Matrix of a Pauli string on its own register, little-endian.
inline CMatrix to_dense(const PauliString &p) {
    const std::size_t dim = std::size_t{1} << p.num_qubits();
    CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    static const Complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const Complex phase = kIPow[p.num_y() % 4];
    for (std::size_t b = 0; b < dim; ++b) {
        const double sign = (std::popcount(b & p.z_mask()) & 1) ? -1.0 : 1.0;
        m(static_cast<Eigen::Index>(b ^ p.x_mask()), static_cast<Eigen::Index>(b)) = phase * sign;
    }
    return m;
}

inline CMatrix to_dense(const Observable &obs) {
    if (obs.num_qubits() > kMaxDenseQubits) {
        throw std::invalid_argument("to_dense: register too large for a dense matrix");
    }
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << obs.num_qubits());
    CMatrix m = CMatrix::Zero(dim, dim);
    static const Complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    for (const auto &t : obs.terms()) {
        const Complex phase = kIPow[t.string.num_y() % 4] * t.coefficient;
        for (std::size_t b = 0; b < static_cast<std::size_t>(dim); ++b) {
            const double sign = (std::popcount(b & t.string.z_mask()) & 1) ? -1.0 : 1.0;
            m(static_cast<Eigen::Index>(b ^ t.string.x_mask()), static_cast<Eigen::Index>(b)) +=
                phase * sign;
        }
    }
    return m;
}

/// Restriction of `obs` to the qubits in `support`, which must cover every
/// term. Qubit support[j] becomes local qubit j.
inline CMatrix restrict_to(const Observable &obs, const QubitSet &support) {
    if (!obs.support().is_subset_of(support)) {
        throw std::invalid_argument("restrict_to: observable acts outside the given support");
    }
    const int k = static_cast<int>(support.size());
    Observable local(k);
    for (const auto &t : obs.terms()) {
        std::uint64_t x = 0;
        std::uint64_t z = 0;
        for (int j = 0; j < k; ++j) {
            const int q = support[static_cast<std::size_t>(j)];
            if ((t.string.x_mask() >> q) & 1U) x |= std::uint64_t{1} << j;
            if ((t.string.z_mask() >> q) & 1U) z |= std::uint64_t{1} << j;
        }
        local.add(t.coefficient, PauliString(k, x, z));
    }
    return to_dense(local);
}

} // namespace hea_lab
