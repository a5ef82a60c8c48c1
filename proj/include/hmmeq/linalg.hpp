#pragma once

#include <hmmeq/rational.hpp>

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace hmmeq {

using RMatrix = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;
using RVector = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;
using RRowVector = Eigen::Matrix<Rational, 1, Eigen::Dynamic>;

/// A word over generator indices; records how a span vector was produced.
using Word = std::vector<std::size_t>;

struct RrefResult {
    RMatrix reduced;
    Eigen::Index rank = 0;
    std::vector<Eigen::Index> pivot_cols;
};

/// Exact reduced row-echelon form (Gauss-Jordan, first-nonzero pivoting).
inline RrefResult rref(RMatrix m) {
    const Eigen::Index rows = m.rows(), cols = m.cols();
    RrefResult out;
    Eigen::Index lead = 0;
    for (Eigen::Index col = 0; col < cols && lead < rows; ++col) {
        Eigen::Index pivot = -1;
        for (Eigen::Index r = lead; r < rows; ++r) {
            if (!m(r, col).is_zero()) { pivot = r; break; }
        }
        if (pivot < 0) continue;
        m.row(lead).swap(m.row(pivot));
        const Rational inv = Rational(1) / m(lead, col);
        m.row(lead) *= inv;
        for (Eigen::Index r = 0; r < rows; ++r) {
            if (r == lead || m(r, col).is_zero()) continue;
            m.row(r) -= m(r, col) * m.row(lead);
        }
        out.pivot_cols.push_back(col);
        ++lead;
    }
    out.rank = lead;
    out.reduced = std::move(m);
    return out;
}

inline Eigen::Index rank_of(const RMatrix& m) { return rref(m).rank; }

/// Incrementally maintained row space in reduced echelon form; supports exact
/// span-membership queries and insertions in O(rank * dim) each.
class SpanTracker {
public:
    explicit SpanTracker(Eigen::Index dim) : dim_(dim) {}

    Eigen::Index dim() const { return dim_; }
    Eigen::Index rank() const { return static_cast<Eigen::Index>(rows_.size()); }
    bool full() const { return rank() == dim_; }

    bool contains(const RVector& v) const {
        RVector r = reduce(v);
        for (Eigen::Index i = 0; i < dim_; ++i)
            if (!r(i).is_zero()) return false;
        return true;
    }

    /// Reduces v against the tracked rows; if a nonzero remainder is left the
    /// span grows and the call returns true.
    bool insert(const RVector& v) {
        RVector r = reduce(v);
        Eigen::Index lead = -1;
        for (Eigen::Index i = 0; i < dim_; ++i) {
            if (!r(i).is_zero()) { lead = i; break; }
        }
        if (lead < 0) return false;
        r *= Rational(1) / r(lead);
        for (auto& [pivot, row] : rows_) {
            if (!row(lead).is_zero()) row -= row(lead) * r;
        }
        rows_.emplace_back(lead, std::move(r));
        return true;
    }

private:
    RVector reduce(RVector v) const {
        for (const auto& [pivot, row] : rows_) {
            if (!v(pivot).is_zero()) v -= v(pivot) * row;
        }
        return v;
    }

    Eigen::Index dim_;
    std::vector<std::pair<Eigen::Index, RVector>> rows_;
};

/// Exact coefficients c with v = sum c_i * basis_i, or nullopt if v lies
/// outside the span. The basis must be linearly independent.
inline std::optional<std::vector<Rational>> coordinates_in_span(const RVector& v,
                                                                const std::vector<RVector>& basis) {
    const Eigen::Index dim = v.size();
    const Eigen::Index k = static_cast<Eigen::Index>(basis.size());
    RMatrix aug(dim, k + 1);
    for (Eigen::Index j = 0; j < k; ++j) {
        if (basis[j].size() != dim) throw std::invalid_argument("coordinates_in_span: dimension mismatch");
        aug.col(j) = basis[j];
    }
    aug.col(k) = v;

    RrefResult r = rref(std::move(aug));
    Eigen::Index basis_rank = 0;
    bool pivot_in_v = false;
    for (Eigen::Index c : r.pivot_cols) {
        if (c < k) ++basis_rank; else pivot_in_v = true;
    }
    if (basis_rank < k)
        throw std::invalid_argument("coordinates_in_span: basis vectors are linearly dependent");
    // v is in the span iff no pivot falls in the last column.
    if (pivot_in_v) return std::nullopt;

    std::vector<Rational> coeffs(static_cast<std::size_t>(k), Rational(0));
    for (Eigen::Index row = 0; row < r.rank; ++row) {
        coeffs[static_cast<std::size_t>(r.pivot_cols[static_cast<std::size_t>(row)])] = r.reduced(row, k);
    }
    return coeffs;
}

/// Basis of span {G(w) * seed | w a word over the generators}, together with
/// the word that produced each basis vector. Exploration is breadth-first in
/// word length (letters prepend, lexicographic within a layer), so recorded
/// words are shortest and deterministic.
struct SpanBasis {
    Eigen::Index dimension = 0;
    std::vector<RVector> vectors;
    std::vector<Word> witness_words;

    Eigen::Index size() const { return static_cast<Eigen::Index>(vectors.size()); }
};

inline SpanBasis span_closure(const RVector& seed, const std::vector<RMatrix>& generators) {
    const Eigen::Index dim = seed.size();
    for (const RMatrix& g : generators) {
        if (g.rows() != dim || g.cols() != dim)
            throw std::invalid_argument("span_closure: generator dimension mismatch");
    }

    SpanBasis basis;
    basis.dimension = dim;
    SpanTracker tracker(dim);
    if (!tracker.insert(seed)) return basis;  // zero seed spans nothing

    basis.vectors.push_back(seed);
    basis.witness_words.emplace_back();

    std::vector<std::size_t> frontier{0};
    while (!frontier.empty() && !tracker.full()) {
        std::vector<std::size_t> next;
        for (std::size_t g = 0; g < generators.size() && !tracker.full(); ++g) {
            for (std::size_t idx : frontier) {
                RVector cand = generators[g] * basis.vectors[idx];
                if (!tracker.insert(cand)) continue;
                Word w;
                w.reserve(basis.witness_words[idx].size() + 1);
                w.push_back(g);
                w.insert(w.end(), basis.witness_words[idx].begin(), basis.witness_words[idx].end());
                basis.vectors.push_back(std::move(cand));
                basis.witness_words.push_back(std::move(w));
                next.push_back(basis.vectors.size() - 1);
                if (tracker.full()) break;
            }
        }
        frontier = std::move(next);
    }
    return basis;
}

}  // namespace hmmeq
