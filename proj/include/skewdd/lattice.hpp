#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "skewdd/integer.hpp"

namespace skewdd {

using IntVector = std::vector<Int>;

/// The Z-span of a list of integer column vectors, brought to echelon form by
/// unimodular column operations whose transform is tracked.
///
/// Rows are eliminated in index order, so the columns surviving the first r rows
/// span exactly the sublattice vanishing on those rows. `solve` returns the
/// canonical (echelon-derived) integer combination of the input columns.
class IntegerLattice {
public:
    IntegerLattice(std::size_t dim, const std::vector<IntVector>& columns) : dim_(dim), pivots_(dim) {
        std::vector<Column> active;
        active.reserve(columns.size());
        for (std::size_t j = 0; j < columns.size(); ++j) {
            Column c{columns[j], IntVector(columns.size(), 0)};
            c.v.resize(dim, 0);
            c.t[j] = 1;
            active.push_back(std::move(c));
        }
        ncols_ = columns.size();
        for (std::size_t r = 0; r < dim; ++r) {
            std::optional<Column> pivot;
            std::vector<Column> rest;
            rest.reserve(active.size());
            for (auto& col : active) {
                if (col.v[r] == 0) {
                    rest.push_back(std::move(col));
                } else if (!pivot) {
                    pivot = std::move(col);
                } else {
                    auto [g, u, w] = ext_gcd(pivot->v[r], col.v[r]);
                    Int cp = exact_div(col.v[r], g);
                    Int pp = exact_div(pivot->v[r], g);
                    Column np = combine(*pivot, u, col, w);
                    Column nc = combine(*pivot, cp, col, Int(-pp));
                    pivot = std::move(np);
                    rest.push_back(std::move(nc));
                }
            }
            if (pivot) {
                if (pivot->v[r] < 0) negate(*pivot);
                pivots_[r] = std::move(pivot);
            }
            active = std::move(rest);
        }
        kernel_ = std::move(active);
    }

    std::size_t dim() const { return dim_; }

    std::size_t rank() const {
        std::size_t k = 0;
        for (const auto& p : pivots_) k += p.has_value();
        return k;
    }

    /// Echelon column whose first nonzero entry sits in `row`, if any.
    const IntVector* pivot(std::size_t row) const { return pivots_[row] ? &pivots_[row]->v : nullptr; }

    bool contains(const IntVector& target) const { return solve(target).has_value(); }

    std::optional<IntVector> solve(const IntVector& target) const {
        IntVector residual = target;
        residual.resize(dim_, 0);
        IntVector coeffs(ncols_, 0);
        for (std::size_t r = 0; r < dim_; ++r) {
            if (residual[r] == 0) continue;
            if (!pivots_[r] || !divides(pivots_[r]->v[r], residual[r])) return std::nullopt;
            Int k = exact_div(residual[r], pivots_[r]->v[r]);
            for (std::size_t i = r; i < dim_; ++i) residual[i] -= k * pivots_[r]->v[i];
            for (std::size_t j = 0; j < ncols_; ++j) coeffs[j] += k * pivots_[r]->t[j];
        }
        return coeffs;
    }

    /// Like solve, but the answer is shortened against the relation lattice
    /// (greedy size reduction, deterministic).
    std::optional<IntVector> solve_short(const IntVector& target) const {
        auto sol = solve(target);
        if (!sol) return sol;
        std::vector<IntVector> rel = relations();
        for (int pass = 0; pass < 4; ++pass)
            for (std::size_t i = 0; i < rel.size(); ++i)
                for (std::size_t j = 0; j < rel.size(); ++j)
                    if (i != j) reduce_against(rel[i], rel[j]);
        for (int pass = 0; pass < 8; ++pass) {
            bool changed = false;
            for (const auto& k : rel) changed |= reduce_against(*sol, k);
            if (!changed) break;
        }
        return sol;
    }

    /// Z-basis of the integer relations among the input columns.
    std::vector<IntVector> relations() const {
        std::vector<IntVector> out;
        out.reserve(kernel_.size());
        for (const auto& c : kernel_) out.push_back(c.t);
        return out;
    }

private:
    struct Column {
        IntVector v;
        IntVector t;
    };

    static Column combine(const Column& x, const Int& cx, const Column& y, const Int& cy) {
        Column out{IntVector(x.v.size()), IntVector(x.t.size())};
        for (std::size_t i = 0; i < x.v.size(); ++i) out.v[i] = cx * x.v[i] + cy * y.v[i];
        for (std::size_t i = 0; i < x.t.size(); ++i) out.t[i] = cx * x.t[i] + cy * y.t[i];
        return out;
    }

    /// v -= round(<v,k>/<k,k>) k; true if v changed.
    static bool reduce_against(IntVector& v, const IntVector& k) {
        Int num = 0, den = 0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            num += v[i] * k[i];
            den += k[i] * k[i];
        }
        if (den == 0) return false;
        Int q = floor_div(2 * num + den, 2 * den);
        if (q == 0) return false;
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= q * k[i];
        return true;
    }

    static void negate(Column& c) {
        for (auto& e : c.v) e = -e;
        for (auto& e : c.t) e = -e;
    }

    std::size_t dim_;
    std::size_t ncols_ = 0;
    std::vector<std::optional<Column>> pivots_;
    std::vector<Column> kernel_;
};

}  // namespace skewdd
