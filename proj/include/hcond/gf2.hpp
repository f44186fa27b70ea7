#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hcond/cnf.hpp"

namespace hcond {

/// Affine system over GF(2) in variables 1..num_vars. Equations are kept in
/// reduced echelon form as they are added, so feasibility is known at all times.
class ParitySystem {
public:
    explicit ParitySystem(Var num_vars) : n_(num_vars), words_((num_vars + 64) / 64) {}

    /// Adds XOR_{v in vars} v = parity. Repeated variables cancel.
    void add_equation(const std::vector<Var>& vars, bool parity) {
        Row row{std::vector<std::uint64_t>(words_, 0), parity};
        for (Var v : vars) {
            if (v < 1 || v > n_) throw Error(Errc::PreconditionViolated, "parity variable out of range");
            row.bits[v / 64] ^= std::uint64_t{1} << (v % 64);
        }
        insert(std::move(row));
    }

    void add_unit(Var v, bool value) { add_equation({v}, value); }

    bool consistent() const { return consistent_; }

    /// A solution with free variables set to false, or nullopt if infeasible.
    std::optional<std::vector<bool>> solve() const {
        if (!consistent_) return std::nullopt;
        std::vector<bool> x(n_ + 1, false);
        // Rows are fully reduced against each other's pivots, so with free
        // variables at 0 each pivot equals its row's constant.
        for (const auto& row : rows_) x[row.pivot] = row.parity;
        return x;
    }

private:
    struct Row {
        std::vector<std::uint64_t> bits;
        bool parity = false;
        Var pivot = 0;
    };

    bool test(const Row& r, Var v) const { return (r.bits[v / 64] >> (v % 64)) & 1; }

    void xor_into(Row& dst, const Row& src) const {
        for (std::size_t w = 0; w < words_; ++w) dst.bits[w] ^= src.bits[w];
        dst.parity ^= src.parity;
    }

    void insert(Row row) {
        if (!consistent_) return;
        for (const auto& r : rows_)
            if (test(row, r.pivot)) xor_into(row, r);
        Var pivot = 0;
        for (Var v = 1; v <= n_ && !pivot; ++v)
            if (test(row, v)) pivot = v;
        if (!pivot) {
            if (row.parity) consistent_ = false;
            return;
        }
        row.pivot = pivot;
        for (auto& r : rows_)
            if (test(r, pivot)) xor_into(r, row);
        rows_.push_back(std::move(row));
    }

    Var n_;
    std::size_t words_;
    std::vector<Row> rows_;
    bool consistent_ = true;
};

} // namespace hcond
