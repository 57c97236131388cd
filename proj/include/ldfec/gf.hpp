#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace ldfec::gf {

using Symbol = std::uint16_t;

// Field GF(2^m) with a fixed reduction polynomial (bit i = coefficient of x^i).
struct FieldSpec {
    unsigned m = 8;
    std::uint32_t poly = 0x11D;

    std::uint32_t order() const { return 1u << m; }

    // Canonical irreducible (and, for m >= 2, primitive) polynomial for 1 <= m <= 16.
    static FieldSpec canonical(unsigned m);
};

class Field {
public:
    explicit Field(FieldSpec spec);

    // Shared immutable instance for the canonical polynomial of width m.
    static const Field& get(unsigned m);

    const FieldSpec& spec() const { return spec_; }
    unsigned bits() const { return spec_.m; }
    std::uint32_t order() const { return spec_.order(); }

    static Symbol add(Symbol a, Symbol b) { return static_cast<Symbol>(a ^ b); }
    static Symbol sub(Symbol a, Symbol b) { return static_cast<Symbol>(a ^ b); }

    Symbol mul(Symbol a, Symbol b) const {
        if (!table_.empty()) {
            return table_[(static_cast<std::size_t>(a) << spec_.m) | b];
        }
        if (a == 0 || b == 0) {
            return 0;
        }
        return exp_[log_[a] + log_[b]];
    }

    // Throws std::domain_error for a == 0.
    Symbol inv(Symbol a) const;
    Symbol div(Symbol a, Symbol b) const { return mul(a, inv(b)); }

    // y[i] += a * x[i]
    void axpy(std::span<Symbol> y, Symbol a, std::span<const Symbol> x) const;
    // y[i] *= a
    void scale(std::span<Symbol> y, Symbol a) const;

private:
    FieldSpec spec_;
    std::vector<Symbol> table_;   // full product table, m <= 8
    std::vector<Symbol> inverse_;
    std::vector<std::uint32_t> log_;
    std::vector<Symbol> exp_;     // doubled so log sums need no reduction
};

// Carry-less product reduced modulo the polynomial, bit by bit. Slow reference path.
Symbol poly_mul_mod(Symbol a, Symbol b, const FieldSpec& spec);

struct OpCounter {
    std::uint64_t coefficient_ops = 0;  // additions and multiplications on matrix entries
    std::uint64_t payload_ops = 0;      // additions and multiplications on right-hand-side symbols

    std::uint64_t total() const { return coefficient_ops + payload_ops; }
    OpCounter& operator+=(const OpCounter& o) {
        coefficient_ops += o.coefficient_ops;
        payload_ops += o.payload_ops;
        return *this;
    }
};

class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

    static Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Symbol& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    Symbol at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    std::span<Symbol> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const Symbol> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Symbol> data_;
};

Matrix multiply(const Field& f, const Matrix& a, const Matrix& b);

struct SolveResult {
    std::size_t rank = 0;
    std::vector<std::size_t> free_columns;  // columns without a pivot
    bool consistent = true;                 // rhs lies in the column space
    std::optional<Matrix> solution;         // present iff full column rank and consistent
    OpCounter ops;

    bool full_rank() const { return free_columns.empty(); }
};

// Solves A X = B for a square or tall A. Rank-deficient systems produce a report, not an error.
SolveResult solve(const Field& f, Matrix a, Matrix rhs);

std::size_t rank(const Field& f, Matrix a);

// Rank of a GF(2) matrix whose rows are bit masks (at most 64 columns).
std::size_t rank_gf2(std::vector<std::uint64_t> rows);

}  // namespace ldfec::gf
