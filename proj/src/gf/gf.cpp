#include "ldfec/gf.hpp"

#include <algorithm>
#include <array>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>

namespace ldfec::gf {

namespace {

constexpr std::array<std::uint32_t, 17> kCanonical = {
    0,       0x3,    0x7,    0xB,    0x13,   0x25,   0x43,   0x89,   0x11D,
    0x211,   0x409,  0x805,  0x1053, 0x201B, 0x4443, 0x8003, 0x1100B,
};

}  // namespace

FieldSpec FieldSpec::canonical(unsigned m) {
    if (m < 1 || m > 16) {
        throw std::invalid_argument("field width must be in [1, 16], got " + std::to_string(m));
    }
    return FieldSpec{m, kCanonical[m]};
}

Symbol poly_mul_mod(Symbol a, Symbol b, const FieldSpec& spec) {
    std::uint32_t acc = 0;
    std::uint32_t x = a;
    const std::uint32_t top = 1u << spec.m;
    for (std::uint32_t y = b; y != 0; y >>= 1) {
        if (y & 1u) {
            acc ^= x;
        }
        x <<= 1;
        if (x & top) {
            x ^= spec.poly;
        }
    }
    return static_cast<Symbol>(acc);
}

Field::Field(FieldSpec spec) : spec_(spec) {
    if (spec_.m < 1 || spec_.m > 16) {
        throw std::invalid_argument("field width must be in [1, 16]");
    }
    if ((spec_.poly >> spec_.m) != 1u) {
        throw std::invalid_argument("reduction polynomial degree must equal m");
    }
    const std::uint32_t q = spec_.order();
    inverse_.assign(q, 0);
    if (spec_.m <= 8) {
        table_.resize(static_cast<std::size_t>(q) * q);
        for (std::uint32_t a = 0; a < q; ++a) {
            for (std::uint32_t b = 0; b < q; ++b) {
                const Symbol p = poly_mul_mod(static_cast<Symbol>(a), static_cast<Symbol>(b), spec_);
                table_[(static_cast<std::size_t>(a) << spec_.m) | b] = p;
                if (p == 1) {
                    inverse_[a] = static_cast<Symbol>(b);
                }
            }
        }
        for (std::uint32_t a = 1; a < q; ++a) {
            if (inverse_[a] == 0) {
                throw std::invalid_argument("reduction polynomial is not irreducible");
            }
        }
        return;
    }
    log_.assign(q, 0);
    exp_.assign(2 * static_cast<std::size_t>(q), 0);
    std::uint32_t x = 1;
    for (std::uint32_t i = 0; i + 1 < q; ++i) {
        if (i > 0 && x == 1) {
            throw std::invalid_argument("reduction polynomial is not primitive");
        }
        exp_[i] = static_cast<Symbol>(x);
        log_[x] = i;
        x = poly_mul_mod(static_cast<Symbol>(x), 2, spec_);
    }
    if (x != 1) {
        throw std::invalid_argument("reduction polynomial is not primitive");
    }
    for (std::size_t i = q - 1; i < exp_.size(); ++i) {
        exp_[i] = exp_[i - (q - 1)];
    }
    for (std::uint32_t a = 1; a < q; ++a) {
        inverse_[a] = exp_[(q - 1 - log_[a]) % (q - 1)];
    }
}

const Field& Field::get(unsigned m) {
    static std::array<std::unique_ptr<Field>, 17> cache;
    static std::array<std::once_flag, 17> once;
    const FieldSpec spec = FieldSpec::canonical(m);
    std::call_once(once[m], [&] { cache[m] = std::make_unique<Field>(spec); });
    return *cache[m];
}

Symbol Field::inv(Symbol a) const {
    if (a == 0) {
        throw std::domain_error("inverse of zero");
    }
    return inverse_[a];
}

void Field::axpy(std::span<Symbol> y, Symbol a, std::span<const Symbol> x) const {
    if (a == 0) {
        return;
    }
    const std::size_t n = std::min(y.size(), x.size());
    if (a == 1) {
        for (std::size_t i = 0; i < n; ++i) {
            y[i] ^= x[i];
        }
        return;
    }
    if (!table_.empty()) {
        const Symbol* row = table_.data() + (static_cast<std::size_t>(a) << spec_.m);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] ^= row[x[i]];
        }
        return;
    }
    const std::uint32_t la = log_[a];
    for (std::size_t i = 0; i < n; ++i) {
        if (x[i] != 0) {
            y[i] ^= exp_[la + log_[x[i]]];
        }
    }
}

void Field::scale(std::span<Symbol> y, Symbol a) const {
    for (auto& v : y) {
        v = mul(a, v);
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m.at(i, i) = 1;
    }
    return m;
}

Matrix multiply(const Field& f, const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        throw std::invalid_argument("matrix dimensions do not agree");
    }
    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            f.axpy(out.row(i), a.at(i, k), b.row(k));
        }
    }
    return out;
}

SolveResult solve(const Field& f, Matrix a, Matrix rhs) {
    if (rhs.rows() != a.rows()) {
        throw std::invalid_argument("right-hand side row count must match the system");
    }
    SolveResult result;
    const std::size_t rows = a.rows();
    const std::size_t cols = a.cols();
    const std::size_t width = rhs.cols();
    std::size_t r = 0;
    std::size_t c = 0;
    for (; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && a.at(p, c) == 0) {
            ++p;
        }
        if (p == rows) {
            result.free_columns.push_back(c);
            continue;
        }
        if (p != r) {
            for (std::size_t j = 0; j < cols; ++j) {
                std::swap(a.at(p, j), a.at(r, j));
            }
            for (std::size_t j = 0; j < width; ++j) {
                std::swap(rhs.at(p, j), rhs.at(r, j));
            }
        }
        const Symbol pinv = f.inv(a.at(r, c));
        if (pinv != 1) {
            f.scale(a.row(r).subspan(c), pinv);
            f.scale(rhs.row(r), pinv);
            result.ops.coefficient_ops += cols - c;
            result.ops.payload_ops += width;
        }
        for (std::size_t i = 0; i < rows; ++i) {
            const Symbol factor = (i == r) ? 0 : a.at(i, c);
            if (factor == 0) {
                continue;
            }
            f.axpy(a.row(i).subspan(c), factor, a.row(r).subspan(c));
            f.axpy(rhs.row(i), factor, rhs.row(r));
            result.ops.coefficient_ops += 2 * (cols - c);
            result.ops.payload_ops += 2 * width;
        }
        ++r;
    }
    for (; c < cols; ++c) {
        result.free_columns.push_back(c);
    }
    result.rank = r;
    for (std::size_t i = r; i < rows; ++i) {
        for (std::size_t j = 0; j < width; ++j) {
            if (rhs.at(i, j) != 0) {
                result.consistent = false;
            }
        }
    }
    if (result.full_rank() && result.consistent) {
        Matrix x(cols, width);
        for (std::size_t i = 0; i < cols; ++i) {
            for (std::size_t j = 0; j < width; ++j) {
                x.at(i, j) = rhs.at(i, j);
            }
        }
        result.solution = std::move(x);
    }
    return result;
}

std::size_t rank(const Field& f, Matrix a) {
    const std::size_t n = a.rows();
    return solve(f, std::move(a), Matrix(n, 0)).rank;
}

std::size_t rank_gf2(std::vector<std::uint64_t> rows) {
    std::size_t r = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::uint64_t v = rows[i];
        if (v == 0) {
            continue;
        }
        const std::uint64_t low = v & (~v + 1);
        ++r;
        for (std::size_t j = i + 1; j < rows.size(); ++j) {
            if (rows[j] & low) {
                rows[j] ^= v;
            }
        }
    }
    return r;
}

}  // namespace ldfec::gf
