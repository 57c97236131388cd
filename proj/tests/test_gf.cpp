#include <random>
#include <stdexcept>

#include "doctest.h"
#include "ldfec/gf.hpp"

using namespace ldfec::gf;

TEST_CASE("canonical fields satisfy the field axioms") {
    for (unsigned m : {1u, 2u, 3u, 4u, 8u}) {
        const Field& f = Field::get(m);
        const std::uint32_t q = f.order();
        for (std::uint32_t a = 1; a < q; ++a) {
            CHECK(f.mul(static_cast<Symbol>(a), f.inv(static_cast<Symbol>(a))) == 1);
            CHECK(f.mul(static_cast<Symbol>(a), 1) == a);
            CHECK(f.mul(static_cast<Symbol>(a), 0) == 0);
        }
    }
}

TEST_CASE("table multiplication matches the carry-less reference") {
    const Field& f = Field::get(8);
    for (std::uint32_t a = 0; a < 256; ++a) {
        for (std::uint32_t b = 0; b < 256; b += 7) {
            REQUIRE(f.mul(static_cast<Symbol>(a), static_cast<Symbol>(b)) ==
                    poly_mul_mod(static_cast<Symbol>(a), static_cast<Symbol>(b), f.spec()));
        }
    }
    CHECK(f.mul(0x53, 0xCA) == poly_mul_mod(0x53, 0xCA, f.spec()));
    CHECK(f.mul(2, 0x80) == 0x1D);  // x * x^7 = x^8 = x^4 + x^3 + x^2 + 1
}

TEST_CASE("log-table fields agree with the reference and are associative") {
    const Field& f = Field::get(12);
    std::mt19937_64 rng(5);
    for (int i = 0; i < 2000; ++i) {
        const auto a = static_cast<Symbol>(rng() & 0xFFF);
        const auto b = static_cast<Symbol>(rng() & 0xFFF);
        const auto c = static_cast<Symbol>(rng() & 0xFFF);
        REQUIRE(f.mul(a, b) == poly_mul_mod(a, b, f.spec()));
        REQUIRE(f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)));
        REQUIRE(f.mul(a, Field::add(b, c)) == Field::add(f.mul(a, b), f.mul(a, c)));
    }
}

TEST_CASE("invalid fields and zero inverse are rejected") {
    CHECK_THROWS_AS(FieldSpec::canonical(0), std::invalid_argument);
    CHECK_THROWS_AS(FieldSpec::canonical(17), std::invalid_argument);
    CHECK_THROWS_AS(Field(FieldSpec{2, 0x5}), std::invalid_argument);   // x^2 + 1 = (x + 1)^2
    CHECK_THROWS_AS(Field(FieldSpec{8, 0x31}), std::invalid_argument);  // wrong degree
    CHECK_THROWS_AS(Field::get(8).inv(0), std::domain_error);
}

TEST_CASE("axpy and scale operate elementwise") {
    const Field& f = Field::get(8);
    std::vector<Symbol> y = {1, 2, 3};
    const std::vector<Symbol> x = {4, 5, 6};
    f.axpy(y, 7, x);
    for (std::size_t i = 0; i < y.size(); ++i) {
        CHECK(y[i] == (static_cast<Symbol>(i + 1) ^ f.mul(7, x[i])));
    }
    f.scale(y, 0);
    CHECK(y == std::vector<Symbol>{0, 0, 0});
}

TEST_CASE("solve recovers a random invertible system") {
    const Field& f = Field::get(8);
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + trial % 7;
        Matrix a(n, n);
        Matrix x(n, 3);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                a.at(i, j) = static_cast<Symbol>(rng() & 0xFF);
            }
            for (std::size_t j = 0; j < 3; ++j) {
                x.at(i, j) = static_cast<Symbol>(rng() & 0xFF);
            }
        }
        const Matrix b = multiply(f, a, x);
        const auto res = solve(f, a, b);
        if (res.full_rank()) {
            REQUIRE(res.solution.has_value());
            CHECK(*res.solution == x);
        } else {
            CHECK(res.rank < n);
        }
    }
}

TEST_CASE("rank-deficient systems are reported") {
    const Field& f = Field::get(8);
    Matrix a(3, 3);
    a.at(0, 0) = 1;
    a.at(0, 1) = 2;
    a.at(1, 0) = 2;
    a.at(1, 1) = f.mul(2, 2);
    a.at(2, 2) = 5;
    Matrix b(3, 1);
    b.at(0, 0) = 1;
    b.at(1, 0) = 3;  // inconsistent with 2 * row 0
    const auto res = solve(f, a, b);
    CHECK(res.rank == 2);
    CHECK(res.free_columns == std::vector<std::size_t>{1});
    CHECK_FALSE(res.consistent);
    CHECK_FALSE(res.solution.has_value());
    CHECK(rank(f, a) == 2);
}

TEST_CASE("identity solves at zero elimination cost") {
    const Field& f = Field::get(8);
    Matrix b(4, 1);
    for (std::size_t i = 0; i < 4; ++i) {
        b.at(i, 0) = static_cast<Symbol>(i + 1);
    }
    const auto res = solve(f, Matrix::identity(4), b);
    CHECK(res.ops.coefficient_ops == 0);
    CHECK(*res.solution == b);
}

TEST_CASE("GF(2) bitmask rank agrees with the generic rank") {
    const Field& f = Field::get(1);
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + trial % 8;
        std::vector<std::uint64_t> rows(n);
        Matrix a(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            rows[i] = rng() & ((1u << n) - 1);
            for (std::size_t j = 0; j < n; ++j) {
                a.at(i, j) = static_cast<Symbol>((rows[i] >> j) & 1u);
            }
        }
        REQUIRE(rank_gf2(rows) == rank(f, a));
    }
}
