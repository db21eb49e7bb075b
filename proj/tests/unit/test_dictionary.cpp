#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "jointseg/dictionary.hpp"
#include "jointseg/errors.hpp"
#include "oracles.hpp"

using namespace jointseg;

namespace {

std::vector<double> one_to(std::size_t n) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>(i + 1);
    return x;
}

}  // namespace

TEST_SUITE("dictionary") {

TEST_CASE("haar r=7 on 1..100") {
    const auto x = one_to(100);
    const auto b = build_haar(7, 100.0, x);
    CHECK(b.values.cols() == 128);
    CHECK(b.labels.size() == 128);
    const double h = std::pow(2.0, 3.5);
    for (Eigen::Index i = 0; i < b.values.rows(); ++i) {
        int nonzero = 0;
        for (Eigen::Index k = 0; k < 128; ++k) {
            const double v = b.values(i, k);
            if (v != 0.0) {
                ++nonzero;
                CHECK(v == h);
            }
        }
        CHECK(nonzero == 1);
    }
}

TEST_CASE("haar r=0 is the constant one") {
    const std::vector<double> x{0.0, 0.3, 2.5, 7.0};
    const auto b = build_haar(0, 7.0, x);
    REQUIRE(b.values.cols() == 1);
    for (Eigen::Index i = 0; i < 4; ++i) CHECK(b.values(i, 0) == 1.0);
}

TEST_CASE("haar spike columns at t = 10, 50, 60 carry IDs 13, 64, 77") {
    const auto x = one_to(100);
    const auto specs = simulation_dictionary(100.0);
    const auto dict = assemble(specs, x, x);
    auto id_at = [&](std::size_t t) {
        for (std::size_t j = 0; j < 128; ++j)
            if (dict.matrix()(static_cast<Eigen::Index>(t - 1), static_cast<Eigen::Index>(j)) != 0.0) return j + 1;
        return std::size_t{0};
    };
    CHECK(id_at(10) == 13);
    CHECK(id_at(50) == 64);
    CHECK(id_at(60) == 77);
}

TEST_CASE("haar supports are disjoint") {
    const auto x = one_to(100);
    const auto b = build_haar(7, 100.0, x);
    for (Eigen::Index a = 0; a < 128; ++a)
        for (Eigen::Index c = a + 1; c < 128; ++c) CHECK(b.values.col(a).cwiseProduct(b.values.col(c)).isZero(0.0));
}

TEST_CASE("fourier fixed") {
    const auto x = one_to(100);
    const auto specs = simulation_dictionary(100.0);
    const auto dict = assemble(specs, x, x);
    CHECK(dict.size() == 150);
    // ID 137 is sin(2 pi 5 t / 100)
    for (std::size_t t = 1; t <= 100; ++t)
        CHECK(std::abs(dict.matrix()(static_cast<Eigen::Index>(t - 1), 136) -
                       std::sin(2 * std::numbers::pi * 5 * static_cast<double>(t) / 100.0)) <= 1e-12);
    CHECK(dict.label(136) == "sin[j=5,L=100]");

    const std::vector<double> zero{0.0};
    const auto z = build_fourier_fixed(3, 10.0, zero);
    for (int j = 0; j < 3; ++j) {
        CHECK(z.values(0, 2 * j) == 0.0);
        CHECK(z.values(0, 2 * j + 1) == 1.0);
    }

    oracle::Draw d(1);
    std::vector<double> r(40);
    for (auto& v : r) v = d.uniform(-50, 50);
    const auto f = build_fourier_fixed(4, 37.0, r);
    for (int j = 1; j <= 4; ++j)
        for (std::size_t i = 0; i < r.size(); ++i) {
            const double w = 2 * std::numbers::pi * j * r[i] / 37.0;
            CHECK(std::abs(f.values(static_cast<Eigen::Index>(i), 2 * (j - 1)) - std::sin(w)) <= 1e-12);
            CHECK(std::abs(f.values(static_cast<Eigen::Index>(i), 2 * (j - 1) + 1) - std::cos(w)) <= 1e-12);
        }
}

TEST_CASE("fourier pairs are nearly orthogonal on an even grid") {
    std::vector<double> x(100);
    for (std::size_t i = 0; i < 100; ++i) x[i] = static_cast<double>(i);
    const auto f = build_fourier_fixed(3, 100.0, x);
    for (int j = 0; j < 3; ++j) CHECK(std::abs(f.values.col(2 * j).dot(f.values.col(2 * j + 1))) <= 1e-6 * 100);
}

TEST_CASE("fourier grid") {
    std::vector<double> weeks(905);
    for (std::size_t i = 0; i < weeks.size(); ++i) weeks[i] = 1000.0 + static_cast<double>(i);
    const auto g = build_fourier_grid(8.0, weeks);
    CHECK(g.values.cols() == 226);

    const std::vector<double> short_span{0.0, 1.0, 3.0};
    CHECK(build_fourier_grid(5.0, short_span).values.cols() == 0);

    // the first pair has period T
    const std::vector<double> x{2.0, 4.5, 7.0, 12.0};
    const auto p = build_fourier_grid(3.0, x);
    REQUIRE(p.values.cols() == 6);
    for (Eigen::Index i = 0; i < 4; ++i)
        CHECK(std::abs(p.values(i, 0) - std::sin(2 * std::numbers::pi * x[static_cast<std::size_t>(i)] / 10.0)) <= 1e-12);
    CHECK(std::abs(p.values(0, 0) - p.values(3, 0)) <= 1e-12);

    const std::vector<double> flat{1.0, 1.0};
    CHECK_THROWS_AS(build_fourier_grid(1.0, flat), InvalidArgument);
}

TEST_CASE("monomials") {
    const auto x = one_to(100);
    const std::vector<int> deg{1, 2};
    CHECK(build_monomials(deg, x).values.cols() == 2);
    const std::vector<double> zero{0.0};
    CHECK(build_monomials(std::vector<int>{1}, zero).values(0, 0) == 0.0);

    oracle::Draw d(2);
    std::vector<double> r(20);
    for (auto& v : r) v = d.uniform(-3, 3);
    const std::vector<int> degs{3, 1, 5};
    const auto m = build_monomials(degs, r);
    for (std::size_t c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < r.size(); ++i) {
            double p = 1;
            for (int e = 0; e < degs[c]; ++e) p *= r[i];
            CHECK(m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) == doctest::Approx(p).epsilon(1e-12));
        }
}

TEST_CASE("spec validation") {
    CHECK_THROWS_AS(validate(BasisSpec{HaarBasis{-1, 10}}), InvalidArgument);
    CHECK_THROWS_AS(validate(BasisSpec{HaarBasis{3, 0}}), InvalidArgument);
    CHECK_THROWS_AS(validate(BasisSpec{FourierFixedBasis{0, 10}}), InvalidArgument);
    CHECK_THROWS_AS(validate(BasisSpec{FourierGridBasis{0.0}}), InvalidArgument);
    CHECK_THROWS_AS(validate(BasisSpec{MonomialBasis{{1, 1}}}), InvalidArgument);
    CHECK_THROWS_AS(validate(BasisSpec{MonomialBasis{{0}}}), InvalidArgument);
    CHECK_THROWS_AS(validate(BasisSpec{MonomialBasis{{}}}), InvalidArgument);
}

TEST_CASE("assemble") {
    const std::vector<double> x{1, 2, 3, 4};
    const std::vector<BasisSpec> constant{BasisSpec{HaarBasis{0, 4.0}}};
    const auto d1 = assemble(constant, x, x);
    CHECK(d1.norm(0) == doctest::Approx(2.0));

    const std::vector<BasisSpec> none;
    CHECK_THROWS_AS(assemble(none, x, x), InvalidArgument);
    const std::vector<double> empty;
    CHECK_THROWS_AS(assemble(constant, empty, empty), InvalidArgument);

    oracle::Draw d(3);
    std::vector<double> t(60), c(60);
    for (std::size_t i = 0; i < 60; ++i) {
        t[i] = static_cast<double>(i % 30 + 1);
        c[i] = d.uniform(0, 2);
    }
    const std::vector<BasisSpec> mixed{BasisSpec{HaarBasis{3, 30.0}}, BasisSpec{FourierFixedBasis{2, 30.0}},
                                       BasisSpec{MonomialBasis{{1, 3}}, EvalTarget::covariate}};
    const auto dict = assemble(mixed, t, c);
    CHECK(dict.size() == 8 + 4 + 2);
    CHECK(dict.rows() == 60);
    for (std::size_t j = 0; j < dict.size(); ++j) {
        double s = 0;
        for (std::size_t i = 0; i < 60; ++i) {
            const double v = dict.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            s += v * v;
        }
        CHECK(std::abs(dict.norm(j) - std::sqrt(s)) <= 1e-12);
    }
    // covariate columns are evaluated on c, not t
    CHECK(dict.matrix()(5, 12) == c[5]);
    CHECK(dict.label(12) == "covariate:x^1");

    const auto again = assemble(mixed, t, c);
    CHECK(again.labels() == dict.labels());
    CHECK(again.matrix() == dict.matrix());
}

TEST_CASE("zero-norm columns are kept and flagged inactive") {
    const auto x = one_to(100);
    const auto dict = assemble(simulation_dictionary(100.0), x, x);
    CHECK(dict.size() == 150);
    std::size_t empty = 0;
    for (std::size_t j = 0; j < 128; ++j) {
        const bool zero = dict.matrix().col(static_cast<Eigen::Index>(j)).isZero(0.0);
        CHECK(dict.active(j) == !zero);
        empty += zero;
    }
    CHECK(empty == 28);
    CHECK(dict.active_count() == 122);
}

TEST_CASE("presets") {
    CHECK(simulation_dictionary().size() == 3);
    const auto g = gps_dictionary(8.0);
    REQUIRE(g.size() == 1);
    CHECK(std::get<FourierGridBasis>(g[0].kind).min_period == 8.0);
    CHECK(describe(BasisSpec{MonomialBasis{{1, 2}}, EvalTarget::covariate}) == "monomials(degrees=1,2) on covariate");
}

}
