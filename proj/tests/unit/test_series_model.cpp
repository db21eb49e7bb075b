#include "doctest.h"

#include <vector>

#include "jointseg/errors.hpp"
#include "jointseg/series_model.hpp"
#include "oracles.hpp"

using namespace jointseg;

namespace {

Series make_series(std::string id, std::vector<double> y) {
    Series s{std::move(id), {}, std::move(y), {}};
    for (std::size_t i = 0; i < s.values.size(); ++i) s.times.push_back(static_cast<double>(i + 1));
    return s;
}

std::vector<Breakpoints> random_breaks(oracle::Draw& d, std::size_t n) {
    Breakpoints bp;
    for (std::size_t i = 1; i < n; ++i)
        if (d.uniform(0, 1) < 0.3) bp.push_back(i);
    bp.push_back(n);
    return {bp};
}

}  // namespace

TEST_SUITE("series_model") {

TEST_CASE("series set validation") {
    CHECK_THROWS_AS(SeriesSet({}), StructuralError);
    CHECK_THROWS_AS(SeriesSet({Series{"a", {}, {}, {}}}), StructuralError);
    CHECK_THROWS_AS(SeriesSet({Series{"a", {1, 2}, {0.0}, {}}}), StructuralError);
    CHECK_THROWS_AS(SeriesSet({Series{"a", {2, 1}, {0, 0}, {}}}), StructuralError);
    CHECK_THROWS_AS(SeriesSet({Series{"a", {1, 1}, {0, 0}, {}}}), StructuralError);
    CHECK_THROWS_AS(SeriesSet({Series{"a", {1, 2}, {0, std::nan("")}, {}}}), StructuralError);
    CHECK_THROWS_AS(SeriesSet({Series{"a", {1, 2}, {0, 0}, {1.0}}}), StructuralError);

    const SeriesSet s({make_series("a", {1, 2, 3}), make_series("b", {4, 5})});
    CHECK(s.num_series() == 2);
    CHECK(s.total_size() == 5);
    CHECK(s.offsets() == std::vector<std::size_t>{0, 3, 5});
    CHECK(s[1].covariates == s[1].times);
    CHECK(s.stacked_values() == std::vector<double>{1, 2, 3, 4, 5});
}

TEST_CASE("fit_means on a two-level series") {
    const std::vector<double> y{1, 1, 3, 3};
    const std::vector<Breakpoints> bp{{2, 4}};
    const std::vector<std::size_t> len{4};
    const auto seg = fit_means(bp, y, len);
    CHECK(seg.means[0] == std::vector<double>{1, 3});
}

TEST_CASE("single segment mean is the global average") {
    const std::vector<double> y{2, -1, 7, 0.5, 3};
    const auto seg = fit_means(std::vector<Breakpoints>{{5}}, y, std::vector<std::size_t>{5});
    CHECK(seg.means[0][0] == doctest::Approx(oracle::mean(y)).epsilon(1e-15));
}

TEST_CASE("fit_means matches direct averaging") {
    oracle::Draw d(11);
    for (int rep = 0; rep < 50; ++rep) {
        const auto y = d.normals(10);
        const auto bp = random_breaks(d, 10);
        const auto seg = fit_means(bp, y, std::vector<std::size_t>{10});
        const auto signal = segmentation_signal(seg);
        const auto ref = oracle::piecewise_means(y, bp[0]);
        for (std::size_t i = 0; i < 10; ++i) CHECK(std::abs(signal[i] - ref[i]) <= 1e-12);
    }
}

TEST_CASE("fit_means rejects bad layouts") {
    const std::vector<double> y{1, 2, 3, 4};
    CHECK_THROWS_AS(fit_means(std::vector<Breakpoints>{{2, 3}}, y, std::vector<std::size_t>{4}), StructuralError);
    CHECK_THROWS_AS(fit_means(std::vector<Breakpoints>{{2, 2, 4}}, y, std::vector<std::size_t>{4}), StructuralError);
    CHECK_THROWS_AS(fit_means(std::vector<Breakpoints>{{}}, y, std::vector<std::size_t>{4}), StructuralError);
    CHECK_THROWS_AS(fit_means(std::vector<Breakpoints>{{4}}, y, std::vector<std::size_t>{3}), StructuralError);
    CHECK_THROWS_AS(fit_means(std::vector<Breakpoints>{{4}, {1}}, y, std::vector<std::size_t>{4}), StructuralError);
}

TEST_CASE("segmentation_signal") {
    Segmentation seg{{{2, 4}}, {{1, 3}}};
    CHECK(segmentation_signal(seg) == std::vector<double>{1, 1, 3, 3});
    Segmentation flat{{{5}}, {{0.0}}};
    CHECK(segmentation_signal(flat) == std::vector<double>(5, 0.0));

    oracle::Draw d(5);
    for (int rep = 0; rep < 20; ++rep) {
        auto bp = random_breaks(d, 12);
        std::vector<double> mu;
        for (std::size_t k = 0; k < bp[0].size(); ++k) mu.push_back(d.normal());
        const Segmentation s{bp, {mu}};
        const auto sig = segmentation_signal(s);
        for (std::size_t i = 1; i <= 12; ++i) {
            std::size_t k = 0;
            while (bp[0][k] < i) ++k;
            CHECK(sig[i - 1] == mu[k]);
        }
    }
}

TEST_CASE("residual") {
    const SeriesSet s({make_series("a", {1, 1, 3, 3})});
    const Segmentation seg{{{2, 4}}, {{1, 3}}};
    CHECK(residual(s, &seg) == std::vector<double>(4, 0.0));
    const std::vector<double> bias{0.5, 0, 0, -1};
    CHECK(residual(s, nullptr, bias) == std::vector<double>{0.5, 1, 3, 4});
    CHECK_THROWS_AS(residual(s, nullptr, std::vector<double>{1, 2}), StructuralError);

    oracle::Draw d(9);
    const auto y = d.normals(8), b = d.normals(8);
    const Segmentation s2{{{3, 8}}, {{d.normal(), d.normal()}}};
    const auto r = residual(y, &s2, b);
    const auto sig = segmentation_signal(s2);
    for (std::size_t i = 0; i < 8; ++i) CHECK(r[i] == y[i] - sig[i] - b[i]);
}

TEST_CASE("means minimize the sum of squares") {
    oracle::Draw d(21);
    const auto y = d.normals(15);
    const std::vector<Breakpoints> bp{{4, 9, 15}};
    const auto seg = fit_means(bp, y, std::vector<std::size_t>{15});
    auto ss = [&](const Segmentation& s) {
        const auto r = residual(y, &s);
        double t = 0;
        for (double v : r) t += v * v;
        return t;
    };
    const double base = ss(seg);
    for (std::size_t k = 0; k < 3; ++k)
        for (double delta : {1e-3, -1e-3}) {
            auto p = seg;
            p.means[0][k] += delta;
            CHECK(ss(p) >= base);
        }
}

TEST_CASE("refitting the reconstructed signal is idempotent") {
    oracle::Draw d(3);
    const auto y = d.normals(20);
    const std::vector<Breakpoints> bp{{5, 6, 13, 20}};
    const std::vector<std::size_t> len{20};
    const auto seg = fit_means(bp, y, len);
    const auto again = fit_means(bp, segmentation_signal(seg), len);
    CHECK(again.means == seg.means);
}

TEST_CASE("segment lengths and internal breakpoints") {
    CHECK(segment_lengths(Breakpoints{2, 5, 9}) == std::vector<std::size_t>{2, 3, 4});
    const Segmentation seg{{{2, 5}, {4}}, {{0, 0}, {0}}};
    CHECK(seg.total_segments() == 3);
    CHECK(seg.internal_breakpoints() == std::vector<std::vector<std::size_t>>{{2}, {}});
}

}
