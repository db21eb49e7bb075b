#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "jointseg/dataset_io.hpp"
#include "jointseg/errors.hpp"
#include "jointseg/sim_bench.hpp"

using namespace jointseg;

namespace {

SeriesSet parse(const std::string& text) {
    std::istringstream in(text);
    return parse_dataset(in);
}

// Line number and message fragment of the rejection.
std::pair<std::size_t, std::string> rejection(const std::string& text) {
    try {
        parse(text);
    } catch (const InputError& e) {
        return {e.line(), e.what()};
    }
    return {0, "accepted"};
}

}  // namespace

TEST_SUITE("cli_io") {

TEST_CASE("well-formed dataset") {
    const auto s = parse("series_id,time,value\na,1,0.5\na,2,0.7\na,3,1\nb,1,2\nb,2,2.5\nb,4,3\n");
    CHECK(s.num_series() == 2);
    CHECK(s.total_size() == 6);
    CHECK(s[1].id == "b");
    CHECK(s[1].times == std::vector<double>{1, 2, 4});
    CHECK(s[1].covariates == s[1].times);
}

TEST_CASE("column order, extra columns, quotes, BOM and CRLF") {
    const auto s = parse("\xEF\xBB\xBFvalue,note,time,series_id\r\n1.5,\"x, y\",10,\"gps 1\"\r\n2.5,,11,\"gps 1\"\r\n");
    CHECK(s.num_series() == 1);
    CHECK(s[0].id == "gps 1");
    CHECK(s[0].values == std::vector<double>{1.5, 2.5});
}

TEST_CASE("covariate column") {
    const auto s = parse("series_id,time,value,covariate\na,1,0,10\na,2,0,12\n");
    CHECK(s[0].covariates == std::vector<double>{10, 12});
    const std::vector<BasisSpec> spec{BasisSpec{MonomialBasis{{1}}, EvalTarget::covariate}};
    const auto dict = assemble(spec, s);
    CHECK(dict.matrix()(1, 0) == 12.0);
}

TEST_CASE("each malformed input has its own diagnostic") {
    CHECK(rejection("") == std::pair<std::size_t, std::string>{0, "empty file: no header row"});
    auto r = rejection("series_id,time,time,value\n");
    CHECK(r.first == 1);
    CHECK(r.second.find("duplicate column") != std::string::npos);
    r = rejection("series_id,value\na,1\n");
    CHECK(r.first == 1);
    CHECK(r.second.find("missing required column 'time'") != std::string::npos);
    r = rejection("series_id,time,value\na,1,2,3\n");
    CHECK(r.first == 2);
    CHECK(r.second.find("expected 3 fields") != std::string::npos);
    r = rejection("series_id,time,value\na,1,2\na,2,\n");
    CHECK(r.first == 3);
    CHECK(r.second.find("missing value") != std::string::npos);
    r = rejection("series_id,time,value\na,1,abc\n");
    CHECK(r.first == 2);
    CHECK(r.second.find("non-numeric") != std::string::npos);
    r = rejection("series_id,time,value\na,1,1e999\n");
    CHECK(r.second.find("out of range") != std::string::npos);
    r = rejection("series_id,time,value\na,1,nan\n");
    CHECK(r.second.find("non-finite") != std::string::npos);
    r = rejection("series_id,time,value\na,1,1\nb,1,1\na,2,1\n");
    CHECK(r.first == 4);
    CHECK(r.second.find("not contiguous") != std::string::npos);
    r = rejection("series_id,time,value\na,1,1\na,2,1\na,2,5\n");
    CHECK(r.first == 4);
    CHECK(r.second.find("duplicate time 2") != std::string::npos);
    CHECK(r.second.find("line 3") != std::string::npos);
    r = rejection("series_id,time,value\na,2,1\na,1,1\n");
    CHECK(r.first == 3);
    CHECK(r.second.find("precedes") != std::string::npos);
    r = rejection("series_id,time,value\n");
    CHECK(r.second.find("no data rows") != std::string::npos);
    r = rejection("series_id,time,value\n,1,1\n");
    CHECK(r.second.find("series_id") != std::string::npos);
    r = rejection("series_id,time,value\n\"a,1,1\n");
    CHECK(r.second.find("unterminated") != std::string::npos);
    CHECK_THROWS_AS(read_dataset("/nonexistent/file.csv"), InputError);
}

TEST_CASE("simulate, write and parse back") {
    SimConfig c;
    c.sigma = 0.37;
    const auto data = simulate(c, 555);
    std::ostringstream out;
    write_dataset(out, data.series);
    const auto text = out.str();
    CHECK(std::count(text.begin(), text.end(), '\n') == 1001);
    CHECK(text.rfind("series_id,time,value\n", 0) == 0);
    const auto back = parse(text);
    CHECK(back == data.series);
}

TEST_CASE("covariates survive the round trip") {
    const SeriesSet s({Series{"a", {1, 2}, {0.1, 0.2}, {5, 6}}, Series{"b", {1}, {3}, {}}});
    std::ostringstream out;
    write_dataset(out, s);
    CHECK(out.str().rfind("series_id,time,value,covariate\n", 0) == 0);
    CHECK(parse(out.str()) == s);
}

TEST_CASE("number formatting") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(-2.0) == "-2");
    CHECK(format_double(1.0 / 3.0) == "0.3333333333333333");
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_double(std::nan("")) == "nan");
}

TEST_CASE("atomic writes") {
    const auto dir = std::filesystem::temp_directory_path() / "jointseg_atomic_test";
    std::filesystem::remove_all(dir);
    const auto p = dir / "sub" / "f.txt";
    write_file_atomic(p, "one");
    write_file_atomic(p, "two");
    std::ifstream in(p);
    std::string s;
    std::getline(in, s);
    CHECK(s == "two");
    CHECK(!std::filesystem::exists(p.string() + ".tmp"));
    std::filesystem::remove_all(dir);
}

}
