#include "jointseg/dataset_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "jointseg/errors.hpp"

namespace jointseg {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

// RFC 4180 style: fields may be double-quoted, "" escapes a quote.
std::vector<std::string> split_csv(std::string_view line, std::size_t line_no) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    bool was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                field += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                field += c;
            }
        } else if (c == '"' && trim(field).empty()) {
            field.clear();
            quoted = true;
            was_quoted = true;
        } else if (c == ',') {
            fields.push_back(was_quoted ? field : std::string(trim(field)));
            field.clear();
            was_quoted = false;
        } else {
            field += c;
        }
    }
    if (quoted) throw InputError("unterminated quoted field", line_no);
    fields.push_back(was_quoted ? field : std::string(trim(field)));
    return fields;
}

double parse_number(const std::string& cell, const std::string& column, std::size_t line_no) {
    if (cell.empty()) throw InputError("missing value in column '" + column + "'", line_no);
    std::string_view s = cell;
    if (s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc::result_out_of_range)
        throw InputError("value '" + cell + "' in column '" + column + "' is out of range", line_no);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw InputError("non-numeric value '" + cell + "' in column '" + column + "'", line_no);
    if (!std::isfinite(v)) throw InputError("non-finite value '" + cell + "' in column '" + column + "'", line_no);
    return v;
}

}  // namespace

SeriesSet parse_dataset(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
        if (!trim(line).empty()) {
            header = split_csv(line, line_no);
            break;
        }
    }
    if (header.empty()) throw InputError("empty file: no header row");
    const std::size_t header_line = line_no;

    std::map<std::string, std::size_t> column;
    for (std::size_t i = 0; i < header.size(); ++i)
        if (!column.emplace(header[i], i).second)
            throw InputError("duplicate column '" + header[i] + "' in header", header_line);
    for (const char* required : {"series_id", "time", "value"})
        if (!column.count(required)) throw InputError(std::string("missing required column '") + required + "'", header_line);
    const std::size_t c_id = column["series_id"];
    const std::size_t c_time = column["time"];
    const std::size_t c_value = column["value"];
    const std::optional<std::size_t> c_cov =
        column.count("covariate") ? std::optional<std::size_t>(column["covariate"]) : std::nullopt;

    std::vector<Series> series;
    std::set<std::string> finished;
    std::vector<std::size_t> last_line;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        const auto fields = split_csv(line, line_no);
        if (fields.size() != header.size())
            throw InputError("expected " + std::to_string(header.size()) + " fields, found " +
                                 std::to_string(fields.size()),
                             line_no);
        const std::string& id = fields[c_id];
        if (id.empty()) throw InputError("missing value in column 'series_id'", line_no);
        const double t = parse_number(fields[c_time], "time", line_no);
        const double y = parse_number(fields[c_value], "value", line_no);
        const double x = c_cov ? parse_number(fields[*c_cov], "covariate", line_no) : t;

        if (series.empty() || series.back().id != id) {
            if (!series.empty()) finished.insert(series.back().id);
            if (finished.count(id))
                throw InputError("rows of series '" + id + "' are not contiguous; group rows by series_id", line_no);
            series.push_back(Series{id, {}, {}, {}});
            last_line.push_back(0);
        }
        Series& s = series.back();
        if (!s.times.empty()) {
            if (t == s.times.back())
                throw InputError("duplicate time " + format_double(t) + " in series '" + id + "' (also on line " +
                                     std::to_string(last_line.back()) + ")",
                                 line_no);
            if (t < s.times.back())
                throw InputError("time " + format_double(t) + " precedes the previous time " +
                                     format_double(s.times.back()) + " in series '" + id +
                                     "'; rows must be sorted by time",
                                 line_no);
        }
        s.times.push_back(t);
        s.values.push_back(y);
        s.covariates.push_back(x);
        last_line.back() = line_no;
    }
    if (in.bad()) throw InputError("read failure");
    if (series.empty()) throw InputError("no data rows: the dataset has no series", header_line);
    return SeriesSet(std::move(series));
}

SeriesSet read_dataset(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open dataset '" + path.string() + "'");
    return parse_dataset(in);
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc()) throw std::runtime_error("number formatting failed");
    return std::string(buf, ptr);
}

namespace {

std::string quote_if_needed(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos && trim(s) == s) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

}  // namespace

void write_dataset(std::ostream& out, const SeriesSet& series) {
    bool with_covariate = false;
    for (const auto& s : series.series()) with_covariate = with_covariate || s.covariates != s.times;
    out << (with_covariate ? "series_id,time,value,covariate\n" : "series_id,time,value\n");
    for (const auto& s : series.series()) {
        const std::string id = quote_if_needed(s.id);
        for (std::size_t i = 0; i < s.size(); ++i) {
            out << id << ',' << format_double(s.times[i]) << ',' << format_double(s.values[i]);
            if (with_covariate) out << ',' << format_double(s.covariates[i]);
            out << '\n';
        }
    }
}

void write_dataset(const std::filesystem::path& path, const SeriesSet& series) {
    std::ostringstream os;
    write_dataset(os, series);
    write_file_atomic(path, os.str());
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw std::runtime_error("write to '" + tmp.string() + "' failed");
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw std::runtime_error("cannot move '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
    }
}

}  // namespace jointseg
