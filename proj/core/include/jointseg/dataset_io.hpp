#ifndef JOINTSEG_DATASET_IO_HPP
#define JOINTSEG_DATASET_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "jointseg/series_model.hpp"

namespace jointseg {

/// Reads the long CSV layout
///
///   series_id,time,value[,covariate]
///
/// with a header row naming the columns (any order, extra columns ignored).
/// Rows of one series must be contiguous and strictly increasing in time.
/// Every rejection is an InputError carrying the 1-based line number.
SeriesSet parse_dataset(std::istream& in);
SeriesSet read_dataset(const std::filesystem::path& path);

/// Writes the same layout. The covariate column is emitted only when some
/// series has covariates different from its times. Numbers use the shortest
/// representation that parses back to the same double.
void write_dataset(std::ostream& out, const SeriesSet& series);
void write_dataset(const std::filesystem::path& path, const SeriesSet& series);

/// Shortest round-trip decimal form of a double ("nan", "inf", "-inf" for
/// non-finite values).
std::string format_double(double v);

/// Writes `content` to a sibling temporary file and renames it over `path`.
/// Creates missing parent directories. Throws std::runtime_error on failure.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace jointseg

#endif  // JOINTSEG_DATASET_IO_HPP
