#ifndef JOINTSEG_RESULT_DOCUMENT_HPP
#define JOINTSEG_RESULT_DOCUMENT_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "jointseg/config_io.hpp"
#include "jointseg/model_selection.hpp"

namespace jointseg {

std::string tool_version();

struct RunInfo {
    std::string command;  // "fit" or "select"
    std::string input_path;
    std::optional<std::uint64_t> seed;
    ToolConfig config;  // fully resolved, flags applied
    /// ISO 8601 UTC creation time; omitted (null) when empty.
    std::string timestamp;
};

/// The JSON result document of a fit or a selection sweep (selection may be
/// null). Breakpoints are reported as observation index and as time of the
/// segment's last observation; coefficients only for the active set.
/// Non-finite numbers become null. Validates against
/// schema/result_document.schema.json.
std::string result_document(const SeriesSet& series, const DictionaryMatrix& dict, const ModelFit& fit,
                            const SelectionResult* selection, const RunInfo& info);

/// Ground truth of a simulated data set: config, seed, per-series breakpoints
/// and means, the bias on t = 1..n and the IDs of the generating columns in
/// the simulation dictionary.
std::string simulation_truth_document(const SimulatedData& data, const SimConfig& config, std::uint64_t seed);

/// Current UTC time as 2024-01-31T12:00:00Z.
std::string utc_timestamp();

}  // namespace jointseg

#endif  // JOINTSEG_RESULT_DOCUMENT_HPP
