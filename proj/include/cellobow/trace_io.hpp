#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "cellobow/replay_sim.hpp"

namespace cellobow {

struct TraceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoFailure : TraceError {
    using TraceError::TraceError;
};
struct SchemaMismatch : TraceError {
    SchemaMismatch(int line, const std::string& what)
        : TraceError("line " + std::to_string(line) + ": " + what), line(line) {}
    int line;
};
struct ParseFailure : TraceError {
    ParseFailure(int line, const std::string& what)
        : TraceError("line " + std::to_string(line) + ": " + what), line(line) {}
    int line;
};

// Canonical 22-column header of the telemetry trace, in order.
const std::array<std::string, 22>& traceColumns();

struct TraceFile {
    std::vector<TrajectorySample> rows;
};

// UTF-8, comma-separated, LF line endings, floats at 6 decimal places.
// Only event-label fields containing commas are double-quoted.
std::string writeCsv(const std::vector<TrajectorySample>& samples);
void writeCsvFile(const std::string& path,
                  const std::vector<TrajectorySample>& samples);

// Strict parse: exact header, 22 fields per row, numeric fields numeric.
// Throws SchemaMismatch / ParseFailure with the offending line number.
TraceFile readCsv(const std::string& bytes);
TraceFile readCsvFile(const std::string& path);

struct TraceStats {
    double duration_sec = 0.0;
    std::size_t row_count = 0;
    double mean_sample_spacing_sec = 0.0;
    std::map<std::string, double> per_string_time_sec; // stroke time per string
    int crossing_count = 0;
    double bow_distance_m = 0.0; // TCP travel during strokes

    std::string summary() const;
};

TraceStats stats(const TraceFile& trace);

} // namespace cellobow
