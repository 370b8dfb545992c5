#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dmt {

inline constexpr std::string_view kArtifactVersion = "0.1.0";
inline constexpr std::string_view kCsvSchemaVersion = "v1";

// One result cell of an experiment run. Column order is part of the output
// contract; adding columns requires bumping the schema version.
struct ReportRow {
    std::uint64_t run_id = 0;
    std::string test_name;
    std::string regime;  // homogeneous | non-homogeneous | mixed
    std::int64_t b_true_index = -1;
    double alpha = 0.0;
    double beta = 0.0;
    double epsilon = 0.0;
    std::size_t m = 0;
    std::size_t dict_size = 0;
    std::uint64_t n_reps = 0;
    std::uint64_t rejections = 0;  // event count: rejections (Type I) or acceptances (Type II)
    double rate = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::uint64_t seed = 0;
    std::string notes;
};

// Shortest exact decimal form that round-trips a double.
std::string format_double(double v);

// RFC 4180 field quoting; applied only when the field needs it.
std::string csv_escape(const std::string& field);

std::uint64_t fnv1a64(std::string_view bytes);

// Provenance comment placed above the header row.
std::string csv_provenance_comment(std::uint64_t config_hash, std::uint64_t seed);

// Full CSV document: provenance comment, header, one line per row, LF endings.
std::string render_csv(const std::vector<ReportRow>& rows, std::uint64_t config_hash,
                       std::uint64_t seed);

// Generic small CSV (used by classify/adversary reports): caller supplies the
// header and stringified cells.
std::string render_table_csv(const std::vector<std::string>& header,
                             const std::vector<std::vector<std::string>>& rows,
                             std::uint64_t config_hash, std::uint64_t seed);

// Standalone SVG with one polyline per named series; x is the scale, y an
// acceptance rate in [0,1].
std::string render_power_svg(const std::string& title,
                             const std::map<std::string, std::vector<std::pair<double, double>>>&
                                 series);

}  // namespace dmt
