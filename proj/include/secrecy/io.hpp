#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "secrecy/channel.hpp"
#include "secrecy/enhancement.hpp"
#include "secrecy/tracer.hpp"

namespace secrecy {

// Channel instance from a JSON document with keys "H1", "H2" (arrays of row
// arrays) and exactly one of "S" (array of rows) or "P" (number).  Every
// failure names the offending key.
ChannelSpec parse_channel_file(const std::filesystem::path& path);

// Boundary as CSV: metadata comment lines, header
// `gamma0,alpha,R0_bits,R1_bits`, one row per point with 12 significant
// digits, LF endings, ascending gamma0.  Written atomically
// (temp file then rename).  Witness covariances, when kept, go to a sibling
// `<stem>.witness.json`.
void emit_boundary_csv(const RegionBoundary& b,
                       const std::filesystem::path& path);

// Inverse of emit_boundary_csv for the numeric columns.
RegionBoundary parse_boundary_csv(const std::filesystem::path& path);

// Gnuplot script plotting R1 vs R0 for each CSV with a legend.
void emit_plot_script(const std::vector<std::filesystem::path>& csv_paths,
                      const std::filesystem::path& path);

// Certificate and chain-report serialization; matrices as row-major arrays.
nlohmann::json certificate_to_json(const KKTCertificate& cert);
KKTCertificate certificate_from_json(const nlohmann::json& j);
nlohmann::json chain_report_to_json(const ChainReport& rep);

// Atomic small-file write (temp file then rename).
void write_text_file(const std::filesystem::path& path,
                     const std::string& contents);

}  // namespace secrecy
