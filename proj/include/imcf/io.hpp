#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "imcf/asymptotics.hpp"
#include "imcf/continuation.hpp"
#include "json.hpp"
#include "imcf/verify.hpp"

namespace imcf::io {

using Json = nlohmann::ordered_json;

/// Shortest round-trip decimal form, independent of the C++ and C locales.
std::string format_number(double x);

/// Parses a whole string as a double with std::from_chars; nullopt on any trailing text.
std::optional<double> parse_number(const std::string& s);

/// Header line of the profile table.
inline constexpr const char* kProfileHeader = "r,f,fr,frr,w,q";

/// Profile as CSV with the fixed header; q is left empty where f <= 0.
void write_profile_csv(std::ostream& os, const RadialProfile& profile);

Json profile_to_json(const RadialProfile& profile);
void write_profile_json(std::ostream& os, const RadialProfile& profile);

/// Reads a profile previously written by write_profile_csv (params supplied by the caller) or
/// write_profile_json (params taken from the file). Throws SchemaError naming the defect.
RadialProfile read_profile_csv(std::istream& is, const Parameters& params);
RadialProfile read_profile_json(std::istream& is);

Json to_json(const Parameters& params);
Json to_json(const SolverConfig& config);
Json to_json(const MonitorEvent& event);
Json to_json(const std::vector<MonitorEvent>& events);
Json to_json(const PicardDiagnostics& diag);
Json to_json(const ExtensionStats& stats);
Json to_json(const AsymptoticsReport& report);
Json to_json(const VerificationReport& report);

Parameters parameters_from_json(const Json& j);
SolverConfig config_from_json(const Json& j);

/// UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_timestamp();

}  // namespace imcf::io
