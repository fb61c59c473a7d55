#pragma once

#include <filesystem>
#include <string>

#include "trivirus/equilibria.hpp"
#include "trivirus/monotonicity.hpp"
#include "trivirus/scenario.hpp"
#include "trivirus/simulator.hpp"
#include "trivirus/stability.hpp"

namespace trivirus {

inline constexpr const char* kSoftwareName = "trivirus";
inline constexpr const char* kSoftwareVersion = "0.1.0";

/// Finite values as JSON numbers; infinities and NaN as the strings "inf",
/// "-inf" and "nan", which JSON cannot represent natively.
Json json_number(double value);
/// Inverse of json_number.
double number_from_json(const Json& value);

/// "x<k>_<i>" with 1-based virus k and node i, matching the CSV header.
std::string state_label(int index, int n);

Json to_json(const Error& error);
Json to_json(const EquilibriumDescriptor& d);
Json to_json(const DfeReport& r);
Json to_json(const BoundaryVerdict& v);
Json to_json(const LineVerdict& v, const LineConstruction& construction);
Json to_json(const LyapunovCertificate& c);
Json to_json(const ConsistencyVerdict& v, const SignedGraph& graph, int n);
Json to_json(const ConvergenceReport& r);
Json trajectory_summary(const Trajectory& t, const IntegratorOptions& options);

/// Header "t,x1_1,..,x1_n,..,xm_n", then one row per sample, every value
/// printed with 17 significant digits.
std::string trajectory_csv(const Trajectory& t);

/// Writes to a sibling temporary file and renames it into place, so the
/// target is either absent or complete. Creates missing parent directories.
///
/// Errors: IoError.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

} // namespace trivirus
