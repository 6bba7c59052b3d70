#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "zerosheet/restore.hpp"
#include "zerosheet/search.hpp"

namespace zerosheet {

inline constexpr int kReportVersion = 1;
inline constexpr const char* kToolVersion = "0.3.0";

enum class RunStatus { kOk, kNoBlurFound, kPartial, kError };

/// Process exit code paired with each status: 0, 3, 4, 1.
int exit_code(RunStatus status);
const char* to_string(RunStatus status);
const char* to_string(Axis axis);
const char* to_string(RestoreMethod method);

nlohmann::json to_json(const SearchConfig& cfg);

/// One per_stage entry. `restoration` is absent for search-only runs.
nlohmann::json stage_json(const SearchReport& report, const RestorationResult* restoration, double wall_time_ms);

nlohmann::json root_slice_json(const RootSlice& slice, double phase);

/// Top-level envelope: report_version, tool_version, command, config, per_stage, status.
nlohmann::json run_report(const std::string& command, const SearchConfig& cfg, const nlohmann::json& stages,
                          RunStatus status, const std::string& message = {});

/// Copy with every "wall_time_ms" key removed, for reproducibility checks.
nlohmann::json without_timings(nlohmann::json report);

}  // namespace zerosheet
