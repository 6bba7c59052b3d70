#include "zerosheet/report.hpp"

namespace zerosheet {

using nlohmann::json;

namespace {

json complex_json(cplx c) { return json::array({c.real(), c.imag()}); }

json matrix_json(const Image& img) {
  json rows = json::array();
  for (std::size_t y = 0; y < img.height(); ++y) {
    json row = json::array();
    for (std::size_t x = 0; x < img.width(); ++x) row.push_back(img(x, y));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

int exit_code(RunStatus status) {
  switch (status) {
    case RunStatus::kOk:
      return 0;
    case RunStatus::kNoBlurFound:
      return 3;
    case RunStatus::kPartial:
      return 4;
    case RunStatus::kError:
      break;
  }
  return 1;
}

const char* to_string(RunStatus status) {
  switch (status) {
    case RunStatus::kOk:
      return "OK";
    case RunStatus::kNoBlurFound:
      return "NO_BLUR_FOUND";
    case RunStatus::kPartial:
      return "PARTIAL";
    case RunStatus::kError:
      break;
  }
  return "ERROR";
}

const char* to_string(Axis axis) { return axis == Axis::kV ? "v" : "u"; }

const char* to_string(RestoreMethod method) {
  return method == RestoreMethod::kSpectral ? "SPECTRAL" : "LEAST_SQUARES";
}

json to_json(const SearchConfig& cfg) {
  return json{{"blur_m", cfg.blur_m},
              {"blur_n", cfg.blur_n},
              {"axis", to_string(cfg.axis)},
              {"base_phase", cfg.base_phase},
              {"phase_step", cfg.phase_step},
              {"sample_spacing", cfg.sample_spacing},
              {"tol_null", cfg.tol_null},
              {"tol_real", cfg.tol_real},
              {"tol_track_ratio", cfg.tol_track_ratio},
              {"tol_root", cfg.roots.tol_root},
              {"max_combinations", cfg.max_combinations},
              {"max_halvings", cfg.max_halvings},
              {"early_stop", cfg.early_stop}};
}

json stage_json(const SearchReport& report, const RestorationResult* restoration, double wall_time_ms) {
  json phases = json::array();
  for (const SamplePoint& p : report.points) phases.push_back(p.phase);

  json candidates = json::array();
  for (const BlurCandidate& c : report.candidates) {
    candidates.push_back(json{{"combination", c.combination},
                              {"sigma_gap", c.sigma_gap},
                              {"realness", c.realness},
                              {"accepted", c.accepted}});
  }

  json stage{{"blur_size", json::array({report.config.blur_m, report.config.blur_n})},
             {"axis", to_string(report.config.axis)},
             {"q", report.q},
             {"sample_phases", std::move(phases)},
             {"root_count", report.root_count},
             {"combinations_total", report.combinations_total},
             {"combinations_evaluated", report.combinations_evaluated},
             {"tracking_failures", report.tracking_failures},
             {"truncated", report.truncated},
             {"max_halvings_used", report.max_level_used},
             {"candidates", std::move(candidates)},
             {"wall_time_ms", wall_time_ms}};

  if (const BlurCandidate* best = report.best_candidate()) {
    json p = json::array();
    for (cplx v : best->p) p.push_back(complex_json(v));
    stage["accepted_combination"] = best->combination;
    stage["sigma_min"] = best->sigma_min;
    stage["sigma_second"] = best->sigma_second;
    stage["sigma_gap"] = best->sigma_gap;
    stage["realness"] = best->realness;
    stage["zero_sum"] = best->zero_sum;
    stage["blur_matrix"] = matrix_json(best->h);
    stage["p"] = std::move(p);
  } else {
    stage["accepted_combination"] = nullptr;
  }
  if (restoration) {
    stage["restore_method"] = to_string(restoration->method);
    stage["forward_residual"] = restoration->forward_residual;
    stage["min_h_on_grid"] = restoration->min_h_on_grid;
    stage["restored_size"] = json::array({restoration->image.width(), restoration->image.height()});
  }
  return stage;
}

json root_slice_json(const RootSlice& slice, double phase) {
  json roots = json::array();
  for (cplx r : slice.roots) roots.push_back(complex_json(r));
  return json{{"phase", phase},
              {"u", complex_json(slice.sample_point)},
              {"degenerate", false},
              {"degree", slice.count()},
              {"leading_coeff", complex_json(slice.leading_coeff)},
              {"clustered", slice.clustered},
              {"roots", std::move(roots)},
              {"residuals", slice.residuals}};
}

json run_report(const std::string& command, const SearchConfig& cfg, const json& stages, RunStatus status,
                const std::string& message) {
  json report{{"report_version", kReportVersion},
              {"tool_version", kToolVersion},
              {"command", command},
              {"config", to_json(cfg)},
              {"per_stage", stages},
              {"status", to_string(status)}};
  if (!message.empty()) report["message"] = message;
  return report;
}

json without_timings(json report) {
  if (report.is_object()) {
    report.erase("wall_time_ms");
    for (auto& [key, value] : report.items()) value = without_timings(std::move(value));
  } else if (report.is_array()) {
    for (auto& value : report) value = without_timings(std::move(value));
  }
  return report;
}

}  // namespace zerosheet
