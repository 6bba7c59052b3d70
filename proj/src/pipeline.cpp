#include <stdexcept>
#include <string>

#include <spdlog/spdlog.h>

#include "zerosheet/restore.hpp"

namespace zerosheet {

PipelineResult pipeline(const Image& g, const std::vector<BlurSize>& sizes, const SearchConfig& cfg,
                        Execution exec) {
  if (sizes.empty()) throw std::invalid_argument("pipeline needs at least one blur size");
  PipelineResult result;
  result.stages.reserve(sizes.size());
  const Image* current = &g;
  for (std::size_t stage = 0; stage < sizes.size(); ++stage) {
    SearchConfig stage_cfg = cfg;
    stage_cfg.blur_m = sizes[stage].m;
    stage_cfg.blur_n = sizes[stage].n;
    try {
      if (stage_cfg.blur_m > current->width() || stage_cfg.blur_n > current->height()) {
        throw std::invalid_argument("blur " + std::to_string(stage_cfg.blur_m) + "x" +
                                    std::to_string(stage_cfg.blur_n) + " exceeds the image");
      }
      result.stages.push_back(remove_blur(*current, stage_cfg, exec));
      spdlog::debug("pipeline: stage {} removed {}x{} blur", stage + 1, stage_cfg.blur_m, stage_cfg.blur_n);
    } catch (const NoBlurFound& e) {
      result.failed_stage = stage;
      result.failure = e.what();
      result.failed_report = e.report();
      return result;
    } catch (const std::exception& e) {
      result.failed_stage = stage;
      result.failure = e.what();
      return result;
    }
    current = &result.stages.back().restoration.image;
  }
  return result;
}

}  // namespace zerosheet
