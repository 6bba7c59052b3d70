#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "zerosheet/error.hpp"
#include "zerosheet/image_io.hpp"
#include "zerosheet/report.hpp"
#include "zerosheet/restore.hpp"

namespace fs = std::filesystem;
using namespace zerosheet;
using nlohmann::json;

namespace {

struct Options {
  std::string input;
  std::string output;
  std::string blur = "2x2";
  std::string sizes;
  std::string image_size = "40x40";
  std::string axis = "v";
  std::string report;
  std::uint64_t seed = 7;
  int threads = 0;
  std::size_t points = 1;
  SearchConfig cfg;
};

// Failure raised after a report has been assembled.
struct RunFailure {
  RunStatus status;
  json stages;
  std::string message;
};

BlurSize parse_size(const std::string& text) {
  static const std::regex pattern(R"(\s*(\d+)\s*[xX]\s*(\d+)\s*)");
  std::smatch m;
  if (!std::regex_match(text, m, pattern)) throw CLI::ValidationError("size", "expected MxN, got '" + text + "'");
  BlurSize size{std::stoul(m[1]), std::stoul(m[2])};
  if (size.m == 0 || size.n == 0) throw CLI::ValidationError("size", "dimensions must be positive: " + text);
  return size;
}

std::vector<BlurSize> parse_sizes(const std::string& text) {
  std::vector<BlurSize> sizes;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    const std::string item = text.substr(start, comma - start);
    if (item.find_first_not_of(" \t") != std::string::npos) sizes.push_back(parse_size(item));
    start = comma + 1;
  }
  return sizes;
}

void configure_logging() {
  auto logger = spdlog::stderr_logger_mt("zerosheet");
  logger->set_pattern("[%l] %v");
  spdlog::set_default_logger(logger);
  const char* env = std::getenv("ZEROSHEET_LOG");
  const std::string level = env ? env : "off";
  if (level == "debug") {
    spdlog::set_level(spdlog::level::debug);
  } else if (level == "info") {
    spdlog::set_level(spdlog::level::info);
  } else {
    spdlog::set_level(spdlog::level::off);
    if (level != "off") std::cerr << "warning: ZEROSHEET_LOG must be off, info or debug; logging disabled\n";
  }
}

void write_json(const json& doc, const Options& opt, const std::string& default_name) {
  fs::path path;
  if (!opt.report.empty()) {
    path = opt.report;
  } else if (!opt.output.empty()) {
    path = fs::path(opt.output) / default_name;
  } else {
    std::cout << doc.dump(2) << '\n';
    return;
  }
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  out << doc.dump(2) << '\n';
  if (!out) throw Error("cannot write report " + path.string());
  spdlog::info("report written to {}", path.string());
}

fs::path output_dir(const Options& opt) {
  fs::path dir = opt.output.empty() ? fs::path(".") : fs::path(opt.output);
  fs::create_directories(dir);
  return dir;
}

// PGM preview: maxval grows with the data so nothing clips; CSV keeps full precision.
void save_preview(const Image& img, const fs::path& path) {
  double top = 0.0;
  for (double s : img.samples()) top = std::max(top, s);
  const double maxval = std::clamp(std::ceil(top), 255.0, 65535.0);
  save_pgm(img, path, static_cast<unsigned>(maxval));
}

void save_image(const Image& img, const fs::path& stem) {
  save_preview(img, stem.string() + ".pgm");
  save_csv(img, stem.string() + ".csv");
}

Image load_input(const Options& opt) {
  if (opt.input.empty()) throw CLI::RequiredError("--input");
  spdlog::info("loading {}", opt.input);
  return load_image(opt.input);
}

json stage_entry(const Removal& removal) {
  json s = stage_json(removal.report, &removal.restoration, removal.wall_time_ms);
  s["status"] = to_string(RunStatus::kOk);
  return s;
}

json failed_entry(const SearchReport* report, RunStatus status, const std::string& message) {
  json s = report ? stage_json(*report, nullptr, 0.0) : json::object();
  s["status"] = to_string(status);
  s["message"] = message;
  return s;
}

int cmd_synth(const Options& opt) {
  const BlurSize dims = parse_size(opt.image_size);
  const std::vector<BlurSize> blurs = parse_sizes(opt.sizes);
  const fs::path dir = output_dir(opt);
  Image img = synth_image(dims.m, dims.n, opt.seed);
  save_image(img, dir / "true");
  std::cout << "true image " << img.width() << "x" << img.height() << '\n';
  for (std::size_t i = 0; i < blurs.size(); ++i) {
    const Image blur = synth_blur(blurs[i].m, blurs[i].n, opt.seed + 1 + i);
    save_blur_csv(blur, dir / ("blur_" + std::to_string(i + 1) + ".csv"));
    img = convolve(img, blur);
    std::cout << "after blur " << i + 1 << " (" << blurs[i].m << "x" << blurs[i].n << "): " << img.width() << "x"
              << img.height() << '\n';
  }
  save_image(img, dir / "convolved");
  std::cout << "convolved image " << img.width() << "x" << img.height() << '\n';
  return exit_code(RunStatus::kOk);
}

json run_search(const Options& opt, const SearchConfig& cfg) {
  const Image g = load_input(opt);
  const auto start = std::chrono::steady_clock::now();
  const SearchReport report = search_blur(ztransform(g), cfg);
  const std::chrono::duration<double, std::milli> elapsed = std::chrono::steady_clock::now() - start;
  json stage = stage_json(report, nullptr, elapsed.count());
  if (const BlurCandidate* best = report.best_candidate()) {
    stage["status"] = to_string(RunStatus::kOk);
    if (!opt.output.empty()) save_blur_csv(best->h, output_dir(opt) / "blur.csv");
    return json::array({stage});
  }
  stage["status"] = to_string(RunStatus::kNoBlurFound);
  throw RunFailure{RunStatus::kNoBlurFound, json::array({stage}), "no blur of the requested size was found"};
}

json run_deblur(const Options& opt, const SearchConfig& cfg) {
  const Image g = load_input(opt);
  try {
    const Removal r = remove_blur(g, cfg);
    const fs::path dir = output_dir(opt);
    save_blur_csv(r.blur.h, dir / "blur.csv");
    save_image(r.restoration.image, dir / "restored");
    return json::array({stage_entry(r)});
  } catch (const NoBlurFound& e) {
    throw RunFailure{RunStatus::kNoBlurFound, json::array({failed_entry(&e.report(), RunStatus::kNoBlurFound, e.what())}),
                     e.what()};
  }
}

json run_pipeline(const Options& opt, const SearchConfig& cfg) {
  const Image g = load_input(opt);
  const std::vector<BlurSize> sizes = parse_sizes(opt.sizes);
  if (sizes.empty()) throw CLI::ValidationError("--sizes", "pipeline needs at least one blur size");
  const PipelineResult result = pipeline(g, sizes, cfg);
  const fs::path dir = output_dir(opt);
  json stages = json::array();
  for (std::size_t s = 0; s < result.stages.size(); ++s) {
    const Removal& r = result.stages[s];
    const std::string stem = "stage_" + std::to_string(s + 1);
    save_blur_csv(r.blur.h, dir / (stem + "_blur.csv"));
    save_image(r.restoration.image, dir / (stem + "_restored"));
    stages.push_back(stage_entry(r));
  }
  if (result.complete()) {
    save_image(result.stages.back().restoration.image, dir / "restored");
    return stages;
  }
  const RunStatus stage_status = result.failed_report ? RunStatus::kNoBlurFound : RunStatus::kError;
  stages.push_back(failed_entry(result.failed_report ? &*result.failed_report : nullptr, stage_status, result.failure));
  const std::string message = "stage " + std::to_string(*result.failed_stage + 1) + ": " + result.failure;
  if (*result.failed_stage > 0) throw RunFailure{RunStatus::kPartial, stages, message};
  throw RunFailure{stage_status, stages, message};
}

int cmd_roots(const Options& opt) {
  const Image g = load_input(opt);
  const BivariatePoly poly = ztransform(g);
  json points = json::array();
  for (std::size_t j = 0; j < opt.points; ++j) {
    const double phase = opt.cfg.base_phase + static_cast<double>(j) * opt.cfg.phase_step;
    const cplx u = std::polar(1.0, phase);
    try {
      points.push_back(root_slice_json(solve_slice(poly, u, opt.cfg.roots), phase));
    } catch (const DegenerateSlice& e) {
      points.push_back(json{{"phase", phase}, {"u", {u.real(), u.imag()}}, {"degenerate", true}, {"message", e.what()}});
    } catch (const RootFindingFailure& e) {
      points.push_back(json{{"phase", phase}, {"u", {u.real(), u.imag()}}, {"degenerate", false},
                            {"root_failure", true}, {"message", e.what()}});
    }
  }
  json doc{{"report_version", kReportVersion},
           {"tool_version", kToolVersion},
           {"command", "roots"},
           {"config", to_json(opt.cfg)},
           {"image_size", {g.width(), g.height()}},
           {"points", std::move(points)},
           {"status", to_string(RunStatus::kOk)}};
  write_json(doc, opt, "roots.json");
  return exit_code(RunStatus::kOk);
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();
  Options opt;

  CLI::App app{"Blind blur identification and removal through zero sheets of the image z-transform."};
  app.set_config("--config", "", "key=value file; command-line flags take precedence");
  app.require_subcommand(1);

  app.add_option("--input", opt.input, "input image (PGM, or CSV by extension)");
  app.add_option("--output", opt.output, "output directory");
  app.add_option("--blur", opt.blur, "blur size MxN (width x height)")->capture_default_str();
  app.add_option("--sizes", opt.sizes, "comma-separated blur sizes, e.g. 2x2,2x3,3x3");
  app.add_option("--image-size", opt.image_size, "synthetic image size")->capture_default_str();
  app.add_option("--axis", opt.axis, "root axis")->check(CLI::IsMember({"u", "v"}))->capture_default_str();
  app.add_option("--base-phase", opt.cfg.base_phase, "phase of the first sample point")->capture_default_str();
  app.add_option("--phase-step", opt.cfg.phase_step, "continuation step in radians")->capture_default_str();
  app.add_option("--sample-spacing", opt.cfg.sample_spacing, "phase between sample points, 0 = 2 pi / q")
      ->capture_default_str();
  app.add_option("--tol-null", opt.cfg.tol_null, "sigma gap acceptance threshold")->capture_default_str();
  app.add_option("--tol-real", opt.cfg.tol_real, "realness acceptance threshold")->capture_default_str();
  app.add_option("--tol-root", opt.cfg.roots.tol_root, "root residual bound")->capture_default_str();
  app.add_option("--tol-track", opt.cfg.tol_track_ratio, "tracking ambiguity ratio")->capture_default_str();
  app.add_option("--max-combinations", opt.cfg.max_combinations, "cap on enumerated root combinations")
      ->capture_default_str();
  app.add_option("--max-halvings", opt.cfg.max_halvings, "continuation step halvings")->capture_default_str();
  app.add_flag("--early-stop", opt.cfg.early_stop, "stop at the first accepted combination");
  app.add_option("--seed", opt.seed, "synthesis seed")->capture_default_str();
  app.add_option("--threads", opt.threads, "worker threads, 0 = OpenMP default")->check(CLI::NonNegativeNumber);
  app.add_option("--points", opt.points, "number of slices for the roots command")->check(CLI::PositiveNumber);
  app.add_option("--report", opt.report, "JSON report path");

  auto* synth = app.add_subcommand("synth", "write a synthetic image, blurs and their convolution");
  auto* search = app.add_subcommand("search", "search for one blur factor");
  auto* deblur = app.add_subcommand("deblur", "search for one blur factor and remove it");
  auto* pipe = app.add_subcommand("pipeline", "remove a list of blur factors in order");
  auto* roots = app.add_subcommand("roots", "dump slice roots and residuals");
  for (auto* sub : {synth, search, deblur, pipe, roots}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : exit_code(RunStatus::kError);
  }

  const std::string command = app.get_subcommands().front()->get_name();
  opt.cfg.axis = opt.axis == "u" ? Axis::kU : Axis::kV;
  if (opt.threads > 0) omp_set_num_threads(opt.threads);
  spdlog::info("{}: threads {}", command, omp_get_max_threads());

  json stages = json::array();
  RunStatus status = RunStatus::kOk;
  std::string message;
  json config_echo = to_json(opt.cfg);
  try {
    if (command == "search" || command == "deblur") {
      const BlurSize size = parse_size(opt.blur);
      opt.cfg.blur_m = size.m;
      opt.cfg.blur_n = size.n;
      config_echo = to_json(opt.cfg);
    } else if (command == "pipeline") {
      json sizes = json::array();
      for (const BlurSize& s : parse_sizes(opt.sizes)) sizes.push_back({s.m, s.n});
      config_echo.erase("blur_m");
      config_echo.erase("blur_n");
      config_echo["sizes"] = std::move(sizes);
    }
    if (command == "synth") return cmd_synth(opt);
    if (command == "roots") return cmd_roots(opt);
    if (command == "search") {
      stages = run_search(opt, opt.cfg);
    } else if (command == "deblur") {
      stages = run_deblur(opt, opt.cfg);
    } else {
      stages = run_pipeline(opt, opt.cfg);
    }
  } catch (const RunFailure& f) {
    status = f.status;
    stages = f.stages;
    message = f.message;
  } catch (const std::exception& e) {
    status = RunStatus::kError;
    message = e.what();
  }
  if (status != RunStatus::kOk) std::cerr << "zerosheet " << command << ": " << message << '\n';

  try {
    json report = run_report(command, opt.cfg, stages, status, message);
    report["config"] = std::move(config_echo);
    write_json(report, opt, "report.json");
  } catch (const std::exception& e) {
    std::cerr << "zerosheet: " << e.what() << '\n';
    return exit_code(RunStatus::kError);
  }
  return exit_code(status);
}
