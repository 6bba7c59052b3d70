#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "support.hpp"
#include "zerosheet/image_io.hpp"

using namespace zerosheet;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path& workdir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "zerosheet_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run(const std::string& args) {
  const std::string cmd = std::string(ZEROSHEET_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

json read_json(const fs::path& p) {
  std::ifstream in(p);
  return json::parse(in);
}

std::string read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string path(const fs::path& p) { return "'" + p.string() + "'"; }

// The protocol data set, written once.
const fs::path& protocol_dir() {
  static const fs::path dir = [] {
    fs::path d = workdir() / "protocol";
    REQUIRE(run("synth --sizes 2x2,2x3,3x3 --seed 7 --output " + path(d)) == 0);
    return d;
  }();
  return dir;
}

void check_status(const json& report, const char* status, int code, int want) {
  CHECK(report["report_version"] == 1);
  CHECK(report["status"] == status);
  CHECK(code == want);
}

}  // namespace

TEST_CASE("synth writes the protocol data") {
  const fs::path d = protocol_dir();
  for (const char* f : {"true.pgm", "true.csv", "blur_1.csv", "blur_2.csv", "blur_3.csv", "convolved.pgm",
                        "convolved.csv"}) {
    CHECK(fs::exists(d / f));
  }
  Image g = load_csv(d / "convolved.csv");
  CHECK(g.width() == 44);
  CHECK(g.height() == 45);
  CHECK(g == testsupport::Protocol{}.convolved());
  CHECK(load_blur_csv(d / "blur_2.csv") == synth_blur(2, 3, 9));
}

TEST_CASE("synth without blurs and with a repeated seed") {
  const fs::path a = workdir() / "plain_a", b = workdir() / "plain_b";
  REQUIRE(run("synth --image-size 12x9 --seed 3 --output " + path(a)) == 0);
  REQUIRE(run("synth --image-size 12x9 --seed 3 --output " + path(b)) == 0);
  CHECK(load_csv(a / "convolved.csv") == load_csv(a / "true.csv"));
  for (const char* f : {"true.pgm", "true.csv", "convolved.pgm", "convolved.csv"}) {
    CHECK(read_bytes(a / f) == read_bytes(b / f));
  }
  CHECK(run("synth --image-size 0x9 --output " + path(workdir() / "bad_synth")) == 1);
}

TEST_CASE("search exit codes") {
  const fs::path d = protocol_dir();
  const fs::path ok = workdir() / "search_ok";
  int code = run("search --input " + path(d / "convolved.csv") + " --blur 2x2 --output " + path(ok));
  json report = read_json(ok / "report.json");
  check_status(report, "OK", code, 0);
  CHECK(report["command"] == "search");
  REQUIRE(report["per_stage"].size() == 1);
  const json& stage = report["per_stage"][0];
  CHECK(stage["q"] == 4);
  CHECK(stage["root_count"] == 44);
  CHECK(stage["accepted_combination"].is_array());
  CHECK(max_abs_difference(load_blur_csv(ok / "blur.csv"), testsupport::unit_sum(synth_blur(2, 2, 8))) < 1e-6);

  code = run("search --input " + path(d / "true.csv") + " --report " + path(workdir() / "neg.json"));
  json neg = read_json(workdir() / "neg.json");
  check_status(neg, "NO_BLUR_FOUND", code, 3);
  CHECK(neg["per_stage"][0]["accepted_combination"].is_null());

  {
    std::ofstream bad(workdir() / "bad.pgm", std::ios::binary);
    bad << "P5\n4 4\n255\nab";
  }
  code = run("search --input " + path(workdir() / "bad.pgm") + " --report " + path(workdir() / "bad.json"));
  json bad = read_json(workdir() / "bad.json");
  check_status(bad, "ERROR", code, 1);
  CHECK(bad["message"].get<std::string>().find("truncated") != std::string::npos);

  CHECK(run("search --input " + path(workdir() / "missing.pgm") + " --report " + path(workdir() / "m.json")) == 1);
  CHECK(run("search --no-such-flag") == 1);
  CHECK(run("search --input " + path(d / "convolved.csv") + " --blur 2by2 --report " +
            path(workdir() / "bs.json")) == 1);
}

TEST_CASE("pipeline runs the protocol and reports partial failures") {
  const fs::path d = protocol_dir();
  const fs::path out = workdir() / "pipe";
  int code = run("pipeline --input " + path(d / "convolved.csv") + " --sizes 2x2,2x3,3x3 --output " + path(out));
  json report = read_json(out / "report.json");
  check_status(report, "OK", code, 0);
  REQUIRE(report["per_stage"].size() == 3);
  CHECK(report["per_stage"][2]["restored_size"] == json::array({40, 40}));
  Image restored = load_csv(out / "restored.csv");
  CHECK(max_abs_difference(testsupport::unit_sum(restored), testsupport::unit_sum(synth_image(40, 40, 7))) < 1e-6);

  const fs::path part = workdir() / "partial";
  code = run("pipeline --input " + path(d / "convolved.csv") + " --sizes 2x2,3x4,3x3 --output " + path(part));
  json partial = read_json(part / "report.json");
  check_status(partial, "PARTIAL", code, 4);
  CHECK(fs::exists(part / "stage_1_restored.csv"));
  CHECK(fs::exists(part / "stage_1_blur.csv"));
  CHECK_FALSE(fs::exists(part / "stage_2_restored.csv"));
  REQUIRE(partial["per_stage"].size() == 2);
  CHECK(partial["per_stage"][1]["status"] == "NO_BLUR_FOUND");

  code = run("pipeline --input " + path(d / "true.csv") + " --sizes 2x2 --output " + path(workdir() / "p1"));
  check_status(read_json(workdir() / "p1" / "report.json"), "NO_BLUR_FOUND", code, 3);
}

TEST_CASE("deblur along u") {
  Image f = synth_image(30, 30, 11);
  Image h = synth_blur(3, 1, 12);
  save_csv(convolve(f, h), workdir() / "row_blurred.csv");
  const fs::path out = workdir() / "deblur_u";
  const std::string input = "--input " + path(workdir() / "row_blurred.csv") + " --blur 3x1";
  CHECK(run("deblur " + input + " --output " + path(workdir() / "deblur_v")) == 1);
  int code = run("deblur " + input + " --axis u --output " + path(out));
  json report = read_json(out / "report.json");
  check_status(report, "OK", code, 0);
  CHECK(report["config"]["axis"] == "u");
  CHECK(max_abs_difference(load_blur_csv(out / "blur.csv"), testsupport::unit_sum(h)) < 1e-6);
  CHECK(max_abs_difference(load_csv(out / "restored.csv"), f.scaled(h.sum())) < 1e-6);
}

TEST_CASE("roots dump") {
  const fs::path d = protocol_dir();
  REQUIRE(run("roots --input " + path(d / "convolved.csv") + " --points 3 --report " + path(workdir() / "r.json")) ==
          0);
  json r = read_json(workdir() / "r.json");
  CHECK(r["report_version"] == 1);
  REQUIRE(r["points"].size() == 3);
  for (const json& p : r["points"]) {
    CHECK(p["degenerate"] == false);
    CHECK(p["roots"].size() == 44);
    for (double res : p["residuals"]) CHECK(res <= 1e-9);
  }

  save_csv(Image(2, 2, 1.0), workdir() / "ones.csv");
  REQUIRE(run("roots --input " + path(workdir() / "ones.csv") + " --base-phase 3.141592653589793 --report " +
              path(workdir() / "ones.json")) == 0);
  json ones = read_json(workdir() / "ones.json");
  CHECK(ones["points"][0]["degenerate"] == true);
}

TEST_CASE("reports are identical across runs and thread counts") {
  const fs::path d = protocol_dir();
  json reports[3];
  const char* threads[] = {"1", "4", "1"};
  for (int i = 0; i < 3; ++i) {
    const fs::path p = workdir() / ("det" + std::to_string(i) + ".json");
    REQUIRE(run("pipeline --input " + path(d / "convolved.csv") + " --sizes 2x2,2x3 --threads " + threads[i] +
                " --output " + path(workdir() / ("det" + std::to_string(i))) + " --report " + path(p)) == 0);
    reports[i] = read_json(p);
    CHECK(reports[i]["per_stage"][0].contains("wall_time_ms"));
    for (json& stage : reports[i]["per_stage"]) stage.erase("wall_time_ms");
  }
  CHECK(reports[0] == reports[1]);
  CHECK(reports[0] == reports[2]);
}

TEST_CASE("config file precedence") {
  const fs::path d = protocol_dir();
  {
    std::ofstream cfg(workdir() / "run.cfg");
    cfg << "# search settings\nblur=2x3\nphase-step=0.02\ntol-null=1e-7\n";
  }
  const std::string base = "search --config " + path(workdir() / "run.cfg") + " --input " + path(d / "convolved.csv");
  REQUIRE(run(base + " --report " + path(workdir() / "c1.json")) == 0);
  json c1 = read_json(workdir() / "c1.json")["config"];
  CHECK(c1["blur_n"] == 3);
  CHECK(c1["phase_step"] == 0.02);
  CHECK(c1["tol_null"] == 1e-7);
  CHECK(c1["tol_real"] == 1e-6);
  REQUIRE(run(base + " --phase-step 0.015 --report " + path(workdir() / "c2.json")) == 0);
  json c2 = read_json(workdir() / "c2.json")["config"];
  CHECK(c2["phase_step"] == 0.015);
  CHECK(c2["blur_n"] == 3);
}
