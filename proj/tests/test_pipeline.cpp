#include <doctest.h>

#include "support.hpp"
#include "zerosheet/restore.hpp"

using namespace zerosheet;

TEST_CASE("three-stage protocol") {
  testsupport::Protocol p;
  Image g = p.convolved();
  PipelineResult r = pipeline(g, {{2, 2}, {2, 3}, {3, 3}}, SearchConfig{});
  REQUIRE(r.complete());
  REQUIRE(r.stages.size() == 3);
  const std::size_t sizes[][2] = {{43, 44}, {42, 42}, {40, 40}};
  for (std::size_t s = 0; s < 3; ++s) {
    CHECK(r.stages[s].restoration.image.width() == sizes[s][0]);
    CHECK(r.stages[s].restoration.image.height() == sizes[s][1]);
    CHECK(max_abs_difference(r.stages[s].blur.h, testsupport::unit_sum(p.blurs[s])) < 1e-6);
  }
  CHECK(r.stages[0].report.q == 4);
  CHECK(r.stages[1].report.q == 3);
  CHECK(r.stages[2].report.q == 5);
  CHECK(r.stages[0].report.combinations_total == 44);
  CHECK(max_abs_difference(testsupport::unit_sum(r.stages[2].restoration.image), testsupport::unit_sum(p.original)) <
        1e-6);
}

TEST_CASE("single-stage pipeline matches remove_blur") {
  Image g = convolve(synth_image(30, 30, 3), synth_blur(2, 2, 4));
  PipelineResult r = pipeline(g, {{2, 2}}, SearchConfig{});
  Removal direct = remove_blur(g, SearchConfig{});
  REQUIRE(r.complete());
  CHECK(r.stages[0].restoration.image == direct.restoration.image);
  CHECK(r.stages[0].blur.h == direct.blur.h);
}

TEST_CASE("a wrong middle size stops the pipeline") {
  Image g = convolve(convolve(synth_image(24, 24, 3), synth_blur(2, 2, 4)), synth_blur(2, 3, 5));
  PipelineResult r = pipeline(g, {{2, 3}, {3, 4}, {2, 2}}, SearchConfig{});
  CHECK_FALSE(r.complete());
  REQUIRE(r.failed_stage);
  CHECK(*r.failed_stage == 1);
  CHECK(r.stages.size() == 1);
  REQUIRE(r.failed_report);
  CHECK_FALSE(r.failed_report->best_candidate());
}

TEST_CASE("blur order does not matter") {
  Image h1 = synth_blur(2, 2, 21), h2 = synth_blur(3, 2, 22);
  Image f = synth_image(12, 12, 20);
  Image g = convolve(convolve(f, h1), h2);
  for (auto sizes : {std::vector<BlurSize>{{2, 2}, {3, 2}}, std::vector<BlurSize>{{3, 2}, {2, 2}}}) {
    PipelineResult r = pipeline(g, sizes, SearchConfig{});
    REQUIRE(r.complete());
    CHECK(max_abs_difference(testsupport::unit_sum(r.stages.back().restoration.image), testsupport::unit_sum(f)) <
          1e-6);
  }
}

TEST_CASE("empty and oversized size lists") {
  CHECK_THROWS_AS(pipeline(Image(5, 5, 1.0), {}, SearchConfig{}), std::invalid_argument);
  PipelineResult r = pipeline(Image(3, 3, 1.0), {{4, 4}}, SearchConfig{});
  CHECK(r.failed_stage == std::optional<std::size_t>(0));
}
