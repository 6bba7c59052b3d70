#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "zerosheet/error.hpp"
#include "zerosheet/image_io.hpp"

using namespace zerosheet;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "zerosheet_io_test";
  fs::create_directories(dir);
  return dir / name;
}

void write_bytes(const fs::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary);
  out << bytes;
}

PgmError::Kind kind_of(const fs::path& p) {
  try {
    load_pgm(p);
  } catch (const PgmError& e) {
    return e.kind();
  }
  FAIL("expected a PgmError");
  return PgmError::Kind::kIo;
}

}  // namespace

TEST_CASE("PGM round trip of an integer image") {
  Image img = Image::from_rows({{0, 17}, {200, 255}});
  save_pgm(img, scratch("rt.pgm"));
  CHECK(load_pgm(scratch("rt.pgm")) == img);
}

TEST_CASE("PGM 16-bit round trip") {
  Image img = Image::from_rows({{0, 1000, 65535}});
  save_pgm(img, scratch("rt16.pgm"), 65535);
  CHECK(load_pgm(scratch("rt16.pgm")) == img);
}

TEST_CASE("ASCII P2 with comments") {
  write_bytes(scratch("a.pgm"), "P2\n# made by hand\n3 2\n# max\n9\n1 2 3\n4 5 6\n");
  CHECK(load_pgm(scratch("a.pgm")) == Image::from_rows({{1, 2, 3}, {4, 5, 6}}));
}

TEST_CASE("save clamps and rounds") {
  save_pgm(Image::from_rows({{255.6, -3.0, 2.5, 2.49}}), scratch("clamp.pgm"));
  CHECK(load_pgm(scratch("clamp.pgm")) == Image::from_rows({{255, 0, 3, 2}}));
}

TEST_CASE("PGM error kinds") {
  write_bytes(scratch("p3.pgm"), "P3\n1 1\n255\n0 0 0\n");
  CHECK(kind_of(scratch("p3.pgm")) == PgmError::Kind::kUnsupportedFormat);
  write_bytes(scratch("trunc.pgm"), std::string("P5\n4 4\n255\n") + "abc");
  CHECK(kind_of(scratch("trunc.pgm")) == PgmError::Kind::kTruncatedData);
  write_bytes(scratch("hdr.pgm"), "P5\nfour 4\n255\n");
  CHECK(kind_of(scratch("hdr.pgm")) == PgmError::Kind::kMalformedHeader);
  write_bytes(scratch("junk.pgm"), "hello");
  CHECK(kind_of(scratch("junk.pgm")) == PgmError::Kind::kMalformedHeader);
  CHECK(kind_of(scratch("does_not_exist.pgm")) == PgmError::Kind::kIo);
}

TEST_CASE("CSV round trip is exact") {
  Image img = Image::from_rows({{0.1, -1.0 / 3.0, 1e-300}, {2.5e10, 0.0, 6.02214076e23}});
  save_csv(img, scratch("m.csv"));
  CHECK(load_csv(scratch("m.csv")) == img);
  CHECK(load_image(scratch("m.csv")) == img);
}

TEST_CASE("blur CSV carries an m,n header") {
  Image blur = Image::from_rows({{0.25, 0.125, 0.125}, {0.5, 0.0, 0.0}});
  save_blur_csv(blur, scratch("b.csv"));
  std::ifstream in(scratch("b.csv"));
  std::string first;
  std::getline(in, first);
  CHECK(first == "3,2");
  CHECK(load_blur_csv(scratch("b.csv")) == blur);
  write_bytes(scratch("bad.csv"), "2,2\n1,2\n");
  CHECK_THROWS_AS(load_blur_csv(scratch("bad.csv")), Error);
}
