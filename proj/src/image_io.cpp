#include "zerosheet/image_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "zerosheet/error.hpp"

namespace zerosheet {

namespace {

using Kind = PgmError::Kind;

std::string read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PgmError(Kind::kIo, "cannot open " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f'; }

// Header scanner honoring '#' comments between tokens.
class HeaderReader {
 public:
  explicit HeaderReader(const std::string& data) : data_(data) {}

  unsigned long next_number(const char* what) {
    skip_space_and_comments();
    const std::size_t start = pos_;
    while (pos_ < data_.size() && data_[pos_] >= '0' && data_[pos_] <= '9') ++pos_;
    if (start == pos_) {
      throw PgmError(Kind::kMalformedHeader, std::string("PGM header: expected ") + what);
    }
    unsigned long value = 0;
    auto [ptr, ec] = std::from_chars(data_.data() + start, data_.data() + pos_, value);
    if (ec != std::errc()) {
      throw PgmError(Kind::kMalformedHeader, std::string("PGM header: bad ") + what);
    }
    return value;
  }

  std::size_t pos() const { return pos_; }

  void skip_space_and_comments() {
    while (pos_ < data_.size()) {
      if (is_space(data_[pos_])) {
        ++pos_;
      } else if (data_[pos_] == '#') {
        while (pos_ < data_.size() && data_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

 private:
  const std::string& data_;
  std::size_t pos_ = 2;
};

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw PgmError(Kind::kIo, "cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw PgmError(Kind::kIo, "write failed for " + path.string());
}

std::vector<double> parse_csv_row(const std::string& line, const std::filesystem::path& path) {
  std::vector<double> row;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t used = 0;
      row.push_back(std::stod(cell, &used));
      if (cell.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw Error("bad CSV value '" + cell + "' in " + path.string());
    }
  }
  return row;
}

std::string format_row(const Image& img, std::size_t y) {
  std::string line;
  char buf[32];
  for (std::size_t x = 0; x < img.width(); ++x) {
    if (x) line += ',';
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, img(x, y), std::chars_format::general, 17);
    line.append(buf, ptr);
  }
  line += '\n';
  return line;
}

}  // namespace

Image load_pgm(const std::filesystem::path& path) {
  const std::string data = read_all(path);
  if (data.size() < 2 || data[0] != 'P') {
    throw PgmError(Kind::kMalformedHeader, "missing PGM magic number in " + path.string());
  }
  const char variant = data[1];
  if (variant != '2' && variant != '5') {
    throw PgmError(Kind::kUnsupportedFormat,
                   std::string("unsupported magic number P") + variant + " in " + path.string());
  }

  HeaderReader header(data);
  const unsigned long width = header.next_number("width");
  const unsigned long height = header.next_number("height");
  const unsigned long maxval = header.next_number("maxval");
  if (width == 0 || height == 0) throw PgmError(Kind::kMalformedHeader, "PGM header: zero dimension");
  if (maxval == 0 || maxval > 65535) throw PgmError(Kind::kMalformedHeader, "PGM header: maxval out of range");

  const std::size_t count = width * height;
  std::vector<double> samples(count);

  if (variant == '5') {
    std::size_t pos = header.pos();
    if (pos >= data.size() || !is_space(data[pos])) {
      throw PgmError(Kind::kMalformedHeader, "PGM header: missing separator before raster");
    }
    ++pos;
    const std::size_t bytes_per = maxval > 255 ? 2 : 1;
    if (data.size() - pos < count * bytes_per) {
      throw PgmError(Kind::kTruncatedData, "PGM raster truncated in " + path.string());
    }
    const auto* raw = reinterpret_cast<const unsigned char*>(data.data() + pos);
    for (std::size_t i = 0; i < count; ++i) {
      unsigned value = bytes_per == 2 ? (raw[2 * i] << 8) | raw[2 * i + 1] : raw[i];
      if (value > maxval) throw PgmError(Kind::kMalformedHeader, "PGM sample exceeds maxval");
      samples[i] = value;
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      header.skip_space_and_comments();
      if (header.pos() >= data.size()) {
        throw PgmError(Kind::kTruncatedData, "PGM raster truncated in " + path.string());
      }
      const unsigned long value = header.next_number("sample");
      if (value > maxval) throw PgmError(Kind::kMalformedHeader, "PGM sample exceeds maxval");
      samples[i] = static_cast<double>(value);
    }
  }
  return Image(width, height, std::move(samples));
}

void save_pgm(const Image& img, const std::filesystem::path& path, unsigned maxval) {
  if (maxval == 0 || maxval > 65535) throw PgmError(Kind::kMalformedHeader, "maxval must be in [1, 65535]");
  std::string out = "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n" +
                    std::to_string(maxval) + "\n";
  const bool wide = maxval > 255;
  for (double s : img.samples()) {
    const double clamped = std::clamp(std::floor(s + 0.5), 0.0, static_cast<double>(maxval));
    const auto value = static_cast<unsigned>(clamped);
    if (wide) out.push_back(static_cast<char>(value >> 8));
    out.push_back(static_cast<char>(value & 0xFF));
  }
  write_file(path, out);
}

void save_csv(const Image& img, const std::filesystem::path& path) {
  std::string out;
  for (std::size_t y = 0; y < img.height(); ++y) out += format_row(img, y);
  write_file(path, out);
}

Image load_csv(const std::filesystem::path& path) {
  std::istringstream in(read_all(path));
  std::vector<double> samples;
  std::size_t width = 0, height = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto row = parse_csv_row(line, path);
    if (height == 0) width = row.size();
    if (row.size() != width) throw Error("ragged CSV rows in " + path.string());
    samples.insert(samples.end(), row.begin(), row.end());
    ++height;
  }
  if (height == 0) throw Error("empty CSV image " + path.string());
  return Image(width, height, std::move(samples));
}

void save_blur_csv(const Image& blur, const std::filesystem::path& path) {
  std::string out = std::to_string(blur.width()) + "," + std::to_string(blur.height()) + "\n";
  for (std::size_t y = 0; y < blur.height(); ++y) out += format_row(blur, y);
  write_file(path, out);
}

Image load_blur_csv(const std::filesystem::path& path) {
  std::istringstream in(read_all(path));
  std::string line;
  if (!std::getline(in, line)) throw Error("empty blur CSV " + path.string());
  const auto dims = parse_csv_row(line, path);
  if (dims.size() != 2 || dims[0] < 1 || dims[1] < 1) throw Error("bad blur CSV header in " + path.string());
  const auto m = static_cast<std::size_t>(dims[0]);
  const auto n = static_cast<std::size_t>(dims[1]);
  std::vector<double> samples;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto row = parse_csv_row(line, path);
    if (row.size() != m) throw Error("blur CSV row width mismatch in " + path.string());
    samples.insert(samples.end(), row.begin(), row.end());
  }
  if (samples.size() != m * n) throw Error("blur CSV row count mismatch in " + path.string());
  return Image(m, n, std::move(samples));
}

Image load_image(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".csv" ? load_csv(path) : load_pgm(path);
}

}  // namespace zerosheet
