#pragma once

#include <filesystem>

#include "zerosheet/image.hpp"

namespace zerosheet {

/// Reads P2 (ASCII) or P5 (binary, 1 or 2 bytes per sample) graymaps.
/// Throws PgmError with a kind distinguishing header, truncation and format problems.
Image load_pgm(const std::filesystem::path& path);

/// Writes binary P5. Samples are clamped to [0, maxval] and rounded half-up.
void save_pgm(const Image& img, const std::filesystem::path& path, unsigned maxval = 255);

/// Plain-text matrix, one image row per line, 17 significant digits.
void save_csv(const Image& img, const std::filesystem::path& path);
Image load_csv(const std::filesystem::path& path);

/// Blur CSV: first line "m,n" (width, height), then n rows of m values.
void save_blur_csv(const Image& blur, const std::filesystem::path& path);
Image load_blur_csv(const std::filesystem::path& path);

/// Dispatches on extension: ".csv" loads a CSV matrix, anything else a PGM.
Image load_image(const std::filesystem::path& path);

}  // namespace zerosheet
