#pragma once

#include <filesystem>
#include <vector>

#include "smf/image.h"

namespace smf {

/// Reads PNG (8/16-bit gray, gray+alpha, RGB, RGBA; alpha dropped) or
/// binary/ASCII PGM/PPM. Values are scaled to [0, 1] by the format maxval.
Image read_image(const std::filesystem::path& path);

/// Writes 8-bit PNG, PGM or PPM chosen by extension (.png, .pgm, .ppm).
/// Values are clamped to [0, 1] and rounded to the nearest level.
void write_image(const std::filesystem::path& path, const Image& img);

/// Regular files in `dir` with an image extension, sorted by filename.
std::vector<std::filesystem::path> list_frames(const std::filesystem::path& dir);

}  // namespace smf
