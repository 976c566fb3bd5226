#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "smf/image.h"
#include "smf/motion.h"

namespace smf {

// Binary field container, all integers little-endian:
//
//   offset  size  content
//   0       4     magic "SMF1"
//   4       4     u32 height
//   8       4     u32 width
//   12      4     u32 channels
//   16      4*N   f32 payload, row-major, channels interleaved (N = H*W*C)
//
// Heatmaps and confidence maps use C = 1, flow fields C = 2 (row, col of the
// sampled source location), region sets C = K + 1 with the background last.
//
// Text variant: a header line "SMF1T <height> <width> <channels>" followed by
// one line per row with W*C whitespace-separated values (%.17g).

std::string encode_smf(const Image& field);
Image decode_smf(std::string_view bytes);

void write_smf(const std::filesystem::path& path, const Image& field);
Image read_smf(const std::filesystem::path& path);

std::string encode_smf_text(const Image& field);
Image decode_smf_text(std::string_view text);

/// Dispatches on the leading magic: binary "SMF1" or text "SMF1T".
Image read_field(const std::filesystem::path& path);

Image to_image(const Heatmap& h);
Image to_image(const FlowField& flow);
Image to_image(const ConfidenceMap& conf);
Image to_image(const RegionSet& set);

/// One heatmap per channel.
std::vector<Heatmap> heatmaps_from_image(const Image& stack);
FlowField flow_from_image(const Image& field);
ConfidenceMap confidence_from_image(const Image& field);
/// Channels 0..K-1 are regions, channel K is the background.
RegionSet region_set_from_image(const Image& stack);

}  // namespace smf
