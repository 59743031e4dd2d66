#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "cogalign/render.hpp"

namespace cogalign::render {

// Encode 8-bit RGB, chunk set IHDR/IDAT/IEND, filter 0 on every row, zlib
// level 6. Output bytes depend only on pixel content.
std::vector<uint8_t> encode_png(const Raster& raster);

// Decode PNGs produced by encode_png (8-bit RGB, any standard row filter).
Raster decode_png(std::span<const uint8_t> bytes);

std::vector<uint8_t> read_binary_file(const std::filesystem::path& path);
void write_binary_file(const std::filesystem::path& path,
                       std::span<const uint8_t> bytes);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace cogalign::render
