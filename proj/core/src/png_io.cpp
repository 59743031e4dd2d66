#include "cogalign/png_io.hpp"

#include <zlib.h>

#include <cstring>
#include <fstream>

#include "cogalign/error.hpp"

namespace cogalign::render {

namespace {

constexpr uint8_t kSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
  out.push_back(static_cast<uint8_t>(v >> 24));
  out.push_back(static_cast<uint8_t>(v >> 16));
  out.push_back(static_cast<uint8_t>(v >> 8));
  out.push_back(static_cast<uint8_t>(v));
}

uint32_t get_u32(const uint8_t* p) {
  return (static_cast<uint32_t>(p[0]) << 24) | (static_cast<uint32_t>(p[1]) << 16) |
         (static_cast<uint32_t>(p[2]) << 8) | static_cast<uint32_t>(p[3]);
}

void append_chunk(std::vector<uint8_t>& out, const char type[4],
                  const uint8_t* data, size_t len) {
  put_u32(out, static_cast<uint32_t>(len));
  const size_t type_at = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), data, data + len);
  const uLong crc =
      crc32(0L, out.data() + type_at, static_cast<uInt>(4 + len));
  put_u32(out, static_cast<uint32_t>(crc));
}

std::vector<uint8_t> zlib_compress(const std::vector<uint8_t>& raw) {
  uLongf bound = compressBound(static_cast<uLong>(raw.size()));
  std::vector<uint8_t> out(bound);
  const int rc = compress2(out.data(), &bound, raw.data(),
                           static_cast<uLong>(raw.size()), 6);
  if (rc != Z_OK) throw IoError("zlib compression failed");
  out.resize(bound);
  return out;
}

std::vector<uint8_t> zlib_decompress(const uint8_t* data, size_t len,
                                     size_t expected) {
  std::vector<uint8_t> out(expected);
  uLongf out_len = static_cast<uLongf>(expected);
  const int rc = uncompress(out.data(), &out_len, data, static_cast<uLong>(len));
  if (rc != Z_OK || out_len != expected)
    throw IoError("zlib decompression failed");
  return out;
}

uint8_t paeth(uint8_t a, uint8_t b, uint8_t c) {
  const int p = static_cast<int>(a) + b - c;
  const int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
  if (pa <= pb && pa <= pc) return a;
  if (pb <= pc) return b;
  return c;
}

}  // namespace

std::vector<uint8_t> encode_png(const Raster& raster) {
  if (raster.width <= 0 || raster.height <= 0 ||
      raster.rgb.size() !=
          static_cast<size_t>(raster.width) * raster.height * 3)
    throw DomainError("raster dimensions do not match buffer");

  const size_t stride = static_cast<size_t>(raster.width) * 3;
  std::vector<uint8_t> raw;
  raw.reserve((stride + 1) * raster.height);
  for (int y = 0; y < raster.height; ++y) {
    raw.push_back(0);  // filter type 0 on every row
    const uint8_t* row = raster.rgb.data() + y * stride;
    raw.insert(raw.end(), row, row + stride);
  }
  const std::vector<uint8_t> idat = zlib_compress(raw);

  std::vector<uint8_t> out;
  out.insert(out.end(), kSignature, kSignature + 8);
  uint8_t ihdr[13];
  ihdr[0] = static_cast<uint8_t>(raster.width >> 24);
  ihdr[1] = static_cast<uint8_t>(raster.width >> 16);
  ihdr[2] = static_cast<uint8_t>(raster.width >> 8);
  ihdr[3] = static_cast<uint8_t>(raster.width);
  ihdr[4] = static_cast<uint8_t>(raster.height >> 24);
  ihdr[5] = static_cast<uint8_t>(raster.height >> 16);
  ihdr[6] = static_cast<uint8_t>(raster.height >> 8);
  ihdr[7] = static_cast<uint8_t>(raster.height);
  ihdr[8] = 8;   // bit depth
  ihdr[9] = 2;   // color type: truecolor RGB
  ihdr[10] = 0;  // compression
  ihdr[11] = 0;  // filter method
  ihdr[12] = 0;  // no interlace
  append_chunk(out, "IHDR", ihdr, sizeof(ihdr));
  append_chunk(out, "IDAT", idat.data(), idat.size());
  append_chunk(out, "IEND", nullptr, 0);
  return out;
}

Raster decode_png(std::span<const uint8_t> bytes) {
  if (bytes.size() < 8 || std::memcmp(bytes.data(), kSignature, 8) != 0)
    throw IoError("not a PNG file");

  int width = 0, height = 0;
  std::vector<uint8_t> idat;
  size_t at = 8;
  bool saw_ihdr = false;
  while (at + 8 <= bytes.size()) {
    const uint32_t len = get_u32(bytes.data() + at);
    if (at + 12 + len > bytes.size()) throw IoError("truncated PNG chunk");
    const char* type = reinterpret_cast<const char*>(bytes.data() + at + 4);
    const uint8_t* data = bytes.data() + at + 8;
    if (std::memcmp(type, "IHDR", 4) == 0) {
      if (len != 13) throw IoError("bad IHDR");
      width = static_cast<int>(get_u32(data));
      height = static_cast<int>(get_u32(data + 4));
      if (data[8] != 8 || data[9] != 2 || data[10] != 0 || data[11] != 0 ||
          data[12] != 0)
        throw IoError("unsupported PNG format (need 8-bit RGB)");
      saw_ihdr = true;
    } else if (std::memcmp(type, "IDAT", 4) == 0) {
      idat.insert(idat.end(), data, data + len);
    } else if (std::memcmp(type, "IEND", 4) == 0) {
      break;
    }
    at += 12 + len;
  }
  if (!saw_ihdr || width <= 0 || height <= 0)
    throw IoError("missing or invalid IHDR");

  const size_t stride = static_cast<size_t>(width) * 3;
  const std::vector<uint8_t> raw =
      zlib_decompress(idat.data(), idat.size(), (stride + 1) * height);

  Raster out;
  out.width = width;
  out.height = height;
  out.rgb.assign(stride * height, 0);
  std::vector<uint8_t> prev(stride, 0);
  for (int y = 0; y < height; ++y) {
    const uint8_t filter = raw[y * (stride + 1)];
    const uint8_t* src = raw.data() + y * (stride + 1) + 1;
    uint8_t* dst = out.rgb.data() + y * stride;
    for (size_t i = 0; i < stride; ++i) {
      const uint8_t a = i >= 3 ? dst[i - 3] : 0;
      const uint8_t b = prev[i];
      const uint8_t c = i >= 3 ? prev[i - 3] : 0;
      switch (filter) {
        case 0: dst[i] = src[i]; break;
        case 1: dst[i] = static_cast<uint8_t>(src[i] + a); break;
        case 2: dst[i] = static_cast<uint8_t>(src[i] + b); break;
        case 3: dst[i] = static_cast<uint8_t>(src[i] + (a + b) / 2); break;
        case 4: dst[i] = static_cast<uint8_t>(src[i] + paeth(a, b, c)); break;
        default: throw IoError("unknown PNG row filter");
      }
    }
    std::memcpy(prev.data(), dst, stride);
  }
  return out;
}

std::vector<uint8_t> read_binary_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path.string());
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  return bytes;
}

void write_binary_file(const std::filesystem::path& path,
                       std::span<const uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write file: " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write file: " + path.string());
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace cogalign::render
