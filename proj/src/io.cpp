#include "ersr/io.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>
#include <memory>
#include <vector>

namespace ersr {
namespace {

constexpr char kMagic[4] = {'E', 'R', 'S', 'R'};
constexpr std::uint32_t kMaxDim = 1u << 20;

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
    FilePtr f(std::fopen(path.string().c_str(), mode));
    if (!f) throw IoError("cannot open '" + path.string() + "'");
    return f;
}

std::uint32_t read_u32le(std::FILE* f, const std::filesystem::path& path) {
    unsigned char b[4];
    if (std::fread(b, 1, 4, f) != 4) throw IoError("truncated header in '" + path.string() + "'");
    return std::uint32_t(b[0]) | std::uint32_t(b[1]) << 8 | std::uint32_t(b[2]) << 16 |
           std::uint32_t(b[3]) << 24;
}

void write_u32le(std::FILE* f, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    std::fwrite(b, 1, 4, f);
}

float f32_from_le(const unsigned char* b) {
    std::uint32_t u = std::uint32_t(b[0]) | std::uint32_t(b[1]) << 8 | std::uint32_t(b[2]) << 16 |
                      std::uint32_t(b[3]) << 24;
    float f;
    std::memcpy(&f, &u, 4);
    return f;
}

void f32_to_le(float f, unsigned char* b) {
    std::uint32_t u;
    std::memcpy(&u, &f, 4);
    b[0] = static_cast<unsigned char>(u);
    b[1] = static_cast<unsigned char>(u >> 8);
    b[2] = static_cast<unsigned char>(u >> 16);
    b[3] = static_cast<unsigned char>(u >> 24);
}

[[noreturn]] void png_error_fn(png_structp png, png_const_charp msg) {
    throw IoError(std::string("png: ") + msg);
    (void)png;
}

void png_warn_fn(png_structp, png_const_charp) {}

std::vector<std::uint8_t> read_png_bytes(const std::filesystem::path& path, int& h, int& w) {
    auto f = open_file(path, "rb");
    unsigned char sig[8];
    if (std::fread(sig, 1, 8, f.get()) != 8 || png_sig_cmp(sig, 0, 8))
        throw IoError("'" + path.string() + "' is not a PNG file");

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_fn, png_warn_fn);
    if (!png) throw IoError("png_create_read_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw IoError("png_create_info_struct failed");
    }
    try {
        png_init_io(png, f.get());
        png_set_sig_bytes(png, 8);
        png_read_info(png, info);

        const png_uint_32 width = png_get_image_width(png, info);
        const png_uint_32 height = png_get_image_height(png, info);
        const int color = png_get_color_type(png, info);
        const int depth = png_get_bit_depth(png, info);
        if (color != PNG_COLOR_TYPE_GRAY)
            throw IoError("'" + path.string() + "': expected single-channel grayscale PNG");
        if (height < 1 || width < 1 || height > kMaxDim || width > kMaxDim)
            throw IoError("'" + path.string() + "': bad dimensions");
        if (depth < 8) png_set_expand_gray_1_2_4_to_8(png);
        if (depth == 16) png_set_strip_16(png);
        png_read_update_info(png, info);

        h = static_cast<int>(height);
        w = static_cast<int>(width);
        std::vector<std::uint8_t> pixels(static_cast<std::size_t>(h) * w);
        std::vector<png_bytep> rows(height);
        for (png_uint_32 r = 0; r < height; ++r) rows[r] = pixels.data() + std::size_t(r) * w;
        png_read_image(png, rows.data());
        png_read_end(png, nullptr);
        png_destroy_read_struct(&png, &info, nullptr);
        return pixels;
    } catch (...) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw;
    }
}

void write_png_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& pixels,
                     int h, int w) {
    auto f = open_file(path, "wb");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_fn, png_warn_fn);
    if (!png) throw IoError("png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("png_create_info_struct failed");
    }
    try {
        png_init_io(png, f.get());
        png_set_IHDR(png, info, static_cast<png_uint_32>(w), static_cast<png_uint_32>(h), 8,
                     PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                     PNG_FILTER_TYPE_DEFAULT);
        png_write_info(png, info);
        std::vector<png_bytep> rows(static_cast<std::size_t>(h));
        for (int r = 0; r < h; ++r)
            rows[static_cast<std::size_t>(r)] = const_cast<png_bytep>(pixels.data() + std::size_t(r) * w);
        png_write_image(png, rows.data());
        png_write_end(png, nullptr);
        png_destroy_write_struct(&png, &info);
    } catch (...) {
        png_destroy_write_struct(&png, &info);
        throw;
    }
}

} // namespace

FloatGrid read_ersrf32(const std::filesystem::path& path) {
    auto f = open_file(path, "rb");
    char magic[4];
    if (std::fread(magic, 1, 4, f.get()) != 4 || std::memcmp(magic, kMagic, 4) != 0)
        throw IoError("'" + path.string() + "' is not an ERSRF32 file (bad magic)");
    const std::uint32_t h = read_u32le(f.get(), path);
    const std::uint32_t w = read_u32le(f.get(), path);
    if (h < 1 || w < 1 || h > kMaxDim || w > kMaxDim)
        throw IoError("'" + path.string() + "': dimensions " + std::to_string(h) + "x" +
                      std::to_string(w) + " out of range");
    const std::size_t n = std::size_t(h) * w;
    std::vector<unsigned char> raw(n * 4);
    if (std::fread(raw.data(), 1, raw.size(), f.get()) != raw.size())
        throw IoError("'" + path.string() + "': truncated pixel data");
    FloatGrid g(static_cast<int>(h), static_cast<int>(w));
    for (std::size_t i = 0; i < n; ++i) {
        const float v = f32_from_le(raw.data() + i * 4);
        if (!std::isfinite(v))
            throw IoError("'" + path.string() + "': non-finite value at index " + std::to_string(i));
        g.data[i] = v;
    }
    return g;
}

void write_ersrf32(const FloatGrid& grid, const std::filesystem::path& path) {
    auto f = open_file(path, "wb");
    std::fwrite(kMagic, 1, 4, f.get());
    write_u32le(f.get(), static_cast<std::uint32_t>(grid.height));
    write_u32le(f.get(), static_cast<std::uint32_t>(grid.width));
    std::vector<unsigned char> raw(grid.data.size() * 4);
    for (std::size_t i = 0; i < grid.data.size(); ++i)
        f32_to_le(static_cast<float>(grid.data[i]), raw.data() + i * 4);
    if (std::fwrite(raw.data(), 1, raw.size(), f.get()) != raw.size())
        throw IoError("short write to '" + path.string() + "'");
}

FloatGrid read_png_gray(const std::filesystem::path& path) {
    int h = 0, w = 0;
    const auto pixels = read_png_bytes(path, h, w);
    FloatGrid g(h, w);
    for (std::size_t i = 0; i < pixels.size(); ++i) g.data[i] = pixels[i] / 255.0;
    return g;
}

void write_png_gray(const FloatGrid& grid, const std::filesystem::path& path) {
    std::vector<std::uint8_t> pixels(grid.data.size());
    for (std::size_t i = 0; i < grid.data.size(); ++i) {
        const double v = std::clamp(grid.data[i], 0.0, 1.0);
        pixels[i] = static_cast<std::uint8_t>(std::lround(v * 255.0));
    }
    write_png_bytes(path, pixels, grid.height, grid.width);
}

BinaryMask read_mask_png(const std::filesystem::path& path) {
    int h = 0, w = 0;
    const auto pixels = read_png_bytes(path, h, w);
    BinaryMask m(h, w);
    for (std::size_t i = 0; i < pixels.size(); ++i) m.data[i] = pixels[i] >= 128 ? 1 : 0;
    return m;
}

void write_mask_png(const BinaryMask& mask, const std::filesystem::path& path) {
    std::vector<std::uint8_t> pixels(mask.data.size());
    for (std::size_t i = 0; i < mask.data.size(); ++i) pixels[i] = mask.data[i] ? 255 : 0;
    write_png_bytes(path, pixels, mask.height, mask.width);
}

FloatGrid read_image(const std::filesystem::path& path) {
    const auto ext = path.extension().string();
    if (ext == ".ersrf32") return read_ersrf32(path);
    if (ext == ".png") return read_png_gray(path);
    throw IoError("'" + path.string() + "': unsupported extension (want .ersrf32 or .png)");
}

void write_image(const FloatGrid& grid, const std::filesystem::path& path) {
    const auto ext = path.extension().string();
    if (ext == ".ersrf32") return write_ersrf32(grid, path);
    if (ext == ".png") return write_png_gray(grid, path);
    throw IoError("'" + path.string() + "': unsupported extension (want .ersrf32 or .png)");
}

} // namespace ersr
