#pragma once

#include <filesystem>

#include "ersr/raster.hpp"

namespace ersr {

// Raw-float map format "ERSRF32": magic bytes `ERSR`, u32 LE height,
// u32 LE width, then H*W LE 32-bit floats, row-major. Round trip of a file
// is bit-exact; in-memory doubles are quantized to f32 on write.
FloatGrid read_ersrf32(const std::filesystem::path& path);
void write_ersrf32(const FloatGrid& grid, const std::filesystem::path& path);

// 8-bit single-channel PNG. Pixel value v maps to v/255.0 on read; writes
// round(v*255) with clamping to [0,1] first.
FloatGrid read_png_gray(const std::filesystem::path& path);
void write_png_gray(const FloatGrid& grid, const std::filesystem::path& path);

// Hard masks as PNG: 0 background, 255 foreground. Read treats >= 128 as
// foreground.
BinaryMask read_mask_png(const std::filesystem::path& path);
void write_mask_png(const BinaryMask& mask, const std::filesystem::path& path);

// Extension dispatch: .ersrf32 or .png.
FloatGrid read_image(const std::filesystem::path& path);
void write_image(const FloatGrid& grid, const std::filesystem::path& path);

} // namespace ersr
