#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tomo/grid.hpp"

namespace tomo {

/// Reads an 8-bit grayscale PGM (P5) or PNG. The image must be square with
/// an even side. RGB(A) PNGs are converted to luminance with
/// 0.299 R + 0.587 G + 0.114 B. Throws FormatError otherwise.
ImageGrid read_image(const std::string& path);

/// Writes the grid as 8-bit grayscale, clamping to [0, 255] and rounding to
/// the nearest integer. Format chosen by extension: .pgm or .png.
/// Intensities stay floating point everywhere else in the pipeline;
/// quantization happens only here.
void write_image(const ImageGrid& img, const std::string& path);

/// 8-bit RGB PNG writer (used for error-map rendering). `rgb` is row-major,
/// 3 bytes per pixel.
void write_png_rgb8(const std::string& path, int width, int height,
                    const std::vector<std::uint8_t>& rgb);

} // namespace tomo
