#include "tomo/image_io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <memory>

#include <png.h>

#include "tomo/errors.hpp"

namespace tomo {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f)
            std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::string& path, const char* mode) {
    FilePtr f(std::fopen(path.c_str(), mode));
    if (!f)
        throw FormatError("cannot open '" + path + "'");
    return f;
}

ImageGrid grid_from_gray(const std::vector<std::uint8_t>& gray, int w, int h) {
    if (w != h)
        throw FormatError("non-square image (" + std::to_string(w) + "x" + std::to_string(h) + ") unsupported");
    if (w % 2 != 0)
        throw FormatError("odd dimensions unsupported (" + std::to_string(w) + ")");
    ImageGrid img(w);
    for (std::size_t i = 0; i < gray.size(); ++i)
        img.data()[i] = static_cast<double>(gray[i]);
    return img;
}

std::vector<std::uint8_t> quantize(const ImageGrid& img) {
    std::vector<std::uint8_t> out(img.pixel_count());
    for (std::size_t i = 0; i < out.size(); ++i) {
        double v = img.data()[i];
        if (!(v > 0.0))
            v = 0.0;
        if (v > 255.0)
            v = 255.0;
        out[i] = static_cast<std::uint8_t>(std::lround(v));
    }
    return out;
}

// ---- PGM (P5, maxval 255) ----

int next_pgm_token(std::FILE* f) {
    // skip whitespace and '#' comment lines, then parse an unsigned int
    int c = std::fgetc(f);
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n')
                c = std::fgetc(f);
        } else if (!std::isspace(c)) {
            break;
        }
        c = std::fgetc(f);
    }
    if (c == EOF || !std::isdigit(c))
        throw FormatError("malformed PGM header");
    int v = 0;
    while (c != EOF && std::isdigit(c)) {
        v = v * 10 + (c - '0');
        if (v > 1 << 20)
            throw FormatError("malformed PGM header");
        c = std::fgetc(f);
    }
    return v;
}

ImageGrid read_pgm(std::FILE* f) {
    int w = next_pgm_token(f);
    int h = next_pgm_token(f);
    int maxval = next_pgm_token(f);
    if (maxval != 255)
        throw FormatError("PGM maxval must be 255, got " + std::to_string(maxval));
    std::vector<std::uint8_t> gray(static_cast<std::size_t>(w) * h);
    if (std::fread(gray.data(), 1, gray.size(), f) != gray.size())
        throw FormatError("truncated PGM data");
    return grid_from_gray(gray, w, h);
}

void write_pgm(const ImageGrid& img, const std::string& path) {
    FilePtr f = open_file(path, "wb");
    std::fprintf(f.get(), "P5\n%d %d\n255\n", img.size(), img.size());
    auto bytes = quantize(img);
    if (std::fwrite(bytes.data(), 1, bytes.size(), f.get()) != bytes.size())
        throw FormatError("short write to '" + path + "'");
}

// ---- PNG ----

ImageGrid read_png(std::FILE* f, const std::string& path) {
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw FormatError("libpng init failed");
    }
    std::vector<std::uint8_t> interleaved;
    int w = 0, h = 0, channels = 0;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw FormatError("corrupt PNG '" + path + "'");
    }
    png_init_io(png, f);
    png_read_info(png, info);
    w = png_get_image_width(png, info);
    h = png_get_image_height(png, info);
    int depth = png_get_bit_depth(png, info);
    int color = png_get_color_type(png, info);
    if (depth == 16) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw FormatError("16-bit PNG unsupported");
    }
    if (color == PNG_COLOR_TYPE_PALETTE)
        png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8)
        png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS))
        png_set_tRNS_to_alpha(png);
    png_read_update_info(png, info);
    channels = png_get_channels(png, info);
    std::size_t rowbytes = png_get_rowbytes(png, info);
    interleaved.resize(rowbytes * h);
    std::vector<png_bytep> rows(h);
    for (int y = 0; y < h; ++y)
        rows[y] = interleaved.data() + rowbytes * y;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    std::vector<std::uint8_t> gray(static_cast<std::size_t>(w) * h);
    for (std::size_t i = 0; i < gray.size(); ++i) {
        const std::uint8_t* p = interleaved.data() + i * channels;
        double v;
        switch (channels) {
        case 1:
        case 2: // gray or gray+alpha; alpha ignored
            v = p[0];
            break;
        case 3:
        case 4: // luminance conversion, alpha ignored
            v = 0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2];
            break;
        default:
            throw FormatError("unsupported PNG channel count");
        }
        gray[i] = static_cast<std::uint8_t>(std::lround(v));
    }
    return grid_from_gray(gray, w, h);
}

void write_png_gray(const ImageGrid& img, const std::string& path) {
    FilePtr f = open_file(path, "wb");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw FormatError("libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw FormatError("PNG write failed for '" + path + "'");
    }
    png_init_io(png, f.get());
    int T = img.size();
    png_set_IHDR(png, info, T, T, 8, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    auto bytes = quantize(img);
    for (int y = 0; y < T; ++y)
        png_write_row(png, bytes.data() + static_cast<std::size_t>(y) * T);
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

bool has_suffix(const std::string& s, const std::string& suf) {
    return s.size() >= suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}

} // namespace

ImageGrid read_image(const std::string& path) {
    FilePtr f = open_file(path, "rb");
    unsigned char magic[2] = {0, 0};
    if (std::fread(magic, 1, 2, f.get()) != 2)
        throw FormatError("file too short: '" + path + "'");
    std::rewind(f.get());
    if (magic[0] == 'P' && magic[1] == '5') {
        std::fseek(f.get(), 2, SEEK_SET);
        return read_pgm(f.get());
    }
    if (magic[0] == 0x89 && magic[1] == 'P')
        return read_png(f.get(), path);
    throw FormatError("unsupported image format in '" + path + "' (expected P5 PGM or PNG)");
}

void write_image(const ImageGrid& img, const std::string& path) {
    if (has_suffix(path, ".pgm"))
        write_pgm(img, path);
    else if (has_suffix(path, ".png"))
        write_png_gray(img, path);
    else
        throw FormatError("unsupported output extension for '" + path + "' (use .pgm or .png)");
}

void write_png_rgb8(const std::string& path, int width, int height,
                    const std::vector<std::uint8_t>& rgb) {
    if (rgb.size() != static_cast<std::size_t>(width) * height * 3)
        throw std::invalid_argument("rgb buffer size mismatch");
    FilePtr f = open_file(path, "wb");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw FormatError("libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw FormatError("PNG write failed for '" + path + "'");
    }
    png_init_io(png, f.get());
    png_set_IHDR(png, info, width, height, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < height; ++y)
        png_write_row(png, const_cast<png_bytep>(rgb.data() + static_cast<std::size_t>(y) * width * 3));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

} // namespace tomo
