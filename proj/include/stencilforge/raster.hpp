#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <png.h>

namespace stencilforge {

// Pixel-grid convention shared by every module: x grows rightward, y grows
// downward, origin at the top-left pixel. Pixel (x,y) lives at flat index
// y*width + x; its center in continuous coordinates is (x + 0.5, y + 0.5).

/// RGB image, channels in [0,1], row-major.
struct RasterImage {
    int width = 0;
    int height = 0;
    std::vector<std::array<double, 3>> pixels;

    RasterImage() = default;
    RasterImage(int w, int h, std::array<double, 3> fill = {0, 0, 0})
        : width(w), height(h), pixels(std::size_t(w) * h, fill) {}

    std::size_t index(int x, int y) const { return std::size_t(y) * width + x; }
    std::array<double, 3>& at(int x, int y) { return pixels[index(x, y)]; }
    const std::array<double, 3>& at(int x, int y) const { return pixels[index(x, y)]; }
    std::size_t pixel_count() const { return pixels.size(); }
};

/// Single-channel map, values in [0,1], row-major. Holds alpha channels and
/// simulated spray intensities.
struct ChannelMap {
    int width = 0;
    int height = 0;
    std::vector<double> values;

    ChannelMap() = default;
    ChannelMap(int w, int h, double fill = 0.0)
        : width(w), height(h), values(std::size_t(w) * h, fill) {}

    std::size_t index(int x, int y) const { return std::size_t(y) * width + x; }
    double& at(int x, int y) { return values[index(x, y)]; }
    double at(int x, int y) const { return values[index(x, y)]; }
    std::size_t pixel_count() const { return values.size(); }
};

inline double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

namespace detail {

struct PngReadCtx {
    std::FILE* fp = nullptr;
    png_structp png = nullptr;
    png_infop info = nullptr;
    ~PngReadCtx() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
        if (fp) std::fclose(fp);
    }
};

struct PngWriteCtx {
    std::FILE* fp = nullptr;
    png_structp png = nullptr;
    png_infop info = nullptr;
    ~PngWriteCtx() {
        if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
        if (fp) std::fclose(fp);
    }
};

} // namespace detail

/// Load an 8-bit or 16-bit PNG as RGB in [0,1]. Grayscale is replicated to
/// RGB; palette images are expanded; an alpha channel is discarded with a
/// warning.
inline RasterImage load_image(const std::string& path) {
    detail::PngReadCtx ctx;
    ctx.fp = std::fopen(path.c_str(), "rb");
    if (!ctx.fp) throw std::runtime_error("unreadable file: " + path);

    png_byte sig[8];
    if (std::fread(sig, 1, 8, ctx.fp) != 8 || png_sig_cmp(sig, 0, 8) != 0)
        throw std::runtime_error("unreadable file (not a PNG): " + path);

    ctx.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!ctx.png) throw std::runtime_error("png init failed");
    ctx.info = png_create_info_struct(ctx.png);
    if (!ctx.info) throw std::runtime_error("png init failed");

    std::vector<png_byte> raw;
    std::vector<png_bytep> rows;

    if (setjmp(png_jmpbuf(ctx.png)))
        throw std::runtime_error("unreadable file (corrupt PNG): " + path);

    png_init_io(ctx.png, ctx.fp);
    png_set_sig_bytes(ctx.png, 8);
    png_read_info(ctx.png, ctx.info);

    const png_uint_32 w = png_get_image_width(ctx.png, ctx.info);
    const png_uint_32 h = png_get_image_height(ctx.png, ctx.info);
    const int color_type = png_get_color_type(ctx.png, ctx.info);
    int bit_depth = png_get_bit_depth(ctx.png, ctx.info);
    if (w == 0 || h == 0) throw std::runtime_error("zero-dimension image: " + path);

    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(ctx.png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8)
        png_set_expand_gray_1_2_4_to_8(ctx.png);
    if (png_get_valid(ctx.png, ctx.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(ctx.png);

    bool had_alpha = (color_type & PNG_COLOR_MASK_ALPHA) != 0 ||
                     png_get_valid(ctx.png, ctx.info, PNG_INFO_tRNS);
    if (had_alpha) {
        std::cerr << "warning: discarding alpha channel of " << path << "\n";
        png_set_strip_alpha(ctx.png);
    }
    if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA)
        png_set_gray_to_rgb(ctx.png);

    png_read_update_info(ctx.png, ctx.info);
    bit_depth = png_get_bit_depth(ctx.png, ctx.info);
    const int channels = png_get_channels(ctx.png, ctx.info);
    if (channels != 3 || (bit_depth != 8 && bit_depth != 16))
        throw std::runtime_error("unsupported format: " + path);

    const std::size_t rowbytes = png_get_rowbytes(ctx.png, ctx.info);
    raw.resize(rowbytes * h);
    rows.resize(h);
    for (png_uint_32 y = 0; y < h; ++y) rows[y] = raw.data() + y * rowbytes;
    png_read_image(ctx.png, rows.data());
    png_read_end(ctx.png, nullptr);

    RasterImage img(int(w), int(h));
    const double denom = (bit_depth == 8) ? 255.0 : 65535.0;
    for (png_uint_32 y = 0; y < h; ++y) {
        const png_byte* row = rows[y];
        for (png_uint_32 x = 0; x < w; ++x) {
            auto& px = img.at(int(x), int(y));
            for (int c = 0; c < 3; ++c) {
                double v;
                if (bit_depth == 8) {
                    v = row[x * 3 + c];
                } else {
                    // PNG 16-bit samples are big-endian
                    v = double((unsigned(row[(x * 3 + c) * 2]) << 8) |
                               unsigned(row[(x * 3 + c) * 2 + 1]));
                }
                px[c] = v / denom;
            }
        }
    }
    return img;
}

namespace detail {

inline void write_png_bytes(const std::string& path, int width, int height,
                            int channels, const std::vector<png_byte>& bytes) {
    PngWriteCtx ctx;
    ctx.fp = std::fopen(path.c_str(), "wb");
    if (!ctx.fp) throw std::runtime_error("unwritable path: " + path);
    ctx.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!ctx.png) throw std::runtime_error("png init failed");
    ctx.info = png_create_info_struct(ctx.png);
    if (!ctx.info) throw std::runtime_error("png init failed");

    std::vector<png_bytep> rows(height);
    const std::size_t rowbytes = std::size_t(width) * channels;
    for (int y = 0; y < height; ++y)
        rows[y] = const_cast<png_bytep>(bytes.data() + y * rowbytes);

    if (setjmp(png_jmpbuf(ctx.png)))
        throw std::runtime_error("png write failed: " + path);

    png_init_io(ctx.png, ctx.fp);
    png_set_IHDR(ctx.png, ctx.info, png_uint_32(width), png_uint_32(height), 8,
                 channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(ctx.png, ctx.info);
    png_write_image(ctx.png, rows.data());
    png_write_end(ctx.png, nullptr);
}

// Quantize [0,1] to a byte, rounding halves up.
inline png_byte quantize8(double v) {
    return png_byte(std::lround(255.0 * clamp01(v)));
}

} // namespace detail

/// Save a channel map as an 8-bit grayscale PNG (round half up).
inline void save_channel(const ChannelMap& map, const std::string& path) {
    std::vector<png_byte> bytes(map.pixel_count());
    for (std::size_t i = 0; i < map.values.size(); ++i)
        bytes[i] = detail::quantize8(map.values[i]);
    detail::write_png_bytes(path, map.width, map.height, 1, bytes);
}

/// Save an RGB image as an 8-bit PNG (round half up per channel).
inline void save_rgb(const RasterImage& image, const std::string& path) {
    std::vector<png_byte> bytes(image.pixel_count() * 3);
    for (std::size_t i = 0; i < image.pixels.size(); ++i)
        for (int c = 0; c < 3; ++c)
            bytes[i * 3 + c] = detail::quantize8(image.pixels[i][c]);
    detail::write_png_bytes(path, image.width, image.height, 3, bytes);
}

} // namespace stencilforge
