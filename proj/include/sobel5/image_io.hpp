#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <string>
#include <vector>

#include <png.h>

#include "sobel5/errors.hpp"
#include "sobel5/plane.hpp"

namespace sobel5 {

/// Integer BT.601 luma, full range: (77 R + 150 G + 29 B + 128) >> 8.
inline std::uint8_t luma_bt601(int r, int g, int b) {
    return static_cast<std::uint8_t>((77 * r + 150 * g + 29 * b + 128) >> 8);
}

namespace detail {

inline int pgm_header_int(std::istream& in) {
    // Skips whitespace and '#' comment lines, then reads one decimal value.
    for (;;) {
        const int c = in.peek();
        if (c == EOF) throw CorruptFile("truncated PGM header");
        if (c == '#') {
            std::string line;
            std::getline(in, line);
            continue;
        }
        if (std::isspace(c)) {
            in.get();
            continue;
        }
        break;
    }
    int value = 0;
    if (!(in >> value)) throw CorruptFile("malformed PGM header");
    return value;
}

inline GrayPlane load_pgm(std::istream& in, bool binary, const std::string& path) {
    const int w = pgm_header_int(in);
    const int h = pgm_header_int(in);
    const int maxval = pgm_header_int(in);
    if (w <= 0 || h <= 0)
        throw CorruptFile("bad PGM dimensions in " + path);
    if (maxval != 255)
        throw UnsupportedFormat("PGM maxval " + std::to_string(maxval) + " in " + path +
                                ", only 255 is supported");

    GrayPlane img(w, h);
    if (binary) {
        in.get(); // single whitespace byte after maxval
        in.read(reinterpret_cast<char*>(img.data().data()),
                static_cast<std::streamsize>(img.size()));
        if (static_cast<std::size_t>(in.gcount()) != img.size())
            throw CorruptFile("truncated PGM pixel data in " + path);
    } else {
        for (auto& px : img.data()) {
            int v = 0;
            if (!(in >> v)) throw CorruptFile("truncated PGM pixel data in " + path);
            if (v < 0 || v > maxval)
                throw CorruptFile("PGM sample " + std::to_string(v) + " out of range in " + path);
            px = static_cast<std::uint8_t>(v);
        }
    }
    return img;
}

struct PngRead {
    std::FILE* fp = nullptr;
    png_structp png = nullptr;
    png_infop info = nullptr;
    ~PngRead() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
        if (fp) std::fclose(fp);
    }
};

inline GrayPlane load_png(const std::string& path) {
    PngRead ctx;
    ctx.fp = std::fopen(path.c_str(), "rb");
    if (!ctx.fp) throw IoError("cannot open " + path);

    unsigned char sig[8];
    if (std::fread(sig, 1, 8, ctx.fp) != 8 || png_sig_cmp(sig, 0, 8) != 0)
        throw CorruptFile("bad PNG signature in " + path);

    ctx.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!ctx.png) throw IoError("libpng init failed");
    ctx.info = png_create_info_struct(ctx.png);
    if (!ctx.info) throw IoError("libpng init failed");

    if (setjmp(png_jmpbuf(ctx.png)))
        throw CorruptFile("libpng failed to decode " + path);

    png_init_io(ctx.png, ctx.fp);
    png_set_sig_bytes(ctx.png, 8);
    png_read_info(ctx.png, ctx.info);

    const png_uint_32 w = png_get_image_width(ctx.png, ctx.info);
    const png_uint_32 h = png_get_image_height(ctx.png, ctx.info);
    const int bit_depth = png_get_bit_depth(ctx.png, ctx.info);
    const int color_type = png_get_color_type(ctx.png, ctx.info);

    if (bit_depth != 8)
        throw UnsupportedFormat("PNG bit depth " + std::to_string(bit_depth) + " in " + path +
                                ", only 8 is supported");
    int channels;
    switch (color_type) {
        case PNG_COLOR_TYPE_GRAY: channels = 1; break;
        case PNG_COLOR_TYPE_RGB: channels = 3; break;
        case PNG_COLOR_TYPE_RGB_ALPHA: channels = 4; break;
        default:
            throw UnsupportedFormat("PNG color type " + std::to_string(color_type) + " in " +
                                    path + ", need gray, RGB or RGBA");
    }

    png_set_interlace_handling(ctx.png);
    png_read_update_info(ctx.png, ctx.info);
    if (png_get_rowbytes(ctx.png, ctx.info) != w * static_cast<png_size_t>(channels))
        throw CorruptFile("unexpected PNG row size in " + path);

    std::vector<std::uint8_t> raw(static_cast<std::size_t>(w) * h * channels);
    std::vector<png_bytep> rows(h);
    for (png_uint_32 y = 0; y < h; ++y)
        rows[y] = raw.data() + static_cast<std::size_t>(y) * w * channels;
    png_read_image(ctx.png, rows.data());
    png_read_end(ctx.png, nullptr);

    GrayPlane img(static_cast<int>(w), static_cast<int>(h));
    if (channels == 1) {
        std::copy(raw.begin(), raw.end(), img.data().begin());
    } else {
        for (std::size_t i = 0; i < img.size(); ++i) {
            const std::uint8_t* px = raw.data() + i * channels;
            img.data()[i] = luma_bt601(px[0], px[1], px[2]);
        }
    }
    return img;
}

struct PngWrite {
    std::FILE* fp = nullptr;
    png_structp png = nullptr;
    png_infop info = nullptr;
    ~PngWrite() {
        if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
        if (fp) std::fclose(fp);
    }
};

inline void save_png_gray(const GrayPlane& img, const std::string& path) {
    PngWrite ctx;
    ctx.fp = std::fopen(path.c_str(), "wb");
    if (!ctx.fp) throw IoError("cannot write " + path);
    ctx.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!ctx.png) throw IoError("libpng init failed");
    ctx.info = png_create_info_struct(ctx.png);
    if (!ctx.info) throw IoError("libpng init failed");

    if (setjmp(png_jmpbuf(ctx.png)))
        throw IoError("libpng failed to encode " + path);

    png_init_io(ctx.png, ctx.fp);
    png_set_IHDR(ctx.png, ctx.info, static_cast<png_uint_32>(img.width()),
                 static_cast<png_uint_32>(img.height()), 8, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(ctx.png, ctx.info);
    for (int y = 0; y < img.height(); ++y)
        png_write_row(ctx.png, const_cast<png_bytep>(img.row(y).data()));
    png_write_end(ctx.png, nullptr);
}

inline void save_pgm(const GrayPlane& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << "P5\n" << img.width() << " " << img.height() << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.data().data()),
              static_cast<std::streamsize>(img.size()));
    if (!out) throw IoError("short write to " + path);
}

inline bool has_suffix(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() &&
           std::equal(suffix.rbegin(), suffix.rend(), s.rbegin(),
                      [](char a, char b) { return std::tolower(b) == a; });
}

} // namespace detail

/// Loads an image as 8-bit grayscale. The format is sniffed from the leading
/// bytes (PGM P2/P5 or PNG); color PNG input is reduced with integer BT.601
/// luma.
inline GrayPlane load_gray(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    const int m0 = in.get();
    const int m1 = in.get();
    if (m0 == 'P' && (m1 == '2' || m1 == '5'))
        return detail::load_pgm(in, m1 == '5', path);
    if (m0 == 0x89 && m1 == 'P') {
        in.close();
        return detail::load_png(path);
    }
    throw UnsupportedFormat("unrecognized image format in " + path);
}

/// Writes an 8-bit plane; the extension picks PGM (P5) or PNG.
inline void save_gray(const GrayPlane& img, const std::string& path) {
    if (detail::has_suffix(path, ".pgm"))
        detail::save_pgm(img, path);
    else if (detail::has_suffix(path, ".png"))
        detail::save_png_gray(img, path);
    else
        throw UnsupportedExtension("cannot infer image format from " + path);
}

enum class SaveMode {
    clamp_abs, // |v| clipped to [0, 255]
    normalize  // affine map of [min, max] onto [0, 255]; constant maps to 0
};

namespace detail {

template <typename T>
GrayPlane quantize(const Plane<T>& plane, SaveMode mode) {
    GrayPlane out(plane.width(), plane.height());
    if (mode == SaveMode::clamp_abs) {
        for (std::size_t i = 0; i < plane.size(); ++i) {
            const double v = std::abs(static_cast<double>(plane.data()[i]));
            out.data()[i] = static_cast<std::uint8_t>(std::min(255.0, std::round(v)));
        }
        return out;
    }
    double lo = static_cast<double>(plane.data()[0]);
    double hi = lo;
    for (std::size_t i = 1; i < plane.size(); ++i) {
        const double v = static_cast<double>(plane.data()[i]);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double span = hi - lo;
    for (std::size_t i = 0; i < plane.size(); ++i) {
        const double v = static_cast<double>(plane.data()[i]);
        const double mapped = span > 0 ? (v - lo) * 255.0 / span : 0.0;
        out.data()[i] = static_cast<std::uint8_t>(std::lround(mapped));
    }
    return out;
}

} // namespace detail

inline void save_plane(const SignedPlane& plane, const std::string& path, SaveMode mode) {
    if (plane.empty()) throw EmptyPlane("cannot save an empty plane");
    save_gray(detail::quantize(plane, mode), path);
}

inline void save_plane(const RealPlane& plane, const std::string& path, SaveMode mode) {
    if (plane.empty()) throw EmptyPlane("cannot save an empty plane");
    save_gray(detail::quantize(plane, mode), path);
}

/// Image with an r-pixel replicated border on all four sides.
struct PaddedPlane {
    GrayPlane plane; // (W + 2r) x (H + 2r)
    int radius = 0;

    int inner_width() const { return plane.width() - 2 * radius; }
    int inner_height() const { return plane.height() - 2 * radius; }
};

inline PaddedPlane pad_replicate(const GrayPlane& img, int radius) {
    if (img.empty()) throw EmptyPlane("cannot pad an empty image");
    if (radius < 0) throw DimMismatch("pad radius must be non-negative");
    PaddedPlane out{GrayPlane(img.width() + 2 * radius, img.height() + 2 * radius), radius};
    for (int y = 0; y < out.plane.height(); ++y) {
        const int sy = std::clamp(y - radius, 0, img.height() - 1);
        for (int x = 0; x < out.plane.width(); ++x) {
            const int sx = std::clamp(x - radius, 0, img.width() - 1);
            out.plane.at(y, x) = img.at(sy, sx);
        }
    }
    return out;
}

} // namespace sobel5
