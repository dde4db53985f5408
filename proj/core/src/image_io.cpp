#include "tonetk/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <vector>

#include "tonetk/errors.hpp"

namespace tonetk {

namespace {

bool has_suffix(const std::string& s, const std::string& suffix) {
    if (s.size() < suffix.size()) return false;
    std::string tail = s.substr(s.size() - suffix.size());
    std::transform(tail.begin(), tail.end(), tail.begin(), [](unsigned char c) { return std::tolower(c); });
    return tail == suffix;
}

unsigned char to_byte(double v) {
    double c = std::clamp(v, 0.0, 1.0);
    return static_cast<unsigned char>(std::lround(c * 255.0));
}

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

} // namespace

RgbImage read_png(const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) throw InputError("read_png: cannot open " + path);

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw InputError("read_png: libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw InputError("read_png: libpng init failed");
    }
    std::vector<png_bytep> row_ptrs;
    std::vector<unsigned char> bytes;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw InputError("read_png: malformed PNG " + path);
    }
    png_init_io(png, fp.get());
    png_read_info(png, info);

    png_uint_32 w = png_get_image_width(png, info);
    png_uint_32 h = png_get_image_height(png, info);
    int color_type = png_get_color_type(png, info);
    int bit_depth = png_get_bit_depth(png, info);

    // Normalize everything to 8-bit RGB.
    if (bit_depth == 16) png_set_strip_16(png);
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA)
        png_set_gray_to_rgb(png);
    if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
    png_set_strip_alpha(png);
    png_read_update_info(png, info);

    std::size_t stride = png_get_rowbytes(png, info);
    bytes.resize(stride * h);
    row_ptrs.resize(h);
    for (png_uint_32 y = 0; y < h; ++y) row_ptrs[y] = bytes.data() + y * stride;
    png_read_image(png, row_ptrs.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    RgbImage img(static_cast<int>(w), static_cast<int>(h));
    for (png_uint_32 y = 0; y < h; ++y) {
        const unsigned char* row = bytes.data() + y * stride;
        for (png_uint_32 x = 0; x < w; ++x) {
            std::size_t i = 3 * (static_cast<std::size_t>(y) * w + x);
            img.data[i] = row[3 * x] / 255.0;
            img.data[i + 1] = row[3 * x + 1] / 255.0;
            img.data[i + 2] = row[3 * x + 2] / 255.0;
        }
    }
    return img;
}

void write_png(const RgbImage& img, const std::string& path) {
    if (img.width <= 0 || img.height <= 0) throw InputError("write_png: empty image");
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) throw InputError("write_png: cannot open " + path);

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw InputError("write_png: libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw InputError("write_png: libpng init failed");
    }
    std::vector<unsigned char> bytes(img.pixel_count() * 3);
    for (std::size_t i = 0; i < img.data.size(); ++i) bytes[i] = to_byte(img.data[i]);
    std::vector<png_bytep> row_ptrs(img.height);
    for (int y = 0; y < img.height; ++y)
        row_ptrs[static_cast<std::size_t>(y)] = bytes.data() + static_cast<std::size_t>(y) * img.width * 3;

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw InputError("write_png: write failed for " + path);
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(img.width), static_cast<png_uint_32>(img.height), 8,
                 PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    png_write_image(png, row_ptrs.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

RgbImage read_ppm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("read_ppm: cannot open " + path);
    std::string magic;
    in >> magic;
    if (magic != "P6") throw InputError("read_ppm: not a binary P6 file: " + path);
    auto next_int = [&in, &path]() {
        // Skips whitespace and '#' comment lines between header fields.
        while (true) {
            int c = in.peek();
            if (c == '#') {
                std::string line;
                std::getline(in, line);
            } else if (std::isspace(c)) {
                in.get();
            } else {
                break;
            }
        }
        long v = -1;
        in >> v;
        if (!in || v < 0) throw InputError("read_ppm: malformed header in " + path);
        return v;
    };
    long w = next_int();
    long h = next_int();
    long maxval = next_int();
    if (maxval != 255) throw InputError("read_ppm: only maxval 255 supported");
    in.get(); // single whitespace after header
    std::vector<unsigned char> bytes(static_cast<std::size_t>(w) * h * 3);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (in.gcount() != static_cast<std::streamsize>(bytes.size()))
        throw InputError("read_ppm: truncated pixel data in " + path);
    RgbImage img(static_cast<int>(w), static_cast<int>(h));
    for (std::size_t i = 0; i < bytes.size(); ++i) img.data[i] = bytes[i] / 255.0;
    return img;
}

void write_ppm(const RgbImage& img, const std::string& path) {
    if (img.width <= 0 || img.height <= 0) throw InputError("write_ppm: empty image");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("write_ppm: cannot open " + path);
    out << "P6\n" << img.width << " " << img.height << "\n255\n";
    std::vector<unsigned char> bytes(img.data.size());
    for (std::size_t i = 0; i < img.data.size(); ++i) bytes[i] = to_byte(img.data[i]);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw InputError("write_ppm: write failed for " + path);
}

RgbImage read_image(const std::string& path) {
    if (has_suffix(path, ".png")) return read_png(path);
    if (has_suffix(path, ".ppm")) return read_ppm(path);
    throw InputError("read_image: unsupported extension (want .png or .ppm): " + path);
}

void write_image(const RgbImage& img, const std::string& path) {
    if (has_suffix(path, ".png")) {
        write_png(img, path);
    } else if (has_suffix(path, ".ppm")) {
        write_ppm(img, path);
    } else {
        throw InputError("write_image: unsupported extension (want .png or .ppm): " + path);
    }
}

} // namespace tonetk
