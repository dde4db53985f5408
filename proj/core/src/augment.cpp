#include "tonetk/augment.hpp"

#include <algorithm>
#include <cmath>

#include "tonetk/errors.hpp"

namespace tonetk {

RgbImage desaturate(const RgbImage& img, double factor) {
    if (!(factor >= 0.0 && factor <= 1.0)) throw InputError("desaturate: factor must be in [0,1]");
    RgbImage out(img.width, img.height);
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
        Rgb c{img.data[3 * i], img.data[3 * i + 1], img.data[3 * i + 2]};
        LabColor lab = rgb_to_lab(c);
        lab.a *= factor;
        lab.b *= factor;
        Rgb back = lab_to_rgb(lab).rgb;
        out.data[3 * i] = back.r;
        out.data[3 * i + 1] = back.g;
        out.data[3 * i + 2] = back.b;
    }
    return out;
}

RgbImage exposure_shift(const RgbImage& img, double ev) {
    double gain = std::exp2(ev);
    RgbImage out(img.width, img.height);
    for (std::size_t i = 0; i < img.data.size(); ++i) {
        double lin = srgb_to_linear(std::clamp(img.data[i], 0.0, 1.0)) * gain;
        out.data[i] = std::clamp(linear_to_srgb(std::clamp(lin, 0.0, 1.0)), 0.0, 1.0);
    }
    return out;
}

RgbImage box_blur(const RgbImage& img, int radius) {
    if (radius < 0) throw InputError("box_blur: radius must be >= 0");
    if (radius == 0) return img;
    RgbImage tmp(img.width, img.height);
    RgbImage out(img.width, img.height);
    auto clampi = [](int v, int hi) { return std::clamp(v, 0, hi); };
    // horizontal pass
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            double acc[3] = {0, 0, 0};
            for (int dx = -radius; dx <= radius; ++dx) {
                Rgb c = img.at(clampi(x + dx, img.width - 1), y);
                acc[0] += c.r;
                acc[1] += c.g;
                acc[2] += c.b;
            }
            double inv = 1.0 / (2 * radius + 1);
            tmp.set(x, y, {acc[0] * inv, acc[1] * inv, acc[2] * inv});
        }
    }
    // vertical pass
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            double acc[3] = {0, 0, 0};
            for (int dy = -radius; dy <= radius; ++dy) {
                Rgb c = tmp.at(x, clampi(y + dy, img.height - 1));
                acc[0] += c.r;
                acc[1] += c.g;
                acc[2] += c.b;
            }
            double inv = 1.0 / (2 * radius + 1);
            out.set(x, y, {acc[0] * inv, acc[1] * inv, acc[2] * inv});
        }
    }
    return out;
}

RgbImage add_gaussian_noise(const RgbImage& img, double sigma, Rng& rng) {
    RgbImage out(img.width, img.height);
    for (std::size_t i = 0; i < img.data.size(); ++i)
        out.data[i] = std::clamp(img.data[i] + sigma * rng.normal(), 0.0, 1.0);
    return out;
}

} // namespace tonetk
