#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace tonetk {

struct Rgb {
    double r = 0.0;
    double g = 0.0;
    double b = 0.0;

    double& operator[](int i) { return i == 0 ? r : (i == 1 ? g : b); }
    double operator[](int i) const { return i == 0 ? r : (i == 1 ? g : b); }
};

// CIE 1976 L*a*b*, D65 white point. L in [0, 100] for in-gamut sRGB inputs.
struct LabColor {
    double L = 0.0;
    double a = 0.0;
    double b = 0.0;
};

// Row-major interleaved RGB, each channel a real in [0, 1].
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<double> data; // width * height * 3

    RgbImage() = default;
    RgbImage(int w, int h);
    static RgbImage filled(int w, int h, const Rgb& c);

    Rgb at(int x, int y) const {
        std::size_t i = 3 * (static_cast<std::size_t>(y) * width + x);
        return {data[i], data[i + 1], data[i + 2]};
    }
    void set(int x, int y, const Rgb& c) {
        std::size_t i = 3 * (static_cast<std::size_t>(y) * width + x);
        data[i] = c.r;
        data[i + 1] = c.g;
        data[i + 2] = c.b;
    }
    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
    bool same_size(const RgbImage& o) const { return width == o.width && height == o.height; }
};

// Normalized marginal histograms over L in [0,100], a and b in [-128,128].
// Bins are half-open with the last bin closed, so channel maxima are counted.
struct ToneHistogram {
    int bins_per_channel = 0;
    std::vector<double> l;
    std::vector<double> a;
    std::vector<double> b;
};

// Intermediate terms of the CIEDE2000 formula, exposed so mismatches against
// reference data are diagnosable term by term.
struct Ciede2000Breakdown {
    double dLp = 0.0; // corrected lightness difference
    double dCp = 0.0; // corrected chroma difference
    double dHp = 0.0; // corrected hue difference
    double sL = 1.0;
    double sC = 1.0;
    double sH = 1.0;
    double rT = 0.0; // hue rotation term
    double kL = 1.0;
    double kC = 1.0;
    double kH = 1.0;
};

struct Ciede2000Result {
    double delta_e = 0.0;
    Ciede2000Breakdown breakdown;
};

struct LabToRgbResult {
    Rgb rgb;
    bool clamped = false; // true when the LAB color was out of the sRGB gamut
};

constexpr double kLabLMax = 100.0;
constexpr double kLabAbRange = 128.0; // histogram range is [-128, 128]

// sRGB (D65) -> CIELAB. Throws InputError for channels outside [0, 1].
LabColor rgb_to_lab(const Rgb& c);

// Inverse of rgb_to_lab; out-of-gamut results are clamped to [0, 1] and flagged.
LabToRgbResult lab_to_rgb(const LabColor& c);

// d(L,a,b)/d(r,g,b) of rgb_to_lab, row-major 3x3. Used by the differentiable
// tone-feature path.
std::array<double, 9> rgb_to_lab_jacobian(const Rgb& c);

// Scalar sRGB transfer function pieces (exposed for reuse by augmentations).
double srgb_to_linear(double v);
double linear_to_srgb(double v);

// Full CIEDE2000 including the hue rotation term. kL, kC, kH must be > 0.
Ciede2000Result ciede2000(const LabColor& x, const LabColor& y,
                          double kL = 1.0, double kC = 1.0, double kH = 1.0);

// Arithmetic mean of per-pixel ciede2000 after rgb_to_lab. Throws on
// dimension mismatch.
double mean_delta_e(const RgbImage& x, const RgbImage& y);

// Marginal normalized LAB histograms; bins >= 2.
ToneHistogram lab_histogram(const RgbImage& x, int bins = 16);

// Mean over channels of the L1 distance between frequencies; range [0, 2].
double histogram_distance(const ToneHistogram& p, const ToneHistogram& q);

} // namespace tonetk
