#include "tonetk/color.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tonetk/errors.hpp"

namespace tonetk {

namespace {

// sRGB primaries, D65. The inverse is derived numerically from the forward
// matrix so round trips are exact to machine precision.
constexpr double kRgbToXyz[3][3] = {
    {0.4124564, 0.3575761, 0.1804375},
    {0.2126729, 0.7151522, 0.0721750},
    {0.0193339, 0.1191920, 0.9503041},
};

// Reference white = forward matrix applied to (1,1,1).
constexpr double kWhite[3] = {
    kRgbToXyz[0][0] + kRgbToXyz[0][1] + kRgbToXyz[0][2],
    kRgbToXyz[1][0] + kRgbToXyz[1][1] + kRgbToXyz[1][2],
    kRgbToXyz[2][0] + kRgbToXyz[2][1] + kRgbToXyz[2][2],
};

struct XyzToRgbMatrix {
    double m[3][3];
    XyzToRgbMatrix() {
        const auto& a = kRgbToXyz;
        double det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
                     a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                     a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
        m[0][0] = (a[1][1] * a[2][2] - a[1][2] * a[2][1]) / det;
        m[0][1] = (a[0][2] * a[2][1] - a[0][1] * a[2][2]) / det;
        m[0][2] = (a[0][1] * a[1][2] - a[0][2] * a[1][1]) / det;
        m[1][0] = (a[1][2] * a[2][0] - a[1][0] * a[2][2]) / det;
        m[1][1] = (a[0][0] * a[2][2] - a[0][2] * a[2][0]) / det;
        m[1][2] = (a[0][2] * a[1][0] - a[0][0] * a[1][2]) / det;
        m[2][0] = (a[1][0] * a[2][1] - a[1][1] * a[2][0]) / det;
        m[2][1] = (a[0][1] * a[2][0] - a[0][0] * a[2][1]) / det;
        m[2][2] = (a[0][0] * a[1][1] - a[0][1] * a[1][0]) / det;
    }
};

const XyzToRgbMatrix kXyzToRgb;

// Gamma branch threshold expressed in the linear domain as 0.04045/12.92 so
// both directions pick matching branches.
constexpr double kGammaKnee = 0.04045;
const double kLinearKnee = kGammaKnee / 12.92;

constexpr double kLabDelta = 6.0 / 29.0;
constexpr double kLabDelta3 = kLabDelta * kLabDelta * kLabDelta;

double lab_f(double t) {
    return t > kLabDelta3 ? std::cbrt(t) : t / (3.0 * kLabDelta * kLabDelta) + 4.0 / 29.0;
}

double lab_f_inv(double u) {
    return u > kLabDelta ? u * u * u : 3.0 * kLabDelta * kLabDelta * (u - 4.0 / 29.0);
}

double deg_to_rad(double d) { return d * std::numbers::pi / 180.0; }

} // namespace

RgbImage::RgbImage(int w, int h) : width(w), height(h), data(static_cast<std::size_t>(w) * h * 3, 0.0) {}

RgbImage RgbImage::filled(int w, int h, const Rgb& c) {
    RgbImage img(w, h);
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
        img.data[3 * i] = c.r;
        img.data[3 * i + 1] = c.g;
        img.data[3 * i + 2] = c.b;
    }
    return img;
}

double srgb_to_linear(double v) {
    return v <= kGammaKnee ? v / 12.92 : std::pow((v + 0.055) / 1.055, 2.4);
}

double linear_to_srgb(double v) {
    return v <= kLinearKnee ? v * 12.92 : 1.055 * std::pow(v, 1.0 / 2.4) - 0.055;
}

LabColor rgb_to_lab(const Rgb& c) {
    for (int i = 0; i < 3; ++i) {
        if (!(c[i] >= 0.0 && c[i] <= 1.0))
            throw InputError("rgb_to_lab: channel outside [0,1]");
    }
    double lin[3] = {srgb_to_linear(c.r), srgb_to_linear(c.g), srgb_to_linear(c.b)};
    double xyz[3];
    for (int i = 0; i < 3; ++i)
        xyz[i] = kRgbToXyz[i][0] * lin[0] + kRgbToXyz[i][1] * lin[1] + kRgbToXyz[i][2] * lin[2];
    double fx = lab_f(xyz[0] / kWhite[0]);
    double fy = lab_f(xyz[1] / kWhite[1]);
    double fz = lab_f(xyz[2] / kWhite[2]);
    return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

LabToRgbResult lab_to_rgb(const LabColor& c) {
    double fy = (c.L + 16.0) / 116.0;
    double fx = fy + c.a / 500.0;
    double fz = fy - c.b / 200.0;
    double xyz[3] = {kWhite[0] * lab_f_inv(fx), kWhite[1] * lab_f_inv(fy), kWhite[2] * lab_f_inv(fz)};
    LabToRgbResult out;
    for (int i = 0; i < 3; ++i) {
        double lin = kXyzToRgb.m[i][0] * xyz[0] + kXyzToRgb.m[i][1] * xyz[1] + kXyzToRgb.m[i][2] * xyz[2];
        if (lin < 0.0 || lin > 1.0) {
            out.clamped = true;
            lin = std::clamp(lin, 0.0, 1.0);
        }
        double v = linear_to_srgb(lin);
        if (v < 0.0 || v > 1.0) {
            out.clamped = true;
            v = std::clamp(v, 0.0, 1.0);
        }
        out.rgb[i] = v;
    }
    return out;
}

std::array<double, 9> rgb_to_lab_jacobian(const Rgb& c) {
    // Chain: diag(d srgb_to_linear) -> M -> lab_f -> (L,a,b) assembly.
    double dlin[3];
    double lin[3];
    for (int i = 0; i < 3; ++i) {
        double v = c[i];
        if (v <= kGammaKnee) {
            lin[i] = v / 12.92;
            dlin[i] = 1.0 / 12.92;
        } else {
            double base = (v + 0.055) / 1.055;
            lin[i] = std::pow(base, 2.4);
            dlin[i] = 2.4 * std::pow(base, 1.4) / 1.055;
        }
    }
    double xyz[3];
    for (int i = 0; i < 3; ++i)
        xyz[i] = kRgbToXyz[i][0] * lin[0] + kRgbToXyz[i][1] * lin[1] + kRgbToXyz[i][2] * lin[2];
    double fp[3]; // d lab_f(xyz_i / white_i) / d xyz_i
    for (int i = 0; i < 3; ++i) {
        double t = xyz[i] / kWhite[i];
        double d = t > kLabDelta3 ? (1.0 / 3.0) * std::pow(t, -2.0 / 3.0)
                                  : 1.0 / (3.0 * kLabDelta * kLabDelta);
        fp[i] = d / kWhite[i];
    }
    std::array<double, 9> jac{};
    for (int j = 0; j < 3; ++j) {
        double dX = kRgbToXyz[0][j] * dlin[j];
        double dY = kRgbToXyz[1][j] * dlin[j];
        double dZ = kRgbToXyz[2][j] * dlin[j];
        double dfx = fp[0] * dX;
        double dfy = fp[1] * dY;
        double dfz = fp[2] * dZ;
        jac[0 * 3 + j] = 116.0 * dfy;
        jac[1 * 3 + j] = 500.0 * (dfx - dfy);
        jac[2 * 3 + j] = 200.0 * (dfy - dfz);
    }
    return jac;
}

Ciede2000Result ciede2000(const LabColor& x, const LabColor& y, double kL, double kC, double kH) {
    if (!(kL > 0.0 && kC > 0.0 && kH > 0.0))
        throw InputError("ciede2000: parametric factors must be positive");

    const double pow25_7 = std::pow(25.0, 7.0);
    double c1 = std::hypot(x.a, x.b);
    double c2 = std::hypot(y.a, y.b);
    double cBar = 0.5 * (c1 + c2);
    double cBar7 = std::pow(cBar, 7.0);
    double g = 0.5 * (1.0 - std::sqrt(cBar7 / (cBar7 + pow25_7)));
    double a1p = (1.0 + g) * x.a;
    double a2p = (1.0 + g) * y.a;
    double c1p = std::hypot(a1p, x.b);
    double c2p = std::hypot(a2p, y.b);

    auto hue = [](double ap, double b) {
        if (ap == 0.0 && b == 0.0) return 0.0; // achromatic: hue defined as 0
        double h = std::atan2(b, ap) * 180.0 / std::numbers::pi;
        return h < 0.0 ? h + 360.0 : h;
    };
    double h1p = hue(a1p, x.b);
    double h2p = hue(a2p, y.b);

    double dhp;
    if (c1p * c2p == 0.0)
        dhp = 0.0;
    else if (std::abs(h1p - h2p) <= 180.0)
        dhp = h2p - h1p;
    else if (h2p - h1p > 180.0)
        dhp = h2p - h1p - 360.0;
    else
        dhp = h2p - h1p + 360.0;

    Ciede2000Breakdown bd;
    bd.kL = kL;
    bd.kC = kC;
    bd.kH = kH;
    bd.dLp = y.L - x.L;
    bd.dCp = c2p - c1p;
    bd.dHp = 2.0 * std::sqrt(c1p * c2p) * std::sin(deg_to_rad(dhp / 2.0));

    double lBar = 0.5 * (x.L + y.L);
    double cpBar = 0.5 * (c1p + c2p);
    double hBar;
    if (c1p * c2p == 0.0)
        hBar = h1p + h2p;
    else if (std::abs(h1p - h2p) <= 180.0)
        hBar = 0.5 * (h1p + h2p);
    else if (h1p + h2p < 360.0)
        hBar = 0.5 * (h1p + h2p + 360.0);
    else
        hBar = 0.5 * (h1p + h2p - 360.0);

    double t = 1.0 - 0.17 * std::cos(deg_to_rad(hBar - 30.0)) + 0.24 * std::cos(deg_to_rad(2.0 * hBar)) +
               0.32 * std::cos(deg_to_rad(3.0 * hBar + 6.0)) - 0.20 * std::cos(deg_to_rad(4.0 * hBar - 63.0));
    double lBar50 = (lBar - 50.0) * (lBar - 50.0);
    bd.sL = 1.0 + 0.015 * lBar50 / std::sqrt(20.0 + lBar50);
    bd.sC = 1.0 + 0.045 * cpBar;
    bd.sH = 1.0 + 0.015 * cpBar * t;

    double dTheta = 30.0 * std::exp(-((hBar - 275.0) / 25.0) * ((hBar - 275.0) / 25.0));
    double cpBar7 = std::pow(cpBar, 7.0);
    double rC = 2.0 * std::sqrt(cpBar7 / (cpBar7 + pow25_7));
    bd.rT = -rC * std::sin(deg_to_rad(2.0 * dTheta));

    double tl = bd.dLp / (kL * bd.sL);
    double tc = bd.dCp / (kC * bd.sC);
    double th = bd.dHp / (kH * bd.sH);
    double radicand = tl * tl + tc * tc + th * th + bd.rT * tc * th;
    return {std::sqrt(std::max(0.0, radicand)), bd};
}

double mean_delta_e(const RgbImage& x, const RgbImage& y) {
    if (!x.same_size(y)) throw InputError("mean_delta_e: dimension mismatch");
    if (x.pixel_count() == 0) return 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < x.pixel_count(); ++i) {
        Rgb cx{x.data[3 * i], x.data[3 * i + 1], x.data[3 * i + 2]};
        Rgb cy{y.data[3 * i], y.data[3 * i + 1], y.data[3 * i + 2]};
        total += ciede2000(rgb_to_lab(cx), rgb_to_lab(cy)).delta_e;
    }
    return total / static_cast<double>(x.pixel_count());
}

namespace {

int bin_index(double v, double lo, double hi, int bins) {
    double t = (v - lo) / (hi - lo) * bins;
    int i = static_cast<int>(std::floor(t));
    return std::clamp(i, 0, bins - 1); // boundary maxima land in the last bin
}

} // namespace

ToneHistogram lab_histogram(const RgbImage& x, int bins) {
    if (bins < 2) throw InputError("lab_histogram: bins must be >= 2");
    ToneHistogram h;
    h.bins_per_channel = bins;
    h.l.assign(bins, 0.0);
    h.a.assign(bins, 0.0);
    h.b.assign(bins, 0.0);
    std::size_t n = x.pixel_count();
    if (n == 0) return h;
    for (std::size_t i = 0; i < n; ++i) {
        LabColor lab = rgb_to_lab({x.data[3 * i], x.data[3 * i + 1], x.data[3 * i + 2]});
        h.l[bin_index(lab.L, 0.0, kLabLMax, bins)] += 1.0;
        h.a[bin_index(lab.a, -kLabAbRange, kLabAbRange, bins)] += 1.0;
        h.b[bin_index(lab.b, -kLabAbRange, kLabAbRange, bins)] += 1.0;
    }
    double inv = 1.0 / static_cast<double>(n);
    for (int k = 0; k < bins; ++k) {
        h.l[k] *= inv;
        h.a[k] *= inv;
        h.b[k] *= inv;
    }
    return h;
}

double histogram_distance(const ToneHistogram& p, const ToneHistogram& q) {
    if (p.bins_per_channel != q.bins_per_channel)
        throw InputError("histogram_distance: bin count mismatch");
    double total = 0.0;
    for (int k = 0; k < p.bins_per_channel; ++k) {
        total += std::abs(p.l[k] - q.l[k]);
        total += std::abs(p.a[k] - q.a[k]);
        total += std::abs(p.b[k] - q.b[k]);
    }
    return total / 3.0;
}

} // namespace tonetk
