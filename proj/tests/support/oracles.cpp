#include "support/oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace oracle {

namespace {

constexpr double kPi = 3.14159265358979323846;

double srgb_expand(double v) { return v <= 0.04045 ? v / 12.92 : std::pow((v + 0.055) / 1.055, 2.4); }

double lab_f(double t) {
    const double d = 6.0 / 29.0;
    return t > d * d * d ? std::pow(t, 1.0 / 3.0) : t / (3.0 * d * d) + 4.0 / 29.0;
}

} // namespace

Lab lab_from_srgb(double r, double g, double b) {
    const double m[3][3] = {{0.4124564, 0.3575761, 0.1804375},
                            {0.2126729, 0.7151522, 0.0721750},
                            {0.0193339, 0.1191920, 0.9503041}};
    double lin[3] = {srgb_expand(r), srgb_expand(g), srgb_expand(b)};
    double xyz[3];
    double white[3];
    for (int i = 0; i < 3; ++i) {
        xyz[i] = m[i][0] * lin[0] + m[i][1] * lin[1] + m[i][2] * lin[2];
        white[i] = m[i][0] + m[i][1] + m[i][2];
    }
    double fx = lab_f(xyz[0] / white[0]);
    double fy = lab_f(xyz[1] / white[1]);
    double fz = lab_f(xyz[2] / white[2]);
    return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

double ciede2000(const Lab& x, const Lab& y) {
    const double pow25_7 = std::pow(25.0, 7.0);
    double c1 = std::sqrt(x.a * x.a + x.b * x.b);
    double c2 = std::sqrt(y.a * y.a + y.b * y.b);
    double cb = 0.5 * (c1 + c2);
    double cb7 = std::pow(cb, 7.0);
    double g = 0.5 * (1.0 - std::sqrt(cb7 / (cb7 + pow25_7)));
    double a1p = (1.0 + g) * x.a;
    double a2p = (1.0 + g) * y.a;
    double c1p = std::sqrt(a1p * a1p + x.b * x.b);
    double c2p = std::sqrt(a2p * a2p + y.b * y.b);

    auto hp = [](double ap, double b) {
        if (ap == 0.0 && b == 0.0) return 0.0;
        double h = std::atan2(b, ap) * 180.0 / kPi;
        if (h < 0.0) h += 360.0;
        return h;
    };
    double h1p = hp(a1p, x.b);
    double h2p = hp(a2p, y.b);

    double dLp = y.L - x.L;
    double dCp = c2p - c1p;
    double dhp;
    if (c1p * c2p == 0.0)
        dhp = 0.0;
    else if (std::fabs(h1p - h2p) <= 180.0)
        dhp = h2p - h1p;
    else if (h2p - h1p > 180.0)
        dhp = h2p - h1p - 360.0;
    else
        dhp = h2p - h1p + 360.0;
    double dHp = 2.0 * std::sqrt(c1p * c2p) * std::sin(dhp / 2.0 * kPi / 180.0);

    double lbp = 0.5 * (x.L + y.L);
    double cbp = 0.5 * (c1p + c2p);
    double hbp;
    if (c1p * c2p == 0.0)
        hbp = h1p + h2p;
    else if (std::fabs(h1p - h2p) <= 180.0)
        hbp = 0.5 * (h1p + h2p);
    else if (h1p + h2p < 360.0)
        hbp = 0.5 * (h1p + h2p + 360.0);
    else
        hbp = 0.5 * (h1p + h2p - 360.0);

    double t = 1.0 - 0.17 * std::cos((hbp - 30.0) * kPi / 180.0) + 0.24 * std::cos(2.0 * hbp * kPi / 180.0) +
               0.32 * std::cos((3.0 * hbp + 6.0) * kPi / 180.0) - 0.20 * std::cos((4.0 * hbp - 63.0) * kPi / 180.0);
    double dtheta = 30.0 * std::exp(-std::pow((hbp - 275.0) / 25.0, 2.0));
    double rc = 2.0 * std::sqrt(std::pow(cbp, 7.0) / (std::pow(cbp, 7.0) + pow25_7));
    double sl = 1.0 + 0.015 * std::pow(lbp - 50.0, 2.0) / std::sqrt(20.0 + std::pow(lbp - 50.0, 2.0));
    double sc = 1.0 + 0.045 * cbp;
    double sh = 1.0 + 0.015 * cbp * t;
    double rt = -std::sin(2.0 * dtheta * kPi / 180.0) * rc;

    double tl = dLp / sl;
    double tc = dCp / sc;
    double th = dHp / sh;
    return std::sqrt(tl * tl + tc * tc + th * th + rt * tc * th);
}

const std::array<Ciede2000Case, 34> kCiede2000Pairs = {{
    {50.0000, 2.6772, -79.7751, 50.0000, 0.0000, -82.7485, 2.0425},
    {50.0000, 3.1571, -77.2803, 50.0000, 0.0000, -82.7485, 2.8615},
    {50.0000, 2.8361, -74.0200, 50.0000, 0.0000, -82.7485, 3.4412},
    {50.0000, -1.3802, -84.2814, 50.0000, 0.0000, -82.7485, 1.0000},
    {50.0000, -1.1848, -84.8006, 50.0000, 0.0000, -82.7485, 1.0000},
    {50.0000, -0.9009, -85.5211, 50.0000, 0.0000, -82.7485, 1.0000},
    {50.0000, 0.0000, 0.0000, 50.0000, -1.0000, 2.0000, 2.3669},
    {50.0000, -1.0000, 2.0000, 50.0000, 0.0000, 0.0000, 2.3669},
    {50.0000, 2.4900, -0.0010, 50.0000, -2.4900, 0.0009, 7.1792},
    {50.0000, 2.4900, -0.0010, 50.0000, -2.4900, 0.0010, 7.1792},
    {50.0000, 2.4900, -0.0010, 50.0000, -2.4900, 0.0011, 7.2195},
    {50.0000, 2.4900, -0.0010, 50.0000, -2.4900, 0.0012, 7.2195},
    {50.0000, -0.0010, 2.4900, 50.0000, 0.0009, -2.4900, 4.8045},
    {50.0000, -0.0010, 2.4900, 50.0000, 0.0010, -2.4900, 4.8045},
    {50.0000, -0.0010, 2.4900, 50.0000, 0.0011, -2.4900, 4.7461},
    {50.0000, 2.5000, 0.0000, 50.0000, 0.0000, -2.5000, 4.3065},
    {50.0000, 2.5000, 0.0000, 73.0000, 25.0000, -18.0000, 27.1492},
    {50.0000, 2.5000, 0.0000, 61.0000, -5.0000, 29.0000, 22.8977},
    {50.0000, 2.5000, 0.0000, 56.0000, -27.0000, -3.0000, 31.9030},
    {50.0000, 2.5000, 0.0000, 58.0000, 24.0000, 15.0000, 19.4535},
    {50.0000, 2.5000, 0.0000, 50.0000, 3.1736, 0.5854, 1.0000},
    {50.0000, 2.5000, 0.0000, 50.0000, 3.2972, 0.0000, 1.0000},
    {50.0000, 2.5000, 0.0000, 50.0000, 1.8634, 0.5757, 1.0000},
    {50.0000, 2.5000, 0.0000, 50.0000, 3.2592, 0.3350, 1.0000},
    {60.2574, -34.0099, 36.2677, 60.4626, -34.1751, 39.4387, 1.2644},
    {63.0109, -31.0961, -5.8663, 62.8187, -29.7946, -4.0864, 1.2630},
    {61.2901, 3.7196, -5.3901, 61.4292, 2.2480, -4.9620, 1.8731},
    {35.0831, -44.1164, 3.7933, 35.0232, -40.0716, 1.5901, 1.8645},
    {22.7233, 20.0904, -46.6940, 23.0331, 14.9730, -42.5619, 2.0373},
    {36.4612, 47.8580, 18.3852, 36.2715, 50.5065, 21.2231, 1.4146},
    {90.8027, -2.0831, 1.4410, 91.1528, -1.6435, 0.0447, 1.4441},
    {90.9257, -0.5406, -0.9208, 88.6381, -0.8985, -0.7239, 1.5381},
    {6.7747, -0.2908, -2.4247, 5.8714, -0.0985, -2.2286, 0.6377},
    {2.0776, 0.0795, -1.1350, 0.9033, -0.0636, -0.5514, 0.9082},
}};

double ssim_direct(const std::vector<double>& x, const std::vector<double>& y,
                   int width, int height, int window, double c1, double c2) {
    if (width < window || height < window)
        throw std::invalid_argument("ssim_direct: image smaller than window");
    const int half = window / 2;
    const double count = static_cast<double>(window) * window;
    double total = 0.0;
    long positions = 0;
    for (int cy = half; cy < height - half; ++cy) {
        for (int cx = half; cx < width - half; ++cx) {
            double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
            for (int dy = -half; dy <= half; ++dy)
                for (int dx = -half; dx <= half; ++dx) {
                    double vx = x[static_cast<std::size_t>(cy + dy) * width + (cx + dx)];
                    double vy = y[static_cast<std::size_t>(cy + dy) * width + (cx + dx)];
                    sx += vx;
                    sy += vy;
                    sxx += vx * vx;
                    syy += vy * vy;
                    sxy += vx * vy;
                }
            double mx = sx / count;
            double my = sy / count;
            double vx = sxx / count - mx * mx;
            double vy = syy / count - my * my;
            double cov = sxy / count - mx * my;
            double num = (2.0 * mx * my + c1) * (2.0 * cov + c2);
            double den = (mx * mx + my * my + c1) * (vx + vy + c2);
            total += num / den;
            ++positions;
        }
    }
    return total / static_cast<double>(positions);
}

double central_difference(const std::function<double(const std::vector<double>&)>& f,
                          std::vector<double> x, std::size_t i, double h) {
    double orig = x[i];
    x[i] = orig + h;
    double fp = f(x);
    x[i] = orig - h;
    double fm = f(x);
    x[i] = orig;
    return (fp - fm) / (2.0 * h);
}

double gradient_rel_error(double analytic, double numeric) {
    double denom = std::max({std::fabs(analytic), std::fabs(numeric), 1e-8});
    return std::fabs(analytic - numeric) / denom;
}

namespace {

// Gaussian elimination with partial pivoting.
std::vector<double> solve_dense(std::vector<std::vector<double>> m, std::vector<double> rhs) {
    const std::size_t n = rhs.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t row = col + 1; row < n; ++row)
            if (std::fabs(m[row][col]) > std::fabs(m[pivot][col])) pivot = row;
        if (std::fabs(m[pivot][col]) < 1e-14)
            throw std::runtime_error("dense_lut_fit: singular system (insufficient coverage)");
        std::swap(m[col], m[pivot]);
        std::swap(rhs[col], rhs[pivot]);
        for (std::size_t row = col + 1; row < n; ++row) {
            double f = m[row][col] / m[col][col];
            if (f == 0.0) continue;
            for (std::size_t k = col; k < n; ++k) m[row][k] -= f * m[col][k];
            rhs[row] -= f * rhs[col];
        }
    }
    std::vector<double> x(n, 0.0);
    for (std::size_t row = n; row-- > 0;) {
        double acc = rhs[row];
        for (std::size_t k = row + 1; k < n; ++k) acc -= m[row][k] * x[k];
        x[row] = acc / m[row][row];
    }
    return x;
}

} // namespace

std::array<std::vector<double>, 3> dense_lut_fit(const std::vector<DenseCorrespondence>& pairs,
                                                 int n, double lambda) {
    const std::size_t vcount = static_cast<std::size_t>(n) * n * n;
    auto vid = [n](int r, int g, int b) {
        return static_cast<std::size_t>(r) + static_cast<std::size_t>(n) * (static_cast<std::size_t>(g) + static_cast<std::size_t>(n) * b);
    };

    // Normal matrix shared by all channels.
    std::vector<std::vector<double>> m(vcount, std::vector<double>(vcount, 0.0));
    std::array<std::vector<double>, 3> rhs = {std::vector<double>(vcount, 0.0),
                                              std::vector<double>(vcount, 0.0),
                                              std::vector<double>(vcount, 0.0)};
    for (const auto& p : pairs) {
        std::size_t idx[8];
        double w[8];
        int i0[3];
        double f[3];
        for (int k = 0; k < 3; ++k) {
            double v = std::min(1.0, std::max(0.0, p.input[k]));
            double pos = v * (n - 1);
            i0[k] = std::min(static_cast<int>(pos), n - 2);
            f[k] = pos - i0[k];
        }
        int c = 0;
        for (int db = 0; db < 2; ++db)
            for (int dg = 0; dg < 2; ++dg)
                for (int dr = 0; dr < 2; ++dr) {
                    idx[c] = vid(i0[0] + dr, i0[1] + dg, i0[2] + db);
                    w[c] = (dr ? f[0] : 1 - f[0]) * (dg ? f[1] : 1 - f[1]) * (db ? f[2] : 1 - f[2]);
                    ++c;
                }
        for (int a = 0; a < 8; ++a) {
            for (int b = 0; b < 8; ++b) m[idx[a]][idx[b]] += p.weight * w[a] * w[b];
            for (int ch = 0; ch < 3; ++ch) rhs[ch][idx[a]] += p.weight * w[a] * p.target[ch];
        }
    }

    // lambda * L^T L for interior per-axis second differences.
    if (lambda > 0.0 && n >= 3) {
        std::size_t strides[3] = {1, static_cast<std::size_t>(n), static_cast<std::size_t>(n) * n};
        for (int axis = 0; axis < 3; ++axis) {
            std::size_t s = strides[axis];
            std::size_t so = strides[(axis + 1) % 3];
            std::size_t st = strides[(axis + 2) % 3];
            for (int u = 0; u < n; ++u)
                for (int v = 0; v < n; ++v)
                    for (int pz = 1; pz < n - 1; ++pz) {
                        std::size_t mid = so * u + st * v + s * pz;
                        std::size_t ids[3] = {mid - s, mid, mid + s};
                        double coef[3] = {1.0, -2.0, 1.0};
                        for (int a = 0; a < 3; ++a)
                            for (int b = 0; b < 3; ++b) m[ids[a]][ids[b]] += lambda * coef[a] * coef[b];
                    }
        }
    }

    std::array<std::vector<double>, 3> out;
    for (int ch = 0; ch < 3; ++ch) out[ch] = solve_dense(m, rhs[ch]);
    return out;
}

} // namespace oracle
