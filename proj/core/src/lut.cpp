#include "tonetk/lut.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tonetk/errors.hpp"
#include "tonetk/parallel.hpp"
#include "tonetk/rng.hpp"

namespace tonetk {

namespace {

// Endpoint-exact lerp: t==0 and t==1 return the stored values bit-for-bit,
// which keeps identity lattices transparent and vertices exact.
inline double lerp(double a, double b, double t) {
    if (t == 1.0) return b;
    return a + t * (b - a);
}

struct CellCoord {
    int i0[3];
    double f[3];
};

inline CellCoord locate(const Lut3D& lut, const Rgb& c) {
    CellCoord cc;
    int n = lut.size;
    for (int k = 0; k < 3; ++k) {
        double v = std::clamp(c[k], 0.0, 1.0);
        double p = v * (n - 1);
        int i = std::min(static_cast<int>(p), n - 2);
        cc.i0[k] = i;
        cc.f[k] = p - i;
    }
    return cc;
}

} // namespace

Lut3D identity_lut(int n) {
    if (n < 2) throw InputError("identity_lut: lattice size must be >= 2");
    Lut3D lut;
    lut.size = n;
    lut.table.resize(static_cast<std::size_t>(n) * n * n);
    double inv = 1.0 / (n - 1);
    for (int b = 0; b < n; ++b)
        for (int g = 0; g < n; ++g)
            for (int r = 0; r < n; ++r)
                lut.at(r, g, b) = {r * inv, g * inv, b * inv};
    return lut;
}

Rgb lookup(const Lut3D& lut, const Rgb& c) {
    CellCoord cc = locate(lut, c);
    int r0 = cc.i0[0], g0 = cc.i0[1], b0 = cc.i0[2];
    double fr = cc.f[0], fg = cc.f[1], fb = cc.f[2];
    Rgb out;
    for (int ch = 0; ch < 3; ++ch) {
        double c00 = lerp(lut.at(r0, g0, b0)[ch], lut.at(r0 + 1, g0, b0)[ch], fr);
        double c10 = lerp(lut.at(r0, g0 + 1, b0)[ch], lut.at(r0 + 1, g0 + 1, b0)[ch], fr);
        double c01 = lerp(lut.at(r0, g0, b0 + 1)[ch], lut.at(r0 + 1, g0, b0 + 1)[ch], fr);
        double c11 = lerp(lut.at(r0, g0 + 1, b0 + 1)[ch], lut.at(r0 + 1, g0 + 1, b0 + 1)[ch], fr);
        double c0 = lerp(c00, c10, fg);
        double c1 = lerp(c01, c11, fg);
        out[ch] = lerp(c0, c1, fb);
    }
    return out;
}

RgbImage apply_lut(const Lut3D& lut, const RgbImage& img, int threads) {
    RgbImage out(img.width, img.height);
    parallel_for(img.pixel_count(), threads, [&](std::size_t i) {
        Rgb c{img.data[3 * i], img.data[3 * i + 1], img.data[3 * i + 2]};
        Rgb m = lookup(lut, c);
        out.data[3 * i] = m.r;
        out.data[3 * i + 1] = m.g;
        out.data[3 * i + 2] = m.b;
    });
    return out;
}

namespace {

struct Footprint {
    std::array<std::size_t, 8> idx;
    std::array<double, 8> w;
};

Footprint footprint_of(const Lut3D& lattice_shape, const Rgb& c) {
    CellCoord cc = locate(lattice_shape, c);
    Footprint fp;
    int n = lattice_shape.size;
    int corner = 0;
    for (int db = 0; db < 2; ++db)
        for (int dg = 0; dg < 2; ++dg)
            for (int dr = 0; dr < 2; ++dr) {
                std::size_t idx = static_cast<std::size_t>(cc.i0[0] + dr) +
                                  static_cast<std::size_t>(n) *
                                      (static_cast<std::size_t>(cc.i0[1] + dg) +
                                       static_cast<std::size_t>(n) * (cc.i0[2] + db));
                double w = (dr ? cc.f[0] : 1.0 - cc.f[0]) * (dg ? cc.f[1] : 1.0 - cc.f[1]) *
                           (db ? cc.f[2] : 1.0 - cc.f[2]);
                fp.idx[corner] = idx;
                fp.w[corner] = w;
                ++corner;
            }
    return fp;
}

// y += lambda * L^T L x where L has one row per interior second difference
// along each lattice axis. Linear ramps (the identity included) are in the
// null space, so the penalty never fights the identity initialization.
void add_regularizer_matvec(const std::vector<double>& x, std::vector<double>& y, int n, double lambda) {
    if (lambda == 0.0 || n < 3) return;
    std::size_t strides[3] = {1, static_cast<std::size_t>(n), static_cast<std::size_t>(n) * n};
    for (int axis = 0; axis < 3; ++axis) {
        std::size_t s = strides[axis];
        std::size_t so = strides[(axis + 1) % 3];
        std::size_t st = strides[(axis + 2) % 3];
        for (int u = 0; u < n; ++u)
            for (int v = 0; v < n; ++v) {
                std::size_t base = so * u + st * v;
                for (int p = 1; p < n - 1; ++p) {
                    std::size_t m = base + s * p;
                    double l = x[m - s] - 2.0 * x[m] + x[m + s];
                    double c = lambda * l;
                    y[m - s] += c;
                    y[m] -= 2.0 * c;
                    y[m + s] += c;
                }
            }
    }
}

double regularizer_value(const std::vector<double>& x, int n, double lambda) {
    if (lambda == 0.0 || n < 3) return 0.0;
    double total = 0.0;
    std::size_t strides[3] = {1, static_cast<std::size_t>(n), static_cast<std::size_t>(n) * n};
    for (int axis = 0; axis < 3; ++axis) {
        std::size_t s = strides[axis];
        std::size_t so = strides[(axis + 1) % 3];
        std::size_t st = strides[(axis + 2) % 3];
        for (int u = 0; u < n; ++u)
            for (int v = 0; v < n; ++v) {
                std::size_t base = so * u + st * v;
                for (int p = 1; p < n - 1; ++p) {
                    std::size_t m = base + s * p;
                    double l = x[m - s] - 2.0 * x[m] + x[m + s];
                    total += l * l;
                }
            }
    }
    return lambda * total;
}

} // namespace

LutFitResult fit_lut(const std::vector<ColorCorrespondence>& pairs, const LutFitConfig& cfg) {
    if (pairs.empty()) throw InputError("fit_lut: no correspondences");
    if (cfg.lattice_size < 2) throw InputError("fit_lut: lattice size must be >= 2");
    if (!(cfg.tolerance > 0.0)) throw InputError("fit_lut: tolerance must be positive");

    const int n = cfg.lattice_size;
    const std::size_t vertex_count = static_cast<std::size_t>(n) * n * n;
    Lut3D lut = identity_lut(n);

    // Canonical processing order makes the result independent of the caller's
    // correspondence ordering (accumulation happens in sorted order).
    std::vector<ColorCorrespondence> sorted(pairs);
    std::sort(sorted.begin(), sorted.end(), [](const ColorCorrespondence& a, const ColorCorrespondence& b) {
        auto key = [](const ColorCorrespondence& p) {
            return std::array<double, 7>{p.input.r, p.input.g, p.input.b,
                                         p.target.r, p.target.g, p.target.b, p.weight};
        };
        return key(a) < key(b);
    });

    std::vector<Footprint> fps;
    fps.reserve(sorted.size());
    std::vector<double> weights;
    weights.reserve(sorted.size());
    for (const auto& p : sorted) {
        if (p.weight < 0.0) throw InputError("fit_lut: negative correspondence weight");
        fps.push_back(footprint_of(lut, p.input));
        weights.push_back(p.weight);
    }

    std::vector<double> data_weight(vertex_count, 0.0);
    for (std::size_t i = 0; i < fps.size(); ++i)
        for (int k = 0; k < 8; ++k) data_weight[fps[i].idx[k]] += weights[i] * fps[i].w[k];

    LutFitReport report;
    report.unconstrained_vertices =
        static_cast<int>(std::count(data_weight.begin(), data_weight.end(), 0.0));

    auto matvec = [&](const std::vector<double>& x, std::vector<double>& y) {
        std::fill(y.begin(), y.end(), 0.0);
        for (std::size_t i = 0; i < fps.size(); ++i) {
            const Footprint& fp = fps[i];
            double t = 0.0;
            for (int k = 0; k < 8; ++k) t += fp.w[k] * x[fp.idx[k]];
            double coef = weights[i] * t;
            for (int k = 0; k < 8; ++k) y[fp.idx[k]] += fp.w[k] * coef;
        }
        add_regularizer_matvec(x, y, n, cfg.smoothness);
    };

    auto objective = [&](const std::vector<double>& x, int ch) {
        double data = 0.0;
        for (std::size_t i = 0; i < fps.size(); ++i) {
            const Footprint& fp = fps[i];
            double t = 0.0;
            for (int k = 0; k < 8; ++k) t += fp.w[k] * x[fp.idx[k]];
            double resid = t - pairs[i].target[ch];
            data += weights[i] * resid * resid;
        }
        return data + regularizer_value(x, n, cfg.smoothness);
    };

    bool all_converged = true;
    std::vector<double> x(vertex_count), b(vertex_count), r(vertex_count), p(vertex_count), q(vertex_count);
    for (int ch = 0; ch < 3; ++ch) {
        for (std::size_t v = 0; v < vertex_count; ++v) x[v] = lut.table[v][ch];
        std::fill(b.begin(), b.end(), 0.0);
        for (std::size_t i = 0; i < fps.size(); ++i) {
            double coef = weights[i] * pairs[i].target[ch];
            for (int k = 0; k < 8; ++k) b[fps[i].idx[k]] += fps[i].w[k] * coef;
        }

        matvec(x, q);
        double bnorm = 0.0;
        for (std::size_t v = 0; v < vertex_count; ++v) {
            r[v] = b[v] - q[v];
            bnorm += b[v] * b[v];
        }
        double stop = cfg.tolerance * (std::sqrt(bnorm) + 1.0);
        double rr = 0.0;
        for (double rv : r) rr += rv * rv;
        p = r;

        auto& trace = report.objective_trace[ch];
        trace.push_back(objective(x, ch));
        int iter = 0;
        bool converged = std::sqrt(rr) <= stop;
        while (!converged && iter < cfg.max_iterations) {
            matvec(p, q);
            double pq = 0.0;
            for (std::size_t v = 0; v < vertex_count; ++v) pq += p[v] * q[v];
            if (pq <= 0.0) break; // numerically exhausted search direction
            double alpha = rr / pq;
            for (std::size_t v = 0; v < vertex_count; ++v) {
                x[v] += alpha * p[v];
                r[v] -= alpha * q[v];
            }
            double rr_new = 0.0;
            for (double rv : r) rr_new += rv * rv;
            double beta = rr_new / rr;
            for (std::size_t v = 0; v < vertex_count; ++v) p[v] = r[v] + beta * p[v];
            rr = rr_new;
            ++iter;
            trace.push_back(objective(x, ch));
            converged = std::sqrt(rr) <= stop;
        }
        report.iterations = std::max(report.iterations, iter);
        all_converged = all_converged && converged;
        for (std::size_t v = 0; v < vertex_count; ++v) lut.table[v][ch] = x[v];
    }

    for (auto& entry : lut.table)
        for (int ch = 0; ch < 3; ++ch) entry[ch] = std::clamp(entry[ch], 0.0, 1.0);

    report.converged = all_converged;
    double data_residual = 0.0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        Rgb got = lookup(lut, pairs[i].input);
        for (int ch = 0; ch < 3; ++ch) {
            double d = got[ch] - pairs[i].target[ch];
            data_residual += weights[i] * d * d;
        }
    }
    report.data_residual = data_residual;
    return {std::move(lut), std::move(report)};
}

LutFitResult fit_lut_from_images(const RgbImage& content, const RgbImage& stylized, const LutFitConfig& cfg) {
    if (!content.same_size(stylized)) throw InputError("fit_lut_from_images: dimension mismatch");
    std::size_t total = content.pixel_count();
    if (total == 0) throw InputError("fit_lut_from_images: empty images");
    std::size_t stride = 1;
    if (cfg.max_correspondences > 0 && total > cfg.max_correspondences)
        stride = (total + cfg.max_correspondences - 1) / cfg.max_correspondences;
    std::vector<ColorCorrespondence> pairs;
    pairs.reserve(total / stride + 1);
    for (std::size_t i = 0; i < total; i += stride) {
        pairs.push_back({{content.data[3 * i], content.data[3 * i + 1], content.data[3 * i + 2]},
                         {stylized.data[3 * i], stylized.data[3 * i + 1], stylized.data[3 * i + 2]},
                         1.0});
    }
    return fit_lut(pairs, cfg);
}

Lut3D random_perturbation_lut(std::uint64_t seed, double strength, int n) {
    if (!(strength >= 0.0 && strength <= 1.0))
        throw InputError("random_perturbation_lut: strength must be in [0,1]");
    Lut3D lut = identity_lut(n);
    if (strength == 0.0) return lut;

    // Coarse offset grid, trilinearly upsampled onto the lattice.
    constexpr int kCoarse = 4;
    Rng rng(seed);
    std::vector<Rgb> coarse(kCoarse * kCoarse * kCoarse);
    for (auto& c : coarse)
        c = {rng.uniform(-strength, strength), rng.uniform(-strength, strength),
             rng.uniform(-strength, strength)};
    auto coarse_at = [&](int i, int j, int k) -> const Rgb& {
        return coarse[static_cast<std::size_t>(i) + kCoarse * (static_cast<std::size_t>(j) + kCoarse * k)];
    };

    double inv = 1.0 / (n - 1);
    for (int b = 0; b < n; ++b)
        for (int g = 0; g < n; ++g)
            for (int r = 0; r < n; ++r) {
                double u[3] = {r * inv * (kCoarse - 1), g * inv * (kCoarse - 1), b * inv * (kCoarse - 1)};
                int i0[3];
                double f[3];
                for (int k = 0; k < 3; ++k) {
                    i0[k] = std::min(static_cast<int>(u[k]), kCoarse - 2);
                    f[k] = u[k] - i0[k];
                }
                Rgb offset;
                for (int ch = 0; ch < 3; ++ch) {
                    double c00 = lerp(coarse_at(i0[0], i0[1], i0[2])[ch], coarse_at(i0[0] + 1, i0[1], i0[2])[ch], f[0]);
                    double c10 = lerp(coarse_at(i0[0], i0[1] + 1, i0[2])[ch], coarse_at(i0[0] + 1, i0[1] + 1, i0[2])[ch], f[0]);
                    double c01 = lerp(coarse_at(i0[0], i0[1], i0[2] + 1)[ch], coarse_at(i0[0] + 1, i0[1], i0[2] + 1)[ch], f[0]);
                    double c11 = lerp(coarse_at(i0[0], i0[1] + 1, i0[2] + 1)[ch], coarse_at(i0[0] + 1, i0[1] + 1, i0[2] + 1)[ch], f[0]);
                    offset[ch] = lerp(lerp(c00, c10, f[1]), lerp(c01, c11, f[1]), f[2]);
                }
                Rgb& entry = lut.at(r, g, b);
                for (int ch = 0; ch < 3; ++ch)
                    entry[ch] = std::clamp(entry[ch] + offset[ch], 0.0, 1.0);
            }
    return lut;
}

} // namespace tonetk
