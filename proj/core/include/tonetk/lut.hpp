#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "tonetk/color.hpp"

namespace tonetk {

// Cubic RGB lattice of output colors, r fastest-varying (cube file order).
struct Lut3D {
    int size = 0;
    std::vector<Rgb> table; // size^3 entries in [0,1]

    std::size_t index(int r, int g, int b) const {
        return static_cast<std::size_t>(r) +
               static_cast<std::size_t>(size) * (static_cast<std::size_t>(g) + static_cast<std::size_t>(size) * b);
    }
    Rgb& at(int r, int g, int b) { return table[index(r, g, b)]; }
    const Rgb& at(int r, int g, int b) const { return table[index(r, g, b)]; }
};

// Vertex (i,j,k) stores (i,j,k)/(n-1). Trilinear lookup through an identity
// lattice reproduces inputs exactly for power-of-two n-1 (33 included).
Lut3D identity_lut(int n);

// Trilinear blend of the 8 enclosing lattice vertices; inputs clamped to
// [0,1] first, exact at vertices.
Rgb lookup(const Lut3D& lut, const Rgb& c);

// Per-pixel lookup; dimensions preserved. threads: 0 = machine parallelism.
RgbImage apply_lut(const Lut3D& lut, const RgbImage& img, int threads = 1);

struct ColorCorrespondence {
    Rgb input;           // content pixel
    Rgb target;          // stylized pixel
    double weight = 1.0; // nonnegative
};

struct LutFitConfig {
    int lattice_size = 33;
    double smoothness = 1e-3; // weight of the lattice second-difference penalty
    int max_iterations = 200;
    double tolerance = 1e-8;
    // Uniform-stride subsampling cap for fit_lut_from_images; 0 disables.
    std::size_t max_correspondences = 100000;
};

struct LutFitReport {
    double data_residual = 0.0; // sum_i w_i * |LUT(c_i) - s_i|^2 at the solution
    int iterations = 0;         // max over channels
    int unconstrained_vertices = 0;
    bool converged = false;
    // Full objective (data + smoothness) per CG iteration, one trace per channel.
    std::array<std::vector<double>, 3> objective_trace;

    std::string to_json() const;
};

struct LutFitResult {
    Lut3D lut;
    LutFitReport report;
};

// Least-squares LUT estimation: minimizes sum_i w_i |LUT(c_i) - s_i|^2 plus
// smoothness * |second differences|^2, conjugate gradient on the normal
// equations starting from the identity lattice. Because LUT(c) is linear in
// the vertex values for fixed c, each correspondence touches exactly 8
// vertices and the system is sparse. Throws InputError on empty input;
// non-convergence is flagged in the report, best iterate returned.
LutFitResult fit_lut(const std::vector<ColorCorrespondence>& pairs, const LutFitConfig& cfg = {});

// One correspondence per pixel (uniform-stride subsampled past the cap),
// then fit_lut. Throws on dimension mismatch.
LutFitResult fit_lut_from_images(const RgbImage& content, const RgbImage& stylized,
                                 const LutFitConfig& cfg = {});

// Adobe cube text format: optional TITLE, LUT_3D_SIZE N, then N^3 lines of
// three decimals with r fastest-varying. write_cube emits 6 decimal places.
// Malformed input raises InputError citing the offending line number.
Lut3D read_cube(const std::string& path);
void write_cube(const Lut3D& lut, const std::string& path, const std::string& title = "");

// Identity lattice plus smooth low-frequency offsets bounded by strength
// (from a trilinearly upsampled coarse offset grid), clamped to [0,1].
// Deterministic per seed; strength 0 returns the identity exactly.
Lut3D random_perturbation_lut(std::uint64_t seed, double strength, int n = 33);

} // namespace tonetk
