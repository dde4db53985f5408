#pragma once

#include "tonetk/color.hpp"
#include "tonetk/rng.hpp"

namespace tonetk {

// Pixelwise color operations shared by the scorer-training degradations and
// the dataset content augmentation. All are deterministic (given the rng
// state where one is taken) and leave image dimensions unchanged.

// Scales LAB chroma by factor in [0,1]; factor 0 produces a neutral-axis
// (grayscale) image, factor 1 is the identity.
RgbImage desaturate(const RgbImage& img, double factor);

// Multiplies linear-light RGB by 2^ev and converts back; results clamped.
RgbImage exposure_shift(const RgbImage& img, double ev);

// Box blur with the given radius (window 2*radius+1), replicated borders.
RgbImage box_blur(const RgbImage& img, int radius);

// Adds i.i.d. Gaussian noise with the given sigma per channel, clamped to [0,1].
RgbImage add_gaussian_noise(const RgbImage& img, double sigma, Rng& rng);

} // namespace tonetk
