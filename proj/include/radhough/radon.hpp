#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>

#include "radhough/families.hpp"
#include "radhough/grid.hpp"
#include "radhough/images.hpp"
#include "radhough/sinogram.hpp"

namespace radhough {

using Vec2 = std::array<double, 2>;

// Closed forms for one square pixel ------------------------------------------------

/// Radon transform of the indicator of [-a, a]^2 along gamma - omega1 x1 - x2 = 0,
/// i.e. the x1-extent of the chord. Throws SingularInputError for omega1 == 0.
double radon_square_slope(double a, double omega1, double gamma);

/// Radon transform of the indicator of the square of half-side a centred at
/// `center` along gamma - omega . x = 0 (delta(gamma - omega.x) pairing).
///
/// Evaluated through radon_square_slope after relabelling the axes so the
/// slope magnitude is at least one; lines within 1e-6 (relative) of an axis
/// use the exact axis-parallel chord with half-open pixel edges.
double radon_square_normal(double a, Vec2 center, Vec2 omega, double gamma);

/// Arc-length Radon transform of one pixel along gamma - x1 cos(theta) - x2 sin(theta) = 0.
double radon_square_angle(double a, Vec2 center, double theta, double gamma);

// Pixel images ------------------------------------------------------------------------

/// Pointwise (R m)(theta, gamma) of a pixel image, unit-gradient normalization.
double radon_pixel_image(const PixelImage& image, double theta, double gamma);
/// Pointwise (R m)(omega, gamma) for any omega != 0; homogeneous of degree -1.
double radon_pixel_image_normal(const PixelImage& image, Vec2 omega, double gamma);

enum class Normalization {
  UnitGradient,  // arc-length along the line
  Slope,         // raw slope-form values, i.e. unit-gradient times |sin(theta)|
};

/// Exact sinogram over a (theta, gamma) grid: sum over pixels of the closed form.
/// Each theta profile is reduced in a fixed pixel order, so the result does
/// not depend on `threads`.
Sinogram sinogram_pixel(const PixelImage& image, const Discretization& grid,
                        Normalization normalization = Normalization::UnitGradient,
                        unsigned threads = 1);

// Quadrature oracles ------------------------------------------------------------------

struct Quadrature {
  std::size_t samples = 2048;
};

/// Generalized Radon transform by composite-midpoint quadrature along the
/// family's image-space graph chart. Pixel crossings are located by bisection
/// so every sub-interval has a constant image value.
double radon_numeric(const SolvableFamily& family, const PixelImage& image,
                     std::span<const double> lambda, Quadrature quad = {});

/// Charge M(lambda', lambda_t): mass of the image in { x : F(x; lambda') <= lambda_t }.
/// Nested quadrature: midpoint in x1 between breakpoints, level-set roots in x2.
double charge(const SolvableFamily& family, const PixelImage& image,
              std::span<const double> lambda_prime, double lambda_t, Quadrature quad = {});

/// <delta(f), phi> = sum over simple zeros x0 of f in (lo, hi) of phi(x0) / |f'(x0)|.
double dirac_pair_1d(const std::function<double(double)>& f,
                     const std::function<double(double)>& fprime,
                     const std::function<double(double)>& phi, double lo, double hi,
                     std::size_t brackets = 1024);

}  // namespace radhough
