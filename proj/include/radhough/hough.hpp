#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "radhough/families.hpp"
#include "radhough/grid.hpp"
#include "radhough/images.hpp"
#include "radhough/sinogram.hpp"

namespace radhough {

/// Weighted Hough counter H(lambda; lambda*, d) sampled at the cell centres.
struct HoughCounter {
  Discretization disc;
  std::vector<double> values;
  bool rescaled = false;
  /// (point, column) pairs whose selected cell fell outside the lambda_t range.
  std::size_t skipped = 0;

  explicit HoughCounter(Discretization grid);

  std::size_t columns() const { return values.size() / column_length(); }
  std::size_t column_length() const { return disc.extent(disc.t() - 1); }
  std::span<double> column(std::size_t i) {
    return {values.data() + i * column_length(), column_length()};
  }
  std::span<const double> column(std::size_t i) const {
    return {values.data() + i * column_length(), column_length()};
  }
  /// lambda' centre of column i (empty for t = 1).
  std::vector<double> column_center(std::size_t i) const;

  /// Divides by d_t once; a second call throws ContractViolation.
  void rescale_in_place();
};

/// Hough kernel p(x, lambda): 1 iff -d_t/2 <= lambda_t - F(x; c'(lambda')) < d_t/2.
int kernel(const SolvableFamily& family, std::span<const double> x,
           std::span<const double> lambda, const Discretization& disc);

/// The lambda_t index selected by the kernel for point x in the column whose
/// snapped lambda' is `column_center`; nullopt when it leaves the grid.
std::optional<long> column_target(const SolvableFamily& family, std::span<const double> x,
                                  std::span<const double> column_center,
                                  const Discretization& disc);

/// H(lambda) = sum_j mu_j p(x_j, lambda), built column by column.
HoughCounter accumulate_discrete(const SolvableFamily& family, const DiscreteImage& image,
                                 const Discretization& disc, unsigned threads = 1);

struct PixelAccumulation {
  enum class Strategy { ExactStrip, Supersample };
  Strategy strategy = Strategy::ExactStrip;
  std::size_t subsamples = 8;  // per pixel side, Supersample only
};

/// H(lambda) = integral of m(x) p(x, lambda) dx for a pixel image.
///
/// ExactStrip (line-angle only) integrates each pixel's strip mass in closed
/// form; Supersample evaluates the kernel at s x s sub-pixel centres.
HoughCounter accumulate_pixel(const SolvableFamily& family, const PixelImage& image,
                              const Discretization& disc, PixelAccumulation how = {},
                              unsigned threads = 1);

/// Area of { y in [-a, a]^2 : u . y <= s } for a unit vector u.
double half_plane_square_area(double a, double ux, double uy, double s);

/// Rescaled Hough counter H / d_t as a sinogram (provenance hough-rescaled).
Sinogram rescale(const HoughCounter& counter);

struct Peak {
  CellIndex index;
  std::vector<double> center;
  double value;
};

/// Top-k cells by value with non-maximum suppression: a candidate within
/// `min_separation` cells (Chebyshev distance) of an accepted peak is
/// dropped. Ties go to the lexicographically smallest index.
std::vector<Peak> detect_peaks(const Discretization& disc, std::span<const double> values,
                               std::size_t k, std::size_t min_separation);
std::vector<Peak> detect_peaks(const HoughCounter& counter, std::size_t k,
                               std::size_t min_separation);

}  // namespace radhough
