#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "radhough/images.hpp"
#include "radhough/sinogram.hpp"

namespace radhough {

/// Multiplicative Gaussian noise S_n = S_t (1 + level * eps).
struct NoiseSpec {
  double level = 1.0;
  std::uint64_t seed = 1;
};

/// Name of the generator and normal transform, for metadata echoes.
inline constexpr const char* kNoiseAlgorithm = "mt19937_64+box-muller";

/// Draws eps row-major over the cells: mt19937_64 seeded with `seed`, 53-bit
/// uniforms, Box-Muller pairs (cos branch first).
Sinogram add_noise(const Sinogram& s, NoiseSpec spec);

/// Output pixel layout for the reconstructions.
struct ImageGrid {
  std::size_t width;
  std::size_t height;
  Window window;

  static ImageGrid like(const PixelImage& image) {
    return {image.width(), image.height(), image.window()};
  }
};

/// Unfiltered back-projection: sum_i s(theta_i, x . omega_i) * d_theta, linear
/// interpolation in gamma, zero outside the gamma range.
PixelImage backproject(const Sinogram& s, const ImageGrid& out, unsigned threads = 1);

enum class FilterKind { None, RamLak, SheppLogan, Cosine, Hamming, Hann };

std::string to_string(FilterKind kind);
FilterKind filter_from_string(const std::string& text);
/// The six reconstruction baselines in report order.
std::vector<FilterKind> all_filters();

struct FilterOptions {
  FilterKind kind = FilterKind::RamLak;
  /// Hamming window alpha + beta cos(pi nu / nu_N).
  double hamming_alpha = 0.54;
  double hamming_beta = 0.46;
};

/// Window w(nu) multiplying the ramp; nyquist = 1 / (2 d_gamma).
double filter_window(const FilterOptions& filter, double nu, double nyquist);

/// Ramp-filters every theta profile in the frequency domain (zero padding to
/// the next power of two >= 2J) and back-projects. FilterKind::None is plain
/// back-projection.
PixelImage fbp(const Sinogram& s, const FilterOptions& filter, const ImageGrid& out,
               unsigned threads = 1);

/// Pixels (row, col) whose closed square meets gamma = x1 cos(theta) + x2 sin(theta),
/// each listed once.
std::vector<std::pair<std::size_t, std::size_t>> supercover(const ImageGrid& grid, double theta,
                                                            double gamma);

/// Hough-threshold inversion: every cell with v = d_gamma * S > 0 and
/// v >= fraction * max(v) adds v to each pixel its line crosses.
/// Per-chunk partial images are merged in chunk order.
PixelImage hough_invert(const Sinogram& s, const ImageGrid& out, double fraction,
                        unsigned threads = 1);

struct ErrorReport {
  std::string method;
  double threshold = -1.0;  // Hough runs only; -1 for the baselines
  double error = 0.0;
  std::uint64_t seed = 0;
  double recon_min = 0.0;  // grey-rescale range over the mask
  double recon_max = 0.0;
  bool constant = false;  // zero dynamic range: rescaled to all zeros
};

/// Min-max rescales `recon` to [0, 1] over the masked-in pixels and returns
/// the Frobenius norm of recon - truth over the mask.
ErrorReport evaluate(const PixelImage& recon, const PixelImage& truth,
                     std::span<const unsigned char> mask);

struct SweepOptions {
  std::vector<double> thresholds;
  std::vector<std::uint64_t> seeds;
  double level = 1.0;
  unsigned threads = 1;
};

/// For each seed: noise the clean sinogram, then report the six BP/FBP
/// baselines followed by one Hough inversion per threshold.
std::vector<ErrorReport> threshold_sweep(const Sinogram& clean, const PixelImage& truth,
                                         std::span<const unsigned char> mask,
                                         const SweepOptions& options);

}  // namespace radhough
