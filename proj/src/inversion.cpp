#include "radhough/inversion.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <random>

#include "radhough/error.hpp"
#include "radhough/parallel.hpp"

namespace radhough {

namespace {

void require_plane_sinogram(const Sinogram& s, const char* what) {
  if (s.disc.t() != 2) throw ContractViolation(std::string(what) + ": needs a (theta, gamma) sinogram");
  if (s.values.size() != s.disc.size()) throw ContractViolation(std::string(what) + ": value count differs from grid");
}

// Back-projection of row-major (theta, gamma) samples onto the output grid.
PixelImage smear(const Discretization& disc, std::span<const double> values, const ImageGrid& out,
                 unsigned threads) {
  PixelImage image(out.width, out.height, out.window);
  const std::size_t angles = disc.extent(0);
  const std::size_t length = disc.extent(1);
  const double d_theta = disc.d()[0];
  const double star = disc.lambda_star()[1];
  const double step = disc.d()[1];
  const double first = static_cast<double>(disc.n_lo()[1]);
  std::vector<double> cs(angles), sn(angles);
  for (std::size_t i = 0; i < angles; ++i) {
    const double theta = disc.center_component(0, disc.n_lo()[0] + static_cast<long>(i));
    cs[i] = std::cos(theta);
    sn[i] = std::sin(theta);
  }
  const double last = static_cast<double>(length - 1);
  parallel_for(out.height, threads, [&](std::size_t r) {
    const double y = image.center_y(r);
    for (std::size_t c = 0; c < out.width; ++c) {
      const double x = image.center_x(c);
      double sum = 0.0;
      for (std::size_t i = 0; i < angles; ++i) {
        const double u = (x * cs[i] + y * sn[i] - star) / step - first;
        if (!(u >= 0.0 && u <= last)) continue;
        const auto j = std::min(static_cast<std::size_t>(u), length - (length > 1 ? 2 : 1));
        const double frac = u - static_cast<double>(j);
        const double* row = values.data() + i * length;
        sum += length > 1 ? row[j] + frac * (row[j + 1] - row[j]) : row[j];
      }
      image.at(r, c) = sum * d_theta;
    }
  });
  return image;
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

}  // namespace

Sinogram add_noise(const Sinogram& s, NoiseSpec spec) {
  if (!(spec.level >= 0.0) || !std::isfinite(spec.level)) throw DomainError("noise level must be >= 0");
  Sinogram out = s;
  out.provenance = Provenance::Noisy;
  out.metadata.push_back("noise level=" + std::to_string(spec.level) + " seed=" + std::to_string(spec.seed) +
                         " rng=" + kNoiseAlgorithm);
  std::mt19937_64 gen(spec.seed);
  constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
  const auto uniform_open = [&] { return (static_cast<double>(gen() >> 11) + 1.0) * kScale; };  // (0, 1]
  const auto uniform = [&] { return static_cast<double>(gen() >> 11) * kScale; };                // [0, 1)
  double spare = 0.0;
  bool has_spare = false;
  for (double& v : out.values) {
    double eps;
    if (has_spare) {
      eps = spare;
      has_spare = false;
    } else {
      const double radius = std::sqrt(-2.0 * std::log(uniform_open()));
      const double angle = 2.0 * M_PI * uniform();
      eps = radius * std::cos(angle);
      spare = radius * std::sin(angle);
      has_spare = true;
    }
    v *= 1.0 + spec.level * eps;
  }
  return out;
}

PixelImage backproject(const Sinogram& s, const ImageGrid& out, unsigned threads) {
  require_plane_sinogram(s, "backproject");
  return smear(s.disc, s.values, out, threads);
}

std::string to_string(FilterKind kind) {
  switch (kind) {
    case FilterKind::None: return "none";
    case FilterKind::RamLak: return "ramlak";
    case FilterKind::SheppLogan: return "shepplogan";
    case FilterKind::Cosine: return "cosine";
    case FilterKind::Hamming: return "hamming";
    case FilterKind::Hann: return "hann";
  }
  return "unknown";
}

FilterKind filter_from_string(const std::string& text) {
  for (FilterKind k : all_filters())
    if (to_string(k) == text) return k;
  throw DomainError("unknown filter: " + text);
}

std::vector<FilterKind> all_filters() {
  return {FilterKind::None,   FilterKind::RamLak,  FilterKind::SheppLogan,
          FilterKind::Cosine, FilterKind::Hamming, FilterKind::Hann};
}

double filter_window(const FilterOptions& filter, double nu, double nyquist) {
  const double r = std::abs(nu) / nyquist;
  switch (filter.kind) {
    case FilterKind::None:
    case FilterKind::RamLak: return 1.0;
    case FilterKind::SheppLogan: {
      const double z = M_PI * r / 2.0;
      return z == 0.0 ? 1.0 : std::sin(z) / z;
    }
    case FilterKind::Cosine: return std::cos(M_PI * r / 2.0);
    case FilterKind::Hamming: return filter.hamming_alpha + filter.hamming_beta * std::cos(M_PI * r);
    case FilterKind::Hann: return 0.5 * (1.0 + std::cos(M_PI * r));
  }
  return 1.0;
}

PixelImage fbp(const Sinogram& s, const FilterOptions& filter, const ImageGrid& out, unsigned threads) {
  require_plane_sinogram(s, "fbp");
  if (filter.kind == FilterKind::None) return smear(s.disc, s.values, out, threads);
  const double step = s.disc.d()[1];
  if (!(step > 0.0) || !std::isfinite(step)) throw DomainError("fbp needs a uniform gamma grid");

  const std::size_t length = s.profile_length();
  const std::size_t n = next_pow2(2 * length);
  const std::size_t bins = n / 2 + 1;
  const double nyquist = 0.5 / step;
  std::vector<double> response(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    const double nu = static_cast<double>(k) / (static_cast<double>(n) * step);
    // 1/n undoes the unnormalized inverse transform.
    response[k] = nu * filter_window(filter, nu, nyquist) / static_cast<double>(n);
  }

  std::unique_ptr<double, FftwFree> real(fftw_alloc_real(n));
  std::unique_ptr<fftw_complex, FftwFree> spectrum(fftw_alloc_complex(bins));
  const fftw_plan forward = fftw_plan_dft_r2c_1d(static_cast<int>(n), real.get(), spectrum.get(), FFTW_ESTIMATE);
  const fftw_plan inverse = fftw_plan_dft_c2r_1d(static_cast<int>(n), spectrum.get(), real.get(), FFTW_ESTIMATE);

  std::vector<double> filtered(s.values.size());
  for (std::size_t i = 0; i < s.profiles(); ++i) {
    const auto profile = s.profile(i);
    std::fill(real.get(), real.get() + n, 0.0);
    std::copy(profile.begin(), profile.end(), real.get());
    fftw_execute(forward);
    for (std::size_t k = 0; k < bins; ++k) {
      spectrum.get()[k][0] *= response[k];
      spectrum.get()[k][1] *= response[k];
    }
    fftw_execute(inverse);
    std::copy(real.get(), real.get() + length, filtered.begin() + static_cast<std::ptrdiff_t>(i * length));
  }
  fftw_destroy_plan(forward);
  fftw_destroy_plan(inverse);
  return smear(s.disc, filtered, out, threads);
}

std::vector<std::pair<std::size_t, std::size_t>> supercover(const ImageGrid& grid, double theta,
                                                            double gamma) {
  const double side = (grid.window.x_max - grid.window.x_min) / static_cast<double>(grid.width);
  const Window& w = grid.window;
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  const auto span_of = [](double lo_edge, double origin, double extent_lo, double extent_hi,
                          double side_len, long count, bool descending) {
    // Index range of closed cells [edge_k, edge_k + side] meeting [extent_lo, extent_hi].
    long first, last;
    if (descending) {
      first = static_cast<long>(std::ceil((origin - extent_hi) / side_len - 1.0));
      last = static_cast<long>(std::floor((origin - extent_lo) / side_len));
    } else {
      first = static_cast<long>(std::ceil((extent_lo - lo_edge) / side_len - 1.0));
      last = static_cast<long>(std::floor((extent_hi - lo_edge) / side_len));
    }
    return std::pair<long, long>{std::max(first, 0L), std::min(last, count - 1)};
  };
  if (std::abs(s) >= std::abs(c)) {
    // Walk columns; x2 = (gamma - x1 c) / s is monotone across each column.
    for (std::size_t col = 0; col < grid.width; ++col) {
      const double xl = w.x_min + side * static_cast<double>(col);
      const double y0 = (gamma - xl * c) / s;
      const double y1 = (gamma - (xl + side) * c) / s;
      const auto [r0, r1] = span_of(0.0, w.y_max, std::min(y0, y1), std::max(y0, y1), side,
                                    static_cast<long>(grid.height), true);
      for (long r = r0; r <= r1; ++r) cells.emplace_back(static_cast<std::size_t>(r), col);
    }
  } else {
    // Walk rows; x1 = (gamma - x2 s) / c.
    for (std::size_t row = 0; row < grid.height; ++row) {
      const double yt = w.y_max - side * static_cast<double>(row);
      const double x0 = (gamma - yt * s) / c;
      const double x1 = (gamma - (yt - side) * s) / c;
      const auto [c0, c1] = span_of(w.x_min, 0.0, std::min(x0, x1), std::max(x0, x1), side,
                                    static_cast<long>(grid.width), false);
      for (long k = c0; k <= c1; ++k) cells.emplace_back(row, static_cast<std::size_t>(k));
    }
  }
  return cells;
}

PixelImage hough_invert(const Sinogram& s, const ImageGrid& out, double fraction, unsigned threads) {
  require_plane_sinogram(s, "hough_invert");
  if (!(fraction >= 0.0 && fraction <= 1.0)) throw DomainError("threshold fraction must lie in [0, 1]");
  const double d_gamma = s.disc.d()[1];
  double peak = -std::numeric_limits<double>::infinity();
  for (double v : s.values) peak = std::max(peak, d_gamma * v);
  PixelImage image(out.width, out.height, out.window);
  if (!(peak > 0.0)) return image;
  const double cut = fraction * peak;

  struct Cell {
    double theta, gamma, value;
  };
  std::vector<Cell> traced;
  const std::size_t length = s.profile_length();
  for (std::size_t pos = 0; pos < s.values.size(); ++pos) {
    const double v = d_gamma * s.values[pos];
    if (v > 0.0 && v >= cut) {
      const long i = s.disc.n_lo()[0] + static_cast<long>(pos / length);
      const long j = s.disc.n_lo()[1] + static_cast<long>(pos % length);
      traced.push_back({s.disc.center_component(0, i), s.disc.center_component(1, j), v});
    }
  }

  const unsigned workers = resolve_threads(threads);
  std::vector<std::vector<double>> partial(std::max<std::size_t>(1, std::min<std::size_t>(workers, traced.size())));
  parallel_chunks(traced.size(), workers, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    auto& acc = partial[chunk];
    acc.assign(out.width * out.height, 0.0);
    for (std::size_t k = begin; k < end; ++k)
      for (const auto& [r, c] : supercover(out, traced[k].theta, traced[k].gamma))
        acc[r * out.width + c] += traced[k].value;
  });
  auto values = image.values();
  for (const auto& acc : partial)
    for (std::size_t p = 0; p < acc.size(); ++p) values[p] += acc[p];
  return image;
}

ErrorReport evaluate(const PixelImage& recon, const PixelImage& truth, std::span<const unsigned char> mask) {
  if (recon.width() != truth.width() || recon.height() != truth.height())
    throw ContractViolation("evaluate: image dimensions differ");
  if (mask.size() != truth.values().size()) throw ContractViolation("evaluate: mask size differs");
  const auto r = recon.values();
  const auto t = truth.values();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < r.size(); ++p) {
    if (!mask[p]) continue;
    lo = std::min(lo, r[p]);
    hi = std::max(hi, r[p]);
  }
  ErrorReport report;
  report.recon_min = lo;
  report.recon_max = hi;
  report.constant = !(hi > lo);
  double sum = 0.0;
  for (std::size_t p = 0; p < r.size(); ++p) {
    if (!mask[p]) continue;
    const double scaled = report.constant ? 0.0 : (r[p] - lo) / (hi - lo);
    const double diff = scaled - t[p];
    sum += diff * diff;
  }
  report.error = std::sqrt(sum);
  return report;
}

std::vector<ErrorReport> threshold_sweep(const Sinogram& clean, const PixelImage& truth,
                                         std::span<const unsigned char> mask,
                                         const SweepOptions& options) {
  for (double tau : options.thresholds)
    if (!(tau >= 0.0 && tau <= 1.0)) throw DomainError("thresholds must lie in [0, 1]");
  const ImageGrid grid = ImageGrid::like(truth);
  std::vector<ErrorReport> reports;
  for (std::uint64_t seed : options.seeds) {
    const Sinogram noisy = add_noise(clean, {options.level, seed});
    for (FilterKind kind : all_filters()) {
      ErrorReport r = evaluate(fbp(noisy, {kind}, grid, options.threads), truth, mask);
      r.method = kind == FilterKind::None ? "bp" : "fbp-" + to_string(kind);
      r.seed = seed;
      reports.push_back(std::move(r));
    }
    for (double tau : options.thresholds) {
      ErrorReport r = evaluate(hough_invert(noisy, grid, tau, options.threads), truth, mask);
      r.method = "hough";
      r.threshold = tau;
      r.seed = seed;
      reports.push_back(std::move(r));
    }
  }
  return reports;
}

}  // namespace radhough
