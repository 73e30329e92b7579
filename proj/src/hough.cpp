#include "radhough/hough.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "radhough/error.hpp"
#include "radhough/parallel.hpp"

namespace radhough {

HoughCounter::HoughCounter(Discretization grid) : disc(std::move(grid)), values(disc.size(), 0.0) {}

std::vector<double> HoughCounter::column_center(std::size_t i) const {
  if (disc.t() == 1) return {};
  const CellIndex index = disc.unflat(i * column_length());
  std::vector<double> center(disc.t() - 1);
  for (std::size_t k = 0; k < center.size(); ++k) center[k] = disc.center_component(k, index[k]);
  return center;
}

void HoughCounter::rescale_in_place() {
  if (rescaled) throw ContractViolation("Hough counter is already rescaled");
  const double inv = 1.0 / disc.d().back();
  for (double& v : values) v *= inv;
  rescaled = true;
}

int kernel(const SolvableFamily& family, std::span<const double> x,
           std::span<const double> lambda, const Discretization& disc) {
  family.require_in_image_domain(x);
  if (lambda.size() != disc.t() || disc.t() != family.t())
    throw ContractViolation("kernel: lambda, grid and family dimensions differ");
  if (!disc.contains(lambda)) throw DomainError("kernel: lambda outside the investigation domain");
  std::vector<double> snapped;
  if (disc.t() > 1) snapped = disc.snap_prefix(lambda.first(disc.t() - 1));
  const double half = 0.5 * disc.d().back();
  const double diff = lambda.back() - family.F(x, snapped);
  return (-half <= diff && diff < half) ? 1 : 0;
}

std::optional<long> column_target(const SolvableFamily& family, std::span<const double> x,
                                  std::span<const double> column_center,
                                  const Discretization& disc) {
  const std::size_t last = disc.t() - 1;
  const double value = family.F(x, column_center);
  if (!std::isfinite(value)) return std::nullopt;
  const double step = disc.d()[last];
  const double half = 0.5 * step;
  // -d/2 <= center(n) - F < d/2, i.e. n = ceil((F - lambda*)/d - 1/2); the
  // correction steps absorb rounding in the centre evaluation.
  long n = static_cast<long>(std::ceil((value - disc.lambda_star()[last]) / step - 0.5));
  const double diff = disc.center_component(last, n) - value;
  if (diff < -half) ++n;
  else if (diff >= half) --n;
  if (n < disc.n_lo()[last] || n > disc.n_hi()[last]) return std::nullopt;
  return n;
}

HoughCounter accumulate_discrete(const SolvableFamily& family, const DiscreteImage& image,
                                 const Discretization& disc, unsigned threads) {
  if (disc.t() != family.t()) throw ContractViolation("grid and family dimensions differ");
  if (image.dim() != family.n()) throw ContractViolation("point and family dimensions differ");
  for (std::size_t j = 0; j < image.size(); ++j) family.require_in_image_domain(image.point(j));

  HoughCounter counter(disc);
  const long lo = disc.n_lo().back();
  std::vector<std::size_t> skipped(counter.columns(), 0);
  parallel_for(counter.columns(), threads, [&](std::size_t i) {
    const auto center = counter.column_center(i);
    auto column = counter.column(i);
    for (std::size_t j = 0; j < image.size(); ++j) {
      const auto n = column_target(family, image.point(j), center, disc);
      if (!n) {
        ++skipped[i];
        continue;
      }
      column[static_cast<std::size_t>(*n - lo)] += image.weight(j);
    }
  });
  counter.skipped = std::accumulate(skipped.begin(), skipped.end(), std::size_t{0});
  return counter;
}

double half_plane_square_area(double a, double ux, double uy, double s) {
  const double p = std::abs(ux);
  const double q = std::abs(uy);
  const double full = 4.0 * a * a;
  const double major = std::max(p, q);
  const double minor = std::min(p, q);
  if (major == 0.0) return s >= 0.0 ? full : 0.0;
  if (minor < 1e-6 * major) return 2.0 * a * std::clamp(s / major + a, 0.0, 2.0 * a);
  // Piecewise-quadratic CDF of the projection of the square onto u.
  const auto ramp2 = [](double z) { return z > 0.0 ? z * z : 0.0; };
  const double wide = a * (p + q);
  const double narrow = a * (major - minor);
  const double area = (ramp2(s + wide) - ramp2(s + narrow) - ramp2(s - narrow) + ramp2(s - wide)) /
                      (2.0 * p * q);
  return std::clamp(area, 0.0, full);
}

HoughCounter accumulate_pixel(const SolvableFamily& family, const PixelImage& image,
                              const Discretization& disc, PixelAccumulation how,
                              unsigned threads) {
  if (family.n() != 2) throw ContractViolation("accumulate_pixel needs a plane family");
  if (disc.t() != family.t()) throw ContractViolation("grid and family dimensions differ");
  const bool exact = how.strategy == PixelAccumulation::Strategy::ExactStrip;
  if (exact && family.name() != "line-angle")
    throw ContractViolation("exact-strip accumulation is only available for the line-angle family");
  if (!exact && how.subsamples == 0) throw ContractViolation("supersampling needs s >= 1");

  struct Pixel {
    double cx, cy, value;
  };
  std::vector<Pixel> pixels;
  for (std::size_t r = 0; r < image.height(); ++r)
    for (std::size_t c = 0; c < image.width(); ++c)
      if (image.at(r, c) != 0.0) pixels.push_back({image.center_x(c), image.center_y(r), image.at(r, c)});

  HoughCounter counter(disc);
  const std::size_t last = disc.t() - 1;
  const long lo = disc.n_lo()[last];
  const long hi = disc.n_hi()[last];
  const double step = disc.d()[last];
  const double star = disc.lambda_star()[last];
  const double a = image.half_side();

  parallel_for(counter.columns(), threads, [&](std::size_t i) {
    const auto center = counter.column_center(i);
    auto column = counter.column(i);
    if (exact) {
      const double ux = std::cos(center[0]);
      const double uy = std::sin(center[0]);
      const double reach = a * (std::abs(ux) + std::abs(uy));
      for (const Pixel& px : pixels) {
        const double proj = ux * px.cx + uy * px.cy;
        // Cells whose strip (c - d/2, c + d/2] meets [proj - reach, proj + reach].
        const long first = std::max(lo, static_cast<long>(std::floor((proj - reach - star) / step - 0.5)));
        const long end = std::min(hi, static_cast<long>(std::ceil((proj + reach - star) / step + 0.5)));
        double below = half_plane_square_area(a, ux, uy, star + (first - 0.5) * step - proj);
        for (long n = first; n <= end; ++n) {
          const double upper = half_plane_square_area(a, ux, uy, star + (n + 0.5) * step - proj);
          column[static_cast<std::size_t>(n - lo)] += px.value * (upper - below);
          below = upper;
        }
      }
    } else {
      const std::size_t s = how.subsamples;
      const double sub = 2.0 * a / static_cast<double>(s);
      const double weight = sub * sub;
      for (const Pixel& px : pixels) {
        for (std::size_t u = 0; u < s; ++u) {
          for (std::size_t v = 0; v < s; ++v) {
            const double x[2] = {px.cx - a + (static_cast<double>(u) + 0.5) * sub,
                                 px.cy - a + (static_cast<double>(v) + 0.5) * sub};
            const auto n = column_target(family, x, center, disc);
            if (n) column[static_cast<std::size_t>(*n - lo)] += px.value * weight;
          }
        }
      }
    }
  });
  return counter;
}

Sinogram rescale(const HoughCounter& counter) {
  if (counter.rescaled) throw ContractViolation("Hough counter is already rescaled");
  Sinogram out(counter.disc, Provenance::HoughRescaled);
  const double inv = 1.0 / counter.disc.d().back();
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = counter.values[i] * inv;
  return out;
}

std::vector<Peak> detect_peaks(const Discretization& disc, std::span<const double> values,
                               std::size_t k, std::size_t min_separation) {
  if (k == 0) throw ContractViolation("detect_peaks needs k >= 1");
  if (values.empty() || values.size() != disc.size())
    throw DomainError("detect_peaks: empty or mismatched counter");
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t l, std::size_t r) { return values[l] > values[r]; });
  std::vector<Peak> peaks;
  const long radius = static_cast<long>(min_separation);
  for (std::size_t pos : order) {
    if (peaks.size() == k) break;
    CellIndex index = disc.unflat(pos);
    const bool suppressed = std::any_of(peaks.begin(), peaks.end(), [&](const Peak& p) {
      long dist = 0;
      for (std::size_t a = 0; a < index.size(); ++a) dist = std::max(dist, std::abs(index[a] - p.index[a]));
      return dist <= radius;
    });
    if (suppressed) continue;
    auto center = disc.cell_center(index);
    peaks.push_back({std::move(index), std::move(center), values[pos]});
  }
  return peaks;
}

std::vector<Peak> detect_peaks(const HoughCounter& counter, std::size_t k,
                               std::size_t min_separation) {
  return detect_peaks(counter.disc, counter.values, k, min_separation);
}

}  // namespace radhough
