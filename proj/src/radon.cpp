#include "radhough/radon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "radhough/error.hpp"
#include "radhough/parallel.hpp"

namespace radhough {

namespace {

// Below this |minor / major| ratio a line is treated as parallel to an axis.
constexpr double kAxisParallel = 1e-6;

void require_half_side(double a) {
  if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("pixel half-side must be positive");
}

}  // namespace

double radon_square_slope(double a, double omega1, double gamma) {
  require_half_side(a);
  if (!std::isfinite(omega1) || !std::isfinite(gamma))
    throw DomainError("radon_square_slope: non-finite input");
  if (omega1 == 0.0)
    throw SingularInputError("radon_square_slope: omega1 = 0 (line parallel to the x1-axis)");
  const double aw = a * omega1;
  const double num = std::abs(a - aw - gamma) + std::abs(a - aw + gamma) -
                     std::abs(a + aw - gamma) - std::abs(a + aw + gamma);
  return num / (-2.0 * omega1);
}

double radon_square_normal(double a, Vec2 center, Vec2 omega, double gamma) {
  require_half_side(a);
  const double g = gamma - (omega[0] * center[0] + omega[1] * center[1]);
  if (!std::isfinite(g)) throw DomainError("radon_square_normal: non-finite input");
  const double p = std::abs(omega[0]);
  const double q = std::abs(omega[1]);
  if (p == 0.0 && q == 0.0) return 0.0;

  if (q <= p) {
    // x2 is the graph axis: g/omega2 - (omega1/omega2) x1 - x2 = 0.
    if (q < kAxisParallel * p) {
      const double x = g / omega[0];
      return (x >= -a && x < a) ? 2.0 * a / p : 0.0;
    }
    return radon_square_slope(a, omega[0] / omega[1], g / omega[1]) / q;
  }
  // Mirror x1 <-> x2 (the square is symmetric) so the slope stays >= 1.
  if (p < kAxisParallel * q) {
    const double y = g / omega[1];
    return (y > -a && y <= a) ? 2.0 * a / q : 0.0;
  }
  return radon_square_slope(a, omega[1] / omega[0], g / omega[0]) / p;
}

double radon_square_angle(double a, Vec2 center, double theta, double gamma) {
  if (!std::isfinite(theta)) throw DomainError("radon_square_angle: non-finite angle");
  return radon_square_normal(a, center, {std::cos(theta), std::sin(theta)}, gamma);
}

double radon_pixel_image_normal(const PixelImage& image, Vec2 omega, double gamma) {
  const double a = image.half_side();
  const double reach = a * (std::abs(omega[0]) + std::abs(omega[1]));
  double sum = 0.0;
  for (std::size_t r = 0; r < image.height(); ++r) {
    const double cy = image.center_y(r);
    for (std::size_t c = 0; c < image.width(); ++c) {
      const double v = image.at(r, c);
      if (v == 0.0) continue;
      const double cx = image.center_x(c);
      if (std::abs(gamma - (omega[0] * cx + omega[1] * cy)) > reach) continue;
      sum += v * radon_square_normal(a, {cx, cy}, omega, gamma);
    }
  }
  return sum;
}

double radon_pixel_image(const PixelImage& image, double theta, double gamma) {
  return radon_pixel_image_normal(image, {std::cos(theta), std::sin(theta)}, gamma);
}

Sinogram sinogram_pixel(const PixelImage& image, const Discretization& grid,
                        Normalization normalization, unsigned threads) {
  if (grid.t() != 2) throw ContractViolation("sinogram_pixel needs a (theta, gamma) grid");
  Sinogram out(grid, Provenance::RadonExact);
  const double a = image.half_side();
  const long g_lo = grid.n_lo()[1];
  const long g_hi = grid.n_hi()[1];
  const double g_star = grid.lambda_star()[1];
  const double g_step = grid.d()[1];

  struct Pixel {
    double cx, cy, value;
  };
  std::vector<Pixel> pixels;
  for (std::size_t r = 0; r < image.height(); ++r)
    for (std::size_t c = 0; c < image.width(); ++c)
      if (image.at(r, c) != 0.0) pixels.push_back({image.center_x(c), image.center_y(r), image.at(r, c)});

  parallel_for(grid.extent(0), threads, [&](std::size_t i) {
    const double theta = grid.center_component(0, grid.n_lo()[0] + static_cast<long>(i));
    const Vec2 omega{std::cos(theta), std::sin(theta)};
    const double reach = a * (std::abs(omega[0]) + std::abs(omega[1]));
    auto profile = out.profile(i);
    for (const Pixel& px : pixels) {
      const double proj = omega[0] * px.cx + omega[1] * px.cy;
      const long first = std::max(g_lo, static_cast<long>(std::ceil((proj - reach - g_star) / g_step)));
      const long last = std::min(g_hi, static_cast<long>(std::floor((proj + reach - g_star) / g_step)));
      for (long n = first; n <= last; ++n) {
        const double gamma = g_star + static_cast<double>(n) * g_step;
        profile[static_cast<std::size_t>(n - g_lo)] +=
            px.value * radon_square_normal(a, {px.cx, px.cy}, omega, gamma);
      }
    }
    if (normalization == Normalization::Slope) {
      const double s = std::abs(omega[1]);
      for (double& v : profile) v *= s;
    }
  });
  out.metadata.push_back(std::string("normalization=") +
                         (normalization == Normalization::UnitGradient ? "unit-gradient" : "slope"));
  return out;
}

namespace {

Vec2 chart_point(const GraphChart& chart, double s) {
  const double o = chart.other(s);
  return chart.free_axis == 0 ? Vec2{s, o} : Vec2{o, s};
}

}  // namespace

double radon_numeric(const SolvableFamily& family, const PixelImage& image,
                     std::span<const double> lambda, Quadrature quad) {
  if (family.n() != 2) throw ContractViolation("radon_numeric works on plane images");
  if (lambda.size() != family.t()) throw ContractViolation("lambda must have t components");
  if (quad.samples == 0) throw ContractViolation("quadrature needs at least one sample");
  const auto chart = family.chart(lambda);
  if (!chart)
    throw ContractViolation("family '" + family.name() + "' provides no image-space graph chart");
  const auto lp = lambda.first(family.t() - 1);
  const Window& w = image.window();
  const double lo = chart->free_axis == 0 ? w.x_min : w.y_min;
  const double hi = chart->free_axis == 0 ? w.x_max : w.y_max;
  const double h = (hi - lo) / static_cast<double>(quad.samples);

  const auto cell = [&](double s) {
    const Vec2 x = chart_point(*chart, s);
    return image.locate(x[0], x[1]);
  };
  const auto integrand = [&](double s) {
    const Vec2 x = chart_point(*chart, s);
    const double m = image.value_at(x[0], x[1]);
    if (m == 0.0) return 0.0;
    const auto g = family.grad_x_F(x, lp);
    const double norm = std::hypot(g[0], g[1]);
    if (norm < 1e-12) throw SingularInputError("radon_numeric: |grad_x f| vanishes on the locus");
    const double slope = chart->slope(s);
    return m * std::sqrt(1.0 + slope * slope) / norm;
  };

  double total = 0.0;
  // Recursive bisection until both ends of a piece lie in the same pixel cell.
  const auto piece = [&](auto&& self, double s0, double s1, std::pair<long, long> c0,
                         std::pair<long, long> c1, int depth) -> void {
    if (c0 == c1) {
      total += (s1 - s0) * integrand(0.5 * (s0 + s1));
      return;
    }
    if (depth > 60 || s1 - s0 <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(s0)))
      return;  // zero-width sliver at a pixel edge
    const double mid = 0.5 * (s0 + s1);
    const auto cm = cell(mid);
    self(self, s0, mid, c0, cm, depth + 1);
    self(self, mid, s1, cm, c1, depth + 1);
  };
  double s0 = lo;
  auto c0 = cell(s0);
  for (std::size_t k = 1; k <= quad.samples; ++k) {
    const double s1 = k == quad.samples ? hi : lo + static_cast<double>(k) * h;
    const auto c1 = cell(s1);
    piece(piece, s0, s1, c0, c1, 0);
    s0 = s1;
    c0 = c1;
  }
  return total;
}

namespace {

// Sorted roots of phi in [lo, hi] from sign changes on `probes` sub-intervals.
void bracket_roots(const std::function<double(double)>& phi, double lo, double hi, int probes,
                   std::vector<double>& roots) {
  double a = lo;
  double fa = phi(a);
  for (int k = 1; k <= probes; ++k) {
    const double b = k == probes ? hi : lo + (hi - lo) * k / probes;
    const double fb = phi(b);
    if ((fa < 0.0) != (fb < 0.0)) {
      double x0 = a, x1 = b, f0 = fa;
      for (int it = 0; it < 200 && x1 - x0 > 1e-15 * std::max(1.0, std::abs(x0)); ++it) {
        const double xm = 0.5 * (x0 + x1);
        const double fm = phi(xm);
        if ((fm < 0.0) == (f0 < 0.0)) {
          x0 = xm;
          f0 = fm;
        } else {
          x1 = xm;
        }
      }
      roots.push_back(0.5 * (x0 + x1));
    }
    a = b;
    fa = fb;
  }
}

}  // namespace

double charge(const SolvableFamily& family, const PixelImage& image,
              std::span<const double> lambda_prime, double lambda_t, Quadrature quad) {
  if (family.n() != 2) throw ContractViolation("charge works on plane images");
  if (lambda_prime.size() + 1 != family.t())
    throw ContractViolation("lambda' must have t-1 components");
  if (quad.samples == 0) throw ContractViolation("quadrature needs at least one sample");
  const Window& w = image.window();
  const double side = 2.0 * image.half_side();
  const double h = (w.x_max - w.x_min) / static_cast<double>(quad.samples);
  const auto F = [&](double x1, double x2) {
    const double x[2] = {x1, x2};
    return family.F(x, lambda_prime);
  };

  // Breakpoints in x1: pixel columns and level-set crossings of pixel rows.
  std::vector<double> breaks;
  for (std::size_t c = 0; c <= image.width(); ++c)
    breaks.push_back(w.x_min + static_cast<double>(c) * side);
  for (std::size_t r = 0; r <= image.height(); ++r) {
    const double y = w.y_max - static_cast<double>(r) * side;
    bracket_roots([&](double x1) { return F(x1, y) - lambda_t; }, w.x_min, w.x_max,
                  static_cast<int>(quad.samples), breaks);
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  std::vector<double> roots;
  const auto column_mass = [&](double x1) {
    const long col = image.locate(x1, w.y_max).first;
    if (col < 0 || col >= static_cast<long>(image.width())) return 0.0;
    double sum = 0.0;
    for (std::size_t r = 0; r < image.height(); ++r) {
      const double v = image.at(r, static_cast<std::size_t>(col));
      if (v == 0.0) continue;
      const double top = w.y_max - static_cast<double>(r) * side;
      const double bottom = top - side;
      roots.clear();
      roots.push_back(bottom);
      const auto phi = [&](double x2) { return lambda_t - F(x1, x2); };
      bracket_roots(phi, bottom, top, 4, roots);
      roots.push_back(top);
      double inside = 0.0;
      for (std::size_t k = 0; k + 1 < roots.size(); ++k)
        if (phi(0.5 * (roots[k] + roots[k + 1])) >= 0.0) inside += roots[k + 1] - roots[k];
      sum += v * inside;
    }
    return sum;
  };

  double total = 0.0;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double b0 = breaks[k];
    const double b1 = breaks[k + 1];
    if (b1 <= b0) continue;
    const auto pieces = static_cast<std::size_t>(std::max(1.0, std::ceil((b1 - b0) / h)));
    const double step = (b1 - b0) / static_cast<double>(pieces);
    for (std::size_t p = 0; p < pieces; ++p)
      total += step * column_mass(b0 + (static_cast<double>(p) + 0.5) * step);
  }
  return total;
}

double dirac_pair_1d(const std::function<double(double)>& f,
                     const std::function<double(double)>& fprime,
                     const std::function<double(double)>& phi, double lo, double hi,
                     std::size_t brackets) {
  if (!(hi > lo)) throw DomainError("dirac_pair_1d: empty interval");
  if (brackets == 0) throw ContractViolation("dirac_pair_1d needs at least one bracket");
  std::vector<double> roots;
  const double step = (hi - lo) / static_cast<double>(brackets);
  double a = lo;
  double fa = f(a);
  for (std::size_t k = 1; k <= brackets; ++k) {
    const double b = k == brackets ? hi : lo + static_cast<double>(k) * step;
    const double fb = f(b);
    if (fa == 0.0 && a > lo) {
      roots.push_back(a);
    } else if (fa != 0.0 && fb != 0.0 && (fa < 0.0) != (fb < 0.0)) {
      double x0 = a, x1 = b, f0 = fa;
      while (x1 - x0 > 1e-12) {
        const double xm = 0.5 * (x0 + x1);
        const double fm = f(xm);
        if (fm == 0.0) {
          x0 = x1 = xm;
          break;
        }
        if ((fm < 0.0) == (f0 < 0.0)) {
          x0 = xm;
          f0 = fm;
        } else {
          x1 = xm;
        }
      }
      roots.push_back(0.5 * (x0 + x1));
    }
    a = b;
    fa = fb;
  }
  double sum = 0.0;
  for (double x0 : roots) {
    const double slope = std::abs(fprime(x0));
    if (slope < 1e-9) throw SingularInputError("dirac_pair_1d: zero of f is not simple");
    sum += phi(x0) / slope;
  }
  return sum;
}

}  // namespace radhough
