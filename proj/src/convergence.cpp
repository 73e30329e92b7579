#include "radhough/convergence.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "radhough/error.hpp"
#include "radhough/hough.hpp"
#include "radhough/radon.hpp"

namespace radhough {

namespace {

constexpr double kSupportSlack = 1e-12;

void require_support_inside(const TestFunction& psi, std::span<const double> lo,
                            std::span<const double> hi, const char* what) {
  if (psi.dim() != lo.size()) throw ContractViolation(std::string(what) + ": test function dimension differs");
  for (std::size_t k = 0; k < lo.size(); ++k) {
    const double slack = kSupportSlack * std::max(1.0, std::abs(hi[k] - lo[k]));
    if (psi.lo[k] < lo[k] - slack || psi.hi[k] > hi[k] + slack)
      throw DomainError(std::string(what) + ": test function support leaves the parameter domain");
  }
}

// Tensor midpoint rule with n cells per axis over psi's lambda' support.
double graph_midpoint(const SolvableFamily& family, std::span<const double> x,
                      const TestFunction& psi, std::size_t n) {
  const std::size_t m = psi.dim() - 1;
  std::vector<double> h(m);
  double cell = 1.0;
  for (std::size_t k = 0; k < m; ++k) {
    h[k] = (psi.hi[k] - psi.lo[k]) / static_cast<double>(n);
    cell *= h[k];
  }
  std::vector<std::size_t> idx(m, 0);
  std::vector<double> lambda(m + 1);
  double sum = 0.0;
  while (true) {
    for (std::size_t k = 0; k < m; ++k)
      lambda[k] = psi.lo[k] + (static_cast<double>(idx[k]) + 0.5) * h[k];
    lambda[m] = family.F(x, std::span<const double>(lambda.data(), m));
    sum += psi(lambda);
    std::size_t k = m;
    while (k-- > 0) {
      if (++idx[k] < n) break;
      idx[k] = 0;
    }
    if (k == static_cast<std::size_t>(-1)) break;
  }
  return sum * cell;
}

std::string format_verdict(const ConvergenceReport& r, const ConvergenceGate& gate) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s: slope=%.4g monotone=%s ratios=%s (gate ratio [%g,%g] slope>=%g)",
                r.pass ? "PASS" : "FAIL", r.slope, r.monotone ? "yes" : "no",
                r.ratios_ok ? "ok" : "out-of-range", gate.min_ratio, gate.max_ratio, gate.min_slope);
  return buf;
}

ConvergenceReport finish(std::vector<ConvergenceRow> rows, const ConvergenceGate& gate) {
  ConvergenceReport report;
  report.rows = std::move(rows);
  report.slope = fit_log_slope(report.rows);
  report.monotone = true;
  report.ratios_ok = true;
  for (std::size_t i = 1; i < report.rows.size(); ++i) {
    const double prev = report.rows[i - 1].error;
    const double next = report.rows[i].error;
    if (!(next < prev)) report.monotone = false;
    const double ratio = prev / next;
    if (gate.min_ratio > 0.0 && !(ratio >= gate.min_ratio)) report.ratios_ok = false;
    if (gate.max_ratio > 0.0 && !(ratio <= gate.max_ratio)) report.ratios_ok = false;
  }
  report.pass = report.monotone && report.ratios_ok && report.slope >= gate.min_slope;
  report.verdict = format_verdict(report, gate);
  return report;
}

void check_grid(const ConvergenceGrid& grid, std::size_t t) {
  if (grid.lo.size() != t || grid.hi.size() != t || grid.base_counts.size() != t)
    throw ContractViolation("convergence grid dimension differs from the family");
  if (grid.levels < 4) throw ContractViolation("convergence study needs at least 4 grid levels");
}

Discretization level_grid(const ConvergenceGrid& grid, std::size_t level, long refine = 1) {
  std::vector<long> counts(grid.base_counts);
  for (long& c : counts) c = c * (long{1} << level) * refine;
  return Discretization::tiling(grid.lo, grid.hi, counts);
}

}  // namespace

double TestFunction::operator()(std::span<const double> lambda) const {
  if (lambda.size() != dim()) throw ContractViolation("test function dimension differs");
  for (std::size_t k = 0; k < lambda.size(); ++k)
    if (!(lambda[k] >= lo[k] && lambda[k] <= hi[k])) return 0.0;
  return eval(lambda);
}

TestFunction bump(std::vector<double> center, std::vector<double> radius, const Box& domain) {
  if (center.size() != radius.size() || center.empty())
    throw ContractViolation("bump: center and radius dimensions differ");
  if (domain.dim() != center.size()) throw ContractViolation("bump: domain dimension differs");
  TestFunction psi;
  for (std::size_t k = 0; k < center.size(); ++k) {
    if (!(radius[k] > 0.0) || !std::isfinite(center[k])) throw DomainError("bump: radius must be positive");
    psi.lo.push_back(center[k] - radius[k]);
    psi.hi.push_back(center[k] + radius[k]);
  }
  require_support_inside(psi, domain.lo, domain.hi, "bump");
  psi.eval = [center = std::move(center), radius = std::move(radius)](std::span<const double> l) {
    double v = 1.0;
    for (std::size_t k = 0; k < center.size(); ++k) {
      const double u = (l[k] - center[k]) / radius[k];
      const double w = std::max(0.0, 1.0 - u * u);
      v *= w * w;
    }
    return v;
  };
  return psi;
}

double bump_integral(std::span<const double> radius) {
  double v = 1.0;
  for (double r : radius) v *= 16.0 * r / 15.0;
  return v;
}

double pair_grid(const Sinogram& s, const TestFunction& psi) {
  const Discretization& disc = s.disc;
  std::vector<double> lo(disc.t()), hi(disc.t());
  double cell = 1.0;
  for (std::size_t k = 0; k < disc.t(); ++k) {
    lo[k] = disc.lower(k);
    hi[k] = disc.upper(k);
    cell *= disc.d()[k];
  }
  require_support_inside(psi, lo, hi, "pair_grid");
  double sum = 0.0;
  std::size_t pos = 0;
  disc.for_each_cell([&](const CellIndex&, const std::vector<double>& center) {
    const double v = s.values[pos++];
    if (v != 0.0) sum += v * psi(center);
  });
  return sum * cell;
}

double pair_radon_discrete(const SolvableFamily& family, const DiscreteImage& image,
                           const TestFunction& psi, PairingQuadrature quad) {
  if (family.t() < 2) throw ContractViolation("pair_radon_discrete needs t >= 2; use the 1-D form");
  if (psi.dim() != family.t()) throw ContractViolation("test function dimension differs from the family");
  if (image.dim() != family.n()) throw ContractViolation("point and family dimensions differ");
  const std::size_t m = family.t() - 1;
  double total = 0.0;
  for (std::size_t j = 0; j < image.size(); ++j) {
    const auto x = image.point(j);
    std::size_t n = m == 1 ? 64 : 8;
    double prev = graph_midpoint(family, x, psi, n);
    bool converged = false;
    while (true) {
      n *= 2;
      std::size_t samples = 1;
      for (std::size_t k = 0; k < m; ++k) samples *= n;
      if (samples > quad.max_samples) break;
      const double next = graph_midpoint(family, x, psi, n);
      const bool done = std::abs(next - prev) <= quad.tolerance * std::max(1.0, std::abs(next));
      prev = next;
      if (done) {
        converged = true;
        break;
      }
    }
    if (!converged) throw ConvergenceError("pair_radon_discrete: quadrature did not reach the tolerance");
    total += image.weight(j) * prev;
  }
  return total;
}

double pair_radon_discrete_1d(const SolvableFamily& family, const DiscreteImage& image,
                              const TestFunction& psi) {
  if (family.t() != 1) throw ContractViolation("pair_radon_discrete_1d needs t = 1");
  if (psi.dim() != 1) throw ContractViolation("test function dimension differs from the family");
  double total = 0.0;
  for (std::size_t j = 0; j < image.size(); ++j) {
    const double value = family.F(image.point(j), {});
    total += image.weight(j) * psi(std::span<const double>(&value, 1));
  }
  return total;
}

double fit_log_slope(std::span<const ConvergenceRow> rows) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t used = 0;
  for (const auto& r : rows) {
    if (!(r.error > 0.0) || !std::isfinite(r.error) || !(r.D > 0.0)) continue;
    const double lx = std::log(r.D);
    const double ly = std::log(r.error);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++used;
  }
  if (used < 3) throw ConvergenceError("slope fit needs at least 3 rows with positive error");
  const double nu = static_cast<double>(used);
  const double denom = nu * sxx - sx * sx;
  if (!(denom > 0.0)) throw ConvergenceError("slope fit needs distinct D values");
  return (nu * sxy - sx * sy) / denom;
}

ConvergenceReport convergence_study(const SolvableFamily& family, const DiscreteImage& image,
                                    const TestFunction& psi, const ConvergenceGrid& grid,
                                    ConvergenceGate gate, unsigned threads) {
  check_grid(grid, family.t());
  require_support_inside(psi, grid.lo, grid.hi, "convergence_study");
  const double reference = family.t() == 1 ? pair_radon_discrete_1d(family, image, psi)
                                           : pair_radon_discrete(family, image, psi);
  std::vector<ConvergenceRow> rows;
  for (std::size_t level = 0; level < grid.levels; ++level) {
    const Discretization disc = level_grid(grid, level);
    const double hough = pair_grid(rescale(accumulate_discrete(family, image, disc, threads)), psi);
    rows.push_back({disc.max_step(), hough, reference, std::abs(hough - reference)});
  }
  return finish(std::move(rows), gate);
}

ConvergenceReport convergence_study(const SolvableFamily& family, const PixelImage& image,
                                    const TestFunction& psi, const ConvergenceGrid& grid,
                                    ConvergenceGate gate, unsigned threads) {
  if (family.name() != "line-angle")
    throw ContractViolation("pixel convergence study needs the line-angle family");
  check_grid(grid, family.t());
  require_support_inside(psi, grid.lo, grid.hi, "convergence_study");
  std::vector<ConvergenceRow> rows;
  for (std::size_t level = 0; level < grid.levels; ++level) {
    const Discretization disc = level_grid(grid, level);
    const double hough = pair_grid(rescale(accumulate_pixel(family, image, disc, {}, threads)), psi);
    const Discretization fine = level_grid(grid, level, 4);
    const double radon =
        pair_grid(sinogram_pixel(image, fine, Normalization::UnitGradient, threads), psi);
    rows.push_back({disc.max_step(), hough, radon, std::abs(hough - radon)});
  }
  return finish(std::move(rows), gate);
}

}  // namespace radhough
