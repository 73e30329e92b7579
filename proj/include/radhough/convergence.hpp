#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "radhough/families.hpp"
#include "radhough/images.hpp"
#include "radhough/sinogram.hpp"

namespace radhough {

/// C^1 test function with compact support in a box.
struct TestFunction {
  std::vector<double> lo;
  std::vector<double> hi;
  std::function<double(std::span<const double>)> eval;

  double operator()(std::span<const double> lambda) const;
  std::size_t dim() const { return lo.size(); }
};

/// psi(lambda) = prod_k max(0, 1 - ((lambda_k - c_k) / r_k)^2)^2.
/// Throws DomainError if the support box is not inside `domain`.
TestFunction bump(std::vector<double> center, std::vector<double> radius, const Box& domain);

/// Closed-form integral of bump(center, radius): prod_k 16 r_k / 15.
double bump_integral(std::span<const double> radius);

/// Riemann pairing sum_cells value * psi(centre) * prod d_k.
double pair_grid(const Sinogram& s, const TestFunction& psi);

struct PairingQuadrature {
  double tolerance = 1e-11;
  std::size_t max_samples = std::size_t{1} << 22;
};

/// <R_f m, psi> for a point set: sum_j mu_j * integral of psi(lambda', F(x_j; lambda')) d lambda'.
/// Tensor midpoint rule over psi's lambda' support, doubled until successive
/// estimates agree to the tolerance; ConvergenceError otherwise.
double pair_radon_discrete(const SolvableFamily& family, const DiscreteImage& image,
                           const TestFunction& psi, PairingQuadrature quad = {});

/// t = 1: sum_j mu_j psi(F(x_j)).
double pair_radon_discrete_1d(const SolvableFamily& family, const DiscreteImage& image,
                              const TestFunction& psi);

struct ConvergenceRow {
  double D;
  double hough;
  double radon;
  double error;
};

/// Acceptance gate on a halving sequence.
struct ConvergenceGate {
  double min_ratio = 1.5;  // error(D) / error(D/2) lower bound
  double max_ratio = 3.0;  // upper bound; <= 0 disables
  double min_slope = 0.0;  // fitted log-log slope lower bound
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  double slope = 0.0;
  bool monotone = false;
  bool ratios_ok = false;
  bool pass = false;
  std::string verdict;
};

/// Parameter-space grids for the study: cells tile [lo, hi) with
/// base_counts * 2^level cells per axis, level = 0 .. levels-1.
struct ConvergenceGrid {
  std::vector<double> lo;
  std::vector<double> hi;
  std::vector<long> base_counts;
  std::size_t levels = 6;
};

/// Rescaled Hough pairing vs the Radon pairing of a point set over a halving sequence.
ConvergenceReport convergence_study(const SolvableFamily& family, const DiscreteImage& image,
                                    const TestFunction& psi, const ConvergenceGrid& grid,
                                    ConvergenceGate gate = {}, unsigned threads = 1);

/// Pixel-image version (line-angle, exact-strip accumulation). The reference
/// at each level pairs an exact Radon sinogram on a 4x finer grid.
ConvergenceReport convergence_study(const SolvableFamily& family, const PixelImage& image,
                                    const TestFunction& psi, const ConvergenceGrid& grid,
                                    ConvergenceGate gate = {0.0, 0.0, 0.9}, unsigned threads = 1);

/// Least-squares slope of log(error) against log(D) over rows with error > 0.
double fit_log_slope(std::span<const ConvergenceRow> rows);

}  // namespace radhough
