#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "radhough/convergence.hpp"
#include "radhough/error.hpp"
#include "radhough/hough.hpp"
#include "support.hpp"

using namespace radhough;
using radhough::testing::Rng;

namespace {

const Box kLineDomain{{0.0, -std::sqrt(2.0)}, {M_PI, std::sqrt(2.0)}, {}};

// Composite Simpson on [a, b] with n (even) panels.
template <class Fn>
double simpson(Fn&& f, double a, double b, int n = 20000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("bump test function") {
  const TestFunction psi = bump({1.3, 0.1}, {1.0, 1.2}, kLineDomain);
  const double c[2] = {1.3, 0.1};
  CHECK(psi(c) == 1.0);
  const double edge[2] = {2.3, 0.5};
  CHECK(psi(edge) < 1e-20);
  const double out[2] = {0.2, 0.1};
  CHECK(psi(out) == 0.0);
  // Derivative at the support edge vanishes.
  const double h = 1e-6;
  const double inside[2] = {2.3 - h, 0.5};
  CHECK(psi(inside) / h < 1e-5);
  // Integral against Simpson.
  const double ix = simpson([](double u) { return std::pow(std::max(0.0, 1 - u * u), 2); }, -1.0, 1.0);
  CHECK(ix == doctest::Approx(16.0 / 15.0).epsilon(1e-12));
  const double r[2] = {1.0, 1.2};
  CHECK(bump_integral(r) == doctest::Approx(16.0 / 15.0 * 16.0 / 15.0 * 1.2));
  CHECK_THROWS_AS(bump({0.5, 0.0}, {1.0, 1.0}, kLineDomain), DomainError);
}

TEST_CASE("grid pairing") {
  const TestFunction psi = bump({1.3, 0.1}, {1.0, 1.2}, kLineDomain);
  const double r[2] = {1.0, 1.2};
  const double exact = bump_integral(r);
  Sinogram zero(Discretization::sinogram(64, 64, std::sqrt(2.0)), Provenance::RadonExact);
  CHECK(pair_grid(zero, psi) == 0.0);
  double previous = 1.0;
  for (long n : {32L, 64L, 128L, 256L}) {
    Sinogram s(Discretization::sinogram(n, n, std::sqrt(2.0)), Provenance::RadonExact);
    std::fill(s.values.begin(), s.values.end(), 2.5);
    const double err = std::abs(pair_grid(s, psi) - 2.5 * exact);
    CHECK(err < 2.5 * exact * 10.0 / static_cast<double>(n));
    CHECK(err < previous);
    previous = err;
  }
  Rng rng(61);
  Sinogram a(Discretization::sinogram(40, 41, std::sqrt(2.0)), Provenance::RadonExact), b = a, ab = a;
  for (std::size_t p = 0; p < a.values.size(); ++p) {
    a.values[p] = rng.uniform(-1, 1);
    b.values[p] = rng.uniform(-1, 1);
    ab.values[p] = 3.0 * a.values[p] - b.values[p];
  }
  CHECK(pair_grid(ab, psi) == doctest::Approx(3.0 * pair_grid(a, psi) - pair_grid(b, psi)).epsilon(1e-12));
}

TEST_CASE("Radon pairing of point sets") {
  const auto fam = line_angle(1.0);
  const TestFunction psi = bump({1.3, 0.1}, {1.0, 1.2}, kLineDomain);
  const auto origin = DiscreteImage::unit(2, {0.0, 0.0});
  const double g = std::pow(1.0 - std::pow(0.1 / 1.2, 2), 2);
  CHECK(pair_radon_discrete(fam, origin, psi) == doctest::Approx(16.0 / 15.0 * g).epsilon(1e-10));

  Rng rng(62);
  for (int k = 0; k < 5; ++k) {
    const double x = rng.uniform(-1, 1), y = rng.uniform(-1, 1);
    const double oracle = simpson(
        [&](double th) {
          const double l[2] = {th, x * std::cos(th) + y * std::sin(th)};
          return psi(l);
        },
        0.3, 2.3);
    const DiscreteImage p(2, {x, y}, {1.0});
    const double got = pair_radon_discrete(fam, p, psi);
    CHECK(got == doctest::Approx(oracle).epsilon(1e-9).scale(1.0));
    CHECK(pair_radon_discrete(fam, p.scaled(2.0), psi) == doctest::Approx(2.0 * got).epsilon(1e-12));
  }
}

TEST_CASE("one-parameter pairing") {
  const auto fam = fixed_direction_line(0.7, 1.0);
  const Box dom{{-4.0}, {4.0}, {}};
  const TestFunction psi = bump({0.1}, {1.2}, dom);
  const double x[2] = {0.4, -0.2};
  const double F = 0.4 * std::cos(0.7) - 0.2 * std::sin(0.7);
  const double fl[1] = {F};
  CHECK(pair_radon_discrete_1d(fam, DiscreteImage::unit(2, {x[0], x[1]}), psi) == doctest::Approx(psi(fl)));
  const TestFunction far = bump({3.0}, {0.5}, dom);
  CHECK(pair_radon_discrete_1d(fam, DiscreteImage::unit(2, {x[0], x[1]}), far) == 0.0);

  // Mass preservation: the rescaled counter pairs with psi = 1 to the total weight at every d.
  const TestFunction one{{-1.9}, {1.9}, [](std::span<const double>) { return 1.0; }};
  Rng rng(63);
  std::vector<double> coords, weights;
  for (int j = 0; j < 20; ++j) {
    coords.push_back(rng.uniform(-1, 1));
    coords.push_back(rng.uniform(-1, 1));
    weights.push_back(rng.uniform(0.5, 2));
  }
  const DiscreteImage pts(2, coords, weights);
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  for (double d : {0.3, 0.1, 0.013, 0.001}) {
    const long half = static_cast<long>(std::ceil(2.0 / d));
    const Discretization grid({rng.uniform(-0.5, 0.5) * d}, {d}, {-half}, {half});
    const Sinogram s = rescale(accumulate_discrete(fam, pts, grid));
    CHECK(pair_grid(s, one) == doctest::Approx(total).epsilon(1e-12));
  }
}

TEST_CASE("point on cell centres converges") {
  const auto fam = line_angle(1.0);
  const TestFunction psi = bump({1.3, 0.1}, {1.0, 1.2}, kLineDomain);
  const auto origin = DiscreteImage::unit(2, {0.0, 0.0});
  const double ref = pair_radon_discrete(fam, origin, psi);
  std::vector<double> errors;
  for (long k = 0; k < 5; ++k) {
    const long n = 32L << k;
    const Discretization grid({M_PI / (2.0 * n), 0.0}, {M_PI / n, 2.0 * std::sqrt(2.0) / n}, {0, -n / 2},
                              {n - 1, n / 2});
    errors.push_back(std::abs(pair_grid(rescale(accumulate_discrete(fam, origin, grid)), psi) - ref));
  }
  for (std::size_t k = 1; k < errors.size(); ++k) CHECK(errors[k] < errors[k - 1]);
  CHECK(errors.back() < 1e-4);
}

TEST_CASE("log-log slope") {
  std::vector<ConvergenceRow> rows;
  for (int k = 0; k < 5; ++k) {
    const double D = std::ldexp(1.0, -k);
    rows.push_back({D, 0.0, 0.0, 3.0 * D * D});
  }
  CHECK(fit_log_slope(rows) == doctest::Approx(2.0));
  rows[2].error = 0.0;
  CHECK(fit_log_slope(rows) == doctest::Approx(2.0));
  rows[3].error = 0.0;
  rows[4].error = 0.0;
  CHECK_THROWS_AS(fit_log_slope(rows), ConvergenceError);
}

TEST_CASE("convergence studies") {
  const auto fam = line_angle(1.0);
  Rng rng(64);
  std::vector<double> coords;
  for (int j = 0; j < 10; ++j) coords.push_back(rng.uniform(-1, 1));
  const TestFunction psi = bump({1.3, 0.1}, {1.0, 1.2}, kLineDomain);
  const ConvergenceGrid grid{{0.0, -std::sqrt(2.0)}, {M_PI, std::sqrt(2.0)}, {32, 32}, 4};
  const ConvergenceReport rep = convergence_study(fam, DiscreteImage::unit(2, coords), psi, grid);
  REQUIRE(rep.rows.size() == 4);
  for (std::size_t k = 1; k < rep.rows.size(); ++k) CHECK(rep.rows[k].D < rep.rows[k - 1].D);
  CHECK(rep.rows.back().error < rep.rows.front().error);
  CHECK(rep.verdict.rfind(rep.pass ? "PASS" : "FAIL", 0) == 0);

  const PixelImage pixel(1, 1, Window{-0.3, 0.2, -0.1, 0.4}, {1.0});
  const ConvergenceReport pix = convergence_study(fam, pixel, psi, grid);
  CHECK(pix.monotone);
  CHECK(pix.slope >= 0.9);
  CHECK(pix.pass);

  ConvergenceGrid shallow = grid;
  shallow.levels = 2;
  CHECK_THROWS(convergence_study(fam, DiscreteImage::unit(2, coords), psi, shallow));
}
