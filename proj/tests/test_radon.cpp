#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "radhough/error.hpp"
#include "radhough/radon.hpp"
#include "radhough/sinogram.hpp"
#include "support.hpp"

using namespace radhough;
using radhough::testing::Rng;

namespace {

// Length of the chord of {omega . x = gamma} (unit omega) inside the box, by
// Liang-Barsky clipping of the parametrized line.
double chord_oracle(double xmin, double xmax, double ymin, double ymax, double theta, double gamma) {
  const double c = std::cos(theta), s = std::sin(theta);
  const double px = gamma * c, py = gamma * s;  // foot point
  const double dx = -s, dy = c;                 // unit direction
  double t0 = -1e9, t1 = 1e9;
  const auto clip = [&](double p, double q) {
    if (p == 0.0) return q >= 0.0;
    const double r = q / p;
    if (p < 0.0) t0 = std::max(t0, r);
    else t1 = std::min(t1, r);
    return true;
  };
  if (!clip(-dx, px - xmin) || !clip(dx, xmax - px) || !clip(-dy, py - ymin) || !clip(dy, ymax - py)) return 0.0;
  return std::max(0.0, t1 - t0);
}

}  // namespace

TEST_CASE("slope-form square transform") {
  CHECK(radon_square_slope(1.0, 1.0, 0.0) == doctest::Approx(2.0));
  CHECK(radon_square_slope(1.0, 2.0, 0.0) == doctest::Approx(1.0));
  CHECK(radon_square_slope(1.0, 1.0, 5.0) == 0.0);
  CHECK_THROWS_AS(radon_square_slope(1.0, 0.0, 0.3), SingularInputError);
}

TEST_CASE("angle-form square transform") {
  CHECK(radon_square_angle(1.0, {0, 0}, M_PI / 2, 0.0) == doctest::Approx(2.0));
  CHECK(radon_square_angle(1.0, {0, 0}, M_PI / 4, 0.0) == doctest::Approx(2.0 * std::sqrt(2.0)));
  CHECK(radon_square_angle(1.0, {0, 0}, M_PI / 4, 2.0) == 0.0);
  CHECK(radon_square_angle(1.0, {0, 0}, 0.0, 0.3) == doctest::Approx(2.0));
}

TEST_CASE("angle-form matches the chord-clipping oracle") {
  Rng rng(41);
  for (int k = 0; k < 5000; ++k) {
    const double a = rng.uniform(0.01, 1.0);
    const Vec2 c{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    double theta = rng.uniform(0.0, M_PI);
    if (k % 50 == 0) theta = 0.0;
    if (k % 50 == 1) theta = M_PI / 2;
    if (k % 50 == 2) theta = 1e-9;
    const double gamma = rng.uniform(-2.5, 2.5);
    const double got = radon_square_angle(a, c, theta, gamma);
    const double want = chord_oracle(c[0] - a, c[0] + a, c[1] - a, c[1] + a, theta, gamma);
    CHECK(got == doctest::Approx(want).epsilon(1e-9).scale(a));
  }
}

TEST_CASE("normal form is homogeneous of degree -1") {
  Rng rng(42);
  for (int k = 0; k < 500; ++k) {
    const Vec2 omega{rng.uniform(-2, 2), rng.uniform(-2, 2)};
    const double gamma = rng.uniform(-1.5, 1.5);
    const Vec2 c{rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)};
    const double base = radon_square_normal(0.3, c, omega, gamma);
    for (double a : {-2.0, -1.0, 2.0, 3.0})
      CHECK(radon_square_normal(0.3, c, {a * omega[0], a * omega[1]}, a * gamma) ==
            doctest::Approx(base / std::abs(a)).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("numeric quadrature oracle") {
  const auto fam = line_angle(1.0);
  const PixelImage unit(1, 1, Window{-1, 1, -1, 1}, {1.0});
  const double horizontal[2] = {M_PI / 2, 0.0};
  CHECK(radon_numeric(fam, unit, horizontal, {4096}) == doctest::Approx(2.0).epsilon(1e-6));
  const PixelImage zero(8, 8);
  Rng rng(43);
  for (int k = 0; k < 20; ++k) {
    const double l[2] = {rng.uniform(0, M_PI), rng.uniform(-1, 1)};
    CHECK(radon_numeric(fam, zero, l) == 0.0);
  }
  // Random image: agrees with the closed-form sinogram sum.
  const PixelImage img = testing::random_image(6, 6, rng);
  for (int k = 0; k < 100; ++k) {
    const double theta = rng.uniform(0, M_PI);
    const double gamma = rng.uniform(-1.2, 1.2);
    const double l[2] = {theta, gamma};
    CHECK(radon_numeric(fam, img, l) == doctest::Approx(radon_pixel_image(img, theta, gamma)).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("charge function") {
  const auto fam = line_angle(1.0);
  const PixelImage unit(1, 1, Window{-1, 1, -1, 1}, {1.0});
  const double lp[1] = {M_PI / 2};
  CHECK(charge(fam, unit, lp, 0.0) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(charge(fam, unit, lp, -5.0) == 0.0);
  CHECK(charge(fam, unit, lp, 5.0) == doctest::Approx(4.0).epsilon(1e-9));
  // Oblique half-plane through the square: compare with the area of the clipped polygon.
  const double diag[1] = {M_PI / 4};
  CHECK(charge(fam, unit, diag, 0.0) == doctest::Approx(2.0).epsilon(1e-9));
  const double g = 0.5;
  // Region x1 + x2 <= g sqrt(2): square minus the corner triangle with legs 2 - g sqrt(2).
  const double leg = 2.0 - g * std::sqrt(2.0);
  CHECK(charge(fam, unit, diag, g) == doctest::Approx(4.0 - 0.5 * leg * leg).epsilon(1e-9));
}

TEST_CASE("charge derivative is the Radon transform") {
  Rng rng(44);
  const auto fam = line_angle(1.0);
  const PixelImage img = testing::random_image(4, 4, rng, 0.5, 1.0);
  for (int k = 0; k < 30; ++k) {
    const double theta = rng.uniform(0.1, M_PI - 0.1);
    const double gamma = rng.uniform(-0.9, 0.9);
    const double lp[1] = {theta};
    const double h = 1e-3;
    const double fd = (charge(fam, img, lp, gamma + h) - charge(fam, img, lp, gamma - h)) / (2 * h);
    CHECK(fd == doctest::Approx(radon_pixel_image(img, theta, gamma)).epsilon(1e-3));
  }
}

TEST_CASE("1-D Dirac pairing") {
  const auto sq = [](double x) { return x * x - 1.0; };
  const auto dsq = [](double x) { return 2.0 * x; };
  CHECK(dirac_pair_1d(sq, dsq, [](double x) { return x * x; }, -2.0, 2.0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(dirac_pair_1d([](double x) { return x; }, [](double) { return 1.0; }, [](double) { return 3.5; }, -1.0,
                      1.3) == doctest::Approx(3.5));
  CHECK(dirac_pair_1d([](double x) { return x * x + 1.0; }, [](double x) { return 2 * x; },
                      [](double) { return 1.0; }, -2.0, 2.0) == 0.0);
  // sin(3x) on (0.1, 3): roots at pi/3, 2pi/3, pi; |f'| = 3.
  CHECK(dirac_pair_1d([](double x) { return std::sin(3 * x); }, [](double x) { return 3 * std::cos(3 * x); },
                      [](double x) { return x; }, 0.1, 3.3) == doctest::Approx(2.0 * M_PI / 3.0).epsilon(1e-10));
  CHECK_THROWS_AS(dirac_pair_1d([](double x) { return x * x * x; }, [](double x) { return 3 * x * x; },
                                [](double) { return 1.0; }, -1.0, 1.3),
                  SingularInputError);
}

TEST_CASE("pixel sinograms") {
  Rng rng(45);
  const Discretization grid = Discretization::sinogram(90, 61, std::sqrt(2.0));
  const PixelImage one(1, 1, Window{-0.2, 0.2, -0.2, 0.2}, {1.0});
  const Sinogram s1 = sinogram_pixel(one, grid);
  for (std::size_t i = 0; i < s1.profiles(); i += 7)
    for (std::size_t j = 0; j < s1.profile_length(); j += 3) {
      const double th = grid.center_component(0, static_cast<long>(i));
      const double ga = grid.center_component(1, grid.n_lo()[1] + static_cast<long>(j));
      CHECK(s1.at(i, j) == doctest::Approx(radon_square_angle(0.2, {0, 0}, th, ga)).epsilon(1e-12));
    }

  // Linearity over disjoint pixels.
  PixelImage a(4, 4), b(4, 4), ab(4, 4);
  a.at(0, 1) = 0.7;
  b.at(3, 2) = 0.4;
  ab.at(0, 1) = 0.7;
  ab.at(3, 2) = 0.4;
  const Sinogram sa = sinogram_pixel(a, grid), sb = sinogram_pixel(b, grid), sab = sinogram_pixel(ab, grid);
  for (std::size_t p = 0; p < sab.values.size(); ++p)
    CHECK(sab.values[p] == doctest::Approx(sa.values[p] + sb.values[p]).epsilon(1e-12).scale(1.0));

  const PixelImage img = testing::random_image(16, 16, rng);
  const Sinogram s = sinogram_pixel(img, grid);
  // Mass consistency per angle, up to the midpoint error over kinked profiles.
  const double mass = img.mass();
  for (std::size_t i = 0; i < s.profiles(); ++i) {
    double sum = 0.0;
    for (double v : s.profile(i)) sum += v * grid.d()[1];
    CHECK(std::abs(sum - mass) / mass < 0.01);
  }
  // Support.
  const Discretization wide = Discretization::sinogram(30, 81, 2.0);
  const Sinogram sw = sinogram_pixel(img, wide);
  for (std::size_t i = 0; i < sw.profiles(); ++i)
    for (std::size_t j = 0; j < sw.profile_length(); ++j)
      if (std::abs(wide.center_component(1, wide.n_lo()[1] + static_cast<long>(j))) > std::sqrt(2.0))
        CHECK(sw.at(i, j) == 0.0);
  // Thread count does not change a single bit.
  const Sinogram s4 = sinogram_pixel(img, grid, Normalization::UnitGradient, 4);
  CHECK(s4.values == s.values);
  // Slope normalization scales by |sin(theta)|.
  const Sinogram slope = sinogram_pixel(img, grid, Normalization::Slope);
  for (std::size_t i = 0; i < s.profiles(); ++i) {
    const double f = std::abs(std::sin(grid.center_component(0, static_cast<long>(i))));
    for (std::size_t j = 0; j < s.profile_length(); ++j)
      CHECK(slope.at(i, j) == doctest::Approx(s.at(i, j) * f).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("sinogram evenness over a full turn") {
  Rng rng(46);
  const PixelImage img = testing::random_image(8, 8, rng);
  // theta on [0, 2 pi) with an even number of angles; gamma symmetric and never on a
  // pixel edge, where axis-aligned lines are ambiguous.
  const Discretization full({0.0, 0.035}, {M_PI / 20.0, 0.07}, {0, -28}, {39, 27});
  const Sinogram s = sinogram_pixel(img, full);
  for (std::size_t i = 0; i < 20; ++i)
    for (std::size_t j = 0; j < s.profile_length(); ++j)
      CHECK(s.at(i + 20, s.profile_length() - 1 - j) == doctest::Approx(s.at(i, j)).epsilon(1e-10).scale(1.0));
}

TEST_CASE("sinogram CSV round trip") {
  Rng rng(47);
  Sinogram s(Discretization::sinogram(7, 5, 1.0), Provenance::Noisy);
  for (double& v : s.values) v = rng.uniform(-1, 1) / 3.0;
  s.metadata = {"radhough test level=1"};
  const auto path = std::filesystem::temp_directory_path() / "radhough_test_sino.csv";
  save_sinogram_csv(s, path);
  const Sinogram back = load_sinogram_csv(path);
  CHECK(back.disc == s.disc);
  CHECK(back.values == s.values);
  CHECK(back.provenance == Provenance::Noisy);
  CHECK(back.metadata == s.metadata);
  std::filesystem::remove(path);
}
