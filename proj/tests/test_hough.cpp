#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

#include "radhough/error.hpp"
#include "radhough/hough.hpp"
#include "radhough/radon.hpp"
#include "support.hpp"

using namespace radhough;
using radhough::testing::Rng;

namespace {

using Poly = std::vector<std::pair<double, double>>;

// Sutherland-Hodgman clip of a polygon against u . y <= s, then the shoelace area.
double clipped_area(const Poly& in, double ux, double uy, double s) {
  Poly out;
  for (std::size_t i = 0; i < in.size(); ++i) {
    const auto [ax, ay] = in[i];
    const auto [bx, by] = in[(i + 1) % in.size()];
    const double fa = ux * ax + uy * ay - s, fb = ux * bx + uy * by - s;
    if (fa <= 0) out.emplace_back(ax, ay);
    if ((fa < 0 && fb > 0) || (fa > 0 && fb < 0)) {
      const double t = fa / (fa - fb);
      out.emplace_back(ax + t * (bx - ax), ay + t * (by - ay));
    }
  }
  double area = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto [ax, ay] = out[i];
    const auto [bx, by] = out[(i + 1) % out.size()];
    area += ax * by - bx * ay;
  }
  return std::abs(area) / 2.0;
}

// Points on y^2 = x^3 + a x + b, both branches, x spread over [x0, x1].
DiscreteImage cubic_points(double a, double b, double x0, double x1, std::size_t count, Rng& rng) {
  std::vector<double> coords;
  for (std::size_t j = 0; j < count; ++j) {
    const double x = rng.uniform(x0, x1);
    const double y = std::sqrt(std::max(0.0, x * x * x + a * x + b));
    coords.push_back(x);
    coords.push_back(j % 2 ? y : -y);
  }
  return DiscreteImage::unit(2, std::move(coords));
}

const Discretization kSmallGrid({0.0, 0.0}, {M_PI / 100.0, 0.1}, {0, -20}, {99, 20});

}  // namespace

TEST_CASE("kernel examples") {
  const auto fam = line_angle(1.0);
  const double x[2] = {1.0, 0.0};
  for (long n = -20; n <= 20; ++n) {
    const double lambda[2] = {0.0, 0.1 * n};
    CHECK(kernel(fam, x, lambda, kSmallGrid) == (n == 10 ? 1 : 0));
  }
  // Bracket is half-open: F - d/2 belongs to the cell, F + d/2 does not.
  const auto fixed = fixed_direction_line(0.0, 1.0);
  const Discretization one({0.0}, {0.5}, {-4}, {4});
  const double p[2] = {0.25, 0.3};
  const double below[1] = {0.0};
  const double above[1] = {0.5};
  CHECK(kernel(fixed, p, below, one) == 1);
  CHECK(kernel(fixed, p, above, one) == 0);
  const double q[2] = {0.75, -0.2};
  CHECK(kernel(fixed, q, above, one) == 1);
}

TEST_CASE("kernel column uniqueness") {
  Rng rng(51);
  const auto fam = line_angle(1.0);
  for (int k = 0; k < 200; ++k) {
    const double x[2] = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const long col = static_cast<long>(rng.bits() % 100);
    const double theta = kSmallGrid.center_component(0, col);
    int total = 0;
    for (long n = -20; n <= 20; ++n) {
      const double lambda[2] = {theta, kSmallGrid.center_component(1, n)};
      total += kernel(fam, x, lambda, kSmallGrid);
    }
    const double F = x[0] * std::cos(theta) + x[1] * std::sin(theta);
    const bool inside = F >= kSmallGrid.lower(1) && F < kSmallGrid.upper(1);
    CHECK(total == (inside ? 1 : 0));
    const double cc[1] = {theta};
    const auto target = column_target(fam, x, cc, kSmallGrid);
    CHECK(target.has_value() == inside);
    if (target) {
      const double lambda[2] = {theta, kSmallGrid.center_component(1, *target)};
      CHECK(kernel(fam, x, lambda, kSmallGrid) == 1);
    }
  }
}

TEST_CASE("discrete accumulation") {
  const auto fam = line_angle(1.0);
  const auto single = DiscreteImage::unit(2, {0.3, -0.4});
  const HoughCounter h = accumulate_discrete(fam, single, kSmallGrid);
  double total = 0.0;
  for (std::size_t i = 0; i < h.columns(); ++i) {
    int ones = 0;
    for (double v : h.column(i)) {
      CHECK((v == 0.0 || v == 1.0));
      ones += v == 1.0;
    }
    CHECK(ones == 1);
    total += std::accumulate(h.column(i).begin(), h.column(i).end(), 0.0);
  }
  CHECK(total == 100.0);
  CHECK(h.skipped == 0);
  for (const Peak& p : detect_peaks(h, 5, 0)) CHECK(p.value <= 1.0);

  // Linearity in weights.
  const DiscreteImage pair(2, {0.3, -0.4, -0.6, 0.1}, {2.0, 3.0});
  const HoughCounter h1 = accumulate_discrete(fam, DiscreteImage::unit(2, {0.3, -0.4}), kSmallGrid);
  const HoughCounter h2 = accumulate_discrete(fam, DiscreteImage::unit(2, {-0.6, 0.1}), kSmallGrid);
  const HoughCounter hp = accumulate_discrete(fam, pair, kSmallGrid);
  for (std::size_t p = 0; p < hp.values.size(); ++p) CHECK(hp.values[p] == 2.0 * h1.values[p] + 3.0 * h2.values[p]);

  // Points outside the gamma-range are skipped and counted.
  const Discretization narrow({0.0, 0.0}, {M_PI / 10.0, 0.1}, {0, -2}, {9, 2});
  const HoughCounter hs = accumulate_discrete(fam, DiscreteImage::unit(2, {0.9, 0.9}), narrow);
  CHECK(hs.skipped > 0);
  CHECK(std::accumulate(hs.values.begin(), hs.values.end(), 0.0) == 10.0 - static_cast<double>(hs.skipped));

  // Thread count is invisible.
  Rng rng(52);
  std::vector<double> coords;
  for (int j = 0; j < 400; ++j) coords.push_back(rng.uniform(-1, 1));
  const auto cloud = DiscreteImage::unit(2, coords);
  CHECK(accumulate_discrete(fam, cloud, kSmallGrid, 1).values == accumulate_discrete(fam, cloud, kSmallGrid, 3).values);
}

TEST_CASE("collinear points meet in one cell") {
  const auto fam = line_angle(1.0);
  // Points on the line through a cell centre (theta, gamma).
  const double theta = kSmallGrid.center_component(0, 37);
  const double gamma = kSmallGrid.center_component(1, 2);
  std::vector<double> coords;
  for (int j = 0; j < 15; ++j) {
    const double s = -0.7 + 0.1 * j;
    coords.push_back(gamma * std::cos(theta) - s * std::sin(theta));
    coords.push_back(gamma * std::sin(theta) + s * std::cos(theta));
  }
  const HoughCounter h = accumulate_discrete(fam, DiscreteImage::unit(2, coords), kSmallGrid);
  CHECK(h.values[kSmallGrid.flat(std::vector<long>{37, 2})] == 15.0);
  // Neighbouring columns may tie; the peak is still on the gamma row.
  const auto peaks = detect_peaks(h, 1, 0);
  REQUIRE(peaks.size() == 1);
  CHECK(std::abs(peaks[0].index[0] - 37) <= 3);
  CHECK(peaks[0].index[1] == 2);
  CHECK(peaks[0].value == 15.0);
}

TEST_CASE("half-plane square area matches polygon clipping") {
  Rng rng(53);
  for (int k = 0; k < 5000; ++k) {
    const double a = rng.uniform(0.01, 1.0);
    double phi = rng.uniform(0, 2 * M_PI);
    if (k % 40 == 0) phi = 0.0;
    if (k % 40 == 1) phi = M_PI / 2;
    if (k % 40 == 2) phi = M_PI / 4;
    const double ux = std::cos(phi), uy = std::sin(phi);
    const double s = rng.uniform(-2.0 * a, 2.0 * a);
    const Poly sq{{-a, -a}, {a, -a}, {a, a}, {-a, a}};
    CHECK(half_plane_square_area(a, ux, uy, s) == doctest::Approx(clipped_area(sq, ux, uy, s)).epsilon(1e-9).scale(a * a));
  }
  CHECK(half_plane_square_area(1.0, 1.0, 0.0, 5.0) == 4.0);
  CHECK(half_plane_square_area(1.0, 1.0, 0.0, -5.0) == 0.0);
}

TEST_CASE("pixel accumulation") {
  const auto fam = line_angle(1.0);
  const PixelImage unit(1, 1, Window{-1, 1, -1, 1}, {1.0});
  const Discretization fine({0.0, 0.0}, {M_PI / 100.0, 1e-3}, {50, -1500}, {50, 1500});
  REQUIRE(std::abs(fine.center_component(0, 50) - M_PI / 2) < 1e-15);
  const HoughCounter h = accumulate_pixel(fam, unit, fine);
  const double lp[1] = {M_PI / 2};
  for (long n : {-900L, -1L, 0L, 1L, 400L}) {
    const double g = fine.center_component(1, n);
    const double strip = charge(fam, unit, lp, g + 5e-4) - charge(fam, unit, lp, g - 5e-4);
    CHECK(h.values[fine.flat(std::vector<long>{50, n})] == doctest::Approx(strip).epsilon(1e-9).scale(1e-3));
  }
  Sinogram r = rescale(h);
  CHECK(r.values[fine.flat(std::vector<long>{50, 0})] == doctest::Approx(2.0).epsilon(1e-9));

  CHECK_THROWS_AS(accumulate_pixel(weierstrass_cubic(), unit, fine), ContractViolation);

  // Zero image, linearity, and telescoping on a random image.
  Rng rng(54);
  const PixelImage zero(6, 6);
  const HoughCounter hz = accumulate_pixel(fam, zero, kSmallGrid);
  CHECK(std::all_of(hz.values.begin(), hz.values.end(), [](double v) { return v == 0.0; }));
  const PixelImage a = testing::random_image(6, 6, rng), b = testing::random_image(6, 6, rng);
  PixelImage ab(6, 6);
  for (std::size_t p = 0; p < 36; ++p) ab.values()[p] = a.values()[p] + 2.0 * b.values()[p];
  const HoughCounter ha = accumulate_pixel(fam, a, kSmallGrid), hb = accumulate_pixel(fam, b, kSmallGrid),
                     hab = accumulate_pixel(fam, ab, kSmallGrid);
  for (std::size_t p = 0; p < hab.values.size(); ++p)
    CHECK(hab.values[p] == doctest::Approx(ha.values[p] + 2.0 * hb.values[p]).epsilon(1e-10).scale(1.0));
  // The gamma-range [-2.05, 2.05) covers the whole window, so every column holds the mass.
  for (std::size_t i = 0; i < ha.columns(); ++i) {
    const double sum = std::accumulate(ha.column(i).begin(), ha.column(i).end(), 0.0);
    CHECK(sum == doctest::Approx(a.mass()).epsilon(1e-10));
  }
  // Supersampling: misclassified sub-pixels straddle one of the two strip edges.
  PixelAccumulation ss{PixelAccumulation::Strategy::Supersample, 8};
  const HoughCounter hss = accumulate_pixel(fam, a, kSmallGrid, ss);
  const double h_sub = std::sqrt(a.pixel_area()) / 8.0;
  const double crossed = 2.0 * (2.0 * std::sqrt(2.0) * 2.0 / h_sub + 2.0);
  const double bound = crossed * h_sub * h_sub * 1.0;
  double worst = 0.0;
  for (std::size_t p = 0; p < hss.values.size(); ++p) worst = std::max(worst, std::abs(hss.values[p] - ha.values[p]));
  CHECK(worst <= bound);
  CHECK(accumulate_pixel(fam, a, kSmallGrid, {}, 3).values == ha.values);
}

TEST_CASE("rescale") {
  HoughCounter h(Discretization({0.0, 0.0}, {0.2, 0.1}, {0, 0}, {1, 1}));
  h.values = {0.0, 3.0, 1.0, 2.0};
  const Sinogram s = rescale(h);
  CHECK(s.values[1] == doctest::Approx(30.0));
  CHECK(s.provenance == Provenance::HoughRescaled);
  CHECK(std::max_element(s.values.begin(), s.values.end()) - s.values.begin() == 1);
  h.rescale_in_place();
  CHECK(h.values[1] == doctest::Approx(30.0));
  CHECK_THROWS_AS(h.rescale_in_place(), ContractViolation);
  CHECK_THROWS_AS(rescale(h), ContractViolation);
}

TEST_CASE("peak detection") {
  const Discretization g({0.0, 0.0}, {1.0, 1.0}, {0, 0}, {4, 4});
  std::vector<double> v(25, 0.0);
  v[g.flat(std::vector<long>{1, 1})] = 5.0;
  v[g.flat(std::vector<long>{1, 2})] = 4.0;
  v[g.flat(std::vector<long>{3, 4})] = 5.0;
  v[g.flat(std::vector<long>{4, 0})] = 3.0;
  auto peaks = detect_peaks(g, v, 3, 1);
  REQUIRE(peaks.size() == 3);
  CHECK(peaks[0].index == CellIndex{1, 1});
  CHECK(peaks[1].index == CellIndex{3, 4});
  CHECK(peaks[2].index == CellIndex{4, 0});
  peaks = detect_peaks(g, v, 2, 0);
  CHECK(peaks[1].index == CellIndex{3, 4});
  CHECK_THROWS(detect_peaks(g, v, 0, 0));
  CHECK_THROWS(detect_peaks(g, std::vector<double>{}, 1, 0));
}

TEST_CASE("Weierstrass cubic peaks") {
  Rng rng(55);
  const auto fam = weierstrass_cubic();
  const Discretization grid = Discretization::symmetric({0.0, 0.0}, {0.05, 0.05}, {40, 40});
  const DiscreteImage one = cubic_points(-1.0, 1.0, -1.3, 2.0, 30, rng);
  const DiscreteImage two = cubic_points(0.5, -0.5, 0.7, 2.0, 30, rng);
  std::vector<double> coords, weights;
  for (const DiscreteImage* img : {&one, &two})
    for (std::size_t j = 0; j < img->size(); ++j) {
      coords.push_back(img->point(j)[0]);
      coords.push_back(img->point(j)[1]);
      weights.push_back(1.0);
    }
  const HoughCounter h = accumulate_discrete(fam, DiscreteImage(2, coords, weights), grid);
  for (double v : h.values) CHECK(v == std::floor(v));
  const auto peaks = detect_peaks(h, 2, 2);
  REQUIRE(peaks.size() == 2);
  std::vector<std::pair<double, double>> found;
  for (const Peak& p : peaks) found.emplace_back(p.center[0], p.center[1]);
  std::sort(found.begin(), found.end());
  CHECK(found[0].first == doctest::Approx(-1.0));
  CHECK(found[0].second == doctest::Approx(1.0));
  CHECK(found[1].first == doctest::Approx(0.5));
  CHECK(found[1].second == doctest::Approx(-0.5));

  // Scaling every weight leaves the chosen cells alone.
  const HoughCounter hc = accumulate_discrete(fam, DiscreteImage(2, coords, weights).scaled(2.5), grid);
  const auto scaled = detect_peaks(hc, 2, 2);
  for (std::size_t k = 0; k < 2; ++k) {
    CHECK(scaled[k].index == peaks[k].index);
    CHECK(scaled[k].value == doctest::Approx(2.5 * peaks[k].value));
  }
}
