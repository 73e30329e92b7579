#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "radhough/error.hpp"
#include "radhough/images.hpp"
#include "support.hpp"

using namespace radhough;
using radhough::testing::Rng;

namespace {

// Canonical head phantom (modified intensities): value, semi-axes, centre, angle in degrees.
struct E {
  double v, a, b, x0, y0, phi;
};
const E kTable[] = {
    {1.0, 0.69, 0.92, 0.0, 0.0, 0.0},       {-0.8, 0.6624, 0.874, 0.0, -0.0184, 0.0},
    {-0.2, 0.11, 0.31, 0.22, 0.0, -18.0},   {-0.2, 0.16, 0.41, -0.22, 0.0, 18.0},
    {0.1, 0.21, 0.25, 0.0, 0.35, 0.0},      {0.1, 0.046, 0.046, 0.0, 0.1, 0.0},
    {0.1, 0.046, 0.046, 0.0, -0.1, 0.0},    {0.1, 0.046, 0.023, -0.08, -0.605, 0.0},
    {0.1, 0.023, 0.023, 0.0, -0.606, 0.0},  {0.1, 0.023, 0.046, 0.06, -0.605, 0.0},
};

double phantom_oracle(double x, double y) {
  double v = 0.0;
  for (const E& e : kTable) {
    const double t = e.phi * M_PI / 180.0;
    // Rotate the point into the ellipse frame.
    const double dx = x - e.x0, dy = y - e.y0;
    const double u = std::cos(t) * dx + std::sin(t) * dy;
    const double w = -std::sin(t) * dx + std::cos(t) * dy;
    if ((u / e.a) * (u / e.a) + (w / e.b) * (w / e.b) <= 1.0) v += e.v;
  }
  return std::min(1.0, std::max(0.0, v));
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("radhough_test_" + name);
}

}  // namespace

TEST_CASE("pixel geometry") {
  const PixelImage img(4, 2);
  CHECK(img.window().x_min == -1.0);
  CHECK(img.window().y_max == 0.5);
  CHECK(img.half_side() == 0.25);
  CHECK(img.center_x(0) == -0.75);
  CHECK(img.center_y(0) == 0.25);
  CHECK(img.locate(-1.0, 0.5) == std::pair<long, long>{0, 0});
  CHECK(img.locate(-0.5, 0.0) == std::pair<long, long>{1, 1});
  CHECK_THROWS_AS(PixelImage(2, 2, Window{-1, 1, -1, 2}), DomainError);
  CHECK_THROWS_AS(PixelImage(1, 1, Window{}, {NAN}), DomainError);
}

TEST_CASE("Shepp-Logan raster matches the ellipse-table oracle") {
  const PixelImage img = shepp_logan(255, 255);
  double lo = 1.0, hi = 0.0;
  for (std::size_t r = 0; r < 255; ++r)
    for (std::size_t c = 0; c < 255; ++c) {
      CHECK(img.at(r, c) == doctest::Approx(phantom_oracle(img.center_x(c), img.center_y(r))).epsilon(1e-12));
      lo = std::min(lo, img.at(r, c));
      hi = std::max(hi, img.at(r, c));
    }
  CHECK(lo >= 0.0);
  CHECK(hi <= 1.0);
  CHECK(img.at(0, 0) == 0.0);
  CHECK(img.at(127, 127) == doctest::Approx(phantom_oracle(0.0, 0.0)));
  CHECK(img.at(127, 127) == doctest::Approx(0.2));
  CHECK_THROWS_AS(shepp_logan(0, 4), DomainError);
}

TEST_CASE("Shepp-Logan rasterization is resolution consistent") {
  const PixelImage coarse = shepp_logan(128, 128);
  const PixelImage fine = shepp_logan(256, 256);
  double diff = 0.0;
  for (std::size_t r = 0; r < 128; ++r)
    for (std::size_t c = 0; c < 128; ++c) {
      const double box = 0.25 * (fine.at(2 * r, 2 * c) + fine.at(2 * r + 1, 2 * c) + fine.at(2 * r, 2 * c + 1) +
                                 fine.at(2 * r + 1, 2 * c + 1));
      diff += std::abs(box - coarse.at(r, c));
    }
  // Point sampling disagrees only on pixels straddling an ellipse edge.
  CHECK(diff / (128.0 * 128.0) < 0.02);

  const double m256 = fine.mass();
  const double m512 = shepp_logan(512, 512).mass();
  CHECK(std::abs(m256 - m512) / m512 < 0.01);
}

TEST_CASE("mask marks the outer ellipse") {
  const auto mask = shepp_logan_mask(64, 64);
  const PixelImage img = shepp_logan(64, 64);
  CHECK(mask[0] == 0);
  CHECK(mask[32 * 64 + 32] == 1);
  for (std::size_t p = 0; p < mask.size(); ++p)
    if (!mask[p]) CHECK(img.values()[p] == 0.0);
}

TEST_CASE("PGM round trips") {
  Rng rng(31);
  PixelImage img = testing::random_image(13, 7, rng);
  const auto path = temp_file("roundtrip.pgm");
  for (bool binary : {true, false}) {
    for (unsigned maxval : {255u, 65535u}) {
      PgmOptions opt;
      opt.binary = binary;
      opt.maxval = maxval;
      opt.comments = {"test image"};
      save_pgm(img, path, opt);
      const PixelImage back = load_pgm(path);
      REQUIRE(back.width() == 13);
      REQUIRE(back.height() == 7);
      double worst = 0.0;
      for (std::size_t p = 0; p < img.values().size(); ++p)
        worst = std::max(worst, std::abs(back.values()[p] - img.values()[p]));
      CHECK(worst <= 0.5 / maxval + 1e-15);
    }
  }
  PixelImage flat(5, 5);
  for (double& v : flat.values()) v = 1.0;
  save_pgm(flat, path);
  const PixelImage back = load_pgm(path);
  for (double v : back.values()) CHECK(v == 1.0);

  // 16-bit samples resolve 1e-4 steps.
  PixelImage steps(3, 1, Window{-1, 1, -1.0 / 3.0, 1.0 / 3.0}, {0.5, 0.5001, 0.5002});
  PgmOptions deep;
  deep.maxval = 65535;
  save_pgm(steps, path, deep);
  const PixelImage s = load_pgm(path, steps.window());
  CHECK(s.values()[1] - s.values()[0] == doctest::Approx(1e-4).epsilon(0.1));
  CHECK(s.values()[2] - s.values()[1] == doctest::Approx(1e-4).epsilon(0.1));
  std::filesystem::remove(path);
}

TEST_CASE("malformed PGM input is rejected") {
  const auto path = temp_file("bad.pgm");
  const auto write = [&](const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
  };
  write("P3\n2 2\n255\n1 2 3 4\n");
  CHECK_THROWS_AS(load_pgm(path), FormatError);
  write("P2\n2 2\n255\n1 2 3\n");
  CHECK_THROWS_AS(load_pgm(path), FormatError);
  write("P2\n2 2\n255\n1 2 3 400\n");
  CHECK_THROWS_AS(load_pgm(path), FormatError);
  write("P5\n2 2\n255\nab");
  CHECK_THROWS_AS(load_pgm(path), FormatError);
  write("P2\n# comment\n2 1\n10\n0 10\n");
  const PixelImage ok = load_pgm(path);
  CHECK(ok.values()[1] == 1.0);
  std::filesystem::remove(path);
}

TEST_CASE("discrete images and point files") {
  CHECK_THROWS_AS(DiscreteImage(2, {}, {}), DomainError);
  CHECK_THROWS_AS(DiscreteImage(2, {0.0}, {1.0}), DomainError);
  const DiscreteImage pts(2, {0.1, 0.2, -0.5, 0.9}, {2.0, 3.0});
  CHECK(pts.size() == 2);
  CHECK(pts.point(1)[1] == 0.9);
  CHECK(pts.scaled(2.0).weight(1) == 6.0);

  const auto path = temp_file("points.csv");
  save_points_csv(pts, path);
  const DiscreteImage back = load_points_csv(path);
  CHECK(back.size() == 2);
  CHECK(back.point(0)[0] == 0.1);
  CHECK(back.weight(1) == 3.0);
  std::filesystem::remove(path);

  const PixelImage r = rasterize_points(pts, 4, 4, Window{});
  CHECK(r.mass() == doctest::Approx(5.0 * r.pixel_area()));
  CHECK(r.value_at(0.1, 0.2) == 2.0);
}
