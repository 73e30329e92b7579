#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace radhough {

/// Rectangular image window [x_min, x_max] x [y_min, y_max].
struct Window {
  double x_min = -1.0;
  double x_max = 1.0;
  double y_min = -1.0;
  double y_max = 1.0;
};

/// Piecewise-constant image made of square pixels.
///
/// Values are stored row-major with row 0 at the top of the window
/// (largest x2), matching raster file order. Pixel (r, c) covers the
/// half-open square [x_min + 2ac, x_min + 2a(c+1)) x (y_max - 2a(r+1), y_max - 2ar].
class PixelImage {
 public:
  PixelImage(std::size_t width, std::size_t height, Window window, std::vector<double> values);
  /// Zero image; window defaults to the centred box whose longer side is [-1, 1].
  PixelImage(std::size_t width, std::size_t height);
  PixelImage(std::size_t width, std::size_t height, Window window);

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  const Window& window() const { return window_; }
  /// Pixel half-side a.
  double half_side() const { return half_side_; }
  double pixel_area() const { return 4.0 * half_side_ * half_side_; }

  double& at(std::size_t row, std::size_t col) { return values_[row * width_ + col]; }
  double at(std::size_t row, std::size_t col) const { return values_[row * width_ + col]; }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  double center_x(std::size_t col) const;
  double center_y(std::size_t row) const;

  /// m(x); zero outside the window.
  double value_at(double x1, double x2) const;
  /// Unclamped (col, row) of the cell containing x; may lie outside the image.
  std::pair<long, long> locate(double x1, double x2) const;

  /// Sum of value * pixel area.
  double mass() const;

 private:
  std::size_t width_;
  std::size_t height_;
  Window window_;
  double half_side_;
  std::vector<double> values_;
};

/// Window centred at the origin whose longer side spans [-1, 1], with square pixels.
Window unit_window(std::size_t width, std::size_t height);

/// Weighted point set sum_j mu_j delta_{x_j} in R^n.
class DiscreteImage {
 public:
  DiscreteImage(std::size_t dim, std::vector<double> coords, std::vector<double> weights);
  /// Unit weights.
  static DiscreteImage unit(std::size_t dim, std::vector<double> coords);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return weights_.size(); }
  std::span<const double> point(std::size_t j) const { return {coords_.data() + j * dim_, dim_}; }
  double weight(std::size_t j) const { return weights_[j]; }
  std::span<const double> weights() const { return weights_; }

  DiscreteImage scaled(double factor) const;

 private:
  std::size_t dim_;
  std::vector<double> coords_;
  std::vector<double> weights_;
};

// Shepp-Logan phantom ----------------------------------------------------------

struct Ellipse {
  double intensity;
  double semi_x;
  double semi_y;
  double center_x;
  double center_y;
  double angle_deg;

  bool contains(double x1, double x2) const;
};

enum class PhantomVariant {
  Modified,  // 1974 geometry, contrast-enhanced intensities already in [0, 1]
  Original,  // 1974 geometry and intensities, summed value clamped to [0, 1]
};

/// The ten ellipses of the Shepp-Logan head phantom.
std::vector<Ellipse> shepp_logan_ellipses(PhantomVariant variant = PhantomVariant::Modified);

/// Phantom rasterized on [-1, 1]^2 by sampling each pixel centre.
PixelImage shepp_logan(std::size_t width, std::size_t height,
                       PhantomVariant variant = PhantomVariant::Modified);

/// 1 inside the outer skull ellipse, 0 on the background.
std::vector<unsigned char> shepp_logan_mask(std::size_t width, std::size_t height);

/// Disc of the given radius and value centred at the origin, pixel-centre sampled.
PixelImage disc_image(std::size_t width, std::size_t height, double radius, double value);

// File formats -----------------------------------------------------------------

struct PgmOptions {
  unsigned maxval = 255;
  bool binary = true;
  /// Map [lo, hi] onto [0, maxval]; values outside are clamped.
  double lo = 0.0;
  double hi = 1.0;
  std::vector<std::string> comments;
};

void save_pgm(const PixelImage& image, const std::filesystem::path& path,
              const PgmOptions& options = {});
/// Samples are mapped to [0, 1] by dividing by maxval.
PixelImage load_pgm(const std::filesystem::path& path);
PixelImage load_pgm(const std::filesystem::path& path, Window window);

/// Bins point weights into the pixels of an empty image with the given layout.
PixelImage rasterize_points(const DiscreteImage& points, std::size_t width, std::size_t height,
                            Window window);

/// Points from CSV rows `x1,x2[,weight]`; `#` lines are comments.
DiscreteImage load_points_csv(const std::filesystem::path& path);
void save_points_csv(const DiscreteImage& points, const std::filesystem::path& path);

}  // namespace radhough
