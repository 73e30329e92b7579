#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "radhough/grid.hpp"

namespace radhough {

enum class Provenance { RadonExact, RadonNumeric, HoughRescaled, Noisy };

std::string to_string(Provenance p);
Provenance provenance_from_string(const std::string& text);

/// Dense field of values over a parameter grid, one value per cell.
///
/// Storage is row-major over the cell index, so for fixed lambda' (the first
/// t-1 axes) the lambda_t profile is contiguous. For the plane-line case
/// profile(i) is the gamma profile at angle theta_i.
struct Sinogram {
  Discretization disc;
  std::vector<double> values;
  Provenance provenance = Provenance::RadonExact;
  /// Parameter echo lines carried into file headers (without the leading '#').
  std::vector<std::string> metadata;

  Sinogram(Discretization grid, Provenance prov);
  Sinogram(Discretization grid, std::vector<double> data, Provenance prov);

  /// Number of lambda' cells (product of the first t-1 extents).
  std::size_t profiles() const { return values.size() / profile_length(); }
  std::size_t profile_length() const { return disc.extent(disc.t() - 1); }
  std::span<double> profile(std::size_t i) {
    return {values.data() + i * profile_length(), profile_length()};
  }
  std::span<const double> profile(std::size_t i) const {
    return {values.data() + i * profile_length(), profile_length()};
  }

  double& at(std::size_t i, std::size_t j) { return values[i * profile_length() + j]; }
  double at(std::size_t i, std::size_t j) const { return values[i * profile_length() + j]; }
};

/// CSV layout: `# <grid> provenance=<tag>` header, `# key=value` echo lines,
/// then one comma-separated row per lambda' cell holding the lambda_t profile.
void save_sinogram_csv(const Sinogram& s, const std::filesystem::path& path);
Sinogram load_sinogram_csv(const std::filesystem::path& path);

/// Min-max normalized greyscale picture: lambda_1 horizontal, lambda_t vertical
/// (largest value at the top). Plane grids only.
void save_sinogram_pgm(const Sinogram& s, const std::filesystem::path& path);

}  // namespace radhough
