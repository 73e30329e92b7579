#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace radhough {

using CellIndex = std::vector<long>;

/// Rectangular discretization of a t-dimensional parameter space.
///
/// Sampling points sit at lambda_star + n * d (componentwise) for integer n in
/// the inclusive range [n_lo, n_hi]. The cell of a sampling point is the
/// half-open box [center - d/2, center + d/2), so every parameter inside the
/// covered domain belongs to exactly one cell. Cells are never materialized.
class Discretization {
 public:
  Discretization(std::vector<double> lambda_star, std::vector<double> d, std::vector<long> n_lo,
                 std::vector<long> n_hi);

  /// Grid with n ranging over [-half_counts_k, half_counts_k] on every axis.
  static Discretization symmetric(std::vector<double> lambda_star, std::vector<double> d,
                                  const std::vector<long>& half_counts);

  /// Grid whose cells tile [lo_k, hi_k) with `counts_k` cells per axis.
  static Discretization tiling(const std::vector<double>& lo, const std::vector<double>& hi,
                               const std::vector<long>& counts);

  /// Plane-line grid: `angles` values of theta in [0, pi) starting at 0 and
  /// `offsets` values of gamma spanning [-gamma_max, gamma_max] inclusive.
  static Discretization sinogram(long angles, long offsets, double gamma_max);

  std::size_t t() const { return d_.size(); }
  const std::vector<double>& lambda_star() const { return lambda_star_; }
  const std::vector<double>& d() const { return d_; }
  const std::vector<long>& n_lo() const { return n_lo_; }
  const std::vector<long>& n_hi() const { return n_hi_; }

  /// Number of cells along axis k.
  std::size_t extent(std::size_t k) const;
  std::size_t size() const;
  /// Largest sampling distance.
  double max_step() const;

  /// Closest sampling value on axis k; half-way values round up.
  double snap_component(std::size_t k, double value) const;
  /// Componentwise snap over the first t-1 axes.
  std::vector<double> snap_prefix(std::span<const double> lambda_prime) const;

  /// Unbounded integer sample index of `value` on axis k.
  long index_component(std::size_t k, double value) const;
  double center_component(std::size_t k, long n) const;

  /// Cell containing lambda, or nullopt when lambda lies outside the domain.
  std::optional<CellIndex> cell_index(std::span<const double> lambda) const;
  std::vector<double> cell_center(std::span<const long> index) const;
  bool in_bounds(std::span<const long> index) const;

  /// Lower / upper edge of the covered domain on axis k (half-open).
  double lower(std::size_t k) const;
  double upper(std::size_t k) const;
  bool contains(std::span<const double> lambda) const;

  /// Row-major position of a cell (axis 0 slowest).
  std::size_t flat(std::span<const long> index) const;
  CellIndex unflat(std::size_t position) const;

  /// Visits every cell in row-major order over (n_1, ..., n_t).
  template <class Fn>
  void for_each_cell(Fn&& fn) const {
    CellIndex index(n_lo_);
    for (std::size_t pos = 0, total = size(); pos < total; ++pos) {
      const std::vector<double> center = cell_center(index);
      fn(std::as_const(index), center);
      for (std::size_t k = t(); k-- > 0;) {
        if (++index[k] <= n_hi_[k]) break;
        index[k] = n_lo_[k];
      }
    }
  }

  /// `t=.. lambda_star=.. d=.. bounds=lo:hi,..` header fragment.
  std::string describe() const;
  /// Inverse of describe(); unknown keys are ignored.
  static Discretization parse(const std::string& text);

  bool operator==(const Discretization&) const = default;

 private:
  std::vector<double> lambda_star_;
  std::vector<double> d_;
  std::vector<long> n_lo_;
  std::vector<long> n_hi_;
};

}  // namespace radhough
