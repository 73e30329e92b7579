#include "radhough/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "radhough/error.hpp"
#include "text.hpp"

namespace radhough {

Discretization::Discretization(std::vector<double> lambda_star, std::vector<double> d,
                               std::vector<long> n_lo, std::vector<long> n_hi)
    : lambda_star_(std::move(lambda_star)),
      d_(std::move(d)),
      n_lo_(std::move(n_lo)),
      n_hi_(std::move(n_hi)) {
  const std::size_t t = d_.size();
  if (t == 0) throw ContractViolation("discretization needs at least one axis");
  if (lambda_star_.size() != t || n_lo_.size() != t || n_hi_.size() != t)
    throw ContractViolation("discretization fields must all have length t");
  for (std::size_t k = 0; k < t; ++k) {
    if (!(d_[k] > 0.0) || !std::isfinite(d_[k]))
      throw DomainError("sampling distance must be positive and finite");
    if (!std::isfinite(lambda_star_[k])) throw DomainError("initialization point must be finite");
    if (n_hi_[k] < n_lo_[k]) throw ContractViolation("empty index range on an axis");
  }
}

Discretization Discretization::symmetric(std::vector<double> lambda_star, std::vector<double> d,
                                         const std::vector<long>& half_counts) {
  std::vector<long> lo, hi;
  for (long n : half_counts) {
    lo.push_back(-n);
    hi.push_back(n);
  }
  return {std::move(lambda_star), std::move(d), std::move(lo), std::move(hi)};
}

Discretization Discretization::tiling(const std::vector<double>& lo, const std::vector<double>& hi,
                                      const std::vector<long>& counts) {
  if (lo.size() != hi.size() || lo.size() != counts.size())
    throw ContractViolation("tiling: mismatched axis counts");
  std::vector<double> star, d;
  std::vector<long> n_lo, n_hi;
  for (std::size_t k = 0; k < lo.size(); ++k) {
    if (counts[k] < 1 || !(hi[k] > lo[k])) throw DomainError("tiling: empty axis");
    const double step = (hi[k] - lo[k]) / static_cast<double>(counts[k]);
    star.push_back(lo[k] + 0.5 * step);
    d.push_back(step);
    n_lo.push_back(0);
    n_hi.push_back(counts[k] - 1);
  }
  return {std::move(star), std::move(d), std::move(n_lo), std::move(n_hi)};
}

Discretization Discretization::sinogram(long angles, long offsets, double gamma_max) {
  if (angles < 1 || offsets < 2 || !(gamma_max > 0.0))
    throw DomainError("sinogram grid needs >=1 angle, >=2 offsets and gamma_max > 0");
  const double d_theta = M_PI / static_cast<double>(angles);
  const double d_gamma = 2.0 * gamma_max / static_cast<double>(offsets - 1);
  // Odd offset counts are centred on gamma = 0 so the middle row is exact.
  if (offsets % 2 == 1) {
    const long half = (offsets - 1) / 2;
    return {{0.0, 0.0}, {d_theta, d_gamma}, {0, -half}, {angles - 1, half}};
  }
  return {{0.0, -gamma_max}, {d_theta, d_gamma}, {0, 0}, {angles - 1, offsets - 1}};
}

std::size_t Discretization::extent(std::size_t k) const {
  return static_cast<std::size_t>(n_hi_.at(k) - n_lo_.at(k) + 1);
}

std::size_t Discretization::size() const {
  std::size_t total = 1;
  for (std::size_t k = 0; k < t(); ++k) total *= extent(k);
  return total;
}

double Discretization::max_step() const { return *std::max_element(d_.begin(), d_.end()); }

long Discretization::index_component(std::size_t k, double value) const {
  if (!std::isfinite(value)) throw DomainError("parameter value must be finite");
  return static_cast<long>(std::floor(0.5 + (value - lambda_star_.at(k)) / d_[k]));
}

double Discretization::center_component(std::size_t k, long n) const {
  return lambda_star_.at(k) + static_cast<double>(n) * d_[k];
}

double Discretization::snap_component(std::size_t k, double value) const {
  return center_component(k, index_component(k, value));
}

std::vector<double> Discretization::snap_prefix(std::span<const double> lambda_prime) const {
  if (t() < 2) throw ContractViolation("snap_prefix needs t >= 2");
  if (lambda_prime.size() != t() - 1)
    throw ContractViolation("snap_prefix expects t-1 components");
  std::vector<double> out(lambda_prime.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = snap_component(k, lambda_prime[k]);
  return out;
}

std::optional<CellIndex> Discretization::cell_index(std::span<const double> lambda) const {
  if (lambda.size() != t()) throw ContractViolation("cell_index expects t components");
  CellIndex index(t());
  for (std::size_t k = 0; k < t(); ++k) {
    index[k] = index_component(k, lambda[k]);
    if (index[k] < n_lo_[k] || index[k] > n_hi_[k]) return std::nullopt;
  }
  return index;
}

std::vector<double> Discretization::cell_center(std::span<const long> index) const {
  if (index.size() != t()) throw ContractViolation("cell_center expects t indices");
  std::vector<double> center(t());
  for (std::size_t k = 0; k < t(); ++k) center[k] = center_component(k, index[k]);
  return center;
}

bool Discretization::in_bounds(std::span<const long> index) const {
  if (index.size() != t()) return false;
  for (std::size_t k = 0; k < t(); ++k)
    if (index[k] < n_lo_[k] || index[k] > n_hi_[k]) return false;
  return true;
}

double Discretization::lower(std::size_t k) const {
  return center_component(k, n_lo_.at(k)) - 0.5 * d_[k];
}

double Discretization::upper(std::size_t k) const {
  return center_component(k, n_hi_.at(k)) + 0.5 * d_[k];
}

bool Discretization::contains(std::span<const double> lambda) const {
  return cell_index(lambda).has_value();
}

std::size_t Discretization::flat(std::span<const long> index) const {
  if (!in_bounds(index)) throw DomainError("cell index out of bounds");
  std::size_t pos = 0;
  for (std::size_t k = 0; k < t(); ++k)
    pos = pos * extent(k) + static_cast<std::size_t>(index[k] - n_lo_[k]);
  return pos;
}

CellIndex Discretization::unflat(std::size_t position) const {
  if (position >= size()) throw DomainError("flat cell position out of range");
  CellIndex index(t());
  for (std::size_t k = t(); k-- > 0;) {
    const std::size_t e = extent(k);
    index[k] = n_lo_[k] + static_cast<long>(position % e);
    position /= e;
  }
  return index;
}

std::string Discretization::describe() const {
  std::string out = "t=" + std::to_string(t());
  out += " lambda_star=" + detail::join_reals(lambda_star_);
  out += " d=" + detail::join_reals(d_);
  out += " bounds=";
  for (std::size_t k = 0; k < t(); ++k) {
    if (k) out += ',';
    out += std::to_string(n_lo_[k]) + ':' + std::to_string(n_hi_[k]);
  }
  return out;
}

Discretization Discretization::parse(const std::string& text) {
  std::istringstream in(text);
  std::string token;
  long t = -1;
  std::vector<double> star, d;
  std::vector<long> lo, hi;
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = token.substr(0, eq);
    const std::string_view value = std::string_view(token).substr(eq + 1);
    if (key == "t") {
      t = detail::parse_long(value);
    } else if (key == "lambda_star") {
      star = detail::parse_reals(value);
    } else if (key == "d") {
      d = detail::parse_reals(value);
    } else if (key == "bounds") {
      for (auto part : detail::split(value, ',')) {
        const auto colon = part.find(':');
        if (colon == std::string_view::npos) throw FormatError("bounds entry needs lo:hi");
        lo.push_back(detail::parse_long(part.substr(0, colon)));
        hi.push_back(detail::parse_long(part.substr(colon + 1)));
      }
    }
  }
  if (t < 1 || star.size() != static_cast<std::size_t>(t) || d.size() != star.size() ||
      lo.size() != star.size())
    throw FormatError("incomplete grid descriptor: '" + text + "'");
  return {std::move(star), std::move(d), std::move(lo), std::move(hi)};
}

}  // namespace radhough
