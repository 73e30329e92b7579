#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace radhough {

/// Axis-aligned box [lo, hi] with an optional exclusion predicate.
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;
  std::function<bool(std::span<const double>)> excluded;

  std::size_t dim() const { return lo.size(); }
  bool contains(std::span<const double> p) const;
};

/// Image-space graph of a zero locus S(lambda) in the plane: one coordinate
/// (`free_axis`) runs over the image window, the other is `other(s)`.
struct GraphChart {
  std::size_t free_axis = 0;
  std::function<double(double)> other;
  std::function<double(double)> slope;  // d other / d s
};

/// Curve/surface family in lambda_t-solvable form f(x; lambda) = lambda_t - F(x; lambda').
///
/// Everything the Radon and Hough sides need is evaluation of F and its
/// gradients; families are immutable value objects carrying closures.
class SolvableFamily {
 public:
  using ScalarFn = std::function<double(std::span<const double> x, std::span<const double> lp)>;
  using VectorFn =
      std::function<std::vector<double>(std::span<const double> x, std::span<const double> lp)>;
  using ChartFn = std::function<std::optional<GraphChart>(std::span<const double> lambda)>;

  struct Spec {
    std::string name;
    std::size_t n = 2;
    std::size_t t = 2;
    ScalarFn eval_F;
    VectorFn grad_x_F;
    VectorFn grad_params_F;  // dF / d lambda', t-1 entries
    Box image_domain;        // W
    Box parameter_domain;    // E
    ChartFn chart;           // optional, plane families only
  };

  explicit SolvableFamily(Spec spec);

  const std::string& name() const { return spec_.name; }
  std::size_t n() const { return spec_.n; }
  std::size_t t() const { return spec_.t; }
  const Box& image_domain() const { return spec_.image_domain; }
  const Box& parameter_domain() const { return spec_.parameter_domain; }

  double F(std::span<const double> x, std::span<const double> lambda_prime) const;
  std::vector<double> grad_x_F(std::span<const double> x, std::span<const double> lambda_prime) const;

  /// f(x; lambda) = lambda_t - F(x; lambda').
  double f(std::span<const double> x, std::span<const double> lambda) const;
  std::vector<double> grad_x_f(std::span<const double> x, std::span<const double> lambda) const;
  /// Gradient in lambda; the last entry is identically 1.
  std::vector<double> grad_lambda_f(std::span<const double> x,
                                    std::span<const double> lambda) const;

  /// Graph chart of S(lambda) in image space, if the family provides one.
  std::optional<GraphChart> chart(std::span<const double> lambda) const;

  /// Throws DomainError when x is outside W (or hits an excluded point).
  void require_in_image_domain(std::span<const double> x) const;

 private:
  Spec spec_;
};

/// The Hough transform of a point: lambda' -> F(x; lambda'), i.e. the graph
/// of H(x) = { lambda : f(x; lambda) = 0 }.
class HoughGraph {
 public:
  HoughGraph(const SolvableFamily& family, std::vector<double> x);
  double operator()(std::span<const double> lambda_prime) const;
  /// Duality check: lambda lies on H(x) within tol.
  bool contains(std::span<const double> lambda, double tol) const;

 private:
  const SolvableFamily* family_;
  std::vector<double> x_;
};

HoughGraph hough_transform_of_point(const SolvableFamily& family, std::span<const double> x);

// Built-in families -----------------------------------------------------------

/// gamma - x1 cos(theta) - x2 sin(theta), lambda = (theta, gamma).
SolvableFamily line_angle(double window = 1.0);
/// gamma - omega1 x1 - x2, lambda = (omega1, gamma).
SolvableFamily line_slope(double window = 1.0);
/// gamma - omega . x in R^n, lambda = (omega_1..omega_n, gamma).
SolvableFamily hyperplane(std::size_t n, double window = 1.0);
/// b - (x2^2 - x1^3 - a x1), lambda = (a, b).
SolvableFamily weierstrass_cubic(double window = 3.0);
/// t = 1 projection onto a fixed direction: lambda_1 - (x1 cos(theta) + x2 sin(theta)).
SolvableFamily fixed_direction_line(double theta, double window = 1.0);

/// Names accepted on the command line: line-angle, line-slope, hyperplane, weierstrass.
SolvableFamily family_by_name(const std::string& name);

// Solvability validation ------------------------------------------------------

/// A family given as a general implicit function f(x; lambda), optionally
/// with a declared solved form F.
struct ImplicitFamily {
  std::string name;
  std::size_t n = 2;
  std::size_t t = 2;
  std::function<double(std::span<const double> x, std::span<const double> lambda)> f;
  SolvableFamily::ScalarFn declared_F;  // empty when no solved form is declared
  SolvableFamily::VectorFn grad_x_F;
  Box image_domain;
  Box parameter_domain;
};

/// Accepts a candidate only if it declares a solved form F that reproduces
/// f = lambda_t - F on probe points; otherwise throws SolvabilityError naming
/// the missing structure (including which parameters f is affine in).
SolvableFamily validate_solvability(const ImplicitFamily& candidate, unsigned probes = 64,
                                    unsigned long seed = 7);

/// Conchoid of de Sluse a (x1 - a)(x1^2 + x2^2) - b^2 x1^2, neither a- nor b-solvable.
ImplicitFamily conchoid_of_sluse();
/// The cubic y^2 = x^3 + a x + b written implicitly, with its b-solved form declared.
ImplicitFamily weierstrass_implicit();
ImplicitFamily line_angle_implicit();

}  // namespace radhough
