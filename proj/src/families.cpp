#include "radhough/families.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "radhough/error.hpp"

namespace radhough {

bool Box::contains(std::span<const double> p) const {
  if (p.size() != lo.size()) return false;
  for (std::size_t k = 0; k < p.size(); ++k)
    if (!(p[k] >= lo[k] && p[k] <= hi[k])) return false;
  return !(excluded && excluded(p));
}

SolvableFamily::SolvableFamily(Spec spec) : spec_(std::move(spec)) {
  if (spec_.n < 1 || spec_.t < 1) throw ContractViolation("family dimensions must be positive");
  if (!spec_.eval_F || !spec_.grad_x_F) throw ContractViolation("family needs F and grad_x F");
  if (spec_.image_domain.dim() != spec_.n)
    throw ContractViolation("image domain dimension must equal n");
}

double SolvableFamily::F(std::span<const double> x, std::span<const double> lambda_prime) const {
  return spec_.eval_F(x, lambda_prime);
}

std::vector<double> SolvableFamily::grad_x_F(std::span<const double> x,
                                             std::span<const double> lambda_prime) const {
  return spec_.grad_x_F(x, lambda_prime);
}

double SolvableFamily::f(std::span<const double> x, std::span<const double> lambda) const {
  if (lambda.size() != t()) throw ContractViolation("lambda must have t components");
  return lambda.back() - F(x, lambda.first(t() - 1));
}

std::vector<double> SolvableFamily::grad_x_f(std::span<const double> x,
                                             std::span<const double> lambda) const {
  auto g = grad_x_F(x, lambda.first(t() - 1));
  for (double& v : g) v = -v;
  return g;
}

std::vector<double> SolvableFamily::grad_lambda_f(std::span<const double> x,
                                                  std::span<const double> lambda) const {
  std::vector<double> g(t(), 0.0);
  const auto lp = lambda.first(t() - 1);
  if (t() > 1) {
    std::vector<double> dF;
    if (spec_.grad_params_F) {
      dF = spec_.grad_params_F(x, lp);
    } else {
      // central differences, only used for user families without the hook
      std::vector<double> probe(lp.begin(), lp.end());
      dF.resize(lp.size());
      for (std::size_t k = 0; k < lp.size(); ++k) {
        const double h = 1e-6 * std::max(1.0, std::abs(lp[k]));
        probe[k] = lp[k] + h;
        const double up = F(x, probe);
        probe[k] = lp[k] - h;
        const double down = F(x, probe);
        probe[k] = lp[k];
        dF[k] = (up - down) / (2.0 * h);
      }
    }
    for (std::size_t k = 0; k + 1 < t(); ++k) g[k] = -dF[k];
  }
  g.back() = 1.0;
  return g;
}

std::optional<GraphChart> SolvableFamily::chart(std::span<const double> lambda) const {
  if (!spec_.chart) return std::nullopt;
  return spec_.chart(lambda);
}

void SolvableFamily::require_in_image_domain(std::span<const double> x) const {
  if (x.size() != n()) throw ContractViolation("point dimension does not match family");
  if (!spec_.image_domain.contains(x))
    throw DomainError("point outside the image domain of family '" + name() + "'");
}

HoughGraph::HoughGraph(const SolvableFamily& family, std::vector<double> x)
    : family_(&family), x_(std::move(x)) {
  family.require_in_image_domain(x_);
}

double HoughGraph::operator()(std::span<const double> lambda_prime) const {
  return family_->F(x_, lambda_prime);
}

bool HoughGraph::contains(std::span<const double> lambda, double tol) const {
  return std::abs(family_->f(x_, lambda)) < tol;
}

HoughGraph hough_transform_of_point(const SolvableFamily& family, std::span<const double> x) {
  return HoughGraph(family, std::vector<double>(x.begin(), x.end()));
}

namespace {

Box square_box(std::size_t n, double half) {
  return Box{std::vector<double>(n, -half), std::vector<double>(n, half), {}};
}

// Line gamma = x1 c + x2 s parametrized over whichever axis keeps the slope <= 1.
GraphChart line_chart(double c, double s, double gamma) {
  if (std::abs(s) >= std::abs(c)) {
    return {0, [=](double u) { return (gamma - u * c) / s; }, [=](double) { return -c / s; }};
  }
  return {1, [=](double u) { return (gamma - u * s) / c; }, [=](double) { return -s / c; }};
}

}  // namespace

SolvableFamily line_angle(double window) {
  SolvableFamily::Spec spec;
  spec.name = "line-angle";
  spec.n = 2;
  spec.t = 2;
  spec.eval_F = [](std::span<const double> x, std::span<const double> lp) {
    return x[0] * std::cos(lp[0]) + x[1] * std::sin(lp[0]);
  };
  spec.grad_x_F = [](std::span<const double>, std::span<const double> lp) {
    return std::vector<double>{std::cos(lp[0]), std::sin(lp[0])};
  };
  spec.grad_params_F = [](std::span<const double> x, std::span<const double> lp) {
    return std::vector<double>{-x[0] * std::sin(lp[0]) + x[1] * std::cos(lp[0])};
  };
  spec.image_domain = square_box(2, window);
  spec.parameter_domain = Box{{-2.0 * M_PI, -4.0 * window}, {2.0 * M_PI, 4.0 * window}, {}};
  spec.chart = [](std::span<const double> lambda) -> std::optional<GraphChart> {
    return line_chart(std::cos(lambda[0]), std::sin(lambda[0]), lambda[1]);
  };
  return SolvableFamily(std::move(spec));
}

SolvableFamily line_slope(double window) {
  SolvableFamily::Spec spec;
  spec.name = "line-slope";
  spec.n = 2;
  spec.t = 2;
  spec.eval_F = [](std::span<const double> x, std::span<const double> lp) {
    return lp[0] * x[0] + x[1];
  };
  spec.grad_x_F = [](std::span<const double>, std::span<const double> lp) {
    return std::vector<double>{lp[0], 1.0};
  };
  spec.grad_params_F = [](std::span<const double> x, std::span<const double>) {
    return std::vector<double>{x[0]};
  };
  spec.image_domain = square_box(2, window);
  spec.parameter_domain = Box{{-1e3, -1e3}, {1e3, 1e3}, {}};
  spec.chart = [](std::span<const double> lambda) -> std::optional<GraphChart> {
    const double w = lambda[0];
    const double g = lambda[1];
    return GraphChart{0, [=](double u) { return g - w * u; }, [=](double) { return -w; }};
  };
  return SolvableFamily(std::move(spec));
}

SolvableFamily hyperplane(std::size_t n, double window) {
  if (n < 2) throw ContractViolation("hyperplane family needs n >= 2");
  SolvableFamily::Spec spec;
  spec.name = "hyperplane";
  spec.n = n;
  spec.t = n + 1;
  spec.eval_F = [](std::span<const double> x, std::span<const double> lp) {
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) s += lp[k] * x[k];
    return s;
  };
  spec.grad_x_F = [](std::span<const double>, std::span<const double> lp) {
    return std::vector<double>(lp.begin(), lp.end());
  };
  spec.grad_params_F = [](std::span<const double> x, std::span<const double>) {
    return std::vector<double>(x.begin(), x.end());
  };
  spec.image_domain = square_box(n, window);
  spec.parameter_domain = square_box(n + 1, 1e3);
  if (n == 2) {
    spec.chart = [](std::span<const double> lambda) -> std::optional<GraphChart> {
      if (lambda[0] == 0.0 && lambda[1] == 0.0) return std::nullopt;
      return line_chart(lambda[0], lambda[1], lambda[2]);
    };
  }
  return SolvableFamily(std::move(spec));
}

SolvableFamily weierstrass_cubic(double window) {
  SolvableFamily::Spec spec;
  spec.name = "weierstrass";
  spec.n = 2;
  spec.t = 2;
  spec.eval_F = [](std::span<const double> x, std::span<const double> lp) {
    return x[1] * x[1] - x[0] * x[0] * x[0] - lp[0] * x[0];
  };
  spec.grad_x_F = [](std::span<const double> x, std::span<const double> lp) {
    return std::vector<double>{-(3.0 * x[0] * x[0] + lp[0]), 2.0 * x[1]};
  };
  spec.grad_params_F = [](std::span<const double> x, std::span<const double>) {
    return std::vector<double>{-x[0]};
  };
  spec.image_domain = square_box(2, window);
  spec.parameter_domain = Box{{-10.0, -10.0}, {10.0, 10.0}, {}};
  return SolvableFamily(std::move(spec));
}

SolvableFamily fixed_direction_line(double theta, double window) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  SolvableFamily::Spec spec;
  spec.name = "fixed-direction-line";
  spec.n = 2;
  spec.t = 1;
  spec.eval_F = [=](std::span<const double> x, std::span<const double>) {
    return x[0] * c + x[1] * s;
  };
  spec.grad_x_F = [=](std::span<const double>, std::span<const double>) {
    return std::vector<double>{c, s};
  };
  spec.image_domain = square_box(2, window);
  spec.parameter_domain = Box{{-4.0 * window}, {4.0 * window}, {}};
  spec.chart = [=](std::span<const double> lambda) -> std::optional<GraphChart> {
    return line_chart(c, s, lambda[0]);
  };
  return SolvableFamily(std::move(spec));
}

SolvableFamily family_by_name(const std::string& name) {
  if (name == "line-angle") return line_angle();
  if (name == "line-slope") return line_slope();
  if (name == "hyperplane") return hyperplane(2);
  if (name == "weierstrass") return weierstrass_cubic();
  throw DomainError("unknown family '" + name +
                    "' (expected line-angle, line-slope, hyperplane, weierstrass)");
}

namespace {

std::vector<double> sample_box(const Box& box, std::mt19937_64& rng) {
  std::vector<double> p(box.dim());
  for (std::size_t k = 0; k < p.size(); ++k) {
    std::uniform_real_distribution<double> u(box.lo[k], box.hi[k]);
    p[k] = u(rng);
  }
  return p;
}

bool near(double a, double b, double scale) {
  return std::abs(a - b) <= 1e-8 * std::max({1.0, std::abs(a), std::abs(b), scale});
}

// f is affine in lambda_k with a coefficient independent of x and lambda.
bool affine_with_constant_coefficient(const ImplicitFamily& c, std::size_t k, unsigned probes,
                                      std::mt19937_64& rng) {
  std::optional<double> coefficient;
  for (unsigned i = 0; i < probes; ++i) {
    const auto x = sample_box(c.image_domain, rng);
    auto lambda = sample_box(c.parameter_domain, rng);
    const double f0 = c.f(x, lambda);
    lambda[k] += 1.0;
    const double f1 = c.f(x, lambda);
    lambda[k] += 1.0;
    const double f2 = c.f(x, lambda);
    const double scale = std::abs(f0) + std::abs(f1) + std::abs(f2);
    const double slope = f1 - f0;
    if (!near(f2 - f1, slope, scale)) return false;
    if (slope == 0.0) return false;
    if (!coefficient) coefficient = slope;
    else if (!near(*coefficient, slope, scale)) return false;
  }
  return true;
}

}  // namespace

SolvableFamily validate_solvability(const ImplicitFamily& candidate, unsigned probes,
                                    unsigned long seed) {
  if (!candidate.f) throw ContractViolation("candidate family has no implicit function");
  if (candidate.image_domain.dim() != candidate.n ||
      candidate.parameter_domain.dim() != candidate.t)
    throw ContractViolation("candidate domains do not match its dimensions");
  std::mt19937_64 rng(seed);

  if (!candidate.declared_F) {
    std::ostringstream msg;
    msg << "family '" << candidate.name << "' declares no lambda_t-solvable form F";
    std::vector<std::size_t> affine;
    for (std::size_t k = 0; k < candidate.t; ++k)
      if (affine_with_constant_coefficient(candidate, k, probes, rng)) affine.push_back(k);
    if (affine.empty()) {
      msg << "; f is not affine with a constant coefficient in any parameter (solvable in none of"
          << " lambda_1..lambda_" << candidate.t << ")";
    } else {
      msg << "; f is affine in lambda_" << affine.front() + 1
          << ": reorder the parameters so it comes last and declare F";
    }
    throw SolvabilityError(msg.str());
  }

  // f must equal c * (lambda_t - F) for a constant c != 0.
  std::optional<double> c;
  for (unsigned i = 0; i < probes; ++i) {
    const auto x = sample_box(candidate.image_domain, rng);
    const auto lambda = sample_box(candidate.parameter_domain, rng);
    const std::span<const double> lp(lambda.data(), candidate.t - 1);
    const double solved = lambda.back() - candidate.declared_F(x, lp);
    const double value = candidate.f(x, lambda);
    if (std::abs(solved) < 1e-9) continue;
    const double ratio = value / solved;
    if (!c) c = ratio;
    if (*c == 0.0 || !near(ratio, *c, 0.0))
      throw SolvabilityError("family '" + candidate.name +
                             "': declared F does not reproduce f = c (lambda_t - F)");
  }
  if (!c) throw SolvabilityError("family '" + candidate.name + "': probes were inconclusive");

  SolvableFamily::Spec spec;
  spec.name = candidate.name;
  spec.n = candidate.n;
  spec.t = candidate.t;
  spec.eval_F = candidate.declared_F;
  if (candidate.grad_x_F) {
    spec.grad_x_F = candidate.grad_x_F;
  } else {
    auto F = candidate.declared_F;
    spec.grad_x_F = [F](std::span<const double> x, std::span<const double> lp) {
      std::vector<double> probe(x.begin(), x.end());
      std::vector<double> g(x.size());
      for (std::size_t k = 0; k < x.size(); ++k) {
        const double h = 1e-6 * std::max(1.0, std::abs(x[k]));
        probe[k] = x[k] + h;
        const double up = F(probe, lp);
        probe[k] = x[k] - h;
        const double down = F(probe, lp);
        probe[k] = x[k];
        g[k] = (up - down) / (2.0 * h);
      }
      return g;
    };
  }
  spec.image_domain = candidate.image_domain;
  spec.parameter_domain = candidate.parameter_domain;
  return SolvableFamily(std::move(spec));
}

ImplicitFamily conchoid_of_sluse() {
  ImplicitFamily c;
  c.name = "conchoid-of-sluse";
  c.f = [](std::span<const double> x, std::span<const double> l) {
    const double a = l[0];
    const double b = l[1];
    return a * (x[0] - a) * (x[0] * x[0] + x[1] * x[1]) - b * b * x[0] * x[0];
  };
  c.image_domain = Box{{-2.0, -2.0}, {2.0, 2.0}, {}};
  c.parameter_domain = Box{{-2.0, -2.0}, {2.0, 2.0}, {}};
  return c;
}

ImplicitFamily weierstrass_implicit() {
  ImplicitFamily c;
  c.name = "weierstrass";
  c.f = [](std::span<const double> x, std::span<const double> l) {
    return x[1] * x[1] - x[0] * x[0] * x[0] - l[0] * x[0] - l[1];
  };
  c.declared_F = [](std::span<const double> x, std::span<const double> lp) {
    return x[1] * x[1] - x[0] * x[0] * x[0] - lp[0] * x[0];
  };
  c.grad_x_F = [](std::span<const double> x, std::span<const double> lp) {
    return std::vector<double>{-(3.0 * x[0] * x[0] + lp[0]), 2.0 * x[1]};
  };
  c.image_domain = Box{{-3.0, -3.0}, {3.0, 3.0}, {}};
  c.parameter_domain = Box{{-10.0, -10.0}, {10.0, 10.0}, {}};
  return c;
}

ImplicitFamily line_angle_implicit() {
  ImplicitFamily c;
  c.name = "line-angle";
  c.f = [](std::span<const double> x, std::span<const double> l) {
    return l[1] - x[0] * std::cos(l[0]) - x[1] * std::sin(l[0]);
  };
  c.declared_F = [](std::span<const double> x, std::span<const double> lp) {
    return x[0] * std::cos(lp[0]) + x[1] * std::sin(lp[0]);
  };
  c.grad_x_F = [](std::span<const double>, std::span<const double> lp) {
    return std::vector<double>{std::cos(lp[0]), std::sin(lp[0])};
  };
  c.image_domain = Box{{-1.0, -1.0}, {1.0, 1.0}, {}};
  c.parameter_domain = Box{{-2.0 * M_PI, -4.0}, {2.0 * M_PI, 4.0}, {}};
  return c;
}

}  // namespace radhough
