// radhough command-line front end.
//
// Every command echoes its parameters as '#' header lines in the files it
// writes. Exit codes: 0 success, 1 runtime error, 2 usage error.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "radhough/convergence.hpp"
#include "radhough/error.hpp"
#include "radhough/families.hpp"
#include "radhough/hough.hpp"
#include "radhough/images.hpp"
#include "radhough/inversion.hpp"
#include "radhough/radon.hpp"
#include "radhough/sinogram.hpp"
#include "radhough/version.hpp"

using namespace radhough;

namespace {

std::string real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string reals(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + real(v[i]);
  return out;
}

template <class T>
std::string list(const std::vector<T>& v) {
  std::ostringstream out;
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << v[i];
  return out.str();
}

/// "radhough <version> <command> key=value ..." echo line.
class Echo {
 public:
  explicit Echo(std::string command) : line_("radhough " + std::string(kVersion) + " " + std::move(command)) {}
  Echo& add(const std::string& key, const std::string& value) {
    line_ += " " + key + "=" + value;
    return *this;
  }
  Echo& add(const std::string& key, double value) { return add(key, real(value)); }
  const std::string& str() const { return line_; }

 private:
  std::string line_;
};

struct Size {
  std::size_t width = 256;
  std::size_t height = 256;
  std::string text() const { return std::to_string(width) + "x" + std::to_string(height); }
};

Size parse_size(const std::string& text) {
  Size s;
  char x = 0;
  std::istringstream in(text);
  long w = 0, h = 0;
  if (!(in >> w >> x >> h) || x != 'x' || w < 1 || h < 1 || !in.eof())
    throw CLI::ValidationError("--size", "expected WIDTHxHEIGHT, got '" + text + "'");
  s.width = static_cast<std::size_t>(w);
  s.height = static_cast<std::size_t>(h);
  return s;
}

ImageGrid unit_grid(const Size& s) { return {s.width, s.height, unit_window(s.width, s.height)}; }

void write_raw(const PixelImage& image, const std::string& path, const Echo& echo) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  out << "# " << echo.str() << '\n';
  for (std::size_t r = 0; r < image.height(); ++r) {
    for (std::size_t c = 0; c < image.width(); ++c) out << (c ? "," : "") << real(image.at(r, c));
    out << '\n';
  }
}

/// Reconstructions are min-max scaled onto the grey range.
void write_recon_pgm(const PixelImage& image, const std::string& path, const Echo& echo) {
  PgmOptions options;
  options.lo = *std::min_element(image.values().begin(), image.values().end());
  options.hi = *std::max_element(image.values().begin(), image.values().end());
  if (!(options.hi > options.lo)) options.hi = options.lo + 1.0;
  options.comments = {echo.str(), "grey range " + real(options.lo) + " .. " + real(options.hi)};
  save_pgm(image, path, options);
}

SolvableFamily family_for(const std::string& name, double theta) {
  if (name == "fixed-direction-line") return fixed_direction_line(theta);
  return family_by_name(name);
}

/// Default (theta, gamma) or family-specific investigation box.
void default_domain(const SolvableFamily& family, std::vector<double>& lo, std::vector<double>& hi) {
  if (!lo.empty() && !hi.empty()) return;
  const double g = std::sqrt(2.0);
  if (family.name() == "line-angle") {
    lo = {0.0, -g};
    hi = {M_PI, g};
  } else if (family.t() == 1) {
    lo = {-g};
    hi = {g};
  } else {
    throw CLI::ValidationError("--lo/--hi", "family '" + family.name() + "' needs an explicit domain");
  }
}

struct Options {
  unsigned threads = 1;
  std::string out;
  std::string in;
  std::string pgm;
  std::string raw;
  std::string size = "256x256";
  std::string variant = "modified";
  long I = 629;
  long J = 287;
  double gamma_max = std::sqrt(2.0);
  std::string normalization = "unit-gradient";
  double level = 1.0;
  std::uint64_t seed = 1;
  std::string filter = "ramlak";
  double threshold = 0.0;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 5, 8};
  std::vector<double> thresholds = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  std::string family = "line-angle";
  double theta = 0.7;
  std::string points;
  std::size_t random_points = 5;
  std::string image = "points";
  std::size_t levels = 6;
  std::vector<long> base_counts;
  std::vector<double> lo, hi, center, radius;
  std::vector<double> grid_d, grid_star;
  std::vector<long> grid_half;
  std::size_t k = 1;
  std::size_t min_sep = 0;
  std::vector<long> counts;
};

int cmd_phantom(const Options& o) {
  const Size s = parse_size(o.size);
  const auto variant = o.variant == "original" ? PhantomVariant::Original : PhantomVariant::Modified;
  const PixelImage img = shepp_logan(s.width, s.height, variant);
  PgmOptions pgm;
  pgm.comments = {Echo("phantom").add("size", s.text()).add("variant", o.variant).str()};
  save_pgm(img, o.out, pgm);
  return 0;
}

int cmd_radon(const Options& o) {
  const PixelImage img = load_pgm(o.in);
  const auto norm = o.normalization == "slope" ? Normalization::Slope : Normalization::UnitGradient;
  Sinogram s = sinogram_pixel(img, Discretization::sinogram(o.I, o.J, o.gamma_max), norm, o.threads);
  s.metadata.insert(s.metadata.begin(), Echo("radon")
                                            .add("in", o.in)
                                            .add("I", std::to_string(o.I))
                                            .add("J", std::to_string(o.J))
                                            .add("gamma_max", o.gamma_max)
                                            .add("normalization", o.normalization)
                                            .str());
  save_sinogram_csv(s, o.out);
  if (!o.pgm.empty()) save_sinogram_pgm(s, o.pgm);
  return 0;
}

int cmd_noise(const Options& o) {
  Sinogram s = add_noise(load_sinogram_csv(o.in), {o.level, o.seed});
  s.metadata.push_back(
      Echo("noise").add("in", o.in).add("level", o.level).add("seed", std::to_string(o.seed)).str());
  save_sinogram_csv(s, o.out);
  return 0;
}

int cmd_fbp(const Options& o) {
  const Sinogram s = load_sinogram_csv(o.in);
  const Size size = parse_size(o.size);
  const PixelImage img = fbp(s, {filter_from_string(o.filter)}, unit_grid(size), o.threads);
  const Echo echo = Echo("fbp").add("in", o.in).add("filter", o.filter).add("size", size.text())
                        .add("padding", "pow2>=2J").add("interpolation", "linear");
  write_recon_pgm(img, o.out, echo);
  if (!o.raw.empty()) write_raw(img, o.raw, echo);
  return 0;
}

int cmd_hough_invert(const Options& o) {
  const Sinogram s = load_sinogram_csv(o.in);
  const Size size = parse_size(o.size);
  const PixelImage img = hough_invert(s, unit_grid(size), o.threshold, o.threads);
  const Echo echo = Echo("hough-invert").add("in", o.in).add("threshold", o.threshold)
                        .add("size", size.text()).add("rasterization", "supercover");
  write_recon_pgm(img, o.out, echo);
  if (!o.raw.empty()) write_raw(img, o.raw, echo);
  return 0;
}

int cmd_sweep(const Options& o) {
  const Size size = parse_size(o.size);
  const PixelImage truth = o.in.empty() ? shepp_logan(size.width, size.height) : load_pgm(o.in);
  const auto mask = o.in.empty() ? shepp_logan_mask(size.width, size.height)
                                 : std::vector<unsigned char>(truth.values().size(), 1);
  const Sinogram clean =
      sinogram_pixel(truth, Discretization::sinogram(o.I, o.J, o.gamma_max), Normalization::UnitGradient, o.threads);
  SweepOptions options{o.thresholds, o.seeds, o.level, o.threads};
  const auto reports = threshold_sweep(clean, truth, mask, options);
  std::ofstream out(o.out, std::ios::binary);
  if (!out) throw FormatError("cannot open '" + o.out + "' for writing");
  out << "# "
      << Echo("sweep").add("in", o.in.empty() ? "shepp-logan" : o.in).add("size", std::to_string(truth.width()) + "x" +
                                                                                 std::to_string(truth.height()))
             .add("I", std::to_string(o.I)).add("J", std::to_string(o.J)).add("gamma_max", o.gamma_max)
             .add("level", o.level).add("seeds", list(o.seeds)).add("thresholds", reals(o.thresholds))
             .add("rng", kNoiseAlgorithm).add("mask", o.in.empty() ? "skull" : "all")
             .str()
      << '\n';
  out << "method,threshold,seed,error,recon_min,recon_max,constant\n";
  for (const auto& r : reports) {
    out << r.method << ',' << (r.threshold < 0.0 ? "" : real(r.threshold)) << ',' << r.seed << ',' << real(r.error)
        << ',' << real(r.recon_min) << ',' << real(r.recon_max) << ',' << (r.constant ? 1 : 0) << '\n';
  }
  return 0;
}

DiscreteImage points_for(const Options& o) {
  if (!o.points.empty()) return load_points_csv(o.points);
  // Uniform points in [-1, 1]^2 from the seeded generator.
  std::mt19937_64 gen(o.seed);
  std::vector<double> coords;
  for (std::size_t j = 0; j < 2 * o.random_points; ++j)
    coords.push_back(-1.0 + 2.0 * static_cast<double>(gen() >> 11) * 0x1.0p-53);
  return DiscreteImage::unit(2, coords);
}

int cmd_sweep_convergence(const Options& o) {
  const SolvableFamily family = family_for(o.family, o.theta);
  std::vector<double> lo = o.lo, hi = o.hi;
  default_domain(family, lo, hi);
  const std::size_t t = family.t();
  std::vector<double> center = o.center, radius = o.radius;
  if (center.empty()) center = t == 2 ? std::vector<double>{1.3, 0.1} : std::vector<double>{0.1};
  if (radius.empty()) radius = t == 2 ? std::vector<double>{1.0, 1.2} : std::vector<double>{1.2};
  const TestFunction psi = bump(center, radius, Box{lo, hi, {}});
  std::vector<long> base = o.base_counts;
  if (base.empty()) base.assign(t, 64);
  const ConvergenceGrid grid{lo, hi, base, o.levels};
  ConvergenceReport report;
  Echo echo("sweep-convergence");
  echo.add("family", family.name()).add("image", o.image).add("levels", std::to_string(o.levels))
      .add("base_counts", list(base)).add("lo", reals(lo)).add("hi", reals(hi))
      .add("center", reals(center)).add("radius", reals(radius));
  if (o.image == "pixel") {
    const PixelImage img = o.in.empty() ? PixelImage(1, 1, Window{-0.3, 0.2, -0.1, 0.4}, {1.0}) : load_pgm(o.in);
    echo.add("in", o.in.empty() ? "single-pixel" : o.in);
    report = convergence_study(family, img, psi, grid, ConvergenceGate{0.0, 0.0, 0.9}, o.threads);
  } else {
    const DiscreteImage pts = points_for(o);
    echo.add("points", o.points.empty() ? "random" : o.points).add("count", std::to_string(pts.size()))
        .add("seed", std::to_string(o.seed));
    report = convergence_study(family, pts, psi, grid, {}, o.threads);
  }
  std::ofstream out(o.out, std::ios::binary);
  if (!out) throw FormatError("cannot open '" + o.out + "' for writing");
  out << "# " << echo.str() << '\n' << "D,pairing_hough,pairing_radon,abs_error\n";
  for (const auto& r : report.rows)
    out << real(r.D) << ',' << real(r.hough) << ',' << real(r.radon) << ',' << real(r.error) << '\n';
  out << "# slope=" << real(report.slope) << " verdict=" << report.verdict << '\n';
  std::cout << report.verdict << '\n';
  return 0;
}

int cmd_detect(const Options& o) {
  const SolvableFamily family = family_for(o.family, o.theta);
  const std::size_t t = family.t();
  if (o.grid_d.size() != t || o.grid_half.size() != t)
    throw CLI::ValidationError("--grid-d/--grid-half", "need one entry per parameter");
  const std::vector<double> star = o.grid_star.empty() ? std::vector<double>(t, 0.0) : o.grid_star;
  const Discretization disc = Discretization::symmetric(star, o.grid_d, o.grid_half);
  const DiscreteImage pts = load_points_csv(o.points);
  const HoughCounter counter = accumulate_discrete(family, pts, disc, o.threads);
  const auto peaks = detect_peaks(counter, o.k, o.min_sep);
  std::ofstream file;
  if (!o.out.empty()) {
    file.open(o.out, std::ios::binary);
    if (!file) throw FormatError("cannot open '" + o.out + "' for writing");
  }
  std::ostream& out = o.out.empty() ? std::cout : file;
  out << "# "
      << Echo("detect").add("family", family.name()).add("points", o.points).add("grid", disc.describe())
             .add("k", std::to_string(o.k)).add("min_sep", std::to_string(o.min_sep))
             .add("skipped", std::to_string(counter.skipped)).str()
      << '\n';
  out << '#';
  for (std::size_t a = 0; a < t; ++a) out << (a ? "," : " ") << "lambda_" << a + 1;
  out << ",value\n";
  for (const Peak& p : peaks) {
    for (double c : p.center) out << real(c) << ',';
    out << real(p.value) << '\n';
  }
  return 0;
}

int cmd_pair(const Options& o) {
  const SolvableFamily family = family_for(o.family, o.theta);
  std::vector<double> lo = o.lo, hi = o.hi;
  default_domain(family, lo, hi);
  const std::size_t t = family.t();
  if (o.center.size() != t || o.radius.size() != t)
    throw CLI::ValidationError("--center/--radius", "need one entry per parameter");
  const TestFunction psi = bump(o.center, o.radius, Box{lo, hi, {}});
  const DiscreteImage pts = load_points_csv(o.points);
  std::vector<long> counts = o.counts;
  if (counts.empty()) counts.assign(t, 256);
  const Discretization disc = Discretization::tiling(lo, hi, counts);
  const double radon = t == 1 ? pair_radon_discrete_1d(family, pts, psi) : pair_radon_discrete(family, pts, psi);
  const double hough = pair_grid(rescale(accumulate_discrete(family, pts, disc, o.threads)), psi);
  std::ofstream out(o.out, std::ios::binary);
  if (!out) throw FormatError("cannot open '" + o.out + "' for writing");
  out << "# "
      << Echo("pair").add("family", family.name()).add("points", o.points).add("center", reals(o.center))
             .add("radius", reals(o.radius)).add("grid", disc.describe()).str()
      << '\n';
  out << "quantity,value\n";
  out << "pairing_radon," << real(radon) << '\n';
  out << "pairing_hough," << real(hough) << '\n';
  out << "abs_error," << real(std::abs(hough - radon)) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized Radon and Hough transforms"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--threads", o.threads, "worker threads (0 = all cores)")->default_val(1);

  const std::vector<std::string> filters = {"none", "ramlak", "shepplogan", "cosine", "hamming", "hann"};
  const std::vector<std::string> families = {"line-angle", "line-slope", "hyperplane", "weierstrass",
                                             "fixed-direction-line"};
  const auto add_grid = [&](CLI::App* c) {
    c->add_option("--I", o.I, "number of angles")->check(CLI::PositiveNumber);
    c->add_option("--J", o.J, "number of offsets")->check(CLI::Range(2L, 1L << 30));
    c->add_option("--gamma-max", o.gamma_max, "offset range half-width")->check(CLI::PositiveNumber);
  };

  auto* phantom = app.add_subcommand("phantom", "write a Shepp-Logan phantom PGM");
  phantom->add_option("--size", o.size, "WIDTHxHEIGHT");
  phantom->add_option("--variant", o.variant)->check(CLI::IsMember({"modified", "original"}));
  phantom->add_option("-o,--out", o.out)->required();

  auto* radon = app.add_subcommand("radon", "exact sinogram of a PGM image");
  radon->add_option("--in", o.in)->required()->check(CLI::ExistingFile);
  add_grid(radon);
  radon->add_option("--normalization", o.normalization)->check(CLI::IsMember({"unit-gradient", "slope"}));
  radon->add_option("-o,--out", o.out)->required();
  radon->add_option("--pgm", o.pgm, "also write the sinogram as an image");

  auto* noise = app.add_subcommand("noise", "multiplicative Gaussian noise");
  noise->add_option("--in", o.in)->required()->check(CLI::ExistingFile);
  noise->add_option("--level", o.level)->check(CLI::NonNegativeNumber);
  noise->add_option("--seed", o.seed);
  noise->add_option("-o,--out", o.out)->required();

  auto* fbp_cmd = app.add_subcommand("fbp", "filtered back-projection");
  fbp_cmd->add_option("--in", o.in)->required()->check(CLI::ExistingFile);
  fbp_cmd->add_option("--filter", o.filter)->check(CLI::IsMember(filters));
  fbp_cmd->add_option("--size", o.size, "WIDTHxHEIGHT");
  fbp_cmd->add_option("-o,--out", o.out)->required();
  fbp_cmd->add_option("--raw", o.raw, "also write raw pixel values as CSV");

  auto* hough = app.add_subcommand("hough-invert", "Hough-threshold inversion");
  hough->add_option("--in", o.in)->required()->check(CLI::ExistingFile);
  hough->add_option("--threshold", o.threshold)->check(CLI::Range(0.0, 1.0));
  hough->add_option("--size", o.size, "WIDTHxHEIGHT");
  hough->add_option("-o,--out", o.out)->required();
  hough->add_option("--raw", o.raw, "also write raw pixel values as CSV");

  auto* sweep = app.add_subcommand("sweep", "error table over seeds and thresholds");
  sweep->add_option("--in", o.in, "ground-truth PGM (default: Shepp-Logan)")->check(CLI::ExistingFile);
  sweep->add_option("--size", o.size, "WIDTHxHEIGHT");
  add_grid(sweep);
  sweep->add_option("--level", o.level)->check(CLI::NonNegativeNumber);
  sweep->add_option("--seeds", o.seeds)->delimiter(',');
  sweep->add_option("--thresholds", o.thresholds)->delimiter(',')->check(CLI::Range(0.0, 1.0));
  sweep->add_option("-o,--out", o.out)->required();

  auto* conv = app.add_subcommand("sweep-convergence", "Hough vs Radon pairing over halving grids");
  conv->add_option("--family", o.family)->check(CLI::IsMember(families));
  conv->add_option("--theta", o.theta, "direction for fixed-direction-line");
  conv->add_option("--image", o.image)->check(CLI::IsMember({"points", "pixel"}));
  conv->add_option("--points", o.points)->check(CLI::ExistingFile);
  conv->add_option("--random", o.random_points, "random point count when no --points");
  conv->add_option("--seed", o.seed);
  conv->add_option("--in", o.in, "PGM image for --image pixel")->check(CLI::ExistingFile);
  conv->add_option("--levels", o.levels)->check(CLI::Range(4, 12));
  conv->add_option("--base-counts", o.base_counts)->delimiter(',');
  conv->add_option("--lo", o.lo)->delimiter(',');
  conv->add_option("--hi", o.hi)->delimiter(',');
  conv->add_option("--center", o.center)->delimiter(',');
  conv->add_option("--radius", o.radius)->delimiter(',');
  conv->add_option("-o,--out", o.out)->required();

  auto* detect = app.add_subcommand("detect", "top-k Hough peaks of a point set");
  detect->add_option("--points", o.points)->required()->check(CLI::ExistingFile);
  detect->add_option("--family", o.family)->check(CLI::IsMember(families));
  detect->add_option("--theta", o.theta);
  detect->add_option("--grid-d", o.grid_d)->delimiter(',')->required();
  detect->add_option("--grid-half", o.grid_half)->delimiter(',')->required();
  detect->add_option("--grid-star", o.grid_star)->delimiter(',');
  detect->add_option("--k", o.k)->check(CLI::PositiveNumber);
  detect->add_option("--min-sep", o.min_sep);
  detect->add_option("-o,--out", o.out, "peak list (stdout when omitted)");

  auto* pair = app.add_subcommand("pair", "Radon and rescaled Hough pairings with a bump");
  pair->add_option("--family", o.family)->check(CLI::IsMember(families));
  pair->add_option("--theta", o.theta);
  pair->add_option("--points", o.points)->required()->check(CLI::ExistingFile);
  pair->add_option("--center", o.center)->delimiter(',')->required();
  pair->add_option("--radius", o.radius)->delimiter(',')->required();
  pair->add_option("--counts", o.counts)->delimiter(',');
  pair->add_option("--lo", o.lo)->delimiter(',');
  pair->add_option("--hi", o.hi)->delimiter(',');
  pair->add_option("-o,--out", o.out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*phantom) return cmd_phantom(o);
    if (*radon) return cmd_radon(o);
    if (*noise) return cmd_noise(o);
    if (*fbp_cmd) return cmd_fbp(o);
    if (*hough) return cmd_hough_invert(o);
    if (*sweep) return cmd_sweep(o);
    if (*conv) return cmd_sweep_convergence(o);
    if (*detect) return cmd_detect(o);
    if (*pair) return cmd_pair(o);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
