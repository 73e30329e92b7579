#include "radhough/sinogram.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "radhough/error.hpp"
#include "radhough/images.hpp"
#include "text.hpp"

namespace radhough {

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::RadonExact: return "radon-exact";
    case Provenance::RadonNumeric: return "radon-numeric";
    case Provenance::HoughRescaled: return "hough-rescaled";
    case Provenance::Noisy: return "noisy";
  }
  return "unknown";
}

Provenance provenance_from_string(const std::string& text) {
  if (text == "radon-exact") return Provenance::RadonExact;
  if (text == "radon-numeric") return Provenance::RadonNumeric;
  if (text == "hough-rescaled") return Provenance::HoughRescaled;
  if (text == "noisy") return Provenance::Noisy;
  throw FormatError("unknown provenance tag '" + text + "'");
}

Sinogram::Sinogram(Discretization grid, Provenance prov)
    : disc(std::move(grid)), values(disc.size(), 0.0), provenance(prov) {}

Sinogram::Sinogram(Discretization grid, std::vector<double> data, Provenance prov)
    : disc(std::move(grid)), values(std::move(data)), provenance(prov) {
  if (values.size() != disc.size()) throw DomainError("sinogram size does not match its grid");
  for (double v : values)
    if (!std::isfinite(v)) throw DomainError("sinogram values must be finite");
}

void save_sinogram_csv(const Sinogram& s, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open '" + path.string() + "' for writing");
  out << "# " << s.disc.describe() << " provenance=" << to_string(s.provenance) << '\n';
  for (const auto& line : s.metadata) out << "# " << line << '\n';
  std::string row;
  for (std::size_t i = 0; i < s.profiles(); ++i) {
    row.clear();
    const auto p = s.profile(i);
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (j) row += ',';
      row += detail::format_real(p[j]);
    }
    row += '\n';
    out << row;
  }
  if (!out) throw FormatError("failed writing '" + path.string() + "'");
}

Sinogram load_sinogram_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0)
    throw FormatError("sinogram CSV must start with a '# t=...' grid header");
  const Discretization disc = Discretization::parse(line.substr(2));
  const auto tag = line.find("provenance=");
  Provenance prov = Provenance::RadonExact;
  if (tag != std::string::npos) {
    const auto end = line.find(' ', tag);
    prov = provenance_from_string(line.substr(tag + 11, end == std::string::npos ? end : end - tag - 11));
  }
  std::vector<std::string> metadata;
  std::vector<double> values;
  values.reserve(disc.size());
  const std::size_t width = disc.extent(disc.t() - 1);
  while (std::getline(in, line)) {
    const auto body = detail::trim(line);
    if (body.empty()) continue;
    if (body.front() == '#') {
      metadata.emplace_back(detail::trim(body.substr(1)));
      continue;
    }
    const auto row = detail::parse_reals(body);
    if (row.size() != width) throw FormatError("sinogram row length does not match the grid");
    values.insert(values.end(), row.begin(), row.end());
  }
  if (values.size() != disc.size()) throw FormatError("sinogram row count does not match the grid");
  Sinogram s(disc, std::move(values), prov);
  s.metadata = std::move(metadata);
  return s;
}

void save_sinogram_pgm(const Sinogram& s, const std::filesystem::path& path) {
  if (s.disc.t() != 2) throw ContractViolation("sinogram PGM export needs a plane grid");
  const std::size_t cols = s.disc.extent(0);
  const std::size_t rows = s.disc.extent(1);
  const auto [lo, hi] = std::minmax_element(s.values.begin(), s.values.end());
  const double span = *hi > *lo ? *hi - *lo : 1.0;
  std::vector<double> pixels(cols * rows);
  for (std::size_t i = 0; i < cols; ++i)
    for (std::size_t j = 0; j < rows; ++j)
      pixels[(rows - 1 - j) * cols + i] = (s.at(i, j) - *lo) / span;
  // The picture window is nominal; only the raster matters here.
  const PixelImage picture(cols, rows, unit_window(cols, rows), std::move(pixels));
  PgmOptions options;
  options.comments.push_back(s.disc.describe() + " provenance=" + to_string(s.provenance));
  save_pgm(picture, path, options);
}

}  // namespace radhough
