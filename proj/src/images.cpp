#include "radhough/images.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "radhough/error.hpp"
#include "text.hpp"

namespace radhough {

Window unit_window(std::size_t width, std::size_t height) {
  if (width == 0 || height == 0) throw DomainError("image dimensions must be positive");
  const double w = static_cast<double>(width);
  const double h = static_cast<double>(height);
  const double sx = width >= height ? 1.0 : w / h;
  const double sy = height >= width ? 1.0 : h / w;
  return {-sx, sx, -sy, sy};
}

PixelImage::PixelImage(std::size_t width, std::size_t height, Window window,
                       std::vector<double> values)
    : width_(width), height_(height), window_(window), values_(std::move(values)) {
  if (width_ == 0 || height_ == 0) throw DomainError("image dimensions must be positive");
  if (values_.size() != width_ * height_) throw DomainError("pixel count does not match size");
  const double px = (window_.x_max - window_.x_min) / static_cast<double>(width_);
  const double py = (window_.y_max - window_.y_min) / static_cast<double>(height_);
  if (!(px > 0.0) || !(py > 0.0)) throw DomainError("image window is empty");
  if (std::abs(px - py) > 1e-12 * std::max(px, py)) throw DomainError("pixels must be square");
  half_side_ = 0.5 * px;
  for (double v : values_)
    if (!std::isfinite(v)) throw DomainError("pixel values must be finite");
}

PixelImage::PixelImage(std::size_t width, std::size_t height)
    : PixelImage(width, height, unit_window(width, height)) {}

PixelImage::PixelImage(std::size_t width, std::size_t height, Window window)
    : PixelImage(width, height, window, std::vector<double>(width * height, 0.0)) {}

double PixelImage::center_x(std::size_t col) const {
  return window_.x_min + (2.0 * static_cast<double>(col) + 1.0) * half_side_;
}

double PixelImage::center_y(std::size_t row) const {
  return window_.y_max - (2.0 * static_cast<double>(row) + 1.0) * half_side_;
}

std::pair<long, long> PixelImage::locate(double x1, double x2) const {
  const double side = 2.0 * half_side_;
  return {static_cast<long>(std::floor((x1 - window_.x_min) / side)),
          static_cast<long>(std::floor((window_.y_max - x2) / side))};
}

double PixelImage::value_at(double x1, double x2) const {
  const auto [col, row] = locate(x1, x2);
  if (col < 0 || row < 0 || col >= static_cast<long>(width_) || row >= static_cast<long>(height_))
    return 0.0;
  return at(static_cast<std::size_t>(row), static_cast<std::size_t>(col));
}

double PixelImage::mass() const {
  double sum = 0.0;
  for (double v : values_) sum += v;
  return sum * pixel_area();
}

DiscreteImage::DiscreteImage(std::size_t dim, std::vector<double> coords,
                             std::vector<double> weights)
    : dim_(dim), coords_(std::move(coords)), weights_(std::move(weights)) {
  if (dim_ == 0) throw DomainError("point dimension must be positive");
  if (weights_.empty()) throw DomainError("discrete image needs at least one point");
  if (coords_.size() != dim_ * weights_.size())
    throw DomainError("coordinate count does not match weights");
  for (double v : coords_)
    if (!std::isfinite(v)) throw DomainError("point coordinates must be finite");
  for (double v : weights_)
    if (!std::isfinite(v)) throw DomainError("point weights must be finite");
}

DiscreteImage DiscreteImage::unit(std::size_t dim, std::vector<double> coords) {
  const std::size_t count = dim == 0 ? 0 : coords.size() / dim;
  return DiscreteImage(dim, std::move(coords), std::vector<double>(count, 1.0));
}

DiscreteImage DiscreteImage::scaled(double factor) const {
  auto w = weights_;
  for (double& v : w) v *= factor;
  return DiscreteImage(dim_, coords_, std::move(w));
}

bool Ellipse::contains(double x1, double x2) const {
  const double phi = angle_deg * M_PI / 180.0;
  const double dx = x1 - center_x;
  const double dy = x2 - center_y;
  const double u = dx * std::cos(phi) + dy * std::sin(phi);
  const double v = -dx * std::sin(phi) + dy * std::cos(phi);
  return (u * u) / (semi_x * semi_x) + (v * v) / (semi_y * semi_y) <= 1.0;
}

std::vector<Ellipse> shepp_logan_ellipses(PhantomVariant variant) {
  // Geometry of the 1974 head phantom: semi-axes, centre, rotation.
  std::vector<Ellipse> e = {
      {0.0, 0.69, 0.92, 0.0, 0.0, 0.0},        {0.0, 0.6624, 0.874, 0.0, -0.0184, 0.0},
      {0.0, 0.11, 0.31, 0.22, 0.0, -18.0},     {0.0, 0.16, 0.41, -0.22, 0.0, 18.0},
      {0.0, 0.21, 0.25, 0.0, 0.35, 0.0},       {0.0, 0.046, 0.046, 0.0, 0.1, 0.0},
      {0.0, 0.046, 0.046, 0.0, -0.1, 0.0},     {0.0, 0.046, 0.023, -0.08, -0.605, 0.0},
      {0.0, 0.023, 0.023, 0.0, -0.606, 0.0},   {0.0, 0.023, 0.046, 0.06, -0.605, 0.0},
  };
  const double modified[] = {1.0, -0.8, -0.2, -0.2, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1};
  const double original[] = {2.0, -0.98, -0.02, -0.02, 0.01, 0.01, 0.01, 0.01, 0.01, 0.01};
  const double* intensity = variant == PhantomVariant::Modified ? modified : original;
  for (std::size_t i = 0; i < e.size(); ++i) e[i].intensity = intensity[i];
  return e;
}

PixelImage shepp_logan(std::size_t width, std::size_t height, PhantomVariant variant) {
  if (width == 0 || height == 0) throw DomainError("phantom dimensions must be positive");
  PixelImage img(width, height);
  const auto ellipses = shepp_logan_ellipses(variant);
  for (std::size_t r = 0; r < height; ++r) {
    const double y = img.center_y(r);
    for (std::size_t c = 0; c < width; ++c) {
      const double x = img.center_x(c);
      double v = 0.0;
      for (const auto& e : ellipses)
        if (e.contains(x, y)) v += e.intensity;
      img.at(r, c) = std::clamp(v, 0.0, 1.0);
    }
  }
  return img;
}

std::vector<unsigned char> shepp_logan_mask(std::size_t width, std::size_t height) {
  const PixelImage layout(width, height);
  const Ellipse outer = shepp_logan_ellipses().front();
  std::vector<unsigned char> mask(width * height, 0);
  for (std::size_t r = 0; r < height; ++r)
    for (std::size_t c = 0; c < width; ++c)
      mask[r * width + c] = outer.contains(layout.center_x(c), layout.center_y(r)) ? 1 : 0;
  return mask;
}

PixelImage disc_image(std::size_t width, std::size_t height, double radius, double value) {
  PixelImage img(width, height);
  for (std::size_t r = 0; r < height; ++r)
    for (std::size_t c = 0; c < width; ++c) {
      const double x = img.center_x(c);
      const double y = img.center_y(r);
      if (x * x + y * y <= radius * radius) img.at(r, c) = value;
    }
  return img;
}

void save_pgm(const PixelImage& image, const std::filesystem::path& path,
              const PgmOptions& options) {
  if (options.maxval == 0 || options.maxval > 65535) throw DomainError("PGM maxval must be 1..65535");
  if (!(options.hi > options.lo)) throw DomainError("PGM value range is empty");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open '" + path.string() + "' for writing");
  out << (options.binary ? "P5\n" : "P2\n");
  for (const auto& c : options.comments) out << "# " << c << '\n';
  out << image.width() << ' ' << image.height() << '\n' << options.maxval << '\n';
  const double scale = static_cast<double>(options.maxval) / (options.hi - options.lo);
  const auto quantize = [&](double v) {
    const double q = std::round((v - options.lo) * scale);
    return static_cast<unsigned>(std::clamp(q, 0.0, static_cast<double>(options.maxval)));
  };
  const auto values = image.values();
  if (options.binary) {
    std::string bytes;
    bytes.reserve(values.size() * (options.maxval > 255 ? 2 : 1));
    for (double v : values) {
      const unsigned q = quantize(v);
      if (options.maxval > 255) bytes.push_back(static_cast<char>(q >> 8));
      bytes.push_back(static_cast<char>(q & 0xff));
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  } else {
    for (std::size_t r = 0; r < image.height(); ++r) {
      for (std::size_t c = 0; c < image.width(); ++c) {
        if (c) out << ' ';
        out << quantize(image.at(r, c));
      }
      out << '\n';
    }
  }
  if (!out) throw FormatError("failed writing '" + path.string() + "'");
}

namespace {

// Next whitespace-separated header token, skipping comments.
std::string header_token(std::istream& in) {
  std::string token;
  while (token.empty()) {
    const int c = in.get();
    if (c == EOF) throw FormatError("truncated PGM header");
    if (c == '#') {
      std::string comment;
      std::getline(in, comment);
    } else if (!std::isspace(c)) {
      token.push_back(static_cast<char>(c));
      while (in.peek() != EOF && !std::isspace(in.peek()) && in.peek() != '#')
        token.push_back(static_cast<char>(in.get()));
    }
  }
  return token;
}

long header_number(std::istream& in) {
  const auto token = header_token(in);
  try {
    return detail::parse_long(token);
  } catch (const FormatError&) {
    throw FormatError("malformed PGM header field '" + token + "'");
  }
}

}  // namespace

PixelImage load_pgm(const std::filesystem::path& path) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw FormatError("cannot open '" + path.string() + "'");
  header_token(probe);
  const long w = header_number(probe);
  const long h = header_number(probe);
  if (w <= 0 || h <= 0) throw FormatError("PGM dimensions must be positive");
  return load_pgm(path, unit_window(static_cast<std::size_t>(w), static_cast<std::size_t>(h)));
}

PixelImage load_pgm(const std::filesystem::path& path, Window window) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  const std::string magic = header_token(in);
  if (magic != "P2" && magic != "P5") throw FormatError("not a PGM file (magic '" + magic + "')");
  const long w = header_number(in);
  const long h = header_number(in);
  const long maxval = header_number(in);
  if (w <= 0 || h <= 0) throw FormatError("PGM dimensions must be positive");
  if (maxval <= 0 || maxval > 65535) throw FormatError("PGM maxval must be 1..65535");
  const std::size_t count = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  std::vector<double> values(count);
  const double inv = 1.0 / static_cast<double>(maxval);
  if (magic == "P5") {
    in.get();  // single whitespace after maxval
    const std::size_t bytes_per = maxval > 255 ? 2 : 1;
    std::string raw(count * bytes_per, '\0');
    in.read(raw.data(), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(in.gcount()) != raw.size())
      throw FormatError("PGM raster shorter than width*height");
    for (std::size_t i = 0; i < count; ++i) {
      unsigned q = static_cast<unsigned char>(raw[i * bytes_per]);
      if (bytes_per == 2) q = (q << 8) | static_cast<unsigned char>(raw[i * 2 + 1]);
      if (q > static_cast<unsigned>(maxval)) throw FormatError("PGM sample exceeds maxval");
      values[i] = q * inv;
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      long q = 0;
      if (!(in >> q)) throw FormatError("PGM raster shorter than width*height");
      if (q < 0 || q > maxval) throw FormatError("PGM sample exceeds maxval");
      values[i] = static_cast<double>(q) * inv;
    }
  }
  return PixelImage(static_cast<std::size_t>(w), static_cast<std::size_t>(h), window,
                    std::move(values));
}

PixelImage rasterize_points(const DiscreteImage& points, std::size_t width, std::size_t height,
                            Window window) {
  if (points.dim() != 2) throw DomainError("rasterize_points needs planar points");
  PixelImage img(width, height, window);
  for (std::size_t j = 0; j < points.size(); ++j) {
    const auto p = points.point(j);
    const auto [col, row] = img.locate(p[0], p[1]);
    if (col < 0 || row < 0 || col >= static_cast<long>(width) || row >= static_cast<long>(height))
      continue;
    img.at(static_cast<std::size_t>(row), static_cast<std::size_t>(col)) += points.weight(j);
  }
  return img;
}

DiscreteImage load_points_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  std::vector<double> coords, weights;
  std::string line;
  while (std::getline(in, line)) {
    const auto body = detail::trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto fields = detail::parse_reals(body);
    if (fields.size() != 2 && fields.size() != 3)
      throw FormatError("point rows must be x1,x2[,weight]");
    coords.push_back(fields[0]);
    coords.push_back(fields[1]);
    weights.push_back(fields.size() == 3 ? fields[2] : 1.0);
  }
  return DiscreteImage(2, std::move(coords), std::move(weights));
}

void save_points_csv(const DiscreteImage& points, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open '" + path.string() + "' for writing");
  for (std::size_t j = 0; j < points.size(); ++j) {
    const auto p = points.point(j);
    for (double v : p) out << detail::format_real(v) << ',';
    out << detail::format_real(points.weight(j)) << '\n';
  }
}

}  // namespace radhough
