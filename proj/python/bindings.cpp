#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "radhough/error.hpp"
#include "radhough/families.hpp"
#include "radhough/grid.hpp"
#include "radhough/hough.hpp"
#include "radhough/images.hpp"
#include "radhough/inversion.hpp"
#include "radhough/radon.hpp"
#include "radhough/sinogram.hpp"
#include "radhough/version.hpp"

namespace py = pybind11;
using namespace radhough;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

PixelImage to_image(const Array& a) {
  if (a.ndim() != 2) throw py::value_error("image must be a 2-D array");
  const auto h = static_cast<std::size_t>(a.shape(0)), w = static_cast<std::size_t>(a.shape(1));
  std::vector<double> v(a.data(), a.data() + a.size());
  return PixelImage(w, h, unit_window(w, h), std::move(v));
}

Array to_array(std::span<const double> v, std::size_t rows, std::size_t cols) {
  Array out({rows, cols});
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

Array to_array(const PixelImage& img) { return to_array(img.values(), img.height(), img.width()); }

std::vector<unsigned char> to_mask(const py::array_t<bool, py::array::c_style | py::array::forcecast>& m,
                                   const PixelImage& truth) {
  if (static_cast<std::size_t>(m.size()) != truth.values().size())
    throw py::value_error("mask shape does not match the image");
  return {m.data(), m.data() + m.size()};
}

ImageGrid square(std::size_t size) { return {size, size, unit_window(size, size)}; }

DiscreteImage to_points(const Array& pts, std::optional<Array> weights) {
  if (pts.ndim() != 2) throw py::value_error("points must be an (N, n) array");
  std::vector<double> c(pts.data(), pts.data() + pts.size());
  const auto dim = static_cast<std::size_t>(pts.shape(1));
  if (!weights) return DiscreteImage::unit(dim, std::move(c));
  std::vector<double> w(weights->data(), weights->data() + weights->size());
  return DiscreteImage(dim, std::move(c), std::move(w));
}

SolvableFamily family(const std::string& name, std::optional<double> theta) {
  if (name == "fixed-direction-line") {
    if (!theta) throw py::value_error("fixed-direction-line needs theta");
    return fixed_direction_line(*theta);
  }
  return family_by_name(name);
}

}  // namespace

PYBIND11_MODULE(_radhough, m) {
  m.doc() = "Radon and Hough transforms on a shared parameter grid";
  m.attr("__version__") = kVersion;

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_RuntimeError);
  py::register_exception<SingularInputError>(m, "SingularInputError", PyExc_ValueError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

  py::class_<Discretization>(m, "Discretization")
      .def(py::init<std::vector<double>, std::vector<double>, std::vector<long>, std::vector<long>>(),
           py::arg("lambda_star"), py::arg("d"), py::arg("n_lo"), py::arg("n_hi"))
      .def_static("sinogram", &Discretization::sinogram, py::arg("angles"), py::arg("offsets"),
                  py::arg("gamma_max") = std::sqrt(2.0))
      .def_static("symmetric", &Discretization::symmetric, py::arg("lambda_star"), py::arg("d"),
                  py::arg("half"))
      .def_property_readonly("t", &Discretization::t)
      .def_property_readonly("d", &Discretization::d)
      .def_property_readonly("shape",
                             [](const Discretization& g) {
                               std::vector<std::size_t> s;
                               for (std::size_t k = 0; k < g.t(); ++k) s.push_back(g.extent(k));
                               return s;
                             })
      .def("centers",
           [](const Discretization& g, std::size_t axis) {
             std::vector<double> c;
             for (long n = g.n_lo().at(axis); n <= g.n_hi().at(axis); ++n) c.push_back(g.center_component(axis, n));
             return c;
           },
           py::arg("axis"))
      .def("__repr__", &Discretization::describe);

  py::class_<Sinogram>(m, "Sinogram")
      .def(py::init([](const Discretization& g, const Array& values) {
             if (static_cast<std::size_t>(values.size()) != g.size())
               throw py::value_error("values do not match the grid size");
             return Sinogram(g, std::vector<double>(values.data(), values.data() + values.size()),
                             Provenance::RadonExact);
           }),
           py::arg("grid"), py::arg("values"))
      .def_readonly("grid", &Sinogram::disc)
      .def_property_readonly("values",
                             [](const Sinogram& s) { return to_array(s.values, s.profiles(), s.profile_length()); })
      .def_property_readonly("provenance", [](const Sinogram& s) { return to_string(s.provenance); })
      .def_readonly("metadata", &Sinogram::metadata)
      .def("save", [](const Sinogram& s, const std::string& path) { save_sinogram_csv(s, path); })
      .def_static("load", [](const std::string& path) { return load_sinogram_csv(path); });

  m.def("shepp_logan", [](std::size_t size) { return to_array(shepp_logan(size, size)); }, py::arg("size") = 256,
        "Modified Shepp-Logan phantom on [-1, 1]^2.");
  m.def("shepp_logan_mask",
        [](std::size_t size) {
          const auto mask = shepp_logan_mask(size, size);
          py::array_t<bool> out({size, size});
          std::copy(mask.begin(), mask.end(), out.mutable_data());
          return out;
        },
        py::arg("size") = 256);
  m.def("radon_square", &radon_square_angle, py::arg("a"), py::arg("center"), py::arg("theta"), py::arg("gamma"),
        "Radon transform of the indicator of a square of half-side a.");
  m.def("radon",
        [](const Array& image, const Discretization& grid, unsigned threads) {
          return sinogram_pixel(to_image(image), grid, Normalization::UnitGradient, threads);
        },
        py::arg("image"), py::arg("grid"), py::arg("threads") = 1,
        "Exact sinogram of a pixel image over its unit window.");
  m.def("add_noise", [](const Sinogram& s, double level, std::uint64_t seed) { return add_noise(s, {level, seed}); },
        py::arg("sinogram"), py::arg("level") = 1.0, py::arg("seed") = 1);
  m.def("backproject", [](const Sinogram& s, std::size_t size, unsigned threads) {
          return to_array(backproject(s, square(size), threads));
        },
        py::arg("sinogram"), py::arg("size") = 256, py::arg("threads") = 1);
  m.def("fbp",
        [](const Sinogram& s, const std::string& filter, std::size_t size, unsigned threads) {
          return to_array(fbp(s, {filter_from_string(filter)}, square(size), threads));
        },
        py::arg("sinogram"), py::arg("filter") = "ramlak", py::arg("size") = 256, py::arg("threads") = 1);
  m.def("hough_invert",
        [](const Sinogram& s, double threshold, std::size_t size, unsigned threads) {
          return to_array(hough_invert(s, square(size), threshold, threads));
        },
        py::arg("sinogram"), py::arg("threshold"), py::arg("size") = 256, py::arg("threads") = 1);
  m.def("evaluate",
        [](const Array& recon, const Array& truth, const py::array_t<bool, py::array::c_style | py::array::forcecast>& mask) {
          const PixelImage t = to_image(truth);
          const ErrorReport r = evaluate(to_image(recon), t, to_mask(mask, t));
          return py::dict(py::arg("error") = r.error, py::arg("recon_min") = r.recon_min,
                          py::arg("recon_max") = r.recon_max, py::arg("constant") = r.constant);
        },
        py::arg("recon"), py::arg("truth"), py::arg("mask"));

  m.def("hough_counter",
        [](const Array& points, const Discretization& grid, const std::string& name, std::optional<double> theta,
           std::optional<Array> weights, unsigned threads) {
          const HoughCounter h = accumulate_discrete(family(name, theta), to_points(points, weights), grid, threads);
          return to_array(h.values, h.columns(), h.column_length());
        },
        py::arg("points"), py::arg("grid"), py::arg("family") = "line-angle", py::arg("theta") = py::none(),
        py::arg("weights") = py::none(), py::arg("threads") = 1,
        "Weighted Hough counter of a point set, one row per lambda' column.");
  m.def("detect_peaks",
        [](const Array& points, const Discretization& grid, const std::string& name, std::size_t k,
           std::size_t min_separation, std::optional<double> theta) {
          const HoughCounter h = accumulate_discrete(family(name, theta), to_points(points, std::nullopt), grid);
          py::list out;
          for (const Peak& p : detect_peaks(h, k, min_separation)) out.append(py::make_tuple(p.center, p.value));
          return out;
        },
        py::arg("points"), py::arg("grid"), py::arg("family") = "line-angle", py::arg("k") = 1,
        py::arg("min_separation") = 0, py::arg("theta") = py::none(),
        "Top-k (centre, value) pairs of the Hough counter.");
}
