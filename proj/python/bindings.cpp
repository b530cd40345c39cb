// Python bindings for the core operations: 1D Wasserstein-2, SWD/HSWD and
// their gradients, target sampling, binarization, Hamming ranking, and the
// coding-balance diagnostics.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <stdexcept>

#include "hswd/distances.hpp"
#include "hswd/matrix.hpp"
#include "hswd/retrieval.hpp"
#include "hswd/rng.hpp"

namespace py = pybind11;

namespace {

using hswd::RealMatrix;

RealMatrix matrix_from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
  if (arr.ndim() != 2) throw std::invalid_argument("expected a 2D array");
  const auto rows = static_cast<std::size_t>(arr.shape(0));
  const auto cols = static_cast<std::size_t>(arr.shape(1));
  std::vector<double> data(arr.data(), arr.data() + rows * cols);
  return RealMatrix(rows, cols, std::move(data));
}

py::array_t<double> array_from_matrix(const RealMatrix& m) {
  py::array_t<double> arr({m.rows(), m.cols()});
  std::copy(m.data(), m.data() + m.size(), arr.mutable_data());
  return arr;
}

std::vector<double> vector_from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
  if (arr.ndim() != 1) throw std::invalid_argument("expected a 1D array");
  return {arr.data(), arr.data() + arr.shape(0)};
}

hswd::SliceSet slices_from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
  hswd::SliceSet slices{matrix_from_array(arr)};
  for (std::size_t l = 0; l < slices.count(); ++l) {
    double norm_sq = 0.0;
    for (double v : slices.directions.row(l)) norm_sq += v * v;
    if (std::abs(std::sqrt(norm_sq) - 1.0) > 1e-12) {
      throw std::invalid_argument("slice rows must have unit Euclidean norm");
    }
  }
  return slices;
}

std::vector<std::vector<std::uint8_t>> relevance_from_lists(
    const std::vector<std::vector<int>>& relevance) {
  std::vector<std::vector<std::uint8_t>> out(relevance.size());
  for (std::size_t q = 0; q < relevance.size(); ++q) {
    out[q].assign(relevance[q].begin(), relevance[q].end());
  }
  return out;
}

hswd::RankedList ranked_from_lists(const std::vector<std::vector<std::uint32_t>>& order) {
  hswd::RankedList ranked;
  ranked.order = order;
  return ranked;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Distributional-matching quantization for learned binary hashing";

  py::class_<hswd::Rng>(m, "Rng", "Deterministic splitmix64 generator")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def("uniform", &hswd::Rng::uniform)
      .def("gaussian", &hswd::Rng::gaussian);

  m.def(
      "sample_binary_target",
      [](std::size_t n, std::size_t mm, hswd::Rng& rng) {
        return array_from_matrix(hswd::sample_binary_target(n, mm, rng));
      },
      py::arg("n"), py::arg("m"), py::arg("rng"),
      "n x m batch of independent equiprobable +-1 entries");

  m.def(
      "sample_slices",
      [](std::size_t count, std::size_t mm, hswd::Rng& rng) {
        return array_from_matrix(hswd::sample_slices(count, mm, rng).directions);
      },
      py::arg("count"), py::arg("m"), py::arg("rng"),
      "count x m matrix of uniform unit-sphere directions");

  m.def(
      "wasserstein1d_sq",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a,
         const py::array_t<double, py::array::c_style | py::array::forcecast>& b) {
        const auto va = vector_from_array(a);
        const auto vb = vector_from_array(b);
        return hswd::wasserstein1d_sq(va, vb);
      },
      py::arg("a"), py::arg("b"), "Squared empirical W2 between two 1D samples of equal size");

  m.def(
      "wasserstein1d_grad",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a,
         const py::array_t<double, py::array::c_style | py::array::forcecast>& b) {
        const auto va = vector_from_array(a);
        const auto vb = vector_from_array(b);
        const auto g = hswd::wasserstein1d_grad(va, vb);
        py::array_t<double> arr(g.size());
        std::copy(g.begin(), g.end(), arr.mutable_data());
        return arr;
      },
      py::arg("a"), py::arg("b"));

  m.def(
      "swd",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& z,
         const py::array_t<double, py::array::c_style | py::array::forcecast>& b,
         const py::array_t<double, py::array::c_style | py::array::forcecast>& slices) {
        return hswd::swd(matrix_from_array(z), matrix_from_array(b), slices_from_array(slices));
      },
      py::arg("z"), py::arg("b"), py::arg("slices"));

  m.def(
      "swd_grad",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& z,
         const py::array_t<double, py::array::c_style | py::array::forcecast>& b,
         const py::array_t<double, py::array::c_style | py::array::forcecast>& slices) {
        return array_from_matrix(
            hswd::swd_grad(matrix_from_array(z), matrix_from_array(b), slices_from_array(slices)));
      },
      py::arg("z"), py::arg("b"), py::arg("slices"));

  m.def(
      "hswd",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& z,
         const py::array_t<double, py::array::c_style | py::array::forcecast>& b) {
        return hswd::hswd(matrix_from_array(z), matrix_from_array(b));
      },
      py::arg("z"), py::arg("b"), "Coordinate-axis sliced Wasserstein distance");

  m.def(
      "hswd_grad",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& z,
         const py::array_t<double, py::array::c_style | py::array::forcecast>& b) {
        return array_from_matrix(hswd::hswd_grad(matrix_from_array(z), matrix_from_array(b)));
      },
      py::arg("z"), py::arg("b"));

  py::class_<hswd::PackedCodeSet>(m, "PackedCodeSet", "Bit-packed binary codes")
      .def_readonly("n", &hswd::PackedCodeSet::n)
      .def_readonly("m", &hswd::PackedCodeSet::m)
      .def("bit", &hswd::PackedCodeSet::bit, py::arg("i"), py::arg("k"));

  m.def(
      "binarize",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& z) {
        return hswd::binarize(matrix_from_array(z));
      },
      py::arg("z"), "Sign-binarize continuous codes (sign(0) := +1) into packed words");

  m.def("hamming", &hswd::hamming, py::arg("a"), py::arg("i"), py::arg("b"), py::arg("j"));

  m.def(
      "rank_all",
      [](const hswd::PackedCodeSet& queries, const hswd::PackedCodeSet& db) {
        return hswd::rank_all(queries, db).order;
      },
      py::arg("queries"), py::arg("db"),
      "Per query: db indices sorted by (Hamming distance, index)");

  m.def(
      "mean_average_precision",
      [](const std::vector<std::vector<std::uint32_t>>& ranked,
         const std::vector<std::vector<int>>& relevance, std::optional<std::size_t> cutoff) {
        return hswd::mean_average_precision(ranked_from_lists(ranked),
                                            relevance_from_lists(relevance), cutoff);
      },
      py::arg("ranked"), py::arg("relevance"), py::arg("cutoff") = std::nullopt);

  m.def(
      "precision_at_r",
      [](const std::vector<std::vector<std::uint32_t>>& ranked,
         const std::vector<std::vector<int>>& relevance, std::size_t r) {
        return hswd::precision_at_r(ranked_from_lists(ranked), relevance_from_lists(relevance), r);
      },
      py::arg("ranked"), py::arg("relevance"), py::arg("r"));

  m.def("bit_entropy", &hswd::bit_entropy, py::arg("codes"));
  m.def("bit_correlation", &hswd::bit_correlation, py::arg("codes"));

  m.def(
      "quantization_angle",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& z) {
        const auto result = hswd::quantization_angle(matrix_from_array(z));
        return py::make_tuple(result.radians, result.zero_row);
      },
      py::arg("z"), "Mean angle between rows and their sign vectors; returns (radians, zero_row)");

  m.def("save_codes", &hswd::save_codes, py::arg("codes"), py::arg("path"));
  m.def("load_codes", &hswd::load_codes, py::arg("path"));
}
