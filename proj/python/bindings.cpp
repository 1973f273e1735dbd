#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "cstomo/analysis.hpp"
#include "cstomo/dfe.hpp"
#include "cstomo/io.hpp"
#include "cstomo/model_selection.hpp"
#include "cstomo/solver.hpp"

namespace py = pybind11;
using namespace cstomo;

namespace {

py::object to_python(const Json& j) {
  switch (j.type()) {
    case Json::value_t::null: return py::none();
    case Json::value_t::boolean: return py::bool_(j.get<bool>());
    case Json::value_t::number_integer: return py::int_(j.get<std::int64_t>());
    case Json::value_t::number_unsigned: return py::int_(j.get<std::uint64_t>());
    case Json::value_t::number_float: return py::float_(j.get<double>());
    case Json::value_t::string: return py::str(j.get<std::string>());
    case Json::value_t::array: {
      py::list out;
      for (const Json& v : j) out.append(to_python(v));
      return out;
    }
    default: {
      py::dict out;
      for (const auto& [k, v] : j.items()) out[py::str(k)] = to_python(v);
      return out;
    }
  }
}

std::vector<PauliWord> to_words(const std::vector<std::string>& words) {
  return {words.begin(), words.end()};
}

std::vector<std::string> to_strings(const std::vector<PauliWord>& words) {
  std::vector<std::string> out;
  for (const PauliWord& w : words) out.push_back(w.str());
  return out;
}

SolverConfig solver_config(int max_iterations, double tolerance) {
  SolverConfig c;
  c.max_iterations = max_iterations;
  c.primal_tolerance = tolerance;
  return c;
}

Dataset make_dataset(int n_qubits, const std::vector<std::string>& words,
                     const Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>& counts) {
  require(counts.rows() == static_cast<Eigen::Index>(words.size()), "counts needs one row per word");
  std::vector<CountRecord> records;
  for (std::size_t j = 0; j < words.size(); ++j) {
    std::vector<std::int64_t> row(counts.cols());
    for (Eigen::Index k = 0; k < counts.cols(); ++k) row[k] = counts(static_cast<Eigen::Index>(j), k);
    records.push_back({PauliWord(words[j]), std::move(row)});
  }
  return Dataset(n_qubits, std::move(records));
}

}  // namespace

PYBIND11_MODULE(_cstomo, m) {
  m.doc() = "Compressed-sensing quantum state tomography";

  static py::exception<Error> error(m, "Error", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const std::string code(to_string(e.code()));
      if (e.code() == ErrorCode::kInvalidArgument) {
        PyErr_SetString(PyExc_ValueError, (code + ": " + e.what()).c_str());
      } else {
        error((code + ": " + e.what()).c_str());
      }
    }
  });

  m.def("ghz_state", [](int n) { return ghz_state(n).matrix(); }, py::arg("n_qubits"));
  m.def("dephased_ghz", [](int n, double lambda) { return dephased_ghz(n, lambda).matrix(); },
        py::arg("n_qubits"), py::arg("lam"));
  m.def("fidelity", [](const ComplexMatrix& a, const ComplexMatrix& b) {
    return fidelity(DensityMatrix(a), DensityMatrix(b));
  }, py::arg("a"), py::arg("b"));
  m.def("purity", [](const ComplexMatrix& rho) { return purity(DensityMatrix(rho)); }, py::arg("rho"));
  m.def("enumerate_settings", [](int n) { return to_strings(enumerate_settings(n)); }, py::arg("n_qubits"));
  m.def("born_probabilities", [](const ComplexMatrix& rho, const std::string& word) {
    return born_probabilities(DensityMatrix(rho), PauliWord(word));
  }, py::arg("rho"), py::arg("word"));

  py::class_<Dataset>(m, "Dataset")
      .def(py::init(&make_dataset), py::arg("n_qubits"), py::arg("words"), py::arg("counts"))
      .def_property_readonly("n_qubits", &Dataset::n_qubits)
      .def_property_readonly("words", [](const Dataset& d) { return to_strings(d.words()); })
      .def_property_readonly("counts", &Dataset::count_matrix)
      .def("__len__", &Dataset::size)
      .def("restrict", [](const Dataset& d, const std::vector<std::string>& words) {
        return restrict_dataset(d, to_words(words));
      }, py::arg("words"))
      .def("to_json", [](const Dataset& d) { return dump(to_json(d)); })
      .def_static("from_json", [](const std::string& text) {
        try {
          return dataset_from_json(Json::parse(text));
        } catch (const Json::exception& e) {
          fail(ErrorCode::kInvalidArgument, e.what());
        }
      }, py::arg("text"))
      .def("__eq__", [](const Dataset& a, const Dataset& b) { return a == b; });

  m.def("simulate", [](const ComplexMatrix& rho, std::int64_t shots, std::optional<std::vector<std::string>> words,
                       std::uint64_t seed, std::uint64_t stream, bool noiseless) {
    const DensityMatrix state(rho);
    const SettingsPlan plan =
        SettingsPlan::uniform(words ? to_words(*words) : enumerate_settings(state.n_qubits()), shots);
    return noiseless ? expected_counts(state, plan) : sample_counts(state, plan, RandomSource(seed, stream));
  }, py::arg("rho"), py::arg("shots") = 650, py::arg("words") = py::none(), py::arg("seed") = 0,
     py::arg("stream") = 1, py::arg("noiseless") = false);

  m.def("epsilon_hat", &epsilon_hat, py::arg("data"));
  m.def("expected_noise", [](const ComplexMatrix& rho, std::int64_t shots, std::optional<std::vector<std::string>> words) {
    const DensityMatrix state(rho);
    return expected_noise(state, SettingsPlan::uniform(words ? to_words(*words) : enumerate_settings(state.n_qubits()), shots));
  }, py::arg("rho"), py::arg("shots") = 650, py::arg("words") = py::none());

  m.def("reconstruct", [](const Dataset& data, std::optional<double> epsilon, double multiplier,
                          int max_iterations, double tolerance) {
    const double eps = epsilon ? *epsilon : multiplier * epsilon_hat(data);
    ReconstructionResult r;
    {
      py::gil_scoped_release release;
      r = reconstruct(data, eps, solver_config(max_iterations, tolerance));
    }
    py::dict out = to_python(to_json(r)).cast<py::dict>();
    out["estimate"] = r.estimate ? py::cast(r.estimate->matrix()) : py::none();
    return out;
  }, py::arg("data"), py::arg("epsilon") = py::none(), py::arg("multiplier") = 1.0,
     py::arg("max_iterations") = SolverConfig{}.max_iterations, py::arg("tolerance") = SolverConfig{}.primal_tolerance);

  m.def("mle", [](const Dataset& data, int max_iterations, double tolerance) {
    py::gil_scoped_release release;
    const MleResult r = mle_estimate(data, max_iterations, tolerance);
    py::gil_scoped_acquire acquire;
    py::dict out;
    out["estimate"] = r.estimate.matrix();
    out["log_likelihood"] = r.log_likelihood;
    out["iterations"] = r.iterations;
    out["converged"] = r.converged;
    return out;
  }, py::arg("data"), py::arg("max_iterations") = 20000, py::arg("tolerance") = 1e-10);

  m.def("ghz_pauli_decomposition", [](int n) { return to_python(to_json(ghz_pauli_decomposition(n))); },
        py::arg("n_qubits") = 4);
  m.def("required_settings", [](const ComplexMatrix& target) {
    return to_strings(required_settings(pauli_decomposition(DensityMatrix(target))));
  }, py::arg("target"));
  m.def("direct_fidelity", [](const Dataset& data, const ComplexMatrix& target, bool required_only) {
    const PauliCoefficients coeffs = pauli_decomposition(DensityMatrix(target));
    DirectFidelityOptions options;
    if (required_only) options.settings = required_settings(coeffs);
    return to_python(to_json(direct_fidelity(data, coeffs, options)));
  }, py::arg("data"), py::arg("target"), py::arg("required_only") = false);

  m.def("cross_validate", [](const Dataset& data, const std::vector<std::size_t>& m_values,
                             const std::vector<double>& multipliers, std::size_t folds, std::size_t repetitions,
                             std::uint64_t seed, int threads) {
    CrossValOptions options;
    options.folds = folds;
    options.repetitions = repetitions;
    options.threads = threads;
    CrossValReport report;
    {
      py::gil_scoped_release release;
      report = cross_validate(data, m_values, multipliers, RandomSource(seed, 2), options);
    }
    return to_python(to_json(report));
  }, py::arg("data"), py::arg("m_values"), py::arg("multipliers") = kDefaultMultipliers, py::arg("folds") = 5,
     py::arg("repetitions") = 10, py::arg("seed") = 0, py::arg("threads") = 1);

  m.def("sweep_settings", [](const Dataset& data, const std::vector<std::size_t>& m_values, std::size_t draws,
                             const ComplexMatrix& target, std::uint64_t seed, int threads) {
    SettingsSweepOptions options;
    options.threads = threads;
    const DensityMatrix t(target);
    SweepReport report;
    {
      py::gil_scoped_release release;
      report = sweep_settings(data, m_values, draws, t, RandomSource(seed, 4), options);
    }
    return to_python(to_json(report));
  }, py::arg("data"), py::arg("m_values"), py::arg("draws") = kDefaultDrawsPerM, py::arg("target"),
     py::arg("seed") = 0, py::arg("threads") = 1);

  m.def("sweep_grid", [](const ComplexMatrix& generator, std::int64_t shots, const std::vector<std::size_t>& m_values,
                         const std::vector<double>& multipliers, std::size_t repetitions, std::uint64_t seed,
                         int threads) {
    const DensityMatrix g(generator);
    const SettingsPlan plan = SettingsPlan::uniform(enumerate_settings(g.n_qubits()), shots);
    SweepReport report;
    {
      py::gil_scoped_release release;
      report = sweep_grid(g, plan, m_values, multipliers, repetitions, RandomSource(seed, 5), RunOptions{threads, {}});
    }
    return to_python(to_json(report));
  }, py::arg("generator"), py::arg("shots"), py::arg("m_values"), py::arg("multipliers"),
     py::arg("repetitions") = kDefaultGridRepetitions, py::arg("seed") = 0, py::arg("threads") = 1);
}
