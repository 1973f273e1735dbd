#include "cstomo/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace cstomo {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string quoted(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

Json words_json(const std::vector<PauliWord>& words) {
  Json out = Json::array();
  for (const PauliWord& w : words) out.push_back(w.str());
  return out;
}

template <typename F>
auto parse(const char* what, F&& body) {
  try {
    return body();
  } catch (const Json::exception& e) {
    fail(ErrorCode::kInvalidArgument, std::string(what) + ": " + e.what());
  }
}

}  // namespace

Json to_json(const DensityMatrix& rho) {
  const Eigen::Index d = rho.dim();
  Json re = Json::array();
  Json im = Json::array();
  for (Eigen::Index i = 0; i < d; ++i) {
    Json rrow = Json::array();
    Json irow = Json::array();
    for (Eigen::Index k = 0; k < d; ++k) {
      rrow.push_back(rho(i, k).real());
      irow.push_back(rho(i, k).imag());
    }
    re.push_back(std::move(rrow));
    im.push_back(std::move(irow));
  }
  return Json{{"dim", d}, {"re", std::move(re)}, {"im", std::move(im)}};
}

Json to_json(const SettingsPlan& plan) {
  return Json{{"words", words_json(plan.words())}, {"shots", plan.shots()}};
}

Json to_json(const Dataset& data) {
  Json records = Json::array();
  for (const CountRecord& r : data.records()) {
    records.push_back(Json{{"word", r.word.str()}, {"counts", r.counts}});
  }
  return Json{{"n_qubits", data.n_qubits()}, {"records", std::move(records)}};
}

Json to_json(const ReconstructionResult& result) {
  Json j{{"status", std::string(to_string(result.status))},
         {"iterations", result.iterations},
         {"residual", result.residual},
         {"raw_trace", result.raw_trace},
         {"epsilon", result.epsilon},
         {"min_residual", result.min_residual}};
  j["estimate"] = result.estimate ? to_json(*result.estimate) : Json(nullptr);
  return j;
}

Json to_json(const FidelityEstimate& estimate) {
  return Json{{"f2", estimate.f_squared},
              {"f", estimate.f},
              {"std_f2", estimate.std_f_squared},
              {"settings", words_json(estimate.settings_used)}};
}

Json to_json(const PauliCoefficients& coefficients) {
  Json terms = Json::object();
  for (const auto& [label, value] : coefficients.terms) terms[label] = value;
  return Json{{"n_qubits", coefficients.n_qubits}, {"terms", std::move(terms)}};
}

Json to_json(const CrossValReport& report) {
  Json grid = Json::array();
  for (const CrossValCell& c : report.grid) {
    grid.push_back(Json{{"m", c.m},
                        {"epsilon_multiplier", c.epsilon_multiplier},
                        {"mean_error", c.mean_error},
                        {"std_error", c.std_error},
                        {"infeasible_fraction", c.infeasible_fraction},
                        {"noise_floor", c.noise_floor},
                        {"evaluations", c.evaluations},
                        {"failures", c.failures},
                        {"status", c.status}});
  }
  return Json{{"folds", report.folds}, {"repetitions", report.repetitions}, {"grid", std::move(grid)}};
}

Json to_json(const BootstrapReport& report) {
  return Json{{"repetitions", report.repetitions},
              {"fidelity_mean", report.fidelity_mean},
              {"fidelity_std", report.fidelity_std},
              {"target_label", report.target_label},
              {"infeasible", report.infeasible},
              {"fidelities", report.fidelities}};
}

Json to_json(const SweepReport& report) {
  Json cells = Json::array();
  for (const SweepCell& c : report.cells) {
    Json cell{{"m", c.m},
              {"epsilon_multiplier", c.epsilon_multiplier},
              {"fidelity_mean", c.fidelity_mean},
              {"fidelity_std", c.fidelity_std},
              {"infeasible_fraction", c.infeasible_fraction},
              {"samples", c.samples},
              {"failures", c.failures},
              {"status", c.status}};
    if (c.bootstrap_std) cell["bootstrap_std"] = *c.bootstrap_std;
    cells.push_back(std::move(cell));
  }
  return Json{{"reference_fidelity", report.reference_fidelity}, {"cells", std::move(cells)}};
}

DensityMatrix density_matrix_from_json(const Json& j) {
  return parse("density matrix", [&] {
    const auto d = j.at("dim").get<Eigen::Index>();
    require(d >= 2, "density matrix: dim must be >= 2");
    const Json& re = j.at("re");
    const Json& im = j.at("im");
    require(re.is_array() && im.is_array() && static_cast<Eigen::Index>(re.size()) == d &&
                static_cast<Eigen::Index>(im.size()) == d,
            "density matrix: re and im must have dim rows");
    ComplexMatrix m(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
      const Json& rrow = re[static_cast<std::size_t>(i)];
      const Json& irow = im[static_cast<std::size_t>(i)];
      require(static_cast<Eigen::Index>(rrow.size()) == d &&
                  static_cast<Eigen::Index>(irow.size()) == d,
              "density matrix: row " + std::to_string(i) + " has the wrong length");
      for (Eigen::Index k = 0; k < d; ++k) {
        m(i, k) = Complex(rrow[static_cast<std::size_t>(k)].get<double>(),
                          irow[static_cast<std::size_t>(k)].get<double>());
      }
    }
    return DensityMatrix(std::move(m));
  });
}

SettingsPlan settings_plan_from_json(const Json& j) {
  return parse("settings plan", [&] {
    std::vector<PauliWord> words;
    for (const Json& w : j.at("words")) words.emplace_back(w.get<std::string>());
    return SettingsPlan(std::move(words), j.at("shots").get<std::vector<std::int64_t>>());
  });
}

Dataset dataset_from_json(const Json& j) {
  return parse("dataset", [&] {
    const int n = j.at("n_qubits").get<int>();
    require(n >= 1 && n <= 10, "dataset: n_qubits must lie in [1, 10]");
    std::vector<CountRecord> records;
    for (const Json& r : j.at("records")) {
      CountRecord rec;
      rec.word = PauliWord(r.at("word").get<std::string>());
      rec.counts = r.at("counts").get<std::vector<std::int64_t>>();
      records.push_back(std::move(rec));
    }
    return Dataset(n, std::move(records));
  });
}

std::string to_csv(const Dataset& data) {
  std::ostringstream out;
  out << "word,outcome,count\n";
  for (const CountRecord& r : data.records()) {
    for (std::size_t k = 0; k < r.counts.size(); ++k) {
      out << r.word.str() << ',' << k << ',' << r.counts[k] << '\n';
    }
  }
  return out.str();
}

std::string to_csv(const CrossValReport& report) {
  std::ostringstream out;
  out << "m,epsilon_multiplier,mean_error,std_error,infeasible_fraction,noise_floor,evaluations,"
         "failures,status\n";
  for (const CrossValCell& c : report.grid) {
    out << c.m << ',' << num(c.epsilon_multiplier) << ',' << num(c.mean_error) << ','
        << num(c.std_error) << ',' << num(c.infeasible_fraction) << ',' << num(c.noise_floor)
        << ',' << c.evaluations << ',' << c.failures << ',' << quoted(c.status) << '\n';
  }
  return out.str();
}

std::string to_csv(const BootstrapReport& report) {
  std::ostringstream out;
  out << "repetition,fidelity\n";
  for (std::size_t r = 0; r < report.fidelities.size(); ++r) {
    out << r << ',' << num(report.fidelities[r]) << '\n';
  }
  return out.str();
}

std::string to_csv(const SweepReport& report) {
  std::ostringstream out;
  out << "m,epsilon_multiplier,fidelity_mean,fidelity_std,infeasible_fraction,bootstrap_std,"
         "samples,failures,status\n";
  for (const SweepCell& c : report.cells) {
    out << c.m << ',' << num(c.epsilon_multiplier) << ',' << num(c.fidelity_mean) << ','
        << num(c.fidelity_std) << ',' << num(c.infeasible_fraction) << ','
        << (c.bootstrap_std ? num(*c.bootstrap_std) : "") << ',' << c.samples << ','
        << c.failures << ',' << quoted(c.status) << '\n';
  }
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kInvalidArgument, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kInvalidArgument, "cannot write " + path);
  out << contents;
  if (!out) fail(ErrorCode::kInvalidArgument, "write failed: " + path);
}

Json read_json_file(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    fail(ErrorCode::kInvalidArgument, path + ": " + e.what());
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace cstomo
