#include "cstomo/dfe.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace cstomo {

namespace {

bool is_identity_label(const std::string& label) {
  return std::all_of(label.begin(), label.end(), [](char c) { return c == 'I'; });
}

}  // namespace

double PauliCoefficients::at(const std::string& label) const {
  const auto it = terms.find(label);
  return it == terms.end() ? 0.0 : it->second;
}

std::vector<std::string> PauliCoefficients::nonzero_labels(double threshold) const {
  std::vector<std::string> out;
  for (const auto& [label, value] : terms) {
    if (std::abs(value) > threshold) out.push_back(label);
  }
  return out;
}

FrequencyTable FrequencyTable::from_counts(const Dataset& data) {
  require(!data.empty(), "frequency table: empty dataset");
  FrequencyTable t;
  t.n_qubits = data.n_qubits();
  t.words = data.words();
  t.probabilities = data.count_matrix();
  for (std::size_t j = 0; j < data.size(); ++j) {
    const double n = static_cast<double>(data[j].shots());
    t.probabilities.row(static_cast<Eigen::Index>(j)) /= n;
    t.shots.push_back(n);
  }
  return t;
}

FrequencyTable FrequencyTable::exact(const DensityMatrix& rho, const SettingsPlan& plan) {
  require(plan.size() > 0, "frequency table: empty plan");
  require(plan.dim() == rho.dim(), "frequency table: state dimension does not match plan");
  FrequencyTable t;
  t.n_qubits = rho.n_qubits();
  t.words = plan.words();
  t.probabilities.resize(static_cast<Eigen::Index>(plan.size()), rho.dim());
  for (std::size_t j = 0; j < plan.size(); ++j) {
    t.probabilities.row(static_cast<Eigen::Index>(j)) =
        born_probabilities(rho, plan.words()[j]).transpose();
    t.shots.push_back(static_cast<double>(plan.shots()[j]));
  }
  return t;
}

std::vector<std::string> estimable_labels(const PauliWord& word) {
  const int n = word.n_qubits();
  std::vector<std::string> labels;
  labels.reserve(std::size_t{1} << n);
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    std::string label(static_cast<std::size_t>(n), 'I');
    for (int q = 0; q < n; ++q) {
      if ((mask >> (n - 1 - q)) & 1) label[static_cast<std::size_t>(q)] = word[static_cast<std::size_t>(q)];
    }
    labels.push_back(std::move(label));
  }
  return labels;
}

PauliCoefficients pauli_coefficients(const FrequencyTable& table) {
  require(!table.words.empty(), "pauli_coefficients: empty data");
  const Eigen::Index d = table.probabilities.cols();
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  std::map<std::string, std::pair<double, double>> sums;  // weighted sum, weight
  for (std::size_t j = 0; j < table.words.size(); ++j) {
    const auto row = table.probabilities.row(static_cast<Eigen::Index>(j));
    for (const std::string& label : estimable_labels(table.words[j])) {
      double e = 0.0;
      for (Eigen::Index k = 0; k < d; ++k) {
        e += outcome_sign(label, static_cast<std::size_t>(k)) * row(k);
      }
      auto& [sum, weight] = sums[label];
      sum += table.shots[j] * norm * e;
      weight += table.shots[j];
    }
  }
  PauliCoefficients out;
  out.n_qubits = table.n_qubits;
  for (const auto& [label, acc] : sums) out.terms[label] = acc.first / acc.second;
  return out;
}

PauliCoefficients pauli_coefficients(const Dataset& data) {
  require(!data.empty(), "pauli_coefficients: empty dataset");
  return pauli_coefficients(FrequencyTable::from_counts(data));
}

PauliCoefficients pauli_decomposition(const DensityMatrix& rho) {
  const int n = rho.n_qubits();
  const double norm = 1.0 / std::sqrt(static_cast<double>(rho.dim()));
  PauliCoefficients out;
  out.n_qubits = n;
  for (const std::string& label : pauli_labels(n)) {
    const double value = (rho.matrix() * pauli_operator(label)).trace().real() * norm;
    if (std::abs(value) > 1e-12) out.terms[label] = value;
  }
  return out;
}

PauliCoefficients ghz_pauli_decomposition(int n_qubits) {
  if (n_qubits != 4) {
    fail(ErrorCode::kUnsupported, "GHZ Pauli decomposition is only provided for four qubits");
  }
  return pauli_decomposition(ghz_state(4));
}

std::vector<PauliWord> required_settings(const PauliCoefficients& target) {
  require(!target.terms.empty(), "required_settings: empty target");
  std::set<std::string> uncovered;
  for (const std::string& label : target.nonzero_labels()) {
    if (!is_identity_label(label)) uncovered.insert(label);
  }
  std::vector<PauliWord> chosen;
  if (uncovered.empty()) return chosen;
  const std::vector<PauliWord> candidates = enumerate_settings(target.n_qubits);
  while (!uncovered.empty()) {
    std::size_t best_gain = 0;
    const PauliWord* best = nullptr;
    for (const PauliWord& w : candidates) {
      std::size_t gain = 0;
      for (const std::string& label : uncovered) gain += label_covered_by(label, w) ? 1 : 0;
      if (gain > best_gain) {
        best_gain = gain;
        best = &w;
      }
    }
    if (!best) fail(ErrorCode::kInternal, "required_settings: label cannot be covered");
    for (auto it = uncovered.begin(); it != uncovered.end();) {
      it = label_covered_by(*it, *best) ? uncovered.erase(it) : std::next(it);
    }
    chosen.push_back(*best);
  }
  return chosen;
}

FidelityEstimate direct_fidelity(const FrequencyTable& table, const PauliCoefficients& target,
                                 const DirectFidelityOptions& options) {
  require(table.n_qubits == target.n_qubits, "direct_fidelity: qubit counts differ");
  const Eigen::Index d = table.probabilities.cols();
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));

  std::vector<std::size_t> rows;
  for (std::size_t j = 0; j < table.words.size(); ++j) {
    if (!options.settings || std::find(options.settings->begin(), options.settings->end(),
                                       table.words[j]) != options.settings->end()) {
      rows.push_back(j);
    }
  }

  // Weight of each (row, outcome) frequency in the F^2 estimate.
  RealMatrix weights = RealMatrix::Zero(static_cast<Eigen::Index>(table.words.size()), d);
  double constant = 0.0;
  std::vector<std::string> missing;
  for (const std::string& label : target.nonzero_labels()) {
    const double xi_t = target.at(label);
    if (is_identity_label(label)) {
      constant += xi_t * norm;  // tr(rho) = 1
      continue;
    }
    double total_shots = 0.0;
    for (std::size_t j : rows) {
      if (label_covered_by(label, table.words[j])) total_shots += table.shots[j];
    }
    if (total_shots == 0.0) {
      missing.push_back(label);
      continue;
    }
    for (std::size_t j : rows) {
      if (!label_covered_by(label, table.words[j])) continue;
      const double w = xi_t * norm * table.shots[j] / total_shots;
      for (Eigen::Index k = 0; k < d; ++k) {
        weights(static_cast<Eigen::Index>(j), k) += w * outcome_sign(label, static_cast<std::size_t>(k));
      }
    }
  }
  if (!missing.empty()) {
    std::string list;
    for (const std::string& l : missing) list += (list.empty() ? "" : ", ") + l;
    fail(ErrorCode::kMissingSetting, "direct_fidelity: no setting measures " + list);
  }

  FidelityEstimate est;
  double variance = 0.0;
  est.f_squared = constant;
  for (std::size_t j : rows) {
    const auto g = weights.row(static_cast<Eigen::Index>(j));
    if (g.cwiseAbs().maxCoeff() == 0.0) continue;
    const auto p = table.probabilities.row(static_cast<Eigen::Index>(j));
    const double mean = g.dot(p);
    const double second = g.cwiseProduct(g).dot(p);
    est.f_squared += mean;
    variance += std::max(0.0, second - mean * mean) / table.shots[j];
    est.settings_used.push_back(table.words[j]);
  }
  est.f = std::sqrt(std::max(est.f_squared, 0.0));
  est.std_f_squared = std::sqrt(variance);
  return est;
}

FidelityEstimate direct_fidelity(const Dataset& data, const PauliCoefficients& target,
                                 const DirectFidelityOptions& options) {
  return direct_fidelity(FrequencyTable::from_counts(data), target, options);
}

}  // namespace cstomo
