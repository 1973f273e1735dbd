#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cstomo/data.hpp"
#include "cstomo/measurement.hpp"

namespace cstomo {

/// Normalized Pauli expansion xi_l = tr(rho O_l) / sqrt(d), keyed by full
/// label over {I, X, Y, Z}.
struct PauliCoefficients {
  int n_qubits = 0;
  std::map<std::string, double> terms;

  double at(const std::string& label) const;
  /// Labels with |xi| > threshold, in label order.
  std::vector<std::string> nonzero_labels(double threshold = 1e-12) const;
};

struct FidelityEstimate {
  double f_squared = 0.0;
  double f = 0.0;              // sqrt(max(f_squared, 0))
  double std_f_squared = 0.0;  // linear error propagation of the multinomial covariance
  std::vector<PauliWord> settings_used;
};

/// Outcome frequencies p_hat_jk with their shot counts. Built from counts, or
/// from exact Born probabilities for noise-free analysis.
struct FrequencyTable {
  int n_qubits = 0;
  std::vector<PauliWord> words;
  RealMatrix probabilities;          // m x d
  std::vector<double> shots;         // N_j

  static FrequencyTable from_counts(const Dataset& data);
  static FrequencyTable exact(const DensityMatrix& rho, const SettingsPlan& plan);
};

/// The 2^n labels obtained by replacing any subset of the word's letters
/// with I, in label order (III..I first, the word itself last).
std::vector<std::string> estimable_labels(const PauliWord& word);

/// Coefficient estimates for every label estimable from the data. A label
/// seen by several settings is the N_j-weighted mean of the per-setting
/// estimates; the single-setting variance (1 - <O_l>^2) / N_j makes these the
/// inverse-variance weights.
PauliCoefficients pauli_coefficients(const FrequencyTable& table);
PauliCoefficients pauli_coefficients(const Dataset& data);

/// Exact expansion of a state by brute-force traces over all 4^n labels.
PauliCoefficients pauli_decomposition(const DensityMatrix& rho);

/// Expansion of the four-qubit GHZ state; other sizes are unsupported.
PauliCoefficients ghz_pauli_decomposition(int n_qubits);

/// Minimal settings covering every nonzero non-identity target label, by
/// greedy set cover over all 3^n words; ties go to the lexicographically
/// smallest word.
std::vector<PauliWord> required_settings(const PauliCoefficients& target);

struct DirectFidelityOptions {
  /// Restrict to these settings (for example required_settings(target)).
  std::optional<std::vector<PauliWord>> settings;
};

/// F^2 = sum_l xi_T^l xi_hat^l for a pure target, with variance
/// g^T Cov(p_hat) g where g is the count-to-F^2 weight vector and settings
/// are uncorrelated. Throws missing-setting when a nonzero target label is
/// not estimable from the data.
FidelityEstimate direct_fidelity(const FrequencyTable& table, const PauliCoefficients& target,
                                 const DirectFidelityOptions& options = {});
FidelityEstimate direct_fidelity(const Dataset& data, const PauliCoefficients& target,
                                 const DirectFidelityOptions& options = {});

}  // namespace cstomo
