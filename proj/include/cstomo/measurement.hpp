#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cstomo/quantum.hpp"

namespace cstomo {

/// Local Pauli measurement setting: one of X, Y, Z per qubit, first letter
/// acting on the most significant qubit.
class PauliWord {
 public:
  PauliWord() = default;
  /// Throws invalid-argument on empty input or letters other than X, Y, Z.
  explicit PauliWord(std::string letters);

  int n_qubits() const { return static_cast<int>(letters_.size()); }
  Eigen::Index dim() const { return Eigen::Index{1} << letters_.size(); }
  char operator[](std::size_t i) const { return letters_[i]; }
  const std::string& str() const { return letters_; }

  auto operator<=>(const PauliWord&) const = default;

 private:
  std::string letters_;
};

/// Eigenprojectors of a Pauli word. Outcome k encodes the eigenvalue sign
/// pattern in binary (+ -> 0, - -> 1), first qubit most significant.
struct ProjectorSet {
  PauliWord word;
  std::vector<ComplexVector> vectors;   // v_k
  std::vector<ComplexMatrix> projectors;  // v_k v_k^dag
  RealMatrix coordinates;               // row k = to_coordinates(projectors[k])
};

/// Measurement plan: distinct words with a positive shot count each.
class SettingsPlan {
 public:
  SettingsPlan() = default;
  SettingsPlan(std::vector<PauliWord> words, std::vector<std::int64_t> shots);
  static SettingsPlan uniform(std::vector<PauliWord> words, std::int64_t shots);

  std::size_t size() const { return words_.size(); }
  int n_qubits() const { return words_.empty() ? 0 : words_.front().n_qubits(); }
  Eigen::Index dim() const { return Eigen::Index{1} << n_qubits(); }
  const std::vector<PauliWord>& words() const { return words_; }
  const std::vector<std::int64_t>& shots() const { return shots_; }

 private:
  std::vector<PauliWord> words_;
  std::vector<std::int64_t> shots_;
};

/// Cached per word; the returned reference stays valid for the process
/// lifetime and is safe to share between threads.
const ProjectorSet& eigenprojectors(const PauliWord& word);

/// Born probabilities tr(Pi_k rho), clipped at zero and renormalized.
RealVector born_probabilities(const DensityMatrix& rho, const PauliWord& word,
                              const Tolerances& tol = default_tolerances());

/// Expected count table: entry (j, k) = N_j tr(Pi_k^(j) rho).
RealMatrix apply_sensing(const HermitianMatrix& rho, const SettingsPlan& plan);

/// Adjoint of apply_sensing: sum_jk data(j,k) N_j Pi_k^(j).
HermitianMatrix apply_sensing_adjoint(const RealMatrix& data, const SettingsPlan& plan);

/// Sensing operator as a dense (m d) x d^2 matrix acting on
/// to_coordinates(rho); row j*d + k holds N_j * coordinates of Pi_k^(j).
RealMatrix sensing_matrix(const SettingsPlan& plan);

/// All 3^n words, lexicographic over X < Y < Z.
std::vector<PauliWord> enumerate_settings(int n_qubits);

// Full Pauli labels over {I, X, Y, Z}. Label index l enumerates the 4^n
// labels in base 4 (I < X < Y < Z), first letter most significant.

std::string pauli_label(std::size_t index, int n_qubits);
std::vector<std::string> pauli_labels(int n_qubits);
ComplexMatrix pauli_operator(std::string_view label);

/// True when every non-identity letter of label matches the word, i.e. the
/// operator is diagonal in the word's eigenbasis.
bool label_covered_by(std::string_view label, const PauliWord& word);

/// Eigenvalue (+1 or -1) of a covered label on outcome k of the word.
int outcome_sign(std::string_view label, std::size_t k);

/// Orthogonal d^2 x d^2 matrix whose column l is to_coordinates(O_l / sqrt(d)).
/// Cached per qubit count.
const RealMatrix& pauli_basis(int n_qubits);

}  // namespace cstomo
