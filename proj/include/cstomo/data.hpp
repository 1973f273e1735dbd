#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cstomo/measurement.hpp"
#include "cstomo/quantum.hpp"
#include "cstomo/random.hpp"

namespace cstomo {

struct CountRecord {
  PauliWord word;
  std::vector<std::int64_t> counts;  // length d, sums to the shot count N_j

  std::int64_t shots() const;
};

/// Measured (or simulated) count table Y: one record per measurement setting.
class Dataset {
 public:
  Dataset() = default;
  /// Throws invalid-argument on duplicate words, wrong count lengths,
  /// negative counts or empty records.
  Dataset(int n_qubits, std::vector<CountRecord> records);

  int n_qubits() const { return n_qubits_; }
  Eigen::Index dim() const { return Eigen::Index{1} << n_qubits_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  const std::vector<CountRecord>& records() const { return records_; }
  const CountRecord& operator[](std::size_t j) const { return records_[j]; }

  std::vector<PauliWord> words() const;
  /// Plan with N_j taken from each record's total count.
  SettingsPlan plan() const;
  /// m x d matrix of counts, records in order.
  RealMatrix count_matrix() const;
  /// Index of the record for word, if present.
  std::optional<std::size_t> find(const PauliWord& word) const;

  friend bool operator==(const Dataset& a, const Dataset& b);

 private:
  int n_qubits_ = 0;
  std::vector<CountRecord> records_;
};

/// Multinomial counts for every setting of the plan, drawn by sequential
/// binomial conditioning. Pure in (rho, plan, rng).
Dataset sample_counts(const DensityMatrix& rho, const SettingsPlan& plan, const RandomSource& rng);

/// Noise-free surrogate: N_j p_jk rounded by the largest-remainder rule so
/// each record still sums to N_j exactly.
Dataset expected_counts(const DensityMatrix& rho, const SettingsPlan& plan);

/// Uniform random m-subset of all_words in random order.
std::vector<PauliWord> draw_settings(const std::vector<PauliWord>& all_words, std::size_t m,
                                     const RandomSource& rng);

/// Records for the requested words, in the requested order. Throws not-found
/// naming the first missing word.
Dataset restrict_dataset(const Dataset& data, const std::vector<PauliWord>& words);

/// Random partition into `folds` datasets whose sizes differ by at most one;
/// the larger folds come first.
std::vector<Dataset> split_folds(const Dataset& data, std::size_t folds, const RandomSource& rng);

/// Union of two datasets with disjoint words.
Dataset concatenate(const Dataset& a, const Dataset& b);

}  // namespace cstomo
