#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cstomo/data.hpp"
#include "cstomo/random.hpp"
#include "cstomo/solver.hpp"

namespace cstomo {

/// Plug-in multinomial noise power: sum_jk y_jk (1 - y_jk / N_j), in counts^2.
double epsilon_hat(const Dataset& data);

/// Exact expected noise power sum_jk N_j p_jk (1 - p_jk) for state rho.
double expected_noise(const DensityMatrix& rho, const SettingsPlan& plan);

struct PredictionOutcome {
  double error = 0.0;        // ||A_test(rho_hat) - Y_test||_2, or ||Y_test||_2 if infeasible
  bool infeasible = false;
  std::optional<DensityMatrix> estimate;
};

/// Train on `train` at epsilon_train and score the held-out counts. Throws
/// invalid-argument when the two datasets share a word.
PredictionOutcome prediction_error(const Dataset& train, const Dataset& test,
                                   double epsilon_train, const SolverConfig& config = {});

struct CrossValCell {
  std::size_t m = 0;
  double epsilon_multiplier = 0.0;
  double mean_error = 0.0;
  double std_error = 0.0;
  double infeasible_fraction = 0.0;
  /// Mean over held-out folds of sqrt(epsilon_hat(test fold)): the error
  /// expected from multinomial noise in the test data alone.
  double noise_floor = 0.0;
  std::size_t evaluations = 0;  // successful fold evaluations
  std::size_t failures = 0;
  std::string status = "ok";    // "ok" or the first failure message
};

struct CrossValReport {
  std::vector<CrossValCell> grid;  // m-major, multipliers in request order
  std::size_t folds = 0;
  std::size_t repetitions = 0;

  const CrossValCell& cell(std::size_t m, double multiplier) const;
};

struct CrossValOptions {
  std::size_t folds = 5;
  std::size_t repetitions = 50;
  int threads = 1;
  SolverConfig solver;
};

inline const std::vector<std::size_t> kDefaultCrossValM = {10, 15, 20, 40, 60, 80};
inline const std::vector<double> kDefaultMultipliers = {0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 4.0};

/// Fold-wise cross-validation over the (m, multiplier) grid.
///
/// For every m and repetition r the settings draw and fold split come from
/// rng.child(m index).child(r) and are shared by all multipliers, so the
/// multipliers are compared on identical data. Each training union uses
/// epsilon = multiplier * epsilon_hat(training records). Cell statistics are
/// the mean and sample standard deviation over repetitions x folds, with
/// infeasible folds scored at ||Y_test||_2.
CrossValReport cross_validate(const Dataset& data, const std::vector<std::size_t>& m_values,
                              const std::vector<double>& epsilon_multipliers,
                              const RandomSource& rng, const CrossValOptions& options = {});

}  // namespace cstomo
