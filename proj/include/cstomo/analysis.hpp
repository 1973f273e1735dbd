#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cstomo/data.hpp"
#include "cstomo/model_selection.hpp"
#include "cstomo/solver.hpp"

namespace cstomo {

/// How the data-fit radius is chosen for a dataset: multiplier * epsilon_hat,
/// or a fixed value when `fixed` is set.
struct EpsilonRule {
  double multiplier = 1.0;
  std::optional<double> fixed;

  double resolve(const Dataset& data) const;
};

struct BootstrapReport {
  std::size_t repetitions = 0;
  double fidelity_mean = 0.0;
  double fidelity_std = 0.0;
  std::string target_label;
  std::size_t infeasible = 0;   // repetitions scored as fidelity 0
  std::vector<double> fidelities;
};

struct RunOptions {
  int threads = 1;
  SolverConfig solver;
};

/// Parametric bootstrap: resimulate data from `estimate` with the plan,
/// reconstruct with the epsilon rule and score fidelity against `target`.
/// Repetition r uses rng.child(r).
BootstrapReport bootstrap_fidelity(const DensityMatrix& estimate, const SettingsPlan& plan,
                                   const DensityMatrix& target, const EpsilonRule& rule,
                                   std::size_t repetitions, const RandomSource& rng,
                                   const RunOptions& options = {},
                                   std::string target_label = "target");

struct SweepCell {
  std::size_t m = 0;
  double epsilon_multiplier = 1.0;
  double fidelity_mean = 0.0;
  double fidelity_std = 0.0;          // spread over settings draws (and data, for grids)
  double infeasible_fraction = 0.0;
  std::size_t samples = 0;            // solves that returned, infeasible included
  std::size_t failures = 0;
  std::string status = "ok";
  /// Parametric-bootstrap spread at this m, when requested.
  std::optional<double> bootstrap_std;
};

struct SweepReport {
  std::vector<SweepCell> cells;
  double reference_fidelity = 0.0;

  const SweepCell& cell(std::size_t m, double multiplier = 1.0) const;
};

inline constexpr std::size_t kDefaultDrawsPerM = 50;
inline constexpr std::size_t kDefaultGridRepetitions = 100;

struct SettingsSweepOptions : RunOptions {
  /// Bootstrap datasets per m for the bootstrap_std column; 0 disables it.
  std::size_t bootstrap_repetitions = 0;
};

/// Fidelity against `target` as a function of the number of settings m.
/// Draw r of m uses rng.child(m index).child(r); drawn settings are kept in
/// dataset order so m = all records reproduces the complete-data solve.
/// Infeasible draws are counted in infeasible_fraction and left out of the
/// fidelity statistics. bootstrap_std resimulates data from the complete-data
/// estimate, with streams under rng.child(m_values.size()).
SweepReport sweep_settings(const Dataset& data, const std::vector<std::size_t>& m_values,
                           std::size_t draws_per_m, const DensityMatrix& target,
                           const RandomSource& rng, const SettingsSweepOptions& options = {});

/// Misspecification grid: for every (m, multiplier, repetition) simulate
/// data from `generator` over the full plan, draw m settings, reconstruct at
/// multiplier * epsilon_hat and score fidelity against `generator`.
/// Infeasible reconstructions score 0. Repetition r of cell (m, e) uses
/// rng.child(m index).child(r) for data and settings, shared across
/// multipliers.
SweepReport sweep_grid(const DensityMatrix& generator, const SettingsPlan& plan_full,
                       const std::vector<std::size_t>& m_values,
                       const std::vector<double>& epsilon_multipliers, std::size_t repetitions,
                       const RandomSource& rng, const RunOptions& options = {});

}  // namespace cstomo
