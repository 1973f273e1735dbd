#include "cstomo/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

#include "cstomo/parallel.hpp"

namespace cstomo {

int default_thread_count() {
  if (const char* env = std::getenv("CS_TOMO_THREADS")) {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && value >= 1 && value <= 1024) return static_cast<int>(value);
  }
  return 1;
}

double EpsilonRule::resolve(const Dataset& data) const {
  if (fixed) return *fixed;
  return multiplier * epsilon_hat(data);
}

namespace {

struct Sample {
  double fidelity = 0.0;
  bool infeasible = false;
  bool ok = false;
  std::string message;
};

struct Moments {
  double mean = 0.0;
  double std = 0.0;
};

Moments moments(const std::vector<double>& values) {
  Moments m;
  if (values.empty()) return m;
  m.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - m.mean) * (v - m.mean);
    m.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return m;
}

Sample score(const DataFitProblem& problem, double epsilon, const DensityMatrix& reference,
             const SolverConfig& config) {
  Sample s;
  try {
    const ReconstructionResult fit = reconstruct(problem, epsilon, config);
    if (fit.status == SolveStatus::kInfeasible) {
      s.infeasible = true;
      s.fidelity = 0.0;
    } else {
      s.fidelity = fidelity(reference, *fit.estimate);
    }
    s.ok = true;
  } catch (const Error& err) {
    s.message = err.what();
  }
  return s;
}

SweepCell summarize(std::size_t m, double multiplier, const std::vector<const Sample*>& samples,
                    bool infeasible_scores_zero) {
  SweepCell cell;
  cell.m = m;
  cell.epsilon_multiplier = multiplier;
  std::vector<double> values;
  std::size_t infeasible = 0;
  for (const Sample* s : samples) {
    if (!s->ok) {
      if (cell.failures++ == 0) cell.status = s->message;
      continue;
    }
    ++cell.samples;
    if (s->infeasible) ++infeasible;
    if (!s->infeasible || infeasible_scores_zero) values.push_back(s->fidelity);
  }
  const Moments mo = moments(values);
  cell.fidelity_mean = mo.mean;
  cell.fidelity_std = mo.std;
  cell.infeasible_fraction = cell.samples == 0 ? 0.0
                                                : static_cast<double>(infeasible) /
                                                      static_cast<double>(cell.samples);
  return cell;
}

/// m distinct words drawn uniformly, reported in the order of `all_words`.
std::vector<PauliWord> draw_in_order(const std::vector<PauliWord>& all_words, std::size_t m,
                                     const RandomSource& rng) {
  std::vector<PauliWord> drawn = draw_settings(all_words, m, rng);
  std::vector<std::size_t> index;
  index.reserve(m);
  for (const PauliWord& w : drawn) {
    index.push_back(static_cast<std::size_t>(
        std::find(all_words.begin(), all_words.end(), w) - all_words.begin()));
  }
  std::sort(index.begin(), index.end());
  std::vector<PauliWord> ordered;
  ordered.reserve(m);
  for (std::size_t i : index) ordered.push_back(all_words[i]);
  return ordered;
}

}  // namespace

BootstrapReport bootstrap_fidelity(const DensityMatrix& estimate, const SettingsPlan& plan,
                                   const DensityMatrix& target, const EpsilonRule& rule,
                                   std::size_t repetitions, const RandomSource& rng,
                                   const RunOptions& options, std::string target_label) {
  require(repetitions >= 2, "bootstrap_fidelity: repetitions must be >= 2");
  require(estimate.dim() == target.dim(), "bootstrap_fidelity: dimension mismatch");
  options.solver.validate();
  std::vector<Sample> samples(repetitions);
  parallel_for(repetitions, options.threads, [&](std::size_t r) {
    const Dataset data = sample_counts(estimate, plan, rng.child(r));
    const ReconstructionResult fit = reconstruct(data, rule.resolve(data), options.solver);
    Sample& s = samples[r];
    s.ok = true;
    if (fit.status == SolveStatus::kInfeasible) {
      s.infeasible = true;
    } else {
      s.fidelity = fidelity(target, *fit.estimate);
    }
  });

  BootstrapReport report;
  report.repetitions = repetitions;
  report.target_label = std::move(target_label);
  for (const Sample& s : samples) {
    report.fidelities.push_back(s.fidelity);
    if (s.infeasible) ++report.infeasible;
  }
  const Moments mo = moments(report.fidelities);
  report.fidelity_mean = mo.mean;
  report.fidelity_std = mo.std;
  return report;
}

const SweepCell& SweepReport::cell(std::size_t m, double multiplier) const {
  for (const SweepCell& c : cells) {
    if (c.m == m && c.epsilon_multiplier == multiplier) return c;
  }
  fail(ErrorCode::kNotFound, "sweep cell (m=" + std::to_string(m) + ", multiplier=" +
                                 std::to_string(multiplier) + ") not in report");
}

SweepReport sweep_settings(const Dataset& data, const std::vector<std::size_t>& m_values,
                           std::size_t draws_per_m, const DensityMatrix& target,
                           const RandomSource& rng, const SettingsSweepOptions& options) {
  require(!data.empty(), "sweep_settings: empty dataset");
  require(draws_per_m >= 1, "sweep_settings: draws_per_m must be >= 1");
  require(target.dim() == data.dim(), "sweep_settings: target dimension mismatch");
  for (std::size_t m : m_values) {
    require(m >= 1 && m <= data.size(), "sweep_settings: m = " + std::to_string(m) +
                                            " outside [1, " + std::to_string(data.size()) + "]");
  }
  options.solver.validate();

  SweepReport report;
  const ReconstructionResult full = reconstruct(data, epsilon_hat(data), options.solver);
  if (full.status == SolveStatus::kInfeasible) {
    fail(ErrorCode::kNumericalError, "sweep_settings: complete-data reconstruction is infeasible");
  }
  report.reference_fidelity = fidelity(target, *full.estimate);

  const std::vector<PauliWord> all_words = data.words();
  const std::size_t tasks = m_values.size() * draws_per_m;
  std::vector<Sample> samples(tasks);
  parallel_for(tasks, options.threads, [&](std::size_t task) {
    const std::size_t mi = task / draws_per_m;
    const std::size_t r = task % draws_per_m;
    const RandomSource stream = rng.child(mi).child(r);
    try {
      const Dataset subset =
          restrict_dataset(data, draw_in_order(all_words, m_values[mi], stream));
      samples[task] =
          score(DataFitProblem(subset), epsilon_hat(subset), target, options.solver);
    } catch (const Error& err) {
      samples[task].message = err.what();
    }
  });

  std::vector<std::optional<double>> bootstrap(m_values.size());
  if (options.bootstrap_repetitions > 0) {
    const SettingsPlan plan = data.plan();
    const std::size_t reps = options.bootstrap_repetitions;
    const RandomSource boot = rng.child(m_values.size());
    std::vector<Sample> boot_samples(m_values.size() * reps);
    parallel_for(boot_samples.size(), options.threads, [&](std::size_t task) {
      const std::size_t mi = task / reps;
      const RandomSource stream = boot.child(mi).child(task % reps);
      try {
        const Dataset sim = sample_counts(*full.estimate, plan, stream.child(0));
        const Dataset subset =
            restrict_dataset(sim, draw_in_order(all_words, m_values[mi], stream.child(1)));
        boot_samples[task] =
            score(DataFitProblem(subset), epsilon_hat(subset), target, options.solver);
      } catch (const Error& err) {
        boot_samples[task].message = err.what();
      }
    });
    for (std::size_t mi = 0; mi < m_values.size(); ++mi) {
      std::vector<double> values;
      for (std::size_t r = 0; r < reps; ++r) {
        const Sample& s = boot_samples[mi * reps + r];
        if (s.ok && !s.infeasible) values.push_back(s.fidelity);
      }
      if (!values.empty()) bootstrap[mi] = moments(values).std;
    }
  }

  for (std::size_t mi = 0; mi < m_values.size(); ++mi) {
    std::vector<const Sample*> cell_samples;
    for (std::size_t r = 0; r < draws_per_m; ++r) cell_samples.push_back(&samples[mi * draws_per_m + r]);
    SweepCell cell = summarize(m_values[mi], 1.0, cell_samples, false);
    cell.bootstrap_std = bootstrap[mi];
    report.cells.push_back(std::move(cell));
  }
  return report;
}

SweepReport sweep_grid(const DensityMatrix& generator, const SettingsPlan& plan_full,
                       const std::vector<std::size_t>& m_values,
                       const std::vector<double>& epsilon_multipliers, std::size_t repetitions,
                       const RandomSource& rng, const RunOptions& options) {
  require(repetitions >= 1, "sweep_grid: repetitions must be >= 1");
  require(!m_values.empty() && !epsilon_multipliers.empty(), "sweep_grid: empty grid");
  require(plan_full.dim() == generator.dim(), "sweep_grid: generator dimension mismatch");
  for (std::size_t m : m_values) {
    require(m >= 1 && m <= plan_full.size(), "sweep_grid: m = " + std::to_string(m) +
                                                 " outside [1, " +
                                                 std::to_string(plan_full.size()) + "]");
  }
  for (double mult : epsilon_multipliers) {
    require(std::isfinite(mult) && mult >= 0.0, "sweep_grid: multipliers must be >= 0");
  }
  options.solver.validate();

  const std::size_t n_mult = epsilon_multipliers.size();
  const std::size_t tasks = m_values.size() * repetitions;
  std::vector<Sample> samples(tasks * n_mult);  // [task * n_mult + e]
  parallel_for(tasks, options.threads, [&](std::size_t task) {
    const std::size_t mi = task / repetitions;
    const RandomSource stream = rng.child(mi).child(task % repetitions);
    try {
      const Dataset full = sample_counts(generator, plan_full, stream.child(0));
      const Dataset subset =
          restrict_dataset(full, draw_in_order(plan_full.words(), m_values[mi], stream.child(1)));
      const DataFitProblem problem(subset);
      const double base = epsilon_hat(subset);
      for (std::size_t e = 0; e < n_mult; ++e) {
        samples[task * n_mult + e] =
            score(problem, epsilon_multipliers[e] * base, generator, options.solver);
      }
    } catch (const Error& err) {
      for (std::size_t e = 0; e < n_mult; ++e) samples[task * n_mult + e].message = err.what();
    }
  });

  SweepReport report;
  report.reference_fidelity = 1.0;
  for (std::size_t mi = 0; mi < m_values.size(); ++mi) {
    for (std::size_t e = 0; e < n_mult; ++e) {
      std::vector<const Sample*> cell_samples;
      for (std::size_t r = 0; r < repetitions; ++r) {
        cell_samples.push_back(&samples[(mi * repetitions + r) * n_mult + e]);
      }
      report.cells.push_back(summarize(m_values[mi], epsilon_multipliers[e], cell_samples, true));
    }
  }
  return report;
}

}  // namespace cstomo
