#include "cstomo/model_selection.hpp"

#include <cmath>
#include <set>

#include "cstomo/parallel.hpp"

namespace cstomo {

double epsilon_hat(const Dataset& data) {
  require(!data.empty(), "epsilon_hat: empty dataset");
  double total = 0.0;
  for (const CountRecord& r : data.records()) {
    const double n = static_cast<double>(r.shots());
    for (std::int64_t c : r.counts) {
      const double y = static_cast<double>(c);
      total += y * (1.0 - y / n);
    }
  }
  return total;
}

double expected_noise(const DensityMatrix& rho, const SettingsPlan& plan) {
  require(plan.size() > 0, "expected_noise: empty plan");
  require(plan.dim() == rho.dim(), "expected_noise: state dimension does not match plan");
  double total = 0.0;
  for (std::size_t j = 0; j < plan.size(); ++j) {
    const RealVector p = born_probabilities(rho, plan.words()[j]);
    total += static_cast<double>(plan.shots()[j]) * (p.array() * (1.0 - p.array())).sum();
  }
  return total;
}

PredictionOutcome prediction_error(const Dataset& train, const Dataset& test,
                                   double epsilon_train, const SolverConfig& config) {
  require(train.n_qubits() == test.n_qubits(), "prediction_error: qubit counts differ");
  require(!test.empty(), "prediction_error: empty test set");
  std::set<std::string> train_words;
  for (const CountRecord& r : train.records()) train_words.insert(r.word.str());
  for (const CountRecord& r : test.records()) {
    require(!train_words.count(r.word.str()),
            "prediction_error: word " + r.word.str() + " appears in train and test");
  }

  PredictionOutcome out;
  const RealMatrix y_test = test.count_matrix();
  ReconstructionResult fit = reconstruct(train, epsilon_train, config);
  if (fit.status == SolveStatus::kInfeasible) {
    out.infeasible = true;
    out.error = y_test.norm();
    return out;
  }
  const RealMatrix predicted = apply_sensing(fit.estimate->as_hermitian(), test.plan());
  out.error = (predicted - y_test).norm();
  out.estimate = std::move(fit.estimate);
  return out;
}

const CrossValCell& CrossValReport::cell(std::size_t m, double multiplier) const {
  for (const CrossValCell& c : grid) {
    if (c.m == m && c.epsilon_multiplier == multiplier) return c;
  }
  fail(ErrorCode::kNotFound, "cross-validation cell (m=" + std::to_string(m) + ", multiplier=" +
                                 std::to_string(multiplier) + ") not in report");
}

namespace {

struct FoldScore {
  double error = 0.0;
  bool infeasible = false;
  bool ok = false;
  std::string message;
};

double sample_std(const std::vector<double>& values, double mean) {
  if (values.size() < 2) return 0.0;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

}  // namespace

CrossValReport cross_validate(const Dataset& data, const std::vector<std::size_t>& m_values,
                              const std::vector<double>& epsilon_multipliers,
                              const RandomSource& rng, const CrossValOptions& options) {
  require(!data.empty(), "cross_validate: empty dataset");
  require(!m_values.empty() && !epsilon_multipliers.empty(), "cross_validate: empty grid");
  require(options.repetitions >= 1, "cross_validate: repetitions must be >= 1");
  require(options.folds >= 2, "cross_validate: folds must be >= 2");
  for (std::size_t m : m_values) {
    require(m >= options.folds && m <= data.size(),
            "cross_validate: m = " + std::to_string(m) + " must lie in [folds, records]");
  }
  for (double mult : epsilon_multipliers) {
    require(std::isfinite(mult) && mult >= 0.0, "cross_validate: multipliers must be >= 0");
  }
  options.solver.validate();

  const std::size_t n_mult = epsilon_multipliers.size();
  const std::size_t folds = options.folds;
  const std::size_t tasks = m_values.size() * options.repetitions;
  // scores[task][mult * folds + q]
  std::vector<std::vector<FoldScore>> scores(tasks);
  std::vector<std::vector<double>> floors(tasks);
  const std::vector<PauliWord> all_words = data.words();

  parallel_for(tasks, options.threads, [&](std::size_t task) {
    const std::size_t mi = task / options.repetitions;
    const std::size_t rep = task % options.repetitions;
    const RandomSource stream = rng.child(mi).child(rep);
    std::vector<FoldScore>& out = scores[task];
    out.assign(n_mult * folds, FoldScore{});
    floors[task].assign(folds, 0.0);

    const Dataset subset =
        restrict_dataset(data, draw_settings(all_words, m_values[mi], stream.child(0)));
    const std::vector<Dataset> parts = split_folds(subset, folds, stream.child(1));
    for (std::size_t q = 0; q < folds; ++q) {
      const Dataset& test = parts[q];
      floors[task][q] = std::sqrt(epsilon_hat(test));
      std::vector<CountRecord> train_records;
      for (std::size_t o = 0; o < folds; ++o) {
        if (o == q) continue;
        train_records.insert(train_records.end(), parts[o].records().begin(),
                             parts[o].records().end());
      }
      const Dataset train(data.n_qubits(), std::move(train_records));
      const double base = epsilon_hat(train);
      const RealMatrix y_test = test.count_matrix();
      const SettingsPlan test_plan = test.plan();
      const DataFitProblem problem(train);
      for (std::size_t e = 0; e < n_mult; ++e) {
        FoldScore& score = out[e * folds + q];
        try {
          const ReconstructionResult fit =
              reconstruct(problem, epsilon_multipliers[e] * base, options.solver);
          if (fit.status == SolveStatus::kInfeasible) {
            score.infeasible = true;
            score.error = y_test.norm();
          } else {
            score.error =
                (apply_sensing(fit.estimate->as_hermitian(), test_plan) - y_test).norm();
          }
          score.ok = true;
        } catch (const Error& err) {
          score.message = err.what();
        }
      }
    }
  });

  CrossValReport report;
  report.folds = folds;
  report.repetitions = options.repetitions;
  for (std::size_t mi = 0; mi < m_values.size(); ++mi) {
    double floor_sum = 0.0;
    for (std::size_t rep = 0; rep < options.repetitions; ++rep) {
      for (double f : floors[mi * options.repetitions + rep]) floor_sum += f;
    }
    for (std::size_t e = 0; e < n_mult; ++e) {
      CrossValCell cell;
      cell.m = m_values[mi];
      cell.epsilon_multiplier = epsilon_multipliers[e];
      cell.noise_floor = floor_sum / static_cast<double>(options.repetitions * folds);
      std::vector<double> errors;
      std::size_t infeasible = 0;
      for (std::size_t rep = 0; rep < options.repetitions; ++rep) {
        const auto& task_scores = scores[mi * options.repetitions + rep];
        for (std::size_t q = 0; q < folds; ++q) {
          const FoldScore& s = task_scores[e * folds + q];
          if (!s.ok) {
            if (cell.failures++ == 0) cell.status = s.message;
            continue;
          }
          errors.push_back(s.error);
          if (s.infeasible) ++infeasible;
        }
      }
      cell.evaluations = errors.size();
      if (!errors.empty()) {
        double sum = 0.0;
        for (double v : errors) sum += v;
        cell.mean_error = sum / static_cast<double>(errors.size());
        cell.std_error = sample_std(errors, cell.mean_error);
        cell.infeasible_fraction =
            static_cast<double>(infeasible) / static_cast<double>(errors.size());
      }
      report.grid.push_back(std::move(cell));
    }
  }
  return report;
}

}  // namespace cstomo
