// cs-tomo: simulate Pauli count data, reconstruct states and run the
// model-selection and fidelity studies from the command line.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "cstomo/analysis.hpp"
#include "cstomo/dfe.hpp"
#include "cstomo/io.hpp"
#include "cstomo/model_selection.hpp"
#include "cstomo/parallel.hpp"
#include "cstomo/solver.hpp"

using namespace cstomo;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitInternal = 3;

// Stream ids under the root seed, one per command.
enum Stream : std::uint64_t {
  kSimulate = 1,
  kCrossval = 2,
  kBootstrap = 3,
  kSweepM = 4,
  kSweepGrid = 5,
  kRandomState = 6,
};

struct Globals {
  std::uint64_t seed = 0;
  std::string output;
  std::string format = "json";
  int threads = 1;
  int max_iterations = SolverConfig{}.max_iterations;
  double tolerance = SolverConfig{}.primal_tolerance;

  SolverConfig solver() const {
    SolverConfig c;
    c.max_iterations = max_iterations;
    c.primal_tolerance = tolerance;
    return c;
  }
};

struct StateSpec {
  std::string kind = "ghz";  // ghz, mixed, random, file
  int n = 4;
  double dephase = 0.0;
  int rank = 1;
  std::string file;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--state", kind, "ghz | mixed | random | file")
        ->check(CLI::IsMember({"ghz", "mixed", "random", "file"}));
    cmd->add_option("--n", n, "number of qubits")->check(CLI::Range(1, 6));
    cmd->add_option("--dephase", dephase, "GHZ coherence damping lambda")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--rank", rank, "rank of a random state")->check(CLI::PositiveNumber);
    cmd->add_option("--state-file", file, "density matrix JSON for --state file");
  }

  DensityMatrix build(std::uint64_t seed) const {
    if (kind == "ghz") return dephased_ghz(n, dephase);
    if (kind == "mixed") return DensityMatrix::maximally_mixed(n);
    if (kind == "random") {
      auto engine = RandomSource(seed, kRandomState).engine();
      return random_state(n, rank, engine);
    }
    require(!file.empty(), "--state file needs --state-file");
    return density_matrix_from_json(read_json_file(file));
  }
};

struct TargetSpec {
  std::string value = "ghz";

  void add_to(CLI::App* cmd) {
    cmd->add_option("--target", value, "ghz, or a density matrix JSON file");
  }

  DensityMatrix build(int n_qubits) const {
    if (value == "ghz") return ghz_state(n_qubits);
    return density_matrix_from_json(read_json_file(value));
  }
};

void emit(const Globals& g, const std::string& text) {
  if (g.output.empty()) {
    std::cout << text;
  } else {
    write_file(g.output, text);
  }
}

template <typename Report>
void emit_report(const Globals& g, const Report& report) {
  emit(g, g.format == "csv" ? to_csv(report) : dump(to_json(report)));
}

void json_only(const Globals& g, const char* command) {
  require(g.format == "json", std::string(command) + " writes JSON only");
}

std::vector<PauliWord> parse_settings(const std::string& spec, int n, std::uint64_t seed) {
  const std::vector<PauliWord> all = enumerate_settings(n);
  if (spec == "all") return all;
  if (spec.find_first_not_of("0123456789") == std::string::npos) {
    const std::size_t m = std::stoul(spec);
    require(m >= 1 && m <= all.size(), "--settings count outside [1, 3^n]");
    return draw_settings(all, m, RandomSource(seed, kSimulate).child(1));
  }
  std::vector<PauliWord> words;
  std::size_t start = 0;
  while (start <= spec.size()) {
    const std::size_t end = std::min(spec.find(',', start), spec.size());
    words.emplace_back(spec.substr(start, end - start));
    require(words.back().n_qubits() == n, "setting " + words.back().str() + " does not match --n");
    start = end + 1;
  }
  return words;
}

DensityMatrix fit_dataset(const Dataset& data, double multiplier, const SolverConfig& config) {
  const ReconstructionResult fit = reconstruct(data, multiplier * epsilon_hat(data), config);
  if (fit.status == SolveStatus::kInfeasible) {
    fail(ErrorCode::kNumericalError, "reconstruction of the input dataset is infeasible");
  }
  return *fit.estimate;
}

int exit_code(const Error& e) {
  switch (e.code()) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kInvalidState:
    case ErrorCode::kNotFound:
    case ErrorCode::kUnsupported:
    case ErrorCode::kMissingSetting:
      return kExitInvalid;
    default:
      return kExitInternal;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compressed-sensing quantum state tomography"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  g.threads = default_thread_count();
  app.add_option("--seed", g.seed, "root random seed");
  app.add_option("--output,-o", g.output, "output file (default stdout)");
  app.add_option("--format", g.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--threads", g.threads, "worker threads (default CS_TOMO_THREADS or 1)")
      ->check(CLI::Range(1, 1024));
  app.add_option("--max-iterations", g.max_iterations, "solver iteration budget")
      ->check(CLI::PositiveNumber);
  app.add_option("--tolerance", g.tolerance, "solver stopping tolerance")
      ->check(CLI::PositiveNumber);

  std::string data_path;
  TargetSpec target;
  double multiplier = 1.0;
  std::vector<std::size_t> m_values;
  std::vector<double> multipliers = kDefaultMultipliers;

  // simulate
  auto* simulate = app.add_subcommand("simulate", "simulate a count dataset");
  StateSpec state;
  std::int64_t shots = 650;
  std::string settings = "all";
  bool noiseless = false;
  state.add_to(simulate);
  simulate->add_option("--shots", shots, "events per setting")->check(CLI::PositiveNumber);
  simulate->add_option("--settings", settings, "all, a count to draw, or a comma list of words");
  simulate->add_flag("--noiseless", noiseless, "expected counts instead of multinomial draws");

  // reconstruct
  auto* recon = app.add_subcommand("reconstruct", "trace-minimization reconstruction");
  std::optional<double> epsilon;
  bool auto_epsilon = false;
  bool with_mle = false;
  recon->add_option("--data", data_path, "dataset JSON")->required();
  auto* eps_opt = recon->add_option("--epsilon", epsilon, "data-fit radius in squared counts");
  auto* auto_opt =
      recon->add_flag("--auto-epsilon", auto_epsilon, "use multiplier * epsilon_hat of the data");
  eps_opt->excludes(auto_opt);
  recon->add_option("--multiplier", multiplier, "epsilon_hat multiplier for --auto-epsilon")
      ->check(CLI::NonNegativeNumber);
  std::string recon_target;
  recon->add_option("--target", recon_target, "report fidelity against ghz or a JSON state");
  recon->add_flag("--mle", with_mle, "also report the maximum-likelihood estimate");

  // crossval
  auto* crossval = app.add_subcommand("crossval", "cross-validation over (m, multiplier)");
  CrossValOptions cv;
  crossval->add_option("--data", data_path, "dataset JSON")->required();
  crossval->add_option("--m", m_values, "settings counts (default 10 15 20 40 60 80)")->delimiter(',');
  crossval->add_option("--multipliers", multipliers, "epsilon_hat multipliers")->delimiter(',');
  crossval->add_option("--folds", cv.folds, "folds")->check(CLI::Range(2, 1000));
  crossval->add_option("--repetitions", cv.repetitions, "repetitions per m")
      ->check(CLI::PositiveNumber);

  // dfe
  auto* dfe = app.add_subcommand("dfe", "direct fidelity estimation");
  bool required_only = false;
  dfe->add_option("--data", data_path, "dataset JSON")->required();
  target.add_to(dfe);
  dfe->add_flag("--required-only", required_only, "use only the greedy covering settings");

  // bootstrap
  auto* boot = app.add_subcommand("bootstrap", "parametric bootstrap of the fidelity");
  std::size_t repetitions = 100;
  boot->add_option("--data", data_path, "dataset JSON; bootstraps its reconstruction")->required();
  target.add_to(boot);
  boot->add_option("--repetitions", repetitions, "bootstrap datasets")->check(CLI::Range(2, 1000000));
  boot->add_option("--multiplier", multiplier, "epsilon_hat multiplier")->check(CLI::NonNegativeNumber);

  // sweep-m
  auto* sweep_m = app.add_subcommand("sweep-m", "fidelity against the number of settings");
  std::size_t draws = kDefaultDrawsPerM;
  std::size_t boot_reps = 0;
  sweep_m->add_option("--data", data_path, "dataset JSON")->required();
  target.add_to(sweep_m);
  sweep_m->add_option("--m", m_values, "settings counts (default 1 .. records)")->delimiter(',');
  sweep_m->add_option("--draws", draws, "settings draws per m")->check(CLI::PositiveNumber);
  sweep_m->add_option("--bootstrap", boot_reps, "bootstrap datasets per m for bootstrap_std");

  // sweep-grid
  auto* sweep_g = app.add_subcommand("sweep-grid", "fidelity over the (m, multiplier) grid");
  std::size_t grid_reps = kDefaultGridRepetitions;
  StateSpec generator;
  std::int64_t grid_shots = 650;
  sweep_g->add_option("--data", data_path, "dataset JSON; its reconstruction is the generator");
  generator.add_to(sweep_g);
  sweep_g->add_option("--shots", grid_shots, "events per setting without --data")
      ->check(CLI::PositiveNumber);
  sweep_g->add_option("--m", m_values, "settings counts (default 6 10 20 40 81)")->delimiter(',');
  sweep_g->add_option("--multipliers", multipliers, "epsilon_hat multipliers")->delimiter(',');
  sweep_g->add_option("--repetitions", grid_reps, "datasets per cell")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kExitInvalid;
  }

  try {
    const SolverConfig solver = g.solver();

    if (*simulate) {
      const DensityMatrix rho = state.build(g.seed);
      const SettingsPlan plan =
          SettingsPlan::uniform(parse_settings(settings, rho.n_qubits(), g.seed), shots);
      const Dataset data = noiseless ? expected_counts(rho, plan)
                                     : sample_counts(rho, plan, RandomSource(g.seed, kSimulate));
      emit(g, g.format == "csv" ? to_csv(data) : dump(to_json(data)));
      return kExitOk;
    }

    const Dataset data =
        data_path.empty() ? Dataset{} : dataset_from_json(read_json_file(data_path));

    if (*recon) {
      json_only(g, "reconstruct");
      require(epsilon.has_value() || auto_epsilon, "reconstruct needs --epsilon or --auto-epsilon");
      const double eps = epsilon ? *epsilon : multiplier * epsilon_hat(data);
      const ReconstructionResult fit = reconstruct(data, eps, solver);
      Json out = to_json(fit);
      if (fit.estimate) {
        out["purity"] = purity(*fit.estimate);
        if (!recon_target.empty()) {
          out["fidelity"] = fidelity(TargetSpec{recon_target}.build(data.n_qubits()), *fit.estimate);
        }
      }
      if (with_mle) {
        const MleResult mle = mle_estimate(data);
        Json m{{"log_likelihood", mle.log_likelihood},
               {"iterations", mle.iterations},
               {"converged", mle.converged},
               {"purity", purity(mle.estimate)}};
        if (!recon_target.empty()) {
          m["fidelity"] = fidelity(TargetSpec{recon_target}.build(data.n_qubits()), mle.estimate);
        }
        m["estimate"] = to_json(mle.estimate);
        out["mle"] = std::move(m);
      }
      emit(g, dump(out));
      return fit.status == SolveStatus::kInfeasible ? kExitInfeasible : kExitOk;
    }

    if (*crossval) {
      if (m_values.empty()) {
        for (std::size_t m : kDefaultCrossValM) {
          if (m <= data.size()) m_values.push_back(m);
        }
      }
      cv.threads = g.threads;
      cv.solver = solver;
      emit_report(g, cross_validate(data, m_values, multipliers, RandomSource(g.seed, kCrossval), cv));
      return kExitOk;
    }

    if (*dfe) {
      json_only(g, "dfe");
      const PauliCoefficients coeffs = pauli_decomposition(target.build(data.n_qubits()));
      DirectFidelityOptions options;
      if (required_only) options.settings = required_settings(coeffs);
      emit(g, dump(to_json(direct_fidelity(data, coeffs, options))));
      return kExitOk;
    }

    if (*boot) {
      const DensityMatrix estimate = fit_dataset(data, multiplier, solver);
      EpsilonRule rule;
      rule.multiplier = multiplier;
      const BootstrapReport report =
          bootstrap_fidelity(estimate, data.plan(), target.build(data.n_qubits()), rule, repetitions,
                             RandomSource(g.seed, kBootstrap), RunOptions{g.threads, solver},
                             target.value);
      emit_report(g, report);
      return kExitOk;
    }

    if (*sweep_m) {
      if (m_values.empty()) {
        for (std::size_t m = 1; m <= data.size(); ++m) m_values.push_back(m);
      }
      SettingsSweepOptions options;
      options.threads = g.threads;
      options.solver = solver;
      options.bootstrap_repetitions = boot_reps;
      emit_report(g, sweep_settings(data, m_values, draws, target.build(data.n_qubits()),
                                    RandomSource(g.seed, kSweepM), options));
      return kExitOk;
    }

    if (*sweep_g) {
      std::optional<DensityMatrix> gen;
      SettingsPlan plan;
      if (!data.empty()) {
        gen = fit_dataset(data, 1.0, solver);
        plan = data.plan();
      } else {
        gen = generator.build(g.seed);
        plan = SettingsPlan::uniform(enumerate_settings(gen->n_qubits()), grid_shots);
      }
      if (m_values.empty()) {
        for (std::size_t m : {6, 10, 20, 40, 81}) {
          if (m <= plan.size()) m_values.push_back(m);
        }
      }
      emit_report(g, sweep_grid(*gen, plan, m_values, multipliers, grid_reps,
                                RandomSource(g.seed, kSweepGrid), RunOptions{g.threads, solver}));
      return kExitOk;
    }
  } catch (const Error& e) {
    std::cerr << "cs-tomo: " << to_string(e.code()) << ": " << e.what() << "\n";
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "cs-tomo: internal: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInvalid;
}
