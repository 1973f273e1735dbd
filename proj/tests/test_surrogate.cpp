// Surrogate-scale examples: four qubits, all 81 settings, 650 shots.

#include "helpers.hpp"

#include "cstomo/analysis.hpp"
#include "cstomo/model_selection.hpp"

using namespace cstomo;

namespace {

struct Surrogate {
  DensityMatrix state;
  SettingsPlan plan;
  Dataset data;
  DensityMatrix estimate;
};

const Surrogate& surrogate() {
  static const Surrogate s = [] {
    DensityMatrix state = dephased_ghz(4, testutil::surrogate_lambda());
    SettingsPlan plan = SettingsPlan::uniform(enumerate_settings(4), 650);
    Dataset data = sample_counts(state, plan, RandomSource(1, 1));
    DensityMatrix estimate = *reconstruct(data, epsilon_hat(data)).estimate;
    return Surrogate{state, plan, data, estimate};
  }();
  return s;
}

}  // namespace

TEST_SUITE("surrogate") {

TEST_CASE("epsilon hat matches the simulated GHZ residual") {
  const SettingsPlan plan = SettingsPlan::uniform(enumerate_settings(4), 650);
  const DensityMatrix ghz = ghz_state(4);
  const RealMatrix mean = apply_sensing(ghz.as_hermitian(), plan);
  const RandomSource root(11, 1);
  double eps = 0.0, residual = 0.0;
  for (std::uint64_t r = 0; r < 1000; ++r) {
    const Dataset d = sample_counts(ghz, plan, root.child(r));
    eps += epsilon_hat(d);
    residual += (d.count_matrix() - mean).squaredNorm();
  }
  CHECK(std::abs(eps - residual) / residual <= 0.02);
}

TEST_CASE("cross-validation spread is larger for fewer settings") {
  CrossValOptions options;
  options.repetitions = 10;
  const std::vector<double> mults = {0.75, 1.0, 1.5, 2.0};
  const CrossValReport report = cross_validate(surrogate().data, {10, 80}, mults, RandomSource(11, 2), options);
  auto best = [&](std::size_t m) {
    const CrossValCell* b = nullptr;
    for (double mult : mults) {
      const CrossValCell& c = report.cell(m, mult);
      if (!b || c.mean_error < b->mean_error) b = &c;
    }
    return *b;
  };
  CHECK(best(80).std_error < best(10).std_error);
}

TEST_CASE("bootstrap spread of the surrogate fidelity") {
  const Surrogate& s = surrogate();
  const BootstrapReport report =
      bootstrap_fidelity(s.estimate, s.plan, ghz_state(4), EpsilonRule{}, 100, RandomSource(11, 3));
  MESSAGE("bootstrap fidelity " << report.fidelity_mean << " +- " << report.fidelity_std);
  CHECK(report.fidelity_std <= 0.01);
}

TEST_CASE("settings sweep is nondecreasing up to two standard deviations") {
  const std::vector<std::size_t> ms = {3, 6, 10, 20, 40, 81};
  const SweepReport report = sweep_settings(surrogate().data, ms, 20, ghz_state(4), RandomSource(11, 4));
  for (std::size_t i = 0; i + 1 < ms.size(); ++i) {
    const SweepCell& a = report.cell(ms[i]);
    const SweepCell& b = report.cell(ms[i + 1]);
    INFO("m " << ms[i] << " -> " << ms[i + 1]);
    CHECK(b.fidelity_mean >= a.fidelity_mean - 2.0 * std::max(a.fidelity_std, b.fidelity_std));
  }
  CHECK(report.cell(81).fidelity_mean - report.cell(40).fidelity_mean <= 0.01);
}

TEST_CASE("grid fidelity approaches one at epsilon hat") {
  const Surrogate& s = surrogate();
  const SweepReport report = sweep_grid(s.estimate, s.plan, {40}, {1.0}, 20, RandomSource(11, 5));
  CHECK(report.cell(40, 1.0).fidelity_mean >= 0.98);
}

TEST_CASE("grid fidelity with six settings") {
  const Surrogate& s = surrogate();
  const SweepReport report = sweep_grid(s.estimate, s.plan, {6}, {1.0}, 100, RandomSource(11, 6));
  MESSAGE("m=6 fidelity " << report.cell(6, 1.0).fidelity_mean);
  CHECK(report.cell(6, 1.0).fidelity_mean > 0.8);
}

TEST_CASE("underestimated epsilon is partly infeasible with a larger spread") {
  const Surrogate& s = surrogate();
  const SweepReport report = sweep_grid(s.estimate, s.plan, {20}, {0.25, 1.0}, 50, RandomSource(11, 7));
  const SweepCell& low = report.cell(20, 0.25);
  const SweepCell& one = report.cell(20, 1.0);
  MESSAGE("x0.25 infeasible " << low.infeasible_fraction << " std " << low.fidelity_std << "; x1 std "
                              << one.fidelity_std);
  CHECK(low.infeasible_fraction > 0.0);
  CHECK(low.fidelity_std > one.fidelity_std);
}

}  // TEST_SUITE
