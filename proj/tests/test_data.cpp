#include "helpers.hpp"

#include <map>
#include <set>

#include "cstomo/data.hpp"

using namespace cstomo;
using testutil::throws_code;

namespace {

std::set<std::string> word_set(const Dataset& d) {
  std::set<std::string> out;
  for (const CountRecord& r : d.records()) out.insert(r.word.str());
  return out;
}

}  // namespace

TEST_SUITE("data") {

TEST_CASE("random source determinism and independence") {
  const RandomSource a(42, 3);
  auto e1 = a.engine();
  auto e2 = RandomSource(42, 3).engine();
  for (int i = 0; i < 100; ++i) CHECK(e1() == e2());
  CHECK(RandomSource(42, 3).engine()() != RandomSource(42, 4).engine()());
  CHECK(a.child(0).engine()() != a.child(1).engine()());
  CHECK(a.child(5).engine()() == RandomSource(42, 3).child(5).engine()());
  CHECK(a.child(0).child(0).engine()() != a.child(0).engine()());
}

TEST_CASE("dataset validation") {
  CHECK(throws_code([] { Dataset d(1, {{PauliWord("X"), {1, 1}}, {PauliWord("X"), {2, 0}}}); },
                    ErrorCode::kInvalidArgument));
  CHECK(throws_code([] { Dataset d(1, {{PauliWord("X"), {1, 1, 1}}}); }, ErrorCode::kInvalidArgument));
  CHECK(throws_code([] { Dataset d(1, {{PauliWord("X"), {-1, 3}}}); }, ErrorCode::kInvalidArgument));
  CHECK(throws_code([] { Dataset d(1, {{PauliWord("X"), {0, 0}}}); }, ErrorCode::kInvalidArgument));
  CHECK(throws_code([] { Dataset d(2, {{PauliWord("X"), {1, 1}}}); }, ErrorCode::kInvalidArgument));
}

TEST_CASE("sampled rows sum to the shot count") {
  std::mt19937_64 rng(31);
  const DensityMatrix rho = random_state(3, 2, rng);
  std::vector<std::int64_t> shots;
  for (int j = 0; j < 27; ++j) shots.push_back(1 + 37 * j);
  const SettingsPlan plan(enumerate_settings(3), shots);
  const Dataset data = sample_counts(rho, plan, RandomSource(1, 1));
  REQUIRE(data.size() == 27);
  for (std::size_t j = 0; j < 27; ++j) {
    CHECK(data[j].word == plan.words()[j]);
    CHECK(data[j].shots() == shots[j]);
  }
}

TEST_CASE("degenerate distribution gives deterministic counts") {
  const SettingsPlan plan({PauliWord("ZZZZ")}, {650});
  ComplexVector psi = ComplexVector::Zero(16);
  psi(0) = 1.0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Dataset d = sample_counts(DensityMatrix::pure(psi), plan, RandomSource(s, 0));
    CHECK(d[0].counts[0] == 650);
    for (std::size_t k = 1; k < 16; ++k) CHECK(d[0].counts[k] == 0);
  }
}

TEST_CASE("multinomial mean for GHZ ZZZZ") {
  const SettingsPlan plan({PauliWord("ZZZZ")}, {650});
  const int reps = 10000;
  double sum = 0.0;
  const RandomSource root(7, 1);
  for (int r = 0; r < reps; ++r) {
    sum += static_cast<double>(sample_counts(ghz_state(4), plan, root.child(static_cast<std::uint64_t>(r)))[0].counts[0]);
  }
  const double mean = sum / reps;
  const double se = std::sqrt(650.0 * 0.5 * 0.5 / reps);
  CHECK(std::abs(mean - 325.0) < 5.0 * se);
}

TEST_CASE("chi-squared goodness of fit at one qubit") {
  std::mt19937_64 rng(32);
  const DensityMatrix rho = random_state(1, 2, rng);
  // 10^4 draws per setting; df = 3 (one per setting), 0.999 quantile 16.266
  const std::int64_t n = 10000;
  const SettingsPlan plan = SettingsPlan::uniform(enumerate_settings(1), n);
  const Dataset data = sample_counts(rho, plan, RandomSource(3, 3));
  double chi2 = 0.0;
  for (std::size_t j = 0; j < 3; ++j) {
    for (std::size_t k = 0; k < 2; ++k) {
      const ComplexVector v = testutil::product_vector(plan.words()[j].str(), k);
      const double expected = static_cast<double>(n) * (v.adjoint() * rho.matrix() * v)(0, 0).real();
      const double diff = static_cast<double>(data[j].counts[k]) - expected;
      chi2 += diff * diff / expected;
    }
  }
  CHECK(chi2 < 16.266);
}

TEST_CASE("multinomial covariance at two qubits") {
  std::mt19937_64 rng(33);
  const DensityMatrix rho = random_state(2, 2, rng);
  const PauliWord word("XY");
  const std::int64_t n = 50;
  const SettingsPlan plan({word}, {n});
  const RealVector p = born_probabilities(rho, word);
  const int reps = 10000;
  std::vector<RealVector> samples;
  const RandomSource root(8, 2);
  for (int r = 0; r < reps; ++r) {
    const Dataset d = sample_counts(rho, plan, root.child(static_cast<std::uint64_t>(r)));
    RealVector y(4);
    for (int k = 0; k < 4; ++k) y(k) = static_cast<double>(d[0].counts[static_cast<std::size_t>(k)]);
    samples.push_back(y);
  }
  const RealVector mu = p * static_cast<double>(n);
  for (int k = 0; k < 4; ++k) {
    for (int l = 0; l < 4; ++l) {
      const double exact = static_cast<double>(n) * ((k == l ? p(k) : 0.0) - p(k) * p(l));
      double mean = 0.0, sq = 0.0;
      for (const RealVector& y : samples) {
        const double prod = (y(k) - mu(k)) * (y(l) - mu(l));
        mean += prod;
        sq += prod * prod;
      }
      mean /= reps;
      const double se = std::sqrt(std::max(sq / reps - mean * mean, 1e-12) / reps);
      CHECK(std::abs(mean - exact) < 5.0 * se);
    }
  }
}

TEST_CASE("sampling is reproducible") {
  const SettingsPlan plan = SettingsPlan::uniform(enumerate_settings(4), 650);
  const DensityMatrix rho = dephased_ghz(4, 0.37);
  CHECK(sample_counts(rho, plan, RandomSource(7, 1)) == sample_counts(rho, plan, RandomSource(7, 1)));
  CHECK(!(sample_counts(rho, plan, RandomSource(7, 1)) == sample_counts(rho, plan, RandomSource(7, 2))));
}

TEST_CASE("expected counts") {
  std::mt19937_64 rng(34);
  const DensityMatrix rho = random_state(2, 3, rng);
  const SettingsPlan plan(enumerate_settings(2), {7, 8, 9, 10, 11, 12, 13, 14, 650});
  const Dataset d = expected_counts(rho, plan);
  for (std::size_t j = 0; j < plan.size(); ++j) {
    CHECK(d[j].shots() == plan.shots()[j]);
    const RealVector p = born_probabilities(rho, plan.words()[j]);
    for (std::size_t k = 0; k < 4; ++k) {
      CHECK(std::abs(static_cast<double>(d[j].counts[k]) -
                     static_cast<double>(plan.shots()[j]) * p(static_cast<Eigen::Index>(k))) < 1.0);
    }
  }
}

TEST_CASE("draw settings") {
  const auto words = enumerate_settings(4);
  const auto all = draw_settings(words, 81, RandomSource(1, 0));
  CHECK(std::is_permutation(all.begin(), all.end(), words.begin()));
  for (std::size_t m : {1, 5, 40, 80}) {
    const auto drawn = draw_settings(words, m, RandomSource(m, 0));
    CHECK(drawn.size() == m);
    CHECK(std::set<PauliWord>(drawn.begin(), drawn.end()).size() == m);
  }
  CHECK(throws_code([&] { draw_settings(words, 0, RandomSource(1, 0)); }, ErrorCode::kInvalidArgument));
  CHECK(throws_code([&] { draw_settings(words, 82, RandomSource(1, 0)); }, ErrorCode::kInvalidArgument));
}

TEST_CASE("single draws are uniform") {
  const auto words = enumerate_settings(4);
  std::map<PauliWord, int> freq;
  const int trials = 100000;
  const RandomSource root(9, 9);
  for (int t = 0; t < trials; ++t) {
    ++freq[draw_settings(words, 1, root.child(static_cast<std::uint64_t>(t)))[0]];
  }
  const double p = 1.0 / 81.0;
  const double sigma = std::sqrt(trials * p * (1.0 - p));
  CHECK(freq.size() == 81);
  for (const auto& [w, f] : freq) CHECK(std::abs(f - trials * p) < 3.0 * sigma);
}

TEST_CASE("restrict dataset") {
  const SettingsPlan plan = SettingsPlan::uniform(enumerate_settings(2), 100);
  const Dataset data = sample_counts(ghz_state(2), plan, RandomSource(5, 5));
  CHECK(restrict_dataset(data, data.words()) == data);
  const Dataset one = restrict_dataset(data, {PauliWord("XY")});
  REQUIRE(one.size() == 1);
  CHECK(one[0].word.str() == "XY");
  CHECK(one[0].counts == data[*data.find(PauliWord("XY"))].counts);

  const std::vector<PauliWord> sub = {PauliWord("ZZ"), PauliWord("XX"), PauliWord("YZ")};
  const std::vector<PauliWord> subsub = {PauliWord("YZ"), PauliWord("ZZ")};
  CHECK(restrict_dataset(restrict_dataset(data, sub), subsub) == restrict_dataset(data, subsub));
  CHECK(restrict_dataset(data, sub).words() == sub);

  try {
    restrict_dataset(one, {PauliWord("ZZ")});
    FAIL("expected not-found");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNotFound);
    CHECK(std::string(e.what()).find("ZZ") != std::string::npos);
  }
}

TEST_CASE("split folds") {
  const SettingsPlan plan = SettingsPlan::uniform(enumerate_settings(3), 10);
  const Dataset data = sample_counts(DensityMatrix::maximally_mixed(3), plan, RandomSource(6, 6));
  const Dataset ten = restrict_dataset(data, draw_settings(data.words(), 10, RandomSource(1, 1)));
  const auto folds = split_folds(ten, 5, RandomSource(2, 2));
  REQUIRE(folds.size() == 5);
  std::set<std::string> seen;
  for (const Dataset& f : folds) {
    CHECK(f.size() == 2);
    for (const std::string& w : word_set(f)) CHECK(seen.insert(w).second);
  }
  CHECK(seen == word_set(ten));

  const Dataset twelve = restrict_dataset(data, draw_settings(data.words(), 12, RandomSource(3, 3)));
  std::vector<std::size_t> sizes;
  for (const Dataset& f : split_folds(twelve, 5, RandomSource(4, 4))) sizes.push_back(f.size());
  CHECK(sizes == std::vector<std::size_t>{3, 3, 2, 2, 2});

  CHECK(throws_code([&] { split_folds(ten, 11, RandomSource(1, 1)); }, ErrorCode::kInvalidArgument));
  CHECK(throws_code([&] { split_folds(ten, 1, RandomSource(1, 1)); }, ErrorCode::kInvalidArgument));
  CHECK(word_set(split_folds(ten, 5, RandomSource(2, 2))[0]) == word_set(folds[0]));
}

TEST_CASE("concatenate") {
  const Dataset a(1, {{PauliWord("X"), {3, 4}}});
  const Dataset b(1, {{PauliWord("Z"), {5, 0}}});
  const Dataset ab = concatenate(a, b);
  CHECK(ab.size() == 2);
  CHECK(ab[1].counts == std::vector<std::int64_t>{5, 0});
  CHECK(throws_code([&] { concatenate(a, a); }, ErrorCode::kInvalidArgument));
}

}  // TEST_SUITE
