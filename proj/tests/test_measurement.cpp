#include "helpers.hpp"

#include <thread>

#include "cstomo/measurement.hpp"

using namespace cstomo;
using testutil::throws_code;

namespace {

std::vector<std::string> all_words_upto(int n_max) {
  std::vector<std::string> out;
  for (int n = 1; n <= n_max; ++n) {
    for (const PauliWord& w : enumerate_settings(n)) out.push_back(w.str());
  }
  return out;
}

double oracle_probability(const DensityMatrix& rho, const std::string& word, std::size_t k) {
  const ComplexVector v = testutil::product_vector(word, k);
  return (v.adjoint() * rho.matrix() * v)(0, 0).real();
}

}  // namespace

TEST_SUITE("measurement") {

TEST_CASE("pauli word validation") {
  CHECK(PauliWord("ZZXY").str() == "ZZXY");
  CHECK(throws_code([] { PauliWord w(""); }, ErrorCode::kInvalidArgument));
  CHECK(throws_code([] { PauliWord w("XIZ"); }, ErrorCode::kInvalidArgument));
  CHECK(throws_code([] { PauliWord w("xz"); }, ErrorCode::kInvalidArgument));
}

TEST_CASE("settings plan validation") {
  CHECK(throws_code([] { SettingsPlan p({PauliWord("XX"), PauliWord("XX")}, {1, 1}); },
                    ErrorCode::kInvalidArgument));
  CHECK(throws_code([] { SettingsPlan p({PauliWord("XX")}, {0}); }, ErrorCode::kInvalidArgument));
  CHECK(throws_code([] { SettingsPlan p({PauliWord("XX")}, {1, 2}); }, ErrorCode::kInvalidArgument));
  CHECK(throws_code([] { SettingsPlan p({PauliWord("XX"), PauliWord("X")}, {1, 1}); },
                    ErrorCode::kInvalidArgument));
}

TEST_CASE("ZZ projectors in computational order") {
  const ProjectorSet& set = eigenprojectors(PauliWord("ZZ"));
  REQUIRE(set.projectors.size() == 4);
  for (std::size_t k = 0; k < 4; ++k) {
    ComplexMatrix e = ComplexMatrix::Zero(4, 4);
    e(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = 1.0;
    CHECK((set.projectors[k] - e).norm() < 1e-15);
  }
}

TEST_CASE("single-qubit X projectors") {
  const ProjectorSet& set = eigenprojectors(PauliWord("X"));
  ComplexMatrix plus(2, 2), minus(2, 2);
  plus << 0.5, 0.5, 0.5, 0.5;
  minus << 0.5, -0.5, -0.5, 0.5;
  CHECK((set.projectors[0] - plus).norm() < 1e-15);
  CHECK((set.projectors[1] - minus).norm() < 1e-15);
}

TEST_CASE("projectors match explicit tensor products") {
  for (const std::string& w : all_words_upto(3)) {
    const ProjectorSet& set = eigenprojectors(PauliWord(w));
    for (std::size_t k = 0; k < set.projectors.size(); ++k) {
      const ComplexVector v = testutil::product_vector(w, k);
      CHECK((set.projectors[k] - v * v.adjoint()).norm() < 1e-12);
    }
  }
}

TEST_CASE("projectors are orthogonal, idempotent and complete") {
  for (const std::string& w : all_words_upto(3)) {
    const ProjectorSet& set = eigenprojectors(PauliWord(w));
    const Eigen::Index d = set.projectors[0].rows();
    ComplexMatrix sum = ComplexMatrix::Zero(d, d);
    for (std::size_t k = 0; k < set.projectors.size(); ++k) {
      const ComplexMatrix& p = set.projectors[k];
      sum += p;
      CHECK((p * p - p).norm() < 1e-10);
      CHECK((p - p.adjoint()).norm() < 1e-15);
      CHECK(std::abs(p.trace() - Complex(1.0, 0.0)) < 1e-12);
      for (std::size_t l = k + 1; l < set.projectors.size(); ++l) {
        CHECK((p * set.projectors[l]).norm() < 1e-10);
      }
    }
    CHECK((sum - ComplexMatrix::Identity(d, d)).norm() < 1e-10);
  }
}

TEST_CASE("projector cache is shared across threads") {
  const std::vector<PauliWord> words = enumerate_settings(4);
  std::vector<std::vector<const ProjectorSet*>> seen(4);
  std::vector<std::thread> pool;
  for (int t = 0; t < 4; ++t) {
    pool.emplace_back([&, t] {
      for (const PauliWord& w : words) seen[static_cast<std::size_t>(t)].push_back(&eigenprojectors(w));
    });
  }
  for (auto& th : pool) th.join();
  for (int t = 1; t < 4; ++t) CHECK(seen[static_cast<std::size_t>(t)] == seen[0]);
}

TEST_CASE("born probabilities examples") {
  const RealVector zz = born_probabilities(ghz_state(4), PauliWord("ZZZZ"));
  for (Eigen::Index k = 0; k < 16; ++k) {
    CHECK(zz(k) == doctest::Approx((k == 0 || k == 15) ? 0.5 : 0.0));
  }
  for (const std::string& w : {"XYZZ", "YYYY", "ZXZX"}) {
    const RealVector p = born_probabilities(DensityMatrix::maximally_mixed(4), PauliWord(w));
    CHECK((p.array() - 1.0 / 16.0).abs().maxCoeff() < 1e-14);
  }
  const RealVector xx = born_probabilities(ghz_state(4), PauliWord("XXXX"));
  for (std::size_t k = 0; k < 16; ++k) {
    const double oracle = oracle_probability(ghz_state(4), "XXXX", k);
    CHECK(xx(static_cast<Eigen::Index>(k)) == doctest::Approx(oracle).epsilon(1e-12));
    const bool even = __builtin_popcountll(k) % 2 == 0;
    CHECK(xx(static_cast<Eigen::Index>(k)) == doctest::Approx(even ? 0.125 : 0.0));
  }
  CHECK(throws_code([] { born_probabilities(ghz_state(3), PauliWord("ZZZZ")); },
                    ErrorCode::kInvalidArgument));
}

TEST_CASE("born probabilities are a distribution and match the oracle") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 20; ++t) {
    const DensityMatrix rho = random_state(3, 1 + t % 8, rng);
    for (const PauliWord& w : enumerate_settings(3)) {
      const RealVector p = born_probabilities(rho, w);
      CHECK(p.sum() == doctest::Approx(1.0).epsilon(1e-15));
      CHECK(p.minCoeff() >= 0.0);
      CHECK(p.maxCoeff() <= 1.0);
      for (std::size_t k = 0; k < 8; ++k) {
        CHECK(std::abs(p(static_cast<Eigen::Index>(k)) - oracle_probability(rho, w.str(), k)) < 1e-12);
      }
    }
  }
}

TEST_CASE("apply_sensing examples") {
  const SettingsPlan plan = SettingsPlan::uniform(enumerate_settings(2), 100);
  const RealMatrix mixed = apply_sensing(DensityMatrix::maximally_mixed(2).as_hermitian(), plan);
  CHECK((mixed.array() - 25.0).abs().maxCoeff() < 1e-12);

  const SettingsPlan full = SettingsPlan::uniform(enumerate_settings(4), 650);
  const RealMatrix y = apply_sensing(ghz_state(4).as_hermitian(), full);
  const auto it = std::find(full.words().begin(), full.words().end(), PauliWord("ZZZZ"));
  const Eigen::Index row = it - full.words().begin();
  for (std::size_t k = 0; k < 16; ++k) {
    const double oracle = 650.0 * oracle_probability(ghz_state(4), "ZZZZ", k);
    CHECK(y(row, static_cast<Eigen::Index>(k)) == doctest::Approx(oracle).epsilon(1e-12));
  }
  CHECK(y(row, 0) == doctest::Approx(325.0));
  CHECK(y(row, 15) == doctest::Approx(325.0));
  CHECK(throws_code([&] { apply_sensing(ghz_state(3).as_hermitian(), plan); },
                    ErrorCode::kInvalidArgument));
}

TEST_CASE("apply_sensing is linear") {
  std::mt19937_64 rng(22);
  const SettingsPlan plan(enumerate_settings(2), {1, 2, 3, 4, 5, 6, 7, 8, 9});
  for (int t = 0; t < 20; ++t) {
    const HermitianMatrix a(testutil::random_hermitian(4, rng));
    const HermitianMatrix b(testutil::random_hermitian(4, rng));
    const double alpha = 0.7, beta = -1.3;
    const RealMatrix lhs = apply_sensing(alpha * a + beta * b, plan);
    const RealMatrix rhs = alpha * apply_sensing(a, plan) + beta * apply_sensing(b, plan);
    CHECK((lhs - rhs).norm() < 1e-10 * (1.0 + rhs.norm()));
  }
}

TEST_CASE("adjoint identity") {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> g;
  const SettingsPlan plan(enumerate_settings(2), {3, 1, 4, 1, 5, 9, 2, 6, 5});
  for (int t = 0; t < 100; ++t) {
    const HermitianMatrix rho(testutil::random_hermitian(4, rng));
    RealMatrix y(9, 4);
    for (Eigen::Index i = 0; i < y.size(); ++i) y.data()[i] = g(rng);
    const double lhs = (apply_sensing(rho, plan).array() * y.array()).sum();
    const double rhs = (rho.matrix() * apply_sensing_adjoint(y, plan).matrix()).trace().real();
    CHECK(std::abs(lhs - rhs) < 1e-10 * (1.0 + std::abs(lhs)));
  }
}

TEST_CASE("adjoint examples") {
  const SettingsPlan plan = SettingsPlan::uniform(enumerate_settings(2), 10);
  CHECK(apply_sensing_adjoint(RealMatrix::Zero(9, 4), plan).matrix().norm() == 0.0);

  const SettingsPlan zz({PauliWord("ZZ")}, {1});
  RealMatrix y(1, 4);
  y << 1, 0, 0, 0;
  ComplexMatrix e = ComplexMatrix::Zero(4, 4);
  e(0, 0) = 1.0;
  CHECK((apply_sensing_adjoint(y, zz).matrix() - e).norm() < 1e-15);
  CHECK(throws_code([&] { apply_sensing_adjoint(RealMatrix::Zero(2, 4), zz); },
                    ErrorCode::kInvalidArgument));
}

TEST_CASE("enumerate settings") {
  CHECK(enumerate_settings(4).size() == 81);
  const auto one = enumerate_settings(1);
  REQUIRE(one.size() == 3);
  CHECK(one[0].str() == "X");
  CHECK(one[1].str() == "Y");
  CHECK(one[2].str() == "Z");
  const auto two = enumerate_settings(2);
  CHECK(two.size() == 9);
  CHECK(two.front().str() == "XX");
  CHECK(two.back().str() == "ZZ");
  CHECK(std::is_sorted(two.begin(), two.end()));
  CHECK(throws_code([] { enumerate_settings(0); }, ErrorCode::kInvalidArgument));
}

TEST_CASE("tomographic completeness at two qubits") {
  const SettingsPlan plan = SettingsPlan::uniform(enumerate_settings(2), 1);
  const RealMatrix a = sensing_matrix(plan);
  CHECK(a.rows() == 36);
  CHECK(a.cols() == 16);
  Eigen::FullPivLU<RealMatrix> lu(a);
  lu.setThreshold(1e-10);
  CHECK(lu.rank() == 16);

  // dropping any setting loses completeness
  const auto words = enumerate_settings(2);
  for (std::size_t drop = 0; drop < words.size(); ++drop) {
    std::vector<PauliWord> fewer;
    for (std::size_t j = 0; j < words.size(); ++j) {
      if (j != drop) fewer.push_back(words[j]);
    }
    Eigen::FullPivLU<RealMatrix> lu2(sensing_matrix(SettingsPlan::uniform(fewer, 1)));
    lu2.setThreshold(1e-10);
    CHECK(lu2.rank() < 16);
  }
}

TEST_CASE("least squares inversion of complete noiseless data") {
  std::mt19937_64 rng(24);
  const SettingsPlan plan = SettingsPlan::uniform(enumerate_settings(2), 1000);
  const RealMatrix a = sensing_matrix(plan);
  for (int t = 0; t < 20; ++t) {
    const DensityMatrix rho = random_state(2, 1 + t % 4, rng);
    const RealMatrix y = apply_sensing(rho.as_hermitian(), plan);
    RealVector flat(y.size());
    for (Eigen::Index j = 0; j < y.rows(); ++j) flat.segment(j * 4, 4) = y.row(j).transpose();
    const RealVector x = a.colPivHouseholderQr().solve(flat);
    CHECK((from_coordinates(x, 4) - rho.matrix()).norm() <= 1e-8);
  }
}

TEST_CASE("sensing matrix matches apply_sensing") {
  std::mt19937_64 rng(25);
  const SettingsPlan plan(enumerate_settings(2), {5, 4, 3, 2, 1, 2, 3, 4, 5});
  const HermitianMatrix h(testutil::random_hermitian(4, rng));
  const RealVector flat = sensing_matrix(plan) * to_coordinates(h.matrix());
  const RealMatrix y = apply_sensing(h, plan);
  for (Eigen::Index j = 0; j < 9; ++j) {
    CHECK((flat.segment(j * 4, 4) - y.row(j).transpose()).norm() < 1e-12);
  }
}

TEST_CASE("pauli labels, operators and outcome signs") {
  CHECK(pauli_label(0, 2) == "II");
  CHECK(pauli_label(15, 2) == "ZZ");
  CHECK(pauli_label(6, 2) == "XY");
  const auto labels = pauli_labels(3);
  CHECK(labels.size() == 64);
  for (const std::string& l : labels) {
    CHECK((pauli_operator(l) - testutil::pauli_product(l)).norm() < 1e-15);
  }
  for (const PauliWord& w : enumerate_settings(2)) {
    const ProjectorSet& set = eigenprojectors(w);
    for (const std::string& l : pauli_labels(2)) {
      bool covered = true;
      for (std::size_t q = 0; q < 2; ++q) covered = covered && (l[q] == 'I' || l[q] == w[q]);
      CHECK(label_covered_by(l, w) == covered);
      if (!covered) continue;
      ComplexMatrix sum = ComplexMatrix::Zero(4, 4);
      for (std::size_t k = 0; k < 4; ++k) sum += static_cast<double>(outcome_sign(l, k)) * set.projectors[k];
      CHECK((sum - testutil::pauli_product(l)).norm() < 1e-12);
    }
  }
}

TEST_CASE("pauli basis is orthogonal") {
  const RealMatrix& v = pauli_basis(3);
  CHECK((v.transpose() * v - RealMatrix::Identity(64, 64)).norm() < 1e-12);
}

}  // TEST_SUITE
