#include "cstomo/data.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace cstomo {

std::int64_t CountRecord::shots() const {
  return std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
}

Dataset::Dataset(int n_qubits, std::vector<CountRecord> records)
    : n_qubits_(n_qubits), records_(std::move(records)) {
  require(n_qubits_ >= 1 && n_qubits_ < 16, "dataset: qubit count out of range");
  const auto d = static_cast<std::size_t>(dim());
  std::set<std::string> seen;
  for (const CountRecord& r : records_) {
    require(r.word.n_qubits() == n_qubits_,
            "dataset: word " + r.word.str() + " does not match qubit count");
    require(seen.insert(r.word.str()).second, "dataset: duplicate word " + r.word.str());
    require(r.counts.size() == d, "dataset: record " + r.word.str() + " has " +
                                      std::to_string(r.counts.size()) + " counts, expected " +
                                      std::to_string(d));
    for (std::int64_t c : r.counts) {
      require(c >= 0, "dataset: negative count in record " + r.word.str());
    }
    require(r.shots() >= 1, "dataset: record " + r.word.str() + " has no counts");
  }
}

std::vector<PauliWord> Dataset::words() const {
  std::vector<PauliWord> out;
  out.reserve(records_.size());
  for (const CountRecord& r : records_) out.push_back(r.word);
  return out;
}

SettingsPlan Dataset::plan() const {
  std::vector<std::int64_t> shots;
  shots.reserve(records_.size());
  for (const CountRecord& r : records_) shots.push_back(r.shots());
  return SettingsPlan(words(), std::move(shots));
}

RealMatrix Dataset::count_matrix() const {
  RealMatrix y(static_cast<Eigen::Index>(records_.size()), dim());
  for (std::size_t j = 0; j < records_.size(); ++j) {
    for (Eigen::Index k = 0; k < dim(); ++k) {
      y(static_cast<Eigen::Index>(j), k) = static_cast<double>(records_[j].counts[k]);
    }
  }
  return y;
}

std::optional<std::size_t> Dataset::find(const PauliWord& word) const {
  for (std::size_t j = 0; j < records_.size(); ++j) {
    if (records_[j].word == word) return j;
  }
  return std::nullopt;
}

bool operator==(const Dataset& a, const Dataset& b) {
  if (a.n_qubits_ != b.n_qubits_ || a.records_.size() != b.records_.size()) return false;
  for (std::size_t j = 0; j < a.records_.size(); ++j) {
    if (a.records_[j].word != b.records_[j].word) return false;
    if (a.records_[j].counts != b.records_[j].counts) return false;
  }
  return true;
}

namespace {

std::vector<std::int64_t> multinomial(std::int64_t n, const RealVector& p,
                                      std::mt19937_64& engine) {
  const auto d = static_cast<std::size_t>(p.size());
  std::vector<std::int64_t> counts(d, 0);
  std::int64_t remaining = n;
  double mass = 1.0;
  for (std::size_t k = 0; k + 1 < d && remaining > 0; ++k) {
    const double pk = p(static_cast<Eigen::Index>(k));
    if (mass <= 0.0) break;
    const double q = std::clamp(pk / mass, 0.0, 1.0);
    std::binomial_distribution<std::int64_t> binom(remaining, q);
    counts[k] = binom(engine);
    remaining -= counts[k];
    mass -= pk;
  }
  counts[d - 1] += remaining;
  return counts;
}

}  // namespace

Dataset sample_counts(const DensityMatrix& rho, const SettingsPlan& plan,
                      const RandomSource& rng) {
  require(plan.size() > 0, "sample_counts: empty plan");
  require(plan.dim() == rho.dim(), "sample_counts: state dimension does not match plan");
  std::mt19937_64 engine = rng.engine();
  std::vector<CountRecord> records;
  records.reserve(plan.size());
  for (std::size_t j = 0; j < plan.size(); ++j) {
    const RealVector p = born_probabilities(rho, plan.words()[j]);
    records.push_back({plan.words()[j], multinomial(plan.shots()[j], p, engine)});
  }
  return Dataset(rho.n_qubits(), std::move(records));
}

Dataset expected_counts(const DensityMatrix& rho, const SettingsPlan& plan) {
  require(plan.size() > 0, "expected_counts: empty plan");
  require(plan.dim() == rho.dim(), "expected_counts: state dimension does not match plan");
  std::vector<CountRecord> records;
  records.reserve(plan.size());
  for (std::size_t j = 0; j < plan.size(); ++j) {
    const RealVector p = born_probabilities(rho, plan.words()[j]);
    const auto n = plan.shots()[j];
    const auto d = static_cast<std::size_t>(p.size());
    std::vector<std::int64_t> counts(d);
    std::vector<std::pair<double, std::size_t>> remainders(d);
    std::int64_t assigned = 0;
    for (std::size_t k = 0; k < d; ++k) {
      const double exact = static_cast<double>(n) * p(static_cast<Eigen::Index>(k));
      counts[k] = static_cast<std::int64_t>(std::floor(exact));
      assigned += counts[k];
      remainders[k] = {exact - static_cast<double>(counts[k]), k};
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t i = 0; assigned < n; ++i, ++assigned) ++counts[remainders[i % d].second];
    records.push_back({plan.words()[j], std::move(counts)});
  }
  return Dataset(rho.n_qubits(), std::move(records));
}

std::vector<PauliWord> draw_settings(const std::vector<PauliWord>& all_words, std::size_t m,
                                     const RandomSource& rng) {
  require(m >= 1 && m <= all_words.size(),
          "draw_settings: m = " + std::to_string(m) + " outside [1, " +
              std::to_string(all_words.size()) + "]");
  std::mt19937_64 engine = rng.engine();
  std::vector<PauliWord> pool = all_words;
  for (std::size_t i = 0; i < m; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
    std::swap(pool[i], pool[pick(engine)]);
  }
  pool.resize(m);
  return pool;
}

Dataset restrict_dataset(const Dataset& data, const std::vector<PauliWord>& words) {
  std::vector<CountRecord> records;
  records.reserve(words.size());
  for (const PauliWord& w : words) {
    const auto idx = data.find(w);
    if (!idx) fail(ErrorCode::kNotFound, "word " + w.str() + " not present in dataset");
    records.push_back(data[*idx]);
  }
  return Dataset(data.n_qubits(), std::move(records));
}

std::vector<Dataset> split_folds(const Dataset& data, std::size_t folds, const RandomSource& rng) {
  require(folds >= 2, "split_folds: need at least two folds");
  require(folds <= data.size(), "split_folds: " + std::to_string(folds) +
                                    " folds exceed " + std::to_string(data.size()) + " records");
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 engine = rng.engine();
  std::shuffle(order.begin(), order.end(), engine);

  const std::size_t base = data.size() / folds;
  const std::size_t extra = data.size() % folds;
  std::vector<Dataset> out;
  out.reserve(folds);
  std::size_t pos = 0;
  for (std::size_t q = 0; q < folds; ++q) {
    const std::size_t count = base + (q < extra ? 1 : 0);
    std::vector<CountRecord> records;
    records.reserve(count);
    for (std::size_t i = 0; i < count; ++i) records.push_back(data[order[pos++]]);
    out.emplace_back(data.n_qubits(), std::move(records));
  }
  return out;
}

Dataset concatenate(const Dataset& a, const Dataset& b) {
  require(a.n_qubits() == b.n_qubits(), "concatenate: qubit counts differ");
  std::vector<CountRecord> records = a.records();
  records.insert(records.end(), b.records().begin(), b.records().end());
  return Dataset(a.n_qubits(), std::move(records));
}

}  // namespace cstomo
