#include "cstomo/measurement.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <shared_mutex>

namespace cstomo {

PauliWord::PauliWord(std::string letters) : letters_(std::move(letters)) {
  require(!letters_.empty(), "Pauli word must not be empty");
  require(letters_.size() < 16, "Pauli word too long: " + letters_);
  for (char c : letters_) {
    require(c == 'X' || c == 'Y' || c == 'Z',
            "invalid Pauli word '" + letters_ + "': letters must be X, Y or Z");
  }
}

SettingsPlan::SettingsPlan(std::vector<PauliWord> words, std::vector<std::int64_t> shots)
    : words_(std::move(words)), shots_(std::move(shots)) {
  require(!words_.empty(), "settings plan must contain at least one word");
  require(words_.size() == shots_.size(), "settings plan: words and shots differ in length");
  std::set<std::string> seen;
  for (std::size_t j = 0; j < words_.size(); ++j) {
    require(words_[j].n_qubits() == words_.front().n_qubits(),
            "settings plan: words have different lengths");
    require(seen.insert(words_[j].str()).second,
            "settings plan: duplicate word " + words_[j].str());
    require(shots_[j] >= 1, "settings plan: shots must be >= 1");
  }
}

SettingsPlan SettingsPlan::uniform(std::vector<PauliWord> words, std::int64_t shots) {
  std::vector<std::int64_t> all(words.size(), shots);
  return SettingsPlan(std::move(words), std::move(all));
}

namespace {

ComplexVector single_qubit_eigenvector(char letter, int bit) {
  const double h = 1.0 / std::sqrt(2.0);
  const double sign = bit == 0 ? 1.0 : -1.0;
  ComplexVector v(2);
  switch (letter) {
    case 'Z':
      v << Complex(bit == 0 ? 1.0 : 0.0), Complex(bit == 0 ? 0.0 : 1.0);
      break;
    case 'X':
      v << Complex(h), Complex(sign * h);
      break;
    default:  // 'Y'
      v << Complex(h), Complex(0.0, sign * h);
      break;
  }
  return v;
}

std::unique_ptr<ProjectorSet> build_projectors(const PauliWord& word) {
  const int n = word.n_qubits();
  const Eigen::Index d = word.dim();
  auto set = std::make_unique<ProjectorSet>();
  set->word = word;
  set->vectors.reserve(d);
  set->projectors.reserve(d);
  set->coordinates.resize(d, d * d);
  for (Eigen::Index k = 0; k < d; ++k) {
    ComplexVector v = ComplexVector::Ones(1);
    for (int q = 0; q < n; ++q) {
      const int bit = static_cast<int>((k >> (n - 1 - q)) & 1);
      const ComplexVector e = single_qubit_eigenvector(word[q], bit);
      ComplexVector next(v.size() * 2);
      for (Eigen::Index a = 0; a < v.size(); ++a) {
        next(2 * a) = v(a) * e(0);
        next(2 * a + 1) = v(a) * e(1);
      }
      v = std::move(next);
    }
    ComplexMatrix p = v * v.adjoint();
    set->coordinates.row(k) = to_coordinates(p).transpose();
    set->vectors.push_back(std::move(v));
    set->projectors.push_back(std::move(p));
  }
  return set;
}

struct ProjectorCache {
  std::shared_mutex mutex;
  std::map<std::string, std::unique_ptr<ProjectorSet>> entries;
};

ProjectorCache& cache() {
  static ProjectorCache instance;
  return instance;
}

void require_plan_dim(const SettingsPlan& plan, Eigen::Index dim) {
  require(plan.size() > 0, "settings plan is empty");
  require(plan.dim() == dim, "dimension mismatch: plan acts on " + std::to_string(plan.dim()) +
                                 " but matrix has dimension " + std::to_string(dim));
}

}  // namespace

const ProjectorSet& eigenprojectors(const PauliWord& word) {
  require(word.n_qubits() >= 1, "empty Pauli word");
  ProjectorCache& c = cache();
  {
    std::shared_lock lock(c.mutex);
    auto it = c.entries.find(word.str());
    if (it != c.entries.end()) return *it->second;
  }
  auto built = build_projectors(word);
  std::unique_lock lock(c.mutex);
  auto [it, inserted] = c.entries.try_emplace(word.str(), std::move(built));
  return *it->second;
}

RealVector born_probabilities(const DensityMatrix& rho, const PauliWord& word,
                              const Tolerances& tol) {
  require(rho.dim() == word.dim(), "born_probabilities: state dimension " +
                                       std::to_string(rho.dim()) + " does not match word " +
                                       word.str());
  const ProjectorSet& set = eigenprojectors(word);
  const Eigen::Index d = word.dim();
  RealVector p(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    const ComplexVector& v = set.vectors[k];
    p(k) = (v.adjoint() * rho.matrix() * v)(0, 0).real();
    if (p(k) < -tol.probability) {
      fail(ErrorCode::kNumericalError,
           "negative Born probability " + std::to_string(p(k)) + " for " + word.str());
    }
    if (p(k) < 0.0) p(k) = 0.0;
  }
  const double total = p.sum();
  if (std::abs(total - 1.0) > tol.probability_sum) {
    fail(ErrorCode::kNumericalError, "Born probabilities sum to " + std::to_string(total));
  }
  return p / total;
}

RealMatrix apply_sensing(const HermitianMatrix& rho, const SettingsPlan& plan) {
  require_plan_dim(plan, rho.dim());
  const Eigen::Index d = rho.dim();
  const RealVector x = to_coordinates(rho.matrix());
  RealMatrix out(static_cast<Eigen::Index>(plan.size()), d);
  for (std::size_t j = 0; j < plan.size(); ++j) {
    const ProjectorSet& set = eigenprojectors(plan.words()[j]);
    out.row(static_cast<Eigen::Index>(j)) =
        (static_cast<double>(plan.shots()[j]) * (set.coordinates * x)).transpose();
  }
  return out;
}

HermitianMatrix apply_sensing_adjoint(const RealMatrix& data, const SettingsPlan& plan) {
  require(plan.size() > 0, "settings plan is empty");
  const Eigen::Index d = plan.dim();
  require(data.rows() == static_cast<Eigen::Index>(plan.size()) && data.cols() == d,
          "apply_sensing_adjoint: data shape does not match plan");
  RealVector x = RealVector::Zero(d * d);
  for (std::size_t j = 0; j < plan.size(); ++j) {
    const ProjectorSet& set = eigenprojectors(plan.words()[j]);
    x += static_cast<double>(plan.shots()[j]) *
         (set.coordinates.transpose() * data.row(static_cast<Eigen::Index>(j)).transpose());
  }
  return HermitianMatrix(from_coordinates(x, d));
}

RealMatrix sensing_matrix(const SettingsPlan& plan) {
  require(plan.size() > 0, "settings plan is empty");
  const Eigen::Index d = plan.dim();
  RealMatrix s(static_cast<Eigen::Index>(plan.size()) * d, d * d);
  for (std::size_t j = 0; j < plan.size(); ++j) {
    const ProjectorSet& set = eigenprojectors(plan.words()[j]);
    s.middleRows(static_cast<Eigen::Index>(j) * d, d) =
        static_cast<double>(plan.shots()[j]) * set.coordinates;
  }
  return s;
}

std::vector<PauliWord> enumerate_settings(int n_qubits) {
  require(n_qubits >= 1, "qubit count must be >= 1");
  require(n_qubits < 16, "qubit count too large");
  static constexpr char kLetters[] = {'X', 'Y', 'Z'};
  std::size_t total = 1;
  for (int i = 0; i < n_qubits; ++i) total *= 3;
  std::vector<PauliWord> words;
  words.reserve(total);
  std::string letters(static_cast<std::size_t>(n_qubits), 'X');
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    for (int q = n_qubits - 1; q >= 0; --q) {
      letters[static_cast<std::size_t>(q)] = kLetters[rest % 3];
      rest /= 3;
    }
    words.emplace_back(letters);
  }
  return words;
}

std::string pauli_label(std::size_t index, int n_qubits) {
  static constexpr char kLetters[] = {'I', 'X', 'Y', 'Z'};
  std::string label(static_cast<std::size_t>(n_qubits), 'I');
  for (int q = n_qubits - 1; q >= 0; --q) {
    label[static_cast<std::size_t>(q)] = kLetters[index % 4];
    index /= 4;
  }
  return label;
}

std::vector<std::string> pauli_labels(int n_qubits) {
  require(n_qubits >= 1 && n_qubits < 8, "pauli_labels: qubit count out of range");
  const std::size_t total = std::size_t{1} << (2 * n_qubits);
  std::vector<std::string> out;
  out.reserve(total);
  for (std::size_t l = 0; l < total; ++l) out.push_back(pauli_label(l, n_qubits));
  return out;
}

ComplexMatrix pauli_operator(std::string_view label) {
  require(!label.empty(), "empty Pauli label");
  ComplexMatrix op = ComplexMatrix::Ones(1, 1);
  for (char c : label) {
    ComplexMatrix s(2, 2);
    switch (c) {
      case 'I': s << 1, 0, 0, 1; break;
      case 'X': s << 0, 1, 1, 0; break;
      case 'Y': s << 0, Complex(0, -1), Complex(0, 1), 0; break;
      case 'Z': s << 1, 0, 0, -1; break;
      default: fail(ErrorCode::kInvalidArgument, "invalid Pauli label " + std::string(label));
    }
    ComplexMatrix next(op.rows() * 2, op.cols() * 2);
    for (Eigen::Index r = 0; r < op.rows(); ++r) {
      for (Eigen::Index c2 = 0; c2 < op.cols(); ++c2) {
        next.block(2 * r, 2 * c2, 2, 2) = op(r, c2) * s;
      }
    }
    op = std::move(next);
  }
  return op;
}

bool label_covered_by(std::string_view label, const PauliWord& word) {
  if (static_cast<int>(label.size()) != word.n_qubits()) return false;
  for (std::size_t q = 0; q < label.size(); ++q) {
    if (label[q] != 'I' && label[q] != word[q]) return false;
  }
  return true;
}

int outcome_sign(std::string_view label, std::size_t k) {
  const std::size_t n = label.size();
  int parity = 0;
  for (std::size_t q = 0; q < n; ++q) {
    if (label[q] != 'I') parity ^= static_cast<int>((k >> (n - 1 - q)) & 1);
  }
  return parity ? -1 : 1;
}

const RealMatrix& pauli_basis(int n_qubits) {
  require(n_qubits >= 1 && n_qubits < 8, "pauli_basis: qubit count out of range");
  static std::shared_mutex mutex;
  static std::map<int, std::unique_ptr<RealMatrix>> entries;
  {
    std::shared_lock lock(mutex);
    auto it = entries.find(n_qubits);
    if (it != entries.end()) return *it->second;
  }
  const Eigen::Index d = Eigen::Index{1} << n_qubits;
  auto basis = std::make_unique<RealMatrix>(d * d, d * d);
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  for (Eigen::Index l = 0; l < d * d; ++l) {
    basis->col(l) =
        to_coordinates(norm * pauli_operator(pauli_label(static_cast<std::size_t>(l), n_qubits)));
  }
  std::unique_lock lock(mutex);
  auto [it, inserted] = entries.try_emplace(n_qubits, std::move(basis));
  return *it->second;
}

}  // namespace cstomo
