#pragma once

#include <complex>
#include <cstddef>
#include <random>

#include <Eigen/Dense>

#include "cstomo/errors.hpp"

namespace cstomo {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Number of qubits for a dimension that must be a power of two.
int qubits_for_dim(Eigen::Index dim);

/// Hermitian d x d matrix with d a power of two. No trace or positivity
/// requirement; this holds solver iterates and sensing adjoints.
class HermitianMatrix {
 public:
  /// Validates Hermiticity to tol.hermitian and stores the exact Hermitian
  /// part. Throws invalid-argument on shape or symmetry violations.
  explicit HermitianMatrix(ComplexMatrix entries,
                           const Tolerances& tol = default_tolerances());

  static HermitianMatrix zero(Eigen::Index dim);
  static HermitianMatrix identity(Eigen::Index dim);

  Eigen::Index dim() const { return entries_.rows(); }
  int n_qubits() const { return qubits_for_dim(dim()); }
  const ComplexMatrix& matrix() const { return entries_; }
  Complex operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }
  double trace() const { return entries_.diagonal().real().sum(); }

  friend HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b);
  friend HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b);
  friend HermitianMatrix operator*(double s, const HermitianMatrix& a);

 private:
  struct Unchecked {};
  HermitianMatrix(ComplexMatrix entries, Unchecked) : entries_(std::move(entries)) {}

  ComplexMatrix entries_;
};

/// Quantum state: Hermitian, positive semidefinite, unit trace.
class DensityMatrix {
 public:
  /// Throws invalid-state if any invariant fails at the given tolerances.
  explicit DensityMatrix(ComplexMatrix entries,
                         const Tolerances& tol = default_tolerances());

  /// Projector onto the normalized vector psi.
  static DensityMatrix pure(const ComplexVector& psi);
  static DensityMatrix maximally_mixed(int n_qubits);

  Eigen::Index dim() const { return entries_.rows(); }
  int n_qubits() const { return qubits_for_dim(dim()); }
  const ComplexMatrix& matrix() const { return entries_; }
  Complex operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }

  HermitianMatrix as_hermitian() const { return HermitianMatrix(entries_); }

 private:
  ComplexMatrix entries_;
};

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
struct HermitianEigen {
  RealVector values;
  ComplexMatrix vectors;
};

HermitianEigen eigh(const ComplexMatrix& h);

DensityMatrix ghz_state(int n_qubits);

/// GHZ state whose two coherence entries are damped by (1 - lambda).
DensityMatrix dephased_ghz(int n_qubits, double lambda);

/// Uhlmann fidelity tr sqrt(sqrt(a) b sqrt(a)), clipped to [0, 1].
double fidelity(const DensityMatrix& a, const DensityMatrix& b,
                const Tolerances& tol = default_tolerances());

double purity(const DensityMatrix& rho);

/// Nearest positive semidefinite matrix in Frobenius norm.
HermitianMatrix project_psd(const HermitianMatrix& h);

/// Raw-matrix variant used inside iterative solvers.
ComplexMatrix project_psd(const ComplexMatrix& h);

/// Real coordinates of a Hermitian matrix in an orthonormal basis of the
/// Hermitian space: the d diagonal entries, then sqrt(2) Re h_ij and
/// sqrt(2) Im h_ij for i < j (row-major). The Frobenius inner product of two
/// matrices equals the dot product of their coordinates.
RealVector to_coordinates(const ComplexMatrix& h);
ComplexMatrix from_coordinates(const RealVector& x, Eigen::Index dim);

/// Haar-random pure state.
DensityMatrix random_pure_state(int n_qubits, std::mt19937_64& engine);

/// Random state of the given rank: Ginibre d x rank factor G, rho = G G^dag / tr.
DensityMatrix random_state(int n_qubits, int rank, std::mt19937_64& engine);

}  // namespace cstomo
