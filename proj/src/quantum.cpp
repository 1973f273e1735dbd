#include "cstomo/quantum.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include <Eigen/SVD>

namespace cstomo {

namespace {

void require_square_power_of_two(const ComplexMatrix& m) {
  require(m.rows() == m.cols(), "matrix must be square");
  require(m.rows() >= 2 && std::has_single_bit(static_cast<std::size_t>(m.rows())),
          "dimension must be a power of two, got " + std::to_string(m.rows()));
}

double hermitian_defect(const ComplexMatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace

int qubits_for_dim(Eigen::Index dim) {
  return std::countr_zero(static_cast<std::size_t>(dim));
}

HermitianMatrix::HermitianMatrix(ComplexMatrix entries, const Tolerances& tol) {
  require_square_power_of_two(entries);
  const double defect = hermitian_defect(entries);
  require(defect <= tol.hermitian,
          "matrix is not Hermitian (defect " + std::to_string(defect) + ")");
  entries_ = 0.5 * (entries + entries.adjoint());
}

HermitianMatrix HermitianMatrix::zero(Eigen::Index dim) {
  return HermitianMatrix(ComplexMatrix::Zero(dim, dim));
}

HermitianMatrix HermitianMatrix::identity(Eigen::Index dim) {
  return HermitianMatrix(ComplexMatrix::Identity(dim, dim));
}

HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b) {
  require(a.dim() == b.dim(), "dimension mismatch");
  return HermitianMatrix(a.entries_ + b.entries_, HermitianMatrix::Unchecked{});
}

HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b) {
  require(a.dim() == b.dim(), "dimension mismatch");
  return HermitianMatrix(a.entries_ - b.entries_, HermitianMatrix::Unchecked{});
}

HermitianMatrix operator*(double s, const HermitianMatrix& a) {
  return HermitianMatrix(s * a.entries_, HermitianMatrix::Unchecked{});
}

DensityMatrix::DensityMatrix(ComplexMatrix entries, const Tolerances& tol) {
  if (entries.rows() != entries.cols() || entries.rows() < 2 ||
      !std::has_single_bit(static_cast<std::size_t>(entries.rows()))) {
    fail(ErrorCode::kInvalidState, "density matrix must be 2^n x 2^n");
  }
  const double defect = hermitian_defect(entries);
  if (defect > tol.hermitian) {
    fail(ErrorCode::kInvalidState,
         "density matrix is not Hermitian (defect " + std::to_string(defect) + ")");
  }
  entries_ = 0.5 * (entries + entries.adjoint());
  const double tr = entries_.diagonal().real().sum();
  if (std::abs(tr - 1.0) > tol.trace) {
    fail(ErrorCode::kInvalidState,
         "density matrix trace is " + std::to_string(tr) + ", expected 1");
  }
  const double min_eig = eigh(entries_).values(0);
  if (min_eig < -tol.psd) {
    fail(ErrorCode::kInvalidState,
         "density matrix is not PSD (min eigenvalue " + std::to_string(min_eig) + ")");
  }
}

DensityMatrix DensityMatrix::pure(const ComplexVector& psi) {
  const double norm = psi.norm();
  require(norm > 0.0, "state vector must be nonzero");
  const ComplexVector v = psi / norm;
  return DensityMatrix(v * v.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(int n_qubits) {
  require(n_qubits >= 1, "qubit count must be >= 1");
  const Eigen::Index d = Eigen::Index{1} << n_qubits;
  return DensityMatrix(ComplexMatrix::Identity(d, d) / static_cast<double>(d));
}

HermitianEigen eigh(const ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  if (solver.info() != Eigen::Success) {
    fail(ErrorCode::kNumericalError, "Hermitian eigendecomposition failed");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

DensityMatrix ghz_state(int n_qubits) {
  return dephased_ghz(n_qubits, 0.0);
}

DensityMatrix dephased_ghz(int n_qubits, double lambda) {
  require(n_qubits >= 1, "qubit count must be >= 1");
  require(n_qubits < 16, "qubit count too large for dense matrices");
  require(lambda >= 0.0 && lambda <= 1.0, "dephasing strength must lie in [0, 1]");
  const Eigen::Index d = Eigen::Index{1} << n_qubits;
  ComplexMatrix rho = ComplexMatrix::Zero(d, d);
  rho(0, 0) = 0.5;
  rho(d - 1, d - 1) = 0.5;
  rho(0, d - 1) = 0.5 * (1.0 - lambda);
  rho(d - 1, 0) = 0.5 * (1.0 - lambda);
  return DensityMatrix(std::move(rho));
}

double fidelity(const DensityMatrix& a, const DensityMatrix& b, const Tolerances& tol) {
  require(a.dim() == b.dim(), "fidelity: dimension mismatch");
  // F = || sqrt(a) sqrt(b) ||_1, which avoids square roots of tiny eigenvalues
  auto psd_sqrt = [](const ComplexMatrix& m) {
    const HermitianEigen e = eigh(m);
    const RealVector roots = e.values.cwiseMax(0.0).cwiseSqrt();
    return ComplexMatrix(e.vectors * roots.asDiagonal() * e.vectors.adjoint());
  };
  const ComplexMatrix product = psd_sqrt(a.matrix()) * psd_sqrt(b.matrix());
  const double f = Eigen::JacobiSVD<ComplexMatrix>(product).singularValues().sum();
  if (!std::isfinite(f) || f > 1.0 + tol.fidelity) {
    fail(ErrorCode::kNumericalError, "fidelity out of range: " + std::to_string(f));
  }
  return std::clamp(f, 0.0, 1.0);
}

double purity(const DensityMatrix& rho) {
  // tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
  return rho.matrix().squaredNorm();
}

ComplexMatrix project_psd(const ComplexMatrix& h) {
  const HermitianEigen e = eigh(h);
  const RealVector clipped = e.values.cwiseMax(0.0);
  ComplexMatrix out = e.vectors * clipped.asDiagonal() * e.vectors.adjoint();
  return 0.5 * (out + out.adjoint());
}

HermitianMatrix project_psd(const HermitianMatrix& h) {
  return HermitianMatrix(project_psd(h.matrix()));
}

RealVector to_coordinates(const ComplexMatrix& h) {
  const Eigen::Index d = h.rows();
  RealVector x(d * d);
  for (Eigen::Index i = 0; i < d; ++i) x(i) = h(i, i).real();
  Eigen::Index pos = d;
  const double s = std::sqrt(2.0);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      x(pos++) = s * h(i, j).real();
      x(pos++) = s * h(i, j).imag();
    }
  }
  return x;
}

ComplexMatrix from_coordinates(const RealVector& x, Eigen::Index dim) {
  require(x.size() == dim * dim, "coordinate vector has wrong length");
  ComplexMatrix h(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) h(i, i) = Complex(x(i), 0.0);
  Eigen::Index pos = dim;
  const double s = 1.0 / std::sqrt(2.0);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = i + 1; j < dim; ++j) {
      const Complex v(s * x(pos), s * x(pos + 1));
      pos += 2;
      h(i, j) = v;
      h(j, i) = std::conj(v);
    }
  }
  return h;
}

DensityMatrix random_pure_state(int n_qubits, std::mt19937_64& engine) {
  return random_state(n_qubits, 1, engine);
}

DensityMatrix random_state(int n_qubits, int rank, std::mt19937_64& engine) {
  require(n_qubits >= 1, "qubit count must be >= 1");
  const Eigen::Index d = Eigen::Index{1} << n_qubits;
  require(rank >= 1 && rank <= d, "rank must lie in [1, d]");
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix g(d, rank);
  for (Eigen::Index c = 0; c < rank; ++c) {
    for (Eigen::Index r = 0; r < d; ++r) g(r, c) = Complex(gauss(engine), gauss(engine));
  }
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(std::move(rho));
}

}  // namespace cstomo
