#pragma once

#include <doctest.h>

#include <algorithm>
#include <functional>
#include <random>
#include <string>

#include "cstomo/errors.hpp"
#include "cstomo/quantum.hpp"

namespace testutil {

using cstomo::Complex;
using cstomo::ComplexMatrix;
using cstomo::ComplexVector;

inline bool throws_code(const std::function<void()>& fn, cstomo::ErrorCode code) {
  try {
    fn();
  } catch (const cstomo::Error& e) {
    return e.code() == code;
  }
  return false;
}

inline ComplexMatrix pauli2(char c) {
  const Complex i(0.0, 1.0);
  ComplexMatrix m(2, 2);
  switch (c) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, -i, i, 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// Tensor product of explicit 2x2 Pauli matrices, first letter leftmost.
inline ComplexMatrix pauli_product(const std::string& label) {
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (char c : label) out = kron(out, pauli2(c));
  return out;
}

/// Single-qubit eigenvector of X, Y or Z for sign bit (0 -> +1, 1 -> -1).
inline ComplexVector eigvec(char c, int bit) {
  const double r = 1.0 / std::sqrt(2.0);
  const Complex i(0.0, 1.0);
  ComplexVector v(2);
  if (c == 'Z') {
    v << (bit ? 0.0 : 1.0), (bit ? 1.0 : 0.0);
  } else if (c == 'X') {
    v << r, (bit ? -r : r);
  } else {
    v << r, (bit ? -i * r : i * r);
  }
  return v;
}

inline ComplexVector product_vector(const std::string& word, std::size_t k) {
  const std::size_t n = word.size();
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (std::size_t q = 0; q < n; ++q) {
    const int bit = static_cast<int>((k >> (n - 1 - q)) & 1);
    out = kron(out, eigvec(word[q], bit));
  }
  return out.col(0);
}

inline ComplexMatrix random_hermitian(Eigen::Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexMatrix a(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) a(i, j) = Complex(g(rng), g(rng));
  }
  return (a + a.adjoint()) / 2.0;
}

inline ComplexMatrix random_psd(Eigen::Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::uniform_int_distribution<int> rank_dist(1, static_cast<int>(d));
  const int rank = rank_dist(rng);
  ComplexMatrix a(d, rank);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < rank; ++j) a(i, j) = Complex(g(rng), g(rng));
  }
  return a * a.adjoint() / static_cast<double>(d);
}

inline double surrogate_lambda() { return 1.0 - 1.0 / std::sqrt(5.0); }

}  // namespace testutil
