#pragma once

#include <optional>
#include <string_view>

#include "cstomo/data.hpp"
#include "cstomo/quantum.hpp"

namespace cstomo {

struct SolverConfig {
  int max_iterations = 5000;
  /// Stopping threshold for the splitting iterations: primal residual and
  /// iterate change, Frobenius norm in trace-normalized units.
  double primal_tolerance = 1e-9;
  /// Allowed violation of the data ball in squared-count units; unset means
  /// 1e-6 * epsilon.
  std::optional<double> constraint_tolerance;
  /// Initial splitting step; adapted by residual balancing when enabled.
  double penalty_parameter = 1.0;
  bool adapt_penalty = true;
  /// Iteration budget of the feasibility pre-check.
  int feasibility_iterations = 20000;

  /// Throws invalid-argument unless every field is positive.
  void validate() const;
};

enum class SolveStatus { kConverged, kInfeasible, kIterationLimit };

std::string_view to_string(SolveStatus status);

struct ReconstructionResult {
  std::optional<DensityMatrix> estimate;  // renormalized chi / tr(chi); absent when infeasible
  double raw_trace = 0.0;                 // tr(chi) before renormalization
  double epsilon = 0.0;                   // squared-count units
  SolveStatus status = SolveStatus::kInfeasible;
  int iterations = 0;
  double residual = 0.0;                  // ||A(chi) - Y||_2^2 of the unnormalized optimizer
  double min_residual = 0.0;              // best residual found by the feasibility check
};

struct FeasibilityReport {
  bool feasible = false;
  /// Smallest ||A(chi) - Y||^2 found over PSD chi. When the search stops on
  /// a decision this is an upper bound on the true minimum.
  double min_residual = 0.0;
  /// Certified lower bound on the minimum residual.
  double lower_bound = 0.0;
  int iterations = 0;
  /// PSD matrix attaining min_residual.
  ComplexMatrix witness;
};

/// Precomputed geometry of the data-fit constraint for one dataset.
///
/// Works in normalized Pauli coordinates xi_l = tr(chi O_l) / sqrt(d), where
/// the Gram operator of the Pauli sensing map is diagonal: its entry for
/// label l is sum over settings covering l of N_j^2. Counts are scaled by
/// 1 / max N_j internally; every public quantity is in raw count units.
class DataFitProblem {
 public:
  explicit DataFitProblem(const Dataset& data);

  const Dataset& data() const { return data_; }
  int n_qubits() const { return data_.n_qubits(); }
  Eigen::Index dim() const { return data_.dim(); }

  /// ||A(chi) - Y||_2^2 in squared counts, exact through the dense map.
  double residual(const ComplexMatrix& chi) const;
  /// ||Y||_2^2.
  double data_norm_squared() const { return data_norm_sq_; }
  /// Part of ||Y||^2 outside the range of the sensing map; no chi can fit it.
  double unreachable_residual() const { return orth_residual_ / (scale_ * scale_); }

  // Scaled-coordinate internals shared by the solvers.
  double scale() const { return scale_; }
  const RealVector& gram() const { return gram_; }         // diagonal, scaled
  const RealVector& gram_sqrt() const { return gram_sqrt_; }
  const RealVector& projected_data() const { return projected_data_; }  // Lambda^{-1/2} V^T S^T y
  double scaled_orth_residual() const { return orth_residual_; }
  RealVector to_pauli(const ComplexMatrix& chi) const;
  ComplexMatrix from_pauli(const RealVector& xi) const;
  /// Scaled residual evaluated in Pauli coordinates.
  double scaled_residual(const RealVector& xi) const;

 private:
  Dataset data_;
  SettingsPlan plan_;
  RealMatrix sensing_;  // unscaled dense sensing map on to_coordinates
  RealVector counts_;   // row-major flattening of Y
  double data_norm_sq_ = 0.0;
  double scale_ = 1.0;
  RealVector gram_;
  RealVector gram_sqrt_;
  RealVector projected_data_;
  double orth_residual_ = 0.0;
};

/// Decide whether some PSD chi satisfies ||A(chi) - Y||^2 < epsilon, by
/// accelerated projected gradient on the residual with a duality-gap
/// certificate for infeasibility. Throws feasibility-undetermined when the
/// budget runs out before a decision.
FeasibilityReport check_feasible(const DataFitProblem& problem, double epsilon,
                                 const SolverConfig& config = {});
FeasibilityReport check_feasible(const Dataset& data, double epsilon,
                                 const SolverConfig& config = {});

/// Minimize tr(chi) over PSD chi with ||A(chi) - Y||^2 < epsilon, then
/// renormalize. Feasibility is checked first; an infeasible ball yields
/// status kInfeasible and no estimate. Throws degenerate-solution when the
/// zero matrix already fits (epsilon >= ||Y||^2) or the optimizer has
/// vanishing trace.
ReconstructionResult reconstruct(const DataFitProblem& problem, double epsilon,
                                 const SolverConfig& config = {});
ReconstructionResult reconstruct(const Dataset& data, double epsilon,
                                 const SolverConfig& config = {});

struct MleResult {
  DensityMatrix estimate;
  double log_likelihood = 0.0;
  int iterations = 0;
  bool converged = false;  // false: iteration limit hit, estimate is the last accepted iterate
};

/// Maximum-likelihood state by diluted R rho R iteration: each step applies
/// (1 + t (R - 1)) on both sides with t starting at 1 and halved whenever
/// the likelihood would decrease.
MleResult mle_estimate(const Dataset& data, int max_iterations = 20000, double tolerance = 1e-10);

}  // namespace cstomo
