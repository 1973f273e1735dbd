#include "cstomo/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cstomo {

namespace {

// Strict "< epsilon" is enforced as "<= epsilon (1 - kStrictMargin)".
constexpr double kStrictMargin = 1e-9;
constexpr double kMinTrace = 1e-6;
// Relative duality gap at which the feasibility search stops without a
// clear decision and compares its best residual against epsilon.
constexpr double kFeasibilityGap = 1e-9;

ComplexMatrix identity_over_dim(Eigen::Index d) {
  return ComplexMatrix::Identity(d, d) / static_cast<double>(d);
}

}  // namespace

void SolverConfig::validate() const {
  require(max_iterations > 0, "solver: max_iterations must be positive");
  require(primal_tolerance > 0.0, "solver: primal_tolerance must be positive");
  require(!constraint_tolerance || *constraint_tolerance > 0.0,
          "solver: constraint_tolerance must be positive");
  require(penalty_parameter > 0.0, "solver: penalty_parameter must be positive");
  require(feasibility_iterations > 0, "solver: feasibility_iterations must be positive");
}

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kConverged: return "converged";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kIterationLimit: return "iteration_limit";
  }
  return "unknown";
}

DataFitProblem::DataFitProblem(const Dataset& data) : data_(data) {
  require(!data_.empty(), "reconstruction needs a nonempty dataset");
  plan_ = data_.plan();
  sensing_ = sensing_matrix(plan_);
  const RealMatrix y = data_.count_matrix();
  // Row-major flattening: entry j*d + k.
  counts_.resize(y.size());
  for (Eigen::Index j = 0; j < y.rows(); ++j) {
    for (Eigen::Index k = 0; k < y.cols(); ++k) counts_(j * y.cols() + k) = y(j, k);
  }
  data_norm_sq_ = counts_.squaredNorm();

  const std::int64_t max_shots =
      *std::max_element(plan_.shots().begin(), plan_.shots().end());
  scale_ = 1.0 / static_cast<double>(max_shots);

  const int n = data_.n_qubits();
  const Eigen::Index dd = dim() * dim();
  gram_ = RealVector::Zero(dd);
  for (Eigen::Index l = 0; l < dd; ++l) {
    const std::string label = pauli_label(static_cast<std::size_t>(l), n);
    for (std::size_t j = 0; j < plan_.size(); ++j) {
      if (label_covered_by(label, plan_.words()[j])) {
        const double ns = scale_ * static_cast<double>(plan_.shots()[j]);
        gram_(l) += ns * ns;
      }
    }
  }
  gram_sqrt_ = gram_.cwiseSqrt();

  const RealMatrix& basis = pauli_basis(n);
  const RealVector correlation =
      (scale_ * scale_) * (basis.transpose() * (sensing_.transpose() * counts_));
  projected_data_ = RealVector::Zero(dd);
  for (Eigen::Index l = 0; l < dd; ++l) {
    if (gram_(l) > 0.0) projected_data_(l) = correlation(l) / gram_sqrt_(l);
  }
  orth_residual_ =
      std::max(0.0, scale_ * scale_ * data_norm_sq_ - projected_data_.squaredNorm());
}

double DataFitProblem::residual(const ComplexMatrix& chi) const {
  require(chi.rows() == dim() && chi.cols() == dim(), "residual: dimension mismatch");
  return (sensing_ * to_coordinates(chi) - counts_).squaredNorm();
}

RealVector DataFitProblem::to_pauli(const ComplexMatrix& chi) const {
  return pauli_basis(n_qubits()).transpose() * to_coordinates(chi);
}

ComplexMatrix DataFitProblem::from_pauli(const RealVector& xi) const {
  return from_coordinates(pauli_basis(n_qubits()) * xi, dim());
}

double DataFitProblem::scaled_residual(const RealVector& xi) const {
  return orth_residual_ + (gram_sqrt_.cwiseProduct(xi) - projected_data_).squaredNorm();
}

FeasibilityReport check_feasible(const DataFitProblem& problem, double epsilon,
                                 const SolverConfig& config) {
  require(std::isfinite(epsilon) && epsilon >= 0.0, "check_feasible: epsilon must be >= 0");
  config.validate();
  const double s2 = problem.scale() * problem.scale();
  const double target = s2 * epsilon * (1.0 - kStrictMargin);
  const double orth = problem.scaled_orth_residual();
  const RealVector& g = problem.gram();
  const RealVector& gs = problem.gram_sqrt();
  const RealVector& pd = problem.projected_data();
  const double d = static_cast<double>(problem.dim());
  const double step = 1.0 / (2.0 * g.maxCoeff());
  const RealVector gs_pd = gs.cwiseProduct(pd);

  FeasibilityReport report;
  ComplexMatrix best_matrix = identity_over_dim(problem.dim());
  RealVector x = problem.to_pauli(best_matrix);
  double fx = problem.scaled_residual(x);
  double best = fx;
  double lower = orth;
  RealVector y = x;
  double momentum = 1.0;

  auto finish = [&](bool feasible, int iterations) {
    report.feasible = feasible;
    report.min_residual = best / s2;
    report.lower_bound = std::min(lower, best) / s2;
    report.iterations = iterations;
    report.witness = best_matrix;
    return report;
  };

  for (int it = 0; it <= config.feasibility_iterations; ++it) {
    if (best < target) return finish(true, it);

    if (it % 10 == 0) {
      // Frank-Wolfe bound over {PSD, tr <= T}; every minimizer lies in this
      // set because row sums of A(chi) pin the trace up to sqrt(d * residual).
      const RealVector grad = 2.0 * (g.cwiseProduct(x) - gs_pd);
      const double trace_bound = 1.0 + std::sqrt(d * best);
      const double min_eig = eigh(problem.from_pauli(grad)).values(0);
      const double bound = fx - grad.dot(x) + trace_bound * std::min(0.0, min_eig);
      lower = std::max(lower, bound);
      if (lower >= target) return finish(false, it);
      if (best - lower <= kFeasibilityGap * std::max(best, target)) {
        return finish(best < target, it);
      }
    }
    if (it == config.feasibility_iterations) break;

    const RealVector grad_y = 2.0 * (g.cwiseProduct(y) - gs_pd);
    const ComplexMatrix projected = project_psd(problem.from_pauli(y - step * grad_y));
    const RealVector x_next = problem.to_pauli(projected);
    const double f_next = problem.scaled_residual(x_next);
    if (f_next > fx) {
      // Adaptive restart.
      momentum = 1.0;
      y = x_next;
    } else {
      const double next_momentum = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
      y = x_next + ((momentum - 1.0) / next_momentum) * (x_next - x);
      momentum = next_momentum;
    }
    x = x_next;
    fx = f_next;
    if (fx < best) {
      best = fx;
      best_matrix = projected;
    }
  }
  fail(ErrorCode::kFeasibilityUndetermined,
       "feasibility undetermined after " + std::to_string(config.feasibility_iterations) +
           " iterations (best residual " + std::to_string(best / s2) + ", lower bound " +
           std::to_string(lower / s2) + ", epsilon " + std::to_string(epsilon) + ")");
}

FeasibilityReport check_feasible(const Dataset& data, double epsilon,
                                 const SolverConfig& config) {
  return check_feasible(DataFitProblem(data), epsilon, config);
}

namespace {

RealVector project_ball(const RealVector& v, const RealVector& center, double radius) {
  const RealVector diff = v - center;
  const double norm = diff.norm();
  if (norm <= radius) return v;
  return center + (radius / norm) * diff;
}

}  // namespace

ReconstructionResult reconstruct(const DataFitProblem& problem, double epsilon,
                                 const SolverConfig& config) {
  require(std::isfinite(epsilon) && epsilon >= 0.0, "reconstruct: epsilon must be >= 0");
  config.validate();
  if (epsilon >= problem.data_norm_squared()) {
    fail(ErrorCode::kDegenerateSolution,
         "epsilon " + std::to_string(epsilon) + " >= ||Y||^2 = " +
             std::to_string(problem.data_norm_squared()) + ": the zero matrix fits the data");
  }

  ReconstructionResult result;
  result.epsilon = epsilon;
  const FeasibilityReport feasibility = check_feasible(problem, epsilon, config);
  result.min_residual = feasibility.min_residual;
  if (!feasibility.feasible) {
    result.status = SolveStatus::kInfeasible;
    result.residual = feasibility.min_residual;
    result.iterations = feasibility.iterations;
    return result;
  }

  const double s2 = problem.scale() * problem.scale();
  const double target = s2 * epsilon * (1.0 - kStrictMargin);
  const double radius = std::sqrt(std::max(0.0, target - problem.scaled_orth_residual()));
  const RealVector& g = problem.gram();
  const RealVector& gs = problem.gram_sqrt();
  const RealVector& center = problem.projected_data();
  const Eigen::Index dd = g.size();
  const double tol = config.primal_tolerance;

  // Objective tr(chi) = sqrt(d) * xi_identity.
  RealVector cost = RealVector::Zero(dd);
  cost(0) = std::sqrt(static_cast<double>(problem.dim()));

  // ADMM on: min c.a + I_psd(X) + I_ball(z)  s.t.  a = X,  sqrt(G) a = z.
  ComplexMatrix x_matrix = feasibility.witness;
  RealVector x_psd = problem.to_pauli(x_matrix);
  RealVector a = x_psd;
  RealVector z = project_ball(gs.cwiseProduct(a), center, radius);
  RealVector u = RealVector::Zero(dd);
  RealVector w = RealVector::Zero(dd);
  double rho = config.penalty_parameter;
  const RealVector denom = RealVector::Ones(dd) + g;

  bool converged = false;
  int it = 0;
  for (; it < config.max_iterations; ++it) {
    a = (x_psd - u + gs.cwiseProduct(z - w) - cost / rho).cwiseQuotient(denom);
    x_matrix = project_psd(problem.from_pauli(a + u));
    const RealVector x_next = problem.to_pauli(x_matrix);
    const RealVector ga = gs.cwiseProduct(a);
    const RealVector z_next = project_ball(ga + w, center, radius);

    const RealVector r_x = a - x_next;
    const RealVector r_z = ga - z_next;
    u += r_x;
    w += r_z;
    const double primal = std::sqrt(r_x.squaredNorm() + r_z.squaredNorm());
    const double dual =
        rho * ((x_next - x_psd) + gs.cwiseProduct(z_next - z)).norm();
    x_psd = x_next;
    z = z_next;

    const double primal_scale = std::max({a.norm(), x_psd.norm(), z.norm()});
    const double dual_scale = rho * (u + gs.cwiseProduct(w)).norm();
    if (primal <= tol * (1.0 + primal_scale) && dual <= tol * (1.0 + dual_scale)) {
      converged = true;
      ++it;
      break;
    }
    if (config.adapt_penalty && it % 10 == 9) {
      if (primal > 10.0 * dual) {
        rho *= 2.0;
        u *= 0.5;
        w *= 0.5;
      } else if (dual > 10.0 * primal) {
        rho *= 0.5;
        u *= 2.0;
        w *= 2.0;
      }
    }
  }

  // The last PSD iterate may sit marginally outside the ball; pull it
  // toward the feasibility witness along the segment until it fits.
  const auto fit_error = [&](const RealVector& xi) { return gs.cwiseProduct(xi) - center; };
  const RealVector e_x = fit_error(x_psd);
  const double orth = problem.scaled_orth_residual();
  if (orth + e_x.squaredNorm() > target) {
    const RealVector e_w = fit_error(problem.to_pauli(feasibility.witness));
    const RealVector delta = e_w - e_x;
    const double qa = delta.squaredNorm();
    const double qb = 2.0 * e_x.dot(delta);
    const double qc = orth + e_x.squaredNorm() - target;
    double t = 1.0;
    if (qa > 0.0) {
      const double disc = std::max(0.0, qb * qb - 4.0 * qa * qc);
      t = std::clamp((-qb - std::sqrt(disc)) / (2.0 * qa), 0.0, 1.0);
      t = std::min(1.0, t * (1.0 + 1e-9) + 1e-12);
    }
    x_matrix = (1.0 - t) * x_matrix + t * feasibility.witness;
  }

  result.iterations = it;
  result.residual = problem.residual(x_matrix);
  result.raw_trace = x_matrix.trace().real();
  if (result.raw_trace < kMinTrace) {
    fail(ErrorCode::kDegenerateSolution,
         "optimizer has trace " + std::to_string(result.raw_trace) + "; epsilon is too large");
  }
  result.estimate = DensityMatrix(x_matrix / result.raw_trace);
  result.status = converged ? SolveStatus::kConverged : SolveStatus::kIterationLimit;
  return result;
}

ReconstructionResult reconstruct(const Dataset& data, double epsilon,
                                 const SolverConfig& config) {
  return reconstruct(DataFitProblem(data), epsilon, config);
}

MleResult mle_estimate(const Dataset& data, int max_iterations, double tolerance) {
  require(!data.empty(), "mle_estimate: empty dataset");
  require(max_iterations > 0 && tolerance > 0.0, "mle_estimate: invalid iteration settings");
  const Eigen::Index d = data.dim();
  const auto m = static_cast<Eigen::Index>(data.size());

  ComplexMatrix vectors(d, m * d);
  RealVector counts(m * d);
  double total_shots = 0.0;
  for (Eigen::Index j = 0; j < m; ++j) {
    const CountRecord& rec = data[static_cast<std::size_t>(j)];
    const ProjectorSet& set = eigenprojectors(rec.word);
    for (Eigen::Index k = 0; k < d; ++k) {
      vectors.col(j * d + k) = set.vectors[static_cast<std::size_t>(k)];
      counts(j * d + k) = static_cast<double>(rec.counts[static_cast<std::size_t>(k)]);
    }
    total_shots += static_cast<double>(rec.shots());
  }

  const auto probabilities = [&](const ComplexMatrix& rho) {
    const ComplexMatrix rv = rho * vectors;
    return (vectors.conjugate().cwiseProduct(rv)).colwise().sum().real().transpose().eval();
  };
  const auto log_likelihood = [&](const RealVector& p) {
    double ll = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      if (counts(i) > 0.0) {
        ll += counts(i) * std::log(std::max(p(i), std::numeric_limits<double>::min()));
      }
    }
    return ll;
  };

  ComplexMatrix rho = identity_over_dim(d);
  RealVector p = probabilities(rho);
  double ll = log_likelihood(p);
  const ComplexMatrix eye = ComplexMatrix::Identity(d, d);

  bool converged = false;
  int it = 0;
  for (; it < max_iterations; ++it) {
    RealVector weights(p.size());
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      weights(i) = counts(i) > 0.0
                       ? counts(i) / (total_shots * std::max(p(i), std::numeric_limits<double>::min()))
                       : 0.0;
    }
    const ComplexMatrix r = vectors * weights.asDiagonal() * vectors.adjoint();

    bool accepted = false;
    ComplexMatrix next;
    RealVector p_next;
    double ll_next = ll;
    for (double t = 1.0; t > 1e-12; t *= 0.5) {
      const ComplexMatrix k = eye + t * (r - eye);
      next = k * rho * k.adjoint();
      next = 0.5 * (next + next.adjoint()).eval();
      next /= next.trace().real();
      p_next = probabilities(next);
      ll_next = log_likelihood(p_next);
      if (ll_next >= ll) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      converged = true;
      break;
    }
    const double change = (next - rho).norm();
    rho = std::move(next);
    p = std::move(p_next);
    ll = ll_next;
    if (change < tolerance) {
      converged = true;
      ++it;
      break;
    }
  }
  // Clip round-off negativity before validating as a state.
  ComplexMatrix clipped = project_psd(rho);
  clipped /= clipped.trace().real();
  return {DensityMatrix(std::move(clipped)), ll, it, converged};
}

}  // namespace cstomo
