#include "orbitlink/cohomology_pressure.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "orbitlink/error.hpp"
#include "orbitlink/homology_full.hpp"

namespace orbitlink {
namespace {

double norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

CohomologyPressure::CohomologyPressure(const SuspensionSystem& system, EdgeFunction potential,
                                       const NewtonOptions& options)
    : system_(&system), potential_(std::move(potential)), options_(options), b_(system.betti()) {
  if (potential_.size() != system.shift().edge_count()) throw InvalidInput("potential must have one value per edge");
  for (std::size_t i = 0; i < b_; ++i) components_.push_back(system.label_component(i));

  xi_.assign(b_, 0.0);
  std::vector<double> g = gradient(xi_);
  double beta = value(xi_);
  trace_.push_back(norm(g));
  int it = 0;
  while (trace_.back() >= options_.gradient_tolerance) {
    if (++it > options_.max_iterations)
      throw ConvergenceError("Newton minimization of beta did not converge", trace_.back(), trace_);
    const auto h = hessian(xi_);
    Eigen::MatrixXd H(b_, b_);
    Eigen::VectorXd rhs(b_);
    for (std::size_t i = 0; i < b_; ++i) {
      rhs(i) = -g[i];
      for (std::size_t j = 0; j < b_; ++j) H(i, j) = h[i * b_ + j];
    }
    Eigen::VectorXd step = H.ldlt().solve(rhs);
    if (!step.allFinite() || step.dot(rhs) <= 0.0) step = rhs;  // fall back to steepest descent
    // backtrack until either beta or the gradient norm improves
    double alpha = 1.0;
    std::vector<double> t(b_), gt;
    double bt = 0.0;
    for (int k = 0; k < 40; ++k, alpha *= 0.5) {
      for (std::size_t i = 0; i < b_; ++i) t[i] = xi_[i] + alpha * step(i);
      bt = value(t);
      gt = gradient(t);
      if (bt < beta || norm(gt) < trace_.back()) break;
    }
    xi_ = t;
    g = gt;
    beta = bt;
    trace_.push_back(norm(g));
  }
  beta_ = beta;
  hessian_ = hessian(xi_);
}

EdgeFunction CohomologyPressure::shifted_potential(const std::vector<double>& t) const {
  if (t.size() != b_) throw InvalidInput("cohomology point has wrong dimension");
  EdgeFunction q = potential_;
  for (std::size_t i = 0; i < b_; ++i) q = q.axpy(t[i], components_[i]);
  return q;
}

double CohomologyPressure::value(const std::vector<double>& t) const {
  return flow_pressure(system_->shift(), system_->roof(), shifted_potential(t), options_.root);
}

FlowEquilibrium CohomologyPressure::equilibrium(const std::vector<double>& t) const {
  return flow_equilibrium(system_->shift(), system_->roof(), shifted_potential(t), options_.root);
}

std::vector<double> CohomologyPressure::gradient(const std::vector<double>& t) const {
  return winding_cycle(*system_, equilibrium(t));
}

std::vector<double> CohomologyPressure::hessian(const std::vector<double>& t) const {
  const double h = options_.hessian_step;
  std::vector<double> out(b_ * b_);
  for (std::size_t j = 0; j < b_; ++j) {
    auto plus = t, minus = t;
    plus[j] += h;
    minus[j] -= h;
    const auto gp = gradient(plus), gm = gradient(minus);
    for (std::size_t i = 0; i < b_; ++i) out[i * b_ + j] = (gp[i] - gm[i]) / (2 * h);
  }
  // symmetrize the finite-difference estimate
  for (std::size_t i = 0; i < b_; ++i)
    for (std::size_t j = i + 1; j < b_; ++j) out[i * b_ + j] = out[j * b_ + i] = 0.5 * (out[i * b_ + j] + out[j * b_ + i]);
  return out;
}

double CohomologyPressure::hessian_determinant() const {
  Eigen::MatrixXd H(b_, b_);
  for (std::size_t i = 0; i < b_; ++i)
    for (std::size_t j = 0; j < b_; ++j) H(i, j) = hessian_[i * b_ + j];
  return b_ == 0 ? 1.0 : H.determinant();
}

CohomologyPressure build_cohomology_pressure(const SuspensionSystem& system, const EdgeFunction& potential,
                                             const NewtonOptions& options) {
  const auto full = homologically_full_check(system);
  if (full.verdict != FullVerdict::Full)
    throw InvalidInput(std::string("system is not homologically full (") + to_string(full.verdict) + ")");
  return CohomologyPressure(system, potential, options);
}

std::vector<double> winding_cycle(const SuspensionSystem& system, const FlowEquilibrium& eq) {
  std::vector<double> phi(system.betti());
  for (std::size_t i = 0; i < phi.size(); ++i) phi[i] = eq.integrate_point_mass(system.label_component(i));
  return phi;
}

}  // namespace orbitlink
