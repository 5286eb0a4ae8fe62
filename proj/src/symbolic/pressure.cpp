#include "orbitlink/pressure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "orbitlink/error.hpp"

namespace orbitlink {
namespace {

// Dense row-major vertex matrix with entries sum exp(q(e) - qmax).
std::vector<double> vertex_matrix(const MarkovShift& shift, const EdgeFunction& q, double qmax) {
  const std::size_t V = shift.vertex_count();
  std::vector<double> a(V * V, 0.0);
  for (EdgeId e = 0; e < shift.edge_count(); ++e) {
    const Edge& edge = shift.edge(e);
    a[edge.source * V + edge.target] += std::exp(q[e] - qmax);
  }
  return a;
}

// Power iteration on B = A + I (primitive whenever A is irreducible).  Stops
// when the Collatz-Wielandt bounds min (Bx)_i/x_i <= rho(B) <= max (Bx)_i/x_i
// agree to the tolerance.  Returns rho(B).
double perron_vector(const std::vector<double>& a, std::size_t V, bool transpose, std::vector<double>& x,
                     const EigenOptions& options, int& iterations) {
  x.assign(V, 1.0 / static_cast<double>(V));
  std::vector<double> y(V);
  double lo = 0.0, hi = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= options.max_iterations; ++it) {
    for (std::size_t i = 0; i < V; ++i) {
      double s = x[i];
      for (std::size_t j = 0; j < V; ++j) s += (transpose ? a[j * V + i] : a[i * V + j]) * x[j];
      y[i] = s;
    }
    lo = std::numeric_limits<double>::infinity();
    hi = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < V; ++i) {
      double ratio = y[i] / x[i];
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
      total += y[i];
    }
    for (std::size_t i = 0; i < V; ++i) x[i] = y[i] / total;
    if (hi - lo <= options.tolerance * hi) {
      iterations = it;
      return 0.5 * (lo + hi);
    }
  }
  throw ConvergenceError("power iteration did not converge", (hi - lo) / hi);
}

}  // namespace

LeadingEigen leading_eigen(const MarkovShift& shift, const EdgeFunction& q, const EigenOptions& options) {
  if (q.size() != shift.edge_count()) throw InvalidInput("potential must have one value per edge");
  const std::size_t V = shift.vertex_count();
  const double qmax = q.max();
  const auto a = vertex_matrix(shift, q, qmax);
  LeadingEigen out;
  int it_right = 0, it_left = 0;
  perron_vector(a, V, false, out.right, options, it_right);
  perron_vector(a, V, true, out.left, options, it_left);
  double lr = 0.0;
  for (std::size_t i = 0; i < V; ++i) lr += out.left[i] * out.right[i];
  for (double& l : out.left) l /= lr;
  // rho(B) - 1 loses digits when lambda is small, so take the Rayleigh
  // quotient of A itself (l r = 1)
  double lambda = 0.0;
  for (std::size_t i = 0; i < V; ++i)
    for (std::size_t j = 0; j < V; ++j) lambda += out.left[i] * a[i * V + j] * out.right[j];
  if (!(lambda > 0.0)) throw ConvergenceError("non-positive leading eigenvalue", lambda);
  out.log_lambda = std::log(lambda) + qmax;
  out.iterations = std::max(it_right, it_left);
  return out;
}

double MarkovMeasure::entropy() const {
  double h = 0.0;
  for (std::size_t e = 0; e < edge_mass.size(); ++e) {
    if (edge_mass[e] > 0.0 && transition[e] > 0.0) h -= edge_mass[e] * std::log(transition[e]);
  }
  return h;
}

double MarkovMeasure::integrate(const EdgeFunction& f) const {
  double s = 0.0;
  for (std::size_t e = 0; e < edge_mass.size(); ++e) s += edge_mass[e] * f[static_cast<EdgeId>(e)];
  return s;
}

double shift_pressure(const MarkovShift& shift, const EdgeFunction& q, const EigenOptions& options) {
  return leading_eigen(shift, q, options).log_lambda;
}

MarkovMeasure equilibrium_state(const MarkovShift& shift, const EdgeFunction& q, const EigenOptions& options) {
  LeadingEigen eig = leading_eigen(shift, q, options);
  MarkovMeasure m;
  const std::size_t V = shift.vertex_count();
  m.vertex_distribution.resize(V);
  double total = 0.0;
  for (std::size_t v = 0; v < V; ++v) total += m.vertex_distribution[v] = eig.left[v] * eig.right[v];
  for (double& p : m.vertex_distribution) p /= total;
  m.transition.resize(shift.edge_count());
  m.edge_mass.resize(shift.edge_count());
  // normalize rows explicitly so they sum to 1 to rounding
  std::vector<double> row(V, 0.0);
  for (EdgeId e = 0; e < shift.edge_count(); ++e) {
    const Edge& edge = shift.edge(e);
    m.transition[e] = std::exp(q[e] - eig.log_lambda) * eig.right[edge.target] / eig.right[edge.source];
    row[edge.source] += m.transition[e];
  }
  for (EdgeId e = 0; e < shift.edge_count(); ++e) {
    const Edge& edge = shift.edge(e);
    m.transition[e] /= row[edge.source];
    m.edge_mass[e] = m.vertex_distribution[edge.source] * m.transition[e];
  }
  m.log_lambda = eig.log_lambda;
  m.left = std::move(eig.left);
  m.right = std::move(eig.right);
  return m;
}

double flow_pressure(const MarkovShift& shift, const EdgeFunction& roof, const EdgeFunction& q,
                     const RootOptions& options) {
  if (roof.size() != shift.edge_count()) throw InvalidInput("roof must have one value per edge");
  if (roof.min() <= 0.0) throw InvalidInput("roof must be strictly positive");
  auto f = [&](double s) { return shift_pressure(shift, q.axpy(-s, roof), options.eigen); };
  const double p0 = f(0.0);
  // f(s) is squeezed between p0 - s*rmax and p0 - s*rmin, so the root lies
  // between p0/rmax and p0/rmin.
  double lo = std::min(p0 / roof.max(), p0 / roof.min());
  double hi = std::max(p0 / roof.max(), p0 / roof.min());
  double pad = 1e-9 * (1.0 + std::fabs(hi));
  lo -= pad;
  hi += pad;
  double flo = f(lo), fhi = f(hi);
  for (int k = 0; k < options.max_expansions && !(flo >= 0.0 && fhi <= 0.0); ++k) {
    const double w = hi - lo;
    if (flo < 0.0) flo = f(lo -= w);
    if (fhi > 0.0) fhi = f(hi += w);
  }
  if (!(flo >= 0.0 && fhi <= 0.0)) throw BracketError("flow pressure root not bracketed", lo, hi);

  double s = 0.5 * (lo + hi);
  std::vector<double> trace;
  for (int it = 0; it < options.max_iterations; ++it) {
    const MarkovMeasure m = equilibrium_state(shift, q.axpy(-s, roof), options.eigen);
    const double fs = m.log_lambda;
    trace.push_back(fs);
    if (std::fabs(fs) < options.tolerance) return s;
    if (fs > 0.0) lo = s; else hi = s;
    const double slope = -m.integrate(roof);
    double next = s - fs / slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == s || hi - lo <= 4 * std::numeric_limits<double>::epsilon() * std::fabs(s)) return s;
    s = next;
  }
  throw ConvergenceError("flow pressure root search did not converge", trace.back(), trace);
}

double flow_pressure(const SuspensionSystem& system, double scale, const RootOptions& options) {
  return flow_pressure(system.shift(), system.roof(), system.potential() * scale, options);
}

double FlowEquilibrium::integrate_density(const EdgeFunction& roof, const EdgeFunction& psi) const {
  double s = 0.0;
  for (std::size_t e = 0; e < base.edge_mass.size(); ++e) {
    s += base.edge_mass[e] * psi[static_cast<EdgeId>(e)] * roof[static_cast<EdgeId>(e)];
  }
  return s / mean_roof;
}

double FlowEquilibrium::integrate_point_mass(const EdgeFunction& f) const { return base.integrate(f) / mean_roof; }

FlowEquilibrium flow_equilibrium(const MarkovShift& shift, const EdgeFunction& roof, const EdgeFunction& q,
                                 const RootOptions& options) {
  FlowEquilibrium out;
  out.pressure = flow_pressure(shift, roof, q, options);
  out.base = equilibrium_state(shift, q.axpy(-out.pressure, roof), options.eigen);
  out.mean_roof = out.base.integrate(roof);
  return out;
}

}  // namespace orbitlink
