#include "orbitlink/class_count.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "orbitlink/error.hpp"
#include "orbitlink/numerics.hpp"

namespace orbitlink {
namespace {

bool in_class(std::span<const std::int64_t> h, const HomologyClass& alpha) {
  return std::equal(h.begin(), h.end(), alpha.begin(), alpha.end());
}

double weight_of(std::span<const EdgeId> word, const EdgeFunction& potential) {
  double w = 0.0;
  for (EdgeId e : word) w += potential[e];
  return w;
}

ClassCount finish(const LogSumExp& acc) {
  ClassCount c;
  c.log_pi = acc.value();
  c.pi = std::exp(c.log_pi);
  c.count = static_cast<std::size_t>(acc.count());
  return c;
}

void check_class(const SuspensionSystem& system, const HomologyClass& alpha) {
  if (alpha.size() != system.betti()) throw InvalidInput("class dimension differs from betti number");
}

}  // namespace

ClassCount count_in_class(const SuspensionSystem& system, const EdgeFunction& potential, const HomologyClass& alpha,
                          LengthWindow window, const EnumerationOptions& options) {
  check_class(system, alpha);
  const LogSumExp acc = reduce_orbits<LogSumExp>(
      system, window, options, [] { return LogSumExp{}; },
      [&](LogSumExp& a, const OrbitView& v) {
        if (in_class(v.homology, alpha)) a.add(weight_of(v.word, potential));
      },
      [](LogSumExp& total, const LogSumExp& part) { total.merge(part); });
  return finish(acc);
}

std::map<HomologyClass, ClassCount> class_histogram(const SuspensionSystem& system, const EdgeFunction& potential,
                                                    LengthWindow window, const EnumerationOptions& options) {
  using Acc = std::map<HomologyClass, LogSumExp>;
  const Acc acc = reduce_orbits<Acc>(
      system, window, options, [] { return Acc{}; },
      [&](Acc& a, const OrbitView& v) {
        a[HomologyClass(v.homology.begin(), v.homology.end())].add(weight_of(v.word, potential));
      },
      [](Acc& total, const Acc& part) {
        for (const auto& [k, s] : part) total[k].merge(s);
      });
  std::map<HomologyClass, ClassCount> out;
  for (const auto& [k, s] : acc) out[k] = finish(s);
  return out;
}

double predict_in_class(const CohomologyPressure& cp, const HomologyClass& alpha, LengthWindow offset, double T) {
  const std::size_t b = cp.dimension();
  if (alpha.size() != b) throw InvalidInput("class dimension differs from betti number");
  const double beta = cp.minimum();
  const double window_integral = std::fabs(beta) < 1e-14
                                     ? offset.hi - offset.lo
                                     : (std::exp(beta * offset.hi) - std::exp(beta * offset.lo)) / beta;
  double pairing = 0.0;
  for (std::size_t i = 0; i < b; ++i) pairing += static_cast<double>(alpha[i]) * cp.minimizer()[i];
  const double log_pred = -0.5 * static_cast<double>(b) * std::log(2 * kPi) - 0.5 * std::log(cp.hessian_determinant()) +
                          std::log(window_integral) - pairing + beta * T -
                          (1.0 + 0.5 * static_cast<double>(b)) * std::log(T);
  return std::exp(log_pred);
}

std::vector<ClassWindowStats> class_window_sweep(const SuspensionSystem& system, const EdgeFunction& potential,
                                                 const HomologyClass& alpha, const EdgeFunction& psi,
                                                 double reference, double epsilon, std::span<const double> T_grid,
                                                 LengthWindow offset, const EnumerationOptions& options) {
  check_class(system, alpha);
  std::vector<ClassWindowStats> out;
  if (T_grid.empty()) return out;
  const double t_lo = *std::min_element(T_grid.begin(), T_grid.end());
  const double t_hi = *std::max_element(T_grid.begin(), T_grid.end());
  const LengthWindow all{t_lo + offset.lo, t_hi + offset.hi};
  const EdgeFunction& roof = system.roof();

  struct Bin {
    LogSumExp total, deviating;
    ScaledSum psi;
  };
  using Acc = std::vector<Bin>;
  const Acc acc = reduce_orbits<Acc>(
      system, all, options, [&] { return Acc(T_grid.size()); },
      [&](Acc& bins, const OrbitView& v) {
        if (!in_class(v.homology, alpha)) return;
        const double w = weight_of(v.word, potential);
        double integral = 0.0;
        for (EdgeId e : v.word) integral += psi[e] * roof[e];
        const double avg = integral / v.length;
        for (std::size_t i = 0; i < T_grid.size(); ++i) {
          if (!LengthWindow{T_grid[i] + offset.lo, T_grid[i] + offset.hi}.contains(v.length)) continue;
          bins[i].total.add(w);
          bins[i].psi.add(w, avg);
          if (std::fabs(avg - reference) >= epsilon) bins[i].deviating.add(w);
        }
      },
      [](Acc& total, const Acc& part) {
        for (std::size_t i = 0; i < total.size(); ++i) {
          total[i].total.merge(part[i].total);
          total[i].deviating.merge(part[i].deviating);
          total[i].psi.merge(part[i].psi);
        }
      });
  for (std::size_t i = 0; i < T_grid.size(); ++i) {
    ClassWindowStats s;
    s.T = T_grid[i];
    s.total = finish(acc[i].total);
    s.deviating = finish(acc[i].deviating);
    s.mean_psi = s.total.count ? acc[i].psi.relative_to(s.total.log_pi) : std::numeric_limits<double>::quiet_NaN();
    out.push_back(s);
  }
  return out;
}

std::vector<EquidistributionPoint> equidistribute_in_class(const SuspensionSystem& system, const CohomologyPressure& cp,
                                                           const HomologyClass& alpha, const EdgeFunction& psi,
                                                           std::span<const double> T_grid, LengthWindow offset,
                                                           const EnumerationOptions& options) {
  const double reference = cp.equilibrium(cp.minimizer()).integrate_density(system.roof(), psi);
  const auto sweep = class_window_sweep(system, cp.potential(), alpha, psi, reference,
                                        std::numeric_limits<double>::infinity(), T_grid, offset, options);
  std::vector<EquidistributionPoint> out;
  for (const auto& s : sweep) {
    EquidistributionPoint p;
    p.T = s.T;
    p.reference = reference;
    p.count = s.total.count;
    p.empty = s.total.count == 0;
    p.orbital = s.mean_psi;
    p.gap = p.empty ? std::numeric_limits<double>::quiet_NaN() : std::fabs(s.mean_psi - reference);
    out.push_back(p);
  }
  return out;
}

LargeDeviationSeries large_deviation_ratio(const SuspensionSystem& system, const CohomologyPressure& cp,
                                           const HomologyClass& alpha, const EdgeFunction& psi, double epsilon,
                                           std::span<const double> T_grid, LengthWindow offset,
                                           const EnumerationOptions& options) {
  if (!(epsilon > 0.0)) throw InvalidInput("large-deviation margin must be positive");
  LargeDeviationSeries out;
  out.reference = cp.equilibrium(cp.minimizer()).integrate_density(system.roof(), psi);
  const auto sweep = class_window_sweep(system, cp.potential(), alpha, psi, out.reference, epsilon, T_grid, offset,
                                        options);
  std::vector<double> xs, ys;
  for (const auto& s : sweep) {
    out.T.push_back(s.T);
    const double r = (s.total.count && s.deviating.count) ? std::exp(s.deviating.log_pi - s.total.log_pi) : 0.0;
    out.ratio.push_back(r);
    if (r > 0.0) {
      xs.push_back(s.T);
      ys.push_back(std::log(r));
    }
  }
  out.exact_zero = xs.empty();
  if (xs.size() >= 2) {
    const double n = static_cast<double>(xs.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      mx += xs[i] / n;
      my += ys[i] / n;
    }
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxy += (xs[i] - mx) * (ys[i] - my);
      sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    out.slope = sxx > 0 ? sxy / sxx : 0.0;
  }
  return out;
}

}  // namespace orbitlink
