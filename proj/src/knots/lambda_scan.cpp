#include "orbitlink/lambda_scan.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "orbitlink/error.hpp"
#include "orbitlink/linking.hpp"
#include "orbitlink/parallel.hpp"

namespace orbitlink {
namespace {

constexpr std::size_t kChunks = 64;

bool inside(const TemplateState& s) {
  return s.u >= 0 && s.u < 1 && s.v >= 0 && s.v <= 1 && s.tau >= 0 && s.tau < 1;
}

Vec3 unit_velocity(const TemplateSpec& spec, const TemplateState& s) {
  return template_velocity(spec, s).normalized();
}

}  // namespace

LambdaScanReport lambda_bound_scan(const TemplateSpec& spec, const LambdaScanOptions& options) {
  if (options.decades == 0 || !(options.r_min > 0)) throw InvalidInput("lambda scan needs r_min > 0 and decades >= 1");
  const std::size_t D = options.decades;
  const double log_lo = std::log(options.r_min), log_span = static_cast<double>(D) * std::log(10.0);

  // per chunk, per decade (index 0 = smallest r)
  std::vector<std::vector<LambdaDecade>> partial(kChunks, std::vector<LambdaDecade>(D));
  parallel_for(kChunks, options.threads, [&](std::size_t c) {
    std::mt19937_64 rng(options.seed * 0x9E3779B97F4A7C15ULL + c);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> normal;
    const std::size_t quota = options.pairs / kChunks + (c < options.pairs % kChunks ? 1 : 0);
    auto& out = partial[c];
    std::size_t done = 0;
    while (done < quota) {
      const TemplateState x{unif(rng), unif(rng), unif(rng)};
      Eigen::Vector3d w(normal(rng), normal(rng), normal(rng));
      w.normalize();
      // aim for a log-uniform spatial separation using the local stretch of the chart
      const double target = std::exp(log_lo + log_span * unif(rng));
      const double h = 1e-7;
      TemplateState probe{x.u + h * w.x(), x.v + h * w.y(), x.tau + h * w.z()};
      if (!inside(probe)) continue;
      const Vec3 px = template_position(spec, x);
      const double stretch = (template_position(spec, probe) - px).norm() / h;
      if (!(stretch > 0)) continue;
      const double step = target / stretch;
      const TemplateState y{x.u + step * w.x(), x.v + step * w.y(), x.tau + step * w.z()};
      if (!inside(y)) continue;
      const Vec3 py = template_position(spec, y);
      const double r = (px - py).norm();
      if (r == 0.0) continue;
      const double pos = (std::log(r) - log_lo) / std::log(10.0);
      ++done;
      if (pos < 0 || pos >= static_cast<double>(D)) continue;
      auto& bin = out[static_cast<std::size_t>(pos)];
      const double value = r * std::fabs(lambda_kernel(px, py, unit_velocity(spec, x), unit_velocity(spec, y)));
      bin.max_r_lambda = std::max(bin.max_r_lambda, value);
      ++bin.samples;
    }
  });

  LambdaScanReport report;
  for (std::size_t k = D; k-- > 0;) {
    LambdaDecade d;
    d.r_lo = options.r_min * std::pow(10.0, static_cast<double>(k));
    d.r_hi = d.r_lo * 10.0;
    for (const auto& chunk : partial) {
      d.max_r_lambda = std::max(d.max_r_lambda, chunk[k].max_r_lambda);
      d.samples += chunk[k].samples;
    }
    report.K_emp = std::max(report.K_emp, d.max_r_lambda);
    report.decades.push_back(d);
  }
  report.bounded = true;
  for (std::size_t k = 1; k < report.decades.size(); ++k)
    if (report.decades[k].max_r_lambda > options.trend_tolerance * report.decades[k - 1].max_r_lambda)
      report.bounded = false;
  return report;
}

}  // namespace orbitlink
