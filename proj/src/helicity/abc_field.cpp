#include "orbitlink/abc_field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "orbitlink/error.hpp"
#include "orbitlink/numerics.hpp"

namespace orbitlink {

AnalyticField::AnalyticField(std::function<Vec3(const Vec3&)> value, std::string name)
    : value_(std::move(value)), name_(std::move(name)) {
  if (!value_) throw InvalidInput("analytic field needs a value function");
}

AnalyticField AnalyticField::abc(double A, double B, double C) {
  auto f = [A, B, C](const Vec3& p) {
    const double x = p.x(), y = p.y(), z = p.z();
    return Vec3(A * std::sin(z) + C * std::cos(y), B * std::sin(x) + A * std::cos(z), C * std::sin(y) + B * std::cos(x));
  };
  char buf[96];
  std::snprintf(buf, sizeof buf, "abc(%g,%g,%g)", A, B, C);
  return AnalyticField(f, buf);
}

AnalyticField AnalyticField::scaled(double s) const {
  auto inner = value_;
  return AnalyticField([inner, s](const Vec3& x) { return Vec3(s * inner(x)); }, name_ + "*" + std::to_string(s));
}

Vec3 curl_fd(const AnalyticField& f, const Vec3& x, double h) {
  auto d = [&](int axis) {
    Vec3 e = Vec3::Zero();
    e[axis] = h;
    return Vec3((f(x + e) - f(x - e)) / (2 * h));
  };
  const Vec3 dx = d(0), dy = d(1), dz = d(2);
  return {dy.z() - dz.y(), dz.x() - dx.z(), dx.y() - dy.x()};
}

double divergence_fd(const AnalyticField& f, const Vec3& x, double h) {
  double div = 0.0;
  for (int axis = 0; axis < 3; ++axis) {
    Vec3 e = Vec3::Zero();
    e[axis] = h;
    div += (f(x + e)[axis] - f(x - e)[axis]) / (2 * h);
  }
  return div;
}

namespace {

template <class F>
void for_grid(std::size_t n, F&& fn) {
  const double step = 2 * kPi / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) fn(Vec3(i * step, j * step, k * step));
}

double max_norm(const AnalyticField& f, std::size_t n) {
  double m = 0.0;
  for_grid(n, [&](const Vec3& x) { m = std::max(m, f(x).norm()); });
  return m;
}

}  // namespace

double max_divergence(const AnalyticField& field, std::size_t n, double h) {
  double m = 0.0;
  for_grid(n, [&](const Vec3& x) { m = std::max(m, std::fabs(divergence_fd(field, x, h))); });
  return m;
}

double max_beltrami_defect(const AnalyticField& field, std::size_t n, double h) {
  double m = 0.0;
  for_grid(n, [&](const Vec3& x) { m = std::max(m, (curl_fd(field, x, h) - field(x)).norm()); });
  return m;
}

double helicity_on_grid(const AnalyticField& field, std::size_t n) {
  if (n < 3) throw InvalidInput("helicity grid needs n >= 3");
  const double h = 2 * kPi / static_cast<double>(n);
  double sum = 0.0;
  for_grid(n, [&](const Vec3& x) { sum += field(x).dot(curl_fd(field, x, h)); });
  return sum / std::pow(static_cast<double>(n), 3);
}

HelicityEstimate helicity_analytic(const AnalyticField& field, const HelicityOptions& options) {
  if (options.grids.empty()) throw InvalidInput("helicity needs at least one grid");
  const double scale = std::max(1.0, max_norm(field, 20));
  const double defect = max_beltrami_defect(field);
  if (defect > options.beltrami_tolerance * scale)
    throw InvalidInput("field " + field.name() + " is not Beltrami (curl X != X); helicity shortcut does not apply");
  HelicityEstimate est;
  est.grids = options.grids;
  for (std::size_t n : options.grids) est.grid_values.push_back(helicity_on_grid(field, n));
  const std::size_t m = est.grid_values.size();
  est.value = est.grid_values.back();
  est.observed_order = std::numeric_limits<double>::quiet_NaN();
  if (m >= 2) {
    // second-order Richardson on the two finest grids
    const double ratio = static_cast<double>(est.grids[m - 1]) / static_cast<double>(est.grids[m - 2]);
    const double r2 = ratio * ratio;
    est.value = est.grid_values[m - 1] + (est.grid_values[m - 1] - est.grid_values[m - 2]) / (r2 - 1);
  }
  if (m >= 3) {
    const double d1 = est.grid_values[m - 2] - est.grid_values[m - 3];
    const double d2 = est.grid_values[m - 1] - est.grid_values[m - 2];
    const double ratio = static_cast<double>(est.grids[m - 1]) / static_cast<double>(est.grids[m - 2]);
    if (d1 != 0.0 && d2 != 0.0) est.observed_order = std::log(std::fabs(d1 / d2)) / std::log(ratio);
  }
  est.error = std::fabs(est.value - est.grid_values.back());
  return est;
}

}  // namespace orbitlink
