#include "orbitlink/lorenz_template.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "orbitlink/error.hpp"
#include "orbitlink/numerics.hpp"
#include "orbitlink/suspension.hpp"

namespace orbitlink {
namespace {

struct Loop {
  bool left;
  double x0, x1;  // branch coordinate at departure / return
  double z0, z1;
};

Loop loop_of(const TemplateSpec& spec, const TemplateState& s) {
  Loop l;
  l.left = s.u < 0.5;
  const double u1 = l.left ? 2 * s.u : 2 * s.u - 1;
  const double v1 = l.left ? s.v / 3 + 2.0 / 3 : s.v / 3;
  l.x0 = (s.u - 0.5) * spec.branch_length;
  l.x1 = (u1 - 0.5) * spec.branch_length;
  l.z0 = spec.lift * (2 * s.v - 1);
  l.z1 = spec.lift * (2 * v1 - 1);
  return l;
}

double blend(double tau) { return 0.5 * (1 - std::cos(kPi * tau)); }
double blend_slope(double tau) { return 0.5 * kPi * std::sin(kPi * tau); }

}  // namespace

Vec3 template_position(const TemplateSpec& spec, const TemplateState& s) {
  const Loop l = loop_of(spec, s);
  const double b = blend(s.tau);
  const double x = l.x0 + (l.x1 - l.x0) * b;
  const double z = l.z0 + (l.z1 - l.z0) * b;
  const double R = spec.ear_radius;
  if (l.left) {
    const double theta = 2 * kPi * s.tau, rho = R + x;
    return {-R + rho * std::cos(theta), rho * std::sin(theta), z};
  }
  const double theta = kPi - 2 * kPi * s.tau, rho = R - x;
  return {R + rho * std::cos(theta), rho * std::sin(theta), z};
}

Vec3 template_velocity(const TemplateSpec& spec, const TemplateState& s) {
  const Loop l = loop_of(spec, s);
  const double b = blend(s.tau), db = blend_slope(s.tau);
  const double x = l.x0 + (l.x1 - l.x0) * b;
  const double dz = (l.z1 - l.z0) * db;
  const double R = spec.ear_radius;
  if (l.left) {
    const double theta = 2 * kPi * s.tau, rho = R + x, drho = (l.x1 - l.x0) * db;
    return {drho * std::cos(theta) - 2 * kPi * rho * std::sin(theta),
            drho * std::sin(theta) + 2 * kPi * rho * std::cos(theta), dz};
  }
  const double theta = kPi - 2 * kPi * s.tau, rho = R - x, drho = -(l.x1 - l.x0) * db;
  return {drho * std::cos(theta) + 2 * kPi * rho * std::sin(theta),
          drho * std::sin(theta) - 2 * kPi * rho * std::cos(theta), dz};
}

std::vector<std::pair<double, double>> section_points(std::span<const EdgeId> word) {
  const std::size_t n = word.size();
  std::vector<std::pair<double, double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    // u: binary digits of the future, v: ternary record of the past
    double u = 0.0, v = 0.0, w2 = 0.5, w3 = 1.0;
    for (std::size_t j = 0; j < 64; ++j, w2 *= 0.5) u += word[(k + j) % n] * w2;
    for (std::size_t j = 1; j <= 40; ++j, w3 /= 3.0) v += (word[(k + n * 40 - j) % n] == 0 ? 2.0 / 3.0 : 0.0) * w3;
    out[k] = {u, v};
  }
  return out;
}

PolylineCurve realize_orbit(const TemplateSpec& spec, std::span<const EdgeId> word, std::size_t samples_per_symbol) {
  if (word.empty()) throw InvalidInput("empty template word");
  for (EdgeId e : word)
    if (e > 1) throw InvalidInput("template words use symbols 0 and 1: " + word_to_string(word));
  const std::size_t N = samples_per_symbol ? samples_per_symbol : spec.samples_per_symbol;
  if (N < 2) throw InvalidInput("need at least 2 samples per symbol");
  const auto sec = section_points(word);
  std::vector<Vec3> pts;
  pts.reserve(word.size() * N);
  for (std::size_t k = 0; k < word.size(); ++k) {
    for (std::size_t j = 0; j < N; ++j) {
      pts.push_back(template_position(spec, {sec[k].first, sec[k].second, static_cast<double>(j) / N}));
    }
  }
  std::vector<double> dt(pts.size(), 1.0 / static_cast<double>(N));
  try {
    return PolylineCurve(std::move(pts), std::move(dt), word_to_string(word));
  } catch (const GeometryError& e) {
    throw GeometryError("template word " + word_to_string(word) + ": " + e.what());
  }
}

}  // namespace orbitlink

namespace orbitlink {

std::vector<std::uint64_t> template_strand_keys(std::span<const EdgeId> word) {
  const std::size_t n = word.size();
  std::vector<std::uint64_t> keys(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::uint64_t key = 0;
    for (std::size_t j = 0; j < 62; ++j) key = (key << 1) | (word[(k + 1 + j) % n] & 1u);
    keys[k] = key;
  }
  return keys;
}

int template_linking(std::span<const EdgeId> a, std::span<const std::uint64_t> keys_a, std::span<const EdgeId> b,
                     std::span<const std::uint64_t> keys_b) {
  if (a.size() + b.size() > 62) throw InvalidInput("template words too long for exact strand comparison");
  int inverted = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (a[i] == b[j]) continue;
      // left strand returns to the right of the right strand
      if (a[i] == 0 ? keys_a[i] > keys_b[j] : keys_b[j] > keys_a[i]) ++inverted;
    }
  }
  if (inverted % 2 != 0) throw GeometryError("odd template crossing count; words must be distinct prime orbits");
  return inverted / 2;
}

int template_linking(std::span<const EdgeId> a, std::span<const EdgeId> b) {
  if (a.size() + b.size() > 62) throw InvalidInput("template words too long for exact strand comparison");
  const auto ka = template_strand_keys(a), kb = template_strand_keys(b);
  return template_linking(a, ka, b, kb);
}

double section_separation(const TemplateSpec& spec, const std::vector<std::vector<EdgeId>>& a,
                          const std::vector<std::vector<EdgeId>>& b) {
  struct P {
    double x, z;
    bool from_a;
  };
  std::vector<P> pts;
  auto add = [&](const std::vector<std::vector<EdgeId>>& family, bool from_a) {
    for (const auto& word : family)
      for (const auto& [u, v] : section_points(word))
        pts.push_back({(u - 0.5) * spec.branch_length, spec.lift * (2 * v - 1), from_a});
  };
  add(a, true);
  add(b, false);
  std::sort(pts.begin(), pts.end(), [](const P& p, const P& q) { return p.x < q.x; });
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size() && pts[j].x - pts[i].x < best; ++j) {
      if (pts[i].from_a == pts[j].from_a) continue;
      best = std::min(best, std::hypot(pts[j].x - pts[i].x, pts[j].z - pts[i].z));
    }
  }
  return best;
}

}  // namespace orbitlink
