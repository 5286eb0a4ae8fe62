#include "orbitlink/homology_full.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>

#include "orbitlink/orbits.hpp"

namespace orbitlink {
namespace {

using Vec = Eigen::VectorXd;

constexpr double kTol = 1e-12;

// Calls fn on every k-subset of {0..n-1} (indices ascending) until fn returns true.
bool for_subsets(std::size_t n, std::size_t k, const std::function<bool(const std::vector<std::size_t>&)>& fn) {
  if (k > n) return false;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    if (fn(idx)) return true;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return false;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

// Barycentric coordinates of 0 in the simplex spanned by pts (b+1 points in R^b);
// true if they exist and are all strictly positive.
bool contains_origin(const std::vector<Vec>& pts, const std::vector<std::size_t>& idx) {
  const auto b = pts[0].size();
  Eigen::MatrixXd M(b + 1, b + 1);
  for (std::size_t j = 0; j < idx.size(); ++j) {
    M.block(0, j, b, 1) = pts[idx[j]];
    M(b, j) = 1.0;
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
  if (lu.rank() < static_cast<Eigen::Index>(b + 1)) return false;
  Vec rhs = Vec::Zero(b + 1);
  rhs(b) = 1.0;
  const Vec lambda = lu.solve(rhs);
  return (lambda.array() > kTol).all();
}

bool separates(const std::vector<Vec>& pts, const Vec& u) {
  if (u.norm() < kTol) return false;
  for (const Vec& p : pts) {
    if (u.dot(p) < -kTol * (1.0 + p.norm())) return false;
  }
  return true;
}

}  // namespace

const char* to_string(FullVerdict v) {
  switch (v) {
    case FullVerdict::Full: return "full";
    case FullVerdict::NotFull: return "not full";
    default: return "inconclusive";
  }
}

HomologyFullReport homologically_full_check(const SuspensionSystem& system, std::size_t horizon) {
  HomologyFullReport report;
  const std::size_t V = system.shift().vertex_count();
  const std::size_t b = system.betti();
  report.horizon = horizon == 0 ? std::max<std::size_t>(V, 4) : horizon;
  if (b == 0) {
    report.verdict = FullVerdict::Full;
    return report;
  }
  const auto orbits = enumerate_by_word_length(system, report.horizon);
  report.cycles = orbits.size();
  if (orbits.empty()) return report;

  std::vector<std::vector<double>> raw;
  for (const auto& o : orbits) {
    std::vector<double> w(b);
    for (std::size_t i = 0; i < b; ++i) w[i] = static_cast<double>(o.homology[i]) / o.length;
    raw.push_back(std::move(w));
  }
  std::sort(raw.begin(), raw.end());
  raw.erase(std::unique(raw.begin(), raw.end(),
                        [](const auto& x, const auto& y) {
                          for (std::size_t i = 0; i < x.size(); ++i)
                            if (std::fabs(x[i] - y[i]) > kTol) return false;
                          return true;
                        }),
            raw.end());
  std::vector<Vec> pts;
  for (const auto& w : raw) pts.push_back(Eigen::Map<const Vec>(w.data(), static_cast<Eigen::Index>(b)));

  auto to_std = [](const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
  const bool conclusive = report.horizon >= V;

  // Separating functional.  If one exists, either the points span a proper
  // subspace (any normal works) or the cone {u : <u,p> >= 0} is pointed and
  // has an extreme ray fixed by b-1 independent tight points.
  Eigen::MatrixXd P(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(pts.size()));
  for (std::size_t j = 0; j < pts.size(); ++j) P.col(static_cast<Eigen::Index>(j)) = pts[j];
  Eigen::FullPivLU<Eigen::MatrixXd> lu_span(P.transpose());
  std::vector<Vec> candidates;
  if (lu_span.rank() < static_cast<Eigen::Index>(b)) {
    candidates.push_back(lu_span.kernel().col(0));
  } else if (b == 1) {
    candidates.push_back(Vec::Constant(1, 1.0));
    candidates.push_back(Vec::Constant(1, -1.0));
  } else {
    for_subsets(pts.size(), b - 1, [&](const std::vector<std::size_t>& idx) {
      Eigen::MatrixXd M(static_cast<Eigen::Index>(b - 1), static_cast<Eigen::Index>(b));
      for (std::size_t r = 0; r < idx.size(); ++r) M.row(static_cast<Eigen::Index>(r)) = pts[idx[r]].transpose();
      Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
      if (lu.rank() == static_cast<Eigen::Index>(b - 1)) {
        Vec u = lu.kernel().col(0);
        candidates.push_back(u);
        candidates.push_back(-u);
      }
      return false;
    });
  }
  for (Vec u : candidates) {
    if (separates(pts, u)) {
      u /= u.cwiseAbs().maxCoeff();
      report.separating = to_std(u);
      report.verdict = conclusive ? FullVerdict::NotFull : FullVerdict::Inconclusive;
      return report;
    }
  }

  report.verdict = FullVerdict::Full;
  const std::size_t cap = std::min<std::size_t>(pts.size(), b <= 2 ? 200 : 60);
  std::vector<std::size_t> found;
  for_subsets(cap, b + 1, [&](const std::vector<std::size_t>& idx) {
    if (!contains_origin(pts, idx)) return false;
    found = idx;
    return true;
  });
  if (!found.empty()) {
    for (auto i : found) report.witness.push_back(to_std(pts[i]));
  } else {
    for (const auto& p : pts) report.witness.push_back(to_std(p));
  }
  return report;
}

}  // namespace orbitlink
