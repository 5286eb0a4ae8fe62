#include "orbitlink/runner.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include "orbitlink/abc_field.hpp"
#include "orbitlink/average_linking.hpp"
#include "orbitlink/class_count.hpp"
#include "orbitlink/cohomology_pressure.hpp"
#include "orbitlink/convergence_study.hpp"
#include "orbitlink/lambda_scan.hpp"
#include "orbitlink/lattice_count.hpp"
#include "orbitlink/linking.hpp"
#include "orbitlink/lorenz_template.hpp"
#include "orbitlink/orbit_stats.hpp"
#include "orbitlink/orbits.hpp"
#include "orbitlink/pressure.hpp"
#include "orbitlink/system_io.hpp"

#ifndef ORBITLINK_VERSION
#define ORBITLINK_VERSION "0.0.0"
#endif

namespace orbitlink {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

class Table {
 public:
  explicit Table(std::vector<std::string> header) : width_(header.size()) { add(header); }
  void row(const std::vector<std::string>& cells) { add(cells); }
  const std::string& text() const { return text_; }

 private:
  void add(const std::vector<std::string>& cells) {
    if (cells.size() != width_) throw Error("table row width mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) text_ += (i ? "," : "") + cells[i];
    text_ += '\n';
  }
  std::size_t width_;
  std::string text_;
};

std::string num(double x) { return format_number(x); }
std::string num(std::size_t x) { return std::to_string(x); }
std::string num(long long x) { return std::to_string(x); }
std::string num(int x) { return std::to_string(x); }

std::string class_text(const HomologyClass& alpha) {
  std::string s;
  for (std::size_t i = 0; i < alpha.size(); ++i) s += (i ? ";" : "") + std::to_string(alpha[i]);
  return s;
}

// Shared state of one run.
struct Context {
  const ExperimentConfig& cfg;
  const json& params;
  const json& verify;
  bool verifying;
  fs::path dir;
  std::vector<std::pair<std::string, std::string>> files;  // name, content
  std::vector<VerifyCheck> checks;
  std::vector<std::pair<std::string, double>> stages;

  EnumerationOptions enumeration() const {
    EnumerationOptions eo;
    eo.threads = cfg.threads;
    if (params.contains("max_orbits")) eo.max_orbits = params["max_orbits"].get<std::size_t>();
    return eo;
  }
  template <class T>
  T param(const std::string& key, T fallback) const {
    return params.contains(key) ? params[key].get<T>() : fallback;
  }
  template <class T>
  T expect(const std::string& key, T fallback) const {
    return verify.contains(key) ? verify[key].get<T>() : fallback;
  }
  bool wants(const std::string& key, bool by_default = true) const {
    return verify.contains(key) ? verify[key].get<bool>() : by_default;
  }
  std::vector<double> grid() const {
    if (!params.contains("T_grid")) throw ConfigError("config key 'params.T_grid': required for " + cfg.operation);
    return params["T_grid"].get<std::vector<double>>();
  }
  LengthWindow offset() const {
    if (!params.contains("offset")) return {-1.0, 0.0};
    return {params["offset"][0].get<double>(), params["offset"][1].get<double>()};
  }
  void emit(const std::string& name, const Table& table) { files.emplace_back(name, table.text()); }
  void check(std::string name, bool passed, std::string detail) {
    checks.push_back({std::move(name), passed, std::move(detail)});
  }
  template <class Fn>
  auto stage(const std::string& name, Fn&& fn) {
    const auto t0 = Clock::now();
    if constexpr (std::is_void_v<decltype(fn())>) {
      fn();
      stages.emplace_back(name, std::chrono::duration<double>(Clock::now() - t0).count());
    } else {
      auto out = fn();
      stages.emplace_back(name, std::chrono::duration<double>(Clock::now() - t0).count());
      return out;
    }
  }
};

bool tail_non_increasing(const std::vector<double>& x) {
  if (x.size() < 3) return false;
  const std::size_t n = x.size();
  return x[n - 1] <= x[n - 2] && x[n - 2] <= x[n - 3];
}

bool tail_decreasing(const std::vector<double>& x) {
  if (x.size() < 3) return false;
  const std::size_t n = x.size();
  return x[n - 1] < x[n - 2] && x[n - 2] < x[n - 3];
}

std::string tail_text(const std::vector<double>& x) {
  std::string s;
  for (std::size_t i = x.size() >= 3 ? x.size() - 3 : 0; i < x.size(); ++i) s += (s.empty() ? "" : " ") + num(x[i]);
  return s;
}

HomologyClass alpha_param(const Context& ctx, const SuspensionSystem& sys) {
  if (ctx.params.contains("alpha")) return ctx.params["alpha"].get<HomologyClass>();
  return HomologyClass(sys.betti(), 0);
}

void op_pressure(Context& ctx, const SuspensionSystem& sys) {
  const EdgeFunction q = edge_function_param(ctx.params, "potential", sys, sys.potential());
  const double P = ctx.stage("pressure", [&] { return flow_pressure(sys.shift(), sys.roof(), q); });
  Table t({"fixture", "pressure"});
  t.row({ctx.cfg.fixture, num(P)});
  ctx.emit("pressure.csv", t);
  if (!ctx.verifying) return;
  if (ctx.verify.contains("expected")) {
    const double expected = ctx.verify["expected"].get<double>();
    const double tol = ctx.expect("tolerance", 1e-10);
    ctx.check("pressure", std::fabs(P - expected) <= tol,
              "P = " + num(P) + ", expected " + num(expected) + " +- " + num(tol));
  } else {
    ctx.check("pressure", std::isfinite(P), "P = " + num(P));
  }
}

void op_orbits(Context& ctx, const SuspensionSystem& sys) {
  const auto eo = ctx.enumeration();
  std::vector<PeriodicOrbit> orbits;
  std::size_t max_word = 0;
  if (ctx.params.contains("window")) {
    const LengthWindow w{ctx.params["window"][0].get<double>(), ctx.params["window"][1].get<double>()};
    orbits = ctx.stage("enumerate", [&] { return enumerate_orbits(sys, w, eo); });
  } else {
    max_word = ctx.param<std::size_t>("max_word", 10);
    orbits = ctx.stage("enumerate", [&] { return enumerate_by_word_length(sys, max_word, eo); });
  }
  std::ostringstream csv;
  write_orbits_csv(csv, orbits);
  ctx.files.emplace_back("orbits.csv", csv.str());
  if (max_word == 0) return;

  std::vector<std::size_t> enumerated(max_word + 1, 0);
  for (const auto& o : orbits) ++enumerated[o.word_length()];
  Table t({"word_length", "enumerated", "moebius"});
  bool agree = true;
  std::size_t first_bad = 0;
  for (std::size_t n = 1; n <= max_word; ++n) {
    const auto m = moebius_prime_count(sys.shift(), n);
    if (static_cast<std::int64_t>(enumerated[n]) != m && agree) {
      agree = false;
      first_bad = n;
    }
    t.row({num(n), num(enumerated[n]), num(static_cast<long long>(m))});
  }
  ctx.emit("counts.csv", t);
  if (ctx.verifying && ctx.wants("moebius"))
    ctx.check("moebius", agree,
              agree ? "prime counts agree for word lengths 1.." + num(max_word)
                    : "mismatch at word length " + num(first_bad));
}

void op_beta(Context& ctx, const SuspensionSystem& sys) {
  const EdgeFunction q = edge_function_param(ctx.params, "potential", sys, sys.potential());
  const auto cp = ctx.stage("newton", [&] { return build_cohomology_pressure(sys, q); });
  const std::size_t b = cp.dimension();
  Table t({"quantity", "value"});
  for (std::size_t i = 0; i < b; ++i) t.row({"xi_" + num(i), num(cp.minimizer()[i])});
  t.row({"beta", num(cp.minimum())});
  for (std::size_t i = 0; i < b; ++i)
    for (std::size_t j = 0; j < b; ++j) t.row({"hessian_" + num(i) + "_" + num(j), num(cp.hessian_at_minimizer()[i * b + j])});
  t.row({"hessian_det", num(cp.hessian_determinant())});
  ctx.emit("beta.csv", t);
  if (!ctx.verifying) return;
  const double tol = ctx.expect("tolerance", 1e-9);
  auto compare = [&](const std::string& name, const std::vector<double>& got, const std::vector<double>& want, double tl) {
    if (got.size() != want.size()) {
      ctx.check(name, false, "expected " + num(want.size()) + " components, got " + num(got.size()));
      return;
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < got.size(); ++i) worst = std::max(worst, std::fabs(got[i] - want[i]));
    ctx.check(name, worst <= tl, "max deviation " + num(worst) + " (tolerance " + num(tl) + ")");
  };
  if (ctx.verify.contains("xi")) compare("xi", cp.minimizer(), ctx.verify["xi"].get<std::vector<double>>(), tol);
  if (ctx.verify.contains("beta")) compare("beta", {cp.minimum()}, {ctx.verify["beta"].get<double>()}, tol);
  if (ctx.verify.contains("hessian"))
    compare("hessian", cp.hessian_at_minimizer(), ctx.verify["hessian"].get<std::vector<double>>(),
            ctx.expect("hessian_tolerance", 1e-4));
  if (ctx.checks.empty()) ctx.check("beta", std::isfinite(cp.minimum()), "beta = " + num(cp.minimum()));
}

void op_count(Context& ctx, const SuspensionSystem& sys) {
  const EdgeFunction q = edge_function_param(ctx.params, "potential", sys, sys.potential());
  const auto grid = ctx.grid();
  const LengthWindow offset = ctx.offset();
  const auto eo = ctx.enumeration();

  if (!ctx.params.contains("alpha")) {
    // growth of the total weighted count
    const std::string r = ctx.param<std::string>("route", "auto");
    const GrowthRoute route =
        r == "lattice" ? GrowthRoute::LatticeTrace : r == "enumeration" ? GrowthRoute::Enumeration : GrowthRoute::Automatic;
    const double P = flow_pressure(sys.shift(), sys.roof(), q);
    const auto points = ctx.stage("growth", [&] { return growth_rate_estimate(sys, q, offset, grid, route, eo); });
    Table t({"T", "count", "log_pi", "estimate", "pressure", "error"});
    std::vector<double> errors;
    for (const auto& p : points) {
      errors.push_back(std::fabs(p.estimate - P));
      t.row({num(p.T), num(p.count), num(p.log_pi), num(p.estimate), num(P), num(errors.back())});
    }
    ctx.emit("growth.csv", t);
    if (!ctx.verifying) return;
    const double tol = ctx.expect("max_error", 0.05);
    ctx.check("growth_error", errors.back() < tol,
              "|estimate - P| = " + num(errors.back()) + " at T = " + num(grid.back()) + " (bound " + num(tol) + ")");
    if (ctx.wants("tail_monotone"))
      ctx.check("growth_tail", tail_non_increasing(errors), "final errors " + tail_text(errors));
    return;
  }

  const HomologyClass alpha = alpha_param(ctx, sys);
  const auto cp = ctx.stage("newton", [&] { return build_cohomology_pressure(sys, q); });
  const EdgeFunction zero = EdgeFunction::constant(sys.shift().edge_count(), 0.0);
  const auto stats = ctx.stage(
      "enumerate", [&] { return class_window_sweep(sys, q, alpha, zero, 0.0, 1.0, grid, offset, eo); });
  Table t({"T", "alpha", "count", "observed", "predicted", "ratio"});
  std::vector<double> ratios, deviation;
  for (const auto& s : stats) {
    const double predicted = predict_in_class(cp, alpha, offset, s.T);
    const double ratio = s.total.pi / predicted;
    ratios.push_back(ratio);
    deviation.push_back(std::fabs(ratio - 1.0));
    t.row({num(s.T), class_text(alpha), num(s.total.count), num(s.total.pi), num(predicted), num(ratio)});
  }
  ctx.emit("count.csv", t);
  if (!ctx.verifying) return;
  double lo = 0.75, hi = 1.25;
  if (ctx.verify.contains("band")) {
    lo = ctx.verify["band"][0].get<double>();
    hi = ctx.verify["band"][1].get<double>();
  }
  ctx.check("count_band", ratios.back() >= lo && ratios.back() <= hi,
            "ratio " + num(ratios.back()) + " at T = " + num(grid.back()) + ", band [" + num(lo) + ", " + num(hi) + "]");
  if (ctx.wants("tail_monotone"))
    ctx.check("count_tail", tail_non_increasing(deviation), "final |ratio - 1| " + tail_text(deviation));
}

void op_equidistribute(Context& ctx, const SuspensionSystem& sys) {
  const EdgeFunction q = edge_function_param(ctx.params, "potential", sys, sys.potential());
  const EdgeFunction psi =
      edge_function_param(ctx.params, "psi", sys, EdgeFunction::indicator(sys.shift().edge_count(), 0));
  const HomologyClass alpha = alpha_param(ctx, sys);
  const auto grid = ctx.grid();
  const auto cp = ctx.stage("newton", [&] { return build_cohomology_pressure(sys, q); });
  const auto points = ctx.stage("enumerate", [&] {
    return equidistribute_in_class(sys, cp, alpha, psi, grid, ctx.offset(), ctx.enumeration());
  });
  Table t({"T", "count", "orbital", "reference", "gap", "empty"});
  std::vector<double> gaps;
  for (const auto& p : points) {
    if (!p.empty) gaps.push_back(p.gap);
    t.row({num(p.T), num(p.count), num(p.orbital), num(p.reference), num(p.gap), p.empty ? "1" : "0"});
  }
  ctx.emit("equidistribute.csv", t);
  if (!ctx.verifying) return;
  if (gaps.empty()) {
    ctx.check("equidistribution_gap", false, "class not attained on the grid");
    return;
  }
  const double tol = ctx.expect("max_gap", 0.05);
  ctx.check("equidistribution_gap", gaps.back() < tol, "gap " + num(gaps.back()) + " (bound " + num(tol) + ")");
  if (ctx.wants("tail_decreasing"))
    ctx.check("equidistribution_tail", tail_decreasing(gaps), "final gaps " + tail_text(gaps));
}

void op_ld(Context& ctx, const SuspensionSystem& sys) {
  const EdgeFunction q = edge_function_param(ctx.params, "potential", sys, sys.potential());
  const EdgeFunction psi =
      edge_function_param(ctx.params, "psi", sys, EdgeFunction::indicator(sys.shift().edge_count(), 0));
  const HomologyClass alpha = alpha_param(ctx, sys);
  const double epsilon = ctx.param("epsilon", 0.2);
  const auto grid = ctx.grid();
  const auto cp = ctx.stage("newton", [&] { return build_cohomology_pressure(sys, q); });
  const auto ld = ctx.stage("enumerate", [&] {
    return large_deviation_ratio(sys, cp, alpha, psi, epsilon, grid, ctx.offset(), ctx.enumeration());
  });
  Table t({"T", "ratio"});
  for (std::size_t i = 0; i < ld.T.size(); ++i) t.row({num(ld.T[i]), num(ld.ratio[i])});
  ctx.emit("ld.csv", t);
  Table fit({"epsilon", "reference", "slope", "exact_zero"});
  fit.row({num(epsilon), num(ld.reference), num(ld.slope), ld.exact_zero ? "1" : "0"});
  ctx.emit("ld_fit.csv", fit);
  if (ctx.verifying && ctx.wants("negative_slope"))
    ctx.check("ld_slope", !ld.exact_zero && ld.slope < 0.0,
              ld.exact_zero ? "no deviating orbits, slope undefined" : "slope " + num(ld.slope));
}

void op_link(Context& ctx) {
  struct Pair {
    std::string a, b;
    PolylineCurve ca, cb;
  };
  std::vector<Pair> pairs;
  const json pairs_param = ctx.params.contains("pairs") ? ctx.params["pairs"] : json("hopf");
  if (pairs_param.is_string()) {
    auto [a, b] = hopf_pair(ctx.param<std::size_t>("hopf_samples", 400));
    pairs.push_back({"hopf_a", "hopf_b", std::move(a), std::move(b)});
  } else {
    TemplateSpec spec;
    spec.samples_per_symbol = ctx.param<std::size_t>("samples_per_symbol", spec.samples_per_symbol);
    for (const auto& p : pairs_param) {
      const auto a = p[0].get<std::string>(), b = p[1].get<std::string>();
      const auto wa = word_from_string(a), wb = word_from_string(b);
      auto canonical = [](std::vector<EdgeId> w) {
        std::rotate(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(least_rotation(w)), w.end());
        return w;
      };
      if (canonical(wa) == canonical(wb))
        throw ConfigError("config key 'params.pairs': pair " + a + " / " + b + " repeats one orbit");
      pairs.push_back({a, b, realize_orbit(spec, wa), realize_orbit(spec, wb)});
    }
  }
  const std::size_t samples = ctx.param<std::size_t>("quadrature_samples", 400);
  CrossingOptions co;
  co.seed = ctx.cfg.seed;

  struct Row {
    LinkingResult lk;
    double pair = 0, expected = 0, err = 0, refined_err = 0, order = 0;
  };
  std::vector<Row> rows(pairs.size());
  ctx.stage("linking", [&] {
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const auto& p = pairs[i];
      Row& r = rows[i];
      r.lk = link(p.ca, p.cb, co);
      const std::size_t n = std::max<std::size_t>(1, (samples + std::min(p.ca.size(), p.cb.size()) - 1) /
                                                         std::min(p.ca.size(), p.cb.size()));
      r.expected = r.lk.exact / (p.ca.period() * p.cb.period());
      r.pair = orbit_pair_integral(p.ca, p.cb, n);
      r.err = std::fabs(r.pair - r.expected);
      r.refined_err = std::fabs(orbit_pair_integral(p.ca, p.cb, 2 * n) - r.expected);
      r.order = std::log2(r.err / r.refined_err);
    }
  });
  Table t({"a", "b", "crossing", "gauss", "error", "min_distance", "pair_integral", "lk_over_lengths", "pair_error",
           "refined_pair_error", "order"});
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const Row& r = rows[i];
    t.row({pairs[i].a, pairs[i].b, num(r.lk.exact), num(r.lk.numeric), num(r.lk.error), num(r.lk.min_distance),
           num(r.pair), num(r.expected), num(r.err), num(r.refined_err), num(r.order)});
  }
  ctx.emit("link.csv", t);
  if (!ctx.verifying) return;

  const double tol = ctx.expect("integrality", 1e-6);
  const double dmin = ctx.expect("min_distance", 1e-2);
  const double ptol = ctx.expect("pair_tolerance", 1e-4);
  const double min_order = ctx.expect("min_order", 1.8);
  std::size_t eligible = 0, integral = 0, pair_ok = 0, order_ok = 0;
  for (const Row& r : rows) {
    if (r.lk.min_distance > dmin) {
      ++eligible;
      if (r.lk.error < tol) ++integral;
    }
    if (r.err < ptol) ++pair_ok;
    if (r.order >= min_order || r.err < 1e-12) ++order_ok;
  }
  ctx.check("integrality", eligible > 0 && integral == eligible,
            num(integral) + "/" + num(eligible) + " pairs with |gauss - crossing| < " + num(tol));
  ctx.check("pair_identity", pair_ok == rows.size(), num(pair_ok) + "/" + num(rows.size()) + " pairs within " + num(ptol));
  ctx.check("pair_refinement", order_ok == rows.size(),
            num(order_ok) + "/" + num(rows.size()) + " pairs with observed order >= " + num(min_order));
}

void op_lambda_scan(Context& ctx) {
  LambdaScanOptions o;
  o.pairs = ctx.param<std::size_t>("pairs", o.pairs);
  o.r_min = ctx.param("r_min", o.r_min);
  o.decades = ctx.param<std::size_t>("decades", o.decades);
  o.trend_tolerance = ctx.param("trend_tolerance", o.trend_tolerance);
  o.seed = ctx.cfg.seed;
  o.threads = ctx.cfg.threads;
  const auto report = ctx.stage("scan", [&] { return lambda_bound_scan(TemplateSpec{}, o); });
  Table t({"r_lo", "r_hi", "samples", "max_r_lambda"});
  for (const auto& d : report.decades) t.row({num(d.r_lo), num(d.r_hi), num(d.samples), num(d.max_r_lambda)});
  ctx.emit("lambda_scan.csv", t);
  Table s({"pairs", "K_emp", "bounded"});
  s.row({num(o.pairs), num(report.K_emp), report.bounded ? "1" : "0"});
  ctx.emit("lambda_summary.csv", s);
  if (!ctx.verifying) return;
  if (ctx.wants("bounded"))
    ctx.check("lambda_bounded", report.bounded, "K_emp " + num(report.K_emp) + " over " + num(report.decades.size()) +
                                                    " decades");
  if (ctx.verify.contains("max_K")) {
    const double cap = ctx.verify["max_K"].get<double>();
    ctx.check("lambda_constant", report.K_emp <= cap, "K_emp " + num(report.K_emp) + " (cap " + num(cap) + ")");
  }
}

void op_helicity(Context& ctx) {
  const double A = ctx.param("A", 1.0), B = ctx.param("B", 1.0), C = ctx.param("C", 1.0);
  const double s = ctx.param("scale", 2.0);
  HelicityOptions ho;
  if (ctx.params.contains("grids")) ho.grids = ctx.params["grids"].get<std::vector<std::size_t>>();
  const AnalyticField field = AnalyticField::abc(A, B, C);
  const auto est = ctx.stage("helicity", [&] { return helicity_analytic(field, ho); });
  const auto scaled = ctx.stage("scaled", [&] { return helicity_analytic(field.scaled(s), ho); });
  Table t({"quantity", "value"});
  for (std::size_t i = 0; i < est.grids.size(); ++i) t.row({"grid_" + num(est.grids[i]), num(est.grid_values[i])});
  t.row({"richardson", num(est.value)});
  t.row({"error", num(est.error)});
  t.row({"observed_order", num(est.observed_order)});
  t.row({"scale", num(s)});
  t.row({"scaled_richardson", num(scaled.value)});
  t.row({"scaled_ratio", num(scaled.value / est.value)});
  ctx.emit("helicity.csv", t);
  if (!ctx.verifying) return;
  const double expected = ctx.expect("expected", A * A + B * B + C * C);
  const std::size_t check_grid = ctx.expect<std::size_t>("check_grid", 40);
  const auto it = std::find(est.grids.begin(), est.grids.end(), check_grid);
  if (it == est.grids.end()) {
    ctx.check("helicity_grid", false, "grid " + num(check_grid) + " not among the computed grids");
  } else {
    const double v = est.grid_values[static_cast<std::size_t>(it - est.grids.begin())];
    const double rel = std::fabs(v / expected - 1.0), tol = ctx.expect("grid_tolerance", 1e-2);
    ctx.check("helicity_grid", rel < tol, "grid " + num(check_grid) + ": " + num(v) + ", relative error " + num(rel));
  }
  const double rel = std::fabs(est.value / expected - 1.0), tol = ctx.expect("extrapolated_tolerance", 1e-3);
  ctx.check("helicity_richardson", rel < tol, "extrapolated " + num(est.value) + ", relative error " + num(rel));
  // the same grids see sX, so every grid value scales exactly by s^2 up to rounding
  double worst = 0.0;
  for (std::size_t i = 0; i < est.grid_values.size(); ++i)
    worst = std::max(worst, std::fabs(scaled.grid_values[i] / (s * s * est.grid_values[i]) - 1.0));
  const double stol = ctx.expect("scaling_tolerance", 1e-9);
  ctx.check("helicity_scaling", worst <= stol, "max |H(sX) / (s^2 H(X)) - 1| = " + num(worst));
}

struct TemplateWindow {
  std::vector<PeriodicOrbit> orbits;
  std::vector<std::vector<std::uint64_t>> keys;
};

TemplateWindow template_window(const SuspensionSystem& sys, double lo, double hi, bool class_zero,
                               const EnumerationOptions& eo) {
  TemplateWindow w;
  for (auto& o : enumerate_orbits(sys, {lo, hi}, eo)) {
    if (class_zero && std::any_of(o.homology.begin(), o.homology.end(), [](std::int64_t c) { return c != 0; }))
      continue;
    w.keys.push_back(template_strand_keys(o.word));
    w.orbits.push_back(std::move(o));
  }
  return w;
}

void require_template(const SuspensionSystem& sys) {
  if (sys.shift().vertex_count() != 1 || sys.shift().edge_count() != 2)
    throw ConfigError("config key 'fixture': operation needs the two-symbol template system");
}

void op_average_link(Context& ctx, const SuspensionSystem& system) {
  require_template(system);
  const EdgeFunction phi = edge_function_param(ctx.params, "potential", system, system.potential());
  const SuspensionSystem sys = system.with_potential(phi);
  const bool partner_zero = ctx.param("partner_class_zero", false);
  const auto eo = ctx.enumeration();
  Table t({"T", "value", "pairs", "first", "second", "min_term", "max_term"});
  ctx.stage("average", [&] {
    for (double T : ctx.grid()) {
      const auto first = template_window(sys, T - 1, T, true, eo);
      const auto second = template_window(sys, T, T + 1, partner_zero, eo);
      OrbitFamily f, g;
      for (const auto& o : first.orbits) {
        f.length.push_back(o.length);
        f.weight.push_back(o.weight);
      }
      for (const auto& o : second.orbits) {
        g.length.push_back(o.length);
        g.weight.push_back(o.weight);
      }
      const auto e = average_linking(
          f, g,
          [&](std::size_t i, std::size_t j) -> std::optional<int> {
            return template_linking(first.orbits[i].word, first.keys[i], second.orbits[j].word, second.keys[j]);
          },
          T);
      t.row({num(T), num(e.value), num(e.pairs), num(f.size()), num(g.size()), num(e.min_term), num(e.max_term)});
    }
  });
  ctx.emit("average_link.csv", t);
}

void op_study(Context& ctx, const SuspensionSystem& sys) {
  require_template(sys);
  const EdgeFunction phi =
      edge_function_param(ctx.params, "potential", sys, EdgeFunction::constant(sys.shift().edge_count(), 0.0));
  const auto grid = ctx.grid();
  StudyOptions so;
  so.T_ref = ctx.param("T_ref", 0.0);
  so.delta = ctx.param("delta", so.delta);
  so.lambda_pairs = ctx.param<std::size_t>("lambda_pairs", so.lambda_pairs);
  so.partner_class_zero = ctx.param("partner_class_zero", false);
  so.refine_check = ctx.param("refine_check", false);
  so.seed = ctx.cfg.seed;
  so.threads = ctx.cfg.threads;
  so.enumeration = ctx.enumeration();
  const auto report = ctx.stage("study", [&] { return convergence_study(sys, phi, grid, so); });

  Table t({"T", "value", "reference", "gap", "pairs", "min_separation"});
  std::vector<double> gaps;
  for (const auto& r : report.rows) {
    gaps.push_back(r.gap);
    t.row({num(r.T), num(r.average.value), num(r.reference), num(r.gap), num(r.average.pairs), num(r.min_separation)});
  }
  ctx.emit("study.csv", t);
  const auto& ref = report.reference;
  Table s({"quantity", "value"});
  s.row({"reference", num(ref.value)});
  s.row({"reference_orbits", num(report.reference_orbits)});
  s.row({"delta", num(ref.delta)});
  s.row({"tail_bound", num(ref.tail_bound)});
  // without the refinement rerun there is no quadrature error estimate
  s.row({"quadrature_error", so.refine_check ? num(ref.quadrature_error) : "nan"});
  s.row({"excluded_mass", num(ref.excluded_mass)});
  s.row({"below_floor", num(ref.below_floor)});
  s.row({"K_emp", num(report.K_emp)});
  s.row({"min_separation", num(report.min_separation)});
  s.row({"verdict", to_string(report.verdict)});
  ctx.emit("study_reference.csv", s);
  if (!ctx.verifying) return;

  if (ctx.wants("gap_decrease"))
    ctx.check("study_gap", gaps.back() < gaps.front(),
              "gap " + num(gaps.front()) + " at T = " + num(grid.front()) + ", " + num(gaps.back()) + " at T = " +
                  num(grid.back()));
  if (ctx.wants("separation"))
    ctx.check("study_separation", report.separation_ok, "min section separation " + num(report.min_separation));
  if (ctx.wants("invariance")) {
    const double c = ctx.param("invariance_shift", 0.7);
    const EdgeFunction shifted = phi + EdgeFunction::constant(phi.size(), c);
    const auto other = ctx.stage("invariance", [&] { return convergence_study(sys, shifted, grid, so); });
    bool same = other.reference.value == report.reference.value;
    for (std::size_t i = 0; i < gaps.size(); ++i) same = same && other.rows[i].average.value == report.rows[i].average.value;
    ctx.check("study_invariance", same, same ? "phi + " + num(c) + " reproduces every value bit for bit"
                                             : "values changed under phi + " + num(c));
  }
}

std::string utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << text;
    if (!out) throw Error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

json manifest_json(const ExperimentConfig& cfg, const std::string& status, const std::string& error,
                   const std::string& started, double wall, const Context* ctx, const RunResult& result) {
  json m{{"format", "orbitlink-manifest"},
         {"version", 1},
         {"status", status},
         {"library_version", library_version()},
         {"config", config_to_json(cfg)},
         {"started", started},
         {"wall_seconds", wall},
         {"exit_code", result.exit_code}};
  if (!error.empty()) m["error"] = error;
  json stages = json::array(), files = json::array(), checks = json::array();
  if (ctx) {
    for (const auto& [name, seconds] : ctx->stages) stages.push_back({{"name", name}, {"seconds", seconds}});
    for (const auto& c : ctx->checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  }
  for (std::size_t i = 0; i < result.files.size(); ++i)
    files.push_back({{"name", result.files[i]}, {"sha256", result.checksums[i]}});
  m["stages"] = stages;
  m["files"] = files;
  m["checks"] = checks;
  return m;
}

}  // namespace

const char* library_version() { return ORBITLINK_VERSION; }

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) throw Error("sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return sha256_hex(buf.str());
}

RunResult run(const ExperimentConfig& input, const RunOptions& options) {
  ExperimentConfig cfg = input;
  if (options.out_dir) {
    cfg.output_dir = *options.out_dir;
  } else if (const char* env = std::getenv("ORBITLINK_OUT"); env && *env) {
    cfg.output_dir = env;
  }
  if (options.threads) cfg.threads = *options.threads;
  if (options.seed) cfg.seed = *options.seed;

  RunResult result;
  result.out_dir = cfg.output_dir;
  const std::string started = utc_now();
  const auto t0 = Clock::now();
  const fs::path dir(cfg.output_dir);
  const fs::path manifest = dir / "manifest.json";
  result.manifest_path = manifest.string();
  auto wall = [&] { return std::chrono::duration<double>(Clock::now() - t0).count(); };

  try {
    fs::create_directories(dir);
    // placeholder so an interrupted run is never mistaken for a finished one
    write_text(manifest, manifest_json(cfg, "failed", "run did not finish", started, 0.0, nullptr, result).dump(2) + "\n");
  } catch (const std::exception& e) {
    result.exit_code = 1;
    result.error = e.what();
    return result;
  }

  Context ctx{cfg, cfg.params, cfg.verify, options.verify, dir, {}, {}, {}};
  try {
    if (cfg.threads == 0) throw ConfigError("config key 'threads': must be positive");
    std::optional<SuspensionSystem> sys;
    if (!cfg.fixture.empty()) sys = ctx.stage("load", [&] { return resolve_fixture(cfg.fixture); });
    if (needs_fixture(cfg.operation) && !sys) throw ConfigError("config key 'fixture': required for " + cfg.operation);
    static const std::map<std::string, std::function<void(Context&, const SuspensionSystem*)>> dispatch{
        {"pressure", [](Context& c, const SuspensionSystem* s) { op_pressure(c, *s); }},
        {"orbits", [](Context& c, const SuspensionSystem* s) { op_orbits(c, *s); }},
        {"beta", [](Context& c, const SuspensionSystem* s) { op_beta(c, *s); }},
        {"count", [](Context& c, const SuspensionSystem* s) { op_count(c, *s); }},
        {"equidistribute", [](Context& c, const SuspensionSystem* s) { op_equidistribute(c, *s); }},
        {"ld", [](Context& c, const SuspensionSystem* s) { op_ld(c, *s); }},
        {"link", [](Context& c, const SuspensionSystem*) { op_link(c); }},
        {"lambda-scan", [](Context& c, const SuspensionSystem*) { op_lambda_scan(c); }},
        {"helicity", [](Context& c, const SuspensionSystem*) { op_helicity(c); }},
        {"average-link", [](Context& c, const SuspensionSystem* s) { op_average_link(c, *s); }},
        {"study", [](Context& c, const SuspensionSystem* s) { op_study(c, *s); }},
    };
    const auto op = dispatch.find(cfg.operation);
    if (op == dispatch.end()) throw ConfigError("config key 'operation': unknown operation '" + cfg.operation + "'");
    op->second(ctx, sys ? &*sys : nullptr);

    for (const auto& [name, text] : ctx.files) {
      write_text(dir / name, text);
      result.files.push_back(name);
      result.checksums.push_back(sha256_hex(text));
    }
    result.checks = ctx.checks;
    const bool all = std::all_of(ctx.checks.begin(), ctx.checks.end(), [](const VerifyCheck& c) { return c.passed; });
    result.exit_code = all ? 0 : 1;
    if (!all) result.error = "verification failed";
    write_text(manifest, manifest_json(cfg, "ok", result.error, started, wall(), &ctx, result).dump(2) + "\n");
  } catch (const std::exception& e) {
    result.exit_code = dynamic_cast<const ConfigError*>(&e) ? 2 : 1;
    result.error = e.what();
    result.checks = ctx.checks;
    try {
      write_text(manifest, manifest_json(cfg, "failed", result.error, started, wall(), &ctx, result).dump(2) + "\n");
    } catch (...) {
    }
  }
  return result;
}

RunResult run_file(const std::string& config_path, const RunOptions& options) {
  try {
    return run(load_config(config_path), options);
  } catch (const std::exception& e) {
    RunResult r;
    r.exit_code = 2;
    r.error = e.what();
    return r;
  }
}

RunResult replay(const std::string& manifest_path, const std::optional<std::string>& out_dir) {
  json m;
  try {
    std::ifstream in(manifest_path);
    if (!in) throw ConfigError("cannot open manifest '" + manifest_path + "'");
    m = json::parse(in);
    if (m.value("format", "") != "orbitlink-manifest") throw ConfigError("not an orbitlink manifest");
    if (m.value("status", "") != "ok") throw ConfigError("manifest records a failed run");
  } catch (const std::exception& e) {
    RunResult r;
    r.exit_code = 2;
    r.error = e.what();
    return r;
  }
  RunOptions opts;
  opts.out_dir = out_dir ? *out_dir : (fs::path(manifest_path).parent_path() / "replay").string();
  RunResult r;
  try {
    r = run(config_from_json(m["config"]), opts);
  } catch (const std::exception& e) {
    r.exit_code = 2;
    r.error = e.what();
    return r;
  }
  if (r.exit_code == 2) return r;
  std::map<std::string, std::string> recorded;
  for (const auto& f : m["files"]) recorded[f["name"].get<std::string>()] = f["sha256"].get<std::string>();
  std::size_t matched = 0;
  for (std::size_t i = 0; i < r.files.size(); ++i)
    if (recorded.count(r.files[i]) && recorded[r.files[i]] == r.checksums[i]) ++matched;
  const bool same = matched == recorded.size() && r.files.size() == recorded.size();
  r.checks.push_back({"replay_checksums", same, num(matched) + "/" + num(recorded.size()) + " files reproduced"});
  if (!same && r.exit_code == 0) {
    r.exit_code = 1;
    r.error = "checksums differ from the manifest";
  }
  return r;
}

}  // namespace orbitlink
