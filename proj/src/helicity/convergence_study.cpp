#include "orbitlink/convergence_study.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "orbitlink/error.hpp"
#include "orbitlink/lambda_scan.hpp"

namespace orbitlink {
namespace {

struct Window {
  std::vector<PeriodicOrbit> orbits;
  std::vector<std::vector<std::uint64_t>> keys;
  std::vector<std::vector<EdgeId>> words() const {
    std::vector<std::vector<EdgeId>> w;
    for (const auto& o : orbits) w.push_back(o.word);
    return w;
  }
  OrbitFamily family() const {
    OrbitFamily f;
    for (const auto& o : orbits) {
      f.length.push_back(o.length);
      f.weight.push_back(o.weight);
    }
    return f;
  }
};

Window load_window(const SuspensionSystem& sys, double lo, double hi, bool class_zero, const EnumerationOptions& eo) {
  Window w;
  for (auto& o : enumerate_orbits(sys, {lo, hi}, eo)) {
    if (class_zero && std::any_of(o.homology.begin(), o.homology.end(), [](std::int64_t c) { return c != 0; }))
      continue;
    w.keys.push_back(template_strand_keys(o.word));
    w.orbits.push_back(std::move(o));
  }
  return w;
}

PolylineCurve realize_timed(const SuspensionSystem& sys, const TemplateSpec& spec, const std::vector<EdgeId>& word) {
  const PolylineCurve c = realize_orbit(spec, word);
  const std::size_t N = spec.samples_per_symbol;
  std::vector<double> dt;
  dt.reserve(c.size());
  for (EdgeId e : word)
    for (std::size_t j = 0; j < N; ++j) dt.push_back(sys.roof()[e] / static_cast<double>(N));
  return PolylineCurve(c.points(), std::move(dt), c.label());
}

}  // namespace

const char* to_string(GapVerdict v) {
  switch (v) {
    case GapVerdict::NoVerdict: return "none";
    case GapVerdict::NonIncreasing: return "non-increasing";
    case GapVerdict::Increasing: return "increasing";
  }
  return "?";
}

StudyReport convergence_study(const SuspensionSystem& system, const EdgeFunction& phi, const std::vector<double>& T_grid,
                              const StudyOptions& options) {
  const auto& shift = system.shift();
  if (shift.vertex_count() != 1 || shift.edge_count() != 2)
    throw InvalidInput("convergence study needs the two-symbol template shift");
  if (T_grid.empty()) throw InvalidInput("empty T grid");
  if (!std::is_sorted(T_grid.begin(), T_grid.end())) throw InvalidInput("T grid must be increasing");
  const SuspensionSystem sys = system.with_potential(phi);
  const bool labelled = sys.betti() > 0;

  StudyReport report;
  report.min_separation = std::numeric_limits<double>::infinity();
  for (double T : T_grid) {
    const Window first = load_window(sys, T - 1, T, labelled, options.enumeration);
    const Window second = load_window(sys, T, T + 1, labelled && options.partner_class_zero, options.enumeration);
    StudyRow row;
    row.T = T;
    row.average = average_linking(
        first.family(), second.family(),
        [&](std::size_t i, std::size_t j) -> std::optional<int> {
          return template_linking(first.orbits[i].word, first.keys[i], second.orbits[j].word, second.keys[j]);
        },
        T);
    row.min_separation = row.average.empty ? std::numeric_limits<double>::infinity()
                                           : section_separation(options.spec, first.words(), second.words());
    report.min_separation = std::min(report.min_separation, row.min_separation);
    report.rows.push_back(row);
  }
  report.separation_ok = report.min_separation > options.floor;

  // reference: mu x mu for the orbital measure of the reference window
  const double T_ref = options.T_ref > 0 ? options.T_ref : T_grid.back() + 2;
  const Window ref = load_window(sys, T_ref - 1, T_ref, labelled, options.enumeration);
  if (ref.orbits.empty()) throw InvalidInput("reference window has no orbits");
  report.reference_orbits = ref.orbits.size();
  OrbitalMixture mu;
  const double wmax = std::max_element(ref.orbits.begin(), ref.orbits.end(), [](const auto& a, const auto& b) {
                        return a.weight < b.weight;
                      })->weight;
  for (const auto& o : ref.orbits) {
    mu.curves.push_back(realize_timed(sys, options.spec, o.word));
    mu.weights.push_back(std::exp(o.weight - wmax));
  }
  LambdaScanOptions scan;
  scan.pairs = options.lambda_pairs;
  scan.seed = options.seed;
  scan.threads = options.threads;
  report.K_emp = lambda_bound_scan(options.spec, scan).K_emp;

  DoubleIntegralOptions di;
  di.delta = options.delta;
  di.floor = options.floor;
  di.K = 2 * report.K_emp;
  di.threads = options.threads;
  di.refine_check = options.refine_check;
  report.reference = double_integral_lambda(mu, di, [&](std::size_t i, std::size_t j) -> std::optional<double> {
    // disjoint orbits: the pair integral is lk / (l l')
    const int lk = template_linking(ref.orbits[i].word, ref.keys[i], ref.orbits[j].word, ref.keys[j]);
    return lk / (mu.curves[i].period() * mu.curves[j].period());
  });

  for (auto& row : report.rows) {
    row.reference = report.reference.value;
    row.gap = std::fabs(row.average.value - row.reference);
  }
  if (report.rows.size() >= 3) {
    const std::size_t n = report.rows.size();
    const bool down = report.rows[n - 1].gap <= report.rows[n - 2].gap && report.rows[n - 2].gap <= report.rows[n - 3].gap;
    report.verdict = down ? GapVerdict::NonIncreasing : GapVerdict::Increasing;
  }
  return report;
}

}  // namespace orbitlink
