#include "orbitlink/average_linking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "orbitlink/error.hpp"

namespace orbitlink {
namespace {

double sorted_sum(std::vector<double>& terms) {
  std::sort(terms.begin(), terms.end(), [](double a, double b) { return std::fabs(a) < std::fabs(b); });
  double s = 0.0;
  for (double t : terms) s += t;
  return s;
}

}  // namespace

AverageLinkingEntry average_linking(const OrbitFamily& first, const OrbitFamily& second, const LinkingLookup& lk,
                                    double T) {
  if (first.weight.size() != first.size() || second.weight.size() != second.size())
    throw InvalidInput("orbit family needs one weight per orbit");
  AverageLinkingEntry e;
  e.T = T;
  if (first.size() == 0 || second.size() == 0) {
    e.empty = true;
    e.value = std::numeric_limits<double>::quiet_NaN();
    return e;
  }
  const double m1 = *std::max_element(first.weight.begin(), first.weight.end());
  const double m2 = *std::max_element(second.weight.begin(), second.weight.end());
  e.log_scale = m1 + m2;
  std::vector<double> num, den;
  num.reserve(first.size() * second.size());
  den.reserve(first.size() * second.size());
  e.min_term = std::numeric_limits<double>::infinity();
  e.max_term = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < first.size(); ++i) {
    const double wi = first.weight[i] - m1;
    for (std::size_t j = 0; j < second.size(); ++j) {
      const auto value = lk(i, j);
      if (!value)
        throw InvalidInput("missing linking number for pair (" + std::to_string(i) + ", " + std::to_string(j) + ")");
      const double term = *value / (first.length[i] * second.length[j]);
      const double w = std::exp(wi + (second.weight[j] - m2));
      num.push_back(w * term);
      den.push_back(w);
      e.min_term = std::min(e.min_term, term);
      e.max_term = std::max(e.max_term, term);
    }
  }
  e.pairs = num.size();
  e.numerator = sorted_sum(num);
  e.denominator = sorted_sum(den);
  e.value = e.numerator / e.denominator;
  return e;
}

}  // namespace orbitlink
