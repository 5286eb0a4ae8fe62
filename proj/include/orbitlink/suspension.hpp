#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "orbitlink/markov_shift.hpp"

namespace orbitlink {

/// One real value per edge.  Used both for roof times and for symbolic
/// potentials (the integral of a flow potential over one roof interval).
class EdgeFunction {
 public:
  EdgeFunction() = default;
  explicit EdgeFunction(std::vector<double> values);
  static EdgeFunction constant(std::size_t edges, double c) {
    return EdgeFunction(std::vector<double>(edges, c));
  }
  /// 1 on `edge`, 0 elsewhere.
  static EdgeFunction indicator(std::size_t edges, EdgeId edge);

  std::size_t size() const { return values_.size(); }
  double operator[](EdgeId e) const { return values_[e]; }
  const std::vector<double>& values() const { return values_; }
  double min() const;
  double max() const;

  EdgeFunction operator+(const EdgeFunction& other) const;
  EdgeFunction operator-(const EdgeFunction& other) const;
  EdgeFunction operator*(double s) const;
  /// this + s * other
  EdgeFunction axpy(double s, const EdgeFunction& other) const;

 private:
  std::vector<double> values_;
};

/// Discrete model of a hyperbolic flow: suspension of an edge shift under a
/// positive roof, with a symbolic potential and integer homology labels.
///
/// Labels live in Z^b and are attributed to edges as point masses; the class
/// of a periodic orbit is the sum of its edge labels.
class SuspensionSystem {
 public:
  SuspensionSystem(MarkovShift shift, EdgeFunction roof, EdgeFunction potential,
                   std::vector<std::vector<std::int64_t>> labels = {}, std::string name = {});

  const MarkovShift& shift() const { return shift_; }
  const EdgeFunction& roof() const { return roof_; }
  const EdgeFunction& potential() const { return potential_; }
  std::size_t betti() const { return betti_; }
  std::span<const std::int64_t> label(EdgeId e) const {
    return {labels_.data() + e * betti_, betti_};
  }
  /// Component i of the labels as an edge function.
  EdgeFunction label_component(std::size_t i) const;
  const std::string& name() const { return name_; }

  /// Span delta if every periodic-orbit length lies in delta*Z (lattice case).
  const std::optional<double>& lattice_span() const { return lattice_span_; }
  bool is_weak_mixing() const { return !lattice_span_.has_value(); }

  /// Same system with another potential.
  SuspensionSystem with_potential(EdgeFunction potential) const;

 private:
  MarkovShift shift_;
  EdgeFunction roof_;
  EdgeFunction potential_;
  std::vector<std::int64_t> labels_;
  std::size_t betti_ = 0;
  std::string name_;
  std::optional<double> lattice_span_;
};

/// Prime periodic orbit of the suspension flow, stored in canonical form: the
/// lexicographically least rotation of its edge word (a Lyndon word).
struct PeriodicOrbit {
  std::vector<EdgeId> word;
  double length = 0.0;  ///< sum of roof values (least period)
  double weight = 0.0;  ///< sum of potential values
  std::vector<std::int64_t> homology;

  std::size_t word_length() const { return word.size(); }
  bool operator==(const PeriodicOrbit&) const = default;
};

/// Builds the orbit record for a closed word; throws InvalidInput if the word
/// is not a cycle.  The word is rotated to canonical form; primality is not
/// required here (see is_prime_word).
PeriodicOrbit make_orbit(const SuspensionSystem& system, std::span<const EdgeId> word);

/// Index of the lexicographically least rotation.
std::size_t least_rotation(std::span<const EdgeId> word);
/// True if the word is not a proper power of a shorter word.
bool is_prime_word(std::span<const EdgeId> word);
/// Dotted text form, e.g. "0.1.1".
std::string word_to_string(std::span<const EdgeId> word);
std::vector<EdgeId> word_from_string(const std::string& text);

/// Time integral of an edge density psi over the orbit: sum psi(e) * roof(e).
double orbit_integral(const SuspensionSystem& system, std::span<const EdgeId> word,
                      const EdgeFunction& density);

}  // namespace orbitlink
