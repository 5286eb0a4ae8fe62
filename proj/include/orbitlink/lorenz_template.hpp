#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "orbitlink/curve.hpp"
#include "orbitlink/markov_shift.hpp"

namespace orbitlink {

/// Two-eared Lorenz-like template thickened into a flow box.
///
/// The branch section is the rectangle {(x, 0, z)}, x = (u - 1/2) * branch_length,
/// z = lift * (2v - 1), u, v in [0,1].  Symbol 0 (u < 1/2) circles the left
/// ear about (-ear_radius, 0, 0) counter-clockwise and returns at u' = 2u;
/// symbol 1 circles the right ear about (ear_radius, 0, 0) clockwise and
/// returns at u' = 2u - 1.  The past is recorded in v: v' = v/3 + 2/3 after
/// symbol 0 and v' = v/3 after symbol 1, so returning strips arrive stacked,
/// left above right, and the return map is a baker's map.  Radius and height
/// are blended along each loop by s(tau) = (1 - cos(pi tau)) / 2, whose zero
/// slope at the section makes the flow direction continuous there.  The speed
/// jumps at the section when an orbit changes ear (2 pi times the distance to
/// the ear centre), and orbits on either side of u = 1/2 split in finite time.
struct TemplateSpec {
  double ear_radius = 1.0;
  double branch_length = 1.0;
  double lift = 0.5;
  std::size_t samples_per_symbol = 16;
};

/// Point of the template flow.
struct TemplateState {
  double u = 0.0;   ///< forward coordinate on the branch section
  double v = 0.0;   ///< backward coordinate
  double tau = 0.0; ///< time since the last section crossing, in [0, 1)
};

/// Position and velocity (per unit roof time) of the template flow.
Vec3 template_position(const TemplateSpec& spec, const TemplateState& s);
Vec3 template_velocity(const TemplateSpec& spec, const TemplateState& s);

/// Section coordinates (u_k, v_k) of the periodic orbit with the given
/// symbol word, k = 0..n-1.
std::vector<std::pair<double, double>> section_points(std::span<const EdgeId> word);

/// Closed polyline with samples_per_symbol vertices per symbol (roof time 1
/// per symbol).  Throws InvalidInput for symbols other than 0/1 and
/// GeometryError if the realized curve self-intersects.
PolylineCurve realize_orbit(const TemplateSpec& spec, std::span<const EdgeId> word, std::size_t samples_per_symbol = 0);

/// Ordering keys of the strands of a template orbit: key k packs the first
/// 62 symbols of the word read from position k + 1 (where strand k returns).
/// Keys of two periodic words compare like the infinite words as long as the
/// word lengths sum to at most 62.
std::vector<std::uint64_t> template_strand_keys(std::span<const EdgeId> word);

/// Linking number of two distinct template orbits from their words.  Strands
/// of different ears cross exactly when their return order is inverted, and
/// every crossing is positive (left over right), so lk is half the number of
/// inverted pairs.  Agrees with crossing_linking on the realized curves.
/// Throws InvalidInput if the word lengths sum to more than 62.
int template_linking(std::span<const EdgeId> a, std::span<const EdgeId> b);
int template_linking(std::span<const EdgeId> a, std::span<const std::uint64_t> keys_a, std::span<const EdgeId> b,
                     std::span<const std::uint64_t> keys_b);

/// Smallest distance between section points (x, z) of an orbit from `a` and
/// an orbit from `b`.  Orbits are given by their words and assumed distinct.
double section_separation(const TemplateSpec& spec, const std::vector<std::vector<EdgeId>>& a,
                          const std::vector<std::vector<EdgeId>>& b);

}  // namespace orbitlink
