#pragma once

#include "plap/grid.hpp"

#include <optional>

namespace plap {

/// Reflection of a point about the vertical line {x1 = a}.
inline Vec2 reflect(const Vec2& x, double a) { return {2 * a - x.x(), x.y()}; }

/// Two-point rearrangement variants.  `primal` sorts the larger value of
/// each mirror pair to the side {x1 < a}; `dual` sorts it to {x1 > a}.
enum class PolarizationVariant { primal, dual };

/// A vertical rearrangement plane {x1 = a} with 2a an integer multiple of h,
/// so the reflection maps lattice columns to lattice columns.
struct PolarizationPlane {
  double a = 0.0;  // snapped offset, a = k h / 2
  long k = 0;      // 2a / h
  long m = 0;      // mirror of column i is m - i; side by sign of 2i - m

  /// Throws when 2a is not an integer multiple of h.
  static PolarizationPlane aligned(const Grid& g, double a);
  /// Rounds a down to the nearest aligned offset.
  static PolarizationPlane aligned_floor(const Grid& g, double a);

  int mirror(int i) const { return int(m) - i; }
  /// +1 on {x1 > a}, -1 on {x1 < a}, 0 on the plane.
  int side(int i) const { return (2 * i > m) - (2 * i < m); }
};

/// Result of polarizing a node set.  `escaped` counts member nodes whose
/// rearranged position falls outside the lattice window; when it is zero the
/// cardinality of the set is preserved exactly.
struct SetPolarization {
  MaskArray mask;
  long escaped = 0;
};

/// Node set polarization.  On {x1 > a} a node survives iff both it and its
/// mirror belong to the set (intersection); on {x1 < a} iff either does
/// (union); plane nodes are unchanged.  The dual variant swaps the clauses.
SetPolarization polarize_set(const MaskArray& mask, const PolarizationPlane& plane,
                             PolarizationVariant variant);

struct SteinerWitness {
  double a = 0.0;
  PolarizationVariant variant = PolarizationVariant::primal;
  int i = 0, j = 0;  // a node moved by the polarization
};

struct SteinerReport {
  bool symmetric = false;
  std::optional<SteinerWitness> witness;
};

/// Characterization through rearrangements: the set is fixed by every primal
/// polarization with a >= 0 and every dual polarization with a <= 0.
SteinerReport steiner_by_polarization(const Grid& g, const MaskArray& mask);

/// Direct definition: every row of the mask is a contiguous segment symmetric
/// about the axis column.
SteinerReport steiner_by_row_segments(const Grid& g, const MaskArray& mask);

/// Runs both characterizations and cross-checks them; throws
/// InvariantViolation if they ever disagree.
SteinerReport is_steiner_symmetric(const Grid& g, const MaskArray& mask);

/// Domain monotonicity oracle: sub implies polarized sub.  Throws
/// std::invalid_argument when sub is not contained in super.
bool monotonicity_check(const MaskArray& sub, const MaskArray& super,
                        const PolarizationPlane& plane, PolarizationVariant variant);

}  // namespace plap
