#include "plap/polarization.hpp"

#include <cmath>

namespace plap {

PolarizationPlane PolarizationPlane::aligned(const Grid& g, double a) {
  const double two_a = 2 * a / g.h;
  const long k = std::llround(two_a);
  if (std::abs(two_a - double(k)) > 1e-9)
    throw std::invalid_argument("polarization plane: 2a must be an integer multiple of h");
  PolarizationPlane p;
  p.k = k;
  p.a = double(k) * g.h / 2;
  p.m = k + 2L * g.i0;
  return p;
}

PolarizationPlane PolarizationPlane::aligned_floor(const Grid& g, double a) {
  const long k = long(std::floor(2 * a / g.h + 1e-12));
  PolarizationPlane p;
  p.k = k;
  p.a = double(k) * g.h / 2;
  p.m = k + 2L * g.i0;
  return p;
}

SetPolarization polarize_set(const MaskArray& mask, const PolarizationPlane& plane,
                             PolarizationVariant variant) {
  const int n1 = int(mask.rows()), n2 = int(mask.cols());
  const long m = plane.m;
  SetPolarization out;
  out.mask = mask;
  const bool primal = variant == PolarizationVariant::primal;
  for (int j = 0; j < n2; ++j) {
    for (int i = 0; i < n1; ++i) {
      if (2L * i <= m) continue;  // pairs are handled once, from the {x1 > a} side
      const long ip = m - i;
      if (ip >= 0 && ip < n1) {
        const bool here = mask(i, j), there = mask(int(ip), j);
        const bool both = here && there, either = here || there;
        out.mask(i, j) = primal ? both : either;
        out.mask(int(ip), j) = primal ? either : both;
      } else {
        // partner column outside the window reads as empty
        if (primal) {
          out.mask(i, j) = false;
          if (mask(i, j)) ++out.escaped;  // the union slot lies out of window
        } else {
          out.mask(i, j) = mask(i, j);
        }
      }
    }
    for (int i = 0; i < n1 && 2L * i < m; ++i) {
      const long ip = m - i;
      if (ip < n1) continue;  // already paired above
      if (primal) {
        out.mask(i, j) = mask(i, j);
      } else {
        out.mask(i, j) = false;
        if (mask(i, j)) ++out.escaped;
      }
    }
  }
  return out;
}

namespace {

std::optional<SteinerWitness> polarization_fix_witness(const Grid& g, const MaskArray& mask,
                                                       const PolarizationPlane& plane,
                                                       PolarizationVariant variant) {
  const SetPolarization p = polarize_set(mask, plane, variant);
  for (int j = 0; j < g.n2; ++j)
    for (int i = 0; i < g.n1; ++i)
      if (mask(i, j) != p.mask(i, j)) return SteinerWitness{plane.a, variant, i, j};
  return std::nullopt;
}

}  // namespace

SteinerReport steiner_by_polarization(const Grid& g, const MaskArray& mask) {
  // offsets beyond the window half-extent cannot move any in-window node
  const long kmax = 2L * std::max(g.i0, g.n1 - 1 - g.i0);
  for (long k = 0; k <= kmax; ++k) {
    PolarizationPlane plane;
    plane.k = k;
    plane.a = double(k) * g.h / 2;
    plane.m = k + 2L * g.i0;
    if (auto w = polarization_fix_witness(g, mask, plane, PolarizationVariant::primal))
      return {false, w};
    plane.k = -k;
    plane.a = -double(k) * g.h / 2;
    plane.m = -k + 2L * g.i0;
    if (auto w = polarization_fix_witness(g, mask, plane, PolarizationVariant::dual))
      return {false, w};
  }
  return {true, std::nullopt};
}

SteinerReport steiner_by_row_segments(const Grid& g, const MaskArray& mask) {
  for (int j = 0; j < g.n2; ++j) {
    int lo = -1, hi = -1;
    long count = 0;
    for (int i = 0; i < g.n1; ++i)
      if (mask(i, j)) {
        if (lo < 0) lo = i;
        hi = i;
        ++count;
      }
    if (lo < 0) continue;
    if (count != hi - lo + 1)  // not contiguous
      return {false, SteinerWitness{0.0, PolarizationVariant::primal, lo, j}};
    if (lo + hi != 2 * g.i0)  // not centered on the axis
      return {false, SteinerWitness{0.0, PolarizationVariant::primal, lo, j}};
  }
  return {true, std::nullopt};
}

SteinerReport is_steiner_symmetric(const Grid& g, const MaskArray& mask) {
  const SteinerReport by_pol = steiner_by_polarization(g, mask);
  const SteinerReport by_rows = steiner_by_row_segments(g, mask);
  if (by_pol.symmetric != by_rows.symmetric)
    throw InvariantViolation("steiner check: polarization and row-segment definitions disagree");
  return by_pol;
}

bool monotonicity_check(const MaskArray& sub, const MaskArray& super,
                        const PolarizationPlane& plane, PolarizationVariant variant) {
  if (sub.rows() != super.rows() || sub.cols() != super.cols())
    throw std::invalid_argument("monotonicity_check: masks on different lattices");
  if ((sub && !super).any())
    throw std::invalid_argument("monotonicity_check: first mask is not a subset of the second");
  const SetPolarization a = polarize_set(sub, plane, variant);
  const SetPolarization b = polarize_set(super, plane, variant);
  return !(a.mask && !b.mask).any();
}

}  // namespace plap
