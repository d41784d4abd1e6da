#pragma once

#include "plap/field.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace plap {

/// A point of the discrete nodal set: either the sub-grid zero of a lattice
/// edge whose endpoint values have opposite signs (linear interpolation), or
/// a node whose |value| falls below the zero threshold.
struct CrossingPoint {
  Vec2 x;
  int i = 0, j = 0;  // anchoring node
};

/// Zero-crossing edges plus |u| <= tau nodes, interior only.
std::vector<CrossingPoint> extract_nodal_set(const GridFunction& u, double tau = 0.0);

struct NodalDomainLabels {
  Eigen::ArrayXXi labels;  // 0 outside every domain, 1..count inside
  int count = 0;
};

/// Connected components (4-adjacency) of the same-sign interior node sets;
/// |u| <= tau nodes separate domains and are labeled 0.
NodalDomainLabels nodal_domains(const GridFunction& u, double tau = 0.0);

struct DistanceReport {
  double d = 0.0;
  bool resolution_limited = false;  // d <= h: only "<= h" is claimed
};

/// Euclidean distance from the nodal set to the analytic boundary.
/// Throws std::invalid_argument when the nodal set is empty.
DistanceReport dist_to_boundary(const std::vector<CrossingPoint>& z, const DomainDescriptor& dom,
                                double h);

struct ContactReport {
  double d1 = 0.0;
  CrossingPoint principal;                      // the argmin crossing itself
  std::vector<CrossingPoint> contact;           // points achieving d1 (within h)
  std::vector<CrossingPoint> contact_boundary;  // relative boundary of the contact set
  bool contact_fallback = false;  // contact == whole nodal set; extreme points reported
};

/// Minimal leftward gap d1 = min { x1(z) + w(x2(z)) } over nodal points z,
/// where (-w(x2), x2) is the left end of the horizontal section through z.
/// The contact set collects minimizers within h; its relative boundary the
/// members with a nodal neighbor outside the set within 2h.  Requires u > 0
/// on the interior collar along the boundary (throws otherwise, pointing at
/// the sign-flip reduction).
ContactReport e1_distance(const GridFunction& u, const std::vector<CrossingPoint>& z,
                          const DomainDescriptor& dom);

/// True when every boundary-adjacent interior node has u > 0.
bool positive_near_boundary(const GridFunction& u);

/// One-sided second-order derivative along the outward normal at boundary
/// point b, positive when u grows outward; samples u by bilinear
/// interpolation at depths h and 2h.  Throws at corners (no normal).
double normal_derivative(const GridFunction& u, const Vec2& b, const DomainDescriptor& dom);

/// Bilinear interpolation of the nodal values (zero beyond the window).
double interpolate(const GridFunction& u, const Vec2& x);

struct NodalDecomposition {
  std::vector<CrossingPoint> crossings;
  Eigen::ArrayXXi labels;
  int domain_count = 0;
  DistanceReport dist;
  std::optional<ContactReport> contact;  // absent when the d > h hypotheses fail
  bool interior_plateau = false;
  std::string note;
};

/// Full nodal analysis of a sign-changing field.
NodalDecomposition analyze_nodal(const GridFunction& u, const DomainDescriptor& dom,
                                 double tau = 0.0);

/// CSV report: summary row (d, d1, domains, |contact|, |contact boundary|)
/// followed by the crossing-point list.
void write_decomposition_csv(std::ostream& os, const NodalDecomposition& dec);

}  // namespace plap
