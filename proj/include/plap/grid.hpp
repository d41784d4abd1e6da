#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace plap {

using Vec2 = Eigen::Vector2d;
using MaskArray = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// Thrown when a structural invariant of the method is violated at runtime
/// (support escape during polarization, exact-drift assertions, ...).
/// Distinct from std::invalid_argument so the CLI can map it to its own
/// exit code.
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Region { inside, boundary, outside };

enum class ShapeKind { rectangle, disk, stadium, polygon };

/// Analytic description of a bounded planar domain that is Steiner symmetric
/// with respect to the axis {x1 = 0}: symmetric under x1 -> -x1 and with
/// every horizontal section a contiguous interval.
///
/// Supported shapes: axis-aligned centered rectangle, disk, stadium
/// (rectangle with semicircular caps on the x1-extremes), and a symmetric
/// simple polygon.  All expose a signed distance, outward normals on smooth
/// boundary pieces, and the half-width of the section {x2 = const}.
class DomainDescriptor {
 public:
  static DomainDescriptor rectangle(double width, double height);
  static DomainDescriptor disk(double radius);
  /// Stadium: points within distance cap_radius of the segment
  /// [-core/2, core/2] x {0}.  Bounding half-widths (core/2 + r, r).
  static DomainDescriptor stadium(double core_length, double cap_radius);
  /// Simple polygon, vertices in order; must be symmetric about {x1 = 0}.
  static DomainDescriptor polygon(std::vector<Vec2> vertices);

  ShapeKind kind() const { return kind_; }
  const std::vector<double>& params() const { return params_; }
  std::string name() const;

  /// Negative inside, positive outside, zero on the boundary.
  double signed_distance(const Vec2& x) const;
  Region classify(const Vec2& x, double tol = 1e-12) const;

  /// Outward unit normal at a boundary point; empty at corners.
  std::optional<Vec2> outward_normal(const Vec2& b, double corner_tol = 1e-9) const;

  /// Nearest boundary point (Newton steps on the signed distance).
  Vec2 project_to_boundary(const Vec2& x) const;

  /// Half-width w(x2) of the section {x1 : (x1,x2) in domain} = (-w, w);
  /// empty when the horizontal line misses the domain.
  std::optional<double> section_halfwidth(double x2) const;

  /// Bounding half-widths (w1, w2): domain fits in [-w1,w1] x [-w2,w2].
  Vec2 bounding_halfwidths() const;

 private:
  DomainDescriptor() = default;
  ShapeKind kind_ = ShapeKind::rectangle;
  std::vector<double> params_;
  std::vector<Vec2> vertices_;
};

/// Uniform lattice covering the (possibly padded) bounding box of a domain.
/// Node (i, j) sits at (ox + i h, oy + j h).  The node set is mirror-closed
/// under x1 -> -x1, with the column i0 exactly on the symmetry axis.
struct Grid {
  int n1 = 0, n2 = 0;
  double h = 0.0;
  double ox = 0.0, oy = 0.0;
  int i0 = 0;              // index of the x1 = 0 column
  MaskArray inside;        // strictly interior nodes (Dirichlet DOFs)
  MaskArray boundary_ring; // non-inside nodes 4-adjacent to an inside node

  double x1(int i) const { return ox + i * h; }
  double x2(int j) const { return oy + j * h; }
  Vec2 node(int i, int j) const { return {x1(i), x2(j)}; }
  bool in_window(int i, int j) const { return i >= 0 && i < n1 && j >= 0 && j < n2; }
  long inside_count() const { return inside.count(); }
  /// Inside or adjacent-to-inside: the discrete closure of the domain.
  bool in_closure(int i, int j) const {
    return in_window(i, j) && (inside(i, j) || boundary_ring(i, j));
  }
};

/// Builds the lattice for a domain.  h must divide both bounding half-widths
/// so that the lattice is mirror-closed; pad_cells extra cells are added on
/// every side (polarization experiments need headroom for reflected
/// supports).  Throws if the inside mask is disconnected.
Grid build_grid(const DomainDescriptor& dom, double h, int pad_cells = 0);

/// Connectivity of a node set under 4-adjacency.
bool mask_connected(const MaskArray& mask);

/// Plain-text mask format: header "n1 n2 h ox oy", then n2 rows of n1 0/1
/// entries (row j printed in order of increasing x2).
void write_mask(std::ostream& os, const Grid& g);
Grid read_mask(std::istream& is);

}  // namespace plap
