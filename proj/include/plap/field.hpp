#pragma once

#include "plap/grid.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iosfwd>
#include <memory>
#include <vector>

namespace plap {

using Eigen::ArrayXXd;

template <class Scalar>
using FieldMatrix = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Nodal values on a lattice window.  Fields produced by the solvers vanish
/// on every non-inside node (Dirichlet); polarized fields may carry values
/// outside the domain mask but inside the window.
struct GridFunction {
  std::shared_ptr<const Grid> grid;
  ArrayXXd values;
};

GridFunction zero_field(std::shared_ptr<const Grid> g);

/// Samples fn at inside nodes, zero elsewhere.
GridFunction sample_field(std::shared_ptr<const Grid> g,
                          const std::function<double(const Vec2&)>& fn);

/// Samples fn at every window node (no masking).
GridFunction sample_window(std::shared_ptr<const Grid> g,
                           const std::function<double(const Vec2&)>& fn);

template <class Derived>
FieldMatrix<typename Derived::Scalar> positive_values(const Eigen::ArrayBase<Derived>& v) {
  return v.max(typename Derived::Scalar(0));
}

template <class Derived>
FieldMatrix<typename Derived::Scalar> negative_values(const Eigen::ArrayBase<Derived>& v) {
  return v.min(typename Derived::Scalar(0));
}

inline GridFunction positive_part(const GridFunction& u) { return {u.grid, positive_values(u.values)}; }
inline GridFunction negative_part(const GridFunction& u) { return {u.grid, negative_values(u.values)}; }

/// Deterministic permutation-invariant reduction: terms are sorted before
/// accumulation, so any rearrangement of the same value multiset sums to the
/// identical double.
double sorted_sum(std::vector<double>& terms);

enum class Summation { sorted, sequential };

/// h^2 sum of |v|^p over the window (the L^p norm to the p-th power).
template <class Derived>
double lp_norm_pow(double h, const Eigen::ArrayBase<Derived>& v, double p,
                   Summation mode = Summation::sequential) {
  if (mode == Summation::sequential) return h * h * v.abs().pow(p).sum();
  std::vector<double> terms(size_t(v.size()));
  Eigen::Map<ArrayXXd>(terms.data(), v.rows(), v.cols()) = v.abs().pow(p);
  return h * h * sorted_sum(terms);
}

inline double lp_norm(const GridFunction& u, double p) {
  return std::pow(lp_norm_pow(u.grid->h, u.values, p), 1.0 / p);
}

/// Support of a field: nodes with a nonzero value.
MaskArray support_mask(const ArrayXXd& values);

/// Plain-text field format: header "n1 n2 h ox oy", then n2 rows of n1
/// values (row j in order of increasing x2), shortest round-trip decimals.
void write_field(std::ostream& os, const GridFunction& u);

struct FieldData {
  int n1 = 0, n2 = 0;
  double h = 0, ox = 0, oy = 0;
  ArrayXXd values;
};
FieldData read_field(std::istream& is);

/// Attaches loaded values to a grid; throws when the lattices disagree.
GridFunction attach_field(std::shared_ptr<const Grid> g, const FieldData& data);

}  // namespace plap
