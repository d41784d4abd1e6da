#pragma once

#include "plap/field.hpp"
#include "plap/polarization.hpp"

#include <cmath>
#include <vector>

namespace plap {

/// Result of polarizing nodal values.  When `escaped == 0` the rearrangement
/// is a permutation of the stored values, so the value multiset is preserved
/// exactly; otherwise `escaped_abs` accumulates |values| that would land
/// outside the window (their slots read as zero).
template <class Scalar>
struct ValuePolarization {
  FieldMatrix<Scalar> values;
  long escaped = 0;
  double escaped_abs = 0.0;
};

/// Two-point rearrangement of nodal values about an aligned plane: the
/// smaller of each mirror pair goes to {x1 > a}, the larger to {x1 < a},
/// plane nodes unchanged.  Out-of-window partners read as zero.
template <class Scalar>
ValuePolarization<Scalar> polarize_values(const FieldMatrix<Scalar>& v,
                                          const PolarizationPlane& plane) {
  const int n1 = int(v.rows()), n2 = int(v.cols());
  const long m = plane.m;
  ValuePolarization<Scalar> out;
  out.values = v;
  for (int j = 0; j < n2; ++j) {
    for (int i = 0; i < n1; ++i) {
      if (2L * i <= m) continue;
      const long ip = m - i;
      const Scalar a = v(i, j);
      if (ip >= 0 && ip < n1) {
        const Scalar b = v(int(ip), j);
        out.values(i, j) = std::min(a, b);
        out.values(int(ip), j) = std::max(a, b);
      } else {
        out.values(i, j) = std::min(a, Scalar(0));
        if (a > Scalar(0)) { ++out.escaped; out.escaped_abs += double(a); }
      }
    }
    for (int i = 0; i < n1 && 2L * i < m; ++i) {
      if (m - i < n1) continue;
      const Scalar b = v(i, j);
      out.values(i, j) = std::max(b, Scalar(0));
      if (b < Scalar(0)) { ++out.escaped; out.escaped_abs += double(-b); }
    }
  }
  return out;
}

struct FieldPolarization {
  GridFunction field;
  long escaped = 0;
  double escaped_abs = 0.0;
};

inline FieldPolarization polarize_function(const GridFunction& u, const PolarizationPlane& plane) {
  ValuePolarization<double> r = polarize_values<double>(u.values, plane);
  return {GridFunction{u.grid, std::move(r.values)}, r.escaped, r.escaped_abs};
}

/// Oracle for the identity (P_a v)^{+-} = P_a(v^{+-}); exact on the lattice.
inline bool plus_minus_commutation_check(const GridFunction& v, const PolarizationPlane& plane) {
  const FieldMatrix<double> pv = polarize_values<double>(v.values, plane).values;
  const FieldMatrix<double> p_plus =
      polarize_values<double>(positive_values(v.values), plane).values;
  const FieldMatrix<double> p_minus =
      polarize_values<double>(negative_values(v.values), plane).values;
  return (positive_values(pv) == p_plus).all() && (negative_values(pv) == p_minus).all();
}

/// Oracle for supp P_a v = P_a(supp v^+) union dual-P_a(supp v^-), node-exact.
inline bool support_decomposition_check(const GridFunction& v, const PolarizationPlane& plane) {
  const MaskArray supp_pv = support_mask(polarize_values<double>(v.values, plane).values);
  const MaskArray sp =
      polarize_set(support_mask(positive_values(v.values)), plane, PolarizationVariant::primal).mask;
  const MaskArray sm =
      polarize_set(support_mask(negative_values(v.values)), plane, PolarizationVariant::dual).mask;
  return (supp_pv == (sp || sm)).all();
}

/// h^2 sum of G(v) over window nodes.  Requires G(0) == 0 so nodes outside
/// the domain contribute nothing.  The sorted reduction makes the result
/// bit-invariant under any permutation of the nodal values, in particular
/// under polarization.
template <class Derived, class G>
double pointwise_integral(double h, const Eigen::ArrayBase<Derived>& v, G&& g,
                          Summation mode = Summation::sorted) {
  if (g(0.0) != 0.0) throw std::invalid_argument("pointwise_integral: integrand must vanish at 0");
  if (mode == Summation::sequential) {
    double s = 0.0;
    for (Eigen::Index c = 0; c < v.cols(); ++c)
      for (Eigen::Index r = 0; r < v.rows(); ++r) s += g(v(r, c));
    return h * h * s;
  }
  std::vector<double> terms;
  terms.reserve(size_t(v.size()));
  for (Eigen::Index c = 0; c < v.cols(); ++c)
    for (Eigen::Index r = 0; r < v.rows(); ++r) terms.push_back(g(v(r, c)));
  return h * h * sorted_sum(terms);
}

template <class G>
double pointwise_integral(const GridFunction& u, G&& g, Summation mode = Summation::sorted) {
  return pointwise_integral(u.grid->h, u.values, std::forward<G>(g), mode);
}

/// Gradient part of the energy: h^2 sum over lattice edges of |d v / h|^p,
/// with the field extended by zero beyond the window.  The energy is a sum
/// of convex functions of single edge differences, so every polarization
/// rearranges the edge terms without increasing the total (two-point
/// rearrangement inequality, exact in exact arithmetic); at p = 2 it is the
/// standard five-point discretization of the Dirichlet integral.
template <class Derived>
double dirichlet_energy(double h, const Eigen::ArrayBase<Derived>& v, double p,
                        Summation mode = Summation::sorted) {
  if (p <= 1) throw std::invalid_argument("dirichlet_energy: p must exceed 1");
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n1 = v.rows(), n2 = v.cols();
  FieldMatrix<Scalar> z = FieldMatrix<Scalar>::Zero(n1 + 2, n2 + 2);
  z.block(1, 1, n1, n2) = v;
  const auto dx = (z.block(1, 0, n1 + 1, n2 + 2) - z.block(0, 0, n1 + 1, n2 + 2)).eval();
  const auto dy = (z.block(0, 1, n1 + 2, n2 + 1) - z.block(0, 0, n1 + 2, n2 + 1)).eval();
  const double scale = std::pow(h, 2.0 - p);
  auto edge_term = [p](double d) {
    const double a = std::abs(d);
    return p == 2.0 ? a * a : std::pow(a, p);
  };
  if (mode == Summation::sequential) {
    double s = 0.0;
    for (Eigen::Index c = 0; c < dx.cols(); ++c)
      for (Eigen::Index r = 0; r < dx.rows(); ++r) s += edge_term(dx(r, c));
    for (Eigen::Index c = 0; c < dy.cols(); ++c)
      for (Eigen::Index r = 0; r < dy.rows(); ++r) s += edge_term(dy(r, c));
    return scale * s;
  }
  std::vector<double> terms;
  terms.reserve(size_t(dx.size() + dy.size()));
  for (Eigen::Index c = 0; c < dx.cols(); ++c)
    for (Eigen::Index r = 0; r < dx.rows(); ++r) terms.push_back(edge_term(dx(r, c)));
  for (Eigen::Index c = 0; c < dy.cols(); ++c)
    for (Eigen::Index r = 0; r < dy.rows(); ++r) terms.push_back(edge_term(dy(r, c)));
  return scale * sorted_sum(terms);
}

inline double dirichlet_energy(const GridFunction& u, double p,
                               Summation mode = Summation::sorted) {
  return dirichlet_energy(u.grid->h, u.values, p, mode);
}

}  // namespace plap
