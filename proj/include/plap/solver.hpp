#pragma once

#include "plap/field.hpp"
#include "plap/nonlinearity.hpp"
#include "plap/rearrange.hpp"

#include <utility>
#include <vector>

namespace plap {

struct SolverConfig {
  double step0 = 0.0;        // 0: scale-adapted default
  double backtrack = 0.5;    // step shrink factor
  double eps_res = 0.0;      // 0: 1e-6 for p == 2, 1e-4 otherwise
  double eps_neh = 1e-8;     // relative Nehari-defect tolerance
  double eps_reg = 1e-10;    // p < 2 gradient regularization, annealed per restart
  int max_iter = 50000;
  int max_restarts = 3;
  unsigned long long seed = 1;
  enum class Init { antisymmetric_bump, random, user };
  Init init = Init::antisymmetric_bump;
  GridFunction user_field;   // used when init == user

  double eps_res_for(double p) const {
    if (eps_res > 0) return eps_res;
    return p == 2.0 ? 1e-6 : 1e-4;
  }
};

/// Discrete p-Laplacian density: the variational gradient of
/// dirichlet_energy scaled by 1/(p h^2), so that at p = 2 it is the
/// five-point -Laplacian.  Every window node gets a value; callers mask.
/// For p < 2 the edge weight |d|^{p-2} is regularized to (d^2+eps^2)^{(p-2)/2}.
ArrayXXd p_laplacian_density(const Grid& g, const ArrayXXd& v, double p, double eps_reg = 1e-10);

/// E[u] = dirichlet_energy(u, p)/p - integral of F(u).
double energy(const GridFunction& u, const Nonlinearity& nl,
              Summation mode = Summation::sorted);

/// Nodal PDE residual -Lap_p u - f(u) on inside nodes, zero elsewhere.
/// Its L^2(h) pairing with any direction matches the derivative of energy.
GridFunction residual(const GridFunction& u, const Nonlinearity& nl, double eps_reg = 1e-10);

/// Relative Nehari defects of the two signed parts:
/// (dirichlet_energy(u^{+-}) - integral u^{+-} f(u^{+-})) / dirichlet_energy(u^{+-}).
std::pair<double, double> nehari_defects(const GridFunction& u, const Nonlinearity& nl,
                                         Summation mode = Summation::sequential);

struct NehariScaling {
  double alpha = 1.0;
  double beta = 1.0;
};

/// Scales the signed parts onto the nodal Nehari set: w = alpha u^+ + beta u^-
/// with both defects zero.  Closed form for the power family,
///   alpha = (dirichlet_energy(u^+) / (C * integral |u^+|^q))^{1/(q-p)}.
/// Throws std::invalid_argument when a part vanishes or the family is not
/// superlinear power.
std::pair<NehariScaling, GridFunction> nehari_project(const GridFunction& u, const Nonlinearity& nl);

struct IterationRow {
  int iteration = 0;
  double energy = 0;
  double residual_sup = 0;            // full PDE residual
  double tangential_residual = 0;     // constrained stationarity measure
  double defect_pos = 0, defect_neg = 0;
};

struct NodalSolveResult {
  GridFunction u;
  bool converged = false;
  int iterations = 0;
  int restarts = 0;
  double energy = 0;
  double residual_sup = 0;
  double tangential_residual = 0;
  double defect_pos = 0, defect_neg = 0;
  int nodal_domain_count = 0;
  std::vector<IterationRow> trace;
};

/// Least-energy nodal solve: projected descent on E over the nodal Nehari
/// set (negative-gradient trial step, Nehari re-projection, backtracking
/// until E decreases, Barzilai-Borwein step proposal).  Converged when the
/// tangential residual (the PDE residual minus its component along the two
/// constraint gradients, scaled by the nonlinear term magnitude) falls below
/// eps_res and the defects below eps_neh.  The full PDE residual of a
/// constrained minimizer retains an O(h) floor from the edges crossing the
/// nodal line; it is reported, not thresholded.
NodalSolveResult solve_least_energy_nodal(std::shared_ptr<const Grid> g, const Nonlinearity& nl,
                                          const SolverConfig& cfg);

struct EigenResult {
  double lambda = 0;
  GridFunction u;             // unit L^p norm
  bool converged = false;
  int iterations = 0;
  double residual_sup = 0;
  double quotient_gap = 0;    // second pair only
};

/// Smallest Dirichlet p-Laplacian eigenvalue by normalized descent on the
/// Rayleigh quotient dirichlet_energy(u) / |u|_p^p; the eigenfunction is
/// one-signed.
EigenResult first_eigenpair(std::shared_ptr<const Grid> g, double p, const SolverConfig& cfg);

/// Second eigenvalue surrogate: minimizes max of the two signed parts'
/// Rayleigh quotients with per-part L^p normalization, then equalizes the
/// part scales on |alpha|^p + |beta|^p = 1.  Flags a residual quotient gap.
EigenResult second_eigenpair(std::shared_ptr<const Grid> g, double p, const SolverConfig& cfg);

/// Canonical member of the scaling family: parts normalized to unit L^p norm
/// and both scaled by 2^{-1/p}, so the assembled field has unit norm.
/// Re-applying it to its own output is a fixed point.
std::pair<NehariScaling, GridFunction> equalize_scaling(const GridFunction& u, double p);

}  // namespace plap
