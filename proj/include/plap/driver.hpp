#pragma once

#include "plap/config.hpp"
#include "plap/nodal.hpp"
#include "plap/rearrange.hpp"
#include "plap/solver.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace plap {

struct PolarizationTraceEntry {
  double a = 0.0;
  bool support_contained = false;
  double pointwise_drift = 0.0;  // exactly zero by the permutation argument
  double gradient_drift = 0.0;   // never positive
  double defect_pos = 0.0, defect_neg = 0.0;
  double dist_boundary = 0.0;
  long escaped = 0;
};

struct MovingPolarizationResult {
  bool applicable = false;
  bool sign_flipped = false;  // the reduction v = -u was applied first
  std::string note;
  double d = 0.0, d1 = 0.0;
  double final_offset = 0.0;  // the aligned offset used for the last step
  CrossingPoint principal;
  std::vector<CrossingPoint> contact, contact_boundary;
  std::vector<PolarizationTraceEntry> trace;
  GridFunction input;  // after the sign-flip reduction, Nehari-normalized view
  GridFunction final_field;
  double final_dist = 0.0;
  bool reached_boundary = false;  // final_dist <= h
};

/// Slides the rearrangement plane from 0 to d1/2 in aligned steps, recording
/// support containment, the exact pointwise-energy invariance, the
/// one-sided gradient drift, the Nehari defects and the nodal-set distance
/// at every offset.  Fields negative near the boundary are reduced through
/// v = -u first.  Support escape or a nonzero pointwise drift throw
/// InvariantViolation.  When the nodal set already touches the boundary at
/// grid resolution the slide is skipped and the result marked inapplicable.
MovingPolarizationResult moving_polarization(const GridFunction& u, const DomainDescriptor& dom,
                                             const Nonlinearity& nl, double schedule_step = 0.0,
                                             const std::vector<double>* offsets = nullptr,
                                             double tau = 0.0);

struct HopfSample {
  Vec2 point;      // boundary point
  double nd = 0.0; // outward normal derivative of the polarized field
  double arc_offset = 0.0;
  bool positive_side = false;  // collar probe classified it in supp v^+
};

struct HopfContactRow {
  Vec2 contact, image;
  bool image_on_boundary = false;
  double nd_image = 0.0;
  std::vector<HopfSample> neighbors;
  bool conflict = false;
  std::string note;
};

struct HopfReport {
  bool applicable = false;
  bool conflict_exhibited = false;
  double tolerance = 0.0;
  std::string note;
  std::vector<HopfContactRow> rows;
};

/// Evaluates the two Hopf-type signs of the slid field: at the boundary
/// image of each contact point the normal derivative must be positive (an
/// interior ball of the negative part touches there), while nearby boundary
/// points whose interior collar is positive must have a nonpositive normal
/// derivative.  Near an internal tangency the positive collar thins
/// quadratically, so neighbor sampling extends from the 4h ring out to the
/// grid-resolvable arc distance ~ sqrt(h).
HopfReport hopf_conflict_check(const GridFunction& v, const MovingPolarizationResult& mp,
                               const DomainDescriptor& dom, double tolerance = 1e-6);

/// The manufactured nodal disk profile (r - rho)(R - r), negative in the
/// core, positive in the annulus, Nehari-projected onto the power family.
GridFunction manufactured_disk_field(std::shared_ptr<const Grid> g, const Nonlinearity& nl,
                                     double rho = 0.5, double R = 1.0);

struct CampaignRow {
  std::string domain;
  double p = 0, q = 0;
  std::string mode;
  double h = 0;
  double lambda_or_energy = 0;
  double d = 0, d_over_h = 0;
  int domains = 0;
  int iterations = 0;
  std::string verdict;  // PASS | FAIL | SKIP
};

/// One solve per (config, h): superlinear least-energy solve or resonant
/// second eigenpair, nodal analysis, PASS when converged with two nodal
/// domains and d <= 2h; SKIP rows record non-convergence.
std::vector<CampaignRow> verify_theorem_campaign(const std::vector<ExperimentConfig>& configs);

void write_summary_csv(std::ostream& os, const std::vector<CampaignRow>& rows);
void write_trace_csv(std::ostream& os, const std::vector<PolarizationTraceEntry>& trace);
void write_iteration_csv(std::ostream& os, const std::vector<IterationRow>& trace);
void write_hopf_report(std::ostream& os, const HopfReport& rep);

}  // namespace plap
