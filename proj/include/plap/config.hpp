#pragma once

#include "plap/grid.hpp"
#include "plap/nonlinearity.hpp"
#include "plap/solver.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace plap {

enum class CampaignMode { superlinear, resonant, eigen };

/// One experiment description, parsed from flat key=value text.
/// Recognized keys:
///   domain.kind    rectangle | disk | stadium | polygon
///   domain.params  rectangle: W H; disk: R; stadium: L r; polygon: x y x y ...
///   mode           superlinear | resonant | eigen
///   p q C lambda   nonlinearity parameters (lambda optional for resonant)
///   h              lattice spacing (or h_list for refinement campaigns)
///   pad            extra window cells on each side
///   tau            nodal zero threshold
///   solver.eps_res solver.eps_neh solver.eps_reg solver.max_iter
///   solver.max_restarts solver.seed solver.step0 solver.backtrack
///   solver.init    antisymmetric-bump | random
///   schedule.step  polarization offset increment (default h/2)
///   schedule.offsets  explicit offsets overriding the automatic schedule
///   output.dir     where campaign artifacts are written
struct ExperimentConfig {
  std::string domain_kind = "rectangle";
  std::vector<double> domain_params = {2.0, 2.0};
  CampaignMode mode = CampaignMode::superlinear;
  double p = 2.0, q = 4.0, C = 1.0;
  double lambda = 0.0;  // resonant: 0 means "use the computed second eigenvalue"
  std::vector<double> h_list = {1.0 / 32};
  int pad = 0;
  double tau = 0.0;
  SolverConfig solver;
  double schedule_step = 0.0;  // 0: h/2
  std::vector<double> schedule_offsets;
  std::string output_dir = "out";

  DomainDescriptor make_domain() const;
  Nonlinearity make_nonlinearity(double lambda_hint = 0.0) const;
};

ExperimentConfig parse_config(std::istream& is);
ExperimentConfig parse_config_file(const std::string& path);

}  // namespace plap
