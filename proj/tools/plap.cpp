#include "CLI11.hpp"

#include "plap/driver.hpp"
#include "plap/polarization.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace plap;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNoConvergence = 2;
constexpr int kExitInvariant = 3;

std::ofstream open_out(const fs::path& p) {
  fs::create_directories(p.parent_path().empty() ? "." : p.parent_path());
  std::ofstream os(p);
  if (!os) throw std::invalid_argument("cannot open output file " + p.string());
  return os;
}

int run_solve(const std::string& config_path, const std::string& out_dir) {
  const ExperimentConfig cfg = parse_config_file(config_path);
  const DomainDescriptor dom = cfg.make_domain();
  const Nonlinearity nl = cfg.make_nonlinearity();
  const double h = cfg.h_list.front();
  auto grid = std::make_shared<const Grid>(build_grid(dom, h, cfg.pad));
  const fs::path dir = out_dir.empty() ? cfg.output_dir : out_dir;

  const NodalSolveResult r = solve_least_energy_nodal(grid, nl, cfg.solver);
  {
    auto os = open_out(dir / "solution.fld");
    write_field(os, r.u);
  }
  {
    auto os = open_out(dir / "iterations.csv");
    write_iteration_csv(os, r.trace);
  }
  if (r.converged) {
    const NodalDecomposition dec = analyze_nodal(r.u, dom, cfg.tau);
    auto os = open_out(dir / "nodal.csv");
    write_decomposition_csv(os, dec);
    std::cout << dom.name() << "  " << nl.describe() << "  h=" << h << "\n"
              << "energy " << r.energy << ", " << r.iterations << " iterations, "
              << dec.domain_count << " nodal domains, d = " << dec.dist.d
              << " (d/h = " << dec.dist.d / h << ")\n";
    return kExitOk;
  }
  std::cout << "solver did not converge (" << r.iterations
            << " iterations, tangential residual " << r.tangential_residual << ")\n";
  return kExitNoConvergence;
}

int run_eigen(const std::string& config_path, const std::string& which,
              const std::string& out_dir) {
  const ExperimentConfig cfg = parse_config_file(config_path);
  const DomainDescriptor dom = cfg.make_domain();
  const double h = cfg.h_list.front();
  auto grid = std::make_shared<const Grid>(build_grid(dom, h, cfg.pad));
  const fs::path dir = out_dir.empty() ? cfg.output_dir : out_dir;
  bool ok = true;
  if (which == "first" || which == "both") {
    const EigenResult r = first_eigenpair(grid, cfg.p, cfg.solver);
    std::cout << "lambda1(" << dom.name() << ", p=" << cfg.p << ", h=" << h << ") = " << r.lambda
              << (r.converged ? "" : "  [not converged]") << "\n";
    auto os = open_out(dir / "eigen1.fld");
    write_field(os, r.u);
    ok = ok && r.converged;
  }
  if (which == "second" || which == "both") {
    const EigenResult r = second_eigenpair(grid, cfg.p, cfg.solver);
    std::cout << "lambda2(" << dom.name() << ", p=" << cfg.p << ", h=" << h << ") = " << r.lambda
              << "  quotient gap " << r.quotient_gap << (r.converged ? "" : "  [not converged]")
              << "\n";
    auto os = open_out(dir / "eigen2.fld");
    write_field(os, r.u);
    ok = ok && r.converged;
  }
  return ok ? kExitOk : kExitNoConvergence;
}

int run_polarize(const std::string& config_path, const std::string& field_path, bool manufactured,
                 const std::string& out_dir) {
  const ExperimentConfig cfg = parse_config_file(config_path);
  const DomainDescriptor dom = cfg.make_domain();
  const Nonlinearity nl = cfg.make_nonlinearity(cfg.lambda);
  const double h = cfg.h_list.front();
  auto grid = std::make_shared<const Grid>(build_grid(dom, h, cfg.pad));
  const fs::path dir = out_dir.empty() ? cfg.output_dir : out_dir;

  GridFunction u;
  if (manufactured) {
    if (cfg.domain_kind != "disk")
      throw std::invalid_argument("--manufactured needs a disk domain");
    u = manufactured_disk_field(grid, nl);
  } else if (!field_path.empty()) {
    std::ifstream is(field_path);
    if (!is) throw std::invalid_argument("cannot open field file '" + field_path + "'");
    u = attach_field(grid, read_field(is));
  } else {
    throw std::invalid_argument("polarize needs --field FILE or --manufactured");
  }

  const MovingPolarizationResult mp = moving_polarization(
      u, dom, nl, cfg.schedule_step, cfg.schedule_offsets.empty() ? nullptr : &cfg.schedule_offsets,
      cfg.tau);
  {
    auto os = open_out(dir / "trace.csv");
    write_trace_csv(os, mp.trace);
  }
  if (!mp.applicable) {
    std::cout << mp.note << "\n";
    return kExitOk;
  }
  {
    auto os = open_out(dir / "polarized.fld");
    write_field(os, mp.final_field);
  }
  const HopfReport hopf = hopf_conflict_check(mp.final_field, mp, dom);
  {
    auto os = open_out(dir / "hopf.txt");
    write_hopf_report(os, hopf);
  }
  std::cout << "d = " << mp.d << ", d1 = " << mp.d1 << ", slid to a = " << mp.final_offset
            << ", dist(Z, boundary) = " << mp.final_dist
            << (mp.reached_boundary ? " (reached the boundary)" : "") << "\n";
  write_hopf_report(std::cout, hopf);
  return kExitOk;
}

int run_verify(const std::vector<std::string>& config_paths, const std::string& out_dir) {
  std::vector<ExperimentConfig> cfgs;
  for (const std::string& p : config_paths) cfgs.push_back(parse_config_file(p));
  const std::vector<CampaignRow> rows = verify_theorem_campaign(cfgs);
  const fs::path dir = out_dir.empty() ? (cfgs.empty() ? "out" : cfgs.front().output_dir) : out_dir;
  {
    auto os = open_out(dir / "summary.csv");
    write_summary_csv(os, rows);
  }
  write_summary_csv(std::cout, rows);
  bool any_skip = false;
  for (const CampaignRow& r : rows) any_skip = any_skip || r.verdict == "SKIP";
  return any_skip ? kExitNoConvergence : kExitOk;
}

int run_report(const std::string& summary_path, const std::string& out_path) {
  std::ifstream is(summary_path);
  if (!is) throw std::invalid_argument("cannot open summary file '" + summary_path + "'");
  std::ostringstream report;
  std::string line;
  std::getline(is, line);  // header
  report << "campaign report\n";
  std::vector<std::pair<std::string, double>> bars;
  int pass = 0, fail = 0, skip = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() < 11) continue;
    const std::string label = cells[0] + " p=" + cells[1] + " h=" + cells[4];
    const double doh = std::atof(cells[7].c_str());
    bars.emplace_back(label + " [" + cells[10] + "]", doh);
    if (cells[10] == "PASS") ++pass;
    else if (cells[10] == "FAIL") ++fail;
    else ++skip;
  }
  report << pass << " PASS, " << fail << " FAIL, " << skip << " SKIP\n\nd/h per run:\n";
  for (const auto& [label, doh] : bars) {
    report << label << "  ";
    const int n = std::isfinite(doh) ? std::min(40, int(std::lround(doh * 10))) : 0;
    for (int k = 0; k < n; ++k) report << '#';
    report << "  " << doh << "\n";
  }
  if (out_path.empty()) {
    std::cout << report.str();
  } else {
    auto os = open_out(out_path);
    os << report.str();
    std::cout << "wrote " << out_path << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"least-energy nodal solutions and second eigenfunctions of the Dirichlet "
               "p-Laplacian on Steiner-symmetric planar domains, with two-point "
               "rearrangement experiments"};
  app.require_subcommand(1);

  std::string config_path, out_dir, field_path, which = "both", summary_path, out_path;
  bool manufactured = false;

  auto* solve = app.add_subcommand("solve", "least-energy nodal solve from a config");
  solve->add_option("--config", config_path, "experiment config")->required();
  solve->add_option("--out", out_dir, "output directory");

  auto* eigen = app.add_subcommand("eigen", "first/second Dirichlet p-Laplacian eigenpair");
  eigen->add_option("--config", config_path, "experiment config")->required();
  eigen->add_option("--which", which, "first | second | both");
  eigen->add_option("--out", out_dir, "output directory");

  auto* polarize = app.add_subcommand("polarize", "moving polarization + Hopf sign check");
  polarize->add_option("--config", config_path, "experiment config")->required();
  polarize->add_option("--field", field_path, "field file to polarize");
  polarize->add_flag("--manufactured", manufactured, "use the manufactured disk profile");
  polarize->add_option("--out", out_dir, "output directory");

  std::vector<std::string> config_paths;
  auto* verify = app.add_subcommand("verify", "nodal-set-to-boundary campaign");
  verify->add_option("--config", config_paths, "campaign config(s)")->required();
  verify->add_option("--out", out_dir, "output directory");

  auto* report = app.add_subcommand("report", "aggregate a summary.csv into a text report");
  report->add_option("--summary", summary_path, "summary.csv from verify")->required();
  report->add_option("--out", out_path, "report file (stdout when omitted)");

  try {
    app.parse(argc, argv);
    if (solve->parsed()) return run_solve(config_path, out_dir);
    if (eigen->parsed()) return run_eigen(config_path, which, out_dir);
    if (polarize->parsed()) return run_polarize(config_path, field_path, manufactured, out_dir);
    if (verify->parsed()) return run_verify(config_paths, out_dir);
    if (report->parsed()) return run_report(summary_path, out_path);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
