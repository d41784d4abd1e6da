#include "plap/config.hpp"

#include "plap/detail/text.hpp"

#include <fstream>
#include <sstream>

namespace plap {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
  std::istringstream is(v);
  std::vector<double> out;
  std::string tok;
  while (is >> tok) out.push_back(detail::parse_double(tok));
  if (out.empty()) throw std::invalid_argument("config key '" + key + "': empty value");
  return out;
}

double parse_one(const std::string& key, const std::string& v) {
  try {
    return detail::parse_double(trim(v));
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("config key '" + key + "': malformed number '" + trim(v) + "'");
  }
}

}  // namespace

DomainDescriptor ExperimentConfig::make_domain() const {
  const auto& pr = domain_params;
  auto need = [&](size_t n) {
    if (pr.size() != n)
      throw std::invalid_argument("domain.params: expected " + std::to_string(n) +
                                  " values for " + domain_kind);
  };
  if (domain_kind == "rectangle") { need(2); return DomainDescriptor::rectangle(pr[0], pr[1]); }
  if (domain_kind == "disk") { need(1); return DomainDescriptor::disk(pr[0]); }
  if (domain_kind == "stadium") { need(2); return DomainDescriptor::stadium(pr[0], pr[1]); }
  if (domain_kind == "polygon") {
    if (pr.size() < 6 || pr.size() % 2 != 0)
      throw std::invalid_argument("domain.params: polygon needs an even list of at least 6 values");
    std::vector<Vec2> vs;
    for (size_t k = 0; k + 1 < pr.size(); k += 2) vs.emplace_back(pr[k], pr[k + 1]);
    return DomainDescriptor::polygon(std::move(vs));
  }
  throw std::invalid_argument("domain.kind: unknown shape '" + domain_kind + "'");
}

Nonlinearity ExperimentConfig::make_nonlinearity(double lambda_hint) const {
  if (mode == CampaignMode::resonant) {
    const double lam = lambda > 0 ? lambda : lambda_hint;
    if (lam <= 0)
      throw std::invalid_argument("resonant mode needs lambda (or a computed second eigenvalue)");
    return Nonlinearity::resonant(p, lam);
  }
  return Nonlinearity::power(p, q, C);
}

ExperimentConfig parse_config(std::istream& is) {
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (val.empty()) throw std::invalid_argument("config key '" + key + "': empty value");

    if (key == "domain.kind") cfg.domain_kind = val;
    else if (key == "domain.params") cfg.domain_params = parse_list(key, val);
    else if (key == "mode") {
      if (val == "superlinear") cfg.mode = CampaignMode::superlinear;
      else if (val == "resonant") cfg.mode = CampaignMode::resonant;
      else if (val == "eigen") cfg.mode = CampaignMode::eigen;
      else throw std::invalid_argument("config key 'mode': unknown value '" + val + "'");
    }
    else if (key == "p") cfg.p = parse_one(key, val);
    else if (key == "q") cfg.q = parse_one(key, val);
    else if (key == "C") cfg.C = parse_one(key, val);
    else if (key == "lambda") cfg.lambda = parse_one(key, val);
    else if (key == "h") cfg.h_list = {parse_one(key, val)};
    else if (key == "h_list") cfg.h_list = parse_list(key, val);
    else if (key == "pad") cfg.pad = int(parse_one(key, val));
    else if (key == "tau") cfg.tau = parse_one(key, val);
    else if (key == "solver.eps_res") cfg.solver.eps_res = parse_one(key, val);
    else if (key == "solver.eps_neh") cfg.solver.eps_neh = parse_one(key, val);
    else if (key == "solver.eps_reg") cfg.solver.eps_reg = parse_one(key, val);
    else if (key == "solver.max_iter") cfg.solver.max_iter = int(parse_one(key, val));
    else if (key == "solver.max_restarts") cfg.solver.max_restarts = int(parse_one(key, val));
    else if (key == "solver.seed") cfg.solver.seed = (unsigned long long)(parse_one(key, val));
    else if (key == "solver.step0") cfg.solver.step0 = parse_one(key, val);
    else if (key == "solver.backtrack") cfg.solver.backtrack = parse_one(key, val);
    else if (key == "solver.init") {
      if (val == "antisymmetric-bump") cfg.solver.init = SolverConfig::Init::antisymmetric_bump;
      else if (val == "random") cfg.solver.init = SolverConfig::Init::random;
      else throw std::invalid_argument("config key 'solver.init': unknown value '" + val + "'");
    }
    else if (key == "schedule.step") cfg.schedule_step = parse_one(key, val);
    else if (key == "schedule.offsets") cfg.schedule_offsets = parse_list(key, val);
    else if (key == "output.dir") cfg.output_dir = val;
    else throw std::invalid_argument("config: unknown key '" + key + "'");
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("cannot open config file '" + path + "'");
  return parse_config(is);
}

}  // namespace plap
