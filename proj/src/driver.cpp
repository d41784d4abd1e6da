#include "plap/driver.hpp"

#include "plap/detail/text.hpp"
#include "plap/polarization.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

namespace plap {

namespace {

bool support_contained(const Grid& g, const ArrayXXd& values) {
  for (int j = 0; j < g.n2; ++j)
    for (int i = 0; i < g.n1; ++i)
      if (values(i, j) != 0.0 && !g.in_closure(i, j)) return false;
  return true;
}

}  // namespace

GridFunction manufactured_disk_field(std::shared_ptr<const Grid> g, const Nonlinearity& nl,
                                     double rho, double R) {
  GridFunction u = sample_field(g, [&](const Vec2& x) {
    const double r = x.norm();
    return r < R ? (r - rho) * (R - r) : 0.0;
  });
  return nehari_project(u, nl).second;
}

MovingPolarizationResult moving_polarization(const GridFunction& u0, const DomainDescriptor& dom,
                                             const Nonlinearity& nl, double schedule_step,
                                             const std::vector<double>* offsets, double tau) {
  const Grid& g = *u0.grid;
  MovingPolarizationResult out;

  GridFunction u = u0;
  if (!positive_near_boundary(u)) {
    GridFunction flipped{u0.grid, -u0.values};
    if (!positive_near_boundary(flipped))
      throw std::invalid_argument(
          "moving_polarization: field is one-signed near no side of the boundary; "
          "the sign-flip reduction does not apply");
    u = flipped;
    out.sign_flipped = true;
  }
  out.input = u;

  const NodalDecomposition dec = analyze_nodal(u, dom, tau);
  out.d = dec.dist.d;
  if (dec.dist.resolution_limited) {
    out.applicable = false;
    out.note = "theorem already exhibited: dist(Z(u), boundary) <= h";
    out.final_field = u;
    out.final_dist = dec.dist.d;
    out.reached_boundary = true;
    return out;
  }
  if (!dec.contact) {
    out.applicable = false;
    out.note = "contact analysis unavailable: " + dec.note;
    out.final_field = u;
    out.final_dist = dec.dist.d;
    return out;
  }

  out.applicable = true;
  out.d1 = dec.contact->d1;
  out.principal = dec.contact->principal;
  out.contact = dec.contact->contact;
  out.contact_boundary = dec.contact->contact_boundary;

  // aligned schedule 0, s, 2s, ... capped at d1/2 (+h/8 measurement slack)
  std::vector<double> plan;
  if (offsets && !offsets->empty()) {
    plan = *offsets;
  } else {
    const double step = schedule_step > 0 ? schedule_step : g.h / 2;
    const long kstep = std::max(1L, long(std::llround(2 * step / g.h)));
    const long kmax = long(std::floor(out.d1 / g.h + 0.25));
    for (long k = 0; ; k += kstep) {
      const long kk = std::min(k, kmax);
      plan.push_back(double(kk) * g.h / 2);
      if (kk >= kmax) break;
    }
  }

  const double point_ref = pointwise_integral(u, [&](double s) { return nl.F(s); });
  const double grad_ref = dirichlet_energy(u, nl.p());

  for (double a : plan) {
    const PolarizationPlane plane = PolarizationPlane::aligned(g, a);
    const FieldPolarization fp = polarize_function(u, plane);
    PolarizationTraceEntry e;
    e.a = plane.a;
    e.escaped = fp.escaped;
    e.support_contained = fp.escaped == 0 && support_contained(g, fp.field.values);
    if (!e.support_contained) {
      std::ostringstream os;
      os << "moving_polarization: support escape at a = " << plane.a
         << " (escaped nodes: " << fp.escaped << "); contradicts the containment lemma";
      throw InvariantViolation(os.str());
    }
    e.pointwise_drift =
        pointwise_integral(fp.field, [&](double s) { return nl.F(s); }) - point_ref;
    if (e.pointwise_drift != 0.0)
      throw InvariantViolation("moving_polarization: pointwise energy drift is not exactly zero");
    e.gradient_drift = dirichlet_energy(fp.field, nl.p()) - grad_ref;
    if (e.gradient_drift > 0.0)
      throw InvariantViolation("moving_polarization: gradient energy increased under polarization");
    const auto defects = nehari_defects(fp.field, nl);
    e.defect_pos = defects.first;
    e.defect_neg = defects.second;
    e.dist_boundary = dist_to_boundary(extract_nodal_set(fp.field, tau), dom, g.h).d;
    out.trace.push_back(e);
    out.final_offset = plane.a;
    out.final_field = fp.field;
    out.final_dist = e.dist_boundary;
  }
  out.reached_boundary = out.final_dist <= g.h + 1e-12;
  return out;
}

HopfReport hopf_conflict_check(const GridFunction& v, const MovingPolarizationResult& mp,
                               const DomainDescriptor& dom, double tolerance) {
  HopfReport rep;
  rep.tolerance = tolerance;
  if (!mp.applicable) {
    rep.note = "not applicable: " + (mp.note.empty() ? std::string("no slide was performed") : mp.note);
    return rep;
  }
  rep.applicable = true;
  const Grid& g = *v.grid;
  const double h = g.h;

  // contact points: the argmin crossing first, then the relative boundary
  std::vector<CrossingPoint> contacts{mp.principal};
  for (const CrossingPoint& c : mp.contact_boundary) {
    bool dup = false;
    for (const CrossingPoint& q : contacts) dup = dup || (q.x - c.x).norm() < h / 4;
    if (!dup) contacts.push_back(c);
  }

  for (const CrossingPoint& c : contacts) {
    HopfContactRow row;
    row.contact = c.x;
    row.image = reflect(c.x, mp.final_offset);
    const double gap = std::abs(dom.signed_distance(row.image));
    row.image_on_boundary = gap <= 2 * h;
    if (!row.image_on_boundary) {
      row.note = "image is not on the boundary at grid resolution";
      rep.rows.push_back(row);
      continue;
    }
    const Vec2 b = dom.project_to_boundary(row.image);
    const auto n = dom.outward_normal(b);
    if (!n) {
      row.note = "skipped: contact image at a boundary corner";
      rep.rows.push_back(row);
      continue;
    }
    row.nd_image = normal_derivative(v, b, dom);

    // boundary samples from the 4h ring out to the resolvable collar
    // (an internally tangent negative ball leaves a positive collar of
    // width ~ s^2/2 at arc distance s, visible to the lattice only for
    // s >~ sqrt(2h))
    const Vec2 t(-n->y(), n->x());
    std::vector<double> arcs;
    for (double s : {1.5 * h, 2.5 * h, 3.5 * h}) arcs.push_back(s);
    const double s0 = std::sqrt(2 * h);
    for (double c2 : {1.3, 1.6, 2.0, 2.5}) arcs.push_back(c2 * s0);
    bool any_positive = false, all_positive_ok = true;
    for (double s : arcs) {
      for (double sgn : {1.0, -1.0}) {
        const Vec2 cand = dom.project_to_boundary(b + (sgn * s) * t);
        if ((cand - b).norm() < h / 2) continue;
        const auto nn = dom.outward_normal(cand);
        if (!nn) continue;
        HopfSample sample;
        sample.point = cand;
        sample.arc_offset = sgn * s;
        sample.positive_side = interpolate(v, cand - 1.5 * h * (*nn)) > 0;
        sample.nd = normal_derivative(v, cand, dom);
        if (sample.positive_side) {
          any_positive = true;
          all_positive_ok = all_positive_ok && sample.nd <= tolerance;
        }
        row.neighbors.push_back(sample);
      }
    }
    row.conflict = row.nd_image > 0 && any_positive && all_positive_ok;
    if (!any_positive) row.note = "vacuous: no resolvable positive-part boundary points nearby";
    rep.rows.push_back(row);
    rep.conflict_exhibited = rep.conflict_exhibited || row.conflict;
  }
  if (!rep.conflict_exhibited && rep.note.empty())
    rep.note = "no contact exhibited both signs";
  return rep;
}

std::vector<CampaignRow> verify_theorem_campaign(const std::vector<ExperimentConfig>& configs) {
  std::vector<CampaignRow> rows;
  for (const ExperimentConfig& cfg : configs) {
    const DomainDescriptor dom = cfg.make_domain();
    for (double h : cfg.h_list) {
      CampaignRow row;
      row.domain = dom.name();
      row.p = cfg.p;
      row.q = cfg.mode == CampaignMode::resonant ? cfg.p : cfg.q;
      row.mode = cfg.mode == CampaignMode::resonant ? "resonant" : "superlinear";
      row.h = h;
      auto grid = std::make_shared<const Grid>(build_grid(dom, h, cfg.pad));

      GridFunction u;
      bool converged = false;
      if (cfg.mode == CampaignMode::resonant) {
        const EigenResult er = second_eigenpair(grid, cfg.p, cfg.solver);
        converged = er.converged;
        row.lambda_or_energy = er.lambda;
        row.iterations = er.iterations;
        u = er.u;
      } else {
        const Nonlinearity nl = cfg.make_nonlinearity();
        const NodalSolveResult sr = solve_least_energy_nodal(grid, nl, cfg.solver);
        converged = sr.converged;
        row.lambda_or_energy = sr.energy;
        row.iterations = sr.iterations;
        u = sr.u;
      }

      if (!converged) {
        row.verdict = "SKIP";
        row.d = std::numeric_limits<double>::quiet_NaN();
        row.d_over_h = row.d;
        rows.push_back(row);
        continue;
      }
      const NodalDecomposition dec = analyze_nodal(u, dom, cfg.tau);
      row.d = dec.dist.d;
      row.d_over_h = dec.dist.d / h;
      row.domains = dec.domain_count;
      row.verdict = (dec.domain_count == 2 && dec.dist.d <= 2 * h) ? "PASS" : "FAIL";
      rows.push_back(row);
    }
  }
  return rows;
}

void write_summary_csv(std::ostream& os, const std::vector<CampaignRow>& rows) {
  os << "domain,p,q,mode,h,lambda_or_energy,d,d_over_h,domains,iterations,verdict\n";
  for (const CampaignRow& r : rows) {
    os << r.domain << ',' << detail::format_double(r.p) << ',' << detail::format_double(r.q)
       << ',' << r.mode << ',' << detail::format_double(r.h) << ','
       << detail::format_double(r.lambda_or_energy) << ',' << detail::format_double(r.d) << ','
       << detail::format_double(r.d_over_h) << ',' << r.domains << ',' << r.iterations << ','
       << r.verdict << '\n';
  }
}

void write_trace_csv(std::ostream& os, const std::vector<PolarizationTraceEntry>& trace) {
  os << "a,support_contained,pointwise_drift,gradient_drift,defect_pos,defect_neg,"
        "dist_boundary,escaped\n";
  for (const PolarizationTraceEntry& e : trace) {
    os << detail::format_double(e.a) << ',' << (e.support_contained ? 1 : 0) << ','
       << detail::format_double(e.pointwise_drift) << ','
       << detail::format_double(e.gradient_drift) << ',' << detail::format_double(e.defect_pos)
       << ',' << detail::format_double(e.defect_neg) << ','
       << detail::format_double(e.dist_boundary) << ',' << e.escaped << '\n';
  }
}

void write_iteration_csv(std::ostream& os, const std::vector<IterationRow>& trace) {
  os << "iteration,energy,residual_sup,tangential_residual,defect_pos,defect_neg\n";
  for (const IterationRow& r : trace) {
    os << r.iteration << ',' << detail::format_double(r.energy) << ','
       << detail::format_double(r.residual_sup) << ','
       << detail::format_double(r.tangential_residual) << ','
       << detail::format_double(r.defect_pos) << ',' << detail::format_double(r.defect_neg)
       << '\n';
  }
}

void write_hopf_report(std::ostream& os, const HopfReport& rep) {
  os << "hopf conflict check";
  if (!rep.applicable) {
    os << ": " << rep.note << '\n';
    return;
  }
  os << " (tolerance " << detail::format_double(rep.tolerance) << ")\n";
  for (const HopfContactRow& row : rep.rows) {
    os << "contact (" << detail::format_double(row.contact.x()) << ", "
       << detail::format_double(row.contact.y()) << ") -> image ("
       << detail::format_double(row.image.x()) << ", " << detail::format_double(row.image.y())
       << ")";
    if (!row.note.empty()) {
      os << "  [" << row.note << "]\n";
      continue;
    }
    os << "  dn(image) = " << detail::format_double(row.nd_image)
       << (row.conflict ? "  CONFLICT EXHIBITED" : "") << '\n';
    for (const HopfSample& s : row.neighbors) {
      os << "  neighbor arc " << detail::format_double(s.arc_offset) << " at ("
         << detail::format_double(s.point.x()) << ", " << detail::format_double(s.point.y())
         << "): dn = " << detail::format_double(s.nd)
         << (s.positive_side ? "  [positive side]" : "  [negative side]") << '\n';
    }
  }
  os << "verdict: " << (rep.conflict_exhibited ? "conflict exhibited" : rep.note) << '\n';
}

}  // namespace plap
