#include "plap/nodal.hpp"

#include "plap/detail/text.hpp"

#include <cmath>
#include <deque>
#include <ostream>

namespace plap {

std::vector<CrossingPoint> extract_nodal_set(const GridFunction& u, double tau) {
  if (tau < 0) throw std::invalid_argument("extract_nodal_set: tau must be nonnegative");
  const Grid& g = *u.grid;
  std::vector<CrossingPoint> z;
  for (int j = 0; j < g.n2; ++j)
    for (int i = 0; i < g.n1; ++i) {
      if (!g.inside(i, j)) continue;
      const double a = u.values(i, j);
      if (std::abs(a) <= tau) {
        z.push_back({g.node(i, j), i, j});
        continue;
      }
      // edges to the east and north neighbors, counted once
      for (int k = 0; k < 2; ++k) {
        const int ii = i + (k == 0), jj = j + (k == 1);
        if (!g.in_window(ii, jj) || !g.inside(ii, jj)) continue;
        const double b = u.values(ii, jj);
        if (a * b < 0) {
          const double theta = a / (a - b);
          const Vec2 xa = g.node(i, j), xb = g.node(ii, jj);
          z.push_back({xa + theta * (xb - xa), i, j});
        }
      }
    }
  return z;
}

NodalDomainLabels nodal_domains(const GridFunction& u, double tau) {
  const Grid& g = *u.grid;
  NodalDomainLabels out;
  out.labels = Eigen::ArrayXXi::Zero(g.n1, g.n2);
  auto bucket = [&](int i, int j) -> int {
    if (!g.inside(i, j)) return 0;
    const double v = u.values(i, j);
    if (v > tau) return 1;
    if (v < -tau) return -1;
    return 0;
  };
  int next = 0;
  const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
  for (int j = 0; j < g.n2; ++j)
    for (int i = 0; i < g.n1; ++i) {
      const int b = bucket(i, j);
      if (b == 0 || out.labels(i, j) != 0) continue;
      ++next;
      std::deque<std::pair<int, int>> q{{i, j}};
      out.labels(i, j) = next;
      while (!q.empty()) {
        auto [ci, cj] = q.front();
        q.pop_front();
        for (int k = 0; k < 4; ++k) {
          const int ii = ci + di[k], jj = cj + dj[k];
          if (g.in_window(ii, jj) && out.labels(ii, jj) == 0 && bucket(ii, jj) == b) {
            out.labels(ii, jj) = next;
            q.emplace_back(ii, jj);
          }
        }
      }
    }
  out.count = next;
  return out;
}

DistanceReport dist_to_boundary(const std::vector<CrossingPoint>& z, const DomainDescriptor& dom,
                                double h) {
  if (z.empty()) throw std::invalid_argument("dist_to_boundary: empty nodal set (not sign-changing)");
  double d = std::numeric_limits<double>::infinity();
  for (const CrossingPoint& c : z) d = std::min(d, std::abs(dom.signed_distance(c.x)));
  return {d, d <= h};
}

bool positive_near_boundary(const GridFunction& u) {
  const Grid& g = *u.grid;
  const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
  for (int j = 0; j < g.n2; ++j)
    for (int i = 0; i < g.n1; ++i) {
      if (!g.inside(i, j)) continue;
      bool collar = false;
      for (int k = 0; k < 4 && !collar; ++k) {
        const int ii = i + di[k], jj = j + dj[k];
        collar = !g.in_window(ii, jj) || !g.inside(ii, jj);
      }
      if (collar && !(u.values(i, j) > 0)) return false;
    }
  return true;
}

ContactReport e1_distance(const GridFunction& u, const std::vector<CrossingPoint>& z,
                          const DomainDescriptor& dom) {
  if (z.empty()) throw std::invalid_argument("e1_distance: empty nodal set");
  if (!positive_near_boundary(u))
    throw std::invalid_argument(
        "e1_distance: field is not positive near the boundary; apply the sign-flip reduction");
  const double h = u.grid->h;

  std::vector<double> gap(z.size(), std::numeric_limits<double>::infinity());
  double d1 = std::numeric_limits<double>::infinity();
  size_t kbest = 0;
  for (size_t k = 0; k < z.size(); ++k) {
    const auto w = dom.section_halfwidth(z[k].x.y());
    if (!w) continue;
    gap[k] = z[k].x.x() + *w;
    if (gap[k] < d1) { d1 = gap[k]; kbest = k; }
  }
  if (!std::isfinite(d1)) throw std::invalid_argument("e1_distance: no section through the nodal set");

  ContactReport rep;
  rep.d1 = d1;
  rep.principal = z[kbest];
  std::vector<char> in_contact(z.size(), 0);
  for (size_t k = 0; k < z.size(); ++k)
    if (gap[k] <= d1 + h) {
      in_contact[k] = 1;
      rep.contact.push_back(z[k]);
    }

  bool rest_empty = rep.contact.size() == z.size();
  if (!rest_empty) {
    for (size_t k = 0; k < z.size(); ++k) {
      if (!in_contact[k]) continue;
      for (size_t l = 0; l < z.size(); ++l) {
        if (in_contact[l]) continue;
        if ((z[k].x - z[l].x).norm() <= 2 * h) {
          rep.contact_boundary.push_back(z[k]);
          break;
        }
      }
    }
  }
  if (rep.contact_boundary.empty()) {
    // contact set equals the nodal set (or is isolated): fall back to its
    // x2-extreme members so the construction still has contact points
    rep.contact_fallback = true;
    size_t kmin = 0, kmax = 0;
    bool first = true;
    for (size_t k = 0; k < z.size(); ++k) {
      if (!in_contact[k]) continue;
      if (first) { kmin = kmax = k; first = false; continue; }
      if (z[k].x.y() < z[kmin].x.y()) kmin = k;
      if (z[k].x.y() > z[kmax].x.y()) kmax = k;
    }
    rep.contact_boundary.push_back(z[kmin]);
    if (kmax != kmin) rep.contact_boundary.push_back(z[kmax]);
  }
  return rep;
}

double interpolate(const GridFunction& u, const Vec2& x) {
  const Grid& g = *u.grid;
  const double fx = (x.x() - g.ox) / g.h, fy = (x.y() - g.oy) / g.h;
  const int i = int(std::floor(fx)), j = int(std::floor(fy));
  const double tx = fx - i, ty = fy - j;
  auto val = [&](int ii, int jj) { return g.in_window(ii, jj) ? u.values(ii, jj) : 0.0; };
  return (1 - tx) * (1 - ty) * val(i, j) + tx * (1 - ty) * val(i + 1, j) +
         (1 - tx) * ty * val(i, j + 1) + tx * ty * val(i + 1, j + 1);
}

double normal_derivative(const GridFunction& u, const Vec2& b, const DomainDescriptor& dom) {
  const auto n = dom.outward_normal(b);
  if (!n) throw std::invalid_argument("normal_derivative: no normal at this boundary point (corner)");
  const double h = u.grid->h;
  const double g1 = interpolate(u, b - h * (*n));
  const double g2 = interpolate(u, b - 2 * h * (*n));
  return -(4 * g1 - g2) / (2 * h);
}

NodalDecomposition analyze_nodal(const GridFunction& u, const DomainDescriptor& dom, double tau) {
  const Grid& g = *u.grid;
  NodalDecomposition dec;
  dec.crossings = extract_nodal_set(u, tau);
  const NodalDomainLabels lab = nodal_domains(u, tau);
  dec.labels = lab.labels;
  dec.domain_count = lab.count;
  dec.dist = dist_to_boundary(dec.crossings, dom, g.h);

  // |u| <= tau plateaus strictly inside are flagged, never merged
  for (int j = 0; j < g.n2 && !dec.interior_plateau; ++j)
    for (int i = 0; i < g.n1 && !dec.interior_plateau; ++i) {
      if (!g.inside(i, j) || std::abs(u.values(i, j)) > tau) continue;
      bool all_flat = true;
      const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
      for (int k = 0; k < 4 && all_flat; ++k) {
        const int ii = i + di[k], jj = j + dj[k];
        all_flat = g.in_window(ii, jj) && std::abs(u.values(ii, jj)) <= tau;
      }
      dec.interior_plateau = all_flat;
    }

  if (dec.dist.resolution_limited) {
    dec.note = "nodal set reaches the boundary at grid resolution (d <= h)";
  } else {
    try {
      dec.contact = e1_distance(u, dec.crossings, dom);
    } catch (const std::invalid_argument& e) {
      dec.note = e.what();
    }
  }
  return dec;
}

void write_decomposition_csv(std::ostream& os, const NodalDecomposition& dec) {
  os << "d,d1,domains,contact_size,contact_boundary_size,resolution_limited,plateau\n";
  os << detail::format_double(dec.dist.d) << ','
     << (dec.contact ? detail::format_double(dec.contact->d1) : std::string("nan")) << ','
     << dec.domain_count << ',' << (dec.contact ? dec.contact->contact.size() : 0) << ','
     << (dec.contact ? dec.contact->contact_boundary.size() : 0) << ','
     << (dec.dist.resolution_limited ? 1 : 0) << ',' << (dec.interior_plateau ? 1 : 0) << '\n';
  os << "crossing_x,crossing_y\n";
  for (const CrossingPoint& c : dec.crossings)
    os << detail::format_double(c.x.x()) << ',' << detail::format_double(c.x.y()) << '\n';
}

}  // namespace plap
