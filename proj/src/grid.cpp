#include "plap/grid.hpp"

#include "plap/detail/text.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <istream>
#include <ostream>
#include <sstream>

namespace plap {

namespace {

double segment_distance(const Vec2& x, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double t = std::clamp(ab.squaredNorm() > 0 ? (x - a).dot(ab) / ab.squaredNorm() : 0.0, 0.0, 1.0);
  return (x - (a + t * ab)).norm();
}

bool point_in_polygon(const Vec2& x, const std::vector<Vec2>& vs) {
  bool in = false;
  for (size_t k = 0, l = vs.size() - 1; k < vs.size(); l = k++) {
    const Vec2& a = vs[l];
    const Vec2& b = vs[k];
    if ((b.y() > x.y()) != (a.y() > x.y())) {
      const double xi = b.x() + (x.y() - b.y()) * (a.x() - b.x()) / (a.y() - b.y());
      if (x.x() < xi) in = !in;
    }
  }
  return in;
}

}  // namespace

DomainDescriptor DomainDescriptor::rectangle(double width, double height) {
  if (width <= 0 || height <= 0) throw std::invalid_argument("rectangle: sides must be positive");
  DomainDescriptor d;
  d.kind_ = ShapeKind::rectangle;
  d.params_ = {width, height};
  return d;
}

DomainDescriptor DomainDescriptor::disk(double radius) {
  if (radius <= 0) throw std::invalid_argument("disk: radius must be positive");
  DomainDescriptor d;
  d.kind_ = ShapeKind::disk;
  d.params_ = {radius};
  return d;
}

DomainDescriptor DomainDescriptor::stadium(double core_length, double cap_radius) {
  if (core_length <= 0 || cap_radius <= 0) throw std::invalid_argument("stadium: parameters must be positive");
  DomainDescriptor d;
  d.kind_ = ShapeKind::stadium;
  d.params_ = {core_length, cap_radius};
  return d;
}

DomainDescriptor DomainDescriptor::polygon(std::vector<Vec2> vertices) {
  if (vertices.size() < 3) throw std::invalid_argument("polygon: need at least 3 vertices");
  // the symmetry axis is {x1 = 0}: every vertex must have a mirror partner
  for (const Vec2& v : vertices) {
    bool found = false;
    for (const Vec2& w : vertices)
      if (std::abs(w.x() + v.x()) < 1e-12 && std::abs(w.y() - v.y()) < 1e-12) { found = true; break; }
    if (!found) throw std::invalid_argument("polygon: vertex set not symmetric about {x1 = 0}");
  }
  DomainDescriptor d;
  d.kind_ = ShapeKind::polygon;
  d.vertices_ = std::move(vertices);
  for (const Vec2& v : d.vertices_) { d.params_.push_back(v.x()); d.params_.push_back(v.y()); }
  return d;
}

std::string DomainDescriptor::name() const {
  std::ostringstream os;
  switch (kind_) {
    case ShapeKind::rectangle: os << "rectangle(" << params_[0] << "x" << params_[1] << ")"; break;
    case ShapeKind::disk: os << "disk(" << params_[0] << ")"; break;
    case ShapeKind::stadium: os << "stadium(" << params_[0] << "," << params_[1] << ")"; break;
    case ShapeKind::polygon: os << "polygon(" << vertices_.size() << ")"; break;
  }
  return os.str();
}

double DomainDescriptor::signed_distance(const Vec2& x) const {
  switch (kind_) {
    case ShapeKind::rectangle: {
      const double qx = std::abs(x.x()) - params_[0] / 2;
      const double qy = std::abs(x.y()) - params_[1] / 2;
      const double ox = std::max(qx, 0.0), oy = std::max(qy, 0.0);
      return std::hypot(ox, oy) + std::min(std::max(qx, qy), 0.0);
    }
    case ShapeKind::disk:
      return x.norm() - params_[0];
    case ShapeKind::stadium: {
      const double half = params_[0] / 2;
      const Vec2 a(-half, 0.0), b(half, 0.0);
      return segment_distance(x, a, b) - params_[1];
    }
    case ShapeKind::polygon: {
      double dmin = std::numeric_limits<double>::infinity();
      for (size_t k = 0, l = vertices_.size() - 1; k < vertices_.size(); l = k++)
        dmin = std::min(dmin, segment_distance(x, vertices_[l], vertices_[k]));
      return point_in_polygon(x, vertices_) ? -dmin : dmin;
    }
  }
  return 0.0;
}

Region DomainDescriptor::classify(const Vec2& x, double tol) const {
  const double s = signed_distance(x);
  if (s < -tol) return Region::inside;
  if (s > tol) return Region::outside;
  return Region::boundary;
}

std::optional<Vec2> DomainDescriptor::outward_normal(const Vec2& b, double corner_tol) const {
  switch (kind_) {
    case ShapeKind::rectangle: {
      const double qx = std::abs(b.x()) - params_[0] / 2;
      const double qy = std::abs(b.y()) - params_[1] / 2;
      const bool on_x = std::abs(qx) <= corner_tol;
      const bool on_y = std::abs(qy) <= corner_tol;
      if (on_x && on_y) return std::nullopt;  // corner
      if (on_x) return Vec2(b.x() > 0 ? 1 : -1, 0);
      if (on_y) return Vec2(0, b.y() > 0 ? 1 : -1);
      return std::nullopt;
    }
    case ShapeKind::disk: {
      if (b.norm() == 0) return std::nullopt;
      return Vec2(b / b.norm());
    }
    case ShapeKind::stadium: {
      const double half = params_[0] / 2;
      const Vec2 c(std::clamp(b.x(), -half, half), 0.0);
      const Vec2 r = b - c;
      if (r.norm() == 0) return std::nullopt;
      return Vec2(r / r.norm());
    }
    case ShapeKind::polygon: {
      // nearest edge; a point equally near two edges sits at a corner
      double best = std::numeric_limits<double>::infinity(), second = best;
      size_t kb = 0;
      for (size_t k = 0, l = vertices_.size() - 1; k < vertices_.size(); l = k++) {
        const double d = segment_distance(b, vertices_[l], vertices_[k]);
        if (d < best) { second = best; best = d; kb = k; }
        else if (d < second) second = d;
      }
      if (second - best <= corner_tol) return std::nullopt;
      const Vec2& a = vertices_[(kb + vertices_.size() - 1) % vertices_.size()];
      const Vec2& c = vertices_[kb];
      Vec2 t = (c - a).normalized();
      Vec2 n(t.y(), -t.x());
      // orient outward
      if (signed_distance(b + 1e-6 * n) < signed_distance(b)) n = -n;
      return n;
    }
  }
  return std::nullopt;
}

Vec2 DomainDescriptor::project_to_boundary(const Vec2& x) const {
  Vec2 b = x;
  for (int it = 0; it < 8; ++it) {
    const double s = signed_distance(b);
    if (std::abs(s) < 1e-14) break;
    const double eps = 1e-7;
    Vec2 g((signed_distance(b + Vec2(eps, 0)) - signed_distance(b - Vec2(eps, 0))) / (2 * eps),
           (signed_distance(b + Vec2(0, eps)) - signed_distance(b - Vec2(0, eps))) / (2 * eps));
    const double g2 = g.squaredNorm();
    if (g2 < 1e-20) break;
    b -= s * g / g2;
  }
  return b;
}

std::optional<double> DomainDescriptor::section_halfwidth(double x2) const {
  switch (kind_) {
    case ShapeKind::rectangle:
      if (std::abs(x2) >= params_[1] / 2) return std::nullopt;
      return params_[0] / 2;
    case ShapeKind::disk: {
      const double r = params_[0];
      if (std::abs(x2) >= r) return std::nullopt;
      return std::sqrt(r * r - x2 * x2);
    }
    case ShapeKind::stadium: {
      const double r = params_[1];
      if (std::abs(x2) >= r) return std::nullopt;
      return params_[0] / 2 + std::sqrt(r * r - x2 * x2);
    }
    case ShapeKind::polygon: {
      double w = -1.0;
      for (size_t k = 0, l = vertices_.size() - 1; k < vertices_.size(); l = k++) {
        const Vec2& a = vertices_[l];
        const Vec2& b = vertices_[k];
        if ((b.y() > x2) != (a.y() > x2)) {
          const double xi = b.x() + (x2 - b.y()) * (a.x() - b.x()) / (a.y() - b.y());
          w = std::max(w, std::abs(xi));
        }
      }
      if (w < 0) return std::nullopt;
      return w;
    }
  }
  return std::nullopt;
}

Vec2 DomainDescriptor::bounding_halfwidths() const {
  switch (kind_) {
    case ShapeKind::rectangle: return {params_[0] / 2, params_[1] / 2};
    case ShapeKind::disk: return {params_[0], params_[0]};
    case ShapeKind::stadium: return {params_[0] / 2 + params_[1], params_[1]};
    case ShapeKind::polygon: {
      double wx = 0, wy = 0;
      for (const Vec2& v : vertices_) { wx = std::max(wx, std::abs(v.x())); wy = std::max(wy, std::abs(v.y())); }
      return {wx, wy};
    }
  }
  return {0, 0};
}

bool mask_connected(const MaskArray& mask) {
  const int n1 = int(mask.rows()), n2 = int(mask.cols());
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> seen(n1, n2);
  seen.setConstant(false);
  std::deque<std::pair<int, int>> queue;
  long total = 0;
  for (int j = 0; j < n2 && queue.empty(); ++j)
    for (int i = 0; i < n1 && queue.empty(); ++i)
      if (mask(i, j)) { queue.emplace_back(i, j); seen(i, j) = true; }
  if (queue.empty()) return true;
  long reached = 0;
  while (!queue.empty()) {
    auto [i, j] = queue.front();
    queue.pop_front();
    ++reached;
    const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
    for (int k = 0; k < 4; ++k) {
      const int ii = i + di[k], jj = j + dj[k];
      if (ii >= 0 && ii < n1 && jj >= 0 && jj < n2 && mask(ii, jj) && !seen(ii, jj)) {
        seen(ii, jj) = true;
        queue.emplace_back(ii, jj);
      }
    }
  }
  total = mask.count();
  return reached == total;
}

Grid build_grid(const DomainDescriptor& dom, double h, int pad_cells) {
  if (h <= 0) throw std::invalid_argument("build_grid: h must be positive");
  if (pad_cells < 0) throw std::invalid_argument("build_grid: pad_cells must be nonnegative");
  const Vec2 w = dom.bounding_halfwidths();
  const long k1 = std::llround(w.x() / h);
  const long k2 = std::llround(w.y() / h);
  if (std::abs(k1 * h - w.x()) > 1e-9 * std::max(1.0, w.x()) ||
      std::abs(k2 * h - w.y()) > 1e-9 * std::max(1.0, w.y()))
    throw std::invalid_argument("build_grid: h must divide the bounding-box half-widths (mirror-closed lattice)");

  Grid g;
  g.h = h;
  g.i0 = int(k1) + pad_cells;
  g.n1 = 2 * (int(k1) + pad_cells) + 1;
  g.n2 = 2 * (int(k2) + pad_cells) + 1;
  g.ox = -(double(k1) + pad_cells) * h;
  g.oy = -(double(k2) + pad_cells) * h;
  g.inside.resize(g.n1, g.n2);
  for (int j = 0; j < g.n2; ++j)
    for (int i = 0; i < g.n1; ++i)
      g.inside(i, j) = dom.classify(g.node(i, j)) == Region::inside;

  if (g.inside.count() == 0) throw std::invalid_argument("build_grid: empty interior mask (h too coarse?)");
  if (!mask_connected(g.inside)) throw std::invalid_argument("build_grid: interior mask is disconnected");

  g.boundary_ring.resize(g.n1, g.n2);
  g.boundary_ring.setConstant(false);
  for (int j = 0; j < g.n2; ++j)
    for (int i = 0; i < g.n1; ++i) {
      if (g.inside(i, j)) continue;
      const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
      for (int k = 0; k < 4; ++k) {
        const int ii = i + di[k], jj = j + dj[k];
        if (g.in_window(ii, jj) && g.inside(ii, jj)) { g.boundary_ring(i, j) = true; break; }
      }
    }
  return g;
}

namespace detail {

std::string format_double(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& tok) {
  double v = 0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
    throw std::invalid_argument("malformed number: '" + tok + "'");
  return v;
}

}  // namespace detail

void write_mask(std::ostream& os, const Grid& g) {
  os << g.n1 << ' ' << g.n2 << ' ' << detail::format_double(g.h) << ' '
     << detail::format_double(g.ox) << ' ' << detail::format_double(g.oy) << '\n';
  for (int j = 0; j < g.n2; ++j) {
    for (int i = 0; i < g.n1; ++i) os << (i ? " " : "") << (g.inside(i, j) ? '1' : '0');
    os << '\n';
  }
}

Grid read_mask(std::istream& is) {
  Grid g;
  std::string tok;
  if (!(is >> g.n1 >> g.n2 >> tok)) throw std::invalid_argument("read_mask: bad header");
  g.h = detail::parse_double(tok);
  if (!(is >> tok)) throw std::invalid_argument("read_mask: bad header");
  g.ox = detail::parse_double(tok);
  if (!(is >> tok)) throw std::invalid_argument("read_mask: bad header");
  g.oy = detail::parse_double(tok);
  g.i0 = int(std::llround(-g.ox / g.h));
  g.inside.resize(g.n1, g.n2);
  for (int j = 0; j < g.n2; ++j)
    for (int i = 0; i < g.n1; ++i) {
      int b = 0;
      if (!(is >> b)) throw std::invalid_argument("read_mask: truncated rows");
      g.inside(i, j) = b != 0;
    }
  g.boundary_ring.resize(g.n1, g.n2);
  g.boundary_ring.setConstant(false);
  for (int j = 0; j < g.n2; ++j)
    for (int i = 0; i < g.n1; ++i) {
      if (g.inside(i, j)) continue;
      const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
      for (int k = 0; k < 4; ++k)
        if (g.in_window(i + di[k], j + dj[k]) && g.inside(i + di[k], j + dj[k])) { g.boundary_ring(i, j) = true; break; }
    }
  return g;
}

}  // namespace plap
