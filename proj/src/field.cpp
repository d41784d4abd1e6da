#include "plap/field.hpp"

#include "plap/detail/text.hpp"

#include <istream>
#include <ostream>

namespace plap {

GridFunction zero_field(std::shared_ptr<const Grid> g) {
  GridFunction u;
  u.values = ArrayXXd::Zero(g->n1, g->n2);
  u.grid = std::move(g);
  return u;
}

GridFunction sample_field(std::shared_ptr<const Grid> g,
                          const std::function<double(const Vec2&)>& fn) {
  GridFunction u = zero_field(g);
  for (int j = 0; j < u.grid->n2; ++j)
    for (int i = 0; i < u.grid->n1; ++i)
      if (u.grid->inside(i, j)) u.values(i, j) = fn(u.grid->node(i, j));
  return u;
}

GridFunction sample_window(std::shared_ptr<const Grid> g,
                           const std::function<double(const Vec2&)>& fn) {
  GridFunction u = zero_field(g);
  for (int j = 0; j < u.grid->n2; ++j)
    for (int i = 0; i < u.grid->n1; ++i)
      u.values(i, j) = fn(u.grid->node(i, j));
  return u;
}

double sorted_sum(std::vector<double>& terms) {
  std::sort(terms.begin(), terms.end());
  double s = 0.0;
  for (double t : terms) s += t;
  return s;
}

MaskArray support_mask(const ArrayXXd& values) {
  return values != 0.0;
}

void write_field(std::ostream& os, const GridFunction& u) {
  const Grid& g = *u.grid;
  os << g.n1 << ' ' << g.n2 << ' ' << detail::format_double(g.h) << ' '
     << detail::format_double(g.ox) << ' ' << detail::format_double(g.oy) << '\n';
  for (int j = 0; j < g.n2; ++j) {
    for (int i = 0; i < g.n1; ++i) {
      if (i) os << ' ';
      os << detail::format_double(u.values(i, j));
    }
    os << '\n';
  }
}

FieldData read_field(std::istream& is) {
  FieldData d;
  std::string tok;
  if (!(is >> d.n1 >> d.n2 >> tok)) throw std::invalid_argument("read_field: bad header");
  d.h = detail::parse_double(tok);
  if (!(is >> tok)) throw std::invalid_argument("read_field: bad header");
  d.ox = detail::parse_double(tok);
  if (!(is >> tok)) throw std::invalid_argument("read_field: bad header");
  d.oy = detail::parse_double(tok);
  if (d.n1 <= 0 || d.n2 <= 0 || d.h <= 0) throw std::invalid_argument("read_field: bad dimensions");
  d.values.resize(d.n1, d.n2);
  for (int j = 0; j < d.n2; ++j)
    for (int i = 0; i < d.n1; ++i) {
      if (!(is >> tok)) throw std::invalid_argument("read_field: truncated values");
      d.values(i, j) = detail::parse_double(tok);
    }
  return d;
}

GridFunction attach_field(std::shared_ptr<const Grid> g, const FieldData& d) {
  if (g->n1 != d.n1 || g->n2 != d.n2 || std::abs(g->h - d.h) > 1e-12 ||
      std::abs(g->ox - d.ox) > 1e-12 || std::abs(g->oy - d.oy) > 1e-12)
    throw std::invalid_argument("attach_field: field lattice does not match the grid");
  GridFunction u;
  u.grid = std::move(g);
  u.values = d.values;
  return u;
}

}  // namespace plap
