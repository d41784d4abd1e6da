#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "plap/grid.hpp"
#include "plap/polarization.hpp"

#include <random>
#include <sstream>

using namespace plap;

namespace {

std::shared_ptr<const Grid> square_grid(double side, double h, int pad = 0) {
  return std::make_shared<const Grid>(build_grid(DomainDescriptor::rectangle(side, side), h, pad));
}

// brute-force polarization of a mask straight from the definition
MaskArray polarize_set_oracle(const Grid& g, const MaskArray& mask, const PolarizationPlane& pl,
                              PolarizationVariant variant) {
  MaskArray out(g.n1, g.n2);
  for (int j = 0; j < g.n2; ++j)
    for (int i = 0; i < g.n1; ++i) {
      const int ip = pl.mirror(i);
      const bool here = mask(i, j);
      const bool there = g.in_window(ip, j) ? mask(ip, j) : false;
      const int side = pl.side(i);
      if (side == 0) out(i, j) = here;
      else if ((side > 0) == (variant == PolarizationVariant::primal)) out(i, j) = here && there;
      else out(i, j) = here || there;
    }
  return out;
}

}  // namespace

TEST_CASE("reflection about a vertical line") {
  CHECK(reflect({3, 2}, 1.0) == Vec2(-1, 2));
  CHECK(reflect({0.5, 0.7}, 0.0) == Vec2(-0.5, 0.7));
  CHECK(reflect({1.25, -3}, 1.25) == Vec2(1.25, -3));
  // involution: up to rounding for arbitrary reals, exact for the index pairing
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int k = 0; k < 100; ++k) {
    const Vec2 x(u(rng), u(rng));
    const double a = u(rng);
    CHECK((reflect(reflect(x, a), a) - x).norm() == doctest::Approx(0.0).epsilon(1e-12));
  }
  const Grid g = build_grid(DomainDescriptor::rectangle(2, 2), 0.25);
  const auto pl = PolarizationPlane::aligned(g, 0.375);
  for (int i = 0; i < g.n1; ++i) {
    CHECK(pl.mirror(pl.mirror(i)) == i);
    if (pl.side(i) != 0) CHECK(pl.side(pl.mirror(i)) == -pl.side(i));
  }
}

TEST_CASE("grid construction") {
  SUBCASE("rectangle interior count") {
    auto g = square_grid(2.0, 1.0 / 32);
    CHECK(g->inside_count() == 63 * 63);
    CHECK(g->x1(g->i0) == 0.0);
  }
  SUBCASE("disk mask is the strict membership predicate") {
    const auto dom = DomainDescriptor::disk(1.0);
    const Grid g = build_grid(dom, 1.0 / 64);
    long count = 0;
    for (int j = 0; j < g.n2; ++j)
      for (int i = 0; i < g.n1; ++i) {
        const Vec2 x = g.node(i, j);
        CHECK(g.inside(i, j) == (x.squaredNorm() < 1.0));
        count += g.inside(i, j);
      }
    CHECK(count == g.inside_count());
    CHECK(!g.inside(g.i0 + 64, g.i0));  // (1, 0) sits on the circle, excluded
  }
  SUBCASE("stadium is connected and Steiner symmetric") {
    const auto dom = DomainDescriptor::stadium(1.0, 0.5);
    const Grid g = build_grid(dom, 1.0 / 32);
    CHECK(mask_connected(g.inside));
    CHECK(is_steiner_symmetric(g, g.inside).symmetric);
  }
  SUBCASE("misaligned spacing is rejected") {
    CHECK_THROWS_AS(build_grid(DomainDescriptor::disk(1.0), 0.3), std::invalid_argument);
  }
  SUBCASE("disconnected mask is rejected") {
    // two lobes joined by a bar that threads between lattice rows
    const auto dom = DomainDescriptor::polygon({{-1, -1},
                                                {-0.25, -1},
                                                {-0.25, 0.55},
                                                {0.25, 0.55},
                                                {0.25, -1},
                                                {1, -1},
                                                {1, 1},
                                                {0.25, 1},
                                                {0.25, 0.7},
                                                {-0.25, 0.7},
                                                {-0.25, 1},
                                                {-1, 1}});
    CHECK_THROWS_AS(build_grid(dom, 0.25), std::invalid_argument);
  }
}

TEST_CASE("set polarization") {
  const double h = 0.25;
  auto g = square_grid(6.0, h);  // window [-3,3]^2

  SUBCASE("interval (-1,2) polarizes to (-2,1) about 0") {
    MaskArray mask(g->n1, g->n2);
    for (int j = 0; j < g->n2; ++j)
      for (int i = 0; i < g->n1; ++i) {
        const double x = g->x1(i);
        mask(i, j) = x > -1 && x < 2;
      }
    const auto pl = PolarizationPlane::aligned(*g, 0.0);
    const auto res = polarize_set(mask, pl, PolarizationVariant::primal);
    CHECK(res.escaped == 0);
    for (int j = 0; j < g->n2; ++j)
      for (int i = 0; i < g->n1; ++i) {
        const double x = g->x1(i);
        CHECK(res.mask(i, j) == (x > -2 && x < 1));
      }
    CHECK((res.mask == polarize_set_oracle(*g, mask, pl, PolarizationVariant::primal)).all());
  }

  SUBCASE("symmetric convex masks are fixed points") {
    const Grid disk = build_grid(DomainDescriptor::disk(1.0), 1.0 / 8, 8);
    for (double a : {0.0, 0.25, 0.5}) {
      const auto pl = PolarizationPlane::aligned(disk, a);
      const auto res = polarize_set(disk.inside, pl, PolarizationVariant::primal);
      CHECK(res.escaped == 0);
      CHECK((res.mask == disk.inside).all());
    }
  }

  SUBCASE("a lone point in the right half-space swaps sides") {
    MaskArray mask = MaskArray::Constant(g->n1, g->n2, false);
    const int i = g->i0 + 6, j = g->i0 + 2;
    mask(i, j) = true;
    const auto pl = PolarizationPlane::aligned(*g, 0.25);  // 2a = 2h
    const auto res = polarize_set(mask, pl, PolarizationVariant::primal);
    CHECK(res.mask.count() == 1);
    CHECK(res.mask(pl.mirror(i), j));
  }

  SUBCASE("misaligned plane is rejected") {
    CHECK_THROWS_AS(PolarizationPlane::aligned(*g, 0.1), std::invalid_argument);
    CHECK(PolarizationPlane::aligned_floor(*g, 0.1).a == doctest::Approx(0.0));
  }

  SUBCASE("random masks: cardinality, idempotence, oracle agreement, duality") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unif(0, 1);
    std::uniform_int_distribution<int> offs(-4, 4);  // the mask margin absorbs every mirror
    for (int trial = 0; trial < 200; ++trial) {
      MaskArray mask = MaskArray::Constant(g->n1, g->n2, false);
      for (int j = 4; j < g->n2 - 4; ++j)
        for (int i = 4; i < g->n1 - 4; ++i) mask(i, j) = unif(rng) < 0.4;
      PolarizationPlane pl;
      pl.k = offs(rng);
      pl.a = pl.k * h / 2;
      pl.m = pl.k + 2L * g->i0;
      const auto variant = trial % 2 ? PolarizationVariant::primal : PolarizationVariant::dual;
      const auto res = polarize_set(mask, pl, variant);
      REQUIRE(res.escaped == 0);
      CHECK(res.mask.count() == mask.count());
      CHECK((res.mask == polarize_set_oracle(*g, mask, pl, variant)).all());
      const auto twice = polarize_set(res.mask, pl, variant);
      CHECK((twice.mask == res.mask).all());
      // dual polarization is the complement conjugate of the primal one,
      // node-exact wherever the mirror stays in the window
      const auto other = polarize_set(mask, pl,
                                      variant == PolarizationVariant::primal
                                          ? PolarizationVariant::dual
                                          : PolarizationVariant::primal);
      const MaskArray comp = !mask;
      const auto comp_pol = polarize_set(comp, pl, variant);
      for (int j = 0; j < g->n2; ++j)
        for (int i = 0; i < g->n1; ++i)
          if (g->in_window(pl.mirror(i), j)) CHECK(other.mask(i, j) == !comp_pol.mask(i, j));
    }
  }
}

TEST_CASE("Steiner symmetry characterizations") {
  SUBCASE("centered rectangle passes") {
    auto g = square_grid(2.0, 1.0 / 16);
    const auto rep = is_steiner_symmetric(*g, g->inside);
    CHECK(rep.symmetric);
    CHECK(!rep.witness);
  }
  SUBCASE("annulus fails both definitions") {
    const Grid g = build_grid(DomainDescriptor::disk(1.0), 1.0 / 16);
    MaskArray annulus(g.n1, g.n2);
    for (int j = 0; j < g.n2; ++j)
      for (int i = 0; i < g.n1; ++i) {
        const double r = g.node(i, j).norm();
        annulus(i, j) = r < 1.0 && r > 0.4;
      }
    CHECK(!steiner_by_polarization(g, annulus).symmetric);
    CHECK(!steiner_by_row_segments(g, annulus).symmetric);
    CHECK(!is_steiner_symmetric(g, annulus).symmetric);
  }
  SUBCASE("shifted rectangle fails with a moving witness") {
    auto g = square_grid(4.0, 0.25);
    MaskArray mask(g->n1, g->n2);
    for (int j = 0; j < g->n2; ++j)
      for (int i = 0; i < g->n1; ++i) {
        const Vec2 x = g->node(i, j);
        mask(i, j) = x.x() > -0.75 && x.x() < 1.25 && std::abs(x.y()) < 1;
      }
    const auto rep = is_steiner_symmetric(*g, mask);
    REQUIRE(!rep.symmetric);
    REQUIRE(rep.witness.has_value());
    // the witness plane indeed moves the witness node
    PolarizationPlane pl;
    pl.k = std::llround(2 * rep.witness->a / g->h);
    pl.a = rep.witness->a;
    pl.m = pl.k + 2L * g->i0;
    const auto res = polarize_set(mask, pl, rep.witness->variant);
    CHECK(res.mask(rep.witness->i, rep.witness->j) != mask(rep.witness->i, rep.witness->j));
  }
}

TEST_CASE("polarization domain monotonicity") {
  const Grid g = build_grid(DomainDescriptor::disk(1.0), 1.0 / 8, 8);
  auto disk_mask = [&](double r0, Vec2 c) {
    MaskArray m(g.n1, g.n2);
    for (int j = 0; j < g.n2; ++j)
      for (int i = 0; i < g.n1; ++i) m(i, j) = (g.node(i, j) - c).norm() < r0;
    return m;
  };
  SUBCASE("nested disks") {
    const auto sub = disk_mask(0.5, {0.1, 0.0});
    const auto super = disk_mask(0.9, {0.0, 0.0});
    const auto pl = PolarizationPlane::aligned(g, 0.25);
    CHECK(monotonicity_check(sub, super, pl, PolarizationVariant::primal));
    CHECK(monotonicity_check(sub, super, pl, PolarizationVariant::dual));
    CHECK(monotonicity_check(super, super, pl, PolarizationVariant::primal));
  }
  SUBCASE("precondition violation is reported") {
    const auto a = disk_mask(0.5, {0.3, 0.0});
    const auto b = disk_mask(0.5, {-0.3, 0.0});
    const auto pl = PolarizationPlane::aligned(g, 0.0);
    CHECK_THROWS_AS(monotonicity_check(a, b, pl, PolarizationVariant::primal),
                    std::invalid_argument);
  }
  SUBCASE("random nested pairs") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> unif(0, 1);
    std::uniform_int_distribution<int> offs(-6, 6);
    for (int trial = 0; trial < 300; ++trial) {
      MaskArray super = MaskArray::Constant(g.n1, g.n2, false);
      MaskArray sub = super;
      for (int j = 4; j < g.n2 - 4; ++j)
        for (int i = 4; i < g.n1 - 4; ++i) {
          super(i, j) = unif(rng) < 0.5;
          sub(i, j) = super(i, j) && unif(rng) < 0.6;
        }
      PolarizationPlane pl;
      pl.k = offs(rng);
      pl.a = pl.k * g.h / 2;
      pl.m = pl.k + 2L * g.i0;
      CHECK(monotonicity_check(sub, super, pl,
                               trial % 2 ? PolarizationVariant::primal
                                         : PolarizationVariant::dual));
    }
  }
}

TEST_CASE("mask round trip") {
  const Grid g = build_grid(DomainDescriptor::stadium(1.0, 0.5), 1.0 / 8);
  std::stringstream ss;
  write_mask(ss, g);
  const Grid back = read_mask(ss);
  CHECK(back.n1 == g.n1);
  CHECK(back.n2 == g.n2);
  CHECK(back.h == g.h);
  CHECK(back.ox == g.ox);
  CHECK((back.inside == g.inside).all());
  CHECK((back.boundary_ring == g.boundary_ring).all());
}
