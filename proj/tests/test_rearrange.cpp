#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "plap/rearrange.hpp"

#include <algorithm>
#include <random>

using namespace plap;

namespace {

std::shared_ptr<const Grid> padded_disk(double h, int pad) {
  return std::make_shared<const Grid>(build_grid(DomainDescriptor::disk(1.0), h, pad));
}

GridFunction random_field(std::shared_ptr<const Grid> g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  GridFunction u = zero_field(g);
  for (int j = 0; j < g->n2; ++j)
    for (int i = 0; i < g->n1; ++i)
      if (g->inside(i, j)) u.values(i, j) = unif(rng);
  return u;
}

PolarizationPlane plane_k(const Grid& g, long k) {
  PolarizationPlane pl;
  pl.k = k;
  pl.a = double(k) * g.h / 2;
  pl.m = k + 2L * g.i0;
  return pl;
}

std::vector<double> sorted_values(const ArrayXXd& v) {
  std::vector<double> out(v.data(), v.data() + v.size());
  std::sort(out.begin(), out.end());
  return out;
}

// independent edge-sum oracle for the gradient energy
double dirichlet_oracle(const Grid& g, const ArrayXXd& v, double p) {
  auto val = [&](int i, int j) { return g.in_window(i, j) ? v(i, j) : 0.0; };
  long double s = 0;
  for (int j = -1; j <= g.n2; ++j)
    for (int i = -1; i <= g.n1; ++i) {
      if (i + 1 <= g.n1 && j >= 0 && j < g.n2)
        s += std::pow(std::abs(val(i + 1, j) - val(i, j)), p);
      if (j + 1 <= g.n2 && i >= 0 && i < g.n1)
        s += std::pow(std::abs(val(i, j + 1) - val(i, j)), p);
    }
  return double(std::pow(g.h, 2 - p) * s);
}

}  // namespace

TEST_CASE("signed parts") {
  auto g = padded_disk(0.25, 2);
  SUBCASE("constant positive field") {
    GridFunction v = sample_field(g, [](const Vec2&) { return 3.5; });
    CHECK((positive_part(v).values == v.values).all());
    CHECK((negative_part(v).values == 0.0).all());
  }
  SUBCASE("x1 has its positive part right of the axis") {
    GridFunction v = sample_window(g, [](const Vec2& x) { return x.x(); });
    const GridFunction vp = positive_part(v);
    for (int j = 0; j < g->n2; ++j)
      for (int i = 0; i < g->n1; ++i)
        if (vp.values(i, j) > 0) CHECK(g->x1(i) > 0);
  }
  SUBCASE("recomposition is exact") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 50; ++t) {
      const GridFunction v = random_field(g, rng);
      CHECK(((positive_part(v).values + negative_part(v).values) == v.values).all());
      CHECK((positive_part(v).values >= 0.0).all());
      CHECK((negative_part(v).values <= 0.0).all());
    }
  }
}

TEST_CASE("function polarization") {
  auto g = padded_disk(0.125, 8);

  SUBCASE("a field even about the plane is fixed") {
    const double a = 0.25;
    GridFunction v = sample_window(g, [&](const Vec2& x) {
      const double s = x.x() - a;
      return std::exp(-s * s - x.y() * x.y());
    });
    const auto pl = PolarizationPlane::aligned(*g, a);
    const auto res = polarize_function(v, pl);
    CHECK(res.escaped == 0);
    CHECK((res.field.values == v.values).all());
  }

  SUBCASE("odd profile flips sign about the axis") {
    GridFunction v = sample_window(g, [](const Vec2& x) { return x.x(); });
    const auto res = polarize_function(v, PolarizationPlane::aligned(*g, 0.0));
    CHECK((res.field.values == (-v.values)).all());
  }

  SUBCASE("pair sorting puts the smaller value on the plus side") {
    GridFunction v = zero_field(g);
    const auto pl = PolarizationPlane::aligned(*g, 0.25);
    const int i = g->i0 + 12, j = g->i0;
    const int ip = pl.mirror(i);
    v.values(i, j) = 1.0;  // x1 > a side
    v.values(ip, j) = 3.0;
    const auto res = polarize_function(v, pl);
    CHECK(res.field.values(i, j) == 1.0);
    CHECK(res.field.values(ip, j) == 3.0);
    v.values(i, j) = 3.0;
    v.values(ip, j) = 1.0;
    const auto swapped = polarize_function(v, pl);
    CHECK(swapped.field.values(i, j) == 1.0);
    CHECK(swapped.field.values(ip, j) == 3.0);
  }

  SUBCASE("value multiset is preserved and polarization is idempotent") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long> offs(-12, 12);
    for (int t = 0; t < 100; ++t) {
      const GridFunction v = random_field(g, rng);
      const auto pl = plane_k(*g, offs(rng));
      const auto res = polarize_function(v, pl);
      REQUIRE(res.escaped == 0);
      CHECK(sorted_values(res.field.values) == sorted_values(v.values));
      const auto twice = polarize_function(res.field, pl);
      CHECK((twice.field.values == res.field.values).all());
    }
  }

  SUBCASE("plus/minus commutation and support decomposition oracles") {
    std::mt19937_64 rng(19);
    std::uniform_int_distribution<long> offs(-12, 12);
    for (int t = 0; t < 300; ++t) {
      const GridFunction v = random_field(g, rng);
      const auto pl = plane_k(*g, offs(rng));
      CHECK(plus_minus_commutation_check(v, pl));
      CHECK(support_decomposition_check(v, pl));
    }
    // nonnegative field: the negative part stays empty through polarization
    GridFunction w = sample_field(g, [](const Vec2& x) { return 1.0 + x.y(); });
    const auto pl = PolarizationPlane::aligned(*g, 0.25);
    CHECK(plus_minus_commutation_check(w, pl));
    const auto res = polarize_function(w, pl);
    CHECK((negative_part(res.field).values == 0.0).all());
  }

  SUBCASE("two separated bumps decompose supportwise") {
    GridFunction v = sample_field(g, [](const Vec2& x) {
      const double dp = (x - Vec2(0.45, 0.2)).squaredNorm();
      const double dm = (x - Vec2(-0.4, -0.3)).squaredNorm();
      double s = 0;
      if (dp < 0.04) s += (0.04 - dp);
      if (dm < 0.06) s -= (0.06 - dm);
      return s;
    });
    for (long k : {-8L, -3L, 0L, 5L, 10L}) CHECK(support_decomposition_check(v, plane_k(*g, k)));
  }
}

TEST_CASE("pointwise integrals") {
  SUBCASE("zero field integrates to zero") {
    auto g = padded_disk(0.25, 0);
    CHECK(pointwise_integral(zero_field(g), [](double s) { return s * s; }) == 0.0);
  }
  SUBCASE("three nodes at unit spacing") {
    auto g = std::make_shared<const Grid>(build_grid(DomainDescriptor::rectangle(8, 8), 1.0));
    GridFunction v = zero_field(g);
    v.values(g->i0, g->i0) = 1.0;
    v.values(g->i0 + 1, g->i0) = -2.0;
    v.values(g->i0 + 2, g->i0) = 3.0;
    CHECK(pointwise_integral(v, [](double s) { return s * s; }) == 14.0);
  }
  SUBCASE("integrand with G(0) != 0 is rejected") {
    auto g = padded_disk(0.25, 0);
    CHECK_THROWS_AS(pointwise_integral(zero_field(g), [](double s) { return std::cos(s); }),
                    std::invalid_argument);
  }
  SUBCASE("bit-exact invariance under polarization") {
    auto g = padded_disk(0.125, 8);
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<long> offs(-12, 12);
    auto F4 = [](double s) { return std::pow(std::abs(s), 4) / 4; };
    for (int t = 0; t < 100; ++t) {
      const GridFunction v = random_field(g, rng);
      const auto res = polarize_function(v, plane_k(*g, offs(rng)));
      REQUIRE(res.escaped == 0);
      CHECK(pointwise_integral(v, F4) == pointwise_integral(res.field, F4));
    }
  }
}

TEST_CASE("gradient energy") {
  SUBCASE("zero field") {
    auto g = padded_disk(0.25, 0);
    CHECK(dirichlet_energy(zero_field(g), 2.0) == 0.0);
  }
  SUBCASE("single interior node at unit spacing touches four edges") {
    auto g = std::make_shared<const Grid>(build_grid(DomainDescriptor::rectangle(8, 8), 1.0));
    GridFunction v = zero_field(g);
    v.values(g->i0, g->i0) = 1.0;
    for (double p : {1.5, 2.0, 3.0}) CHECK(dirichlet_energy(v, p) == 4.0);
    v.values(g->i0, g->i0) = 2.0;
    CHECK(dirichlet_energy(v, 2.0) == 16.0);  // 4 edges of squared difference 4
    CHECK(dirichlet_energy(v, 3.0) == 32.0);
  }
  SUBCASE("agrees with the brute-force edge oracle") {
    auto g = padded_disk(0.25, 2);
    std::mt19937_64 rng(31);
    for (int t = 0; t < 30; ++t) {
      const GridFunction v = random_field(g, rng);
      for (double p : {1.5, 2.0, 3.0})
        CHECK(dirichlet_energy(v, p) ==
              doctest::Approx(dirichlet_oracle(*g, v.values, p)).epsilon(1e-12));
    }
  }
  SUBCASE("resolves the analytic Dirichlet integral of the first square mode") {
    const double target = M_PI * M_PI / 2;  // |grad sin(pi x) sin(pi y)|^2 over the unit square
    double prev_err = 0;
    for (int level = 0; level < 3; ++level) {
      const double h = 1.0 / (16 << level);
      auto g = std::make_shared<const Grid>(build_grid(DomainDescriptor::rectangle(1, 1), h));
      const GridFunction v = sample_field(g, [](const Vec2& x) {
        return std::sin(M_PI * (x.x() + 0.5)) * std::sin(M_PI * (x.y() + 0.5));
      });
      const double err = std::abs(dirichlet_energy(v, 2.0) - target);
      if (level) CHECK(err < prev_err / 2.5);
      prev_err = err;
    }
    CHECK(prev_err < 0.01 * target);
  }
  SUBCASE("never increases under polarization") {
    auto g = padded_disk(0.125, 8);
    std::mt19937_64 rng(37);
    std::uniform_int_distribution<long> offs(-12, 12);
    for (int t = 0; t < 100; ++t) {
      const GridFunction v = random_field(g, rng);
      const auto pl = plane_k(*g, offs(rng));
      const auto res = polarize_function(v, pl);
      REQUIRE(res.escaped == 0);
      for (double p : {1.5, 2.0, 3.0})
        CHECK(dirichlet_energy(res.field, p) <= dirichlet_energy(v, p));
    }
  }
}

TEST_CASE("value polarization is scalar generic") {
  FieldMatrix<float> v(9, 5);
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<float> unif(-1.f, 1.f);
  for (int j = 0; j < 5; ++j)
    for (int i = 0; i < 9; ++i) v(i, j) = unif(rng);
  PolarizationPlane pl;
  pl.k = 0;
  pl.a = 0;
  pl.m = 8;  // mirror about the middle column
  const auto res = polarize_values<float>(v, pl);
  CHECK(res.escaped == 0);
  std::vector<float> a(v.data(), v.data() + v.size());
  std::vector<float> b(res.values.data(), res.values.data() + res.values.size());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  CHECK(a == b);
}
