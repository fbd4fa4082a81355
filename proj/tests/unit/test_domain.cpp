#include <doctest.h>

#include <cmath>
#include <random>

#include "pairtunnel/domain.hpp"
#include "pairtunnel/errors.hpp"

using namespace pairtunnel;

TEST_CASE("grid coordinates place the origin on a sample") {
  const Grid2D g = make_grid(4, 2.0);
  CHECK(g.dx() == 1.0);
  const auto x = g.coordinates();
  REQUIRE(x.size() == 4);
  CHECK(x[0] == -2.0);
  CHECK(x[1] == -1.0);
  CHECK(x[2] == 0.0);
  CHECK(x[3] == 1.0);
  CHECK(make_grid(512, 15.0).dx() == 0.05859375);
}

TEST_CASE("grid coordinates are mirror symmetric about the origin") {
  const Grid2D g = make_grid(256, 15.0);
  const int c = g.origin_index();
  for (int m = 1; m < c; ++m) CHECK(g.coordinate(c + m) == -g.coordinate(c - m));
}

TEST_CASE("invalid grids are rejected") {
  CHECK_THROWS_AS(make_grid(7, 2.0), ConfigError);
  CHECK_THROWS_AS(make_grid(2, 2.0), ConfigError);
  CHECK_THROWS_AS(make_grid(0, 2.0), ConfigError);
  CHECK_THROWS_AS(make_grid(8, 0.0), ConfigError);
  CHECK_THROWS_AS(make_grid(8, -1.0), ConfigError);
  CHECK_THROWS_AS(make_grid(8, NAN), ConfigError);
}

TEST_CASE("wavenumbers wrap to the symmetric band") {
  const Grid2D g = make_grid(8, 2.0);
  const double k0 = std::acos(-1.0) / 2.0;
  CHECK(g.wavenumber(0) == 0.0);
  CHECK(g.wavenumber(1) == doctest::Approx(k0));
  CHECK(g.wavenumber(4) == doctest::Approx(4 * k0));
  CHECK(g.wavenumber(5) == doctest::Approx(-3 * k0));
  CHECK(g.wavenumber(7) == doctest::Approx(-k0));
}

TEST_CASE("integrate a constant field") {
  const Grid2D g = make_grid(4, 2.0);
  CHECK(integrate(ComplexField2D(g, 1.0)) == 16.0);
  CHECK(integrate(ComplexField2D(g, cplx(0.0, 2.0))) == 64.0);
}

TEST_CASE("symmetry deviation of x1 is its largest antisymmetric jump") {
  const Grid2D g = make_grid(4, 2.0);
  const auto f = ComplexField2D::sample(g, [](double x1, double) { return cplx(x1, 0.0); });
  // max |x1 - x2| = 3, max |f| = 2
  CHECK(symmetry_deviation(f) == 1.5);
  CHECK(symmetry_deviation(ComplexField2D(g)) == 0.0);
  const auto s = ScalarField2D::sample(g, [](double x1, double x2) { return x1 * x2 + 1.0; });
  CHECK(symmetry_deviation(s) == 0.0);
}

TEST_CASE("swap transposes the field") {
  const Grid2D g = make_grid(6, 3.0);
  const auto f = ComplexField2D::sample(g, [](double x1, double x2) { return cplx(x1, 2 * x2); });
  const auto s = swapped(f);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) CHECK(s(i, j) == f(j, i));
  CHECK(l2_distance(swapped(s), f) == 0.0);
}

TEST_CASE("centered Gaussian splits evenly into quadrants") {
  const Grid2D g = make_grid(128, 10.0);
  const auto f = normalize(ComplexField2D::sample(
      g, [](double x1, double x2) { return cplx(std::exp(-(x1 * x1 + x2 * x2) / 4.0), 0.0); }));
  const auto q = quadrant_powers(f);
  CHECK(q.total() == doctest::Approx(1.0).epsilon(1e-13));
  for (double v : {q.q_pp, q.q_pm, q.q_mp, q.q_mm}) CHECK(v == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(q.p_right() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(q.p_pair() == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("axis samples are split between half-planes") {
  // Unit weight at the origin: a quarter in each quadrant.
  const Grid2D g = make_grid(4, 2.0);
  ComplexField2D f(g);
  f(2, 2) = 1.0;
  const auto q = quadrant_powers(f);
  CHECK(q.q_pp == 0.25);
  CHECK(q.q_mm == 0.25);
  CHECK(q.p_right() == 0.5);
  // On the x1 axis at x2 > 0: half to each of (+,+) and (-,+).
  ComplexField2D h(g);
  h(2, 3) = 1.0;
  const auto r = quadrant_powers(h);
  CHECK(r.q_pp == 0.5);
  CHECK(r.q_mp == 0.5);
  CHECK(r.q_pm == 0.0);
}

TEST_CASE("product state gives p2 = q^2 + (1 - q)^2") {
  const Grid2D g = make_grid(128, 12.0);
  for (double shift : {0.0, 0.7, 2.0, -1.3}) {
    auto phi = [shift](double x) { return std::exp(-(x - shift) * (x - shift) / 3.0); };
    const auto f = normalize(
        ComplexField2D::sample(g, [&](double x1, double x2) { return cplx(phi(x1) * phi(x2), 0.0); }));
    const auto q = quadrant_powers(f);
    const double right = q.p_right();
    CHECK(q.p_pair() == doctest::Approx(right * right + (1 - right) * (1 - right)).epsilon(1e-12));
  }
}

TEST_CASE("overlap is conjugate-linear in the first slot and obeys Cauchy-Schwarz") {
  const Grid2D g = make_grid(16, 4.0);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> d;
  for (int trial = 0; trial < 20; ++trial) {
    ComplexField2D a(g), b(g);
    for (auto& v : a.values()) v = cplx(d(rng), d(rng));
    for (auto& v : b.values()) v = cplx(d(rng), d(rng));
    const cplx ab = overlap(a, b);
    CHECK(std::abs(ab - std::conj(overlap(b, a))) < 1e-12 * std::abs(ab) + 1e-14);
    CHECK(std::norm(ab) <= integrate(a) * integrate(b) * (1 + 1e-14));
    CHECK(overlap(a, a).real() == doctest::Approx(integrate(a)));
    ComplexField2D ia = a;
    for (auto& v : ia.values()) v *= cplx(0.0, 1.0);
    CHECK(std::abs(overlap(ia, b) - cplx(0.0, -1.0) * ab) < 1e-12 * std::abs(ab));
  }
}

TEST_CASE("normalize and distances") {
  const Grid2D g = make_grid(8, 2.0);
  const ComplexField2D f(g, cplx(3.0, 4.0));
  CHECK(integrate(normalize(f)) == doctest::Approx(1.0));
  CHECK_THROWS_AS(normalize(ComplexField2D(g)), NumericalError);
  CHECK(l2_distance(f, f) == 0.0);
  CHECK(l2_distance(f, ComplexField2D(g)) == doctest::Approx(std::sqrt(integrate(f))));
  CHECK_THROWS_AS(overlap(f, ComplexField2D(make_grid(8, 3.0))), ConfigError);
}
