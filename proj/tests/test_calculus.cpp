#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "supergeo/calculus.hpp"

using namespace supergeo;
using namespace sgtest;

namespace {

AlgebraPtr alg6() { return Algebra::make(6, 6, Field::Complex); }

SuperPoint rand_point(Rng& rng, const AlgebraPtr& alg, const ChartPtr& ch,
                      double lo = 0.5, double hi = 2.0) {
  std::vector<G> c;
  for (int a = 0; a < ch->n(); ++a)
    c.push_back(ch->odd_index(a) ? rand_odd(rng, alg)
                                 : rand_even(rng, alg, lo, hi));
  return SuperPoint(ch, std::move(c));
}

}  // namespace

TEST_CASE("left odd derivatives with the transposition sign") {
  auto alg = alg6();
  auto ch = make_chart("flat22", 2, 2);
  G th1v = G::generator(alg, 0), th2v = G::generator(alg, 1);
  SuperPoint p(ch, {G::scalar(alg, 1.0), G::scalar(alg, 2.0), th1v, th2v});

  auto f = [&](const SuperPoint& q) { return q.coord(2) * q.coord(3); };
  CHECK(max_coeff_diff(partial_odd(f, p, 2), p.coord(3)) == 0.0);
  CHECK(max_coeff_diff(partial_odd(f, p, 3), -p.coord(2)) == 0.0);
}

TEST_CASE("abstract-chart mode: d/dTheta of Theta Thetabar is Thetabar") {
  auto alg = Algebra::make(4, 2, Field::Complex, ConjStyle::Swap);
  auto ch = make_chart("abstract11", 1, 2, {"Z", "Th", "ThBar"});
  G Th = G::generator(alg, 0), ThBar = G::generator(alg, 1);
  SuperPoint p(ch, {G::scalar(alg, 1.0), Th, ThBar});
  auto f = [](const SuperPoint& q) { return q.coord(1) * q.coord(2); };
  CHECK(max_coeff_diff(partial_odd(f, p, 1), ThBar) == 0.0);
}

TEST_CASE("even derivatives are exact") {
  auto alg = alg6();
  auto ch = make_chart("flat11", 1, 1);
  SuperPoint p(ch, {G::scalar(alg, 3.0), G(alg)});

  auto sq = [](const SuperPoint& q) { return q.coord(0) * q.coord(0); };
  CHECK(max_coeff_diff(partial_even(sq, p, 0), G::scalar(alg, 6.0)) == 0.0);

  SuperPoint p2(ch, {G::scalar(alg, 2.0), G(alg)});
  auto inv = [](const SuperPoint& q) { return invert(q.coord(0)); };
  CHECK(max_coeff_diff(partial2(inv, p2, 0, 0), G::scalar(alg, 0.25)) < 1e-15);
}

TEST_CASE("derivative of the hyperbolic metric component against FD oracle") {
  auto alg = alg6();
  auto ch = make_chart("h32", 3, 2, {"x", "y", "t", "th1", "th2"});
  Rng rng(7);
  G th1 = G::generator(alg, 0), th2 = G::generator(alg, 1);
  SuperPoint p(ch, {rand_even(rng, alg, -1, 1), rand_even(rng, alg, -1, 1),
                    G::scalar(alg, 1.7), th1, th2});

  auto g11 = [](const SuperPoint& q) {
    const G& t = q.coord(2);
    G t2i = invert(t * t);
    return t2i + q.coord(3) * q.coord(4) * invert(t * t * t) * 2.0;
  };
  double t = 1.7;
  G want = G::scalar(alg, -2.0 / (t * t * t)) +
           th1 * th2 * (-6.0 / (t * t * t * t));
  G got = partial_even(g11, p, 2);
  CHECK(max_coeff_diff(got, want) < 1e-13);

  G fd = finite_difference_even(g11, p, 2, 1e-5);
  CHECK(max_coeff_diff(got, fd) < 1e-7 * std::max(1.0, fd.max_abs()));
}

TEST_CASE("graded Leibniz rule for odd derivatives") {
  auto alg = alg6();
  auto ch = make_chart("flat22", 2, 2);
  Rng rng(21);
  for (int k = 0; k < 50; ++k) {
    SuperPoint p = rand_point(rng, alg, ch);
    bool f_odd = rng.uniform() < 0.5;
    auto f = [f_odd](const SuperPoint& q) {
      return f_odd ? q.coord(2) * (q.coord(0) + q.coord(1))
                   : q.coord(0) + q.coord(2) * q.coord(3);
    };
    auto g = [](const SuperPoint& q) {
      return q.coord(3) + q.coord(2) * (q.coord(1) * q.coord(1));
    };
    auto fg = [&](const SuperPoint& q) { return f(q) * g(q); };
    for (int dir : {2, 3}) {
      G lhs = partial_odd(fg, p, dir);
      G rhs = partial_odd(f, p, dir) * g(p);
      G second = f(p) * partial_odd(g, p, dir);
      rhs += f_odd ? -second : second;
      REQUIRE(max_coeff_diff(lhs, rhs) < 1e-13);
    }
  }
}

TEST_CASE("even partials commute") {
  auto alg = alg6();
  auto ch = make_chart("flat22", 2, 2);
  Rng rng(33);
  auto f = [](const SuperPoint& q) {
    return exp(q.coord(0) * 0.3) * invert(q.coord(1)) +
           q.coord(2) * q.coord(3) * q.coord(0) * q.coord(1);
  };
  for (int k = 0; k < 20; ++k) {
    SuperPoint p = rand_point(rng, alg, ch, 0.7, 2.2);
    G a = partial2(f, p, 0, 1);
    G b = partial2(f, p, 1, 0);
    REQUIRE(max_coeff_diff(a, b) < 1e-12);
  }
}

TEST_CASE("D operator on the holomorphic 1|1 chart") {
  auto alg = Algebra::make(4, 4, Field::Complex, ConjStyle::Swap);
  auto ch = make_chart("c11", 1, 1, {"Z", "Th"});
  Rng rng(5);
  G Z = G::scalar(alg, cplx(0.4, 1.2)) + rand_even_soul(rng, alg, 0.2);
  G Th = rand_odd(rng, alg);
  SuperPoint p(ch, {Z, Th});

  auto fz = [](const SuperPoint& q) { return q.coord(0); };
  auto fth = [](const SuperPoint& q) { return q.coord(1); };
  CHECK(max_coeff_diff(d_operator(fz, p), Th) == 0.0);
  CHECK(max_coeff_diff(d_operator(fth, p), G::scalar(alg, 1.0)) == 0.0);

  // D^2 = d/dZ on monomials Z^k Theta^l
  for (int kk : {1, 2, 3}) {
    for (int ll : {0, 1}) {
      auto f = [kk, ll](const SuperPoint& q) {
        G v = G::scalar(q.algebra(), 1.0);
        for (int i = 0; i < kk; ++i) v = v * q.coord(0);
        if (ll) v = v * q.coord(1);
        return v;
      };
      auto df = [&](const SuperPoint& q) { return d_operator(f, q); };
      G dd = d_operator(df, p);
      G dz = partial_even(f, p, 0);
      REQUIRE(max_coeff_diff(dd, dz) < 1e-12);
    }
  }
}

TEST_CASE("pullback through the identity map is the identity") {
  auto alg = alg6();
  auto ch = make_chart("flat22", 2, 2);
  LineElement le;
  le.chart = ch;
  le.add(0, 0, [](const SuperPoint& q) { return invert(q.coord(0) * q.coord(0)); });
  le.add(1, 1, [](const SuperPoint& q) { return G::scalar(q.algebra(), 1.0); });
  le.add(2, 3, [](const SuperPoint& q) { return q.coord(0); });
  le.add(0, 2, [](const SuperPoint& q) { return q.coord(3) * 2.0; });

  Rng rng(9);
  SuperPoint p = rand_point(rng, alg, ch, 0.8, 1.9);
  auto direct = evaluate_line_element(le, p);
  auto pulled = pullback_form(identity_map(ch), le, p);
  CHECK(direct.max_diff(pulled) < 1e-13);
}

TEST_CASE("pullback is functorial") {
  auto alg = alg6();
  auto chA = make_chart("A", 2, 2), chB = make_chart("B", 2, 2),
       chC = make_chart("C", 2, 2);

  SuperMap psi;  // A -> B
  psi.source = chA;
  psi.target = chB;
  psi.name = "psi";
  psi.comps = {
      [](const SuperPoint& q) { return q.coord(0) + q.coord(1) * q.coord(1); },
      [](const SuperPoint& q) {
        return q.coord(1) + q.coord(2) * q.coord(3) * 0.5;
      },
      [](const SuperPoint& q) { return q.coord(2) * q.coord(0); },
      [](const SuperPoint& q) { return q.coord(3) + q.coord(2) * 0.3; }};

  SuperMap phi;  // B -> C
  phi.source = chB;
  phi.target = chC;
  phi.name = "phi";
  phi.comps = {
      [](const SuperPoint& q) { return q.coord(0) * q.coord(1); },
      [](const SuperPoint& q) {
        return q.coord(1) + q.coord(2) * q.coord(3) * 0.7;
      },
      [](const SuperPoint& q) { return q.coord(3) * q.coord(1); },
      [](const SuperPoint& q) { return q.coord(2) - q.coord(3) * 0.4; }};

  LineElement g;  // metric on C
  g.chart = chC;
  g.add(0, 0, [](const SuperPoint& q) { return invert(q.coord(1)); });
  g.add(0, 1, [](const SuperPoint& q) { return q.coord(0) * 0.2; });
  g.add(2, 3, [](const SuperPoint& q) { return q.coord(0); });
  g.add(1, 2, [](const SuperPoint& q) { return q.coord(3) * 1.3; });

  auto phig_comp = [phi, g](const SuperPoint& q) {
    return pullback_form(phi, g, q).components(q.algebra());
  };
  LineElement phig = line_from_components(chB, phig_comp);

  Rng rng(55);
  for (int k = 0; k < 10; ++k) {
    SuperPoint p = rand_point(rng, alg, chA, 0.8, 1.7);
    auto lhs = pullback_form(compose(phi, psi), g, p);
    auto rhs = pullback_form(psi, phig, p);
    REQUIRE(lhs.max_diff(rhs) < 1e-10);

    auto v = rand_tangent(rng, alg, chA);
    REQUIRE(max_coeff_diff(lhs.evaluate(v), rhs.evaluate(v)) < 1e-10);
  }
}

TEST_CASE("component extraction round-trips through line_from_components") {
  auto alg = alg6();
  auto ch = make_chart("flat22", 2, 2);
  LineElement le;
  le.chart = ch;
  le.add(0, 0, [](const SuperPoint& q) { return invert(q.coord(0)); });
  le.add(0, 1, [](const SuperPoint& q) { return q.coord(1) * 0.5; });
  le.add(2, 3, [](const SuperPoint& q) { return q.coord(0) * 4.0; });
  le.add(0, 2, [](const SuperPoint& q) { return q.coord(3); });
  le.add(1, 3, [](const SuperPoint& q) { return q.coord(2) * -2.0; });

  auto comp = [le](const SuperPoint& q) {
    return evaluate_line_element(le, q).components(q.algebra());
  };
  LineElement le2 = line_from_components(ch, comp);

  Rng rng(77);
  for (int k = 0; k < 10; ++k) {
    SuperPoint p = rand_point(rng, alg, ch, 0.6, 1.9);
    auto q1 = evaluate_line_element(le, p);
    auto q2 = evaluate_line_element(le2, p);
    auto v = rand_tangent(rng, alg, ch);
    REQUIRE(max_coeff_diff(q1.evaluate(v), q2.evaluate(v)) < 1e-12);
    SuperMatrix m1 = q1.components(alg), m2 = q2.components(alg);
    REQUIRE((m1 - m2).max_abs() < 1e-12);
  }
}

TEST_CASE("parity validation on points") {
  auto alg = alg6();
  auto ch = make_chart("flat11", 1, 1);
  SuperPoint bad(ch, {G::generator(alg, 0), G::scalar(alg, 1.0)});
  CHECK_THROWS_AS(bad.check_parities(), ParityError);
}
