#pragma once

// Reference curvature data for the Bosonic variant of the hyperbolic 3|2
// superspace metric: the nonzero Christoffel symbols, the Ricci table and the
// scalar curvature as closed-form functions of (t, th1, th2). These are the
// fixtures the curvature pipeline is calibrated against.

#include "supergeo/geometry.hpp"
#include "supergeo/grassmann.hpp"

namespace supergeo {

// Coordinates indexed (x, y, t, th1, th2) = (0, 1, 2, 3, 4).
inline ChristoffelTable h32_reference_christoffel(const SuperPoint& p) {
  const AlgebraPtr& alg = p.algebra();
  const G& t = p.coord(2);
  const G& h1 = p.coord(3);
  const G& h2 = p.coord(4);
  G ti = invert(t);
  G t2i = ti * ti;
  G s = h1 * h2;  // th1 th2

  ChristoffelTable tab;
  tab.n = 5;
  tab.v.assign(125, G(alg));
  auto set_sym = [&](int c, int a, int b, const G& v) {
    tab.at(c, a, b) = v;
    bool both_odd = a >= 3 && b >= 3;
    if (a != b) tab.at(c, b, a) = both_odd ? -v : v;
  };

  G m1t_p = ti * -1.0 + s * t2i;   // -1/t + th1 th2/t^2
  G m1t_m = ti * -1.0 - s * t2i;   // -1/t - th1 th2/t^2
  G half_p = ti * 0.5 + s * t2i * 0.5;
  G half_m = ti * 0.5 - s * t2i * 0.5;

  set_sym(2, 0, 0, m1t_p);
  set_sym(3, 0, 0, h1 * t2i);
  set_sym(4, 0, 0, h2 * t2i);
  set_sym(0, 0, 2, m1t_p);
  set_sym(0, 0, 3, h2 * ti * 1.5);
  set_sym(2, 0, 3, h1 * ti * 0.5);
  set_sym(4, 0, 3, -half_p);
  set_sym(0, 0, 4, h1 * ti * -1.5);
  set_sym(2, 0, 4, h2 * ti * 0.5);
  set_sym(3, 0, 4, half_p);
  set_sym(2, 1, 1, m1t_p);
  set_sym(3, 1, 1, h1 * t2i);
  set_sym(4, 1, 1, h2 * t2i);
  set_sym(1, 1, 2, m1t_m);
  set_sym(1, 1, 3, h2 * ti);
  set_sym(1, 1, 4, h1 * ti * -1.0);
  set_sym(2, 2, 2, m1t_p);
  set_sym(3, 2, 2, h1 * t2i);
  set_sym(4, 2, 2, h2 * t2i * -1.0);
  set_sym(0, 2, 3, h1 * ti * -1.5);
  set_sym(2, 2, 3, h2 * ti * 0.5);
  set_sym(3, 2, 3, half_m);
  set_sym(0, 2, 4, h2 * ti * -0.5);
  set_sym(2, 2, 4, h1 * ti * -0.5);
  set_sym(4, 2, 4, half_p);
  set_sym(2, 3, 4, G::scalar(alg, 2.0) - s * ti * 6.0);
  set_sym(3, 3, 4, h1 * ti);
  set_sym(4, 3, 4, h2 * ti);
  return tab;
}

inline SuperMatrix h32_reference_ricci(const SuperPoint& p) {
  const AlgebraPtr& alg = p.algebra();
  const G& t = p.coord(2);
  const G& h1 = p.coord(3);
  const G& h2 = p.coord(4);
  G ti = invert(t);
  G t2i = ti * ti;
  G t3i = t2i * ti;
  G s = h1 * h2;

  SuperMatrix r(alg, 3, 2);
  auto set_sym = [&](int a, int b, const G& v) {
    r.raw(a, b) = v;
    bool both_odd = a >= 3 && b >= 3;
    if (a != b) r.raw(b, a) = both_odd ? -v : v;
  };
  set_sym(0, 0, t2i * -5.5 - s * t3i * 13.0);
  set_sym(0, 2, s * t3i * 0.5);
  set_sym(0, 3, h1 * t2i * 1.5);
  set_sym(0, 4, h2 * t2i * 1.5);
  set_sym(1, 1, t2i * -5.0 - s * t3i * 8.0);
  set_sym(2, 2, t2i * -3.5 - s * t3i * 17.0);
  set_sym(2, 3, h2 * t2i * 0.5);
  set_sym(2, 4, h1 * t2i * -0.5);
  set_sym(3, 4, ti * -16.0 + s * t2i * 25.0);
  return r;
}

inline G h32_reference_scalar(const SuperPoint& p) {
  const G& t = p.coord(2);
  return G::scalar(p.algebra(), 2.0) - p.coord(3) * p.coord(4) * invert(t) * 27.0;
}

// Reference volume densities.
inline G h32_reference_volume(const SuperPoint& p) {
  const G& t = p.coord(2);
  G t2i = invert(t * t);
  return (t2i + p.coord(3) * p.coord(4) * invert(t * t * t) * 3.0) * 0.5;
}

inline G ch11_reference_volume(const SuperPoint& p) {
  const G& x0 = p.coord(0);
  return (invert(x0) + p.coord(2) * p.coord(3) * invert(x0 * x0)) * 0.5;
}

inline G group_reference_volume(const SuperPoint& p) {
  return (G::scalar(p.algebra(), 1.0) + p.coord(3) * p.coord(4) * 3.0) *
         sinh(p.coord(1) * 2.0) * 2.0;
}

}  // namespace supergeo
