#pragma once

// Superfields over charts with exact derivatives in even and odd directions.
//
// Odd derivatives are left derivatives implemented by perturbing the
// coordinate with a fresh auxiliary generator and extracting its left
// coefficient. Even derivatives perturb with a nilpotent even element
// eps = eta_a eta_b built from two fresh auxiliary generators, which makes
// first- and second-order Taylor expansions terminate exactly.
//
// Quadratic line elements are handled by a small formal algebra of dX
// symbols that graded-commute by coordinate parity; this is what metric
// component extraction and pullbacks are built on.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "supergeo/grassmann.hpp"
#include "supergeo/supermatrix.hpp"

namespace supergeo {

struct SuperPoint;

struct Chart {
  std::string id;
  int n_even = 0;
  int n_odd = 0;
  std::vector<std::string> names;  // even coordinates first, then odd
  // returns an empty string when the point satisfies the chart's body
  // constraints, otherwise a description of the violation
  std::function<std::string(const SuperPoint&)> constraint;

  int n() const { return n_even + n_odd; }
  bool odd_index(int a) const { return a >= n_even; }
  int parity(int a) const { return odd_index(a) ? 1 : 0; }
};
using ChartPtr = std::shared_ptr<const Chart>;

inline ChartPtr make_chart(std::string id, int n_even, int n_odd,
                           std::vector<std::string> names = {},
                           std::function<std::string(const SuperPoint&)> c = {}) {
  auto ch = std::make_shared<Chart>();
  ch->id = std::move(id);
  ch->n_even = n_even;
  ch->n_odd = n_odd;
  if (names.empty()) {
    for (int i = 0; i < n_even; ++i) names.push_back("x" + std::to_string(i));
    for (int i = 0; i < n_odd; ++i) names.push_back("th" + std::to_string(i + 1));
  }
  ch->names = std::move(names);
  ch->constraint = std::move(c);
  return ch;
}

struct SuperPoint {
  ChartPtr chart;
  std::vector<G> coords;  // chart->n() entries, even slots first

  SuperPoint() = default;
  SuperPoint(ChartPtr ch, std::vector<G> c)
      : chart(std::move(ch)), coords(std::move(c)) {}

  const G& coord(int a) const { return coords[a]; }
  const AlgebraPtr& algebra() const { return coords.at(0).algebra(); }

  SuperPoint with_coord(int a, G v) const {
    SuperPoint p = *this;
    p.coords[a] = std::move(v);
    return p;
  }

  // Parity of each slot must match the chart (zero passes anywhere).
  void check_parities() const {
    for (int a = 0; a < chart->n(); ++a) {
      if (coords[a].is_zero()) continue;
      Parity want = chart->odd_index(a) ? Parity::Odd : Parity::Even;
      if (coords[a].parity() != want)
        throw ParityError("coordinate " + chart->names[a] +
                          " has wrong parity on chart " + chart->id);
    }
  }
  std::string constraint_violation() const {
    if (chart->constraint) return chart->constraint(*this);
    return {};
  }
};

struct Superfield {
  ChartPtr chart;
  Parity declared = Parity::Even;
  std::function<G(const SuperPoint&)> eval;

  G operator()(const SuperPoint& p) const { return eval(p); }
};

struct SuperMap {
  ChartPtr source, target;
  std::string name;
  std::vector<std::function<G(const SuperPoint&)>> comps;  // one per target coord

  SuperPoint apply(const SuperPoint& p) const {
    std::vector<G> out;
    out.reserve(comps.size());
    for (auto& f : comps) out.push_back(f(p));
    return SuperPoint(target, std::move(out));
  }
  SuperPoint operator()(const SuperPoint& p) const { return apply(p); }
};

inline SuperMap compose(const SuperMap& outer, const SuperMap& inner) {
  SuperMap m;
  m.source = inner.source;
  m.target = outer.target;
  m.name = outer.name + "." + inner.name;
  for (auto& f : outer.comps) {
    auto in = inner;  // capture by value: maps are small
    m.comps.push_back([f, in](const SuperPoint& p) { return f(in.apply(p)); });
  }
  return m;
}

inline SuperMap identity_map(const ChartPtr& ch) {
  SuperMap m;
  m.source = m.target = ch;
  m.name = "id";
  for (int a = 0; a < ch->n(); ++a)
    m.comps.push_back([a](const SuperPoint& p) { return p.coord(a); });
  return m;
}

// ---------------------------------------------------------------------------
// Derivatives
// ---------------------------------------------------------------------------

// Left derivative with respect to the odd coordinate with chart index `a`.
template <class F>
G partial_odd(const F& f, const SuperPoint& p, int a) {
  if (!p.chart->odd_index(a))
    throw ConfigError("partial_odd: index names an even coordinate");
  AuxScope s(p.algebra(), 1);
  G eta = G::generator(p.algebra(), s.gen(0));
  G v = f(p.with_coord(a, p.coord(a) + eta));
  return extract_factor(v, 1u << s.gen(0));
}

// Exact derivative with respect to the even coordinate with chart index `a`.
template <class F>
G partial_even(const F& f, const SuperPoint& p, int a) {
  if (p.chart->odd_index(a))
    throw ConfigError("partial_even: index names an odd coordinate");
  AuxScope s(p.algebra(), 2);
  G eps = G::generator(p.algebra(), s.gen(0)) * G::generator(p.algebra(), s.gen(1));
  G v = f(p.with_coord(a, p.coord(a) + eps));
  return extract_factor(v, (1u << s.gen(0)) | (1u << s.gen(1)));
}

template <class F>
G partial_any(const F& f, const SuperPoint& p, int a) {
  return p.chart->odd_index(a) ? partial_odd(f, p, a) : partial_even(f, p, a);
}

// Second derivative d_a d_b f (outer a, inner b), both directions perturbed
// simultaneously with disjoint auxiliary blocks.
template <class F>
G partial2(const F& f, const SuperPoint& p, int a, int b) {
  const AlgebraPtr& alg = p.algebra();
  bool oa = p.chart->odd_index(a), ob = p.chart->odd_index(b);
  AuxScope s(alg, (oa ? 1 : 2) + (ob ? 1 : 2));
  int na = oa ? 1 : 2;
  uint32_t mask_a, mask_b;
  G pert_a(alg), pert_b(alg);
  if (oa) {
    mask_a = 1u << s.gen(0);
    pert_a = G::generator(alg, s.gen(0));
  } else {
    mask_a = (1u << s.gen(0)) | (1u << s.gen(1));
    pert_a = G::generator(alg, s.gen(0)) * G::generator(alg, s.gen(1));
  }
  if (ob) {
    mask_b = 1u << s.gen(na);
    pert_b = G::generator(alg, s.gen(na));
  } else {
    mask_b = (1u << s.gen(na)) | (1u << s.gen(na + 1));
    pert_b = G::generator(alg, s.gen(na)) * G::generator(alg, s.gen(na + 1));
  }
  SuperPoint q = p;
  q.coords[a] = q.coords[a] + pert_a;
  q.coords[b] = q.coords[b] + pert_b;
  G v = f(q);
  return extract_factor(extract_factor(v, mask_b), mask_a);
}

// Central finite differences on every Grassmann coefficient; test oracle for
// the exact even derivatives.
template <class F>
G finite_difference_even(const F& f, const SuperPoint& p, int a, double h) {
  G up = f(p.with_coord(a, p.coord(a) + G::scalar(p.algebra(), h)));
  G dn = f(p.with_coord(a, p.coord(a) - G::scalar(p.algebra(), h)));
  return (up - dn) * (0.5 / h);
}

// D = d/dTheta + Theta d/dZ on a (1|1) holomorphic chart.
template <class F>
G d_operator(const F& f, const SuperPoint& p) {
  if (p.chart->n_even != 1 || p.chart->n_odd != 1)
    throw ConfigError("d_operator: chart must have one even and one odd coordinate");
  return partial_odd(f, p, 1) + p.coord(1) * partial_even(f, p, 0);
}

// ---------------------------------------------------------------------------
// Quadratic line elements (formal dX algebra of degree two)
// ---------------------------------------------------------------------------

struct FormTerm {
  std::function<G(const SuperPoint&)> coeff;  // written to the LEFT of symbols
  int i = 0, j = 0;                           // dX_i dX_j in this order
};

struct LineElement {
  ChartPtr chart;
  std::vector<FormTerm> terms;

  LineElement& add(int i, int j, std::function<G(const SuperPoint&)> c) {
    terms.push_back({std::move(c), i, j});
    return *this;
  }
};

// Coefficients kappa_{CD} (C <= D, symbols in canonical order, coefficient on
// the left) of a quadratic form at one point.
struct QuadFormValue {
  ChartPtr chart;
  std::vector<G> k;  // dense n*n, only C <= D populated

  QuadFormValue(ChartPtr ch, const AlgebraPtr& alg)
      : chart(std::move(ch)), k(size_t(chart->n()) * chart->n(), G(alg)) {}

  G& kappa(int c, int d) { return k[size_t(c) * chart->n() + d]; }
  const G& kappa(int c, int d) const { return k[size_t(c) * chart->n() + d]; }

  // Accumulate c * dX_i dX_j (arbitrary order i, j).
  void accumulate(int i, int j, const G& c) {
    if (i == j && chart->parity(i)) return;  // dtheta dtheta = 0
    if (i <= j) {
      kappa(i, j) += c;
    } else {
      // dX_i dX_j = (-1)^{|i||j|} dX_j dX_i
      bool flip = chart->parity(i) && chart->parity(j);
      kappa(j, i) += flip ? -c : c;
    }
  }

  // Q(v) with dX_A -> v_A substituted in place.
  G evaluate(const std::vector<G>& v) const {
    G acc(v.at(0).algebra());
    int n = chart->n();
    for (int c = 0; c < n; ++c)
      for (int d = c; d < n; ++d) {
        const G& kk = kappa(c, d);
        if (kk.is_zero()) continue;
        acc += kk * v[c] * v[d];
      }
    return acc;
  }

  double max_diff(const QuadFormValue& o) const {
    double m = 0;
    for (size_t i = 0; i < k.size(); ++i)
      m = std::max(m, (k[i] - o.k[i]).max_abs());
    return m;
  }

  // Component matrix in the convention of the displayed component arrays:
  // g_{AB} = 1/2 (-1)^{|B|} kappa_{AB} for A < B, g_{AA} = kappa_{AA}, and
  // g_{BA} = (-1)^{|A||B|} g_{AB} (graded symmetric).
  SuperMatrix components(const AlgebraPtr& alg) const {
    int n = chart->n();
    SuperMatrix m(alg, chart->n_even, chart->n_odd);
    for (int a = 0; a < n; ++a) {
      m.raw(a, a) = kappa(a, a);
      for (int b = a + 1; b < n; ++b) {
        G g = kappa(a, b) * 0.5;
        if (chart->parity(b)) g = -g;
        m.raw(a, b) = g;
        m.raw(b, a) = (chart->parity(a) && chart->parity(b)) ? -g : g;
      }
    }
    return m;
  }
};

inline QuadFormValue evaluate_line_element(const LineElement& le,
                                           const SuperPoint& p) {
  QuadFormValue q(le.chart, p.algebra());
  for (auto& t : le.terms) q.accumulate(t.i, t.j, t.coeff(p));
  return q;
}

// Rebuilds a line element from a component-matrix function, inverting the
// extraction rule above.
inline LineElement line_from_components(
    const ChartPtr& chart,
    std::function<SuperMatrix(const SuperPoint&)> comps) {
  LineElement le;
  le.chart = chart;
  auto shared = std::make_shared<std::function<SuperMatrix(const SuperPoint&)>>(
      std::move(comps));
  for (int a = 0; a < chart->n(); ++a) {
    le.add(a, a, [shared, a](const SuperPoint& p) { return (*shared)(p).at(a, a); });
    for (int b = a + 1; b < chart->n(); ++b) {
      bool flip = chart->parity(b);
      le.add(a, b, [shared, a, b, flip](const SuperPoint& p) {
        G v = (*shared)(p).at(a, b) * 2.0;
        return flip ? -v : v;
      });
    }
  }
  return le;
}

// ---------------------------------------------------------------------------
// Pullback
// ---------------------------------------------------------------------------

// Graded Jacobian J_{C,B} = d_C phi_B at p (left derivatives).
inline std::vector<std::vector<G>> jacobian(const SuperMap& phi,
                                            const SuperPoint& p) {
  int ns = phi.source->n(), nt = phi.target->n();
  std::vector<std::vector<G>> j(ns, std::vector<G>(nt, G(p.algebra())));
  for (int b = 0; b < nt; ++b)
    for (int c = 0; c < ns; ++c) j[c][b] = partial_any(phi.comps[b], p, c);
  return j;
}

// phi^* (line element of g) evaluated at p, as a quadratic form on the
// source chart: substitutes dX'_B = sum_C dX_C J_{CB} and normal-orders all
// Grassmann coefficients past the symbols.
inline QuadFormValue pullback_form(const SuperMap& phi, const LineElement& le,
                                   const SuperPoint& p) {
  SuperPoint q = phi.apply(p);
  auto j = jacobian(phi, p);
  int ns = phi.source->n();
  QuadFormValue out(phi.source, p.algebra());
  for (auto& t : le.terms) {
    G kap = t.coeff(q);
    if (kap.is_zero()) continue;
    int pi = phi.target->parity(t.i), pj = phi.target->parity(t.j);
    for (int c = 0; c < ns; ++c) {
      if (j[c][t.i].is_zero()) continue;
      int pJci = (phi.source->parity(c) + pi) & 1;
      for (int d = 0; d < ns; ++d) {
        if (j[d][t.j].is_zero()) continue;
        int pJdj = (phi.source->parity(d) + pj) & 1;
        // kappa dX_C J_{Ci} dX_D J_{Dj}
        //   -> move J_{Ci} past dX_D, then both J's past dX_C dX_D
        int sgn = 0;
        sgn ^= pJci & phi.source->parity(d);
        sgn ^= ((pJci + pJdj) & 1) & ((phi.source->parity(c) + phi.source->parity(d)) & 1);
        G coeff = kap * j[c][t.i] * j[d][t.j];
        out.accumulate(c, d, sgn ? -coeff : coeff);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Random tangent vectors and form comparison helpers
// ---------------------------------------------------------------------------

inline G quad_apply(const QuadFormValue& q, const std::vector<G>& v) {
  return q.evaluate(v);
}

}  // namespace supergeo
