#pragma once

// Block supermatrices over a Grassmann algebra: supertranspose, Berezinian,
// orthosymplectic membership, the hyperboloid coset lift and the osp(1|2,R)
// structure constants with the super-Killing form.

#include <array>
#include <cstdlib>
#include <vector>

#include "supergeo/grassmann.hpp"

namespace supergeo {

// (p|q) block matrix: indices < p are even rows/columns, the rest odd.
// Entries in the diagonal blocks must be even, off-diagonal blocks odd.
class SuperMatrix {
 public:
  SuperMatrix() = default;
  SuperMatrix(AlgebraPtr alg, int p, int q)
      : alg_(std::move(alg)), p_(p), q_(q), e_(size_t(p + q) * (p + q), G(alg_)) {}

  static SuperMatrix identity(const AlgebraPtr& alg, int p, int q) {
    SuperMatrix m(alg, p, q);
    for (int i = 0; i < p + q; ++i) m.raw(i, i) = G::scalar(alg, 1.0);
    return m;
  }

  int p() const { return p_; }
  int q() const { return q_; }
  int n() const { return p_ + q_; }
  const AlgebraPtr& algebra() const { return alg_; }
  bool index_odd(int i) const { return i >= p_; }

  const G& at(int i, int j) const { return e_[size_t(i) * n() + j]; }
  G& raw(int i, int j) { return e_[size_t(i) * n() + j]; }

  // Parity-checked assignment.
  void set(int i, int j, const G& v) {
    bool odd_slot = index_odd(i) != index_odd(j);
    Parity pv = v.parity();
    if (!v.is_zero() && pv != (odd_slot ? Parity::Odd : Parity::Even))
      throw ParityError("supermatrix entry parity does not match its block");
    raw(i, j) = v;
  }

  void check_block_parity() const {
    for (int i = 0; i < n(); ++i)
      for (int j = 0; j < n(); ++j) {
        const G& v = at(i, j);
        if (v.is_zero()) continue;
        bool odd_slot = index_odd(i) != index_odd(j);
        if (v.parity() != (odd_slot ? Parity::Odd : Parity::Even))
          throw ParityError("supermatrix block parity violated");
      }
  }

  friend SuperMatrix operator+(const SuperMatrix& a, const SuperMatrix& b) {
    SuperMatrix r(a.alg_, a.p_, a.q_);
    for (size_t k = 0; k < a.e_.size(); ++k) r.e_[k] = a.e_[k] + b.e_[k];
    return r;
  }
  friend SuperMatrix operator-(const SuperMatrix& a, const SuperMatrix& b) {
    SuperMatrix r(a.alg_, a.p_, a.q_);
    for (size_t k = 0; k < a.e_.size(); ++k) r.e_[k] = a.e_[k] - b.e_[k];
    return r;
  }
  friend SuperMatrix operator*(const SuperMatrix& a, const SuperMatrix& b) {
    SuperMatrix r(a.alg_, a.p_, a.q_);
    for (int i = 0; i < a.n(); ++i)
      for (int j = 0; j < b.n(); ++j) {
        G acc(a.alg_);
        for (int k = 0; k < a.n(); ++k) acc += a.at(i, k) * b.at(k, j);
        r.raw(i, j) = acc;
      }
    return r;
  }
  friend SuperMatrix operator*(const SuperMatrix& a, const G& s) {
    SuperMatrix r(a.alg_, a.p_, a.q_);
    for (size_t k = 0; k < a.e_.size(); ++k) r.e_[k] = a.e_[k] * s;
    return r;
  }
  friend SuperMatrix operator*(const SuperMatrix& a, cplx s) {
    SuperMatrix r(a.alg_, a.p_, a.q_);
    for (size_t k = 0; k < a.e_.size(); ++k) r.e_[k] = a.e_[k] * s;
    return r;
  }

  std::vector<G> apply(const std::vector<G>& v) const {
    std::vector<G> out(n(), G(alg_));
    for (int i = 0; i < n(); ++i) {
      G acc(alg_);
      for (int k = 0; k < n(); ++k) acc += at(i, k) * v[k];
      out[i] = acc;
    }
    return out;
  }

  double max_abs() const {
    double m = 0;
    for (auto& v : e_) m = std::max(m, v.max_abs());
    return m;
  }

 private:
  AlgebraPtr alg_;
  int p_ = 0, q_ = 0;
  std::vector<G> e_;
};

// Blocks (A, B // C, D) -> (A^t, C^t // -B^t, D^t).
inline SuperMatrix supertranspose(const SuperMatrix& x) {
  SuperMatrix r(x.algebra(), x.p(), x.q());
  for (int i = 0; i < x.n(); ++i)
    for (int j = 0; j < x.n(); ++j) {
      G v = x.at(j, i);
      if (x.index_odd(i) && !x.index_odd(j)) v = -v;  // -B^t block
      r.raw(i, j) = v;
    }
  return r;
}

// str(X) = tr(A) - tr(D).
inline G supertrace(const SuperMatrix& x) {
  G acc(x.algebra());
  for (int i = 0; i < x.n(); ++i)
    acc += x.index_odd(i) ? -x.at(i, i) : x.at(i, i);
  return acc;
}

// Inverse by Gauss elimination with pivoting on body magnitude. Works over
// the (noncommutative) Grassmann ring because rows are only ever rescaled and
// combined by left multiplication.
inline SuperMatrix gauss_inverse(const SuperMatrix& m) {
  int n = m.n();
  SuperMatrix a = m;
  SuperMatrix inv = SuperMatrix::identity(m.algebra(), m.p(), m.q());
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    double best = 0;
    for (int r = col; r < n; ++r) {
      double b = std::abs(a.at(r, col).body());
      if (b > best) best = b, piv = r;
    }
    if (piv < 0) throw SingularError("gauss_inverse: singular body matrix");
    if (piv != col)
      for (int c = 0; c < n; ++c) {
        std::swap(a.raw(piv, c), a.raw(col, c));
        std::swap(inv.raw(piv, c), inv.raw(col, c));
      }
    G pinv = invert(a.at(col, col).is_even()
                        ? a.at(col, col)
                        : throw SingularError("gauss_inverse: odd pivot"));
    for (int c = 0; c < n; ++c) {
      a.raw(col, c) = pinv * a.at(col, c);
      inv.raw(col, c) = pinv * inv.at(col, c);
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      G f = a.at(r, col);
      if (f.is_zero()) continue;
      for (int c = 0; c < n; ++c) {
        a.raw(r, c) -= f * a.at(col, c);
        inv.raw(r, c) -= f * inv.at(col, c);
      }
    }
  }
  return inv;
}

namespace detail {

// Determinant of a square array of commuting (even) entries.
inline G even_det(std::vector<std::vector<G>> a, const AlgebraPtr& alg) {
  int n = (int)a.size();
  G det = G::scalar(alg, 1.0);
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    double best = 0;
    for (int r = col; r < n; ++r) {
      double b = std::abs(a[r][col].body());
      if (b > best) best = b, piv = r;
    }
    if (piv < 0) {
      // body-singular: determinant may still be a pure soul; fall back to
      // cofactor expansion which needs no division
      std::function<G(const std::vector<std::vector<G>>&)> cof =
          [&](const std::vector<std::vector<G>>& mm) -> G {
        int k = (int)mm.size();
        if (k == 1) return mm[0][0];
        G acc(alg);
        for (int j = 0; j < k; ++j) {
          std::vector<std::vector<G>> sub;
          for (int r = 1; r < k; ++r) {
            std::vector<G> row;
            for (int c = 0; c < k; ++c)
              if (c != j) row.push_back(mm[r][c]);
            sub.push_back(std::move(row));
          }
          G term = mm[0][j] * cof(sub);
          acc += (j % 2) ? -term : term;
        }
        return acc;
      };
      std::vector<std::vector<G>> rest;
      for (int r = 0; r < n; ++r) rest.push_back(a[r]);
      G tail = cof(rest);
      return det * tail;
    }
    if (piv != col) {
      std::swap(a[piv], a[col]);
      det = -det;
    }
    det = det * a[col][col];
    G pinv = invert(a[col][col]);
    for (int r = col + 1; r < n; ++r) {
      G f = a[r][col] * pinv;
      if (f.is_zero()) continue;
      for (int c = col; c < n; ++c) a[r][c] -= f * a[col][c];
    }
  }
  return det;
}

}  // namespace detail

// Ber(X) = det(A - B D^{-1} C) / det(D). Requires det(D) with nonzero body.
inline G berezinian(const SuperMatrix& x) {
  const auto& alg = x.algebra();
  int p = x.p(), q = x.q();
  // D block and its inverse
  SuperMatrix d(alg, 0, q);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) d.raw(i, j) = x.at(p + i, p + j);
  std::vector<std::vector<G>> dmat(q, std::vector<G>(q, G(alg)));
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) dmat[i][j] = d.at(i, j);
  G detD = detail::even_det(dmat, alg);
  if (detD.body() == 0.0)
    throw SingularError("berezinian: D block has body-singular determinant");
  SuperMatrix dinv = gauss_inverse(d);
  // Schur complement A - B D^{-1} C
  std::vector<std::vector<G>> s(p, std::vector<G>(p, G(alg)));
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) {
      G acc = x.at(i, j);
      for (int k = 0; k < q; ++k)
        for (int l = 0; l < q; ++l)
          acc -= x.at(i, p + k) * dinv.at(k, l) * x.at(p + l, j);
      s[i][j] = acc;
    }
  G detS = p ? detail::even_det(s, alg) : G::scalar(alg, 1.0);
  return detS * invert(detD);
}

struct OrthosymplecticCheck {
  bool ok = false;
  double residual = 0;
};

// Residual of X^{st} g X - g.
inline OrthosymplecticCheck is_orthosymplectic(const SuperMatrix& x,
                                               const SuperMatrix& g,
                                               double tol = 1e-12) {
  SuperMatrix r = supertranspose(x) * g * x - g;
  OrthosymplecticCheck c;
  c.residual = r.max_abs();
  c.ok = c.residual < tol;
  return c;
}

// g = diag(eta_{1,p}, J_q) with eta = diag(-1, Id_p), J_q built from
// antisymmetric 2x2 blocks scaled by 1/2.
inline SuperMatrix osp_form(const AlgebraPtr& alg, int p, int pairs = 1) {
  SuperMatrix g(alg, p + 1, 2 * pairs);
  g.raw(0, 0) = G::scalar(alg, -1.0);
  for (int i = 1; i <= p; ++i) g.raw(i, i) = G::scalar(alg, 1.0);
  for (int k = 0; k < pairs; ++k) {
    int a = p + 1 + 2 * k;
    g.raw(a, a + 1) = G::scalar(alg, 0.5);
    g.raw(a + 1, a) = G::scalar(alg, -0.5);
  }
  return g;
}

// Lifts a supervector H = (x0, xvec; theta1, theta2) with H^t g H = -1 and
// body(x0) > 0 to the group element carrying H0 = (1,0,...,0) to H.
inline SuperMatrix coset_lift(const std::vector<G>& h, int p) {
  if ((int)h.size() != p + 3)
    throw ConfigError("coset_lift: expected p+1 even and 2 odd components");
  const auto& alg = h[0].algebra();
  const G& x0 = h[0];
  if (x0.body().real() <= 0.0 || x0.body().imag() != 0.0)
    throw DomainError("coset_lift: body of x0 must be positive real");
  // hyperboloid membership
  G constraint = -x0 * x0;
  for (int i = 1; i <= p; ++i) constraint += h[i] * h[i];
  constraint += h[p + 1] * h[p + 2];  // theta^t J_1 theta = theta1 theta2
  constraint += G::scalar(alg, 1.0);
  if (constraint.max_abs() > 1e-9)
    throw DomainError("coset_lift: point not on the hyperboloid");

  const G& th1 = h[p + 1];
  const G& th2 = h[p + 2];
  G one = G::scalar(alg, 1.0);
  G inv1px0 = invert(one + x0);

  SuperMatrix x(alg, p + 1, 2);
  // A block
  x.raw(0, 0) = x0;
  for (int i = 1; i <= p; ++i) {
    x.raw(0, i) = h[i];
    x.raw(i, 0) = h[i];
    for (int j = 1; j <= p; ++j) {
      G v = h[i] * h[j] * inv1px0;
      if (i == j) v += one;
      x.raw(i, j) = v;
    }
  }
  // B block (factor 1/2)
  x.raw(0, p + 1) = th1 * 0.5;
  x.raw(0, p + 2) = th2 * 0.5;
  for (int i = 1; i <= p; ++i) {
    x.raw(i, p + 1) = h[i] * inv1px0 * th1 * 0.5;
    x.raw(i, p + 2) = h[i] * inv1px0 * th2 * 0.5;
  }
  // C block
  x.raw(p + 1, 0) = th1;
  x.raw(p + 2, 0) = th2;
  for (int i = 1; i <= p; ++i) {
    x.raw(p + 1, i) = h[i] * inv1px0 * th1;
    x.raw(p + 2, i) = h[i] * inv1px0 * th2;
  }
  // D block; the soul coefficient 1/(2(1+x0)) is what makes X^{st} g X = g
  // hold exactly (a constant 1/2 leaves an O(theta1 theta2) residual)
  G dsoul = th1 * th2 * inv1px0 * 0.5;
  x.raw(p + 1, p + 2) = -one + dsoul;
  x.raw(p + 2, p + 1) = one - dsoul;
  return x;
}

// Matrix exponential by scaling-and-squaring Taylor series; the nilpotent
// part terminates on its own, the body part converges like exp. Used as an
// oracle against the closed-form subgroup exponentials.
inline SuperMatrix exp_taylor(const SuperMatrix& m) {
  double norm = 0;
  for (int i = 0; i < m.n(); ++i) {
    double row = 0;
    for (int j = 0; j < m.n(); ++j) row += std::abs(m.at(i, j).body());
    norm = std::max(norm, row);
  }
  int s = 0;
  while (norm > 0.5 && s < 40) norm /= 2, ++s;
  SuperMatrix x = m * cplx(std::ldexp(1.0, -s));
  SuperMatrix acc = SuperMatrix::identity(m.algebra(), m.p(), m.q());
  SuperMatrix term = acc;
  for (int k = 1; k <= 40; ++k) {
    term = term * x * cplx(1.0 / k);
    acc = acc + term;
    if (term.max_abs() < 1e-18) break;
  }
  for (int i = 0; i < s; ++i) acc = acc * acc;
  return acc;
}

// ---------------------------------------------------------------------------
// osp(1|2,R): explicit 3x3 generators, bracket tables and super-Killing form.
// ---------------------------------------------------------------------------

using Mat3 = std::array<std::array<double, 3>, 3>;

struct OspStructure {
  Mat3 L[3];
  Mat3 Q[2];
  // decomposition of [L_i, L_j] over {L_k}
  double bracket_LL[3][3][3];
  // decomposition of [L_i, Q_a] over {Q_b}
  double bracket_LQ[3][2][2];
  // decomposition of {Q_a, Q_b} over {L_k}
  double bracket_QQ[2][2][3];
  // super-Killing values and the defining-representation normalization
  double killing_LL[3][3];
  double killing_QQ[2][2];
  double killing_LQ[3][2];
  double normalization = 0.5;  // Str(X,Y) = k * str(XY) in the defining rep
  double decomposition_residual = 0;
};

namespace detail {

inline Mat3 mat3_mul(const Mat3& a, const Mat3& b) {
  Mat3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0;
      for (int k = 0; k < 3; ++k) s += a[i][k] * b[k][j];
      r[i][j] = s;
    }
  return r;
}
inline Mat3 mat3_sub(const Mat3& a, const Mat3& b) {
  Mat3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i][j] = a[i][j] - b[i][j];
  return r;
}
inline Mat3 mat3_add(const Mat3& a, const Mat3& b) {
  Mat3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i][j] = a[i][j] + b[i][j];
  return r;
}
inline double str3(const Mat3& m) { return m[0][0] + m[1][1] - m[2][2]; }

// Writes m = a L1 + b L2 + c L3 + x Q1 + y Q2, returning max residual.
inline double decompose_osp(const Mat3& m, double& a, double& b, double& c,
                            double& x, double& y) {
  a = (m[0][1] - m[1][0]) / 2;
  b = (m[0][1] + m[1][0]) / 2;
  c = m[0][0];
  x = (m[0][2] + m[1][2]) / 2;
  y = (m[0][2] - m[1][2]) / 2;
  Mat3 rec{};
  const Mat3 L1{{{0, 1, 0}, {-1, 0, 0}, {0, 0, 0}}};
  const Mat3 L2{{{0, 1, 0}, {1, 0, 0}, {0, 0, 0}}};
  const Mat3 L3{{{1, 0, 0}, {0, -1, 0}, {0, 0, 0}}};
  const Mat3 Q1{{{0, 0, 1}, {0, 0, 1}, {1, -1, 0}}};
  const Mat3 Q2{{{0, 0, 1}, {0, 0, -1}, {-1, -1, 0}}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      rec[i][j] = a * L1[i][j] + b * L2[i][j] + c * L3[i][j] + x * Q1[i][j] +
                  y * Q2[i][j];
  double res = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) res = std::max(res, std::abs(m[i][j] - rec[i][j]));
  return res;
}

}  // namespace detail

inline OspStructure osp_structure() {
  OspStructure s;
  s.L[0] = {{{0, 1, 0}, {-1, 0, 0}, {0, 0, 0}}};
  s.L[1] = {{{0, 1, 0}, {1, 0, 0}, {0, 0, 0}}};
  s.L[2] = {{{1, 0, 0}, {0, -1, 0}, {0, 0, 0}}};
  s.Q[0] = {{{0, 0, 1}, {0, 0, 1}, {1, -1, 0}}};
  s.Q[1] = {{{0, 0, 1}, {0, 0, -1}, {-1, -1, 0}}};

  using namespace detail;
  double res = 0, a, b, c, x, y;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Mat3 br = mat3_sub(mat3_mul(s.L[i], s.L[j]), mat3_mul(s.L[j], s.L[i]));
      res = std::max(res, decompose_osp(br, a, b, c, x, y));
      s.bracket_LL[i][j][0] = a;
      s.bracket_LL[i][j][1] = b;
      s.bracket_LL[i][j][2] = c;
      res = std::max(res, std::abs(x) + std::abs(y));
    }
  for (int i = 0; i < 3; ++i)
    for (int al = 0; al < 2; ++al) {
      Mat3 br = mat3_sub(mat3_mul(s.L[i], s.Q[al]), mat3_mul(s.Q[al], s.L[i]));
      res = std::max(res, decompose_osp(br, a, b, c, x, y));
      s.bracket_LQ[i][al][0] = x;
      s.bracket_LQ[i][al][1] = y;
      res = std::max(res, std::abs(a) + std::abs(b) + std::abs(c));
    }
  for (int al = 0; al < 2; ++al)
    for (int be = 0; be < 2; ++be) {
      Mat3 br = mat3_add(mat3_mul(s.Q[al], s.Q[be]), mat3_mul(s.Q[be], s.Q[al]));
      res = std::max(res, decompose_osp(br, a, b, c, x, y));
      s.bracket_QQ[al][be][0] = a;
      s.bracket_QQ[al][be][1] = b;
      s.bracket_QQ[al][be][2] = c;
      res = std::max(res, std::abs(x) + std::abs(y));
    }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      s.killing_LL[i][j] = s.normalization * str3(mat3_mul(s.L[i], s.L[j]));
  for (int al = 0; al < 2; ++al)
    for (int be = 0; be < 2; ++be)
      s.killing_QQ[al][be] = s.normalization * str3(mat3_mul(s.Q[al], s.Q[be]));
  for (int i = 0; i < 3; ++i)
    for (int al = 0; al < 2; ++al)
      s.killing_LQ[i][al] = s.normalization * str3(mat3_mul(s.L[i], s.Q[al]));
  s.decomposition_residual = res;
  return s;
}

// Embeds a numeric 3x3 into a (2|1) supermatrix scaled by a Grassmann factor.
inline SuperMatrix scaled_osp_matrix(const AlgebraPtr& alg, const Mat3& m,
                                     const G& scale) {
  SuperMatrix r(alg, 2, 1);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r.raw(i, j) = scale * cplx(m[i][j]);
  return r;
}

}  // namespace supergeo
