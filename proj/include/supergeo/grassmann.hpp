#pragma once

// Exact arithmetic in finitely generated Grassmann algebras over R or C.
//
// Elements are stored sparsely as (generator-bitmask, coefficient) pairs in
// ascending bitmask order. Products carry the transposition sign computed
// from popcount prefixes, so all algebra laws hold exactly; the only source
// of error anywhere is double-precision rounding of the scalar coefficients.

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace supergeo {

using cplx = std::complex<double>;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConfigError : Error {
  using Error::Error;
};
struct ParityError : Error {
  using Error::Error;
};
struct DomainError : Error {
  using Error::Error;
};
struct SingularError : Error {
  using Error::Error;
};
struct CapacityError : Error {
  using Error::Error;
};

enum class Field { Real, Complex };
enum class Parity { Even, Odd, Mixed };

// One summand of a conjugation image: conj(theta_i) = sum coeff * theta_{gen}.
struct ConjTerm {
  int gen = 0;
  cplx coeff{1.0, 0.0};
};

// How the antilinear anti-automorphism acts on generators.
enum class ConjStyle {
  Identity,  // conj(theta_i) = theta_i (used for auxiliary/AD generators)
  Paired,    // conj(theta_{2k}) = -theta_{2k+1}, conj(theta_{2k+1}) = theta_{2k}
  Swap,      // conj(theta_{2k}) = theta_{2k+1}, conj(theta_{2k+1}) = theta_{2k}
};

class Algebra;
using AlgebraPtr = std::shared_ptr<const Algebra>;

// Immutable description of Lambda_N: generator count, scalar field and the
// conjugation table. The first `physical` generators carry problem data; the
// rest are reserved for the derivative machinery and are claimed in scopes.
class Algebra {
 public:
  static AlgebraPtr make(int physical, int aux, Field field,
                         ConjStyle style = ConjStyle::Paired) {
    auto a = std::shared_ptr<Algebra>(new Algebra);
    a->physical_ = physical;
    a->n_ = physical + aux;
    if (a->n_ < 1 || a->n_ > 16)
      throw ConfigError("algebra: generator count must be in [1,16]");
    a->field_ = field;
    a->conj_.resize(a->n_);
    for (int i = 0; i < a->n_; ++i) a->conj_[i] = {ConjTerm{i, cplx(1.0)}};
    if (style == ConjStyle::Paired) {
      for (int k = 0; 2 * k + 1 < physical; ++k) {
        a->conj_[2 * k] = {ConjTerm{2 * k + 1, cplx(-1.0)}};
        a->conj_[2 * k + 1] = {ConjTerm{2 * k, cplx(1.0)}};
      }
    } else if (style == ConjStyle::Swap) {
      for (int k = 0; 2 * k + 1 < physical; ++k) {
        a->conj_[2 * k] = {ConjTerm{2 * k + 1, cplx(1.0)}};
        a->conj_[2 * k + 1] = {ConjTerm{2 * k, cplx(1.0)}};
      }
    }
    return a;
  }

  // Custom table for the physical block; must map generators to homogeneous
  // degree-1 odd images.
  static AlgebraPtr make_with_table(int physical, int aux, Field field,
                                    std::vector<std::vector<ConjTerm>> table) {
    auto a = std::const_pointer_cast<Algebra>(
        std::static_pointer_cast<const Algebra>(
            make(physical, aux, field, ConjStyle::Identity)));
    if ((int)table.size() != physical)
      throw ConfigError("conjugation table: one image per physical generator");
    for (int i = 0; i < physical; ++i) {
      if (table[i].empty())
        throw ConfigError("conjugation table: image must be homogeneous odd");
      for (auto& t : table[i])
        if (t.gen < 0 || t.gen >= a->n_)
          throw ConfigError("conjugation table: generator out of range");
      a->conj_[i] = table[i];
    }
    return a;
  }

  int generators() const { return n_; }
  int physical() const { return physical_; }
  int aux() const { return n_ - physical_; }
  Field field() const { return field_; }
  const std::vector<ConjTerm>& conj_image(int gen) const { return conj_[gen]; }

  static bool compatible(const Algebra& a, const Algebra& b) {
    if (&a == &b) return true;
    if (a.n_ != b.n_ || a.physical_ != b.physical_ || a.field_ != b.field_)
      return false;
    for (int i = 0; i < a.n_; ++i) {
      if (a.conj_[i].size() != b.conj_[i].size()) return false;
      for (size_t j = 0; j < a.conj_[i].size(); ++j)
        if (a.conj_[i][j].gen != b.conj_[i][j].gen ||
            a.conj_[i][j].coeff != b.conj_[i][j].coeff)
          return false;
    }
    return true;
  }

 private:
  Algebra() = default;
  int n_ = 0;
  int physical_ = 0;
  Field field_ = Field::Real;
  std::vector<std::vector<ConjTerm>> conj_;
};

namespace detail {

// Sign to multiply monomial(a) * monomial(b): parity of the number of
// transpositions needed to sort the concatenation.
inline int mul_sign(uint32_t a, uint32_t b) {
  int s = 0;
  uint32_t bb = b;
  while (bb) {
    int j = std::countr_zero(bb);
    s ^= std::popcount(a >> (j + 1)) & 1;
    bb &= bb - 1;
  }
  return s ? -1 : 1;
}

// Sign to rewrite monomial(s) as monomial(front) * monomial(s & ~front),
// keeping ascending order inside each factor. Requires front subset of s.
inline int pullout_sign(uint32_t s, uint32_t front) {
  uint32_t rest = s & ~front;
  int inv = 0;
  uint32_t ff = front;
  while (ff) {
    int j = std::countr_zero(ff);
    // elements of rest below j must jump over this generator
    inv += std::popcount(rest & ((1u << j) - 1u));
    ff &= ff - 1;
  }
  return (inv & 1) ? -1 : 1;
}

inline thread_local std::unordered_map<const Algebra*, int> aux_depth;

}  // namespace detail

class G;
inline G operator*(const G& x, const G& y);

// A Grassmann number: sparse sorted list of (bitmask, coefficient) terms.
class G {
 public:
  G() = default;
  explicit G(AlgebraPtr alg) : alg_(std::move(alg)) {}

  static G scalar(const AlgebraPtr& alg, cplx c) {
    G g(alg);
    if (c != 0.0) g.terms_.push_back({0u, c});
    return g;
  }
  static G generator(const AlgebraPtr& alg, int i) {
    if (i < 0 || i >= alg->generators())
      throw ConfigError("generator index out of range");
    G g(alg);
    g.terms_.push_back({1u << i, cplx(1.0)});
    return g;
  }
  static G monomial(const AlgebraPtr& alg, uint32_t mask, cplx c) {
    if (mask >> alg->generators())
      throw ConfigError("monomial mask out of range");
    G g(alg);
    if (c != 0.0) g.terms_.push_back({mask, c});
    return g;
  }

  const AlgebraPtr& algebra() const { return alg_; }
  const std::vector<std::pair<uint32_t, cplx>>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  cplx coefficient(uint32_t mask) const {
    auto it = std::lower_bound(
        terms_.begin(), terms_.end(), mask,
        [](const auto& t, uint32_t m) { return t.first < m; });
    return (it != terms_.end() && it->first == mask) ? it->second : cplx(0.0);
  }

  cplx body() const { return coefficient(0); }
  G soul() const {
    G g(alg_);
    for (auto& t : terms_)
      if (t.first != 0) g.terms_.push_back(t);
    return g;
  }

  Parity parity() const {
    bool has_even = false, has_odd = false;
    for (auto& t : terms_)
      ((std::popcount(t.first) & 1) ? has_odd : has_even) = true;
    if (has_even && has_odd) return Parity::Mixed;
    if (has_odd) return Parity::Odd;
    return Parity::Even;
  }
  bool is_even() const { return parity() == Parity::Even; }
  bool is_odd() const { return parity() == Parity::Odd; }

  double max_abs() const {
    double m = 0;
    for (auto& t : terms_) m = std::max(m, std::abs(t.second));
    return m;
  }

  G operator-() const {
    G g(alg_);
    g.terms_ = terms_;
    for (auto& t : g.terms_) t.second = -t.second;
    return g;
  }

  friend G operator+(const G& x, const G& y) {
    check_same(x, y);
    G g(x.alg_ ? x.alg_ : y.alg_);
    g.terms_.reserve(x.terms_.size() + y.terms_.size());
    size_t i = 0, j = 0;
    while (i < x.terms_.size() || j < y.terms_.size()) {
      if (j == y.terms_.size() ||
          (i < x.terms_.size() && x.terms_[i].first < y.terms_[j].first)) {
        g.terms_.push_back(x.terms_[i++]);
      } else if (i == x.terms_.size() || y.terms_[j].first < x.terms_[i].first) {
        g.terms_.push_back(y.terms_[j++]);
      } else {
        cplx c = x.terms_[i].second + y.terms_[j].second;
        if (c != 0.0) g.terms_.push_back({x.terms_[i].first, c});
        ++i, ++j;
      }
    }
    return g;
  }
  friend G operator-(const G& x, const G& y) { return x + (-y); }

  friend G operator*(const G& x, cplx c) {
    G g(x.alg_);
    if (c == 0.0) return g;
    g.terms_ = x.terms_;
    for (auto& t : g.terms_) t.second *= c;
    return g;
  }
  friend G operator*(cplx c, const G& x) { return x * c; }
  friend G operator*(const G& x, double c) { return x * cplx(c); }
  friend G operator*(double c, const G& x) { return x * cplx(c); }

  G& operator+=(const G& y) { return *this = *this + y; }
  G& operator-=(const G& y) { return *this = *this - y; }
  G& operator*=(const G& y) { return *this = *this * y; }
  G& operator*=(cplx c) { return *this = *this * c; }

  // Coefficientwise complex conjugation (no generator remapping). This is the
  // reality structure of Lambda_R inside its complexification.
  G cc() const {
    G g(alg_);
    g.terms_ = terms_;
    for (auto& t : g.terms_) t.second = std::conj(t.second);
    return g;
  }
  G real_part() const {
    G g(alg_);
    for (auto& t : terms_) {
      double r = t.second.real();
      if (r != 0.0) g.terms_.push_back({t.first, cplx(r)});
    }
    return g;
  }
  G imag_part() const {
    G g(alg_);
    for (auto& t : terms_) {
      double v = t.second.imag();
      if (v != 0.0) g.terms_.push_back({t.first, cplx(v)});
    }
    return g;
  }
  bool coefficients_real(double tol = 0.0) const {
    for (auto& t : terms_)
      if (std::abs(t.second.imag()) > tol) return false;
    return true;
  }

  // Antilinear anti-automorphism from the algebra's conjugation table:
  // conj(ab) = conj(b) conj(a), conj(c a) = cc(c) conj(a).
  G conj() const {
    G out(alg_);
    for (auto& t : terms_) {
      G m = G::scalar(alg_, std::conj(t.second));
      // reversed product of generator images
      uint32_t mask = t.first;
      while (mask) {
        int j = 31 - std::countl_zero(mask);  // highest set bit first
        G img(alg_);
        for (auto& ct : alg_->conj_image(j))
          img.terms_.push_back({1u << ct.gen, ct.coeff});
        img.normalize();
        m = m * img;
        mask &= ~(1u << j);
      }
      out += m;
    }
    return out;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& t : terms_) {
      if (!first) os << " + ";
      first = false;
      os << fmt_coeff(t.second);
      if (t.first) {
        os << "·";
        uint32_t m = t.first;
        while (m) {
          int j = std::countr_zero(m);
          os << "θ" << (j + 1);
          m &= m - 1;
        }
      }
    }
    return os.str();
  }

  void normalize() {
    std::sort(terms_.begin(), terms_.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    size_t w = 0;
    for (size_t i = 0; i < terms_.size();) {
      uint32_t m = terms_[i].first;
      cplx c = terms_[i].second;
      size_t j = i + 1;
      while (j < terms_.size() && terms_[j].first == m) c += terms_[j++].second;
      if (c != 0.0) terms_[w++] = {m, c};
      i = j;
    }
    terms_.resize(w);
  }

  static void check_same(const G& x, const G& y) {
    if (!x.alg_ || !y.alg_) return;  // default-constructed zero matches any
    if (!Algebra::compatible(*x.alg_, *y.alg_))
      throw ConfigError("operands from different Grassmann algebras");
  }

  std::vector<std::pair<uint32_t, cplx>>& mutable_terms() { return terms_; }

 private:
  static std::string fmt_coeff(cplx c) {
    std::ostringstream os;
    if (c.imag() == 0.0) {
      os << c.real();
    } else if (c.real() == 0.0) {
      os << c.imag() << "i";
    } else {
      os << "(" << c.real() << (c.imag() < 0 ? "-" : "+")
         << std::abs(c.imag()) << "i)";
    }
    return os.str();
  }

  AlgebraPtr alg_;
  std::vector<std::pair<uint32_t, cplx>> terms_;
};

inline G operator*(const G& x, const G& y) {
  G::check_same(x, y);
  G g(x.algebra() ? x.algebra() : y.algebra());
  auto& out = g.mutable_terms();
  out.reserve(x.terms().size() * y.terms().size());
  for (auto& tx : x.terms())
    for (auto& ty : y.terms()) {
      if (tx.first & ty.first) continue;  // repeated generator
      cplx c = tx.second * ty.second;
      if (detail::mul_sign(tx.first, ty.first) < 0) c = -c;
      out.push_back({tx.first | ty.first, c});
    }
  g.normalize();
  return g;
}

inline double max_coeff_diff(const G& x, const G& y) {
  return (x - y).max_abs();
}

// ---------------------------------------------------------------------------
// Inversion and analytic functions of even elements.
// ---------------------------------------------------------------------------

inline G invert(const G& a) {
  if (!a.is_even()) throw ParityError("invert: element must be even");
  cplx b = a.body();
  if (b == 0.0) throw DomainError("invert: zero body is not invertible");
  G s = a.soul();
  const auto& alg = a.algebra();
  // 1/a = 1/b * sum_k (-s/b)^k; terminates by nilpotency.
  G acc = G::scalar(alg, 1.0 / b);
  G pow = G::scalar(alg, 1.0);
  G mref = s * (-1.0 / b);
  for (int k = 1; k <= alg->generators() / 2 + 1; ++k) {
    pow = pow * mref;
    if (pow.is_zero()) break;
    acc += pow * (1.0 / b);
  }
  return acc;
}

namespace detail {

// Taylor expansion of f around the body applied to the nilpotent part, with
// the k-th derivative supplied by `dk`. Exact: the series terminates.
inline G analytic(const G& a, const std::function<cplx(int)>& dk,
                  const char* /*name*/) {
  if (!a.is_even()) throw ParityError("analytic function of non-even element");
  G s = a.soul();
  const auto& alg = a.algebra();
  G acc = G::scalar(alg, dk(0));
  G pow = G::scalar(alg, 1.0);
  double fact = 1.0;
  for (int k = 1; k <= alg->generators() / 2 + 1; ++k) {
    pow = pow * s;
    if (pow.is_zero()) break;
    fact *= k;
    acc += pow * (dk(k) / fact);
  }
  return acc;
}

}  // namespace detail

inline G exp(const G& a) {
  cplx b = a.body();
  cplx e = std::exp(b);
  return detail::analytic(a, [e](int) { return e; }, "exp");
}

inline G log(const G& a) {
  cplx b = a.body();
  if (b == 0.0) throw DomainError("log: body must be nonzero");
  if (a.algebra()->field() == Field::Real && b.imag() == 0.0 && b.real() < 0.0)
    throw DomainError("log: negative body in a real algebra");
  return detail::analytic(
      a,
      [b](int k) -> cplx {
        if (k == 0) return std::log(b);
        double f = 1.0;
        for (int j = 1; j < k; ++j) f *= j;
        return ((k - 1) % 2 ? -f : f) / std::pow(b, k);
      },
      "log");
}

inline G sqrt(const G& a) {
  cplx b = a.body();
  if (b == 0.0) throw DomainError("sqrt: body must be nonzero");
  if (a.algebra()->field() == Field::Real && b.imag() == 0.0 && b.real() < 0.0)
    throw DomainError("sqrt: negative body in a real algebra");
  return detail::analytic(
      a,
      [b](int k) -> cplx {
        cplx c = std::sqrt(b);
        for (int j = 0; j < k; ++j) c *= (0.5 - j) / b;
        return c;
      },
      "sqrt");
}

inline G cosh(const G& a) {
  cplx b = a.body();
  cplx ch = std::cosh(b), sh = std::sinh(b);
  return detail::analytic(
      a, [ch, sh](int k) { return (k % 2) ? sh : ch; }, "cosh");
}

inline G sinh(const G& a) {
  cplx b = a.body();
  cplx ch = std::cosh(b), sh = std::sinh(b);
  return detail::analytic(
      a, [ch, sh](int k) { return (k % 2) ? ch : sh; }, "sinh");
}

inline G tanh(const G& a) { return sinh(a) * invert(cosh(a)); }
inline G sech(const G& a) { return invert(cosh(a)); }

inline G arccosh(const G& a) {
  cplx b = a.body();
  if (b.imag() != 0.0 || b.real() <= 1.0)
    throw DomainError("arccosh: body must be real and > 1");
  return log(a + sqrt(a * a - G::scalar(a.algebra(), 1.0)));
}

inline G arctanh(const G& a) {
  cplx b = a.body();
  if (std::abs(b) >= 1.0 && b.imag() == 0.0)
    throw DomainError("arctanh: real body must satisfy |body| < 1");
  G one = G::scalar(a.algebra(), 1.0);
  return log((one + a) * invert(one - a)) * 0.5;
}

inline G pow(const G& a, double p) { return exp(log(a) * cplx(p)); }

// Even modulus |w| = sqrt(w * wbar) where wbar must be supplied by the
// caller's conjugation convention.
inline G modulus(const G& w, const G& wbar) { return sqrt(w * wbar); }

// Named dispatch mirroring the operation table.
enum class AnalyticFn { Exp, Log, Sqrt, Cosh, Sinh, Tanh, Sech, Arccosh, Power };

inline G apply_analytic(AnalyticFn fn, const G& a, double power_exponent = 1.0) {
  switch (fn) {
    case AnalyticFn::Exp: return exp(a);
    case AnalyticFn::Log: return log(a);
    case AnalyticFn::Sqrt: return sqrt(a);
    case AnalyticFn::Cosh: return cosh(a);
    case AnalyticFn::Sinh: return sinh(a);
    case AnalyticFn::Tanh: return tanh(a);
    case AnalyticFn::Sech: return sech(a);
    case AnalyticFn::Arccosh: return arccosh(a);
    case AnalyticFn::Power: return pow(a, power_exponent);
  }
  throw ConfigError("apply_analytic: unknown function");
}

// ---------------------------------------------------------------------------
// Auxiliary generator scopes for the derivative machinery.
// ---------------------------------------------------------------------------

class AuxScope {
 public:
  AuxScope(const AlgebraPtr& alg, int count) : alg_(alg.get()), count_(count) {
    int& depth = detail::aux_depth[alg_];
    first_ = alg->physical() + depth;
    if (first_ + count > alg->generators())
      throw CapacityError("auxiliary generators exhausted");
    depth += count;
  }
  ~AuxScope() { detail::aux_depth[alg_] -= count_; }
  AuxScope(const AuxScope&) = delete;
  AuxScope& operator=(const AuxScope&) = delete;

  int gen(int i) const { return first_ + i; }
  uint32_t mask() const { return ((1u << count_) - 1u) << first_; }

 private:
  const Algebra* alg_;
  int first_, count_;
};

// Coefficient of the monomial block `front` pulled out to the left:
// v = front * result + (terms not containing front).
inline G extract_factor(const G& v, uint32_t front) {
  G out(v.algebra());
  auto& terms = out.mutable_terms();
  for (auto& t : v.terms()) {
    if ((t.first & front) != front) continue;
    cplx c = t.second;
    if (detail::pullout_sign(t.first, front) < 0) c = -c;
    terms.push_back({t.first & ~front, c});
  }
  out.normalize();
  return out;
}

// Drops every term containing any generator of `mask`.
inline G drop_generators(const G& v, uint32_t mask) {
  G out(v.algebra());
  auto& terms = out.mutable_terms();
  for (auto& t : v.terms())
    if (!(t.first & mask)) terms.push_back(t);
  return out;
}

}  // namespace supergeo
