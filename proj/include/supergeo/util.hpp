#pragma once

// Deterministic splittable RNG and byte-stable JSON/CSV writers.
//
// Reports must be byte-identical for a given seed, so numbers are always
// formatted with snprintf("%.17g") and keys are emitted in insertion order.

#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

namespace supergeo {

// splitmix64; stable across platforms, unlike the std distributions.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  // uniform in [0, 1)
  double uniform() { return (next_u64() >> 11) * 0x1.0p-53; }
  // uniform in [lo, hi)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // symmetric in [-s, s)
  double sym(double s) { return uniform(-s, s); }
  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + int(next_u64() % uint64_t(hi - lo + 1));
  }
  Rng split(uint64_t salt) {
    return Rng(next_u64() ^ (salt * 0x9e3779b97f4a7c15ull + 0x2545f4914f6cdd1dull));
  }

 private:
  uint64_t state_;
};

inline std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Minimal JSON writer with deterministic output.
class JsonWriter {
 public:
  void begin_object() { open('{'); }
  void end_object() { close('}'); }
  void begin_array() { open('['); }
  void end_array() { close(']'); }

  void key(const std::string& k) {
    comma();
    out_ += '"';
    escape(k);
    out_ += "\":";
    pending_value_ = true;
  }
  void value(const std::string& s) {
    comma();
    out_ += '"';
    escape(s);
    out_ += '"';
  }
  void value(const char* s) { value(std::string(s)); }
  void value(double v) {
    comma();
    out_ += fmt_double(v);
  }
  void value(int v) {
    comma();
    out_ += std::to_string(v);
  }
  void value(uint64_t v) {
    comma();
    out_ += std::to_string(v);
  }
  void value(bool b) {
    comma();
    out_ += b ? "true" : "false";
  }

  void kv(const std::string& k, const std::string& v) { key(k), value(v); }
  void kv(const std::string& k, const char* v) { key(k), value(v); }
  void kv(const std::string& k, double v) { key(k), value(v); }
  void kv(const std::string& k, int v) { key(k), value(v); }
  void kv(const std::string& k, uint64_t v) { key(k), value(v); }
  void kv(const std::string& k, bool v) { key(k), value(v); }

  const std::string& str() const { return out_; }

 private:
  void open(char c) {
    comma();
    out_ += c;
    first_.push_back(true);
  }
  void close(char c) {
    out_ += c;
    first_.pop_back();
    pending_value_ = false;
  }
  void comma() {
    if (pending_value_) {
      pending_value_ = false;
      return;
    }
    if (!first_.empty()) {
      if (!first_.back()) out_ += ',';
      first_.back() = false;
    }
  }
  void escape(const std::string& s) {
    for (char c : s) {
      switch (c) {
        case '"': out_ += "\\\""; break;
        case '\\': out_ += "\\\\"; break;
        case '\n': out_ += "\\n"; break;
        case '\t': out_ += "\\t"; break;
        default:
          if ((unsigned char)c < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof(buf), "\\u%04x", c);
            out_ += buf;
          } else {
            out_ += c;
          }
      }
    }
  }

  std::string out_;
  std::vector<bool> first_;
  bool pending_value_ = false;
};

// Column label for a Grassmann coefficient: body is "c0", the monomial
// theta_i theta_j ... is "c" + 1-based indices ("c12"); indices above 9 are
// separated by underscores.
inline std::string coeff_label(uint32_t mask) {
  if (mask == 0) return "c0";
  std::string s = "c";
  bool wide = false;
  for (uint32_t m = mask; m; m &= m - 1) {
    int j = __builtin_ctz(m) + 1;
    if (j > 9) wide = true;
  }
  bool first = true;
  for (uint32_t m = mask; m; m &= m - 1) {
    int j = __builtin_ctz(m) + 1;
    if (!first && wide) s += '_';
    s += std::to_string(j);
    first = false;
  }
  return s;
}

}  // namespace supergeo
