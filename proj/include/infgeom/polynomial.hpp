#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "infgeom/errors.hpp"
#include "infgeom/scalar.hpp"

namespace infgeom {

/// Exponent vector Z_1^a_1 ... Z_n^a_n.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::size_t n) : exps_(n, 0) {}
  explicit Monomial(std::vector<unsigned> exps) : exps_(std::move(exps)) {}

  static Monomial unit(std::size_t n) { return Monomial(n); }
  static Monomial variable(std::size_t n, std::size_t i) {
    Monomial m(n);
    m.exps_.at(i) = 1;
    return m;
  }

  std::size_t size() const { return exps_.size(); }
  unsigned operator[](std::size_t i) const { return exps_[i]; }
  unsigned& operator[](std::size_t i) { return exps_[i]; }
  const std::vector<unsigned>& exponents() const { return exps_; }

  unsigned degree() const { return std::accumulate(exps_.begin(), exps_.end(), 0u); }
  bool is_unit() const { return degree() == 0; }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    if (a.size() != b.size()) throw std::invalid_argument("monomial arity mismatch");
    Monomial p = a;
    for (std::size_t i = 0; i < p.size(); ++i) p.exps_[i] += b.exps_[i];
    return p;
  }

  bool divides(const Monomial& other) const {
    for (std::size_t i = 0; i < size(); ++i)
      if (exps_[i] > other.exps_[i]) return false;
    return true;
  }

  /// alpha! = prod a_i!
  Rational factorial() const {
    Rational f = 1;
    for (unsigned e : exps_)
      for (unsigned k = 2; k <= e; ++k) f *= k;
    return f;
  }

  /// Concatenation (a, b) as a monomial in size(a) + size(b) variables.
  friend Monomial concat(const Monomial& a, const Monomial& b) {
    std::vector<unsigned> e = a.exps_;
    e.insert(e.end(), b.exps_.begin(), b.exps_.end());
    return Monomial(std::move(e));
  }

  friend bool operator==(const Monomial&, const Monomial&) = default;

  std::string to_string(char prefix = 'x') const {
    std::string s;
    for (std::size_t i = 0; i < size(); ++i) {
      if (exps_[i] == 0) continue;
      if (!s.empty()) s += '*';
      s += prefix + std::to_string(i + 1);
      if (exps_[i] > 1) s += '^' + std::to_string(exps_[i]);
    }
    return s.empty() ? "1" : s;
  }

 private:
  std::vector<unsigned> exps_;
};

/// Degree first; within a degree, larger exponents on earlier variables come
/// first, so 1 < x1 < x2 < x1^2 < x1*x2 < x2^2.
struct DegLexLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    unsigned da = a.degree(), db = b.degree();
    if (da != db) return da < db;
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i)
      if (a[i] != b[i]) return a[i] > b[i];
    return a.size() < b.size();
  }
};

/// All monomials in n variables of total degree <= max_degree, in DegLexLess order.
inline std::vector<Monomial> monomials_up_to(std::size_t n, unsigned max_degree) {
  std::vector<Monomial> out;
  for (unsigned d = 0; d <= max_degree; ++d) {
    // Exponent vectors of degree d, first variable descending.
    Monomial m(n);
    auto rec = [&](auto&& self, std::size_t i, unsigned remaining) -> void {
      if (n == 0) return;
      if (i + 1 == n) {
        m[i] = remaining;
        out.push_back(m);
        return;
      }
      for (unsigned e = remaining + 1; e-- > 0;) {
        m[i] = e;
        self(self, i + 1, remaining - e);
      }
      m[i] = 0;
    };
    rec(rec, 0, d);
  }
  return out;
}

template <Scalar S>
class Polynomial {
 public:
  using Terms = std::map<Monomial, S, DegLexLess>;

  Polynomial() = default;
  explicit Polynomial(std::size_t n) : n_(n) {}

  static Polynomial constant(std::size_t n, const S& c) {
    Polynomial p(n);
    p.add_term(Monomial::unit(n), c);
    return p;
  }
  static Polynomial variable(std::size_t n, std::size_t i) {
    Polynomial p(n);
    p.add_term(Monomial::variable(n, i), S(1));
    return p;
  }
  static Polynomial monomial(const Monomial& m, const S& c = S(1)) {
    Polynomial p(m.size());
    p.add_term(m, c);
    return p;
  }

  std::size_t arity() const { return n_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  S coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? S(0) : it->second;
  }

  void add_term(const Monomial& m, const S& c) {
    if (m.size() != n_) throw std::invalid_argument("monomial arity does not match polynomial");
    if (c == S(0)) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == S(0)) terms_.erase(it);
    }
  }

  unsigned degree() const { return terms_.empty() ? 0 : terms_.rbegin()->first.degree(); }
  unsigned lowest_degree() const { return terms_.empty() ? 0 : terms_.begin()->first.degree(); }

  Polynomial& operator+=(const Polynomial& o) {
    check_arity(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    check_arity(o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator-(Polynomial a) {
    for (auto& [m, c] : a.terms_) c = -c;
    return a;
  }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check_arity(b);
    Polynomial p(a.n_);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) p.add_term(ma * mb, ca * cb);
    return p;
  }
  friend Polynomial operator*(const S& s, Polynomial a) {
    if (s == S(0)) return Polynomial(a.n_);
    for (auto& [m, c] : a.terms_) c *= s;
    return a;
  }

  /// Drops every term of degree above bound.
  Polynomial truncated(unsigned bound) const {
    Polynomial p(n_);
    for (const auto& [m, c] : terms_)
      if (m.degree() <= bound) p.terms_.emplace(m, c);
    return p;
  }

  Polynomial derivative(std::size_t i) const {
    Polynomial p(n_);
    for (const auto& [m, c] : terms_) {
      if (m[i] == 0) continue;
      Monomial d = m;
      d[i] -= 1;
      p.add_term(d, c * S(m[i]));
    }
    return p;
  }

  S evaluate(const std::vector<S>& point) const {
    if (point.size() != n_) throw std::invalid_argument("point arity does not match polynomial");
    S total(0);
    for (const auto& [m, c] : terms_) {
      S term = c;
      for (std::size_t i = 0; i < n_; ++i)
        for (unsigned k = 0; k < m[i]; ++k) term *= point[i];
      total += term;
    }
    return total;
  }

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

  std::string to_string(char prefix = 'x') const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [m, c] : terms_) {
      std::string coeff = infgeom::to_string(c);
      bool negative = !coeff.empty() && coeff.front() == '-';
      if (negative) coeff.erase(0, 1);
      if (s.empty()) {
        if (negative) s += '-';
      } else {
        s += negative ? " - " : " + ";
      }
      if (m.is_unit()) {
        s += coeff;
      } else {
        if (coeff != "1") s += (coeff.find('/') != std::string::npos ? "(" + coeff + ")" : coeff) + "*";
        s += m.to_string(prefix);
      }
    }
    return s;
  }

 private:
  void check_arity(const Polynomial& o) const {
    if (o.n_ != n_) throw std::invalid_argument("polynomial arity mismatch");
  }

  std::size_t n_ = 0;
  Terms terms_;
};

}  // namespace infgeom
