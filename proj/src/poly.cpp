#include "berk/poly.hpp"

#include <numeric>
#include <sstream>

namespace berk {

namespace {
const Rat kZero(0);
}

void QPoly::normalize() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

QPoly QPoly::x() { return QPoly(std::vector<Rat>{Rat(0), Rat(1)}); }

QPoly QPoly::monomial(long k, Rat c) {
  if (k < 0) throw std::invalid_argument("monomial: negative exponent");
  std::vector<Rat> v(static_cast<size_t>(k) + 1, Rat(0));
  v.back() = std::move(c);
  return QPoly(std::move(v));
}

const Rat& QPoly::operator[](long k) const {
  if (k < 0 || k >= static_cast<long>(c_.size())) return kZero;
  return c_[static_cast<size_t>(k)];
}

const Rat& QPoly::leading() const {
  if (is_zero()) throw std::domain_error("leading of zero polynomial");
  return c_.back();
}

QPoly QPoly::operator+(const QPoly& o) const {
  std::vector<Rat> r(std::max(c_.size(), o.c_.size()), Rat(0));
  for (size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
  for (size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
  return QPoly(std::move(r));
}

QPoly QPoly::operator-(const QPoly& o) const { return *this + (-o); }

QPoly QPoly::operator-() const {
  std::vector<Rat> r(c_);
  for (auto& v : r) v = -v;
  return QPoly(std::move(r));
}

QPoly QPoly::operator*(const QPoly& o) const {
  if (is_zero() || o.is_zero()) return QPoly();
  std::vector<Rat> r(c_.size() + o.c_.size() - 1, Rat(0));
  for (size_t i = 0; i < c_.size(); ++i)
    for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
  return QPoly(std::move(r));
}

QPoly QPoly::operator*(const Rat& s) const {
  std::vector<Rat> r(c_);
  for (auto& v : r) v *= s;
  return QPoly(std::move(r));
}

std::pair<QPoly, QPoly> QPoly::divmod(const QPoly& o) const {
  if (o.is_zero()) throw std::domain_error("division by zero polynomial");
  QPoly q, r = *this;
  while (!r.is_zero() && r.degree() >= o.degree()) {
    long k = r.degree() - o.degree();
    Rat c = r.leading() / o.leading();
    QPoly t = QPoly::monomial(k, c);
    q = q + t;
    r = r - t * o;
  }
  return {q, r};
}

QPoly QPoly::derivative() const {
  if (c_.size() <= 1) return QPoly();
  std::vector<Rat> r(c_.size() - 1);
  for (size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * Rat(Int(i));
  return QPoly(std::move(r));
}

Rat QPoly::eval(const Rat& x) const {
  Rat r(0);
  for (size_t i = c_.size(); i-- > 0;) r = r * x + c_[i];
  return r;
}

QPoly QPoly::compose_affine(const Rat& a, const Rat& b) const {
  QPoly lin(std::vector<Rat>{a, b});
  QPoly r;
  for (size_t i = c_.size(); i-- > 0;) r = r * lin + QPoly(c_[i]);
  return r;
}

QPoly QPoly::reversed() const {
  std::vector<Rat> r(c_.rbegin(), c_.rend());
  return QPoly(std::move(r));
}

QPoly QPoly::monic() const {
  if (is_zero()) return *this;
  return *this * (Rat(1) / leading());
}

ValExt QPoly::gauss_val(std::int64_t p, const Rat& s) const {
  ValExt best = ValExt::plus_inf();
  for (size_t k = 0; k < c_.size(); ++k) {
    if (c_[k] == 0) continue;
    ValExt v(Rat(vp(c_[k], p)) + Rat(Int(k)) * s);
    if (v < best) best = v;
  }
  return best;
}

std::vector<std::pair<long, Rat>> QPoly::val_lines(std::int64_t p) const {
  std::vector<std::pair<long, Rat>> lines;
  for (size_t k = 0; k < c_.size(); ++k)
    if (c_[k] != 0) lines.emplace_back(static_cast<long>(k), Rat(vp(c_[k], p)));
  return lines;
}

std::pair<std::vector<Int>, Rat> QPoly::primitive_integral() const {
  if (is_zero()) return {{}, Rat(0)};
  Int l(1);
  for (const auto& v : c_) l = boost::multiprecision::lcm(l, den(v));
  std::vector<Int> w(c_.size());
  Int g(0);
  for (size_t i = 0; i < c_.size(); ++i) {
    w[i] = num(c_[i] * Rat(l));
    g = boost::multiprecision::gcd(g, w[i]);
  }
  if (w.back() < 0) g = -g;
  for (auto& v : w) v /= g;
  return {std::move(w), Rat(g, l)};
}

std::string QPoly::str(const std::string& var) const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (size_t i = c_.size(); i-- > 0;) {
    const Rat& c = c_[i];
    if (c == 0) continue;
    Rat a = c;
    if (!first) {
      os << (a < 0 ? " - " : " + ");
      if (a < 0) a = -a;
    }
    first = false;
    bool unit_coef = (a == 1 && i > 0);
    if (!unit_coef) os << a;
    if (i > 0) {
      if (!unit_coef) os << "*";
      os << var;
      if (i > 1) os << "^" << i;
    }
  }
  return os.str();
}

QPoly gcd(const QPoly& a, const QPoly& b) {
  QPoly x = a, y = b;
  while (!y.is_zero()) {
    QPoly r = x.divmod(y).second;
    x = y;
    y = r;
  }
  return x.monic();
}

std::string LaurentSeries::str(const std::string& var) const {
  if (c.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0) continue;
    long k = lead + static_cast<long>(i);
    Rat a = c[i];
    if (!first) {
      os << (a < 0 ? " - " : " + ");
      if (a < 0) a = -a;
    }
    first = false;
    if (k == 0 || a != 1) os << a;
    if (k != 0) {
      if (a != 1) os << "*";
      os << var;
      if (k != 1) os << "^" << (k < 0 ? "(" : "") << k << (k < 0 ? ")" : "");
    }
  }
  if (first) return "0";
  return os.str();
}

}  // namespace berk
