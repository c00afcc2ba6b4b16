#include "berk/divisor.hpp"

#include <algorithm>
#include <sstream>

namespace berk {

ClosedPoint ClosedPoint::rational(Rat a) {
  return ClosedPoint(Kind::Rational, std::move(a), QPoly());
}

ClosedPoint ClosedPoint::infinity() {
  return ClosedPoint(Kind::Infinity, Rat(0), QPoly());
}

ClosedPoint ClosedPoint::irreducible(QPoly f) {
  if (f.degree() < 2 || f.leading() != 1)
    throw std::invalid_argument(
        "ClosedPoint::irreducible: need a monic polynomial of degree >= 2");
  return ClosedPoint(Kind::Irreducible, Rat(0), std::move(f));
}

const Rat& ClosedPoint::value() const {
  if (kind_ != Kind::Rational)
    throw std::domain_error("ClosedPoint::value: not a rational point");
  return a_;
}

const QPoly& ClosedPoint::minpoly() const {
  if (kind_ != Kind::Irreducible)
    throw std::domain_error("ClosedPoint::minpoly: not an irreducible point");
  return f_;
}

long ClosedPoint::degree() const {
  return kind_ == Kind::Irreducible ? f_.degree() : 1;
}

bool ClosedPoint::operator==(const ClosedPoint& o) const {
  return kind_ == o.kind_ && a_ == o.a_ && f_ == o.f_;
}

bool ClosedPoint::operator<(const ClosedPoint& o) const {
  auto rank = [](Kind k) {
    return k == Kind::Rational ? 0 : (k == Kind::Irreducible ? 1 : 2);
  };
  if (rank(kind_) != rank(o.kind_)) return rank(kind_) < rank(o.kind_);
  if (kind_ == Kind::Rational) return a_ < o.a_;
  if (kind_ == Kind::Irreducible) {
    if (f_.degree() != o.f_.degree()) return f_.degree() < o.f_.degree();
    for (long k = f_.degree(); k >= 0; --k)
      if (f_[k] != o.f_[k]) return f_[k] < o.f_[k];
  }
  return false;
}

std::string ClosedPoint::str() const {
  switch (kind_) {
    case Kind::Rational:
      return "T=" + rat_str(a_);
    case Kind::Infinity:
      return "T=inf";
    default:
      return "(" + f_.str() + ")";
  }
}

long Divisor::degree() const {
  long d = 0;
  for (const auto& [pt, m] : terms) d += m * pt.degree();
  return d;
}

long Divisor::multiplicity(const ClosedPoint& pt) const {
  for (const auto& [q, m] : terms)
    if (q == pt) return m;
  return 0;
}

std::string Divisor::str() const {
  if (terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [pt, m] : terms) {
    if (!first) os << (m > 0 ? " + " : " - ");
    else if (m < 0) os << "-";
    first = false;
    long a = m > 0 ? m : -m;
    if (a != 1) os << a << "*";
    os << pt.str();
  }
  return os.str();
}

Divisor divisor(const RatFunc& f) {
  if (f.is_zero()) throw std::invalid_argument("divisor: zero function");
  std::vector<std::pair<ClosedPoint, long>> terms;
  auto add = [&](const QPoly& g, long sign) {
    for (const auto& [q, mult] : factor_over_q(g).factors) {
      long m = sign * mult;
      if (q.degree() == 1)
        terms.emplace_back(ClosedPoint::rational(-q[0]), m);
      else
        terms.emplace_back(ClosedPoint::irreducible(q), m);
    }
  };
  add(f.num(), +1);
  add(f.den(), -1);
  long at_inf = f.den().degree() - f.num().degree();
  if (at_inf != 0) terms.emplace_back(ClosedPoint::infinity(), at_inf);
  std::sort(terms.begin(), terms.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  Divisor d;
  d.terms = std::move(terms);
  return d;
}

}  // namespace berk
