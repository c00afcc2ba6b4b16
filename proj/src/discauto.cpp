#include "berk/discauto.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace berk {

namespace {

std::string exp_str(std::int64_t p, const Rat& v) {
  std::ostringstream os;
  os << p << "^(" << rat_str(-v) << ")";
  return os.str();
}

std::vector<EisElem> lift(const QPoly& f, std::int64_t p, long h) {
  std::vector<EisElem> g;
  for (const Rat& c : f.coeffs()) g.push_back(EisElem::from_rat(p, h, c));
  return g;
}

// In-place Taylor shift: g becomes the coefficient vector of g(T + a).
void shift_by(std::vector<EisElem>& g, const EisElem& a) {
  if (g.size() < 2) return;
  for (std::size_t i = 0; i + 1 < g.size(); ++i) {
    for (std::size_t j = g.size() - 1; j-- > i;) {
      g[j] = g[j] + a * g[j + 1];
    }
  }
}

EisElem horner(const std::vector<EisElem>& g, const EisElem& a) {
  EisElem acc(a.p(), a.h());
  for (std::size_t i = g.size(); i-- > 0;) acc = acc * a + g[i];
  return acc;
}

// min_k (v(g_k) + k*s): the Gauss valuation of the disc point eta(0, s).
ValExt gauss(const std::vector<EisElem>& g, const Rat& s) {
  ValExt best = ValExt::plus_inf();
  for (std::size_t k = 0; k < g.size(); ++k) {
    ValExt v = g[k].valuation();
    if (!v.finite()) continue;
    ValExt t(v.value() + Rat(static_cast<long>(k)) * s);
    if (t < best) best = t;
  }
  return best;
}

ValExt poly_val(std::vector<EisElem> g, const LPoint& x) {
  if (g.empty()) return ValExt::plus_inf();
  if (x.kind == LPoint::Kind::Rigid) return horner(g, x.a).valuation();
  shift_by(g, x.a);
  return gauss(g, x.s);
}

ValExt ratfunc_val(const RatFunc& f, const LPoint& x, const EisElem* shift) {
  std::vector<EisElem> n = lift(f.num(), x.a.p(), x.a.h());
  std::vector<EisElem> d = lift(f.den(), x.a.p(), x.a.h());
  if (shift) {
    shift_by(n, *shift);
    shift_by(d, *shift);
  }
  ValExt vn = poly_val(n, x), vd = poly_val(d, x);
  if (!vd.finite()) {
    // reduced fraction: numerator and denominator cannot vanish together
    return vn.finite() ? ValExt::minus_inf() : ValExt::plus_inf();
  }
  if (!vn.finite()) return vn;
  return ValExt(vn.value() - vd.value());
}

// Exponent of |T - c|_x for a rational center c.
ValExt dist_val(const LPoint& x, std::int64_t p, const Rat& c) {
  ValExt v = (x.a - EisElem::from_rat(p, x.a.h(), c)).valuation();
  if (x.kind == LPoint::Kind::Rigid) return v;
  return v < ValExt(x.s) ? v : ValExt(x.s);
}

}  // namespace

EndNeighborhood::EndNeighborhood(std::int64_t p, Rat center, Rat s,
                                 std::vector<Excluded> excluded)
    : p_(p), center_(std::move(center)), s_(std::move(s)),
      ex_(std::move(excluded)) {
  require_odd_prime(p_);
  for (std::size_t i = 0; i < ex_.size(); ++i) {
    if (!(vp_ext(ex_[i].alpha - center_, p_) > ValExt(s_))) {
      throw std::invalid_argument(
          "EndNeighborhood: excluded center outside the ambient disc");
    }
    if (!(ex_[i].r > s_)) {
      throw std::invalid_argument(
          "EndNeighborhood: excluded disc as large as the ambient disc");
    }
    for (std::size_t j = 0; j < ex_.size(); ++j) {
      if (i == j) continue;
      ValExt d = vp_ext(ex_[i].alpha - ex_[j].alpha, p_);
      if (!(ValExt(ex_[i].r) > d)) {
        throw std::invalid_argument(
            "EndNeighborhood: an excluded disc reaches another excluded "
            "center");
      }
    }
  }
}

std::string EndNeighborhood::str() const {
  std::ostringstream os;
  os << "{v_" << p_ << "(T - " << rat_str(center_) << ") > " << rat_str(s_)
     << "}";
  for (const Excluded& e : ex_) {
    os << " minus {v(T - " << rat_str(e.alpha) << ") >= " << rat_str(e.r)
       << "}";
  }
  return os.str();
}

LPoint LPoint::rigid(EisElem a) {
  return LPoint{Kind::Rigid, std::move(a), Rat(0)};
}

LPoint LPoint::eta(EisElem a, Rat s) {
  return LPoint{Kind::Eta, std::move(a), std::move(s)};
}

std::string LPoint::str() const {
  if (kind == Kind::Rigid) return "rigid(" + a.str() + ")";
  return "eta(" + a.str() + ", " + rat_str(s) + ")";
}

bool points_equal(const LPoint& x, const LPoint& y) {
  if (x.kind != y.kind) return false;
  ValExt d = (x.a - y.a).valuation();
  if (x.kind == LPoint::Kind::Rigid) return !d.finite();
  return x.s == y.s && d >= ValExt(x.s);
}

ValExt seminorm_val(const RatFunc& f, const LPoint& x) {
  return ratfunc_val(f, x, nullptr);
}

ValExt seminorm_val_shift(const RatFunc& f, const EisElem& w,
                          const LPoint& x) {
  return ratfunc_val(f, x, &w);
}

bool in_neighborhood(const EndNeighborhood& U, const LPoint& x) {
  if (U.p() != x.a.p()) {
    throw std::invalid_argument("in_neighborhood: mixed primes");
  }
  if (!(dist_val(x, U.p(), U.center()) > ValExt(U.s()))) return false;
  for (const auto& e : U.excluded()) {
    if (dist_val(x, U.p(), e.alpha) >= ValExt(e.r)) return false;
  }
  return true;
}

std::string TranslationGap::str(std::int64_t p) const {
  std::string a = hi_v.finite() ? exp_str(p, hi_v.value()) : std::string("0");
  return "(" + a + ", " + exp_str(p, lo_v) + ")";
}

TranslationGap translation_gap(const EndNeighborhood& U) {
  ValExt hi = ValExt::plus_inf();
  for (std::size_t i = 0; i < U.excluded().size(); ++i) {
    if (ValExt(U.excluded()[i].r) < hi) hi = ValExt(U.excluded()[i].r);
    for (std::size_t j = i + 1; j < U.excluded().size(); ++j) {
      ValExt d =
          vp_ext(U.excluded()[i].alpha - U.excluded()[j].alpha, U.p());
      if (d < hi) hi = d;
    }
  }
  TranslationGap g{U.s(), hi};
  if (hi.finite()) g.lo_v = (hi.value() + U.s()) / 2;
  return g;
}

TranslationPlan choose_w(const TranslationGap& gap, std::int64_t p, long m) {
  require_odd_prime(p);
  if (m < 1) throw std::invalid_argument("choose_w: m must be positive");
  const bool bounded = gap.hi_v.finite();
  for (long h = 1; h <= 512; ++h) {
    if (std::gcd(h, m) != 1) continue;
    long j = to_long(floor_rat(gap.lo_v * Rat(h))) + 1;
    if (!bounded) {
      // no excluded discs: any translation shorter than the ambient radius
      // works, and the base field already contains one
      TranslationPlan plan{gap, h, j, m, EisElem::pi_power(p, h, j), {}};
      plan.ext.kind = h == 1 ? BaseFieldDesc::Kind::PAdicRationals
                             : BaseFieldDesc::Kind::PAdicExtension;
      plan.ext.p = p;
      plan.ext.degree = h;
      plan.ext.note = "Q_p(pi) with pi^" + std::to_string(h) + " = p";
      return plan;
    }
    for (; Rat(j) < gap.hi_v.value() * Rat(h); ++j) {
      // j multiple of h puts |w| back in the value group of Q_p, where a
      // sample at the matching distance from an excluded center need not
      // escape it; skip those exponents
      if (j % h == 0) continue;
      TranslationPlan plan{gap, h, j, m, EisElem::pi_power(p, h, j), {}};
      plan.ext.kind = BaseFieldDesc::Kind::PAdicExtension;
      plan.ext.p = p;
      plan.ext.degree = h;
      plan.ext.note = "Q_p(pi) with pi^" + std::to_string(h) +
                      " = p (Eisenstein X^" + std::to_string(h) + " - p)";
      return plan;
    }
  }
  throw std::logic_error("choose_w: no admissible exponent found");
}

std::string TranslationPlan::str() const {
  std::ostringstream os;
  os << "w = pi^" << j << " in " << ext.str() << ", v(w) = "
     << rat_str(Rat(j) / Rat(h)) << ", gap " << gap.str(ext.p)
     << ", coprime to m = " << m;
  return os.str();
}

LPoint translate(const LPoint& x, const EisElem& w, const Rat& ambient_s) {
  if (!(w.valuation() > ValExt(ambient_s))) {
    throw std::domain_error(
        "translate: |w| reaches the ambient radius, T + w does not "
        "preserve the disc");
  }
  LPoint y = x;
  y.a = x.a + w;
  return y;
}

VerifyReport verify_into(const EndNeighborhood& U, const TranslationPlan& plan,
                         const std::vector<LPoint>& samples) {
  VerifyReport rep;
  for (const LPoint& x : samples) {
    if (!(dist_val(x, U.p(), U.center()) > ValExt(U.s()))) {
      throw std::invalid_argument(
          "verify_into: sample outside the ambient disc: " + x.str());
    }
    VerifyReport::Sample s{x, translate(x, plan.w, U.s()), false, false};
    s.before_in_u = in_neighborhood(U, x);
    s.after_in_u = in_neighborhood(U, s.after);
    rep.samples.push_back(std::move(s));
  }
  const long h = plan.w.h();
  for (const auto& e : U.excluded()) {
    // translated copy of the excluded disc: closed disc of the same size
    // about alpha_z + w; it must land inside the ambient disc and away
    // from every excluded disc
    EisElem c =
        EisElem::from_rat(U.p(), h, e.alpha - U.center()) + plan.w;
    bool ok = c.valuation() > ValExt(U.s());
    for (const auto& o : U.excluded()) {
      EisElem d = EisElem::from_rat(U.p(), h, e.alpha - o.alpha) + plan.w;
      ValExt lim(e.r < o.r ? e.r : o.r);
      if (!(d.valuation() < lim)) ok = false;
    }
    rep.translated_disc_in_u.push_back(ok);
  }
  rep.pass = true;
  for (const auto& s : rep.samples) {
    if (!s.after_in_u) rep.pass = false;
  }
  for (bool b : rep.translated_disc_in_u) {
    if (!b) rep.pass = false;
  }
  return rep;
}

std::string VerifyReport::str() const {
  std::ostringstream os;
  for (const auto& s : samples) {
    os << s.before.str() << (s.before_in_u ? " (in U)" : " (outside U)")
       << " -> " << s.after.str()
       << (s.after_in_u ? " (in U)" : " (OUTSIDE U)") << "\n";
  }
  for (std::size_t i = 0; i < translated_disc_in_u.size(); ++i) {
    os << "translated excluded disc " << i + 1
       << (translated_disc_in_u[i] ? " lands in U" : " LEAVES U") << "\n";
  }
  os << (pass ? "PASS" : "FAIL");
  return os.str();
}

ZeroCycleDegrees zero_cycle_degrees(const std::vector<long>& first,
                                    const std::vector<long>& second) {
  ZeroCycleDegrees z{Int(1), Int(1), Int(1)};
  for (long m : first) {
    if (m < 1) throw std::invalid_argument("zero_cycle_degrees: degree < 1");
    z.d1 *= m;
  }
  for (long m : second) {
    if (m < 1) throw std::invalid_argument("zero_cycle_degrees: degree < 1");
    z.d2 *= m;
  }
  z.g = boost::multiprecision::gcd(z.d1, z.d2);
  if (z.g != 1) {
    throw std::invalid_argument(
        "zero_cycle_degrees: the rounds share a factor, gcd = " +
        z.g.str());
  }
  return z;
}

}  // namespace berk
