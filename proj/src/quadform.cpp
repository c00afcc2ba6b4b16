#include "berk/quadform.hpp"

#include <sstream>
#include <stdexcept>

namespace berk {

QuadForm::QuadForm(std::int64_t p, std::vector<RatFunc> coeffs)
    : p_(p), c_(std::move(coeffs)) {
  require_odd_prime(p_);
  if (c_.empty()) throw std::invalid_argument("QuadForm: empty form");
  for (const RatFunc& a : c_) {
    if (a.is_zero()) {
      throw std::invalid_argument(
          "QuadForm: zero coefficient (apply the Witt reduction first)");
    }
  }
}

bool QuadForm::constant() const {
  for (const RatFunc& a : c_) {
    if (!a.is_constant()) return false;
  }
  return true;
}

std::vector<Rat> QuadForm::constant_coeffs() const {
  std::vector<Rat> out;
  for (const RatFunc& a : c_) {
    if (!a.is_constant()) {
      throw std::invalid_argument("QuadForm: coefficient " + a.str() +
                                  " is not constant");
    }
    out.push_back(a.num()[0]);
  }
  return out;
}

std::string QuadForm::str() const {
  std::string s = "<";
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (i) s += ", ";
    s += c_[i].str();
  }
  return s + ">";
}

std::string CertNode::str(int indent) const {
  std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  std::string out = pad + site + ": " + detail + "\n";
  for (const CertNode& ch : children) out += ch.str(indent + 1);
  return out;
}

IsotropyVerdict IsotropyVerdict::make_isotropic(BaseFieldDesc layer, Witness w,
                                                std::string note) {
  IsotropyVerdict v;
  v.kind = Kind::Isotropic;
  v.layer = std::move(layer);
  v.witness = std::move(w);
  v.witness_note = std::move(note);
  return v;
}

IsotropyVerdict IsotropyVerdict::make_anisotropic(BaseFieldDesc layer,
                                                  CertNode cert) {
  IsotropyVerdict v;
  v.kind = Kind::Anisotropic;
  v.layer = std::move(layer);
  v.certificate = std::move(cert);
  return v;
}

IsotropyVerdict IsotropyVerdict::make_unknown(BaseFieldDesc layer,
                                              std::string why) {
  IsotropyVerdict v;
  v.kind = Kind::Unknown;
  v.layer = std::move(layer);
  v.reason = std::move(why);
  return v;
}

std::string IsotropyVerdict::str() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::Isotropic:
      os << "isotropic over " << layer.str();
      if (!witness_note.empty()) os << " (" << witness_note << ")";
      break;
    case Kind::Anisotropic:
      os << "anisotropic over " << layer.str() << "\n"
         << certificate.str(1);
      break;
    case Kind::Unknown:
      os << "unknown (" << reason << ")";
      break;
  }
  return os.str();
}

bool check_witness(const FqField& F, const std::vector<FpPoly>& coeffs,
                   const FqWitness& w) {
  if (coeffs.size() != w.coords.size()) {
    throw std::invalid_argument("check_witness: dimension mismatch");
  }
  if (!(w.modulus == F.modulus())) return false;
  bool nontrivial = false;
  FpPoly s = F.zero();
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    FpPoly x = F.reduce(w.coords[i]);
    if (!x.is_zero()) nontrivial = true;
    s = F.add(s, F.mul(F.reduce(coeffs[i]), F.mul(x, x)));
  }
  return nontrivial && s.is_zero();
}

bool check_witness(std::int64_t p, const std::vector<Rat>& coeffs,
                   const QpWitness& w) {
  if (coeffs.size() != w.coords.size()) {
    throw std::invalid_argument("check_witness: dimension mismatch");
  }
  if (w.p != p || w.newton_index >= coeffs.size()) return false;
  bool nontrivial = false;
  Rat s(0);
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (w.coords[i] != 0) nontrivial = true;
    s += coeffs[i] * w.coords[i] * w.coords[i];
  }
  if (!nontrivial) return false;
  if (s == 0) return true;  // exact zero
  const Rat& xi = w.coords[w.newton_index];
  if (xi == 0) return false;
  long vs = vp(s, p);
  long vd = vp(Rat(2) * coeffs[w.newton_index] * xi, p);
  return vs >= w.precision && vs > 2 * vd;
}

bool check_witness(std::int64_t p, const std::vector<FpRat>& coeffs,
                   const FqtWitness& w) {
  if (coeffs.size() != w.coords.size()) {
    throw std::invalid_argument("check_witness: dimension mismatch");
  }
  bool nontrivial = false;
  FpRat s(p);
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (!w.coords[i].is_zero()) nontrivial = true;
    s = s + coeffs[i] * w.coords[i] * w.coords[i];
  }
  return nontrivial && s.is_zero();
}

bool check_witness(const QuadForm& q, const BaseFieldDesc& K,
                   const Witness& w) {
  switch (K.kind) {
    case BaseFieldDesc::Kind::FiniteField: {
      const auto* fw = std::get_if<FqWitness>(&w);
      if (!fw) return false;
      FqField F(fw->modulus);
      if (F.p() != q.p() || F.degree() != K.degree) return false;
      std::vector<FpPoly> a;
      for (const Rat& c : q.constant_coeffs()) {
        a.push_back(FpPoly::constant(q.p(), to_long(mod_m(c, Int(q.p())))));
      }
      return check_witness(F, a, *fw);
    }
    case BaseFieldDesc::Kind::PAdicRationals: {
      const auto* qw = std::get_if<QpWitness>(&w);
      if (!qw) return false;
      return check_witness(q.p(), q.constant_coeffs(), *qw);
    }
    case BaseFieldDesc::Kind::RationalFunctionField: {
      const auto* tw = std::get_if<FqtWitness>(&w);
      if (!tw) return false;
      std::vector<FpRat> a;
      for (const RatFunc& c : q.coeffs()) {
        a.emplace_back(FpPoly::from_qpoly(c.num(), q.p()),
                       FpPoly::from_qpoly(c.den(), q.p()));
      }
      return check_witness(q.p(), a, *tw);
    }
    default:
      return false;
  }
}

}  // namespace berk
