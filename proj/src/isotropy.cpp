#include "berk/isotropy.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "berk/padic.hpp"

namespace berk {

namespace {

BaseFieldDesc finite_desc(std::int64_t p, long degree) {
  BaseFieldDesc K;
  K.kind = BaseFieldDesc::Kind::FiniteField;
  K.p = p;
  K.degree = degree;
  return K;
}

BaseFieldDesc qp_desc(std::int64_t p) {
  BaseFieldDesc K;
  K.kind = BaseFieldDesc::Kind::PAdicRationals;
  K.p = p;
  return K;
}

std::string rat_vec_str(const std::vector<Rat>& v) {
  std::string s = "<";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += rat_str(v[i]);
  }
  return s + ">";
}

// Obstruction detail for a unit form of dimension <= 2 over F_q.
CertNode finite_obstruction(const FqField& F, const std::vector<FpPoly>& a,
                            const std::string& site) {
  CertNode node;
  node.site = site;
  if (a.empty()) {
    node.detail = "empty residue form";
  } else if (a.size() == 1) {
    node.detail = "<" + a[0].str() + ">: one-dimensional forms are anisotropic";
  } else {
    FpPoly r = F.neg(F.mul(F.reduce(a[0]), F.reduce(a[1])));
    node.detail = "<" + a[0].str() + ", " + a[1].str() + ">: -(" + a[0].str() +
                  ")*(" + a[1].str() + ") = " + r.str() +
                  " is a nonsquare, so the form is anisotropic";
  }
  return node;
}

}  // namespace

SpringerSplit springer_split(const std::vector<Rat>& coeffs, std::int64_t p) {
  require_odd_prime(p);
  SpringerSplit sp;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const Rat& c = coeffs[i];
    if (c == 0) throw std::invalid_argument("springer_split: zero coefficient");
    long v = vp(c, p);
    long e = ((v % 2) + 2) % 2;
    Rat u = c / pow_p(p, v);
    sp.scale.push_back(pow_p(p, -(v - e) / 2));
    if (e == 0) {
      sp.units1.push_back(u);
      sp.idx1.push_back(i);
    } else {
      sp.units2.push_back(u);
      sp.idx2.push_back(i);
    }
  }
  return sp;
}

IsotropyVerdict isotropic_finite(const FqField& F,
                                 const std::vector<FpPoly>& coeffs) {
  if (coeffs.empty()) throw std::invalid_argument("isotropic_finite: empty form");
  std::vector<FpPoly> a;
  for (const FpPoly& c : coeffs) {
    FpPoly r = F.reduce(c);
    if (r.is_zero()) {
      throw std::invalid_argument("isotropic_finite: coefficient reduces to 0");
    }
    a.push_back(r);
  }
  BaseFieldDesc K = finite_desc(F.p(), F.degree());
  std::optional<std::vector<FpPoly>> z = fq_form_zero(F, a);
  if (z) {
    FqWitness w{F.modulus(), *z};
    if (!check_witness(F, a, w)) {
      throw std::logic_error("isotropic_finite: witness failed replay");
    }
    return IsotropyVerdict::make_isotropic(
        K, w, "zero found over F_" + std::to_string(F.p()) +
                  (F.degree() > 1 ? "^" + std::to_string(F.degree()) : ""));
  }
  if (a.size() > 2) {
    throw std::logic_error(
        "isotropic_finite: no zero of a form of dimension > 2");
  }
  return IsotropyVerdict::make_anisotropic(
      K, finite_obstruction(F, a, "residue field " + K.str()));
}

bool qp_square(const Rat& a, std::int64_t p) {
  if (a == 0) throw std::invalid_argument("qp_square: zero");
  long v = vp(a, p);
  if (((v % 2) + 2) % 2 != 0) return false;
  return legendre(a / pow_p(p, v), p) == 1;
}

std::optional<std::vector<Int>> oracle_modpk(const std::vector<Rat>& coeffs,
                                             std::int64_t p, long k) {
  require_odd_prime(p);
  if (coeffs.empty()) throw std::invalid_argument("oracle_modpk: empty form");
  if (k < 1) throw std::invalid_argument("oracle_modpk: k < 1");
  Int pkI = 1;
  for (long i = 0; i < k; ++i) pkI *= p;
  if (pkI > 200000) {
    throw std::invalid_argument("oracle_modpk: p^k exceeds the search budget");
  }
  const long pk = to_long(pkI);
  const std::size_t n = coeffs.size();
  std::vector<long> c;
  for (const Rat& a : coeffs) c.push_back(to_long(mod_m(a, pkI)));

  // Reachable partial sums after each coordinate, split by whether a unit
  // coordinate has been used; equivalent to enumerating all vectors.
  std::vector<std::vector<char>> anyL(n, std::vector<char>(pk, 0));
  std::vector<std::vector<char>> unitL(n, std::vector<char>(pk, 0));
  for (long x = 0; x < pk; ++x) {
    long v = static_cast<long>((static_cast<long long>(x) * x % pk) * c[0] % pk);
    anyL[0][v] = 1;
    if (x % p) unitL[0][v] = 1;
  }
  for (std::size_t i = 1; i < n; ++i) {
    // Distinct values of c_i x^2 with their unit-preimage flag.
    std::vector<char> vav(pk, 0), vu(pk, 0);
    for (long x = 0; x < pk; ++x) {
      long v = static_cast<long>((static_cast<long long>(x) * x % pk) * c[i] % pk);
      vav[v] = 1;
      if (x % p) vu[v] = 1;
    }
    for (long v = 0; v < pk; ++v) {
      if (!vav[v]) continue;
      for (long s = 0; s < pk; ++s) {
        long t = s + v >= pk ? s + v - pk : s + v;
        if (anyL[i - 1][s]) {
          anyL[i][t] = 1;
          if (vu[v]) unitL[i][t] = 1;
        }
        if (unitL[i - 1][s]) unitL[i][t] = 1;
      }
    }
  }
  if (!unitL[n - 1][0]) return std::nullopt;

  // Backtrack one witness.
  std::vector<Int> xs(n);
  long target = 0;
  bool need_unit = true;
  for (std::size_t i = n - 1; i > 0; --i) {
    bool placed = false;
    for (long x = 0; x < pk && !placed; ++x) {
      long v = static_cast<long>((static_cast<long long>(x) * x % pk) * c[i] % pk);
      long prev = target - v < 0 ? target - v + pk : target - v;
      if (need_unit) {
        if (x % p && anyL[i - 1][prev]) {
          xs[i] = x;
          target = prev;
          need_unit = false;
          placed = true;
        } else if (unitL[i - 1][prev]) {
          xs[i] = x;
          target = prev;
          placed = true;
        }
      } else if (anyL[i - 1][prev]) {
        xs[i] = x;
        target = prev;
        placed = true;
      }
    }
    if (!placed) throw std::logic_error("oracle_modpk: backtrack failed");
  }
  bool placed = false;
  for (long x = 0; x < pk && !placed; ++x) {
    long v = static_cast<long>((static_cast<long long>(x) * x % pk) * c[0] % pk);
    if (v == target && (!need_unit || x % p)) {
      xs[0] = x;
      placed = true;
    }
  }
  if (!placed) throw std::logic_error("oracle_modpk: backtrack failed at 0");
  return xs;
}

std::optional<std::vector<FpPoly>> oracle_poly_search(
    const std::vector<FpRat>& coeffs, long max_degree) {
  if (coeffs.empty()) {
    throw std::invalid_argument("oracle_poly_search: empty form");
  }
  const std::int64_t p = coeffs[0].p();
  const std::size_t n = coeffs.size();
  const long digits_per = max_degree + 1;
  double total = 1;
  for (std::size_t i = 0; i < n * static_cast<std::size_t>(digits_per); ++i) {
    total *= static_cast<double>(p);
    if (total > 4e7) {
      throw std::invalid_argument(
          "oracle_poly_search: bound exceeds the search budget");
    }
  }
  // Common denominator: q(x) = 0 iff sum N_i x_i^2 = 0.
  FpPoly den = FpPoly::constant(p, 1);
  for (const FpRat& a : coeffs) den = den * a.den();
  std::vector<FpPoly> N;
  for (const FpRat& a : coeffs) {
    FpRat t = a * FpRat(den);
    if (!t.den().is_one()) {
      throw std::logic_error("oracle_poly_search: denominator did not clear");
    }
    N.push_back(t.num());
  }
  std::vector<long> digits(n * static_cast<std::size_t>(digits_per), 0);
  while (true) {
    // Advance the odometer (skip the initial all-zero vector first).
    std::size_t pos = 0;
    while (pos < digits.size() && digits[pos] == p - 1) digits[pos++] = 0;
    if (pos == digits.size()) return std::nullopt;
    ++digits[pos];

    std::vector<FpPoly> xs;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<long> cc(digits.begin() + static_cast<long>(i) * digits_per,
                           digits.begin() + static_cast<long>(i + 1) * digits_per);
      xs.emplace_back(p, cc);
    }
    FpPoly s(p);
    for (std::size_t i = 0; i < n; ++i) s = s + N[i] * xs[i] * xs[i];
    if (s.is_zero()) return xs;
  }
}

namespace {

// Hilbert-symbol criteria per dimension; classical and independent of the
// residue-form path.
bool qp_symbol_isotropic(const std::vector<Rat>& a, std::int64_t p) {
  switch (a.size()) {
    case 1:
      return false;
    case 2:
      return qp_square(-a[0] * a[1], p);
    case 3:
      return hilbert_symbol(-a[0] * a[2], -a[1] * a[2], p) == 1;
    case 4: {
      Rat d = a[0] * a[1] * a[2] * a[3];
      if (!qp_square(d, p)) return true;
      int eps = 1;
      for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = i + 1; j < 4; ++j) {
          eps *= hilbert_symbol(a[i], a[j], p);
        }
      }
      return eps == hilbert_symbol(Rat(-1), Rat(-1), p);
    }
    default:
      return true;  // dim >= 5 over Q_p
  }
}

}  // namespace

IsotropyVerdict isotropic_qp(std::int64_t p, const std::vector<Rat>& coeffs,
                             long precision) {
  require_odd_prime(p);
  if (coeffs.empty()) throw std::invalid_argument("isotropic_qp: empty form");
  long maxabsv = 0;
  for (const Rat& c : coeffs) {
    if (c == 0) throw std::invalid_argument("isotropic_qp: zero coefficient");
    maxabsv = std::max(maxabsv, std::abs(vp(c, p)));
  }
  precision = std::max(precision, 2 * maxabsv + 3);

  SpringerSplit sp = springer_split(coeffs, p);
  FqField Fp(FpPoly::x(p));
  auto residues = [&](const std::vector<Rat>& units) {
    std::vector<FpPoly> r;
    for (const Rat& u : units) {
      r.push_back(FpPoly::constant(p, to_long(mod_m(u, Int(p)))));
    }
    return r;
  };
  std::vector<FpPoly> r1 = residues(sp.units1), r2 = residues(sp.units2);
  std::optional<std::vector<FpPoly>> z1 =
      r1.empty() ? std::nullopt : fq_form_zero(Fp, r1);
  std::optional<std::vector<FpPoly>> z2 =
      r2.empty() ? std::nullopt : fq_form_zero(Fp, r2);
  const bool iso_residue = z1.has_value() || z2.has_value();

  const bool iso_symbol = qp_symbol_isotropic(coeffs, p);

  // Normalized coefficients have valuations in {0, 1}, so k = 3 meets the
  // exclusion bound 2*1 + 1.
  std::vector<Rat> normalized(coeffs.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    normalized[i] = coeffs[i] * sp.scale[i] * sp.scale[i];
  }
  const bool iso_search = oracle_modpk(normalized, p, 3).has_value();

  if (iso_residue != iso_symbol || iso_residue != iso_search) {
    std::ostringstream os;
    os << "isotropic_qp: decision mismatch on " << rat_vec_str(coeffs)
       << " over Q_" << p << ": residue=" << iso_residue
       << " symbol=" << iso_symbol << " search=" << iso_search;
    throw std::logic_error(os.str());
  }

  BaseFieldDesc K = qp_desc(p);
  if (!iso_residue) {
    CertNode root;
    root.site = "Q_" + std::to_string(p);
    root.detail = "springer split along p: q1 = " + rat_vec_str(sp.units1) +
                  ", p*q2 with q2 = " + rat_vec_str(sp.units2) +
                  "; both residue forms anisotropic over F_" +
                  std::to_string(p) + "; no primitive zero mod p^3";
    root.children.push_back(
        finite_obstruction(Fp, r1, "residue form of q1 over F_" + std::to_string(p)));
    root.children.push_back(
        finite_obstruction(Fp, r2, "residue form of q2 over F_" + std::to_string(p)));
    return IsotropyVerdict::make_anisotropic(K, root);
  }

  // Witness: lift the residue zero of the isotropic side by Newton iteration
  // on one coordinate, then truncate to canonical digits.
  const bool side1 = z1.has_value();
  const std::vector<std::size_t>& idx = side1 ? sp.idx1 : sp.idx2;
  const std::vector<FpPoly>& z = side1 ? *z1 : *z2;
  const long e = side1 ? 0 : 1;
  std::vector<Rat> x(coeffs.size(), Rat(0));
  std::size_t gi = coeffs.size();
  for (std::size_t j = 0; j < idx.size(); ++j) {
    long rv = z[j].is_zero() ? 0 : z[j][0];
    x[idx[j]] = Rat(rv);
    if (gi == coeffs.size() && rv != 0) gi = idx[j];
  }
  if (gi == coeffs.size()) {
    throw std::logic_error("isotropic_qp: residue witness is zero");
  }
  auto value = [&](const std::vector<Rat>& v) {
    Rat s(0);
    for (std::size_t i = 0; i < v.size(); ++i) s += normalized[i] * v[i] * v[i];
    return s;
  };
  Rat s = value(x);
  int guard = 0;
  while (s != 0 && vp(s, p) < precision + e) {
    x[gi] -= s / (Rat(2) * normalized[gi] * x[gi]);
    s = value(x);
    if (++guard > 200) throw std::logic_error("isotropic_qp: newton stalled");
  }
  // Canonical truncation, re-verified; kept exact if truncation loses the bound.
  std::vector<Rat> xt(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    xt[i] = canonical_center(x[i], p, precision);
  }
  if (value(xt) != 0 && vp(value(xt), p) < precision) xt = x;

  QpWitness w;
  w.p = p;
  w.precision = precision;
  for (std::size_t i = 0; i < x.size(); ++i) xt[i] *= sp.scale[i];
  w.coords = xt;
  w.newton_index = gi;
  if (!check_witness(p, coeffs, w)) {
    throw std::logic_error("isotropic_qp: lifted witness failed replay");
  }
  std::ostringstream note;
  note << "springer side " << (side1 ? "q1" : "p*q2")
       << ", residue zero lifted by newton to v_p(q(x)) >= " << precision;
  return IsotropyVerdict::make_isotropic(K, w, note.str());
}

IsotropyVerdict isotropic_residue(const QuadForm& q, const BaseFieldDesc& K) {
  require_odd_prime(q.p());
  switch (K.kind) {
    case BaseFieldDesc::Kind::FiniteField: {
      if (K.p != q.p() || K.degree != 1) {
        throw std::invalid_argument(
            "isotropic_residue: only the prime field is describable here; "
            "call isotropic_finite with an explicit modulus for extensions");
      }
      std::vector<FpPoly> a;
      for (const Rat& c : q.constant_coeffs()) {
        a.push_back(FpPoly::constant(q.p(), to_long(mod_m(c, Int(q.p())))));
      }
      return isotropic_finite(FqField(FpPoly::x(q.p())), a);
    }
    case BaseFieldDesc::Kind::PAdicRationals: {
      if (K.p != q.p()) {
        throw std::invalid_argument("isotropic_residue: prime mismatch");
      }
      return isotropic_qp(q.p(), q.constant_coeffs());
    }
    case BaseFieldDesc::Kind::RationalFunctionField: {
      if (K.p != q.p()) {
        throw std::invalid_argument("isotropic_residue: prime mismatch");
      }
      std::vector<FpRat> a;
      for (const RatFunc& c : q.coeffs()) {
        FpPoly dn = FpPoly::from_qpoly(c.den(), q.p());
        if (dn.is_zero()) {
          throw std::invalid_argument(
              "isotropic_residue: denominator of " + c.str() +
              " reduces to 0 mod p");
        }
        FpRat r(FpPoly::from_qpoly(c.num(), q.p()), dn);
        if (r.is_zero()) {
          throw std::invalid_argument("isotropic_residue: coefficient " +
                                      c.str() + " reduces to 0 mod p");
        }
        a.push_back(r);
      }
      return isotropic_fqt(q.p(), a);
    }
    default:
      throw std::invalid_argument("isotropic_residue: unsupported field " +
                                  K.str());
  }
}

}  // namespace berk
