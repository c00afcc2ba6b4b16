#pragma once

// Diagonal quadratic forms and certified isotropy verdicts: either a witness
// that replays through check_witness, or an anisotropy certificate chaining
// residue-form obstructions down to a square-class test, or an honest
// Unknown with a reason.

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "berk/field_desc.hpp"
#include "berk/fq.hpp"
#include "berk/ratfunc.hpp"

namespace berk {

// Diagonal form sum a_i X_i^2 with nonzero coefficients in Q(T); constant
// coefficients cover the p-adic layers.
class QuadForm {
 public:
  QuadForm(std::int64_t p, std::vector<RatFunc> coeffs);

  std::int64_t p() const { return p_; }
  const std::vector<RatFunc>& coeffs() const { return c_; }
  std::size_t dim() const { return c_.size(); }
  bool constant() const;
  std::vector<Rat> constant_coeffs() const;  // throws unless constant()

  std::string str() const;

 private:
  std::int64_t p_;
  std::vector<RatFunc> c_;
};

struct FqWitness {
  FpPoly modulus;              // the residue field is F_p[x]/(modulus)
  std::vector<FpPoly> coords;  // a nontrivial zero over that field
};

struct QpWitness {
  std::int64_t p = 0;
  std::vector<Rat> coords;  // v_p(sum a_i coords_i^2) >= precision
  long precision = 0;
  // Coordinate with v_p(q(x)) > 2 v_p(2 a_i x_i): the inequality that makes
  // the approximate zero converge to an exact one.
  std::size_t newton_index = 0;
};

struct FqtWitness {
  std::vector<FpRat> coords;  // exact nontrivial zero over F_p(t)
};

using Witness = std::variant<std::monostate, FqWitness, QpWitness, FqtWitness>;

// One link of an anisotropy certificate: a site (a valuation or residue
// layer) and the obstruction seen there.
struct CertNode {
  std::string site;
  std::string detail;
  std::vector<CertNode> children;

  std::string str(int indent = 0) const;
};

struct IsotropyVerdict {
  enum class Kind { Isotropic, Anisotropic, Unknown };

  Kind kind = Kind::Unknown;
  BaseFieldDesc layer;
  Witness witness;           // Isotropic
  std::string witness_note;  // lift chain, replayable description
  CertNode certificate;      // Anisotropic
  std::string reason;        // Unknown

  bool isotropic() const { return kind == Kind::Isotropic; }
  bool anisotropic() const { return kind == Kind::Anisotropic; }

  static IsotropyVerdict make_isotropic(BaseFieldDesc layer, Witness w,
                                        std::string note);
  static IsotropyVerdict make_anisotropic(BaseFieldDesc layer, CertNode cert);
  static IsotropyVerdict make_unknown(BaseFieldDesc layer, std::string why);

  std::string str() const;
};

// Exact (or, for the p-adic layer, precision-qualified) replay of a witness
// against coefficients of the matching layer.
bool check_witness(const FqField& F, const std::vector<FpPoly>& coeffs,
                   const FqWitness& w);
bool check_witness(std::int64_t p, const std::vector<Rat>& coeffs,
                   const QpWitness& w);
bool check_witness(std::int64_t p, const std::vector<FpRat>& coeffs,
                   const FqtWitness& w);
// Dispatch on the field descriptor; a witness of the wrong layer fails.
bool check_witness(const QuadForm& q, const BaseFieldDesc& K, const Witness& w);

}  // namespace berk
