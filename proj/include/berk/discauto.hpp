#pragma once

// Translation automorphisms of open discs over Q_p and its Eisenstein
// extensions: end neighborhoods (an open disc minus finitely many closed
// discs), the gap interval for the translation length, the extension-degree
// construction pi^h = p, and the verification harness showing that T -> T + w
// moves every point of the disc into the end neighborhood.  Radii are carried
// as valuation exponents throughout: the disc of radius p^{-s} about c is
// {v(T - c) > s} (open) or {v(T - c) >= s} (closed), and larger exponents
// mean smaller discs.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "berk/field_desc.hpp"
#include "berk/numbers.hpp"
#include "berk/padic.hpp"
#include "berk/ratfunc.hpp"

namespace berk {

// An open disc D = {v(T - center) > s} minus a disjoint union of closed
// discs {v(T - alpha_z) >= r_z}.  Construction enforces: each alpha_z in D,
// r_z > s (strictly smaller radius), and r_z > v(alpha_z - alpha_z') for
// every other excluded center (each excluded disc is smaller than its
// distance to the other centers, so they are pairwise disjoint).
class EndNeighborhood {
 public:
  struct Excluded {
    Rat alpha;
    Rat r;
  };

  EndNeighborhood(std::int64_t p, Rat center, Rat s,
                  std::vector<Excluded> excluded);

  std::int64_t p() const { return p_; }
  const Rat& center() const { return center_; }
  const Rat& s() const { return s_; }
  const std::vector<Excluded>& excluded() const { return ex_; }

  std::string str() const;

 private:
  std::int64_t p_;
  Rat center_;
  Rat s_;
  std::vector<Excluded> ex_;
};

// A point of the line over the extension l = Q_p(pi), pi^h = p: a rigid
// point or a disc point eta(a, s) with a in l and rational log-radius s.
struct LPoint {
  enum class Kind { Rigid, Eta };

  static LPoint rigid(EisElem a);
  static LPoint eta(EisElem a, Rat s);

  Kind kind;
  EisElem a;
  Rat s;  // Eta only

  std::string str() const;
};

bool points_equal(const LPoint& x, const LPoint& y);

// Seminorm exponent v_x(f) of f in Q(T) at a point over the extension; for
// eta points this is the Gauss valuation of the recentered coefficients.
ValExt seminorm_val(const RatFunc& f, const LPoint& x);

// v_x(f(T + w)): the pull-back of f along the translation, evaluated at x.
// Translation is an isometry, so this equals v_{x + w}(f).
ValExt seminorm_val_shift(const RatFunc& f, const EisElem& w, const LPoint& x);

// Is x inside the end neighborhood (in the ambient open disc and outside
// every excluded closed disc)?
bool in_neighborhood(const EndNeighborhood& U, const LPoint& x);

// The open interval of translation lengths |w|, as valuation exponents
// (lo_v, hi_v) reading |w| in (p^{-hi_v}, p^{-lo_v}): lo_v is the smaller
// exponent bound b of the radius gap, hi_v the larger bound a.  hi_v is
// PlusInf exactly when there are no excluded discs (radius gap (0, p^{-s})).
struct TranslationGap {
  Rat lo_v;
  ValExt hi_v;
  std::string str(std::int64_t p) const;
};

// Gap endpoints: a = the largest of the pairwise distances of the excluded
// centers and their radii (the radii are dominated by the distances as soon
// as there are two discs, so this only sharpens the one-disc case); b = the
// geometric midpoint of a and the ambient radius.
TranslationGap translation_gap(const EndNeighborhood& U);

// The chosen translation: w = pi^j in l = Q_p(pi), pi^h = p, with
// v(w) = j/h strictly inside the gap and gcd(h, m) = 1.  When excluded
// discs exist (finite gap top), j is never a multiple of h, so |w| lies
// outside the value group of Q_p; this is what lets translated points
// escape the excluded discs at every rational center.
struct TranslationPlan {
  TranslationGap gap;
  long h = 1;
  long j = 0;
  long m = 1;
  EisElem w;
  BaseFieldDesc ext;

  std::string str() const;
};

TranslationPlan choose_w(const TranslationGap& gap, std::int64_t p, long m);

// T -> T + w on points: Rigid(c) -> Rigid(c + w), Eta(a, s) -> Eta(a + w, s).
// ambient_s is the exponent of the ambient disc radius; v(w) <= ambient_s
// means the translation does not preserve the disc and is rejected.
LPoint translate(const LPoint& x, const EisElem& w, const Rat& ambient_s);

// Harness for the translation lemma: every sample (a point of the ambient
// disc with rational center) must land inside U after translation, and the
// translated copy of each excluded disc must itself sit inside U.
struct VerifyReport {
  struct Sample {
    LPoint before;
    LPoint after;
    bool before_in_u = false;
    bool after_in_u = false;
  };
  std::vector<Sample> samples;
  std::vector<bool> translated_disc_in_u;  // one entry per excluded disc
  bool pass = false;

  std::string str() const;
};

VerifyReport verify_into(const EndNeighborhood& U, const TranslationPlan& plan,
                         const std::vector<LPoint>& samples);

// Degree bookkeeping for the two-round zero-cycle argument: the products of
// the extension degrees of the two rounds must be coprime, so the two
// effective cycles they produce combine to a cycle of degree one.
struct ZeroCycleDegrees {
  Int d1;
  Int d2;
  Int g;  // gcd(d1, d2), 1 on success
};

ZeroCycleDegrees zero_cycle_degrees(const std::vector<long>& first,
                                    const std::vector<long>& second);

}  // namespace berk
