#pragma once

// Lightweight descriptors for the fields that verdicts and residues live in.

#include <cstdint>
#include <string>

namespace berk {

struct BaseFieldDesc {
  enum class Kind {
    FiniteField,            // F_{p^degree}
    PAdicRationals,         // Q_p (residue field F_p)
    PAdicExtension,         // finite extension of Q_p, degree recorded
    RationalFunctionField,  // F_p(t) with a normalized coordinate
    Unknown
  };

  Kind kind = Kind::Unknown;
  std::int64_t p = 0;
  long degree = 1;
  std::string coordinate;  // for function fields: what t reduces from
  std::string note;        // caveats (e.g. non-integer log-radius)

  std::string str() const;
};

}  // namespace berk
