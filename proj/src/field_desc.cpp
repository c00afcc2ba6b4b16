#include "berk/field_desc.hpp"

namespace berk {

std::string BaseFieldDesc::str() const {
  std::string s;
  switch (kind) {
    case Kind::FiniteField:
      s = "F_" + std::to_string(p);
      if (degree > 1) s += "^" + std::to_string(degree);
      break;
    case Kind::PAdicRationals:
      s = "Q_" + std::to_string(p);
      break;
    case Kind::PAdicExtension:
      s = "degree-" + std::to_string(degree) + " extension of Q_" +
          std::to_string(p);
      break;
    case Kind::RationalFunctionField:
      s = "F_" + std::to_string(p) + "(" + (coordinate.empty() ? "t" : coordinate) +
          ")";
      break;
    case Kind::Unknown:
      s = "unknown field";
      break;
  }
  if (!note.empty()) s += " [" + note + "]";
  return s;
}

}  // namespace berk
