#pragma once

// Brute-force reference implementations used to freeze expected values.
// Everything here is deliberately naive: exhaustive search over small
// moduli, no lifting tricks, so results are independent of the library.

#include <cstdint>
#include <set>
#include <vector>

namespace oracle {

// Squares mod m as a membership table, split by whether some square root
// is a unit mod p (needed for primitivity bookkeeping).
struct SquareTables {
  std::vector<char> any;        // exists z with z^2 = w (mod m)
  std::vector<char> unit_root;  // exists such z with z % p != 0
};

inline SquareTables square_tables(long m, long p) {
  SquareTables t;
  t.any.assign(static_cast<size_t>(m), 0);
  t.unit_root.assign(static_cast<size_t>(m), 0);
  for (long z = 0; z < m; ++z) {
    long w = z * z % m;
    t.any[static_cast<size_t>(w)] = 1;
    if (z % p != 0) t.unit_root[static_cast<size_t>(w)] = 1;
  }
  return t;
}

// Does a x^2 + b y^2 = z^2 have a primitive solution mod p^3?  For
// square-class-reduced a, b (valuation 0 or 1) this decides the Hilbert
// symbol: +1 exactly when a primitive solution exists.
inline bool hilbert_zero_mod_p3(long a, long b, long p) {
  long m = p * p * p;
  a = ((a % m) + m) % m;
  b = ((b % m) + m) % m;
  auto tables = square_tables(m, p);
  for (long x = 0; x < m; ++x)
    for (long y = 0; y < m; ++y) {
      long w = (a * x % m * x % m + b * y % m * y % m) % m;
      bool xy_unit = (x % p != 0) || (y % p != 0);
      if (xy_unit ? tables.any[static_cast<size_t>(w)]
                  : tables.unit_root[static_cast<size_t>(w)])
        return true;
    }
  return false;
}

// Squares mod m, as a set (for freezing tiny square-root cases by hand).
inline std::set<long> squares_mod(long m) {
  std::set<long> s;
  for (long x = 0; x < m; ++x) s.insert(x * x % m);
  return s;
}

// Plain odometer over all vectors mod p^k: is there a primitive zero of
// sum c_i x_i^2?  No lifting, no value-set tricks.
inline bool naive_primitive_zero(const std::vector<long>& c, long p, long k) {
  long m = 1;
  for (long i = 0; i < k; ++i) m *= p;
  std::vector<long> x(c.size(), 0);
  for (;;) {
    std::size_t pos = 0;
    while (pos < x.size() && x[pos] == m - 1) x[pos++] = 0;
    if (pos == x.size()) return false;
    ++x[pos];
    bool unit = false;
    long s = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      long ci = ((c[i] % m) + m) % m;
      s = (s + ci * (x[i] * x[i] % m)) % m;
      if (x[i] % p != 0) unit = true;
    }
    if (unit && s == 0) return true;
  }
}

}  // namespace oracle
