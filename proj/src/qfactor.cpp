#include "berk/qfactor.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace berk {

namespace {

// ---- arithmetic over F_ell (ell a small odd prime) ----

using FlPoly = std::vector<long>;  // little-endian, no trailing zeros

void fl_norm(FlPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

long fl_deg(const FlPoly& f) { return static_cast<long>(f.size()) - 1; }

FlPoly fl_mul(const FlPoly& a, const FlPoly& b, long ell) {
  if (a.empty() || b.empty()) return {};
  FlPoly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j)
      r[i + j] = (r[i + j] + a[i] * b[j]) % ell;
  fl_norm(r);
  return r;
}

long fl_inv(long a, long ell) {
  long r = 1, b = a % ell, e = ell - 2;
  if (b < 0) b += ell;
  while (e) {
    if (e & 1) r = r * b % ell;
    b = b * b % ell;
    e >>= 1;
  }
  return r;
}

// divmod with nonzero divisor
std::pair<FlPoly, FlPoly> fl_divmod(FlPoly a, const FlPoly& b, long ell) {
  FlPoly q;
  long ib = fl_inv(b.back(), ell);
  while (fl_deg(a) >= fl_deg(b)) {
    long k = fl_deg(a) - fl_deg(b);
    long c = a.back() * ib % ell;
    if (static_cast<long>(q.size()) < k + 1) q.resize(k + 1, 0);
    q[k] = (q[k] + c) % ell;
    for (size_t i = 0; i < b.size(); ++i) {
      size_t idx = i + k;
      a[idx] = ((a[idx] - c * b[i]) % ell + ell) % ell;
    }
    fl_norm(a);
    if (a.empty()) break;
  }
  fl_norm(q);
  return {q, a};
}

FlPoly fl_gcd(FlPoly a, FlPoly b, long ell) {
  while (!b.empty()) {
    FlPoly r = fl_divmod(a, b, ell).second;
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    long inv = fl_inv(a.back(), ell);
    for (auto& c : a) c = c * inv % ell;
  }
  return a;
}

FlPoly fl_deriv(const FlPoly& f, long ell) {
  if (f.size() <= 1) return {};
  FlPoly r(f.size() - 1);
  for (size_t i = 1; i < f.size(); ++i)
    r[i - 1] = static_cast<long>(i % ell) * f[i] % ell;
  fl_norm(r);
  return r;
}

// Monic irreducibles of exact degree d over F_ell, cached.
const std::vector<FlPoly>& irreducibles(long ell, long d) {
  static std::map<std::pair<long, long>, std::vector<FlPoly>> cache;
  auto key = std::make_pair(ell, d);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<FlPoly> out;
  std::vector<long> digits(static_cast<size_t>(d), 0);
  while (true) {
    FlPoly f(digits);
    f.push_back(1);  // monic
    bool irred = true;
    for (long e = 1; irred && 2 * e <= d; ++e)
      for (const auto& m : irreducibles(ell, e)) {
        if (fl_divmod(f, m, ell).second.empty()) {
          irred = false;
          break;
        }
      }
    if (irred) out.push_back(std::move(f));
    long i = 0;
    while (i < d && ++digits[static_cast<size_t>(i)] == ell)
      digits[static_cast<size_t>(i++)] = 0;
    if (i == d) break;
  }
  return cache.emplace(key, std::move(out)).first->second;
}

// Distinct monic irreducible factors of a squarefree polynomial.
std::vector<FlPoly> fl_factor_squarefree(FlPoly f, long ell) {
  std::vector<FlPoly> out;
  long inv = fl_inv(f.back(), ell);
  for (auto& c : f) c = c * inv % ell;
  for (long d = 1; 2 * d <= fl_deg(f); ++d) {
    for (const auto& m : irreducibles(ell, d)) {
      if (fl_deg(f) < 2 * d) break;
      auto [q, r] = fl_divmod(f, m, ell);
      if (r.empty()) {
        out.push_back(m);
        f = q;
      }
    }
  }
  if (fl_deg(f) >= 1) out.push_back(f);
  return out;
}

// ---- integer polynomials mod ell^K ----

using ZPoly = std::vector<Int>;

void z_norm(ZPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

ZPoly z_from_fl(const FlPoly& f) {
  ZPoly r(f.size());
  for (size_t i = 0; i < f.size(); ++i) r[i] = f[i];
  return r;
}

ZPoly z_mod(ZPoly f, const Int& m) {
  for (auto& c : f) {
    c %= m;
    if (c < 0) c += m;
  }
  z_norm(f);
  return f;
}

ZPoly z_balanced(ZPoly f, const Int& m) {
  for (auto& c : f) {
    c %= m;
    if (c < 0) c += m;
    if (2 * c > m) c -= m;
  }
  z_norm(f);
  return f;
}

ZPoly z_mul_mod(const ZPoly& a, const ZPoly& b, const Int& m) {
  if (a.empty() || b.empty()) return {};
  ZPoly r(a.size() + b.size() - 1, Int(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % m;
  z_norm(r);
  return r;
}

ZPoly z_sub(const ZPoly& a, const ZPoly& b) {
  ZPoly r(std::max(a.size(), b.size()), Int(0));
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  z_norm(r);
  return r;
}

FlPoly fl_from_z(const ZPoly& f, long ell) {
  FlPoly r(f.size());
  for (size_t i = 0; i < f.size(); ++i) {
    Int c = f[i] % ell;
    if (c < 0) c += ell;
    r[i] = c.convert_to<long>();
  }
  fl_norm(r);
  return r;
}

// Bezout pair s*a + t*b = 1 over F_ell for coprime a, b.
std::pair<FlPoly, FlPoly> fl_bezout(const FlPoly& a, const FlPoly& b, long ell) {
  FlPoly r0 = a, r1 = b, s0{1}, s1{}, t0{}, t1{1};
  auto sub_mul = [&](const FlPoly& x, const FlPoly& q, const FlPoly& y) {
    FlPoly qy = fl_mul(q, y, ell);
    FlPoly r(std::max(x.size(), qy.size()), 0);
    for (size_t i = 0; i < x.size(); ++i) r[i] = x[i];
    for (size_t i = 0; i < qy.size(); ++i) r[i] = ((r[i] - qy[i]) % ell + ell) % ell;
    fl_norm(r);
    return r;
  };
  while (!r1.empty()) {
    auto [q, r2] = fl_divmod(r0, r1, ell);
    FlPoly s2 = sub_mul(s0, q, s1), t2 = sub_mul(t0, q, t1);
    r0 = std::move(r1); r1 = std::move(r2);
    s0 = std::move(s1); s1 = std::move(s2);
    t0 = std::move(t1); t1 = std::move(t2);
  }
  if (fl_deg(r0) != 0) throw std::logic_error("fl_bezout: inputs not coprime");
  long inv = fl_inv(r0[0], ell);
  for (auto& c : s0) c = c * inv % ell;
  for (auto& c : t0) c = c * inv % ell;
  return {s0, t0};
}

// Linear Hensel lift of f = G*H from mod ell to mod ell^K; G stays monic.
std::pair<ZPoly, ZPoly> hensel_pair(const ZPoly& f, FlPoly g0, FlPoly h0,
                                    long ell, long K) {
  auto [s, t] = fl_bezout(g0, h0, ell);
  ZPoly G = z_from_fl(g0), H = z_from_fl(h0);
  Int mj(ell);
  for (long j = 1; j < K; ++j) {
    Int mj1 = mj * ell;
    ZPoly e = z_mod(z_sub(z_mod(f, mj1), z_mul_mod(G, H, mj1)), mj1);
    // e is divisible by ell^j
    FlPoly ebar(e.size());
    for (size_t i = 0; i < e.size(); ++i)
      ebar[i] = Int(e[i] / mj % ell).convert_to<long>();
    fl_norm(ebar);
    FlPoly dg = fl_divmod(fl_mul(t, ebar, ell), g0, ell).second;
    FlPoly num = ebar;
    {
      FlPoly dgh = fl_mul(dg, h0, ell);
      FlPoly r(std::max(num.size(), dgh.size()), 0);
      for (size_t i = 0; i < num.size(); ++i) r[i] = num[i];
      for (size_t i = 0; i < dgh.size(); ++i)
        r[i] = ((r[i] - dgh[i]) % ell + ell) % ell;
      fl_norm(r);
      num = std::move(r);
    }
    auto [dh, rem] = fl_divmod(num, g0, ell);
    if (!rem.empty()) throw std::logic_error("hensel_pair: lift failed");
    ZPoly zg = z_from_fl(dg), zh = z_from_fl(dh);
    G.resize(std::max(G.size(), zg.size()), Int(0));
    for (size_t i = 0; i < zg.size(); ++i) G[i] = (G[i] + mj * zg[i]) % mj1;
    H.resize(std::max(H.size(), zh.size()), Int(0));
    for (size_t i = 0; i < zh.size(); ++i) H[i] = (H[i] + mj * zh[i]) % mj1;
    z_norm(G);
    z_norm(H);
    mj = mj1;
  }
  return {z_mod(G, mj), z_mod(H, mj)};
}

// Lift all modular factors of f (squarefree mod ell) to mod ell^K.
std::vector<ZPoly> lift_tree(const ZPoly& f, const std::vector<FlPoly>& gs,
                             long ell, long K, const Int& mK) {
  if (gs.size() == 1) {
    // f = lc * g with g monic mod ell^K
    ZPoly g = z_mod(f, mK);
    Int inv = inv_mod(g.back(), mK);
    for (auto& c : g) c = c * inv % mK;
    return {g};
  }
  size_t half = gs.size() / 2;
  FlPoly g0{1};
  for (size_t i = 0; i < half; ++i) g0 = fl_mul(g0, gs[i], ell);
  FlPoly fbar = fl_from_z(f, ell);
  auto [h0, rem] = fl_divmod(fbar, g0, ell);
  if (!rem.empty()) throw std::logic_error("lift_tree: bad split");
  auto [G, H] = hensel_pair(f, g0, h0, ell, K);
  std::vector<FlPoly> left(gs.begin(), gs.begin() + half),
      right(gs.begin() + half, gs.end());
  auto a = lift_tree(G, left, ell, K, mK);
  auto b = lift_tree(H, right, ell, K, mK);
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

// ---- recombination ----

std::optional<std::vector<Int>> try_divide(const std::vector<Int>& f,
                                           const std::vector<Int>& g) {
  // exact division over Z; g nonzero
  std::vector<Int> r = f, q(f.size(), Int(0));
  while (r.size() >= g.size() && !(r.size() == 1 && r[0] == 0)) {
    if (r.back() % g.back() != 0) return std::nullopt;
    Int c = r.back() / g.back();
    size_t k = r.size() - g.size();
    q[k] = c;
    for (size_t i = 0; i < g.size(); ++i) r[i + k] -= c * g[i];
    while (!r.empty() && r.back() == 0) r.pop_back();
    if (r.empty()) {
      q.resize(f.size() - g.size() + 1);
      return q;
    }
  }
  return std::nullopt;
}

QPoly qpoly_from_z(const std::vector<Int>& f) {
  std::vector<Rat> c(f.size());
  for (size_t i = 0; i < f.size(); ++i) c[i] = Rat(f[i]);
  return QPoly(std::move(c));
}

std::vector<Int> primitive_part(std::vector<Int> f) {
  Int g(0);
  for (const auto& c : f) g = boost::multiprecision::gcd(g, c);
  if (f.back() < 0) g = -g;
  for (auto& c : f) c /= g;
  return f;
}

// Factor a primitive squarefree integer polynomial of degree >= 1.
std::vector<QPoly> factor_squarefree_z(std::vector<Int> f) {
  if (f.size() == 2) return {qpoly_from_z(f).monic()};
  long ell = 0;
  std::vector<FlPoly> best;
  for (long cand : {3, 5, 7, 11, 13, 17, 19, 23, 29, 31}) {
    if (f.back() % cand == 0) continue;
    ZPoly zf(f.begin(), f.end());
    FlPoly fbar = fl_from_z(zf, cand);
    if (fl_deg(fbar) != static_cast<long>(f.size()) - 1) continue;
    if (fl_deg(fl_gcd(fbar, fl_deriv(fbar, cand), cand)) != 0) continue;
    auto fac = fl_factor_squarefree(fbar, cand);
    if (best.empty() || fac.size() < best.size()) {
      best = std::move(fac);
      ell = cand;
      if (best.size() == 1) break;
    }
  }
  if (ell == 0) throw std::logic_error("factor: no good prime found");
  if (best.size() == 1) return {qpoly_from_z(f).monic()};

  // Coefficient bound: factors of f (times lc) have 1-norm below
  // 2^deg * ||f||_1 * |lc|.
  Int norm1(0);
  for (const auto& c : f) norm1 += boost::multiprecision::abs(c);
  Int bound = (Int(1) << (f.size() - 1)) * norm1 *
              boost::multiprecision::abs(f.back());
  long K = 1;
  Int mK(ell);
  while (mK <= 2 * bound) {
    mK *= ell;
    ++K;
  }

  ZPoly zf(f.begin(), f.end());
  std::vector<ZPoly> lifted = lift_tree(z_mod(zf, mK), best, ell, K, mK);

  std::vector<QPoly> out;
  std::vector<ZPoly> pool = lifted;
  std::vector<Int> rem = f;
  bool restart = true;
  while (restart) {
    restart = false;
    size_t n = pool.size();
    for (size_t size = 1; size <= n / 2 && !restart; ++size) {
      std::vector<size_t> idx(size);
      std::iota(idx.begin(), idx.end(), 0);
      while (true) {
        ZPoly prod{Int(rem.back())};
        for (size_t i : idx) prod = z_mul_mod(prod, pool[i], mK);
        std::vector<Int> cand = z_balanced(prod, mK);
        if (!cand.empty()) {
          cand = primitive_part(cand);
          if (auto q = try_divide(rem, cand)) {
            out.push_back(qpoly_from_z(cand).monic());
            rem = primitive_part(*q);
            std::vector<ZPoly> np;
            for (size_t i = 0; i < n; ++i)
              if (std::find(idx.begin(), idx.end(), i) == idx.end())
                np.push_back(pool[i]);
            pool = std::move(np);
            restart = true;
            break;
          }
        }
        // next combination
        long i = static_cast<long>(size) - 1;
        while (i >= 0 && idx[static_cast<size_t>(i)] ==
                             n - size + static_cast<size_t>(i))
          --i;
        if (i < 0) break;
        ++idx[static_cast<size_t>(i)];
        for (size_t j = static_cast<size_t>(i) + 1; j < size; ++j)
          idx[j] = idx[j - 1] + 1;
      }
    }
  }
  if (rem.size() > 1) out.push_back(qpoly_from_z(rem).monic());
  return out;
}

}  // namespace

QFactorization factor_over_q(const QPoly& f) {
  if (f.is_zero()) throw std::invalid_argument("factor_over_q: zero input");
  if (f.degree() > kMaxFactorDegree)
    throw std::invalid_argument(
        "factor_over_q: degree above supported bound (8)");
  QFactorization res;
  res.unit = f.leading();
  if (f.degree() == 0) return res;

  // Yun squarefree decomposition of the monic part.
  QPoly m = f.monic();
  QPoly d = m.derivative();
  QPoly a = gcd(m, d);
  QPoly b = m.divmod(a).first;
  QPoly c = d.divmod(a).first;
  long i = 1;
  while (b.degree() >= 1) {
    QPoly z = c - b.derivative();
    QPoly s = gcd(b, z);
    if (s.degree() >= 1) {
      auto [g, rat] = s.primitive_integral();
      (void)rat;
      for (auto& q : factor_squarefree_z(std::move(g)))
        res.factors.emplace_back(q, i);
    }
    b = b.divmod(s).first;
    c = z.divmod(s).first;
    ++i;
  }
  std::sort(res.factors.begin(), res.factors.end(),
            [](const auto& x, const auto& y) {
              if (x.first.degree() != y.first.degree())
                return x.first.degree() < y.first.degree();
              for (long k = x.first.degree(); k >= 0; --k)
                if (x.first[k] != y.first[k]) return x.first[k] < y.first[k];
              return false;
            });
  return res;
}

bool is_irreducible_over_q(const QPoly& f) {
  if (f.degree() < 1) return false;
  auto fac = factor_over_q(f);
  return fac.factors.size() == 1 && fac.factors[0].second == 1;
}

}  // namespace berk
