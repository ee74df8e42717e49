#include "prospecies/polytools.hpp"

#include <algorithm>

namespace prospecies {

int Poly::degree() const {
  for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i)
    if (c[i] != 0) return i;
  return -1;
}

Scalar Poly::lead() const {
  int d = degree();
  require(d >= 0, "BadArgument", "leading coefficient of zero polynomial");
  return c[d];
}

void Poly::trim() {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

Poly poly_from(FieldSpec f, std::vector<Scalar> coeffs) {
  for (Scalar& s : coeffs) s = f.rational() ? s : f.normalize(s);
  Poly p{f, std::move(coeffs)};
  p.trim();
  return p;
}

Poly poly_zero(FieldSpec f) { return Poly{f, {}}; }

Poly poly_x(FieldSpec f) { return Poly{f, {f.zero(), f.one()}}; }

Poly poly_const(FieldSpec f, const Scalar& a) {
  return poly_from(f, {a});
}

Poly poly_add(const Poly& a, const Poly& b) {
  Poly r{a.f, {}};
  r.c.resize(std::max(a.c.size(), b.c.size()), a.f.zero());
  for (size_t i = 0; i < r.c.size(); ++i) {
    Scalar x = i < a.c.size() ? a.c[i] : a.f.zero();
    Scalar y = i < b.c.size() ? b.c[i] : a.f.zero();
    r.c[i] = a.f.add(x, y);
  }
  r.trim();
  return r;
}

Poly poly_sub(const Poly& a, const Poly& b) {
  return poly_add(a, poly_scale(a.f.neg(a.f.one()), b));
}

Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return poly_zero(a.f);
  Poly r{a.f, std::vector<Scalar>(a.c.size() + b.c.size() - 1, a.f.zero())};
  for (size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i] == 0) continue;
    for (size_t j = 0; j < b.c.size(); ++j) {
      if (b.c[j] == 0) continue;
      r.c[i + j] = a.f.add(r.c[i + j], a.f.mul(a.c[i], b.c[j]));
    }
  }
  r.trim();
  return r;
}

Poly poly_scale(const Scalar& s, const Poly& a) {
  Poly r = a;
  for (Scalar& x : r.c) x = a.f.mul(s, x);
  r.trim();
  return r;
}

std::pair<Poly, Poly> poly_divmod(const Poly& a, const Poly& b) {
  require(!b.is_zero(), "DivisionByZero", "polynomial division by zero");
  const FieldSpec f = a.f;
  Poly rem = a;
  int db = b.degree();
  Scalar linv = f.inv(b.lead());
  Poly quot{f, {}};
  int da = rem.degree();
  if (da >= db) quot.c.resize(da - db + 1, f.zero());
  while ((da = rem.degree()) >= db) {
    Scalar coef = f.mul(rem.c[da], linv);
    quot.c[da - db] = coef;
    for (int i = 0; i <= db; ++i)
      rem.c[da - db + i] = f.sub(rem.c[da - db + i], f.mul(coef, b.c[i]));
  }
  quot.trim();
  rem.trim();
  return {quot, rem};
}

Poly poly_monic(const Poly& a) {
  require(!a.is_zero(), "BadArgument", "monic of zero polynomial");
  return poly_scale(a.f.inv(a.lead()), a);
}

Poly poly_gcd(const Poly& a, const Poly& b) {
  Poly x = a, y = b;
  while (!y.is_zero()) {
    Poly r = poly_divmod(x, y).second;
    x = y;
    y = r;
  }
  if (x.is_zero()) return x;
  return poly_monic(x);
}

Poly poly_derivative(const Poly& a) {
  Poly r{a.f, {}};
  for (size_t i = 1; i < a.c.size(); ++i)
    r.c.push_back(a.f.mul(a.f.from_long(static_cast<long>(i)), a.c[i]));
  r.trim();
  return r;
}

Scalar poly_eval(const Poly& a, const Scalar& x) {
  Scalar r = a.f.zero();
  for (int i = a.degree(); i >= 0; --i) r = a.f.add(a.f.mul(r, x), a.c[i]);
  return r;
}

bool poly_is_squarefree(const Poly& a) {
  Poly d = poly_derivative(a);
  if (d.is_zero()) return a.degree() <= 0;
  return poly_gcd(a, d).degree() == 0;
}

Poly poly_powmod(const Poly& a, long e, const Poly& m) {
  require(e >= 0, "BadArgument", "negative exponent");
  Poly base = poly_divmod(a, m).second;
  Poly r = poly_const(a.f, a.f.one());
  while (e > 0) {
    if (e & 1) r = poly_divmod(poly_mul(r, base), m).second;
    base = poly_divmod(poly_mul(base, base), m).second;
    e >>= 1;
  }
  return r;
}

int count_irreducible_factors_mod_p(const Poly& m_in) {
  const FieldSpec f = m_in.f;
  require(!f.rational(), "BadArgument", "distinct-degree needs a prime field");
  Poly m = poly_monic(m_in);
  require(poly_is_squarefree(m), "BadArgument",
          "distinct-degree needs a squarefree input");
  int count = 0;
  Poly work = m;
  Poly h = poly_x(f);
  for (int d = 1; 2 * d <= work.degree(); ++d) {
    h = poly_powmod(h, f.p, work);  // h = x^{p^d} mod work
    Poly g = poly_gcd(poly_sub(h, poly_x(f)), work);
    if (g.degree() > 0) {
      count += g.degree() / d;
      work = poly_divmod(work, g).first;
      h = poly_divmod(h, work).second;
    }
    if (work.degree() == 0) break;
  }
  if (work.degree() > 0) ++count;
  return count;
}

namespace {

// Splits a squarefree monic product of irreducibles of the same degree d
// over F_p with a deterministic sweep of gcd(m, (x+c)^{(p^d-1)/2} - 1).
std::optional<Poly> equal_degree_split(const Poly& m, int d) {
  const FieldSpec f = m.f;
  if (m.degree() == d) return std::nullopt;
  if (f.p == 2) {
    // Trace-map splitting: gcd(m, a + a^2 + ... + a^{2^{d-1}}) over a sweep
    // of small polynomials a.
    for (long it = 0; it < 128; ++it) {
      int k = 1 + static_cast<int>(it / 2) % std::max(1, m.degree() - 1);
      std::vector<Scalar> cc(k + 1, f.zero());
      cc[0] = f.from_long(it % 2);
      cc[k] = f.one();
      Poly a = poly_from(f, cc);
      Poly t = poly_zero(f);
      Poly term = poly_divmod(a, m).second;
      for (int i = 0; i < d; ++i) {
        t = poly_add(t, term);
        term = poly_divmod(poly_mul(term, term), m).second;
      }
      Poly g = poly_gcd(t, m);
      if (g.degree() > 0 && g.degree() < m.degree()) return poly_monic(g);
    }
    return std::nullopt;
  }
  mpz_class e;
  mpz_ui_pow_ui(e.get_mpz_t(), static_cast<unsigned long>(f.p),
                static_cast<unsigned long>(d));
  e = (e - 1) / 2;
  for (long c = 0; c < 256; ++c) {
    Poly a = poly_from(f, {f.from_long(c), f.one()});
    // a^e mod m with a big-integer exponent
    Poly base = poly_divmod(a, m).second;
    Poly r = poly_const(f, f.one());
    mpz_class ee = e;
    while (ee > 0) {
      if (mpz_odd_p(ee.get_mpz_t()))
        r = poly_divmod(poly_mul(r, base), m).second;
      base = poly_divmod(poly_mul(base, base), m).second;
      ee >>= 1;
    }
    Poly g = poly_gcd(poly_sub(r, poly_const(f, f.one())), m);
    if (g.degree() > 0 && g.degree() < m.degree()) return poly_monic(g);
  }
  return std::nullopt;
}

}  // namespace

std::optional<Poly> factor_mod_p(const Poly& m_in) {
  const FieldSpec f = m_in.f;
  Poly m = poly_monic(m_in);
  if (m.degree() <= 1) return std::nullopt;
  Poly h = poly_x(f);
  for (int d = 1; 2 * d <= m.degree(); ++d) {
    h = poly_powmod(h, f.p, m);  // h = x^{p^d} mod m
    Poly g = poly_gcd(poly_sub(h, poly_x(f)), m);
    if (g.degree() > 0) {
      if (g.degree() < m.degree()) {
        if (g.degree() == d) return g;  // single irreducible of degree d
        auto piece = equal_degree_split(g, d);
        return piece ? piece : std::optional<Poly>(g);
      }
      // the whole polynomial is a product of degree-d irreducibles
      return equal_degree_split(g, d);
    }
  }
  return std::nullopt;
}

namespace {

std::vector<mpz_class> bounded_divisors(const mpz_class& n_in, size_t cap) {
  mpz_class n = abs(n_in);
  std::vector<mpz_class> out;
  if (n == 0) return out;
  for (mpz_class d = 1; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      mpz_class q = n / d;
      if (q != d) out.push_back(q);
      if (out.size() > cap) return {};  // too many candidates, give up
    }
    if (d > 100000) return {};  // trial bound exceeded
  }
  return out;
}

}  // namespace

std::optional<Scalar> rational_root(const Poly& a_in) {
  require(a_in.f.rational(), "BadArgument", "rational_root over F_p");
  Poly a = a_in;
  if (a.is_zero()) return std::nullopt;
  // strip powers of x: zero constant term means root 0
  if (a.c[0] == 0) return Scalar(0);
  // clear denominators
  mpz_class den(1);
  for (const Scalar& s : a.c) {
    mpz_class d = s.get_den();
    den = den * d / gcd(den, d);
  }
  std::vector<mpz_class> ic;
  for (const Scalar& s : a.c) {
    Scalar t = s * Scalar(den);
    ic.push_back(t.get_num());
  }
  auto nums = bounded_divisors(ic.front(), 2000);
  auto dens = bounded_divisors(ic.back(), 2000);
  if (nums.empty() || dens.empty()) return std::nullopt;
  for (const mpz_class& n : nums)
    for (const mpz_class& d : dens)
      for (int sgn : {1, -1}) {
        Scalar cand(sgn * n, d);
        cand.canonicalize();
        if (poly_eval(a, cand) == 0) return cand;
      }
  return std::nullopt;
}

std::optional<std::pair<Poly, Poly>> quartic_quadratic_split(const Poly& q) {
  const FieldSpec f = q.f;
  require(f.rational(), "BadArgument", "quartic split over F_p");
  if (q.degree() != 4) return std::nullopt;
  Poly m = poly_monic(q);
  Scalar a = m.c[3], b = m.c[2], c = m.c[1], d = m.c[0];
  // resolvent cubic in y = q + s for (x^2+px+q)(x^2+rx+s)
  Poly res = poly_from(
      f, {f.neg(a * a * d - Scalar(4) * b * d + c * c),
          a * c - Scalar(4) * d, f.neg(b), f.one()});
  // try rational roots of the resolvent, including repeated extraction
  Poly work = res;
  for (int tries = 0; tries < 3; ++tries) {
    auto y = rational_root(work);
    if (!y) break;
    Scalar disc = a * a - Scalar(4) * (b - *y);
    auto sq = field_sqrt(f, disc);
    if (sq) {
      Scalar p = (a + *sq) / 2;
      Scalar r = (a - *sq) / 2;
      // solve q + s = y, ps + qr = c
      Scalar qq, ss;
      if (p != r) {
        ss = (c - r * *y) / (p - r);
        qq = *y - ss;
      } else {
        // p == r: need c == p*y and qs == d with q+s = y
        if (c != p * *y) {
          work = poly_divmod(work, poly_from(f, {f.neg(*y), f.one()})).first;
          continue;
        }
        auto sq2 = field_sqrt(f, *y * *y - Scalar(4) * d);
        if (!sq2) {
          work = poly_divmod(work, poly_from(f, {f.neg(*y), f.one()})).first;
          continue;
        }
        qq = (*y + *sq2) / 2;
        ss = (*y - *sq2) / 2;
      }
      if (qq * ss == d) {
        Poly f1 = poly_from(f, {qq, p, f.one()});
        Poly f2 = poly_from(f, {ss, r, f.one()});
        if (poly_sub(poly_mul(f1, f2), m).is_zero()) return {{f1, f2}};
      }
    }
    work = poly_divmod(work, poly_from(f, {f.neg(*y), f.one()})).first;
  }
  return std::nullopt;
}

bool irreducible_mod_some_prime(const Poly& a, long prime_bound) {
  require(a.f.rational(), "BadArgument", "reduction test needs rationals");
  if (a.degree() <= 0) return false;
  mpz_class den(1);
  for (const Scalar& s : a.c) {
    mpz_class d = s.get_den();
    den = den * d / gcd(den, d);
  }
  for (long p = 2; p <= prime_bound; ++p) {
    if (!is_prime(p)) continue;
    FieldSpec fp{p};
    // leading coefficient must stay nonzero mod p
    Scalar lead = a.lead() * Scalar(den);
    if (lead.get_num() % p == 0) continue;
    std::vector<Scalar> cc;
    for (const Scalar& s : a.c) cc.push_back(fp.normalize(s * Scalar(den)));
    Poly red = poly_from(fp, cc);
    if (red.degree() != a.degree()) continue;
    if (!poly_is_squarefree(red)) continue;
    if (count_irreducible_factors_mod_p(red) == 1) return true;
  }
  return false;
}

std::optional<Scalar> field_sqrt(FieldSpec f, const Scalar& a_in) {
  if (f.rational()) {
    Scalar a = a_in;
    if (a == 0) return Scalar(0);
    if (a < 0) return std::nullopt;
    mpz_class num = a.get_num(), den = a.get_den();
    if (mpz_perfect_square_p(num.get_mpz_t()) &&
        mpz_perfect_square_p(den.get_mpz_t())) {
      mpz_class rn, rd;
      mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
      mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
      Scalar r(rn, rd);
      r.canonicalize();
      return r;
    }
    return std::nullopt;
  }
  Scalar a = f.normalize(a_in);
  if (a == 0) return Scalar(0);
  require(f.p <= 1000003, "BadArgument", "square root scan bound exceeded");
  for (long t = 0; t < f.p; ++t) {
    Scalar cand(t);
    if (f.mul(cand, cand) == a) return cand;
  }
  return std::nullopt;
}

}  // namespace prospecies
