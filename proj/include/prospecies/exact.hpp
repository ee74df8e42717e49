#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace prospecies {

// Error taxonomy shared by the whole library.  `kind` is a stable machine
// readable tag; the CLI maps ParseError to exit code 2 and everything else
// to exit code 1.
class Error : public std::runtime_error {
public:
  Error(std::string kind, const std::string& msg)
      : std::runtime_error(kind + ": " + msg), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

private:
  std::string kind_;
};

[[noreturn]] inline void fail(const std::string& kind, const std::string& msg) {
  throw Error(kind, msg);
}

inline void require(bool cond, const std::string& kind, const std::string& msg) {
  if (!cond) fail(kind, msg);
}

// Exact scalar.  Rational when the ambient field has characteristic 0,
// otherwise a canonical residue in [0, p) with denominator 1.
using Scalar = mpq_class;

// The scalar field: rationals (p == 0) or F_p for prime p.  All arithmetic
// on scalars goes through the field so residues stay canonical.
struct FieldSpec {
  long p = 0;

  bool rational() const { return p == 0; }

  bool operator==(const FieldSpec& o) const { return p == o.p; }
  bool operator!=(const FieldSpec& o) const { return p != o.p; }

  Scalar zero() const { return Scalar(0); }
  Scalar one() const { return Scalar(1); }

  Scalar normalize(const Scalar& a) const {
    if (rational()) return a;
    mpz_class num = a.get_num();
    if (a.get_den() != 1) {
      // Residues always have denominator 1; division happens through inv().
      mpz_class den = a.get_den();
      mpz_class deninv = mod_inverse(den);
      num = num * deninv;
    }
    mpz_class r = num % p;
    if (r < 0) r += p;
    return Scalar(r);
  }

  Scalar add(const Scalar& a, const Scalar& b) const {
    Scalar r = a + b;
    return rational() ? r : normalize(r);
  }
  Scalar sub(const Scalar& a, const Scalar& b) const {
    Scalar r = a - b;
    return rational() ? r : normalize(r);
  }
  Scalar mul(const Scalar& a, const Scalar& b) const {
    Scalar r = a * b;
    return rational() ? r : normalize(r);
  }
  Scalar neg(const Scalar& a) const {
    Scalar r = -a;
    return rational() ? r : normalize(r);
  }
  Scalar inv(const Scalar& a) const {
    require(a != 0, "DivisionByZero", "inverse of zero");
    if (rational()) return Scalar(1) / a;
    return Scalar(mod_inverse(normalize(a).get_num()));
  }
  Scalar div(const Scalar& a, const Scalar& b) const { return mul(a, inv(b)); }

  Scalar from_long(long n) const { return normalize(Scalar(n)); }

  // Accepts "n" or "n/d"; residues are reduced mod p.
  Scalar parse(const std::string& s) const {
    try {
      Scalar v(s);
      v.canonicalize();
      if (!rational()) require(v.get_den() % p != 0, "DivisionByZero",
                               "denominator divisible by " + std::to_string(p));
      return normalize(v);
    } catch (const std::invalid_argument&) {
      fail("ParseError", "bad scalar literal '" + s + "'");
    }
  }

  std::string to_string(const Scalar& a) const { return a.get_str(); }

private:
  mpz_class mod_inverse(const mpz_class& a) const {
    mpz_class r, m(p);
    int ok = mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    require(ok != 0, "DivisionByZero", "no inverse mod " + std::to_string(p));
    return r;
  }
};

inline FieldSpec rationals() { return FieldSpec{0}; }

inline bool is_prime(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline FieldSpec prime_field(long p) {
  require(is_prime(p), "NotPrime", "prime_field(" + std::to_string(p) + ")");
  return FieldSpec{p};
}

using Vec = std::vector<Scalar>;

}  // namespace prospecies
