#pragma once

#include <optional>
#include <vector>

#include "prospecies/exact.hpp"

namespace prospecies {

// Polynomials are coefficient vectors over a FieldSpec, constant term first.
// All routines keep coefficients normalized through the field.
struct Poly {
  FieldSpec f;
  std::vector<Scalar> c;

  int degree() const;  // -1 for the zero polynomial
  bool is_zero() const { return degree() < 0; }
  Scalar lead() const;
  void trim();
};

Poly poly_from(FieldSpec f, std::vector<Scalar> coeffs);
Poly poly_zero(FieldSpec f);
Poly poly_x(FieldSpec f);
Poly poly_const(FieldSpec f, const Scalar& a);

Poly poly_add(const Poly& a, const Poly& b);
Poly poly_sub(const Poly& a, const Poly& b);
Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_scale(const Scalar& s, const Poly& a);
// Quotient and remainder by a nonzero divisor.
std::pair<Poly, Poly> poly_divmod(const Poly& a, const Poly& b);
Poly poly_monic(const Poly& a);
Poly poly_gcd(const Poly& a, const Poly& b);  // monic
Poly poly_derivative(const Poly& a);
Scalar poly_eval(const Poly& a, const Scalar& x);
bool poly_is_squarefree(const Poly& a);

// a^e mod m (m nonconstant).
Poly poly_powmod(const Poly& a, long e, const Poly& m);

// Number of irreducible factors of a squarefree monic polynomial over F_p,
// found by distinct-degree splitting with gcd(x^{p^d} - x, m).
int count_irreducible_factors_mod_p(const Poly& m);

// A monic nontrivial factor of a squarefree monic reducible polynomial over
// F_p (distinct-degree piece, refined by equal-degree splitting with a
// deterministic seed sweep); nullopt when irreducible.
std::optional<Poly> factor_mod_p(const Poly& m);

// Rational-coefficient helpers.
// A rational root of the polynomial, searched through divisors of the
// cleared-denominator constant and leading coefficients (divisor count
// capped, so absence of a result is not a proof for huge coefficients).
std::optional<Scalar> rational_root(const Poly& a);
// Monic quartic only: a rational split into two monic rational quadratics,
// found through rational roots of the resolvent cubic.
std::optional<std::pair<Poly, Poly>> quartic_quadratic_split(const Poly& a);
// True when some prime below the bound certifies irreducibility of the
// rational polynomial by reduction; false is inconclusive.
bool irreducible_mod_some_prime(const Poly& a, long prime_bound);

// Square testing in the field: exact for rationals, Euler criterion plus
// root scan for primes.
std::optional<Scalar> field_sqrt(FieldSpec f, const Scalar& a);

}  // namespace prospecies
