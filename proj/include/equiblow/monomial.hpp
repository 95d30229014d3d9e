#ifndef EQUIBLOW_MONOMIAL_HPP
#define EQUIBLOW_MONOMIAL_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "equiblow/errors.hpp"

namespace equiblow {

using Exponent = std::int64_t;

/// Cap on any single exponent. Operations that would push an exponent past
/// the cap throw ExponentOverflowError instead of producing nonsense.
/// Default is 2^31; tests may lower it.
Exponent exponent_cap();
void set_exponent_cap(Exponent cap);

/// A monomial in a fixed polynomial ring, stored as its exponent vector.
/// Immutable after construction; all exponents are >= 0 and <= the cap.
class Monomial {
 public:
  explicit Monomial(std::vector<Exponent> exponents);
  static Monomial unit(int arity);  // the monomial 1

  int arity() const { return static_cast<int>(exponents_.size()); }
  Exponent operator[](int i) const { return exponents_[static_cast<size_t>(i)]; }
  const std::vector<Exponent>& exponents() const { return exponents_; }
  Exponent degree() const;      // total degree
  bool is_unit() const;         // all exponents zero

  friend bool operator==(const Monomial& a, const Monomial& b) {
    return a.exponents_ == b.exponents_;
  }
  friend bool operator!=(const Monomial& a, const Monomial& b) { return !(a == b); }

 private:
  std::vector<Exponent> exponents_;
};

Monomial mul(const Monomial& a, const Monomial& b);
Monomial pow(const Monomial& a, Exponent k);
bool divides(const Monomial& a, const Monomial& b);  // a | b
Monomial gcd(const Monomial& a, const Monomial& b);
Monomial lcm(const Monomial& a, const Monomial& b);
/// b / a. Requires divides(a, b).
Monomial quotient(const Monomial& b, const Monomial& a);

/// Canonical storage order: graded-lex, higher degree first, ties broken by
/// the lexicographically larger exponent vector first. Gives every ideal a
/// unique generator sequence, so equal ideals serialize byte-equal.
bool grlex_before(const Monomial& a, const Monomial& b);

/// A monomial ideal, held as its unique minimal generating set in canonical
/// order. The zero ideal is not representable: constructing from an empty
/// generator list throws ZeroIdealError.
class MonomialIdeal {
 public:
  explicit MonomialIdeal(std::vector<Monomial> generators);
  static MonomialIdeal unit(int arity);  // the whole ring, generated by 1

  int arity() const { return arity_; }
  const std::vector<Monomial>& generators() const { return generators_; }
  bool is_unit() const;

  friend bool operator==(const MonomialIdeal& a, const MonomialIdeal& b) {
    return a.generators_ == b.generators_;
  }
  friend bool operator!=(const MonomialIdeal& a, const MonomialIdeal& b) {
    return !(a == b);
  }

 private:
  int arity_;
  std::vector<Monomial> generators_;
};

/// Drop every generator divisible by another; dedupe; sort canonically.
MonomialIdeal minimalize(std::vector<Monomial> generators);

MonomialIdeal sum(const MonomialIdeal& a, const MonomialIdeal& b);
MonomialIdeal intersect(const MonomialIdeal& a, const MonomialIdeal& b);

/// Ideal quotient a : b = { m : m*b ⊆ a }. For monomial ideals this is the
/// intersection over generators f of b of ({ g / gcd(g, f) : g in a }).
MonomialIdeal colon(const MonomialIdeal& a, const MonomialIdeal& b);

/// m lies in the ideal iff some generator divides m.
bool membership(const Monomial& m, const MonomialIdeal& ideal);

/// Factor the ideal as g * R with g the gcd of all generators and R the
/// residual ideal; R's generators have trivial common divisor.
std::pair<Monomial, MonomialIdeal> gcd_and_residual(const MonomialIdeal& ideal);

/// True iff the ideal is principal, i.e. the residual is the unit ideal
/// (equivalently: one generator divides all the others).
bool is_locally_principal(const MonomialIdeal& ideal);

/// Deterministic total order on ideals of equal arity (lexicographic on the
/// canonical generator sequences). Used to consume collections as canonical
/// multisets.
bool ideal_before(const MonomialIdeal& a, const MonomialIdeal& b);

}  // namespace equiblow

#endif  // EQUIBLOW_MONOMIAL_HPP
