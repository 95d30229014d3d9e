#ifndef EQUIBLOW_TESTS_HELPERS_HPP
#define EQUIBLOW_TESTS_HELPERS_HPP

#include <cstdint>
#include <vector>

#include "equiblow/monomial.hpp"

namespace testutil {

inline equiblow::Monomial mono(std::vector<equiblow::Exponent> e) {
  return equiblow::Monomial(std::move(e));
}

inline equiblow::MonomialIdeal ideal(
    std::vector<std::vector<equiblow::Exponent>> gens) {
  std::vector<equiblow::Monomial> ms;
  ms.reserve(gens.size());
  for (auto& g : gens) ms.emplace_back(std::move(g));
  return equiblow::MonomialIdeal(std::move(ms));
}

// Hand-rolled splitmix64 so random suites reproduce bit-for-bit everywhere;
// the standard library distributions are not pinned across implementations.
struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  std::uint64_t below(std::uint64_t n) { return next() % n; }
};

inline equiblow::MonomialIdeal random_ideal(SplitMix64& rng, int arity,
                                            int max_gens,
                                            equiblow::Exponent max_exp) {
  const int count = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_gens)));
  std::vector<equiblow::Monomial> gens;
  for (int g = 0; g < count; ++g) {
    std::vector<equiblow::Exponent> e(static_cast<std::size_t>(arity));
    for (auto& x : e)
      x = static_cast<equiblow::Exponent>(rng.below(static_cast<std::uint64_t>(max_exp) + 1));
    gens.emplace_back(std::move(e));
  }
  return equiblow::MonomialIdeal(std::move(gens));
}

// Exhaustive check over the exponent box [0..bound]^arity: the claimed result
// of an operation must have the same members as the pointwise definition.
// This is the independent ground truth the generator-level algorithms are
// measured against; it never looks at generators of `result` except through
// membership.
template <class Pred>
bool box_agrees(const equiblow::MonomialIdeal& result, int arity,
                equiblow::Exponent bound, Pred&& expected) {
  std::vector<equiblow::Exponent> e(static_cast<std::size_t>(arity), 0);
  for (;;) {
    equiblow::Monomial m{std::vector<equiblow::Exponent>(e)};
    if (equiblow::membership(m, result) != expected(m)) return false;
    int pos = 0;
    while (pos < arity && e[static_cast<std::size_t>(pos)] == bound) {
      e[static_cast<std::size_t>(pos)] = 0;
      ++pos;
    }
    if (pos == arity) return true;
    ++e[static_cast<std::size_t>(pos)];
  }
}

inline bool sum_box_oracle(const equiblow::MonomialIdeal& a,
                           const equiblow::MonomialIdeal& b,
                           const equiblow::MonomialIdeal& claimed,
                           equiblow::Exponent bound) {
  return box_agrees(claimed, a.arity(), bound, [&](const equiblow::Monomial& m) {
    return equiblow::membership(m, a) || equiblow::membership(m, b);
  });
}

inline bool intersect_box_oracle(const equiblow::MonomialIdeal& a,
                                 const equiblow::MonomialIdeal& b,
                                 const equiblow::MonomialIdeal& claimed,
                                 equiblow::Exponent bound) {
  return box_agrees(claimed, a.arity(), bound, [&](const equiblow::Monomial& m) {
    return equiblow::membership(m, a) && equiblow::membership(m, b);
  });
}

inline bool colon_box_oracle(const equiblow::MonomialIdeal& a,
                             const equiblow::MonomialIdeal& b,
                             const equiblow::MonomialIdeal& claimed,
                             equiblow::Exponent bound) {
  // m is in a : b iff m*f is in a for every generator f of b.
  return box_agrees(claimed, a.arity(), bound, [&](const equiblow::Monomial& m) {
    for (const equiblow::Monomial& f : b.generators())
      if (!equiblow::membership(equiblow::mul(m, f), a)) return false;
    return true;
  });
}

}  // namespace testutil

#endif  // EQUIBLOW_TESTS_HELPERS_HPP
