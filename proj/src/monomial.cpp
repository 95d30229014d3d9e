#include "equiblow/monomial.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <string>

namespace equiblow {

namespace {

std::atomic<Exponent> g_cap{Exponent{1} << 31};

void check_same_arity(const Monomial& a, const Monomial& b, const char* op) {
  if (a.arity() != b.arity())
    throw ArityError(std::string(op) + ": arity " + std::to_string(a.arity()) +
                     " vs " + std::to_string(b.arity()));
}

void check_same_arity(const MonomialIdeal& a, const MonomialIdeal& b, const char* op) {
  if (a.arity() != b.arity())
    throw ArityError(std::string(op) + ": arity " + std::to_string(a.arity()) +
                     " vs " + std::to_string(b.arity()));
}

// Unique minimal generating set in canonical order.
std::vector<Monomial> minimal_generators(std::vector<Monomial> gens) {
  // Ascending degree first, so potential divisors are processed before the
  // monomials they divide; duplicates collapse because equal monomials
  // divide each other.
  std::sort(gens.begin(), gens.end(),
            [](const Monomial& a, const Monomial& b) { return grlex_before(b, a); });
  std::vector<Monomial> kept;
  for (const Monomial& g : gens) {
    bool redundant = false;
    for (const Monomial& h : kept)
      if (divides(h, g)) {
        redundant = true;
        break;
      }
    if (!redundant) kept.push_back(g);
  }
  std::sort(kept.begin(), kept.end(), grlex_before);
  return kept;
}

}  // namespace

Exponent exponent_cap() { return g_cap.load(); }

void set_exponent_cap(Exponent cap) {
  if (cap < 1) throw ExponentOverflowError("exponent cap must be positive");
  g_cap.store(cap);
}

Monomial::Monomial(std::vector<Exponent> exponents)
    : exponents_(std::move(exponents)) {
  const Exponent cap = exponent_cap();
  for (Exponent e : exponents_) {
    if (e < 0) throw PreconditionError("negative exponent in monomial");
    if (e > cap)
      throw ExponentOverflowError("exponent " + std::to_string(e) +
                                  " exceeds cap " + std::to_string(cap));
  }
}

Monomial Monomial::unit(int arity) {
  if (arity < 0) throw ArityError("negative arity");
  return Monomial(std::vector<Exponent>(static_cast<size_t>(arity), 0));
}

Exponent Monomial::degree() const {
  return std::accumulate(exponents_.begin(), exponents_.end(), Exponent{0});
}

bool Monomial::is_unit() const {
  return std::all_of(exponents_.begin(), exponents_.end(),
                     [](Exponent e) { return e == 0; });
}

Monomial mul(const Monomial& a, const Monomial& b) {
  check_same_arity(a, b, "mul");
  std::vector<Exponent> out(a.exponents());
  for (int i = 0; i < b.arity(); ++i) out[static_cast<size_t>(i)] += b[i];
  return Monomial(std::move(out));  // ctor enforces the cap
}

Monomial pow(const Monomial& a, Exponent k) {
  if (k < 0) throw PreconditionError("negative power");
  std::vector<Exponent> out(static_cast<size_t>(a.arity()), 0);
  const Exponent cap = exponent_cap();
  for (int i = 0; i < a.arity(); ++i) {
    if (a[i] != 0 && k > cap / a[i])
      throw ExponentOverflowError("power exceeds exponent cap");
    out[static_cast<size_t>(i)] = a[i] * k;
  }
  return Monomial(std::move(out));
}

bool divides(const Monomial& a, const Monomial& b) {
  check_same_arity(a, b, "divides");
  for (int i = 0; i < a.arity(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

Monomial gcd(const Monomial& a, const Monomial& b) {
  check_same_arity(a, b, "gcd");
  std::vector<Exponent> out(static_cast<size_t>(a.arity()));
  for (int i = 0; i < a.arity(); ++i) out[static_cast<size_t>(i)] = std::min(a[i], b[i]);
  return Monomial(std::move(out));
}

Monomial lcm(const Monomial& a, const Monomial& b) {
  check_same_arity(a, b, "lcm");
  std::vector<Exponent> out(static_cast<size_t>(a.arity()));
  for (int i = 0; i < a.arity(); ++i) out[static_cast<size_t>(i)] = std::max(a[i], b[i]);
  return Monomial(std::move(out));
}

Monomial quotient(const Monomial& b, const Monomial& a) {
  check_same_arity(a, b, "quotient");
  std::vector<Exponent> out(static_cast<size_t>(a.arity()));
  for (int i = 0; i < a.arity(); ++i) {
    if (a[i] > b[i]) throw PreconditionError("quotient: divisor does not divide");
    out[static_cast<size_t>(i)] = b[i] - a[i];
  }
  return Monomial(std::move(out));
}

bool grlex_before(const Monomial& a, const Monomial& b) {
  const Exponent da = a.degree(), db = b.degree();
  if (da != db) return da > db;
  return a.exponents() > b.exponents();
}

MonomialIdeal::MonomialIdeal(std::vector<Monomial> generators) : arity_(0) {
  if (generators.empty())
    throw ZeroIdealError("the zero ideal is not representable");
  arity_ = generators.front().arity();
  for (const Monomial& g : generators)
    if (g.arity() != arity_) throw ArityError("ideal generators of mixed arity");
  generators_ = minimal_generators(std::move(generators));
}

MonomialIdeal MonomialIdeal::unit(int arity) {
  return MonomialIdeal({Monomial::unit(arity)});
}

bool MonomialIdeal::is_unit() const {
  return generators_.size() == 1 && generators_.front().is_unit();
}

MonomialIdeal minimalize(std::vector<Monomial> generators) {
  return MonomialIdeal(std::move(generators));
}

MonomialIdeal sum(const MonomialIdeal& a, const MonomialIdeal& b) {
  check_same_arity(a, b, "sum");
  std::vector<Monomial> gens = a.generators();
  gens.insert(gens.end(), b.generators().begin(), b.generators().end());
  return minimalize(std::move(gens));
}

MonomialIdeal intersect(const MonomialIdeal& a, const MonomialIdeal& b) {
  check_same_arity(a, b, "intersect");
  std::vector<Monomial> gens;
  gens.reserve(a.generators().size() * b.generators().size());
  for (const Monomial& f : a.generators())
    for (const Monomial& g : b.generators()) gens.push_back(lcm(f, g));
  return minimalize(std::move(gens));
}

MonomialIdeal colon(const MonomialIdeal& a, const MonomialIdeal& b) {
  check_same_arity(a, b, "colon");
  bool first = true;
  MonomialIdeal acc = MonomialIdeal::unit(a.arity());
  for (const Monomial& f : b.generators()) {
    std::vector<Monomial> gens;
    gens.reserve(a.generators().size());
    for (const Monomial& g : a.generators())
      gens.push_back(quotient(g, gcd(g, f)));
    MonomialIdeal part = minimalize(std::move(gens));
    acc = first ? part : intersect(acc, part);
    first = false;
  }
  return acc;
}

bool membership(const Monomial& m, const MonomialIdeal& ideal) {
  if (m.arity() != ideal.arity()) throw ArityError("membership: arity mismatch");
  for (const Monomial& g : ideal.generators())
    if (divides(g, m)) return true;
  return false;
}

std::pair<Monomial, MonomialIdeal> gcd_and_residual(const MonomialIdeal& ideal) {
  Monomial g = ideal.generators().front();
  for (size_t i = 1; i < ideal.generators().size(); ++i)
    g = gcd(g, ideal.generators()[i]);
  std::vector<Monomial> residual;
  residual.reserve(ideal.generators().size());
  for (const Monomial& m : ideal.generators()) residual.push_back(quotient(m, g));
  return {g, minimalize(std::move(residual))};
}

bool is_locally_principal(const MonomialIdeal& ideal) {
  return gcd_and_residual(ideal).second.is_unit();
}

bool ideal_before(const MonomialIdeal& a, const MonomialIdeal& b) {
  check_same_arity(a, b, "ideal_before");
  const auto& ga = a.generators();
  const auto& gb = b.generators();
  return std::lexicographical_compare(
      ga.begin(), ga.end(), gb.begin(), gb.end(),
      [](const Monomial& x, const Monomial& y) { return grlex_before(x, y); });
}

}  // namespace equiblow
