#include "cake/indices.hpp"

#include <cmath>

#include "cake/kitchen.hpp"

namespace cake {

namespace {

mpz_class pow2(unsigned long k) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, k);
  return r;
}

void require_positive(const mpz_class& x, const char* name) {
  if (x <= 0) throw DomainError(std::string(name) + " must be a positive integer");
}

}  // namespace

void check_entitlements(const Entitlements& e) {
  if (e.empty()) throw PreconditionError("entitlement profile is empty");
  Scalar total;
  for (const auto& x : e) {
    if (x < Scalar(0) || x > Scalar(1)) throw PreconditionError("entitlement " + x.str() + " is outside [0, 1]");
    total += x;
  }
  if (total != Scalar(1)) throw PreconditionError("entitlements sum to " + total.str() + ", not 1");
}

const mpz_class& IndexValue::value() const {
  if (infinite_) throw DomainError("index is infinite");
  return value_;
}

IndexValue clonage(const Entitlements& e) {
  mpz_class l = 1;
  for (const auto& x : e) {
    if (!x.is_rational()) return IndexValue::infinity();
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.rat().get_den_mpz_t());
  }
  return IndexValue(l);
}

IndexValue precision(const Scalar& x) {
  if (!x.is_rational()) return IndexValue::infinity();
  return IndexValue(x.rat().get_den());
}

IndexValue precision(const Entitlements& e) {
  mpz_class best = 1;
  for (const auto& x : e) {
    IndexValue p = precision(x);
    if (p.is_infinite()) return p;
    if (p.value() > best) best = p.value();
  }
  return IndexValue(best);
}

mpz_class fineness(const Scalar& x) {
  if (x.is_zero()) return 1;
  return x.inverse().ceil();
}

mpz_class fineness(const Entitlements& e) {
  mpz_class best = 1;
  for (const auto& x : e) {
    mpz_class f = fineness(x);
    if (f > best) best = f;
  }
  return best;
}

IndexReport compute_indices(const Entitlements& e) {
  check_entitlements(e);
  return {clonage(e), precision(e), fineness(e)};
}

int prop1_bound(const mpz_class& p) {
  require_positive(p, "p");
  int c = 0;
  while (p >= pow2((1UL << (c + 1)) - 1)) ++c;
  return c;
}

int theorem1_bound(const mpz_class& c, int n) {
  require_positive(c, "c");
  if (n < 2) throw DomainError("theorem1 needs n >= 2");
  int k = 0;
  for (;;) {
    unsigned long exponent = ((1UL << (k + 1)) - 1) * static_cast<unsigned long>(n - 1);
    if (exponent > mpz_sizeinbase(c.get_mpz_t(), 2)) break;
    if (pow2(exponent) > c) break;
    ++k;
  }
  return k;
}

mpz_class cf_upper_bound(const mpz_class& c, int n) {
  require_positive(c, "c");
  if (n < 1) throw DomainError("n must be a positive integer");
  // ceil(log2 c) is the bit length of c - 1.
  mpz_class m = c - 1;
  unsigned long bits = m == 0 ? 0 : mpz_sizeinbase(m.get_mpz_t(), 2);
  return mpz_class(2 * (n - 1)) * mpz_class(bits);
}

Cf2Lower cf2_lower_bound(const mpz_class& f, int n) {
  require_positive(f, "f");
  if (n < 1) throw DomainError("n must be a positive integer");
  long exp = 0;
  double mant = mpz_get_d_2exp(&exp, f.get_mpz_t());
  double log2f = std::log2(mant) + static_cast<double>(exp);
  return {n - 1, f, (n - 1) * log2f / std::log2(3.0)};
}

ScheduleMode parse_schedule_mode(const std::string& s) {
  if (s == "paper") return ScheduleMode::paper;
  if (s == "minimal") return ScheduleMode::minimal;
  throw DomainError("unknown schedule mode '" + s + "' (expected paper or minimal)");
}

const char* to_string(ScheduleMode m) { return m == ScheduleMode::paper ? "paper" : "minimal"; }

mpz_class next_level(const mpz_class& level) {
  mpz_class half = level / 2;
  mpz_class root;
  mpz_sqrt(root.get_mpz_t(), half.get_mpz_t());
  return root;
}

std::vector<mpz_class> adversary_schedule(ScheduleMode mode, int c_star) {
  if (c_star < 0) throw DomainError("c* must be nonnegative");
  std::vector<mpz_class> levels;
  if (mode == ScheduleMode::paper) {
    mpz_class e;
    mpz_ui_pow_ui(e.get_mpz_t(), 3, static_cast<unsigned long>(c_star));
    if (!e.fits_ulong_p() || e.get_ui() > (1UL << 26)) throw DomainError("paper schedule too large for c*");
    levels.push_back(pow2(e.get_ui()));
    for (int c = 0; c < c_star; ++c) levels.push_back(next_level(levels.back()));
    return levels;
  }
  levels.assign(static_cast<std::size_t>(c_star) + 1, mpz_class(2));
  for (int c = c_star; c > 0; --c) {
    const mpz_class& l = levels[static_cast<std::size_t>(c)];
    levels[static_cast<std::size_t>(c) - 1] = 2 * l * l;
  }
  return levels;
}

}  // namespace cake
