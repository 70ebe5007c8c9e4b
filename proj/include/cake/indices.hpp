#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cake/exact.hpp"

namespace cake {

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

using Entitlements = std::vector<Scalar>;

// Throws PreconditionError unless every entry lies in [0, 1] and they sum to 1.
void check_entitlements(const Entitlements& e);

// A positive integer, or infinity.
class IndexValue {
 public:
  IndexValue() = default;
  explicit IndexValue(mpz_class v) : value_(std::move(v)) {}
  static IndexValue infinity() {
    IndexValue v;
    v.infinite_ = true;
    return v;
  }

  bool is_infinite() const { return infinite_; }
  const mpz_class& value() const;
  std::string str() const { return infinite_ ? "inf" : value_.get_str(); }

  friend bool operator==(const IndexValue& a, const IndexValue& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }

 private:
  bool infinite_ = false;
  mpz_class value_{1};
};

struct IndexReport {
  IndexValue clonage;
  IndexValue precision;
  mpz_class fineness;
};

IndexValue clonage(const Entitlements& e);
IndexValue precision(const Scalar& entitlement);
IndexValue precision(const Entitlements& e);
mpz_class fineness(const Scalar& entitlement);
mpz_class fineness(const Entitlements& e);
IndexReport compute_indices(const Entitlements& e);

// max{c >= 0 : p >= 2^(2^c - 1)}
int prop1_bound(const mpz_class& p);
// max{k >= 0 : (2^(2^k - 1))^(n-1) <= c}
int theorem1_bound(const mpz_class& c, int n);
// 2(n-1) * ceil(log2 c)
mpz_class cf_upper_bound(const mpz_class& c, int n);

struct Cf2Lower {
  int factor;        // n - 1
  mpz_class fineness;
  double approx;     // (n - 1) log3 f
};
Cf2Lower cf2_lower_bound(const mpz_class& f, int n);

enum class ScheduleMode { paper, minimal };

ScheduleMode parse_schedule_mode(const std::string& s);
const char* to_string(ScheduleMode m);

// Levels l_0 ... l_{c*}, each l_{c+1} = floor(sqrt(l_c / 2)).
std::vector<mpz_class> adversary_schedule(ScheduleMode mode, int c_star);
mpz_class next_level(const mpz_class& level);

}  // namespace cake
