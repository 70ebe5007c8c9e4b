#include "cake/exact.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace cake {

namespace {

const char* const kRoot = "\xE2\x88\x9A";  // U+221A

int sign_of(const mpq_class& r, const mpq_class& c, std::uint64_t d) {
  int sr = sgn(r);
  int sc = sgn(c);
  if (sc == 0 || d == 0) return sr;
  if (sr == 0) return sc;
  if (sr == sc) return sr;
  mpq_class r2 = r * r;
  mpq_class c2d = c * c * mpq_class(mpz_class(static_cast<unsigned long>(d)));
  int cmp = ::cmp(r2, c2d);
  // cmp > 0 means the rational part dominates.
  if (cmp == 0) return 0;
  return cmp > 0 ? sr : sc;
}

mpq_class parse_fraction(std::string_view s) {
  if (s.empty()) throw ParseError("empty number");
  std::string t(s);
  if (t.front() == '+') t.erase(0, 1);
  mpq_class q;
  if (t.empty() || q.set_str(t, 10) != 0) {
    throw ParseError("not a fraction: '" + std::string(s) + "'");
  }
  if (q.get_den() == 0) throw ParseError("zero denominator in '" + std::string(s) + "'");
  q.canonicalize();
  return q;
}

}  // namespace

bool is_squarefree(std::uint64_t d) {
  if (d < 2) return false;
  for (std::uint64_t p = 2; p * p <= d; ++p) {
    if (d % (p * p) == 0) return false;
  }
  return true;
}

Scalar::Scalar(mpq_class rat) : rat_(std::move(rat)) { rat_.canonicalize(); }

Scalar::Scalar(mpq_class rat, mpq_class coef, std::uint64_t radicand)
    : rat_(std::move(rat)), coef_(std::move(coef)), d_(radicand) {
  rat_.canonicalize();
  coef_.canonicalize();
  if (sgn(coef_) != 0 && !is_squarefree(d_)) {
    throw ConfigError("radicand " + std::to_string(d_) + " is not a squarefree integer >= 2");
  }
  normalize();
}

Scalar Scalar::frac(long num, long den) {
  if (den == 0) throw DivisionByZero();
  mpq_class q(num, den);
  q.canonicalize();
  return Scalar(q);
}

Scalar Scalar::sqrt_of(std::uint64_t d) { return Scalar(0, 1, d); }

Scalar Scalar::golden() { return Scalar(mpq_class(-1, 2), mpq_class(1, 2), 5); }

void Scalar::normalize() {
  if (sgn(coef_) == 0) d_ = 0;
  if (d_ == 0) coef_ = 0;
}

std::uint64_t Scalar::join(const Scalar& a, const Scalar& b) {
  if (a.d_ == 0) return b.d_;
  if (b.d_ == 0 || a.d_ == b.d_) return a.d_;
  throw ConfigError("mixed radicands " + std::to_string(a.d_) + " and " + std::to_string(b.d_));
}

int Scalar::sign() const { return sign_of(rat_, coef_, d_); }

Scalar Scalar::operator-() const {
  Scalar r = *this;
  r.rat_ = -r.rat_;
  r.coef_ = -r.coef_;
  return r;
}

Scalar& Scalar::operator+=(const Scalar& o) {
  if (d_ == 0 && o.d_ == 0) {
    rat_ += o.rat_;
    return *this;
  }
  d_ = join(*this, o);
  rat_ += o.rat_;
  coef_ += o.coef_;
  normalize();
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  if (d_ == 0 && o.d_ == 0) {
    rat_ -= o.rat_;
    return *this;
  }
  d_ = join(*this, o);
  rat_ -= o.rat_;
  coef_ -= o.coef_;
  normalize();
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  std::uint64_t d = join(*this, o);
  if (d == 0) {
    rat_ *= o.rat_;
    return *this;
  }
  mpq_class dd(mpz_class(static_cast<unsigned long>(d)));
  mpq_class r = rat_ * o.rat_ + coef_ * o.coef_ * dd;
  mpq_class c = rat_ * o.coef_ + coef_ * o.rat_;
  rat_ = std::move(r);
  coef_ = std::move(c);
  d_ = d;
  normalize();
  return *this;
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw DivisionByZero();
  if (d_ == 0) return Scalar(1 / rat_);
  mpq_class norm = rat_ * rat_ - coef_ * coef_ * mpq_class(mpz_class(static_cast<unsigned long>(d_)));
  Scalar r;
  r.rat_ = rat_ / norm;
  r.coef_ = -coef_ / norm;
  r.d_ = d_;
  r.normalize();
  return r;
}

Scalar& Scalar::operator/=(const Scalar& o) {
  if (o.d_ == 0) {
    if (sgn(o.rat_) == 0) throw DivisionByZero();
    rat_ /= o.rat_;
    coef_ /= o.rat_;
    normalize();
    return *this;
  }
  return *this *= o.inverse();
}

bool operator==(const Scalar& a, const Scalar& b) {
  return a.d_ == b.d_ && a.rat_ == b.rat_ && a.coef_ == b.coef_;
}

std::strong_ordering operator<=>(const Scalar& a, const Scalar& b) {
  if (a.d_ == 0 && b.d_ == 0) {
    int c = cmp(a.rat_, b.rat_);
    return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
  }
  std::uint64_t d = Scalar::join(a, b);
  int s = sign_of(a.rat_ - b.rat_, a.coef_ - b.coef_, d);
  if (s < 0) return std::strong_ordering::less;
  if (s > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Ordering compare(const Scalar& a, const Scalar& b) {
  auto c = a <=> b;
  if (c < 0) return Ordering::less;
  if (c > 0) return Ordering::greater;
  return Ordering::equal;
}

mpz_class Scalar::floor() const {
  mpz_class m;
  if (d_ == 0) {
    mpz_fdiv_q(m.get_mpz_t(), rat_.get_num_mpz_t(), rat_.get_den_mpz_t());
    return m;
  }
  mp_bitcnt_t bits = 128 + 2 * (mpz_sizeinbase(rat_.get_num_mpz_t(), 2) +
                                mpz_sizeinbase(rat_.get_den_mpz_t(), 2) +
                                mpz_sizeinbase(coef_.get_num_mpz_t(), 2) +
                                mpz_sizeinbase(coef_.get_den_mpz_t(), 2));
  mpf_class root(static_cast<unsigned long>(d_), bits);
  root = sqrt(root);
  mpf_class approx(rat_, bits);
  approx += mpf_class(coef_, bits) * root;
  mpf_class fl = ::floor(approx);
  m = mpz_class(fl);
  while (Scalar(mpq_class(m)) > *this) --m;
  while (Scalar(mpq_class(m + 1)) <= *this) ++m;
  return m;
}

mpz_class Scalar::ceil() const {
  mpz_class f = floor();
  if (Scalar(mpq_class(f)) == *this) return f;
  return f + 1;
}

double Scalar::to_double() const {
  if (d_ == 0) return rat_.get_d();
  // Extra working precision so that cancellation between the two parts does
  // not eat the double's mantissa.
  const mp_bitcnt_t bits = 192;
  mpf_class root(static_cast<unsigned long>(d_), bits);
  root = sqrt(root);
  mpf_class v(rat_, bits);
  v += mpf_class(coef_, bits) * root;
  return v.get_d();
}

std::string Scalar::str() const {
  if (d_ == 0) return rat_.get_str();
  std::string out = rat_.get_str();
  if (sgn(coef_) > 0) out += '+';
  out += coef_.get_str();
  out += kRoot;
  out += std::to_string(d_);
  return out;
}

Scalar Scalar::parse(std::string_view text) {
  std::string s;
  for (char ch : text) {
    if (ch != ' ' && ch != '\t') s += ch;
  }
  std::size_t root = s.find(kRoot);
  std::size_t root_len = 3;
  if (root == std::string::npos) {
    root = s.find("sqrt");
    root_len = 4;
  }
  if (root == std::string::npos) return Scalar(parse_fraction(s));

  std::string radicand = s.substr(root + root_len);
  if (!radicand.empty() && radicand.front() == '(' && radicand.back() == ')') {
    radicand = radicand.substr(1, radicand.size() - 2);
  }
  if (radicand.empty() || !std::all_of(radicand.begin(), radicand.end(), ::isdigit)) {
    throw ParseError("bad radicand in '" + s + "'");
  }
  std::uint64_t d = std::stoull(radicand);
  std::string head = s.substr(0, root);
  if (!head.empty() && head.back() == '*') head.pop_back();

  // The split between the rational part and the coefficient is the last sign
  // that does not start the string and does not follow a '/'.
  std::size_t split = std::string::npos;
  for (std::size_t i = head.size(); i-- > 1;) {
    if ((head[i] == '+' || head[i] == '-') && head[i - 1] != '/') {
      split = i;
      break;
    }
  }
  mpq_class rat(0);
  std::string coef_text = head;
  if (split != std::string::npos) {
    rat = parse_fraction(head.substr(0, split));
    coef_text = head.substr(split);
  }
  mpq_class coef;
  if (coef_text.empty() || coef_text == "+") {
    coef = 1;
  } else if (coef_text == "-") {
    coef = -1;
  } else {
    coef = parse_fraction(coef_text);
  }
  return Scalar(rat, coef, d);
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.str(); }

Scalar min(const Scalar& a, const Scalar& b) { return b < a ? b : a; }
Scalar max(const Scalar& a, const Scalar& b) { return a < b ? b : a; }

}  // namespace cake
