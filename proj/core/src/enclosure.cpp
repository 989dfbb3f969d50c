#include "cfdim/enclosure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <utility>

namespace cfdim {

namespace {

// Scratch value with its own precision; used for endpoint candidates.
struct Scratch {
  explicit Scratch(long prec) { mpfr_init2(v, prec); }
  ~Scratch() { mpfr_clear(v); }
  Scratch(const Scratch&) = delete;
  Scratch& operator=(const Scratch&) = delete;
  mpfr_t v;
};

long max_prec(const Enclosure& a, const Enclosure& b) {
  return std::max(a.precision(), b.precision());
}

Rational to_rational(mpfr_srcptr x) {
  Rational q;
  mpfr_get_q(q.get_mpq_t(), x);
  return q;
}

std::string render(mpfr_srcptr x, int digits, bool up) {
  char* buf = nullptr;
  if (up) {
    mpfr_asprintf(&buf, "%.*RUe", digits, x);
  } else {
    mpfr_asprintf(&buf, "%.*RDe", digits, x);
  }
  std::string out(buf);
  mpfr_free_str(buf);
  return out;
}

template <typename F>
Enclosure monotone_increasing(const Enclosure& x, F f) {
  Enclosure r(x.precision());
  f(r.lower(), x.lower(), MPFR_RNDD);
  f(r.upper(), x.upper(), MPFR_RNDU);
  return r;
}

// Small rational exponents are evaluated with integer powers and roots, which
// are much cheaper than exp/log and are monotone on [0, inf).
bool small_exponent(const Rational& s) {
  return mpz_cmpabs_ui(s.get_num_mpz_t(), 64) <= 0 && mpz_cmp_ui(s.get_den_mpz_t(), 4096) <= 0;
}

void root_power(mpfr_ptr out, mpfr_srcptr x, unsigned long p, unsigned long q, mpfr_rnd_t rnd) {
  if (q == 1) {
    mpfr_pow_ui(out, x, p, rnd);
    return;
  }
  if (p == 1) {
    if (q == 2) {
      mpfr_sqrt(out, x, rnd);
    } else {
      mpfr_rootn_ui(out, x, q, rnd);
    }
    return;
  }
  Scratch t(mpfr_get_prec(out) + 16);
  mpfr_pow_ui(t.v, x, p, rnd);
  if (q == 2) {
    mpfr_sqrt(out, t.v, rnd);
  } else {
    mpfr_rootn_ui(out, t.v, q, rnd);
  }
}

}  // namespace

void Enclosure::init(long precision) {
  if (precision < MPFR_PREC_MIN || precision > 1 << 20) {
    throw std::invalid_argument("precision out of range");
  }
  precision_ = precision;
  mpfr_init2(lo_, precision);
  mpfr_init2(hi_, precision);
}

Enclosure::Enclosure(long precision) {
  init(precision);
  mpfr_set_zero(lo_, 1);
  mpfr_set_zero(hi_, 1);
}

Enclosure::Enclosure(const Rational& value, long precision) {
  init(precision);
  mpfr_set_q(lo_, value.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(hi_, value.get_mpq_t(), MPFR_RNDU);
}

Enclosure::Enclosure(const Rational& lo, const Rational& hi, long precision) {
  if (lo > hi) throw std::invalid_argument("enclosure with lo > hi");
  init(precision);
  mpfr_set_q(lo_, lo.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(hi_, hi.get_mpq_t(), MPFR_RNDU);
}

Enclosure::Enclosure(const Enclosure& other) {
  init(other.precision_);
  mpfr_set(lo_, other.lo_, MPFR_RNDD);
  mpfr_set(hi_, other.hi_, MPFR_RNDU);
}

Enclosure::Enclosure(Enclosure&& other) noexcept {
  precision_ = other.precision_;
  mpfr_init2(lo_, MPFR_PREC_MIN);
  mpfr_init2(hi_, MPFR_PREC_MIN);
  mpfr_swap(lo_, other.lo_);
  mpfr_swap(hi_, other.hi_);
}

Enclosure& Enclosure::operator=(const Enclosure& other) {
  if (this == &other) return *this;
  precision_ = other.precision_;
  mpfr_set_prec(lo_, precision_);
  mpfr_set_prec(hi_, precision_);
  mpfr_set(lo_, other.lo_, MPFR_RNDD);
  mpfr_set(hi_, other.hi_, MPFR_RNDU);
  return *this;
}

Enclosure& Enclosure::operator=(Enclosure&& other) noexcept {
  std::swap(precision_, other.precision_);
  mpfr_swap(lo_, other.lo_);
  mpfr_swap(hi_, other.hi_);
  return *this;
}

Enclosure::~Enclosure() {
  mpfr_clear(lo_);
  mpfr_clear(hi_);
}

Enclosure Enclosure::from_long(long value, long precision) {
  Enclosure r(precision);
  mpfr_set_si(r.lo_, value, MPFR_RNDD);
  mpfr_set_si(r.hi_, value, MPFR_RNDU);
  return r;
}

Rational Enclosure::lo() const { return to_rational(lo_); }
Rational Enclosure::hi() const { return to_rational(hi_); }
double Enclosure::lo_double() const { return mpfr_get_d(lo_, MPFR_RNDD); }
double Enclosure::hi_double() const { return mpfr_get_d(hi_, MPFR_RNDU); }
double Enclosure::mid_double() const { return 0.5 * (lo_double() + hi_double()); }
Rational Enclosure::width() const { return hi() - lo(); }

double Enclosure::relative_width() const {
  Scratch w(precision_ + 2);
  mpfr_sub(w.v, hi_, lo_, MPFR_RNDU);
  if (mpfr_zero_p(w.v)) return 0.0;
  Scratch m(precision_);
  if (mpfr_cmpabs(lo_, hi_) > 0) {
    mpfr_abs(m.v, lo_, MPFR_RNDD);
  } else {
    mpfr_abs(m.v, hi_, MPFR_RNDD);
  }
  mpfr_div(w.v, w.v, m.v, MPFR_RNDU);
  return mpfr_get_d(w.v, MPFR_RNDU);
}

bool Enclosure::contains(const Rational& q) const {
  return mpfr_cmp_q(lo_, q.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_, q.get_mpq_t()) >= 0;
}

bool Enclosure::contains(const Enclosure& other) const {
  return mpfr_lessequal_p(lo_, other.lo_) && mpfr_greaterequal_p(hi_, other.hi_);
}

bool Enclosure::contains_zero() const { return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0; }
bool Enclosure::is_point() const { return mpfr_equal_p(lo_, hi_); }
bool Enclosure::positive() const { return mpfr_sgn(lo_) > 0; }
bool Enclosure::nonnegative() const { return mpfr_sgn(lo_) >= 0; }
bool Enclosure::negative() const { return mpfr_sgn(hi_) < 0; }
bool Enclosure::less_than(const Enclosure& other) const { return mpfr_less_p(hi_, other.lo_); }
bool Enclosure::less_than(const Rational& q) const { return mpfr_cmp_q(hi_, q.get_mpq_t()) < 0; }
bool Enclosure::greater_than(const Rational& q) const { return mpfr_cmp_q(lo_, q.get_mpq_t()) > 0; }
bool Enclosure::at_most(const Rational& q) const { return mpfr_cmp_q(hi_, q.get_mpq_t()) <= 0; }
bool Enclosure::at_least(const Rational& q) const { return mpfr_cmp_q(lo_, q.get_mpq_t()) >= 0; }

std::string Enclosure::lo_str(int digits) const { return render(lo_, digits, false); }
std::string Enclosure::hi_str(int digits) const { return render(hi_, digits, true); }
std::string Enclosure::str(int digits) const {
  return "[" + lo_str(digits) + ", " + hi_str(digits) + "]";
}

Enclosure Enclosure::operator-() const {
  Enclosure r(precision_);
  mpfr_neg(r.lo_, hi_, MPFR_RNDD);
  mpfr_neg(r.hi_, lo_, MPFR_RNDU);
  return r;
}

Enclosure& Enclosure::operator+=(const Enclosure& rhs) {
  Enclosure r(max_prec(*this, rhs));
  mpfr_add(r.lo_, lo_, rhs.lo_, MPFR_RNDD);
  mpfr_add(r.hi_, hi_, rhs.hi_, MPFR_RNDU);
  return *this = std::move(r);
}

Enclosure& Enclosure::operator-=(const Enclosure& rhs) {
  Enclosure r(max_prec(*this, rhs));
  mpfr_sub(r.lo_, lo_, rhs.hi_, MPFR_RNDD);
  mpfr_sub(r.hi_, hi_, rhs.lo_, MPFR_RNDU);
  return *this = std::move(r);
}

Enclosure& Enclosure::operator*=(const Enclosure& rhs) {
  Enclosure r(max_prec(*this, rhs));
  if (nonnegative() && rhs.nonnegative()) {
    mpfr_mul(r.lo_, lo_, rhs.lo_, MPFR_RNDD);
    mpfr_mul(r.hi_, hi_, rhs.hi_, MPFR_RNDU);
    return *this = std::move(r);
  }
  mpfr_srcptr a[2] = {lo_, hi_};
  mpfr_srcptr b[2] = {rhs.lo_, rhs.hi_};
  Scratch t(r.precision_);
  bool first = true;
  for (auto x : a) {
    for (auto y : b) {
      mpfr_mul(t.v, x, y, MPFR_RNDD);
      if (first || mpfr_less_p(t.v, r.lo_)) mpfr_set(r.lo_, t.v, MPFR_RNDD);
      mpfr_mul(t.v, x, y, MPFR_RNDU);
      if (first || mpfr_greater_p(t.v, r.hi_)) mpfr_set(r.hi_, t.v, MPFR_RNDU);
      first = false;
    }
  }
  return *this = std::move(r);
}

Enclosure& Enclosure::operator/=(const Enclosure& rhs) {
  if (rhs.contains_zero()) throw EnclosureDomainError();
  Enclosure r(max_prec(*this, rhs));
  if (nonnegative() && rhs.positive()) {
    mpfr_div(r.lo_, lo_, rhs.hi_, MPFR_RNDD);
    mpfr_div(r.hi_, hi_, rhs.lo_, MPFR_RNDU);
    return *this = std::move(r);
  }
  mpfr_srcptr a[2] = {lo_, hi_};
  mpfr_srcptr b[2] = {rhs.lo_, rhs.hi_};
  Scratch t(r.precision_);
  bool first = true;
  for (auto x : a) {
    for (auto y : b) {
      mpfr_div(t.v, x, y, MPFR_RNDD);
      if (first || mpfr_less_p(t.v, r.lo_)) mpfr_set(r.lo_, t.v, MPFR_RNDD);
      mpfr_div(t.v, x, y, MPFR_RNDU);
      if (first || mpfr_greater_p(t.v, r.hi_)) mpfr_set(r.hi_, t.v, MPFR_RNDU);
      first = false;
    }
  }
  return *this = std::move(r);
}

Enclosure operator+(const Enclosure& a, const Rational& q) {
  Enclosure r(a.precision());
  mpfr_add_q(r.lo_, a.lo_, q.get_mpq_t(), MPFR_RNDD);
  mpfr_add_q(r.hi_, a.hi_, q.get_mpq_t(), MPFR_RNDU);
  return r;
}

Enclosure operator-(const Enclosure& a, const Rational& q) {
  Enclosure r(a.precision());
  mpfr_sub_q(r.lo_, a.lo_, q.get_mpq_t(), MPFR_RNDD);
  mpfr_sub_q(r.hi_, a.hi_, q.get_mpq_t(), MPFR_RNDU);
  return r;
}

Enclosure operator*(const Enclosure& a, const Rational& q) {
  Enclosure r(a.precision());
  if (sgn(q) >= 0) {
    mpfr_mul_q(r.lo_, a.lo_, q.get_mpq_t(), MPFR_RNDD);
    mpfr_mul_q(r.hi_, a.hi_, q.get_mpq_t(), MPFR_RNDU);
  } else {
    mpfr_mul_q(r.lo_, a.hi_, q.get_mpq_t(), MPFR_RNDD);
    mpfr_mul_q(r.hi_, a.lo_, q.get_mpq_t(), MPFR_RNDU);
  }
  return r;
}

Enclosure operator/(const Enclosure& a, const Rational& q) {
  if (sgn(q) == 0) throw EnclosureDomainError();
  Enclosure r(a.precision());
  if (sgn(q) > 0) {
    mpfr_div_q(r.lo_, a.lo_, q.get_mpq_t(), MPFR_RNDD);
    mpfr_div_q(r.hi_, a.hi_, q.get_mpq_t(), MPFR_RNDU);
  } else {
    mpfr_div_q(r.lo_, a.hi_, q.get_mpq_t(), MPFR_RNDD);
    mpfr_div_q(r.hi_, a.lo_, q.get_mpq_t(), MPFR_RNDU);
  }
  return r;
}

Enclosure operator/(const Rational& q, const Enclosure& a) {
  return Enclosure(q, a.precision()) / a;
}

Enclosure Enclosure::scaled_pow2(long e) const {
  Enclosure r(*this);
  mpfr_mul_2si(r.lo_, r.lo_, e, MPFR_RNDD);
  mpfr_mul_2si(r.hi_, r.hi_, e, MPFR_RNDU);
  return r;
}

Enclosure hull(const Enclosure& a, const Enclosure& b) {
  Enclosure r(max_prec(a, b));
  mpfr_min(r.lower(), a.lower(), b.lower(), MPFR_RNDD);
  mpfr_max(r.upper(), a.upper(), b.upper(), MPFR_RNDU);
  return r;
}

std::optional<Enclosure> intersect(const Enclosure& a, const Enclosure& b) {
  Enclosure r(max_prec(a, b));
  mpfr_max(r.lower(), a.lower(), b.lower(), MPFR_RNDD);
  mpfr_min(r.upper(), a.upper(), b.upper(), MPFR_RNDU);
  if (mpfr_greater_p(r.lower(), r.upper())) return std::nullopt;
  return r;
}

Enclosure ln2(long precision) {
  Enclosure r(precision);
  mpfr_const_log2(r.lower(), MPFR_RNDD);
  mpfr_const_log2(r.upper(), MPFR_RNDU);
  return r;
}

Enclosure log(const Enclosure& x) {
  if (!x.positive()) throw EnclosureDomainError();
  return monotone_increasing(x, mpfr_log);
}

Enclosure log2(const Enclosure& x) {
  if (!x.positive()) throw EnclosureDomainError();
  return monotone_increasing(x, mpfr_log2);
}

Enclosure log1p(const Enclosure& x) {
  if (mpfr_cmp_si(x.lower(), -1) <= 0) throw EnclosureDomainError();
  return monotone_increasing(x, mpfr_log1p);
}

Enclosure exp(const Enclosure& x) { return monotone_increasing(x, mpfr_exp); }
Enclosure exp2(const Enclosure& x) { return monotone_increasing(x, mpfr_exp2); }

Enclosure sqrt(const Enclosure& x) {
  if (!x.nonnegative()) throw EnclosureDomainError();
  return monotone_increasing(x, mpfr_sqrt);
}

Enclosure pow(const Enclosure& x, const Rational& s) {
  const long prec = x.precision();
  if (sgn(s) == 0) return Enclosure(Rational(1), prec);
  if (!x.nonnegative()) throw EnclosureDomainError();
  if (sgn(s) < 0) {
    if (!x.positive()) throw EnclosureDomainError();
    return Rational(1) / pow(x, Rational(-s));
  }
  if (small_exponent(s)) {
    unsigned long p = mpz_get_ui(s.get_num_mpz_t());
    unsigned long q = mpz_get_ui(s.get_den_mpz_t());
    Enclosure r(prec);
    root_power(r.lower(), x.lower(), p, q, MPFR_RNDD);
    root_power(r.upper(), x.upper(), p, q, MPFR_RNDU);
    return r;
  }
  return pow(x, Enclosure(s, prec));
}

Enclosure pow(const Enclosure& x, const Enclosure& s) {
  const long prec = std::max(x.precision(), s.precision());
  if (!x.nonnegative()) throw EnclosureDomainError();
  if (s.is_point() && mpfr_zero_p(s.lower())) return Enclosure(Rational(1), prec);
  if (!s.positive()) {
    if (!x.positive()) throw EnclosureDomainError();
  }
  if (mpfr_zero_p(x.upper())) return Enclosure(prec);
  if (mpfr_zero_p(x.lower())) {
    // x^s on [0, hi] with s > 0: the infimum is 0.
    Enclosure top(prec);
    mpfr_set(top.lower(), x.upper(), MPFR_RNDD);
    mpfr_set(top.upper(), x.upper(), MPFR_RNDU);
    Enclosure r = exp2(s * log2(top));
    mpfr_set_zero(r.lower(), 1);
    return r;
  }
  return exp2(s * log2(x));
}

Enclosure log1p_exact(const Rational& r, long precision) {
  if (sgn(r) < 0) throw EnclosureDomainError();
  Enclosure out(precision);
  if (sgn(r) == 0) return out;
  Scratch rn(precision);
  int inexact = mpfr_set_q(rn.v, r.get_mpq_t(), MPFR_RNDN);
  Scratch y(precision);
  mpfr_log1p(y.v, rn.v, MPFR_RNDN);
  // |log1p(r) - y| <= ulp(y)/2 + |r - rn| and |r - rn| <= ulp(rn)/2.
  mpfr_set(out.lower(), y.v, MPFR_RNDD);
  mpfr_set(out.upper(), y.v, MPFR_RNDU);
  mpfr_nextbelow(out.lower());
  mpfr_nextabove(out.upper());
  if (inexact != 0) {
    Scratch e(16);
    mpfr_set_ui_2exp(e.v, 1, mpfr_get_exp(rn.v) - precision, MPFR_RNDU);
    mpfr_sub(out.lower(), out.lower(), e.v, MPFR_RNDD);
    mpfr_add(out.upper(), out.upper(), e.v, MPFR_RNDU);
  }
  if (mpfr_sgn(out.lower()) < 0) mpfr_set_zero(out.lower(), 1);
  return out;
}

Enclosure log2_enclosure(const Rational& q, long precision) {
  if (sgn(q) <= 0) throw EnclosureDomainError();
  // Exact powers of two give exact results.
  const mpz_srcptr num = q.get_num_mpz_t();
  const mpz_srcptr den = q.get_den_mpz_t();
  if (mpz_popcount(num) == 1 && mpz_popcount(den) == 1) {
    long e = static_cast<long>(mpz_sizeinbase(num, 2)) - static_cast<long>(mpz_sizeinbase(den, 2));
    return Enclosure::from_long(e, precision);
  }
  return log2(Enclosure(q, precision));
}

Enclosure pow_enclosure(const Enclosure& x, const Rational& s, long precision) {
  Enclosure xp(precision);
  mpfr_set(xp.lower(), x.lower(), MPFR_RNDD);
  mpfr_set(xp.upper(), x.upper(), MPFR_RNDU);
  return pow(xp, s);
}

Enclosure exp2_rational(const Rational& e, long precision) {
  if (e.get_den() == 1 && e.get_num().fits_slong_p()) {
    Enclosure one(Rational(1), precision);
    return one.scaled_pow2(e.get_num().get_si());
  }
  return exp2(Enclosure(e, precision));
}

}  // namespace cfdim
