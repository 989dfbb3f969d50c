#include "cfdim/numeric.hpp"

#include <stdexcept>

namespace cfdim {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

}  // namespace

Integer parse_integer(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  if (!all_digits(body)) {
    throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
  }
  Integer z(std::string(body), 10);
  return negative ? Integer(-z) : z;
}

Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  if (slash != std::string_view::npos) {
    Integer num = parse_integer(text.substr(0, slash));
    Integer den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator: '" + std::string(text) + "'");
    return make_rational(num, den);
  }
  auto dot = text.find('.');
  if (dot == std::string_view::npos) return Rational(parse_integer(text));

  std::string_view head = text.substr(0, dot);
  std::string_view frac = text.substr(dot + 1);
  bool negative = !head.empty() && head.front() == '-';
  if (!head.empty() && (head.front() == '-' || head.front() == '+')) head.remove_prefix(1);
  if (head.empty()) head = "0";
  if (!all_digits(head) || !all_digits(frac)) {
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  }
  Integer num(std::string(head) + std::string(frac), 10);
  Integer den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
  Rational r = make_rational(num, den);
  return negative ? Rational(-r) : r;
}

std::string to_string(const Integer& z) { return z.get_str(10); }

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str(10);
  return q.get_num().get_str(10) + "/" + q.get_den().get_str(10);
}

Integer floor(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Integer ceil(const Rational& q) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Rational pow2(long e) {
  Integer p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(e < 0 ? -e : e));
  return e < 0 ? make_rational(Integer(1), p) : Rational(p);
}

unsigned long ceil_log2(const Integer& z) {
  if (z <= 1) return 0;
  Integer m = z - 1;
  return mpz_sizeinbase(m.get_mpz_t(), 2);
}

}  // namespace cfdim
