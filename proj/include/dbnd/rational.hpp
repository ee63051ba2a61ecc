#pragma once

#include <gmpxx.h>

#include <cctype>
#include <string>
#include <string_view>

#include "dbnd/error.hpp"

namespace dbnd {

// Exact arithmetic for costs, LP data and flows.
using Rational = mpq_class;

// p/q in canonical form; mpq_class(p, q) alone leaves common factors in place
// and breaks equality tests.
inline Rational frac(long p, long q) {
  Rational r(p, q);
  r.canonicalize();
  return r;
}

inline bool is_integral(const Rational& q) { return q.get_den() == 1; }

inline std::string to_string(const Rational& q) { return q.get_str(); }

inline Rational ceil(const Rational& q) {
  mpz_class r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return Rational(r);
}

inline Rational floor(const Rational& q) {
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return Rational(r);
}

// Accepts "7", "-3", "5/2" and plain decimals such as "0.25".
inline Rational parse_rational(std::string_view text) {
  auto fail = [&] { throw Error(Errc::kParse, "bad rational '" + std::string(text) + "'"); };
  if (text.empty()) fail();
  auto digits = [](std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
  };
  std::string_view body = text;
  bool negative = false;
  if (body.front() == '-' || body.front() == '+') {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  Rational value;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    auto num = body.substr(0, slash);
    auto den = body.substr(slash + 1);
    if (!digits(num) || !digits(den)) fail();
    const mpz_class d{std::string(den)};
    if (d == 0) fail();
    value = Rational(mpz_class{std::string(num)}, d);
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    auto whole = body.substr(0, dot);
    auto decimals = body.substr(dot + 1);
    if (whole.empty()) whole = "0";
    if (!digits(whole) || !digits(decimals)) fail();
    mpz_class scale = 1;
    for (std::size_t i = 0; i < decimals.size(); ++i) scale *= 10;
    value = Rational(mpz_class{std::string(whole)} * scale + mpz_class{std::string(decimals)}, scale);
  } else {
    if (!digits(body)) fail();
    value = Rational(mpz_class{std::string(body)});
  }
  value.canonicalize();
  return negative ? Rational(-value) : value;
}

}  // namespace dbnd
