#include "knockout/scalar.hpp"

#include <cctype>

#include "knockout/errors.hpp"

namespace knockout {

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  std::string s = text;
  bool negative = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    negative = s[0] == '-';
    s.erase(0, 1);
  }
  Rational q;
  if (const auto slash = s.find('/'); slash != std::string::npos) {
    const std::string num = s.substr(0, slash);
    const std::string den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) throw Error(ErrorCode::ParseError, "bad rational '" + text + "'");
    q = Rational(mpz_class(num), mpz_class(den));
    if (sgn(q.get_den()) == 0) throw Error(ErrorCode::ParseError, "zero denominator in '" + text + "'");
    q.canonicalize();
  } else if (const auto dot = s.find('.'); dot != std::string::npos) {
    std::string whole = s.substr(0, dot);
    const std::string frac = s.substr(dot + 1);
    if (whole.empty()) whole = "0";
    if (!all_digits(whole) || (!frac.empty() && !all_digits(frac))) {
      throw Error(ErrorCode::ParseError, "bad decimal '" + text + "'");
    }
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    q = Rational(mpz_class(whole + frac), scale);
    q.canonicalize();
  } else {
    if (!all_digits(s)) throw Error(ErrorCode::ParseError, "bad number '" + text + "'");
    q = Rational(mpz_class(s));
  }
  return negative ? Rational(-q) : q;
}

std::string format_rational(const Rational& q) {
  Rational reduced = q;
  reduced.canonicalize();
  return reduced.get_str();
}

}  // namespace knockout
