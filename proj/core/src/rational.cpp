#include "dadim/rational.hpp"

#include "dadim/errors.hpp"

namespace dadim {

Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) fail(ErrorCode::kParse, "empty rational literal");
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    std::size_t scale = s.size() - dot - 1;
    mpz_class num;
    if (num.set_str(digits, 10) != 0) fail(ErrorCode::kParse, "bad decimal literal '" + s + "'");
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, scale);
    Rational q(num, den);
    q.canonicalize();
    return q;
  }
  Rational q;
  if (q.set_str(s, 10) != 0) fail(ErrorCode::kParse, "bad rational literal '" + s + "'");
  if (q.get_den() == 0) fail(ErrorCode::kParse, "zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(10); }

double to_double(const Rational& q) { return q.get_d(); }

Rational pow10_neg(int k) {
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, static_cast<unsigned long>(k));
  return Rational(mpz_class(1), den);
}

}  // namespace dadim
