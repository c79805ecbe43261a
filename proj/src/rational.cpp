#include "clustergeo/rational.hpp"

#include <cctype>

#include "clustergeo/errors.hpp"

namespace clustergeo {
namespace {

bool is_canonical_integer(std::string_view s, bool allow_sign) {
  if (s.empty()) return false;
  std::size_t i = 0;
  if (s[0] == '-') {
    if (!allow_sign) return false;
    i = 1;
  }
  if (i == s.size()) return false;
  if (s[i] == '0' && s.size() > i + 1) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return s != "-0";
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  const auto num_text = text.substr(0, slash);
  if (!is_canonical_integer(num_text, true)) {
    throw ParseError("malformed rational \"" + std::string(text) + "\"");
  }
  mpz_class num(std::string(num_text), 10);
  if (slash == std::string_view::npos) return Rational(num);

  const auto den_text = text.substr(slash + 1);
  if (!is_canonical_integer(den_text, false)) {
    throw ParseError("malformed rational \"" + std::string(text) + "\"");
  }
  mpz_class den(std::string(den_text), 10);
  if (den <= 1) {
    throw ParseError("non-canonical denominator in \"" + std::string(text) + "\"");
  }
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  if (g != 1) {
    throw ParseError("non-reduced rational \"" + std::string(text) + "\"");
  }
  Rational r(num, den);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& value) {
  if (value.get_den() == 1) return value.get_num().get_str();
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

}  // namespace clustergeo
