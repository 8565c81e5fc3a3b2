#include "sgd/rational.hpp"

#include <stdexcept>

namespace sgd {

Rat rat(long num, long den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

std::string rat_to_string(const Rat& x) {
  if (x.get_den() == 1) return x.get_num().get_str();
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

namespace {

// mpz_class(string) auto-detects the base, so "0125" would read as octal;
// always parse literals in base 10.
mpz_class parse_int10(std::string s) {
  if (!s.empty() && s[0] == '+') s.erase(0, 1);
  if (s.empty()) throw std::invalid_argument("bad integer literal");
  return mpz_class(s, 10);
}

Rat parse_decimal(const std::string& text) {
  // [sign] digits [. digits] [eE [sign] digits]
  std::string mantissa;
  long exp10 = 0;
  std::size_t pos = 0;
  std::size_t epos = text.find_first_of("eE");
  std::string body = text.substr(0, epos);
  if (epos != std::string::npos) {
    std::string etail = text.substr(epos + 1);
    if (etail.empty()) throw std::invalid_argument("bad exponent: " + text);
    exp10 = std::stol(etail);
  }
  bool seen_digit = false;
  long frac_digits = -1;
  if (pos < body.size() && (body[pos] == '+' || body[pos] == '-')) {
    mantissa.push_back(body[pos]);
    ++pos;
  }
  for (; pos < body.size(); ++pos) {
    char c = body[pos];
    if (c == '.') {
      if (frac_digits >= 0) throw std::invalid_argument("bad number: " + text);
      frac_digits = 0;
    } else if (c >= '0' && c <= '9') {
      mantissa.push_back(c);
      seen_digit = true;
      if (frac_digits >= 0) ++frac_digits;
    } else {
      throw std::invalid_argument("bad number: " + text);
    }
  }
  if (!seen_digit) throw std::invalid_argument("bad number: " + text);
  if (frac_digits > 0) exp10 -= frac_digits;
  Rat value{parse_int10(mantissa)};
  mpz_class pow10;
  mpz_ui_pow_ui(pow10.get_mpz_t(), 10u,
                static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
  if (exp10 >= 0) {
    value *= Rat(pow10);
  } else {
    value /= Rat(pow10);
  }
  value.canonicalize();
  return value;
}

}  // namespace

Rat parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  std::size_t slash = text.find('/');
  if (slash != std::string::npos) {
    mpz_class num = parse_int10(text.substr(0, slash));
    mpz_class den = parse_int10(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator: " + text);
    Rat r(num, den);
    r.canonicalize();
    return r;
  }
  if (text.find('.') != std::string::npos ||
      text.find('e') != std::string::npos ||
      text.find('E') != std::string::npos) {
    return parse_decimal(text);
  }
  return Rat(parse_int10(text));
}

double to_double(const Rat& x) { return x.get_d(); }

Rat rat_pow(const Rat& base, long exp) {
  if (exp == 0) return Rat(1);
  bool invert = exp < 0;
  unsigned long e = static_cast<unsigned long>(invert ? -exp : exp);
  if (invert && base == 0)
    throw std::invalid_argument("zero base with negative exponent");
  Rat out;
  mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), e);
  if (invert) {
    out = Rat(1) / out;
  }
  out.canonicalize();
  return out;
}

namespace {

// floor(sqrt(p*q)) gives sqrt(p/q) = sqrt(p*q)/q; scaling by 4^bits makes
// the bracket tight to 2^-bits.
Rat sqrt_bracket(const Rat& x, unsigned bits, bool upper) {
  if (x < 0) throw std::invalid_argument("sqrt of negative rational");
  if (x == 0) return Rat(0);
  mpz_class p = x.get_num(), q = x.get_den();
  mpz_class scaled = p * q;
  scaled <<= 2 * bits;
  mpz_class root;
  mpz_sqrt(root.get_mpz_t(), scaled.get_mpz_t());
  if (upper && root * root < scaled) root += 1;
  mpz_class den = q;
  den <<= bits;
  Rat out(root, den);
  out.canonicalize();
  return out;
}

}  // namespace

Rat sqrt_lower(const Rat& x, unsigned bits) { return sqrt_bracket(x, bits, false); }
Rat sqrt_upper(const Rat& x, unsigned bits) { return sqrt_bracket(x, bits, true); }

}  // namespace sgd
