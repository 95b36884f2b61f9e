#include "newton_critic/rational.hpp"

#include <cctype>
#include <string>

#include "newton_critic/error.hpp"

namespace nc {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::Syntax: return "Syntax";
    case ErrorCode::NonIntegerExponent: return "NonIntegerExponent";
    case ErrorCode::ExpNotVanishing: return "ExpNotVanishing";
    case ErrorCode::ZeroPolynomial: return "ZeroPolynomial";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::IncompatibleFields: return "IncompatibleFields";
    case ErrorCode::NegativeBase: return "NegativeBase";
    case ErrorCode::EmptyReducedSupport: return "EmptyReducedSupport";
    case ErrorCode::UnboundedDistance: return "UnboundedDistance";
    case ErrorCode::NoSecondDerivativeOnEdge: return "NoSecondDerivativeOnEdge";
    case ErrorCode::MaxDepthExceeded: return "MaxDepthExceeded";
    case ErrorCode::TruncationInsufficient: return "TruncationInsufficient";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::BranchNotSimple: return "BranchNotSimple";
    case ErrorCode::ExtensionTooLarge: return "ExtensionTooLarge";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::MultiplicityNotDecreasing: return "MultiplicityNotDecreasing";
  }
  return "Unknown";
}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

Rational make_rational(long num, long den) {
  if (den == 0) fail(ErrorCode::DivisionByZero, "zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto bad = [&] { fail(ErrorCode::Syntax, "not a rational number: '" + s + "'"); };
  if (s.empty()) bad();
  std::size_t slash = s.find('/');
  auto valid_int = [](const std::string& t) {
    std::size_t i = (!t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
    if (i >= t.size()) return false;
    for (; i < t.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
    return true;
  };
  auto strip_plus = [](std::string t) { return (!t.empty() && t[0] == '+') ? t.substr(1) : t; };
  if (slash == std::string::npos) {
    std::size_t dot = s.find('.');
    if (dot == std::string::npos) {
      if (!valid_int(s)) bad();
      return Rational(Integer(strip_plus(s), 10));
    }
    std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
    bool neg = !ip.empty() && ip[0] == '-';
    if (!ip.empty() && (ip[0] == '-' || ip[0] == '+')) ip = ip.substr(1);
    if (ip.empty()) ip = "0";
    if (!valid_int(ip) || (!fp.empty() && !valid_int(fp)) || (!fp.empty() && (fp[0] == '-' || fp[0] == '+'))) bad();
    Integer den = 1;
    for (std::size_t i = 0; i < fp.size(); ++i) den *= 10;
    Rational q(Integer(ip + fp, 10), den);
    q.canonicalize();
    return neg ? Rational(-q) : q;
  }
  std::string n = s.substr(0, slash), d = s.substr(slash + 1);
  if (!valid_int(n) || !valid_int(d) || d[0] == '-' || d[0] == '+') bad();
  Integer den(d, 10);
  if (den == 0) fail(ErrorCode::DivisionByZero, "zero denominator in '" + s + "'");
  Rational q(Integer(strip_plus(n), 10), den);
  q.canonicalize();
  return q;
}

std::string to_string(const Integer& z) { return z.get_str(); }

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

double to_double(const Rational& q) { return q.get_d(); }

Integer floor_int(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Integer ceil_int(const Rational& q) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Rational pow(const Rational& base, unsigned exponent) {
  Rational r(1), b = base;
  while (exponent) {
    if (exponent & 1U) r *= b;
    exponent >>= 1U;
    if (exponent) b *= b;
  }
  return r;
}

Rational binomial(unsigned n, unsigned k) {
  if (k > n) return Rational(0);
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return Rational(r);
}

Rational factorial(unsigned n) {
  Integer r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return Rational(r);
}

Integer lcm_int(const Integer& a, const Integer& b) {
  Integer r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

std::vector<Integer> small_divisors(const Integer& n, unsigned long limit) {
  std::vector<Integer> out;
  Integer m = abs(n);
  if (m == 0 || m > Integer(limit) * Integer(limit)) return out;
  std::vector<std::pair<Integer, unsigned>> factors;
  Integer rest = m;
  for (unsigned long p = 2; Integer(p) * Integer(p) <= rest; ++p) {
    if (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
      unsigned e = 0;
      while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
        rest /= static_cast<unsigned long>(p);
        ++e;
      }
      factors.push_back({Integer(p), e});
    }
  }
  if (rest > 1) factors.push_back({rest, 1});
  out.push_back(Integer(1));
  for (auto& [p, e] : factors) {
    std::size_t base = out.size();
    Integer pk = 1;
    for (unsigned k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
    }
  }
  return out;
}

RInterval operator+(const RInterval& a, const RInterval& b) { return {a.lo + b.lo, a.hi + b.hi}; }
RInterval operator-(const RInterval& a, const RInterval& b) { return {a.lo - b.hi, a.hi - b.lo}; }

RInterval operator*(const RInterval& a, const RInterval& b) {
  Rational p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
  Rational lo = p1, hi = p1;
  for (const Rational* p : {&p2, &p3, &p4}) {
    if (*p < lo) lo = *p;
    if (*p > hi) hi = *p;
  }
  return {lo, hi};
}

RInterval operator*(const Rational& c, const RInterval& a) {
  if (sign(c) >= 0) return {c * a.lo, c * a.hi};
  return {c * a.hi, c * a.lo};
}

}  // namespace nc
