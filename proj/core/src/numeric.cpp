#include "ift/numeric.hpp"

#include <cstdio>
#include <string>

#include "ift/errors.hpp"

namespace ift {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kInvalidTree: return "invalid_tree";
    case ErrorCode::kPrecondition: return "precondition";
    case ErrorCode::kZeroProbability: return "zero_probability";
    case ErrorCode::kCapExceeded: return "cap_exceeded";
    case ErrorCode::kFormat: return "format";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kScanViolation: return "scan_violation";
  }
  return "unknown";
}

std::string Field<double>::to_string(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Rational Field<Rational>::from_ratio(std::int64_t num, std::int64_t den) {
  if (den == 0) throw Error(ErrorCode::kInvalidArgument, "zero denominator");
  Rational q(mpz_class(std::to_string(num)), mpz_class(std::to_string(den)));
  q.canonicalize();
  return q;
}

Rational Field<Rational>::from_double(double x) {
  if (!std::isfinite(x)) throw Error(ErrorCode::kInvalidArgument, "non-finite value");
  Rational q;
  mpq_set_d(q.get_mpq_t(), x);
  return q;
}

std::string Field<Rational>::to_string(const Rational& x) {
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto slash = s.find('/');
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  auto is_integer = [](const std::string& t) {
    std::size_t i = (!t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
    if (i >= t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  if (!is_integer(num) || !is_integer(den))
    throw Error(ErrorCode::kFormat, "not a rational: '" + s + "'");
  if (num[0] == '+') num.erase(0, 1);
  if (den[0] == '+') den.erase(0, 1);
  mpz_class n(num), d(den);
  if (d == 0) throw Error(ErrorCode::kFormat, "zero denominator in '" + s + "'");
  Rational q(n, d);
  q.canonicalize();
  return q;
}

template <>
Rational correlation_from_string<Rational>(std::string_view text) {
  return parse_rational(text);
}

template <>
double correlation_from_string<double>(std::string_view text) {
  if (text.find('/') != std::string_view::npos) return parse_rational(text).get_d();
  std::string s(text);
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw Error(ErrorCode::kFormat, "not a number: '" + s + "'");
  return x;
}

}  // namespace ift
