#include "revcat/rational.hpp"

#include <cctype>
#include <cstdlib>

#include "revcat/error.hpp"

namespace revcat {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingMenu: return "MissingMenu";
    case ErrorCode::BadSum: return "BadSum";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::ForeignItem: return "ForeignItem";
    case ErrorCode::MalformedMenu: return "MalformedMenu";
    case ErrorCode::EmptyRestriction: return "EmptyRestriction";
    case ErrorCode::BadUniverse: return "BadUniverse";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::SizeBound: return "SizeBound";
    case ErrorCode::InvalidPartition: return "InvalidPartition";
    case ErrorCode::ComponentNotPositive: return "ComponentNotPositive";
    case ErrorCode::Condition1Violated: return "Condition1Violated";
    case ErrorCode::NotRepresentable: return "NotRepresentable";
    case ErrorCode::Degenerate: return "Degenerate";
    case ErrorCode::InvalidWitness: return "InvalidWitness";
    case ErrorCode::ZeroNestMass: return "ZeroNestMass";
    case ErrorCode::BadParameter: return "BadParameter";
    case ErrorCode::NonRationalPower: return "NonRationalPower";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

[[noreturn]] void bad(std::string_view text) {
  throw Error(ErrorCode::ParseError, "not a rational number: '" + std::string(text) + "'");
}

Integer power_of_ten(unsigned long exponent) {
  Integer result;
  mpz_ui_pow_ui(result.get_mpz_t(), 10, exponent);
  return result;
}

Rational parse_decimal(std::string_view text, std::string_view original) {
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_part = text.substr(e + 1);
    bool exp_negative = false;
    if (!exp_part.empty() && (exp_part.front() == '-' || exp_part.front() == '+')) {
      exp_negative = exp_part.front() == '-';
      exp_part.remove_prefix(1);
    }
    if (!all_digits(exp_part) || exp_part.size() > 6) bad(original);
    exponent = std::strtol(std::string(exp_part).c_str(), nullptr, 10);
    if (exp_negative) exponent = -exponent;
    text = text.substr(0, e);
  }
  std::string_view int_part = text;
  std::string_view frac_part;
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    int_part = text.substr(0, dot);
    frac_part = text.substr(dot + 1);
  }
  if (int_part.empty() && frac_part.empty()) bad(original);
  if (!int_part.empty() && !all_digits(int_part)) bad(original);
  if (!frac_part.empty() && !all_digits(frac_part)) bad(original);

  Integer numerator(std::string(int_part.empty() ? "0" : int_part) + std::string(frac_part), 10);
  Rational value(numerator, power_of_ten(frac_part.size()));
  if (exponent > 0) value *= Rational(power_of_ten(static_cast<unsigned long>(exponent)));
  if (exponent < 0) value /= Rational(power_of_ten(static_cast<unsigned long>(-exponent)));
  value.canonicalize();
  return negative ? Rational(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view trimmed = text;
  while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.front()))) trimmed.remove_prefix(1);
  while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.back()))) trimmed.remove_suffix(1);
  if (trimmed.empty()) bad(text);

  if (auto slash = trimmed.find('/'); slash != std::string_view::npos) {
    std::string_view num = trimmed.substr(0, slash);
    std::string_view den = trimmed.substr(slash + 1);
    std::string_view num_digits = num;
    if (!num_digits.empty() && (num_digits.front() == '-' || num_digits.front() == '+')) num_digits.remove_prefix(1);
    if (!all_digits(num_digits) || !all_digits(den)) bad(text);
    Integer d(std::string(den), 10);
    if (d == 0) bad(text);
    Integer n(std::string(num_digits), 10);
    if (num.front() == '-') n = -n;
    Rational value(n, d);
    value.canonicalize();
    return value;
  }
  return parse_decimal(trimmed, text);
}

std::string format_rational(const Rational& value) { return value.get_str(10); }

double to_double(const Rational& value) { return value.get_d(); }

namespace {

// Exact integer k-th root of a nonnegative integer, if one exists.
bool exact_root(const Integer& value, unsigned long k, Integer& root) {
  if (k == 1) {
    root = value;
    return true;
  }
  return mpz_root(root.get_mpz_t(), value.get_mpz_t(), k) != 0;
}

}  // namespace

Rational exact_power(const Rational& base, const Rational& raw_exponent) {
  if (sgn(base) <= 0) throw Error(ErrorCode::BadParameter, "exact_power needs a positive base");
  Rational exponent = raw_exponent;
  exponent.canonicalize();
  const Integer& p = exponent.get_num();
  const Integer& q = exponent.get_den();
  const Integer magnitude_z = abs(p);
  if (magnitude_z > 4096 || q > 4096) {
    throw Error(ErrorCode::NonRationalPower, "exponent " + format_rational(exponent) + " is too large");
  }
  Integer num_root;
  Integer den_root;
  if (!exact_root(base.get_num(), q.get_ui(), num_root) || !exact_root(base.get_den(), q.get_ui(), den_root)) {
    throw Error(ErrorCode::NonRationalPower,
                format_rational(base) + "^" + format_rational(exponent) + " is irrational");
  }
  const unsigned long magnitude = magnitude_z.get_ui();
  Integer num_pow;
  Integer den_pow;
  mpz_pow_ui(num_pow.get_mpz_t(), num_root.get_mpz_t(), magnitude);
  mpz_pow_ui(den_pow.get_mpz_t(), den_root.get_mpz_t(), magnitude);
  Rational result = sgn(p) >= 0 ? Rational(num_pow, den_pow) : Rational(den_pow, num_pow);
  result.canonicalize();
  return result;
}

bool Tolerance::equal(const Rational& lhs, const Rational& rhs) const {
  if (exact()) return lhs == rhs;
  return abs(lhs - rhs) <= epsilon;
}

bool Tolerance::greater(const Rational& lhs, const Rational& rhs) const {
  return lhs - rhs > epsilon;
}

}  // namespace revcat
