#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ffa {

/// Arbitrary-precision integer used for all exact verification.
using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Bad parameters or malformed input (CLI exit code 2).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Data whose shape is incompatible with the request, e.g. a tap count
/// not divisible by the parallelism (CLI exit code 3).
class ShapeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses "7", "-3", "5/4" or "-1/2".
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& value);

/// True when every value has denominator 1.
bool all_integral(const std::vector<Rational>& values);

}  // namespace ffa
