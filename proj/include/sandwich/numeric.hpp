#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <vector>

namespace sandwich {

// Exact arithmetic only: values along a chain of infinitely near points grow
// multiplicatively, so the whole library runs on arbitrary-precision
// integers and rationals.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

using IntVec = std::vector<Int>;
using RatVec = std::vector<Rat>;
using IntMat = std::vector<std::vector<Int>>;

/// ceil(a / b) for b > 0.
inline Int ceil_div(const Int& a, const Int& b) {
  Int q = a / b;
  if (a % b != 0 && a > 0) ++q;
  return q;
}

inline bool is_integral(const Rat& r) { return denominator(r) == 1; }

std::string to_string(const Int& x);
std::string to_string(const Rat& x);  // "num/den", plain integer when den == 1
std::string join(const IntVec& v, char sep = ',');
std::string join(const RatVec& v, char sep = ',');

}  // namespace sandwich
