#include "sandwich/numeric.hpp"

#include <sstream>

namespace sandwich {

std::string to_string(const Int& x) { return x.str(); }

std::string to_string(const Rat& x) {
  if (denominator(x) == 1) return numerator(x).str();
  return numerator(x).str() + "/" + denominator(x).str();
}

template <class Vec>
static std::string join_impl(const Vec& v, char sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += to_string(v[i]);
  }
  return out;
}

std::string join(const IntVec& v, char sep) { return join_impl(v, sep); }
std::string join(const RatVec& v, char sep) { return join_impl(v, sep); }

}  // namespace sandwich
