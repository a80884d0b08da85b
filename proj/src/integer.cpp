#include "wsurg/integer.hpp"

#include "wsurg/errors.hpp"

#include <limits>

namespace wsurg {

Integer binom(long n, long k) {
  if (n < 0 || k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  Integer r = 1;
  for (long i = 1; i <= k; ++i) {
    r *= (n - k + i);
    r /= i;
  }
  return r;
}

Integer pow2(long e) {
  if (e < 0) throw ValidationError("pow2: negative exponent");
  Integer r = 1;
  r <<= static_cast<unsigned>(e);
  return r;
}

long to_long(const Integer& v) {
  if (v > std::numeric_limits<long>::max() || v < std::numeric_limits<long>::min())
    throw ValidationError("integer out of machine range: " + v.str());
  return static_cast<long>(v);
}

}  // namespace wsurg
