#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace wsurg {

using Integer = boost::multiprecision::cpp_int;

/// Binomial coefficient with the combinatorial convention: zero whenever
/// n < 0, k < 0 or k > n. In particular binom(-1, 0) = 0.
Integer binom(long n, long k);

/// 2^e for e >= 0.
Integer pow2(long e);

/// (-1)^e.
inline int sign_pow(long e) { return (e % 2 == 0) ? 1 : -1; }

inline std::string to_string(const Integer& v) { return v.str(); }

/// Narrowing conversion that throws when the value does not fit.
long to_long(const Integer& v);

}  // namespace wsurg
