#pragma once

#include <cstdint>
#include <string>

#include "permubuf/errors.hpp"

namespace permubuf {

// All exact quantities in this library are 64-bit signed integers.
// 20! = 2,432,902,008,176,640,000 fits; every operation is overflow-checked.
using exact_int = std::int64_t;

inline exact_int checked_add(exact_int a, exact_int b) {
    exact_int r;
    if (__builtin_add_overflow(a, b, &r))
        throw arithmetic_overflow_error("exact integer addition overflow: " +
                                        std::to_string(a) + " + " + std::to_string(b));
    return r;
}

inline exact_int checked_sub(exact_int a, exact_int b) {
    exact_int r;
    if (__builtin_sub_overflow(a, b, &r))
        throw arithmetic_overflow_error("exact integer subtraction overflow: " +
                                        std::to_string(a) + " - " + std::to_string(b));
    return r;
}

inline exact_int checked_mul(exact_int a, exact_int b) {
    exact_int r;
    if (__builtin_mul_overflow(a, b, &r))
        throw arithmetic_overflow_error("exact integer multiplication overflow: " +
                                        std::to_string(a) + " * " + std::to_string(b));
    return r;
}

// n! for 0 <= n <= 20 (the largest factorial representable in 64 bits).
inline exact_int factorial(int n) {
    if (n < 0)
        throw invalid_parameter_error("factorial of negative argument");
    if (n > 20)
        throw arithmetic_overflow_error("factorial(" + std::to_string(n) +
                                        ") exceeds 64-bit exact range (max 20!)");
    exact_int r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

// Binomial coefficient by the multiplicative formula; every intermediate
// product is divisible by the running denominator, so arithmetic stays exact.
inline exact_int binomial(int n, int k) {
    if (n < 0 || k < 0)
        throw invalid_parameter_error("binomial with negative argument");
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    exact_int r = 1;
    for (int i = 1; i <= k; ++i) {
        r = checked_mul(r, n - k + i);
        r /= i;
    }
    return r;
}

} // namespace permubuf
