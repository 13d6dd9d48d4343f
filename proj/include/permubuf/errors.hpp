#pragma once

#include <stdexcept>
#include <string>

namespace permubuf {

// Base class for all library errors.
class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or out-of-contract input: bad parameters, unparsable files,
// non-bijective permutations, mismatched comparison lengths.
class input_error : public error {
public:
    using error::error;
};

class invalid_parameter_error : public input_error {
public:
    using input_error::input_error;
};

class invalid_permutation_error : public input_error {
public:
    using input_error::input_error;
};

class invalid_comparison_error : public input_error {
public:
    using input_error::input_error;
};

class parse_error : public input_error {
public:
    using input_error::input_error;
};

// The request is well-formed but too large to honor exactly.
class infeasible_error : public error {
public:
    using error::error;
};

class enumeration_infeasible_error : public infeasible_error {
public:
    using infeasible_error::infeasible_error;
};

class state_space_infeasible_error : public infeasible_error {
public:
    using infeasible_error::infeasible_error;
};

class cost_refusal_error : public infeasible_error {
public:
    using infeasible_error::infeasible_error;
};

// Exact integer arithmetic would wrap. Never ignored, never saturated.
class arithmetic_overflow_error : public infeasible_error {
public:
    using infeasible_error::infeasible_error;
};

} // namespace permubuf
