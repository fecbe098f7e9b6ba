#pragma once

#include <stdexcept>
#include <string>

namespace cifc {

enum class Errc {
    negative_mass,
    mass_not_one,
    shape_mismatch,
    unknown_role,
    overlapping_sets,
    alphabet_mismatch,
    role_collision,
    row_not_stochastic,
    unknown_name,
    parse_error,
    schema_violation,
    unknown_variable,
    unbounded,
    empty_region,
    factorization_mismatch,
    bad_coupling,
    not_semideterministic,
    not_deterministic,
    unsupported_bound,
};

const char* errc_name(Errc c);

// Single exception type for the whole library; the code distinguishes
// input errors from evaluation errors at the CLI boundary.
class Error : public std::runtime_error {
public:
    Error(Errc c, const std::string& what)
        : std::runtime_error(std::string(errc_name(c)) + ": " + what), code_(c) {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc c, const std::string& what) { throw Error(c, what); }

} // namespace cifc
