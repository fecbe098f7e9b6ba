#pragma once

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cifc/errors.hpp"

namespace cifc {

// All entropies and mutual informations are in bits (log base 2).
using Bits = double;

// Axis labels for joint distributions. Every axis of a JointPMF carries
// exactly one role; no duplicates within one PMF.
enum class Role : int {
    U, U1, U2, V, U1c, U2c, U1pb, U2pb, X1, X2, Y1, Y2, Y2P, W1, W2, T,
};

inline constexpr int kRoleCount = 16;

const char* role_name(Role r);
std::optional<Role> role_from_name(std::string_view name);

// Set of roles backed by a 16-bit mask.
class RoleSet {
public:
    constexpr RoleSet() = default;
    constexpr RoleSet(std::initializer_list<Role> roles) {
        for (Role r : roles) add(r);
    }
    constexpr explicit RoleSet(std::uint32_t mask) : mask_(mask) {}

    constexpr void add(Role r) { mask_ |= bit(r); }
    constexpr void remove(Role r) { mask_ &= ~bit(r); }
    constexpr bool contains(Role r) const { return (mask_ & bit(r)) != 0; }
    constexpr bool subset_of(RoleSet other) const { return (mask_ & ~other.mask_) == 0; }
    constexpr bool disjoint(RoleSet other) const { return (mask_ & other.mask_) == 0; }
    constexpr bool empty() const { return mask_ == 0; }
    constexpr std::uint32_t mask() const { return mask_; }

    friend constexpr RoleSet operator|(RoleSet a, RoleSet b) { return RoleSet(a.mask_ | b.mask_); }
    friend constexpr bool operator==(RoleSet a, RoleSet b) { return a.mask_ == b.mask_; }

    std::vector<Role> to_vector() const;
    std::string to_string() const;

private:
    static constexpr std::uint32_t bit(Role r) { return 1u << static_cast<int>(r); }
    std::uint32_t mask_ = 0;
};

struct Axis {
    Role role;
    int card;
};

// Dense joint probability mass function over role-labeled finite axes.
// Immutable after construction; all operations are pure.
class JointPMF {
public:
    JointPMF() = default;

    // Validating constructor: clamps values in [-1e-15, 0) to zero, rejects
    // anything more negative (negative_mass), requires |sum - 1| <= 1e-9
    // (mass_not_one) and shape agreement (shape_mismatch).
    static JointPMF from_table(std::vector<double> values, std::vector<Axis> axes);

    const std::vector<Axis>& axes() const { return axes_; }
    int num_axes() const { return static_cast<int>(axes_.size()); }
    std::size_t size() const { return values_.size(); }
    const std::vector<double>& values() const { return values_; }

    RoleSet roles() const;
    bool has(Role r) const { return axis_of(r) >= 0; }
    int axis_of(Role r) const; // -1 when absent
    int card(Role r) const;    // unknown_role when absent

    double at(std::span<const int> index) const;
    double total_mass() const;

    // Sums out every axis not in `keep`; kept axes preserve their order.
    JointPMF marginal(RoleSet keep) const;

    // Flattens the axes in `parts` into a single `merged` axis placed where the
    // first part appeared; digits are row-major in the parts' axis order.
    JointPMF merge_axes(RoleSet parts, Role merged) const;

    JointPMF rename_axis(Role from, Role to) const;

    // Appends an axis `out` that is the deterministic image f(args); f receives
    // the coordinates of `args` in the order they appear among the axes.
    JointPMF add_function_axis(RoleSet args, Role out, int out_card,
                               const std::function<int(std::span<const int>)>& f) const;

    // Appends `copy` as an exact copy of `of`.
    JointPMF add_copy_axis(Role of, Role copy) const;

    // Trusted constructor for internal operations that preserve mass.
    static JointPMF unchecked(std::vector<double> values, std::vector<Axis> axes);

private:
    std::vector<Axis> axes_;
    std::vector<double> values_;
    std::vector<std::size_t> strides_;

    void rebuild_strides();
};

// Product of two PMFs over disjoint role sets.
JointPMF product(const JointPMF& a, const JointPMF& b);

JointPMF uniform_pmf(Role r, int card);
JointPMF point_mass_pmf(Role r, int card, int value);

// H(targets | given) in bits with the 0 log 0 = 0 convention.
Bits entropy(const JointPMF& p, RoleSet targets, RoleSet given = {});

// I(a; b | given) = H(a|given) - H(a|b,given); clamped to zero from below.
Bits mutual_information(const JointPMF& p, RoleSet a, RoleSet b, RoleSet given = {});

// Memoizes subset entropies of one joint; evaluators ask for many overlapping
// terms and every H(S) costs a pass over the full table.
class EntropyCache {
public:
    explicit EntropyCache(const JointPMF& p) : p_(&p) {}

    Bits H(RoleSet s);
    Bits H(RoleSet targets, RoleSet given);
    Bits I(RoleSet a, RoleSet b, RoleSet given = {});

private:
    const JointPMF* p_;
    std::unordered_map<std::uint32_t, double> memo_;
};

class CifcChannel;

// Joint over the input axes plus {Y1, Y2} via p(all) * p(y1,y2|x1,x2).
// The input must carry X1 and X2 with cardinalities matching the channel
// (alphabet_mismatch) and no Y1/Y2 axis (role_collision).
JointPMF compose_with_channel(const JointPMF& input, const CifcChannel& ch);

} // namespace cifc
