#include "cifc/prob.hpp"

#include <cmath>
#include <cstddef>
#include <sstream>

#include "cifc/channel.hpp"

namespace cifc {

namespace {

constexpr const char* kRoleNames[kRoleCount] = {
    "U", "U1", "U2", "V", "U1c", "U2c", "U1pb", "U2pb",
    "X1", "X2", "Y1", "Y2", "Y2P", "W1", "W2", "T",
};

double plogp_sum(const std::vector<double>& values) {
    double h = 0.0;
    for (double p : values)
        if (p > 0.0) h -= p * std::log2(p);
    return h;
}

} // namespace

const char* role_name(Role r) { return kRoleNames[static_cast<int>(r)]; }

std::optional<Role> role_from_name(std::string_view name) {
    for (int i = 0; i < kRoleCount; ++i)
        if (name == kRoleNames[i]) return static_cast<Role>(i);
    return std::nullopt;
}

std::vector<Role> RoleSet::to_vector() const {
    std::vector<Role> out;
    for (int i = 0; i < kRoleCount; ++i)
        if (mask_ & (1u << i)) out.push_back(static_cast<Role>(i));
    return out;
}

std::string RoleSet::to_string() const {
    std::string out;
    for (Role r : to_vector()) {
        if (!out.empty()) out += ",";
        out += role_name(r);
    }
    return "{" + out + "}";
}

void JointPMF::rebuild_strides() {
    strides_.assign(axes_.size(), 1);
    for (int a = static_cast<int>(axes_.size()) - 2; a >= 0; --a)
        strides_[a] = strides_[a + 1] * static_cast<std::size_t>(axes_[a + 1].card);
}

JointPMF JointPMF::unchecked(std::vector<double> values, std::vector<Axis> axes) {
    JointPMF p;
    p.axes_ = std::move(axes);
    p.values_ = std::move(values);
    p.rebuild_strides();
    return p;
}

JointPMF JointPMF::from_table(std::vector<double> values, std::vector<Axis> axes) {
    std::size_t cells = 1;
    RoleSet seen;
    for (const Axis& ax : axes) {
        if (ax.card < 1) fail(Errc::shape_mismatch, "axis cardinality must be >= 1");
        if (seen.contains(ax.role))
            fail(Errc::role_collision, std::string("duplicate axis ") + role_name(ax.role));
        seen.add(ax.role);
        cells *= static_cast<std::size_t>(ax.card);
    }
    if (values.size() != cells) {
        std::ostringstream os;
        os << "expected " << cells << " values, got " << values.size();
        fail(Errc::shape_mismatch, os.str());
    }
    double sum = 0.0;
    for (double& v : values) {
        if (v < -1e-15) fail(Errc::negative_mass, "negative probability entry");
        if (v < 0.0) v = 0.0;
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        std::ostringstream os;
        os << "total mass " << sum;
        fail(Errc::mass_not_one, os.str());
    }
    if (sum != 1.0)
        for (double& v : values) v /= sum;
    return unchecked(std::move(values), std::move(axes));
}

RoleSet JointPMF::roles() const {
    RoleSet s;
    for (const Axis& ax : axes_) s.add(ax.role);
    return s;
}

int JointPMF::axis_of(Role r) const {
    for (std::size_t a = 0; a < axes_.size(); ++a)
        if (axes_[a].role == r) return static_cast<int>(a);
    return -1;
}

int JointPMF::card(Role r) const {
    int a = axis_of(r);
    if (a < 0) fail(Errc::unknown_role, std::string("no axis ") + role_name(r));
    return axes_[a].card;
}

double JointPMF::at(std::span<const int> index) const {
    if (index.size() != axes_.size()) fail(Errc::shape_mismatch, "index rank mismatch");
    std::size_t lin = 0;
    for (std::size_t a = 0; a < axes_.size(); ++a) lin += strides_[a] * static_cast<std::size_t>(index[a]);
    return values_[lin];
}

double JointPMF::total_mass() const {
    double sum = 0.0;
    for (double v : values_) sum += v;
    return sum;
}

namespace {

// Accumulates src cells into dst[sum_a digit_a * weight_a]; covers
// marginalization, axis merging and renaming in one pass.
std::vector<double> remap_linear(const JointPMF& src, const std::vector<std::size_t>& weight,
                                 std::size_t out_size) {
    std::vector<double> out(out_size, 0.0);
    const auto& axes = src.axes();
    const auto& values = src.values();
    const int rank = static_cast<int>(axes.size());
    std::vector<int> digit(axes.size(), 0);
    std::size_t dst = 0;
    for (std::size_t cell = 0; cell < values.size(); ++cell) {
        out[dst] += values[cell];
        for (int a = rank - 1; a >= 0; --a) {
            if (++digit[a] < axes[a].card) {
                dst += weight[a];
                break;
            }
            digit[a] = 0;
            dst -= weight[a] * static_cast<std::size_t>(axes[a].card - 1);
        }
    }
    return out;
}

} // namespace

JointPMF JointPMF::marginal(RoleSet keep) const {
    if (!keep.subset_of(roles()))
        fail(Errc::unknown_role, "marginal over absent roles " + keep.to_string());
    std::vector<Axis> out_axes;
    for (const Axis& ax : axes_)
        if (keep.contains(ax.role)) out_axes.push_back(ax);
    std::vector<std::size_t> out_strides(out_axes.size(), 1);
    for (int a = static_cast<int>(out_axes.size()) - 2; a >= 0; --a)
        out_strides[a] = out_strides[a + 1] * static_cast<std::size_t>(out_axes[a + 1].card);
    std::size_t out_size = 1;
    for (const Axis& ax : out_axes) out_size *= static_cast<std::size_t>(ax.card);

    std::vector<std::size_t> weight(axes_.size(), 0);
    std::size_t k = 0;
    for (std::size_t a = 0; a < axes_.size(); ++a)
        if (keep.contains(axes_[a].role)) weight[a] = out_strides[k++];

    return unchecked(remap_linear(*this, weight, out_size), std::move(out_axes));
}

JointPMF JointPMF::merge_axes(RoleSet parts, Role merged) const {
    if (!parts.subset_of(roles()) || parts.empty())
        fail(Errc::unknown_role, "merge over absent roles " + parts.to_string());
    RoleSet kept(roles().mask() & ~parts.mask());
    if (kept.contains(merged))
        fail(Errc::role_collision, std::string("merged role already present: ") + role_name(merged));

    // Merged digit is row-major over the part axes in their original order.
    std::size_t merged_card = 1;
    for (const Axis& ax : axes_)
        if (parts.contains(ax.role)) merged_card *= static_cast<std::size_t>(ax.card);

    std::vector<Axis> out_axes;
    bool placed = false;
    for (const Axis& ax : axes_) {
        if (parts.contains(ax.role)) {
            if (!placed) {
                out_axes.push_back({merged, static_cast<int>(merged_card)});
                placed = true;
            }
        } else {
            out_axes.push_back(ax);
        }
    }
    std::vector<std::size_t> out_strides(out_axes.size(), 1);
    for (int a = static_cast<int>(out_axes.size()) - 2; a >= 0; --a)
        out_strides[a] = out_strides[a + 1] * static_cast<std::size_t>(out_axes[a + 1].card);
    std::size_t out_size = 1;
    for (const Axis& ax : out_axes) out_size *= static_cast<std::size_t>(ax.card);

    int merged_pos = 0;
    for (std::size_t a = 0; a < out_axes.size(); ++a)
        if (out_axes[a].role == merged) merged_pos = static_cast<int>(a);

    std::vector<std::size_t> weight(axes_.size(), 0);
    std::size_t part_block = 1; // stride of each part digit inside the merged digit
    for (int a = static_cast<int>(axes_.size()) - 1; a >= 0; --a) {
        if (parts.contains(axes_[a].role)) {
            weight[a] = part_block * out_strides[merged_pos];
            part_block *= static_cast<std::size_t>(axes_[a].card);
        }
    }
    std::size_t k = 0;
    for (std::size_t a = 0; a < axes_.size(); ++a) {
        if (parts.contains(axes_[a].role)) continue;
        while (out_axes[k].role == merged) ++k;
        weight[a] = out_strides[k++];
    }

    return unchecked(remap_linear(*this, weight, out_size), std::move(out_axes));
}

JointPMF JointPMF::rename_axis(Role from, Role to) const {
    int a = axis_of(from);
    if (a < 0) fail(Errc::unknown_role, std::string("no axis ") + role_name(from));
    if (from == to) return *this;
    if (has(to)) fail(Errc::role_collision, std::string("axis already present: ") + role_name(to));
    std::vector<Axis> out_axes = axes_;
    out_axes[a].role = to;
    return unchecked(values_, std::move(out_axes));
}

JointPMF JointPMF::add_function_axis(RoleSet args, Role out, int out_card,
                                     const std::function<int(std::span<const int>)>& f) const {
    if (!args.subset_of(roles()))
        fail(Errc::unknown_role, "function args absent " + args.to_string());
    if (has(out)) fail(Errc::role_collision, std::string("axis already present: ") + role_name(out));
    if (out_card < 1) fail(Errc::shape_mismatch, "output cardinality must be >= 1");

    std::vector<int> arg_axes;
    for (std::size_t a = 0; a < axes_.size(); ++a)
        if (args.contains(axes_[a].role)) arg_axes.push_back(static_cast<int>(a));

    std::vector<Axis> out_axes = axes_;
    out_axes.push_back({out, out_card});
    std::vector<double> out_values(values_.size() * static_cast<std::size_t>(out_card), 0.0);

    const int rank = static_cast<int>(axes_.size());
    std::vector<int> digit(axes_.size(), 0);
    std::vector<int> arg_digit(arg_axes.size(), 0);
    for (std::size_t cell = 0; cell < values_.size(); ++cell) {
        for (std::size_t j = 0; j < arg_axes.size(); ++j) arg_digit[j] = digit[arg_axes[j]];
        int v = f(arg_digit);
        if (v < 0 || v >= out_card) fail(Errc::shape_mismatch, "function value out of range");
        out_values[cell * static_cast<std::size_t>(out_card) + static_cast<std::size_t>(v)] = values_[cell];
        for (int a = rank - 1; a >= 0; --a) {
            if (++digit[a] < axes_[a].card) break;
            digit[a] = 0;
        }
    }
    return unchecked(std::move(out_values), std::move(out_axes));
}

JointPMF JointPMF::add_copy_axis(Role of, Role copy) const {
    return add_function_axis({of}, copy, card(of),
                             [](std::span<const int> v) { return v[0]; });
}

JointPMF product(const JointPMF& a, const JointPMF& b) {
    if (!a.roles().disjoint(b.roles()))
        fail(Errc::role_collision, "product over overlapping roles");
    std::vector<Axis> axes = a.axes();
    axes.insert(axes.end(), b.axes().begin(), b.axes().end());
    std::vector<double> values;
    values.reserve(a.size() * b.size());
    for (double va : a.values())
        for (double vb : b.values()) values.push_back(va * vb);
    return JointPMF::unchecked(std::move(values), std::move(axes));
}

JointPMF uniform_pmf(Role r, int card) {
    if (card < 1) fail(Errc::shape_mismatch, "cardinality must be >= 1");
    return JointPMF::unchecked(std::vector<double>(card, 1.0 / card), {{r, card}});
}

JointPMF point_mass_pmf(Role r, int card, int value) {
    if (card < 1 || value < 0 || value >= card) fail(Errc::shape_mismatch, "point mass out of range");
    std::vector<double> v(card, 0.0);
    v[static_cast<std::size_t>(value)] = 1.0;
    return JointPMF::unchecked(std::move(v), {{r, card}});
}

namespace {

double subset_entropy(const JointPMF& p, RoleSet s) {
    if (s == p.roles()) return plogp_sum(p.values());
    if (s.empty()) return 0.0;
    return plogp_sum(p.marginal(s).values());
}

void check_subsets(const JointPMF& p, RoleSet a, RoleSet b, const char* what) {
    if (!a.subset_of(p.roles()) || !b.subset_of(p.roles()))
        fail(Errc::unknown_role, std::string(what) + " over absent roles");
    if (!a.disjoint(b))
        fail(Errc::overlapping_sets, std::string(what) + " sets overlap");
}

} // namespace

Bits entropy(const JointPMF& p, RoleSet targets, RoleSet given) {
    check_subsets(p, targets, given, "entropy");
    if (given.empty()) return subset_entropy(p, targets);
    return subset_entropy(p, targets | given) - subset_entropy(p, given);
}

Bits mutual_information(const JointPMF& p, RoleSet a, RoleSet b, RoleSet given) {
    check_subsets(p, a, b, "mutual information");
    if (!given.subset_of(p.roles())) fail(Errc::unknown_role, "conditioning on absent roles");
    if (!given.disjoint(a) || !given.disjoint(b))
        fail(Errc::overlapping_sets, "mutual information sets overlap");
    double i = subset_entropy(p, a | given) + subset_entropy(p, b | given) -
               subset_entropy(p, a | b | given) - subset_entropy(p, given);
    return i < 0.0 ? 0.0 : i;
}

Bits EntropyCache::H(RoleSet s) {
    auto it = memo_.find(s.mask());
    if (it != memo_.end()) return it->second;
    double h = subset_entropy(*p_, s);
    memo_.emplace(s.mask(), h);
    return h;
}

Bits EntropyCache::H(RoleSet targets, RoleSet given) { return H(targets | given) - H(given); }

Bits EntropyCache::I(RoleSet a, RoleSet b, RoleSet given) {
    double i = H(a | given) + H(b | given) - H(a | b | given) - H(given);
    return i < 0.0 ? 0.0 : i;
}

JointPMF compose_with_channel(const JointPMF& input, const CifcChannel& ch) {
    if (!input.has(Role::X1) || !input.has(Role::X2))
        fail(Errc::alphabet_mismatch, "input distribution must carry X1 and X2");
    if (input.card(Role::X1) != ch.card_x1() || input.card(Role::X2) != ch.card_x2())
        fail(Errc::alphabet_mismatch, "input alphabet does not match channel");
    if (input.has(Role::Y1) || input.has(Role::Y2))
        fail(Errc::role_collision, "input already carries channel outputs");

    const int cy1 = ch.card_y1();
    const int cy2 = ch.card_y2();
    std::vector<Axis> out_axes = input.axes();
    out_axes.push_back({Role::Y1, cy1});
    out_axes.push_back({Role::Y2, cy2});

    const int ax1 = input.axis_of(Role::X1);
    const int ax2 = input.axis_of(Role::X2);
    const auto& axes = input.axes();
    const auto& values = input.values();
    const int rank = static_cast<int>(axes.size());

    std::vector<double> out(values.size() * static_cast<std::size_t>(cy1 * cy2), 0.0);
    std::vector<int> digit(axes.size(), 0);
    std::size_t base = 0;
    for (std::size_t cell = 0; cell < values.size(); ++cell, base += static_cast<std::size_t>(cy1 * cy2)) {
        double v = values[cell];
        if (v > 0.0) {
            int x1 = digit[ax1], x2 = digit[ax2];
            for (int y1 = 0; y1 < cy1; ++y1)
                for (int y2 = 0; y2 < cy2; ++y2)
                    out[base + static_cast<std::size_t>(y1 * cy2 + y2)] = v * ch.kernel(x1, x2, y1, y2);
        }
        for (int a = rank - 1; a >= 0; --a) {
            if (++digit[a] < axes[a].card) break;
            digit[a] = 0;
        }
    }
    return JointPMF::unchecked(std::move(out), std::move(out_axes));
}

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::negative_mass: return "NegativeMass";
        case Errc::mass_not_one: return "MassNotOne";
        case Errc::shape_mismatch: return "ShapeMismatch";
        case Errc::unknown_role: return "UnknownRole";
        case Errc::overlapping_sets: return "OverlappingSets";
        case Errc::alphabet_mismatch: return "AlphabetMismatch";
        case Errc::role_collision: return "RoleCollision";
        case Errc::row_not_stochastic: return "RowNotStochastic";
        case Errc::unknown_name: return "UnknownName";
        case Errc::parse_error: return "ParseError";
        case Errc::schema_violation: return "SchemaViolation";
        case Errc::unknown_variable: return "UnknownVariable";
        case Errc::unbounded: return "Unbounded";
        case Errc::empty_region: return "EmptyRegion";
        case Errc::factorization_mismatch: return "FactorizationMismatch";
        case Errc::bad_coupling: return "BadCoupling";
        case Errc::not_semideterministic: return "NotSemiDeterministic";
        case Errc::not_deterministic: return "NotDeterministic";
        case Errc::unsupported_bound: return "UnsupportedBound";
    }
    return "Error";
}

} // namespace cifc
