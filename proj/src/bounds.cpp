#include "cifc/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include <json.hpp>

namespace cifc {

namespace {

constexpr double kTol = 1e-9;

using R = Role;

RatePolytope2D make_region(std::vector<LinearConstraint> rows) {
    RateSystem sys;
    sys.rows = std::move(rows);
    sys = remove_redundant(sys);
    return RatePolytope2D(sys.rows);
}

LinearConstraint r1_row(double rhs) { return LinearConstraint({{RateVar::R1, 1}}, Sense::le, rhs); }
LinearConstraint r2_row(double rhs) { return LinearConstraint({{RateVar::R2, 1}}, Sense::le, rhs); }
LinearConstraint sum_row(double rhs) {
    return LinearConstraint({{RateVar::R1, 1}, {RateVar::R2, 1}}, Sense::le, rhs);
}

void require_tag(const AuxAssignment& a, Factorization tag, const char* where) {
    if (a.tag() != tag)
        fail(Errc::factorization_mismatch,
             std::string(where) + " needs a " + factorization_name(tag) + " assignment");
}

void require_roles(const JointPMF& pmf, RoleSet need, const char* where) {
    if (!need.subset_of(pmf.roles()))
        fail(Errc::factorization_mismatch,
             std::string(where) + " needs roles " + need.to_string());
}

// Pointwise conditional-independence check a _||_ b | c via cross
// multiplication p(a,b,c) p(c) == p(a,c) p(b,c), tolerance 1e-9.
bool cond_independent(const JointPMF& pmf, RoleSet a, RoleSet b, RoleSet c) {
    JointPMF full = pmf.marginal(a | b | c);
    JointPMF pc = c.empty() ? JointPMF() : pmf.marginal(c);
    JointPMF pac = pmf.marginal(a | c);
    JointPMF pbc = pmf.marginal(b | c);

    const auto& axes = full.axes();
    std::vector<int> digit(axes.size(), 0);
    std::vector<int> idx;
    auto value_in = [&](const JointPMF& m) {
        idx.clear();
        for (const Axis& ax : m.axes())
            for (std::size_t k = 0; k < axes.size(); ++k)
                if (axes[k].role == ax.role) idx.push_back(digit[k]);
        return m.at(idx);
    };
    for (std::size_t cell = 0; cell < full.size(); ++cell) {
        double lhs = full.values()[cell] * (c.empty() ? 1.0 : value_in(pc));
        double rhs = value_in(pac) * value_in(pbc);
        if (std::abs(lhs - rhs) > kTol) return false;
        for (int k = static_cast<int>(axes.size()) - 1; k >= 0; --k) {
            if (++digit[k] < axes[k].card) break;
            digit[k] = 0;
        }
    }
    return true;
}

} // namespace

const char* factorization_name(Factorization f) {
    switch (f) {
        case Factorization::GENERIC: return "GENERIC";
        case Factorization::WU: return "WU";
        case Factorization::BC: return "BC";
        case Factorization::RTD: return "RTD";
    }
    return "?";
}

AuxAssignment AuxAssignment::make(JointPMF pmf, Factorization tag) {
    if (!pmf.has(R::X1) || !pmf.has(R::X2))
        fail(Errc::factorization_mismatch, "assignment must carry X1 and X2");
    RoleSet need;
    switch (tag) {
        case Factorization::GENERIC: break;
        case Factorization::WU: need = {R::U}; break;
        case Factorization::BC: need = {R::U1, R::U2, R::V}; break;
        case Factorization::RTD: need = {R::U2c, R::U1c, R::U1pb, R::U2pb}; break;
    }
    if (!need.subset_of(pmf.roles()))
        fail(Errc::factorization_mismatch,
             std::string(factorization_name(tag)) + " assignment needs roles " + need.to_string());
    if (tag == Factorization::BC) {
        if (!cond_independent(pmf, {R::U1}, {R::U2}, {}))
            fail(Errc::factorization_mismatch, "BC factorization: U1 and U2 not independent");
        if (!cond_independent(pmf, {R::X2}, {R::U1}, {R::U2, R::V}))
            fail(Errc::factorization_mismatch, "BC factorization: X2 depends on U1 given (U2,V)");
        if (!cond_independent(pmf, {R::X1}, {R::X2}, {R::U1, R::U2, R::V}))
            fail(Errc::factorization_mismatch,
                 "BC factorization: X1 and X2 not independent given (U1,U2,V)");
    }
    AuxAssignment a;
    a.pmf_ = std::move(pmf);
    a.tag_ = tag;
    return a;
}

Coupling Coupling::make(const CifcChannel& ch, std::vector<double> q) {
    Coupling c;
    c.card_x1_ = ch.card_x1();
    c.card_x2_ = ch.card_x2();
    c.card_y1_ = ch.card_y1();
    c.card_y2_ = ch.card_y2();
    std::size_t cells = static_cast<std::size_t>(c.card_x1_) * c.card_x2_ * c.card_y1_ * c.card_y2_;
    if (q.size() != cells) fail(Errc::bad_coupling, "coupling table shape mismatch");
    c.q_ = std::move(q);
    for (int x1 = 0; x1 < c.card_x1_; ++x1)
        for (int x2 = 0; x2 < c.card_x2_; ++x2) {
            for (int y1 = 0; y1 < c.card_y1_; ++y1) {
                double s = 0.0;
                for (int y2p = 0; y2p < c.card_y2_; ++y2p) s += c.q(x1, x2, y1, y2p);
                if (std::abs(s - ch.marginal_y1(x1, x2, y1)) > kTol)
                    fail(Errc::bad_coupling, "coupling Y1 marginal differs from channel");
            }
            for (int y2p = 0; y2p < c.card_y2_; ++y2p) {
                double s = 0.0;
                for (int y1 = 0; y1 < c.card_y1_; ++y1) s += c.q(x1, x2, y1, y2p);
                if (std::abs(s - ch.marginal_y2(x1, x2, y2p)) > kTol)
                    fail(Errc::bad_coupling, "coupling Y2' marginal differs from channel");
            }
        }
    return c;
}

Coupling Coupling::identity(const CifcChannel& ch) {
    return make(ch, ch.kernel_values());
}

Coupling Coupling::independent(const CifcChannel& ch) {
    std::vector<double> q;
    q.reserve(ch.kernel_values().size());
    for (int x1 = 0; x1 < ch.card_x1(); ++x1)
        for (int x2 = 0; x2 < ch.card_x2(); ++x2)
            for (int y1 = 0; y1 < ch.card_y1(); ++y1)
                for (int y2p = 0; y2p < ch.card_y2(); ++y2p)
                    q.push_back(ch.marginal_y1(x1, x2, y1) * ch.marginal_y2(x1, x2, y2p));
    return make(ch, std::move(q));
}

double Coupling::q(int x1, int x2, int y1, int y2p) const {
    return q_[((static_cast<std::size_t>(x1) * card_x2_ + x2) * card_y1_ + y1) * card_y2_ + y2p];
}

JointPMF coupling_joint(const JointPMF& input, const Coupling& c) {
    JointPMF in = input.marginal({R::X1, R::X2});
    int cx1 = in.card(R::X1);
    int cx2 = in.card(R::X2);
    bool x1_first = in.axes()[0].role == R::X1;
    std::vector<Axis> axes{{R::X1, cx1}, {R::X2, cx2}, {R::Y1, c.card_y1()}, {R::Y2P, c.card_y2()}};
    std::vector<double> values(static_cast<std::size_t>(cx1) * cx2 * c.card_y1() * c.card_y2());
    std::size_t k = 0;
    for (int x1 = 0; x1 < cx1; ++x1)
        for (int x2 = 0; x2 < cx2; ++x2) {
            std::vector<int> idx = x1_first ? std::vector<int>{x1, x2} : std::vector<int>{x2, x1};
            double p = in.at(idx);
            for (int y1 = 0; y1 < c.card_y1(); ++y1)
                for (int y2p = 0; y2p < c.card_y2(); ++y2p) values[k++] = p * c.q(x1, x2, y1, y2p);
        }
    return JointPMF::unchecked(std::move(values), std::move(axes));
}

RatePolytope2D outer_bound_wu(const CifcChannel& ch, const AuxAssignment& a) {
    require_tag(a, Factorization::WU, "outer_bound_wu");
    JointPMF joint = compose_with_channel(a.pmf(), ch);
    EntropyCache e(joint);
    double r1 = e.I({R::X1}, {R::Y1}, {R::X2});
    double r2 = e.I({R::X2, R::U}, {R::Y2});
    double sum = r2 + e.I({R::X1}, {R::Y1}, {R::X2, R::U});
    return make_region({r1_row(r1), r2_row(r2), sum_row(sum)});
}

CornerPair wu_corner_points(const CifcChannel& ch, const AuxAssignment& a) {
    require_tag(a, Factorization::WU, "wu_corner_points");
    JointPMF joint = compose_with_channel(a.pmf(), ch);
    EntropyCache e(joint);
    double i_y1_x1_ux2 = e.I({R::Y1}, {R::X1}, {R::U, R::X2});
    double i_y2_ux2 = e.I({R::Y2}, {R::U, R::X2});
    double i_y1_u_x2 = e.I({R::Y1}, {R::U}, {R::X2});
    CornerPair out;
    out.delta = std::max(0.0, i_y2_ux2 - i_y1_u_x2);
    out.point_a = {i_y1_x1_ux2, i_y2_ux2};
    out.point_b = {i_y1_x1_ux2 + i_y2_ux2 - out.delta, out.delta};
    return out;
}

RatePolytope2D outer_bound_bc(const CifcChannel& ch, const AuxAssignment& a) {
    require_tag(a, Factorization::BC, "outer_bound_bc");
    JointPMF joint = compose_with_channel(a.pmf(), ch);
    EntropyCache e(joint);
    double r1 = e.I({R::V, R::U1}, {R::Y1});
    double r2 = e.I({R::V, R::U2}, {R::Y2});
    double sum1 = r1 + e.I({R::U2}, {R::Y2}, {R::U1, R::V});
    double sum2 = r2 + e.I({R::U1}, {R::Y1}, {R::U2, R::V});
    return make_region({r1_row(r1), r2_row(r2), sum_row(sum1), sum_row(sum2)});
}

namespace {

RatePolytope2D marginal_bound(const CifcChannel& ch, const JointPMF& input,
                              const std::vector<const Coupling*>& couplings) {
    require_roles(input, {R::X1, R::X2}, "outer_bound_marginal");
    JointPMF joint = compose_with_channel(input.marginal({R::X1, R::X2}), ch);
    EntropyCache e(joint);
    double r1 = e.I({R::Y1}, {R::X1}, {R::X2});
    double r2 = e.I({R::X1, R::X2}, {R::Y2});
    double best = std::numeric_limits<double>::infinity();
    for (const Coupling* c : couplings) {
        JointPMF cj = coupling_joint(input, *c);
        best = std::min(best, mutual_information(cj, {R::Y1}, {R::X1}, {R::Y2P, R::X2}));
    }
    return make_region({r1_row(r1), r2_row(r2), sum_row(r2 + best)});
}

} // namespace

RatePolytope2D outer_bound_marginal(const CifcChannel& ch, const JointPMF& input,
                                    const std::vector<Coupling>& couplings) {
    Coupling id = Coupling::identity(ch);
    std::vector<const Coupling*> all{&id};
    for (const Coupling& c : couplings) all.push_back(&c);
    return marginal_bound(ch, input, all);
}

RatePolytope2D outer_bound_marginal_literal(const CifcChannel& ch, const JointPMF& input,
                                            const Coupling& coupling) {
    return marginal_bound(ch, input, {&coupling});
}

RatePolytope2D capacity_better_cognitive(const CifcChannel& ch, const AuxAssignment& a) {
    require_tag(a, Factorization::WU, "capacity_better_cognitive");
    JointPMF joint = compose_with_channel(a.pmf(), ch);
    EntropyCache e(joint);
    double r1 = e.I({R::Y1}, {R::U, R::X1}, {R::X2});
    double r2 = e.I({R::Y2}, {R::U, R::X2});
    double sum1 = r2 + e.I({R::Y1}, {R::X1}, {R::X2, R::U});
    double sum2 = e.I({R::Y1}, {R::X2, R::U, R::X1});
    return make_region({r1_row(r1), r2_row(r2), sum_row(sum1), sum_row(sum2)});
}

RatePolytope2D capacity_semidet(const CifcChannel& ch, const AuxAssignment& a) {
    require_tag(a, Factorization::WU, "capacity_semidet");
    if (!ch.is_semideterministic())
        fail(Errc::not_semideterministic, "capacity_semidet needs a deterministic first output");
    JointPMF joint = compose_with_channel(a.pmf(), ch);
    EntropyCache e(joint);
    double r1 = e.H({R::Y1}, {R::X2});
    double r2 = e.I({R::Y2}, {R::U, R::X2});
    double sum = r2 + e.H({R::Y1}, {R::U, R::X2});
    return make_region({r1_row(r1), r2_row(r2), sum_row(sum)});
}

RatePolytope2D capacity_det(const CifcChannel& ch, const JointPMF& input) {
    if (!ch.is_deterministic()) fail(Errc::not_deterministic, "capacity_det needs deterministic outputs");
    require_roles(input, {R::X1, R::X2}, "capacity_det");
    JointPMF joint = compose_with_channel(input.marginal({R::X1, R::X2}), ch);
    EntropyCache e(joint);
    double r1 = e.H({R::Y1}, {R::X2});
    double r2 = e.H({R::Y2});
    double sum = r2 + e.H({R::Y1}, {R::Y2, R::X2});
    return make_region({r1_row(r1), r2_row(r2), sum_row(sum)});
}

SemidetSubRegions semidet_sub_regions(const CifcChannel& ch, const AuxAssignment& a) {
    if (!ch.is_semideterministic())
        fail(Errc::not_semideterministic, "semidet_sub_regions needs a deterministic first output");
    require_roles(a.pmf(), {R::U1pb, R::U2pb, R::X1, R::X2}, "semidet_sub_regions");
    JointPMF joint = compose_with_channel(a.pmf(), ch);
    EntropyCache e(joint);

    double r1 = e.I({R::Y1}, {R::U1pb}) - e.I({R::U1pb}, {R::X2});
    double r1bis = e.I({R::Y2}, {R::U2pb}, {R::X2}) - e.I({R::U1pb}, {R::U2pb}, {R::X2}) + r1;
    double r2 = e.I({R::Y2}, {R::U2pb, R::X2});
    double sum = r2 + e.I({R::Y1}, {R::U1pb}) - e.I({R::U1pb}, {R::U2pb, R::X2});
    double r2_x2 = e.I({R::Y2}, {R::X2});

    SemidetSubRegions out;
    out.rc0 = make_region({r1_row(r1), r1_row(r1bis), r2_row(r2), sum_row(sum)});
    out.rc1 = make_region({r1_row(r1), r2_row(r2), sum_row(sum)});
    out.rc2 = make_region({r1_row(r1), r2_row(r2_x2)});
    return out;
}

namespace {

struct RtdSystem {
    RateSystem sys;
    // Indices of the droppable decoder rows within sys.rows, -1 when absent.
    int row_d = -1, row_e = -1, row_g = -1, row_i = -1;
};

RtdSystem build_rtd_system(EntropyCache& e, const RtdOptions& opts) {
    using V = RateVar;
    double A = e.I({R::U1c}, {R::X2}, {R::U2c});
    double B = e.I({R::U1pb}, {R::X2}, {R::U1c, R::U2c});
    double C = e.I({R::U1pb}, {R::X2, R::U2pb}, {R::U1c, R::U2c});

    RtdSystem out;
    Sense first = opts.bin_rate_equality ? Sense::eq : Sense::ge;
    if (opts.binning == Binning::joint) {
        out.sys.add(LinearConstraint({{V::R1cP, 1}}, first, A));
        out.sys.add(LinearConstraint({{V::R1cP, 1}, {V::R1pbP, 1}}, Sense::ge, B + A));
        out.sys.add(LinearConstraint({{V::R1cP, 1}, {V::R1pbP, 1}, {V::R2pbP, 1}}, Sense::ge, C + A));
    } else {
        out.sys.add(LinearConstraint({{V::R1cP, 1}}, first, A));
        out.sys.add(LinearConstraint({{V::R1pbP, 1}}, Sense::ge, B));
        out.sys.add(LinearConstraint({{V::R1pbP, 1}, {V::R2pbP, 1}}, Sense::ge, C));
    }

    out.row_d = static_cast<int>(out.sys.rows.size());
    out.sys.add(LinearConstraint({{V::R2c, 1}, {V::R2pa, 1}, {V::R1c, 1}, {V::R1cP, 1},
                                  {V::R2pb, 1}, {V::R2pbP, 1}},
                                 Sense::le, e.I({R::Y2}, {R::U2pb, R::U1c, R::X2, R::U2c}) + A));
    out.row_e = static_cast<int>(out.sys.rows.size());
    out.sys.add(LinearConstraint({{V::R2pa, 1}, {V::R1c, 1}, {V::R1cP, 1}, {V::R2pb, 1}, {V::R2pbP, 1}},
                                 Sense::le, e.I({R::Y2}, {R::U2pb, R::U1c, R::X2}, {R::U2c}) + A));
    out.sys.add(LinearConstraint({{V::R2pa, 1}, {V::R2pb, 1}, {V::R2pbP, 1}}, Sense::le,
                                 e.I({R::Y2}, {R::U2pb, R::X2}, {R::U1c, R::U2c}) + A));
    out.row_g = static_cast<int>(out.sys.rows.size());
    out.sys.add(LinearConstraint({{V::R1c, 1}, {V::R1cP, 1}, {V::R2pb, 1}, {V::R2pbP, 1}}, Sense::le,
                                 e.I({R::Y2}, {R::U2pb, R::U1c}, {R::X2, R::U2c}) + A));
    out.sys.add(LinearConstraint({{V::R2pb, 1}, {V::R2pbP, 1}}, Sense::le,
                                 e.I({R::Y2}, {R::U2pb}, {R::U1c, R::X2, R::U2c})));
    out.row_i = static_cast<int>(out.sys.rows.size());
    out.sys.add(LinearConstraint({{V::R2c, 1}, {V::R1c, 1}, {V::R1cP, 1}, {V::R1pb, 1}, {V::R1pbP, 1}},
                                 Sense::le, e.I({R::Y1}, {R::U1pb, R::U1c, R::U2c})));
    out.sys.add(LinearConstraint({{V::R1c, 1}, {V::R1cP, 1}, {V::R1pb, 1}, {V::R1pbP, 1}}, Sense::le,
                                 e.I({R::Y1}, {R::U1pb, R::U1c}, {R::U2c})));
    out.sys.add(LinearConstraint({{V::R1pb, 1}, {V::R1pbP, 1}}, Sense::le,
                                 e.I({R::Y1}, {R::U1pb}, {R::U1c, R::U2c})));
    return out;
}

} // namespace

RatePolytope2D inner_bound_rtd(const CifcChannel& ch, const AuxAssignment& a, RtdOptions opts) {
    require_tag(a, Factorization::RTD, "inner_bound_rtd");
    JointPMF joint = compose_with_channel(a.pmf(), ch);
    EntropyCache e(joint);
    RtdSystem rtd = build_rtd_system(e, opts);

    // A decoder row may be dropped only when its whole rate group is zero,
    // certified on the relaxed system (all four decoder rows removed) so the
    // certificate cannot depend on a row that is itself dropped.
    RateSystem relaxed;
    for (int i = 0; i < static_cast<int>(rtd.sys.rows.size()); ++i)
        if (i != rtd.row_d && i != rtd.row_e && i != rtd.row_g && i != rtd.row_i)
            relaxed.add(rtd.sys.rows[i]);

    auto is_zero = [&](RateVar v) {
        std::array<long long, kRateVarCount> obj{};
        obj[static_cast<int>(v)] = 1;
        LpResult r = max_linear(relaxed, obj);
        if (r.status == LpResult::infeasible) return true;
        return r.status == LpResult::finite && r.value <= kTol;
    };
    using V = RateVar;
    bool z_r2c = is_zero(V::R2c), z_r2pa = is_zero(V::R2pa);
    bool z_r2pb = is_zero(V::R2pb), z_r2pbP = is_zero(V::R2pbP);
    bool z_r1c = is_zero(V::R1c), z_r1cP = is_zero(V::R1cP);
    bool z_r1pb = is_zero(V::R1pb), z_r1pbP = is_zero(V::R1pbP);

    bool drop_d = z_r2c && z_r2pa && z_r2pb && z_r2pbP;
    bool drop_e = z_r2pa && z_r2pb && z_r2pbP;
    bool drop_g = z_r2pb && z_r2pbP;
    bool drop_i = z_r1c && z_r1cP && z_r1pb && z_r1pbP;

    RateSystem final_sys;
    for (int i = 0; i < static_cast<int>(rtd.sys.rows.size()); ++i) {
        if (i == rtd.row_d && drop_d) continue;
        if (i == rtd.row_e && drop_e) continue;
        if (i == rtd.row_g && drop_g) continue;
        if (i == rtd.row_i && drop_i) continue;
        final_sys.add(rtd.sys.rows[i]);
    }
    return project_to_r1_r2(final_sys);
}

JointPMF with_aux_copies(const CifcChannel& ch, const JointPMF& input,
                         const std::vector<std::pair<Role, AuxSource>>& specs) {
    JointPMF p = input.marginal({R::X1, R::X2});
    bool x1_first = p.axes()[0].role == R::X1;
    for (const auto& [role, src] : specs) {
        switch (src) {
            case AuxSource::constant:
                p = p.add_function_axis({}, role, 1, [](std::span<const int>) { return 0; });
                break;
            case AuxSource::copy_x1:
                p = p.add_copy_axis(R::X1, role);
                break;
            case AuxSource::copy_x2:
                p = p.add_copy_axis(R::X2, role);
                break;
            case AuxSource::map_f1:
                p = p.add_function_axis({R::X1, R::X2}, role, ch.card_y1(),
                                        [&ch, x1_first](std::span<const int> v) {
                                            return x1_first ? ch.f1(v[0], v[1]) : ch.f1(v[1], v[0]);
                                        });
                break;
            case AuxSource::map_f2:
                p = p.add_function_axis({R::X1, R::X2}, role, ch.card_y2(),
                                        [&ch, x1_first](std::span<const int> v) {
                                            return x1_first ? ch.f2(v[0], v[1]) : ch.f2(v[1], v[0]);
                                        });
                break;
        }
    }
    return p;
}

const char* regime_condition_name(RegimeCondition c) {
    switch (c) {
        case RegimeCondition::weak: return "weak";
        case RegimeCondition::strong: return "strong";
        case RegimeCondition::very_weak: return "very_weak";
        case RegimeCondition::very_strong: return "very_strong";
        case RegimeCondition::better_cognitive: return "better_cognitive";
    }
    return "?";
}

const char* regime_status_name(RegimeStatus s) {
    return s == RegimeStatus::violated ? "VIOLATED" : "HOLDS_AT_BUDGET";
}

const char* bound_kind_name(BoundKind b) {
    switch (b) {
        case BoundKind::rtd_inner: return "rtd_inner";
        case BoundKind::wu_outer: return "wu_outer";
        case BoundKind::bc_outer: return "bc_outer";
        case BoundKind::marginal_outer: return "marginal_outer";
        case BoundKind::semidet: return "semidet";
        case BoundKind::det: return "det";
    }
    return "?";
}

std::optional<BoundKind> bound_kind_from_name(std::string_view name) {
    for (BoundKind b : {BoundKind::rtd_inner, BoundKind::wu_outer, BoundKind::bc_outer,
                        BoundKind::marginal_outer, BoundKind::semidet, BoundKind::det})
        if (name == bound_kind_name(b)) return b;
    return std::nullopt;
}

const char* dominance_kind_name(DominanceKind k) {
    switch (k) {
        case DominanceKind::dmt_in_rtd: return "dmt_in_rtd";
        case DominanceKind::cc_in_rtd: return "cc_in_rtd";
        case DominanceKind::jiang_in_rtd: return "jiang_in_rtd";
        case DominanceKind::wu_in_marginal: return "wu_in_marginal";
    }
    return "?";
}

int default_aux_card(const CifcChannel& ch, Role r) {
    switch (r) {
        case R::U: return ch.card_x1() * ch.card_x2();
        case R::U1c:
        case R::U1pb:
        case R::U2pb: return ch.card_x1();
        case R::U2c: return ch.card_x2();
        case R::U1: return ch.card_x1();
        case R::U2: return ch.card_x2();
        case R::V: return ch.card_x1() * ch.card_x2();
        default: return 1;
    }
}

std::string regime_report_to_json(const RegimeReport& report) {
    nlohmann::json doc;
    doc["aux_cardinality"] = report.aux_cardinality;
    doc["budget"] = report.budget;
    doc["seed"] = report.seed;
    nlohmann::json conds = nlohmann::json::object();
    for (const ConditionReport& c : report.conditions) {
        nlohmann::json jc;
        jc["status"] = regime_status_name(c.status);
        jc["violation"] = round_sig(c.violation);
        if (c.witness) {
            nlohmann::json w;
            nlohmann::json roles = nlohmann::json::array();
            nlohmann::json cards = nlohmann::json::array();
            for (const Axis& ax : c.witness->axes()) {
                roles.push_back(role_name(ax.role));
                cards.push_back(ax.card);
            }
            w["roles"] = roles;
            w["cards"] = cards;
            nlohmann::json values = nlohmann::json::array();
            for (double v : c.witness->values()) values.push_back(round_sig(v));
            w["values"] = values;
            w["note"] = c.witness_note;
            jc["witness"] = w;
        }
        conds[regime_condition_name(c.condition)] = jc;
    }
    doc["conditions"] = conds;
    return doc.dump(2) + "\n";
}

std::string dominance_report_to_json(const DominanceReport& report) {
    nlohmann::json doc;
    doc["comparison"] = dominance_kind_name(report.kind);
    doc["assignments_checked"] = report.assignments_checked;
    doc["ok"] = report.ok;
    nlohmann::json rows = nlohmann::json::array();
    for (const DominanceRow& r : report.rows) {
        nlohmann::json jr;
        jr["label"] = r.label;
        jr["value_contained"] = round_sig(r.value_a);
        jr["value_containing"] = round_sig(r.value_b);
        jr["difference"] = round_sig(r.difference);
        if (r.expected) jr["expected"] = round_sig(*r.expected);
        jr["ok"] = r.ok;
        rows.push_back(jr);
    }
    doc["rows"] = rows;
    return doc.dump(2) + "\n";
}

} // namespace cifc
