#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "cifc/bounds.hpp"

namespace cifc {

using R = Role;

std::uint64_t Rng::next_u64() {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

double Rng::next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::next_exp() { return -std::log1p(-next_double()); }

JointPMF random_pmf(Rng& rng, const std::vector<Axis>& axes) {
    std::size_t cells = 1;
    for (const Axis& ax : axes) cells *= static_cast<std::size_t>(ax.card);
    std::vector<double> v(cells);
    double sum = 0.0;
    for (double& x : v) {
        x = rng.next_exp();
        sum += x;
    }
    for (double& x : v) x /= sum;
    return JointPMF::unchecked(std::move(v), axes);
}

namespace {

constexpr double kTol = 1e-9;
constexpr double kViolationTol = 1e-7;

int thread_count(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("CIFC_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

template <typename F>
void parallel_for(int n, int threads, F&& f) {
    threads = std::min(threads, n);
    if (threads <= 1) {
        for (int i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (;;) {
                int i = next.fetch_add(1);
                if (i >= n) break;
                try {
                    f(i);
                } catch (...) {
                    std::lock_guard<std::mutex> g(err_mu);
                    if (!err) err = std::current_exception();
                }
            }
        });
    for (std::thread& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

JointPMF mask_uniform(Role r, int card, unsigned mask) {
    int count = std::popcount(mask);
    std::vector<double> v(card, 0.0);
    for (int i = 0; i < card; ++i)
        if (mask & (1u << i)) v[i] = 1.0 / count;
    return JointPMF::unchecked(std::move(v), {{r, card}});
}

std::string mask_note(const char* name, unsigned mask, int card) {
    std::ostringstream os;
    os << name << "~U{";
    bool first = true;
    for (int i = 0; i < card; ++i)
        if (mask & (1u << i)) {
            if (!first) os << ",";
            os << i;
            first = false;
        }
    os << "}";
    return os.str();
}

struct Candidate {
    JointPMF pmf;
    std::string note;
};

// Uniform distributions on subsets of the input alphabets (products always,
// joint cell subsets when the grid is small). The reduced set keeps only
// full-alphabet uniforms and point masses.
std::vector<Candidate> input_sweep(const CifcChannel& ch, bool allow_joint_subsets,
                                   bool reduced) {
    int cx1 = ch.card_x1(), cx2 = ch.card_x2();
    std::vector<Candidate> out;
    if (cx1 > 20 || cx2 > 20) { // alphabets too large for subset masks
        out.push_back({product(uniform_pmf(R::X1, cx1), uniform_pmf(R::X2, cx2)),
                       "X1 uniform, X2 uniform"});
        return out;
    }
    long long full = ((1LL << cx1) - 1) * ((1LL << cx2) - 1);
    if (!reduced && cx1 <= 12 && cx2 <= 12 && full <= 4096) {
        for (unsigned m1 = 1; m1 < (1u << cx1); ++m1)
            for (unsigned m2 = 1; m2 < (1u << cx2); ++m2)
                out.push_back({product(mask_uniform(R::X1, cx1, m1), mask_uniform(R::X2, cx2, m2)),
                               mask_note("X1", m1, cx1) + ", " + mask_note("X2", m2, cx2)});
    } else {
        unsigned full1 = (1u << cx1) - 1, full2 = (1u << cx2) - 1;
        auto push = [&](unsigned m1, unsigned m2) {
            out.push_back({product(mask_uniform(R::X1, cx1, m1), mask_uniform(R::X2, cx2, m2)),
                           mask_note("X1", m1, cx1) + ", " + mask_note("X2", m2, cx2)});
        };
        push(full1, full2);
        for (int i = 0; i < cx1; ++i) push(1u << i, full2);
        for (int j = 0; j < cx2; ++j) push(full1, 1u << j);
        for (int i = 0; i < cx1; ++i)
            for (int j = 0; j < cx2; ++j) push(1u << i, 1u << j);
    }
    if (allow_joint_subsets && cx1 * cx2 <= 12) {
        int cells = cx1 * cx2;
        for (unsigned m = 1; m < (1u << cells); ++m) {
            if (std::popcount(m) < 2) continue; // point masses already covered
            int count = std::popcount(m);
            std::vector<double> v(cells, 0.0);
            for (int c = 0; c < cells; ++c)
                if (m & (1u << c)) v[c] = 1.0 / count;
            std::ostringstream note;
            note << "joint uniform on " << count << " cells";
            out.push_back({JointPMF::unchecked(std::move(v), {{R::X1, cx1}, {R::X2, cx2}}),
                           note.str()});
        }
    }
    return out;
}

// Deterministic auxiliary choices compatible with the channel and cardinality cap.
std::vector<std::pair<AuxSource, std::string>> aux_sources(const CifcChannel& ch, int max_card) {
    std::vector<std::pair<AuxSource, std::string>> out;
    out.push_back({AuxSource::constant, "const"});
    if (ch.card_x1() <= max_card) out.push_back({AuxSource::copy_x1, "=X1"});
    if (ch.card_x2() <= max_card) out.push_back({AuxSource::copy_x2, "=X2"});
    if (ch.is_semideterministic() && ch.card_y1() <= max_card)
        out.push_back({AuxSource::map_f1, "=f1(X1,X2)"});
    if (ch.is_deterministic() && ch.card_y2() <= max_card)
        out.push_back({AuxSource::map_f2, "=f2(X1,X2)"});
    return out;
}

// Cyclic coordinate ascent over block-normalized parameters with step halving.
// Stops at step 1e-7 or after max_evals objective calls; improvements must
// exceed 1e-12, ties keep the incumbent.
double ascend(std::vector<double>& params, const std::vector<std::pair<int, int>>& blocks,
              const std::function<double(const std::vector<double>&)>& objective, double start_value,
              int max_evals) {
    double best = start_value;
    double step = 0.25;
    int evals = 0;
    std::vector<double> trial;
    while (step >= 1e-7 && evals < max_evals) {
        bool improved = false;
        for (std::size_t i = 0; i < params.size() && evals < max_evals; ++i) {
            for (double dir : {1.0, -1.0}) {
                if (dir < 0 && params[i] <= 0.0) continue;
                trial = params;
                trial[i] = std::max(0.0, trial[i] + dir * step);
                const auto& blk = *std::find_if(blocks.begin(), blocks.end(), [&](const auto& b) {
                    return static_cast<int>(i) >= b.first && static_cast<int>(i) < b.first + b.second;
                });
                double s = 0.0;
                for (int k = blk.first; k < blk.first + blk.second; ++k) s += trial[k];
                if (s <= 0.0) continue;
                for (int k = blk.first; k < blk.first + blk.second; ++k) trial[k] /= s;
                double v = objective(trial);
                ++evals;
                if (v > best + 1e-12) {
                    best = v;
                    params = trial;
                    improved = true;
                    break;
                }
            }
        }
        if (!improved) step *= 0.5;
    }
    return best;
}

struct ConditionDef {
    RegimeCondition cond;
    bool needs_aux;
};

double condition_violation(RegimeCondition cond, EntropyCache& e) {
    switch (cond) {
        case RegimeCondition::weak:
            return e.I({R::U}, {R::Y2}, {R::X2}) - e.I({R::U}, {R::Y1}, {R::X2});
        case RegimeCondition::strong:
            return e.I({R::X1}, {R::Y1}, {R::X2}) - e.I({R::X1}, {R::Y2}, {R::X2});
        case RegimeCondition::very_weak:
            return std::max(e.I({R::U}, {R::Y2}, {R::X2}) - e.I({R::U}, {R::Y1}, {R::X2}),
                            e.I({R::X2}, {R::Y2}) - e.I({R::X2}, {R::Y1}));
        case RegimeCondition::very_strong:
            return std::max(e.I({R::X1}, {R::Y1}, {R::X2}) - e.I({R::X1}, {R::Y2}, {R::X2}),
                            e.I({R::Y2}, {R::X1, R::X2}) - e.I({R::Y1}, {R::X1, R::X2}));
        case RegimeCondition::better_cognitive:
            return e.I({R::Y2}, {R::X2, R::U}) - e.I({R::Y1}, {R::X2, R::U});
    }
    return 0.0;
}

} // namespace

RegimeReport classify_regime(const CifcChannel& ch, int aux_card, int budget, std::uint64_t seed) {
    if (aux_card < 1 || budget < 1)
        fail(Errc::shape_mismatch, "classify_regime needs aux_card >= 1 and budget >= 1");

    const std::vector<ConditionDef> defs{
        {RegimeCondition::weak, true},       {RegimeCondition::strong, false},
        {RegimeCondition::very_weak, true},  {RegimeCondition::very_strong, false},
        {RegimeCondition::better_cognitive, true},
    };

    struct Best {
        double violation = -std::numeric_limits<double>::infinity();
        JointPMF witness;
        std::string note;
    };
    std::vector<Best> best(defs.size());

    auto consider = [&](const JointPMF& pmf, const std::string& note, bool has_aux) {
        JointPMF joint = compose_with_channel(pmf, ch);
        EntropyCache e(joint);
        for (std::size_t k = 0; k < defs.size(); ++k) {
            if (defs[k].needs_aux && !has_aux) continue;
            if (!defs[k].needs_aux && has_aux) continue;
            double v = condition_violation(defs[k].cond, e);
            if (v > best[k].violation) {
                best[k] = {v, pmf, note};
            }
        }
    };

    // Structured sweep over the input grid, then with deterministic auxiliaries.
    for (const Candidate& c : input_sweep(ch, true, false)) consider(c.pmf, c.note, false);
    std::vector<Candidate> aux_inputs = input_sweep(ch, false, true);
    for (const auto& [src, src_note] : aux_sources(ch, aux_card))
        for (const Candidate& c : aux_inputs)
            consider(with_aux_copies(ch, c.pmf, {{R::U, src}}), c.note + ", U" + src_note, true);

    // Random Dirichlet samples.
    Rng rng(seed);
    std::vector<Axis> input_axes{{R::X1, ch.card_x1()}, {R::X2, ch.card_x2()}};
    std::vector<Axis> aux_axes{{R::U, aux_card}, {R::X1, ch.card_x1()}, {R::X2, ch.card_x2()}};
    for (int i = 0; i < budget; ++i) {
        consider(random_pmf(rng, input_axes), "sampled", false);
        consider(random_pmf(rng, aux_axes), "sampled", true);
    }

    // Local ascent on the violation from each condition's best starting point.
    RegimeReport report;
    report.aux_cardinality = aux_card;
    report.budget = budget;
    report.seed = seed;
    for (std::size_t k = 0; k < defs.size(); ++k) {
        Best& b = best[k];
        std::vector<double> params = b.witness.values();
        std::vector<Axis> axes = b.witness.axes();
        std::vector<std::pair<int, int>> blocks{{0, static_cast<int>(params.size())}};
        auto objective = [&](const std::vector<double>& p) {
            JointPMF pmf = JointPMF::unchecked(p, axes);
            JointPMF joint = compose_with_channel(pmf, ch);
            EntropyCache e(joint);
            return condition_violation(defs[k].cond, e);
        };
        double refined = ascend(params, blocks, objective, b.violation, 600);
        if (refined > b.violation + 1e-12) {
            b.violation = refined;
            b.witness = JointPMF::unchecked(params, axes);
            b.note += " (refined)";
        }

        ConditionReport cr;
        cr.condition = defs[k].cond;
        cr.violation = b.violation;
        if (b.violation > kViolationTol) {
            cr.status = RegimeStatus::violated;
            cr.witness = b.witness;
            cr.witness_note = b.note;
        } else {
            cr.status = RegimeStatus::holds_at_budget;
        }
        report.conditions.push_back(std::move(cr));
    }
    return report;
}

namespace {

// One candidate assignment for the frontier search: its own axes (sweep
// entries may use smaller auxiliary alphabets than the sampled ones),
// normalization blocks, and parameters.
struct SearchEntry {
    std::vector<Axis> axes;                  // full-joint models
    std::vector<std::pair<int, int>> blocks; // normalization blocks over params
    std::vector<double> params;
    bool bc_chain = false;
};

JointPMF entry_pmf(const SearchEntry& e) {
    if (!e.bc_chain) {
        std::vector<double> v = e.params;
        double s = 0.0;
        for (double x : v) s += x;
        for (double& x : v) x /= s;
        return JointPMF::unchecked(std::move(v), e.axes);
    }
    // BC chain: blocks are p(u1), p(u2), p(v|u1u2), p(x2|u2,v), p(x1|u1,u2,v).
    int cu1 = e.axes[0].card, cu2 = e.axes[1].card, cv = e.axes[2].card;
    int cx1 = e.axes[3].card, cx2 = e.axes[4].card;
    std::vector<double> p = e.params;
    for (const auto& [off, len] : e.blocks) {
        double s = 0.0;
        for (int k = off; k < off + len; ++k) s += p[k];
        if (s <= 0.0) {
            for (int k = off; k < off + len; ++k) p[k] = 1.0 / len;
        } else {
            for (int k = off; k < off + len; ++k) p[k] /= s;
        }
    }
    const double* pu1 = p.data();
    const double* pu2 = pu1 + cu1;
    const double* pv = pu2 + cu2;
    const double* px2 = pv + cu1 * cu2 * cv;
    const double* px1 = px2 + cu2 * cv * cx2;
    std::vector<double> cells(static_cast<std::size_t>(cu1) * cu2 * cv * cx1 * cx2);
    std::size_t k = 0;
    for (int u1 = 0; u1 < cu1; ++u1)
        for (int u2 = 0; u2 < cu2; ++u2)
            for (int v = 0; v < cv; ++v)
                for (int x1 = 0; x1 < cx1; ++x1)
                    for (int x2 = 0; x2 < cx2; ++x2)
                        cells[k++] = pu1[u1] * pu2[u2] * pv[(u1 * cu2 + u2) * cv + v] *
                                     px2[(u2 * cv + v) * cx2 + x2] *
                                     px1[((u1 * cu2 + u2) * cv + v) * cx1 + x1];
    return JointPMF::unchecked(std::move(cells), e.axes);
}

SearchEntry entry_from_pmf(const JointPMF& pmf) {
    SearchEntry e;
    e.axes = pmf.axes();
    e.params = pmf.values();
    e.blocks = {{0, static_cast<int>(e.params.size())}};
    return e;
}

} // namespace

std::vector<FrontierPoint> search_frontier(const CifcChannel& ch, BoundKind bound,
                                           const std::map<Role, int>& aux_cards,
                                           const std::vector<double>& weights, int budget,
                                           std::uint64_t seed, int threads) {
    if (budget < 1) fail(Errc::shape_mismatch, "search budget must be >= 1");
    if (bound == BoundKind::det && !ch.is_deterministic())
        fail(Errc::unsupported_bound, "det bound needs a deterministic channel");
    if (bound == BoundKind::semidet && !ch.is_semideterministic())
        fail(Errc::unsupported_bound, "semidet bound needs a deterministic first output");

    std::vector<Role> aux_roles;
    switch (bound) {
        case BoundKind::det:
        case BoundKind::marginal_outer: break;
        case BoundKind::wu_outer:
        case BoundKind::semidet: aux_roles = {R::U}; break;
        case BoundKind::bc_outer: aux_roles = {R::U1, R::U2, R::V}; break;
        case BoundKind::rtd_inner: aux_roles = {R::U2c, R::U1c, R::U1pb, R::U2pb}; break;
    }
    auto card_of = [&](Role r) {
        auto it = aux_cards.find(r);
        return it != aux_cards.end() ? it->second : default_aux_card(ch, r);
    };

    auto region_of = [&](const JointPMF& pmf) -> RatePolytope2D {
        switch (bound) {
            case BoundKind::det: return capacity_det(ch, pmf);
            case BoundKind::marginal_outer: return outer_bound_marginal(ch, pmf);
            case BoundKind::wu_outer:
                return outer_bound_wu(ch, AuxAssignment::make(pmf, Factorization::WU));
            case BoundKind::semidet:
                return capacity_semidet(ch, AuxAssignment::make(pmf, Factorization::WU));
            case BoundKind::bc_outer:
                return outer_bound_bc(ch, AuxAssignment::make(pmf, Factorization::BC));
            case BoundKind::rtd_inner:
                return inner_bound_rtd(ch, AuxAssignment::make(pmf, Factorization::RTD));
        }
        fail(Errc::unsupported_bound, "unhandled bound");
    };

    // Deterministic sweep, capped by total evaluation work.
    std::vector<SearchEntry> entries;
    if (bound == BoundKind::bc_outer) {
        // Factorization-respecting corners: independent subset-uniform commons
        // copied onto the inputs, with V either constant or the full pair.
        for (const Candidate& c : input_sweep(ch, false, false)) {
            JointPMF base = c.pmf.rename_axis(R::X1, R::U1).rename_axis(R::X2, R::U2);
            if (mutual_information(base, {R::U1}, {R::U2}) > 1e-12) continue; // products only
            JointPMF inputs = base.add_copy_axis(R::U1, R::X1).add_copy_axis(R::U2, R::X2);
            entries.push_back(entry_from_pmf(inputs.add_function_axis(
                {}, R::V, 1, [](std::span<const int>) { return 0; })));
            int cu2 = inputs.card(R::U2);
            entries.push_back(entry_from_pmf(inputs.add_function_axis(
                {R::U1, R::U2}, R::V, inputs.card(R::U1) * cu2,
                [cu2](std::span<const int> v) { return v[0] * cu2 + v[1]; })));
            if (entries.size() > 5000) break;
        }
    } else {
        bool joint_subsets = bound == BoundKind::det || bound == BoundKind::marginal_outer;
        std::vector<Candidate> inputs = input_sweep(ch, joint_subsets, false);
        std::size_t combos = 1;
        std::vector<std::vector<std::pair<AuxSource, std::string>>> per_role;
        for (Role rr : aux_roles) {
            per_role.push_back(aux_sources(ch, card_of(rr)));
            combos *= per_role.back().size();
        }
        if (inputs.size() * combos > 5000) inputs = input_sweep(ch, false, true);
        if (inputs.size() * combos <= 5000) {
            for (std::size_t combo = 0; combo < combos; ++combo) {
                std::size_t rem = combo;
                std::vector<std::pair<Role, AuxSource>> specs;
                for (std::size_t rix = 0; rix < aux_roles.size(); ++rix) {
                    const auto& options = per_role[rix];
                    specs.push_back({aux_roles[rix], options[rem % options.size()].first});
                    rem /= options.size();
                }
                for (const Candidate& c : inputs)
                    entries.push_back(entry_from_pmf(with_aux_copies(ch, c.pmf, specs)));
            }
        }
    }

    // Seeded Dirichlet samples.
    Rng rng(seed);
    for (int i = 0; i < budget; ++i) {
        if (bound == BoundKind::bc_outer) {
            SearchEntry e;
            int cu1 = card_of(R::U1), cu2 = card_of(R::U2), cv = card_of(R::V);
            int cx1 = ch.card_x1(), cx2 = ch.card_x2();
            e.bc_chain = true;
            e.axes = {{R::U1, cu1}, {R::U2, cu2}, {R::V, cv}, {R::X1, cx1}, {R::X2, cx2}};
            int off = 0;
            auto block = [&](int count, int len) {
                for (int b = 0; b < count; ++b) {
                    e.blocks.push_back({off, len});
                    off += len;
                }
            };
            block(1, cu1);
            block(1, cu2);
            block(cu1 * cu2, cv);
            block(cu2 * cv, cx2);
            block(cu1 * cu2 * cv, cx1);
            e.params.resize(off);
            for (double& x : e.params) x = rng.next_exp();
            entries.push_back(std::move(e));
        } else {
            std::vector<Axis> axes;
            for (Role rr : aux_roles) axes.push_back({rr, card_of(rr)});
            axes.push_back({R::X1, ch.card_x1()});
            axes.push_back({R::X2, ch.card_x2()});
            entries.push_back(entry_from_pmf(random_pmf(rng, axes)));
        }
    }

    std::vector<RatePolytope2D> regions(entries.size());
    parallel_for(static_cast<int>(entries.size()), thread_count(threads),
                 [&](int i) { regions[i] = region_of(entry_pmf(entries[i])); });

    std::vector<FrontierPoint> out;
    out.reserve(weights.size());
    for (double lambda : weights) {
        double best_value = -std::numeric_limits<double>::infinity();
        std::array<double, 2> best_point{0.0, 0.0};
        std::size_t best_idx = 0;
        for (std::size_t i = 0; i < entries.size(); ++i)
            for (const auto& v : regions[i].vertices()) {
                double val = lambda * v[0] + (1.0 - lambda) * v[1];
                if (val > best_value) {
                    best_value = val;
                    best_point = v;
                    best_idx = i;
                }
            }
        if (!std::isfinite(best_value)) {
            best_value = 0.0;
            best_point = {0.0, 0.0};
        }

        SearchEntry refined = entries[best_idx];
        // Ascent perturbs raw parameters; full-joint sweep entries of the BC
        // bound would leave its factorization class, so only chains refine.
        bool refinable = bound != BoundKind::bc_outer || refined.bc_chain;
        if (refinable && refined.params.size() <= 4096) {
            auto objective = [&](const std::vector<double>& p) {
                SearchEntry t = refined;
                t.params = p;
                RatePolytope2D reg = region_of(entry_pmf(t));
                double v = 0.0;
                for (const auto& vert : reg.vertices())
                    v = std::max(v, lambda * vert[0] + (1.0 - lambda) * vert[1]);
                return v;
            };
            double v = ascend(refined.params, refined.blocks, objective, best_value, 400);
            if (v > best_value + 1e-12) {
                RatePolytope2D reg = region_of(entry_pmf(refined));
                for (const auto& vert : reg.vertices()) {
                    double val = lambda * vert[0] + (1.0 - lambda) * vert[1];
                    if (val > best_value) {
                        best_value = val;
                        best_point = vert;
                    }
                }
                entries[best_idx] = refined; // keep the improved assignment
            }
        }

        FrontierPoint fp;
        fp.lambda = lambda;
        fp.value = best_value;
        fp.point = best_point;
        fp.assignment = entry_pmf(entries[best_idx]);
        fp.seed = seed;
        out.push_back(std::move(fp));
    }
    return out;
}

namespace {

void require_small_mi(const JointPMF& pmf, RoleSet a, RoleSet b, RoleSet c, const char* what) {
    if (mutual_information(pmf, a, b, c) > kTol)
        fail(Errc::factorization_mismatch, what);
}

struct RowAccumulator {
    std::vector<DominanceRow> rows;

    void offer(std::size_t idx, DominanceRow r) {
        if (rows.size() <= idx) rows.resize(idx + 1);
        DominanceRow& cur = rows[idx];
        if (cur.label.empty()) {
            cur = std::move(r);
            return;
        }
        double cur_res = std::abs(cur.difference - cur.expected.value_or(0.0));
        double new_res = std::abs(r.difference - r.expected.value_or(0.0));
        if (!r.ok || (cur.ok && new_res > cur_res)) cur = std::move(r);
    }
};

void dmt_rows(const CifcChannel& ch, const JointPMF& pmf, RowAccumulator& acc) {
    require_small_mi(pmf, {R::U1c}, {R::U2c}, {R::X2},
                     "split-commons factorization: U1c depends on U2c given X2");
    require_small_mi(pmf, {R::U1pb}, {R::U1c, R::U2c}, {R::X2},
                     "split-commons factorization: U1pb depends on (U1c,U2c) given X2");
    require_small_mi(pmf, {R::X1}, {R::U2c}, {R::X2, R::U1c, R::U1pb},
                     "split-commons factorization: X1 depends on U2c beyond (X2,U1c,U1pb)");
    JointPMF joint = compose_with_channel(pmf, ch);
    EntropyCache e(joint);

    // Rate-group bounds of the two regions with the binning rates substituted
    // out; each surviving difference was proved to be zero or I(U1c;U1pb).
    double bin_common = e.I({R::U1c}, {R::X2}, {R::U2c});
    double bin_both = e.I({R::X2}, {R::U1c, R::U1pb}, {R::U2c});
    double bin_common_other = e.I({R::U1c}, {R::X2, R::U2c});
    double bin_private_other = e.I({R::U1pb}, {R::X2, R::U2c});
    double i_u1c_u1pb = e.I({R::U1c}, {R::U1pb});

    struct Pair {
        const char* label;
        double ours, theirs, expected;
    };
    const Pair pairs[] = {
        {"R2c+R2pa+R1c+R1c'",
         e.I({R::Y2}, {R::U2c, R::U1c, R::X2}),
         e.I({R::Y2}, {R::U1c, R::U2c, R::X2}) + e.I({R::X2, R::U2c}, {R::U1c}) - bin_common_other,
         0.0},
        {"R2pa+R1c+R1c'",
         e.I({R::Y2}, {R::U1c, R::X2}, {R::U2c}),
         e.I({R::Y2}, {R::X2, R::U1c}, {R::U2c}) + e.I({R::X2}, {R::U1c}) - bin_common_other,
         0.0},
        {"R1c+R1c'",
         e.I({R::Y2}, {R::U1c}, {R::U2c, R::X2}),
         e.I({R::U1c}, {R::Y2, R::X2, R::U2c}) - bin_common_other,
         0.0},
        {"R2pa",
         e.I({R::Y2}, {R::X2}, {R::U2c, R::U1c}) + bin_common,
         e.I({R::Y2}, {R::X2}, {R::U2c, R::U1c}) + e.I({R::U1c}, {R::X2}, {R::U2c}),
         0.0},
        {"R2c+R1c+R1c'+R1pb+R1pb'",
         e.I({R::Y1}, {R::U2c, R::U1c, R::U1pb}) - bin_both,
         e.I({R::Y1}, {R::U1pb, R::U1c, R::U2c}) + e.I({R::U1pb, R::U1c}, {R::U2c}) -
             bin_private_other - bin_common_other,
         i_u1c_u1pb},
        {"R1c+R1c'+R1pb+R1pb'",
         e.I({R::Y1}, {R::U1c, R::U1pb}, {R::U2c}) - bin_both,
         e.I({R::Y1, R::U2c}, {R::U1pb, R::U1c}) + e.I({R::U1pb}, {R::U1c}) -
             bin_private_other - bin_common_other,
         0.0},
        {"R1pb+R1pb'",
         e.I({R::Y1}, {R::U1pb}, {R::U2c, R::U1c}) - bin_both + bin_common,
         e.I({R::Y1, R::U2c, R::U1c}, {R::U1pb}) - bin_private_other,
         0.0},
    };
    for (std::size_t i = 0; i < std::size(pairs); ++i) {
        DominanceRow r;
        r.label = pairs[i].label;
        r.value_a = pairs[i].theirs;
        r.value_b = pairs[i].ours;
        r.difference = pairs[i].ours - pairs[i].theirs;
        r.expected = pairs[i].expected;
        r.ok = std::abs(r.difference - pairs[i].expected) <= kTol && r.difference >= -kTol;
        acc.offer(i, std::move(r));
    }
}

// Canonical (sense, coefficient-vector) -> rhs row map for the row-by-row
// system comparisons; ge rows keep the largest rhs, le rows the smallest.
struct RowKey {
    bool ge;
    std::array<long long, kRateVarCount> c;
    bool operator<(const RowKey& o) const {
        if (ge != o.ge) return ge < o.ge;
        return c < o.c;
    }
};

using RowMap = std::map<RowKey, double>;

void add_row(RowMap& m, bool ge, std::initializer_list<RateVar> vars, double rhs) {
    RowKey k{ge, {}};
    for (RateVar v : vars) k.c[static_cast<int>(v)] += 1;
    // Rows implied by nonnegativity alone carry no information.
    if (ge && rhs <= kTol) return;
    auto it = m.find(k);
    if (it == m.end())
        m.emplace(k, rhs);
    else
        it->second = ge ? std::max(it->second, rhs) : std::min(it->second, rhs);
}

std::string row_label(const RowKey& k) {
    std::string lhs;
    for (int i = 0; i < kRateVarCount; ++i)
        if (k.c[i] != 0) {
            if (!lhs.empty()) lhs += "+";
            lhs += rate_var_name(static_cast<RateVar>(i));
        }
    return lhs + (k.ge ? " >= ..." : " <= ...");
}

void compare_row_maps(const RowMap& a, const RowMap& b, const char* a_name, const char* b_name,
                      RowAccumulator& acc) {
    std::size_t idx = 0;
    auto nan = std::numeric_limits<double>::quiet_NaN();
    for (const auto& [key, rhs_a] : a) {
        DominanceRow r;
        r.label = row_label(key);
        r.value_a = rhs_a;
        auto it = b.find(key);
        if (it == b.end()) {
            r.value_b = nan;
            r.difference = nan;
            r.ok = false;
            r.label += std::string(" (missing in ") + b_name + ")";
        } else {
            r.value_b = it->second;
            r.difference = it->second - rhs_a;
            r.expected = 0.0;
            r.ok = std::abs(r.difference) <= kTol;
        }
        acc.offer(idx++, std::move(r));
    }
    for (const auto& [key, rhs_b] : b) {
        if (a.count(key)) continue;
        DominanceRow r;
        r.label = row_label(key) + std::string(" (missing in ") + a_name + ")";
        r.value_a = nan;
        r.value_b = rhs_b;
        r.difference = nan;
        r.ok = false;
        acc.offer(idx++, std::move(r));
    }
}

void cc_rows(const CifcChannel& ch, const JointPMF& pmf, RowAccumulator& acc) {
    // The correspondence pins X2 = U2c; every off-diagonal cell must be null.
    if (pmf.card(R::X2) != pmf.card(R::U2c))
        fail(Errc::factorization_mismatch, "CC correspondence needs |X2| = |U2c|");
    {
        JointPMF both = pmf.marginal({R::U2c, R::X2});
        bool u2c_first = both.axes()[0].role == R::U2c;
        for (int a = 0; a < both.axes()[0].card; ++a)
            for (int b = 0; b < both.axes()[1].card; ++b) {
                std::vector<int> idx{a, b};
                if (a != b && both.at(idx) > kTol)
                    fail(Errc::factorization_mismatch, "CC correspondence needs X2 == U2c");
            }
        (void)u2c_first;
    }
    JointPMF joint = compose_with_channel(pmf, ch);
    EntropyCache e(joint);
    using V = RateVar;

    RowMap cc;
    add_row(cc, true, {V::R1pbP, V::R2pbP}, e.I({R::U1pb}, {R::U2pb}, {R::U2c, R::U1c}));
    add_row(cc, false, {V::R2pb, V::R2pbP}, e.I({R::Y2}, {R::U2pb}, {R::U2c, R::U1c}));
    add_row(cc, false, {V::R2pb, V::R2pbP, V::R1c}, e.I({R::Y2}, {R::U1c, R::U2pb}, {R::U2c}));
    add_row(cc, false, {V::R2pb, V::R2pbP, V::R1c, V::R2c}, e.I({R::Y2}, {R::U1c, R::U2c, R::U2pb}));
    add_row(cc, false, {V::R1pb, V::R1pbP}, e.I({R::Y1}, {R::U1pb}, {R::U2c, R::U1c}));
    add_row(cc, false, {V::R1pb, V::R1pbP, V::R1c}, e.I({R::Y1}, {R::U1pb, R::U1c}, {R::U2c}));
    add_row(cc, false, {V::R1pb, V::R1pbP, V::R1c, V::R2c}, e.I({R::Y1}, {R::U1pb, R::U1c, R::U2c}));

    // RTD rows at R2pa = 0 and R1c' = 0 (the binning rate vanishes since
    // I(U1c;X2|U2c) = 0 when X2 == U2c).
    double A = e.I({R::U1c}, {R::X2}, {R::U2c});
    RowMap rtd;
    add_row(rtd, true, {V::R1pbP}, e.I({R::U1pb}, {R::X2}, {R::U1c, R::U2c}) + A);
    add_row(rtd, true, {V::R1pbP, V::R2pbP}, e.I({R::U1pb}, {R::X2, R::U2pb}, {R::U1c, R::U2c}) + A);
    add_row(rtd, false, {V::R2c, V::R1c, V::R2pb, V::R2pbP},
            e.I({R::Y2}, {R::U2pb, R::U1c, R::X2, R::U2c}) + A);
    add_row(rtd, false, {V::R1c, V::R2pb, V::R2pbP},
            e.I({R::Y2}, {R::U2pb, R::U1c, R::X2}, {R::U2c}) + A);
    add_row(rtd, false, {V::R2pb, V::R2pbP}, e.I({R::Y2}, {R::U2pb, R::X2}, {R::U1c, R::U2c}) + A);
    add_row(rtd, false, {V::R1c, V::R2pb, V::R2pbP},
            e.I({R::Y2}, {R::U2pb, R::U1c}, {R::X2, R::U2c}) + A);
    add_row(rtd, false, {V::R2pb, V::R2pbP}, e.I({R::Y2}, {R::U2pb}, {R::U1c, R::X2, R::U2c}));
    add_row(rtd, false, {V::R2c, V::R1c, V::R1pb, V::R1pbP},
            e.I({R::Y1}, {R::U1pb, R::U1c, R::U2c}));
    add_row(rtd, false, {V::R1c, V::R1pb, V::R1pbP}, e.I({R::Y1}, {R::U1pb, R::U1c}, {R::U2c}));
    add_row(rtd, false, {V::R1pb, V::R1pbP}, e.I({R::Y1}, {R::U1pb}, {R::U1c, R::U2c}));

    compare_row_maps(cc, rtd, "sequential-binning region", "joint-binning region", acc);
}

void jiang_rows(const CifcChannel& ch, const JointPMF& pmf, RowAccumulator& acc) {
    require_small_mi(pmf, {R::U1c}, {R::U2c, R::X2}, {},
                     "independent-commons factorization: U1c must be independent of (U2c,X2)");
    JointPMF joint = compose_with_channel(pmf, ch);
    EntropyCache e(joint);

    struct Pair {
        const char* label;
        double jiang, rtd;
    };
    double A = e.I({R::U1c}, {R::X2}, {R::U2c}); // zero under the factorization
    const Pair pairs[] = {
        {"binning R1pb'", e.I({R::U1pb}, {R::X2}, {R::U2c, R::U1c}),
         e.I({R::U1pb}, {R::X2}, {R::U2c, R::U1c}) + A},
        {"binning R1pb'+R2pb'", e.I({R::U1pb}, {R::U2pb, R::X2}, {R::U2c, R::U1c}),
         e.I({R::U1pb}, {R::X2, R::U2pb}, {R::U2c, R::U1c}) + A},
        {"R2pa+R2pb'", e.I({R::X2, R::U2pb}, {R::Y2}, {R::U2c, R::U1c}),
         e.I({R::Y2}, {R::U2pb, R::X2}, {R::U1c, R::U2c}) + A},
        {"R1c+R2pa+R2pb'", e.I({R::U1c, R::X2, R::U2pb}, {R::Y2}, {R::U2c}),
         e.I({R::Y2}, {R::U2pb, R::U1c, R::X2}, {R::U2c}) + A},
        {"R2c+R1c+R2pa+R2pb'", e.I({R::U2c, R::X2, R::U1c, R::U2pb}, {R::Y2}),
         e.I({R::Y2}, {R::U2pb, R::U1c, R::X2, R::U2c}) + A},
        {"R1pb+R1pb'", e.I({R::U1pb}, {R::Y1}, {R::U2c, R::U1c}),
         e.I({R::Y1}, {R::U1pb}, {R::U1c, R::U2c})},
        {"R1c+R1pb+R1pb'", e.I({R::U1c, R::U1pb}, {R::Y1}, {R::U2c}),
         e.I({R::Y1}, {R::U1pb, R::U1c}, {R::U2c})},
        {"R2c+R1c+R1pb+R1pb'", e.I({R::U2c, R::U1c, R::U1pb}, {R::Y1}),
         e.I({R::Y1}, {R::U1pb, R::U1c, R::U2c})},
    };
    std::size_t idx = 0;
    for (const Pair& p : pairs) {
        DominanceRow r;
        r.label = p.label;
        r.value_a = p.jiang;
        r.value_b = p.rtd;
        r.difference = p.rtd - p.jiang;
        r.expected = 0.0;
        r.ok = std::abs(r.difference) <= kTol;
        acc.offer(idx++, std::move(r));
    }
    // Constraints present only in the contained region; they can only shrink it.
    DominanceRow extra1;
    extra1.label = "extra row R2c+R2pa+R2pb' (contained region only)";
    extra1.value_a = e.I({R::U2c, R::X2, R::U2pb}, {R::Y2}, {R::U1c});
    extra1.value_b = extra1.value_a;
    extra1.difference = 0.0;
    extra1.ok = true;
    acc.offer(idx++, std::move(extra1));
    DominanceRow extra2;
    extra2.label = "extra row R2c+R1pb+R1pb' (contained region only)";
    extra2.value_a = e.I({R::U2c, R::U1pb}, {R::Y1}, {R::U1c});
    extra2.value_b = extra2.value_a;
    extra2.difference = 0.0;
    extra2.ok = true;
    acc.offer(idx++, std::move(extra2));
}

void wu_marginal_rows(const CifcChannel& ch, const JointPMF& pmf, RowAccumulator& acc) {
    JointPMF joint = compose_with_channel(pmf, ch);
    EntropyCache e(joint);
    Coupling id = Coupling::identity(ch);
    JointPMF cj = coupling_joint(pmf.marginal({R::X1, R::X2}), id);

    double wu_r1 = e.I({R::X1}, {R::Y1}, {R::X2});
    double wu_r2 = e.I({R::X2, R::U}, {R::Y2});
    double wu_sum = wu_r2 + e.I({R::X1}, {R::Y1}, {R::X2, R::U});
    double m_r1 = e.I({R::Y1}, {R::X1}, {R::X2});
    double m_r2 = e.I({R::X1, R::X2}, {R::Y2});
    double m_sum = m_r2 + mutual_information(cj, {R::Y1}, {R::X1}, {R::Y2P, R::X2});

    struct Row {
        const char* label;
        double wu, marg;
        bool equality;
    } rows[] = {
        {"R1", wu_r1, m_r1, true},
        {"R2", wu_r2, m_r2, false},
        {"R1+R2", wu_sum, m_sum, false},
    };
    std::size_t idx = 0;
    for (const Row& r : rows) {
        DominanceRow d;
        d.label = r.label;
        d.value_a = r.wu;
        d.value_b = r.marg;
        d.difference = r.marg - r.wu;
        if (r.equality) d.expected = 0.0;
        d.ok = r.equality ? std::abs(d.difference) <= kTol : d.difference >= -kTol;
        acc.offer(idx++, std::move(d));
    }
}

JointPMF sample_dmt(Rng& rng, const CifcChannel& ch, int cu2c, int cu1c, int cu1pb) {
    int cx1 = ch.card_x1(), cx2 = ch.card_x2();
    auto dir = [&](int n) {
        std::vector<double> v(n);
        double s = 0.0;
        for (double& x : v) {
            x = rng.next_exp();
            s += x;
        }
        for (double& x : v) x /= s;
        return v;
    };
    std::vector<double> p_u2c_x2 = dir(cu2c * cx2);
    std::vector<std::vector<double>> p_u1c(cx2), p_u1pb(cx2);
    for (int x2 = 0; x2 < cx2; ++x2) {
        p_u1c[x2] = dir(cu1c);
        p_u1pb[x2] = dir(cu1pb);
    }
    std::vector<std::vector<double>> p_x1(static_cast<std::size_t>(cx2) * cu1c * cu1pb);
    for (auto& t : p_x1) t = dir(cx1);

    std::vector<Axis> axes{{R::U2c, cu2c}, {R::U1c, cu1c}, {R::U1pb, cu1pb}, {R::X1, cx1}, {R::X2, cx2}};
    std::vector<double> cells(static_cast<std::size_t>(cu2c) * cu1c * cu1pb * cx1 * cx2);
    std::size_t k = 0;
    for (int u2c = 0; u2c < cu2c; ++u2c)
        for (int u1c = 0; u1c < cu1c; ++u1c)
            for (int u1pb = 0; u1pb < cu1pb; ++u1pb)
                for (int x1 = 0; x1 < cx1; ++x1)
                    for (int x2 = 0; x2 < cx2; ++x2)
                        cells[k++] = p_u2c_x2[u2c * cx2 + x2] * p_u1c[x2][u1c] * p_u1pb[x2][u1pb] *
                                     p_x1[(static_cast<std::size_t>(x2) * cu1c + u1c) * cu1pb + u1pb][x1];
    return JointPMF::unchecked(std::move(cells), std::move(axes));
}

JointPMF sample_cc(Rng& rng, const CifcChannel& ch, int cu1c, int cu1pb, int cu2pb) {
    int cx1 = ch.card_x1(), cx2 = ch.card_x2();
    JointPMF base = random_pmf(
        rng, {{R::U2c, cx2}, {R::U1c, cu1c}, {R::U1pb, cu1pb}, {R::U2pb, cu2pb}, {R::X1, cx1}});
    return base.add_copy_axis(R::U2c, R::X2);
}

JointPMF sample_jiang(Rng& rng, const CifcChannel& ch, int cu2c, int cu1c, int cu1pb, int cu2pb) {
    int cx1 = ch.card_x1(), cx2 = ch.card_x2();
    auto dir = [&](int n) {
        std::vector<double> v(n);
        double s = 0.0;
        for (double& x : v) {
            x = rng.next_exp();
            s += x;
        }
        for (double& x : v) x /= s;
        return v;
    };
    std::vector<double> p_u1c = dir(cu1c);
    std::vector<double> p_u2c_x2 = dir(cu2c * cx2);
    std::vector<std::vector<double>> p_pb(static_cast<std::size_t>(cu1c) * cu2c * cx2);
    for (auto& t : p_pb) t = dir(cu1pb * cu2pb);
    std::vector<std::vector<double>> p_x1(static_cast<std::size_t>(cu1c) * cu2c * cx2 * cu1pb * cu2pb);
    for (auto& t : p_x1) t = dir(cx1);

    std::vector<Axis> axes{{R::U2c, cu2c}, {R::U1c, cu1c}, {R::U1pb, cu1pb},
                           {R::U2pb, cu2pb}, {R::X1, cx1}, {R::X2, cx2}};
    std::vector<double> cells(static_cast<std::size_t>(cu2c) * cu1c * cu1pb * cu2pb * cx1 * cx2);
    std::size_t k = 0;
    for (int u2c = 0; u2c < cu2c; ++u2c)
        for (int u1c = 0; u1c < cu1c; ++u1c)
            for (int u1pb = 0; u1pb < cu1pb; ++u1pb)
                for (int u2pb = 0; u2pb < cu2pb; ++u2pb)
                    for (int x1 = 0; x1 < cx1; ++x1)
                        for (int x2 = 0; x2 < cx2; ++x2) {
                            std::size_t ctx = (static_cast<std::size_t>(u1c) * cu2c + u2c) * cx2 + x2;
                            cells[k++] = p_u1c[u1c] * p_u2c_x2[u2c * cx2 + x2] *
                                         p_pb[ctx][u1pb * cu2pb + u2pb] *
                                         p_x1[(ctx * cu1pb + u1pb) * cu2pb + u2pb][x1];
                        }
    return JointPMF::unchecked(std::move(cells), std::move(axes));
}

} // namespace

DominanceReport dominance_check(const CifcChannel& ch, DominanceKind kind, const AuxAssignment& a,
                                int samples, std::uint64_t seed) {
    RowAccumulator acc;
    auto eval = [&](const JointPMF& pmf) {
        switch (kind) {
            case DominanceKind::dmt_in_rtd: dmt_rows(ch, pmf, acc); break;
            case DominanceKind::cc_in_rtd: cc_rows(ch, pmf, acc); break;
            case DominanceKind::jiang_in_rtd: jiang_rows(ch, pmf, acc); break;
            case DominanceKind::wu_in_marginal: wu_marginal_rows(ch, pmf, acc); break;
        }
    };

    RoleSet need;
    switch (kind) {
        case DominanceKind::dmt_in_rtd: need = {R::U2c, R::U1c, R::U1pb, R::X1, R::X2}; break;
        case DominanceKind::cc_in_rtd:
        case DominanceKind::jiang_in_rtd:
            need = {R::U2c, R::U1c, R::U1pb, R::U2pb, R::X1, R::X2};
            break;
        case DominanceKind::wu_in_marginal: need = {R::U, R::X1, R::X2}; break;
    }
    if (!need.subset_of(a.pmf().roles()))
        fail(Errc::factorization_mismatch,
             std::string(dominance_kind_name(kind)) + " needs roles " + need.to_string());

    eval(a.pmf());
    int checked = 1;

    Rng rng(seed);
    for (int s = 0; s < samples; ++s, ++checked) {
        switch (kind) {
            case DominanceKind::dmt_in_rtd:
                eval(sample_dmt(rng, ch, a.pmf().card(R::U2c), a.pmf().card(R::U1c),
                                a.pmf().card(R::U1pb)));
                break;
            case DominanceKind::cc_in_rtd:
                eval(sample_cc(rng, ch, a.pmf().card(R::U1c), a.pmf().card(R::U1pb),
                               a.pmf().card(R::U2pb)));
                break;
            case DominanceKind::jiang_in_rtd:
                eval(sample_jiang(rng, ch, a.pmf().card(R::U2c), a.pmf().card(R::U1c),
                                  a.pmf().card(R::U1pb), a.pmf().card(R::U2pb)));
                break;
            case DominanceKind::wu_in_marginal:
                eval(random_pmf(rng, {{R::U, a.pmf().card(R::U)},
                                      {R::X1, ch.card_x1()},
                                      {R::X2, ch.card_x2()}}));
                break;
        }
    }

    DominanceReport report;
    report.kind = kind;
    report.assignments_checked = checked;
    report.rows = std::move(acc.rows);
    report.ok = std::all_of(report.rows.begin(), report.rows.end(),
                            [](const DominanceRow& r) { return r.ok; });
    return report;
}

} // namespace cifc
