#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cifc/channel.hpp"
#include "cifc/polytope.hpp"
#include "cifc/prob.hpp"

namespace cifc {

// Declared structure of an auxiliary assignment's distribution.
//   GENERIC - any joint carrying X1, X2
//   WU      - p_{U,X1,X2}
//   BC      - p_{U1} p_{U2} p_{V|U1,U2} p_{X2|U2,V} p_{X1|U1,U2,V}
//   RTD     - p over {U2c, X2, U1c, U1pb, U2pb, X1}
enum class Factorization { GENERIC, WU, BC, RTD };

const char* factorization_name(Factorization f);

// Joint PMF over auxiliary plus input roles feeding the bound evaluators.
// The declared factorization is verified pointwise (1e-9) at construction.
class AuxAssignment {
public:
    AuxAssignment() = default;
    static AuxAssignment make(JointPMF pmf, Factorization tag);

    const JointPMF& pmf() const { return pmf_; }
    Factorization tag() const { return tag_; }

private:
    JointPMF pmf_;
    Factorization tag_ = Factorization::GENERIC;
};

// Per-(x1,x2) joint q(y1, y2') whose Y1 marginal equals p(y1|x1,x2) and whose
// Y2' marginal equals p(y2|x1,x2), both within 1e-9.
class Coupling {
public:
    // q laid out [x1][x2][y1][y2'].
    static Coupling make(const CifcChannel& ch, std::vector<double> q);
    // y2' glued to the channel's actual y2.
    static Coupling identity(const CifcChannel& ch);
    // q = p(y1|x1,x2) p(y2|x1,x2).
    static Coupling independent(const CifcChannel& ch);

    double q(int x1, int x2, int y1, int y2p) const;
    int card_y1() const { return card_y1_; }
    int card_y2() const { return card_y2_; }

private:
    int card_x1_ = 0, card_x2_ = 0, card_y1_ = 0, card_y2_ = 0;
    std::vector<double> q_;
};

struct CornerPair {
    std::array<double, 2> point_a{0.0, 0.0};
    std::array<double, 2> point_b{0.0, 0.0};
    Bits delta = 0.0;
};

enum class Binning { joint, two_step };

struct RtdOptions {
    Binning binning = Binning::joint;
    // When set, the first binning-rate row is an equality instead of >=.
    bool bin_rate_equality = false;
};

// Achievable region built from the eleven-row rate system; the droppable
// decoder-error rows are removed only when their rate group is provably zero
// over the system without those rows.
RatePolytope2D inner_bound_rtd(const CifcChannel& ch, const AuxAssignment& a,
                               RtdOptions opts = {});

// { R1 <= I(X1;Y1|X2), R2 <= I(X2,U;Y2),
//   R1+R2 <= I(X2,U;Y2) + I(X1;Y1|X2,U) }
RatePolytope2D outer_bound_wu(const CifcChannel& ch, const AuxAssignment& a);

// point_a = (I(Y1;X1|U,X2), I(Y2;U,X2)),
// point_b = (I(Y1;X1|U,X2) + I(Y2;U,X2) - delta, delta),
// delta   = max(0, I(Y2;U,X2) - I(Y1;U|X2)).
CornerPair wu_corner_points(const CifcChannel& ch, const AuxAssignment& a);

// { R1 <= I(V,U1;Y1), R2 <= I(V,U2;Y2),
//   R1+R2 <= I(V,U1;Y1) + I(U2;Y2|U1,V),
//   R1+R2 <= I(V,U2;Y2) + I(U1;Y1|U2,V) }
RatePolytope2D outer_bound_bc(const CifcChannel& ch, const AuxAssignment& a);

// { R1 <= I(Y1;X1|X2), R2 <= I(X1,X2;Y2),
//   R1+R2 <= I(X1,X2;Y2) + min over couplings of I(Y1;X1|Y2',X2) };
// the identity coupling is always included in the minimum.
RatePolytope2D outer_bound_marginal(const CifcChannel& ch, const JointPMF& input,
                                    const std::vector<Coupling>& couplings = {});

// Same sum-rate but evaluated for exactly the one given coupling, reproducing
// the bound statement for a single named choice of Y2'.
RatePolytope2D outer_bound_marginal_literal(const CifcChannel& ch, const JointPMF& input,
                                            const Coupling& coupling);

// Joint over (X1, X2, Y1, Y2') from an input distribution and a coupling.
JointPMF coupling_joint(const JointPMF& input, const Coupling& c);

// { R1 <= I(Y1;U,X1|X2), R2 <= I(Y2;U,X2),
//   R1+R2 <= I(Y2;U,X2) + I(Y1;X1|X2,U), R1+R2 <= I(Y1;X2,U,X1) }
RatePolytope2D capacity_better_cognitive(const CifcChannel& ch, const AuxAssignment& a);

// { R1 <= H(Y1|X2), R2 <= I(Y2;U,X2), R1+R2 <= I(Y2;U,X2) + H(Y1|U,X2) }
RatePolytope2D capacity_semidet(const CifcChannel& ch, const AuxAssignment& a);

// { R1 <= H(Y1|X2), R2 <= H(Y2), R1+R2 <= H(Y2) + H(Y1|Y2,X2) }
RatePolytope2D capacity_det(const CifcChannel& ch, const JointPMF& input);

// The three private-message regions of the semi-deterministic achievability
// argument, evaluated at one assignment over {U1pb, U2pb, X1, X2}:
//   rc0 (4 rows) adds the cross-decoding row to rc1 (3 rows), so rc0 is the
//   tightest; rc2 (2 rows) only uses the (U1pb, X2) marginal.
struct SemidetSubRegions {
    RatePolytope2D rc0;
    RatePolytope2D rc1;
    RatePolytope2D rc2;
};
SemidetSubRegions semidet_sub_regions(const CifcChannel& ch, const AuxAssignment& a);

enum class RegimeCondition { weak, strong, very_weak, very_strong, better_cognitive };
enum class RegimeStatus { holds_at_budget, violated };

const char* regime_condition_name(RegimeCondition c);
const char* regime_status_name(RegimeStatus s);

struct ConditionReport {
    RegimeCondition condition = RegimeCondition::weak;
    RegimeStatus status = RegimeStatus::holds_at_budget;
    double violation = 0.0; // largest violation found (may be <= 0)
    std::optional<JointPMF> witness;
    std::string witness_note;
};

struct RegimeReport {
    int aux_cardinality = 0;
    int budget = 0;
    std::uint64_t seed = 0;
    std::vector<ConditionReport> conditions;
};

// Falsification search over the forall-quantified interference conditions:
// a structured sweep (point masses, subset uniforms, deterministic auxiliary
// choices) followed by Dirichlet samples and coordinate ascent. VIOLATED
// entries carry a witness whose violation exceeds 1e-7.
RegimeReport classify_regime(const CifcChannel& ch, int aux_card, int budget,
                             std::uint64_t seed);

enum class BoundKind { rtd_inner, wu_outer, bc_outer, marginal_outer, semidet, det };

const char* bound_kind_name(BoundKind b);
std::optional<BoundKind> bound_kind_from_name(std::string_view name);

struct FrontierPoint {
    double lambda = 0.0;
    std::array<double, 2> point{0.0, 0.0};
    double value = 0.0;
    JointPMF assignment;
    std::uint64_t seed = 0;
};

// For each weight, the best lambda*R1 + (1-lambda)*R2 over a deterministic
// assignment sweep, `budget` Dirichlet samples and coordinate-ascent
// refinement. Deterministic for fixed (seed, budget, weights) and independent
// of the thread count (CIFC_THREADS or `threads` caps the parallel map).
std::vector<FrontierPoint> search_frontier(const CifcChannel& ch, BoundKind bound,
                                           const std::map<Role, int>& aux_cards,
                                           const std::vector<double>& weights, int budget,
                                           std::uint64_t seed, int threads = 0);

// Default auxiliary cardinalities: |U| = |X1||X2|, |U1c|=|U1pb|=|U2pb|=|X1|,
// |U2c|=|X2|, |U1|=|X1|, |U2|=|X2|, |V|=|X1||X2|; overrides win.
int default_aux_card(const CifcChannel& ch, Role r);

enum class DominanceKind { dmt_in_rtd, cc_in_rtd, jiang_in_rtd, wu_in_marginal };

const char* dominance_kind_name(DominanceKind k);

struct DominanceRow {
    std::string label;
    double value_a = 0.0;   // combination from the contained region
    double value_b = 0.0;   // combination from the containing region
    double difference = 0.0; // value_b - value_a
    std::optional<double> expected; // proved value of the difference, when one exists
    bool ok = false;
};

struct DominanceReport {
    DominanceKind kind = DominanceKind::dmt_in_rtd;
    int assignments_checked = 0;
    std::vector<DominanceRow> rows; // worst case over all checked assignments
    bool ok = false;
};

// Evaluates a region comparison row by row at `a` plus `samples` further
// assignments drawn (seeded) with the comparison's factorization.
DominanceReport dominance_check(const CifcChannel& ch, DominanceKind kind,
                                const AuxAssignment& a, int samples = 0,
                                std::uint64_t seed = 0);

// Deterministic auxiliary choices used by sweeps and tests.
enum class AuxSource { constant, copy_x1, copy_x2, map_f1, map_f2 };

// Extends an input distribution over {X1,X2} with deterministic auxiliary
// axes (constants, input copies, or channel output maps).
JointPMF with_aux_copies(const CifcChannel& ch, const JointPMF& input,
                         const std::vector<std::pair<Role, AuxSource>>& specs);

// Fully specified deterministic pseudo-random generator (splitmix64) so that
// seeded searches reproduce bit-exactly everywhere.
struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed) {}
    std::uint64_t next_u64();
    double next_double(); // [0,1)
    double next_exp();    // standard exponential
};

// Dirichlet(1,...,1) over the joint cells of the given axes.
JointPMF random_pmf(Rng& rng, const std::vector<Axis>& axes);

std::string regime_report_to_json(const RegimeReport& report);
std::string dominance_report_to_json(const DominanceReport& report);

} // namespace cifc
