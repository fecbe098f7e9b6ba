#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cifc/errors.hpp"

namespace cifc {

// Named rate variables. The P suffix marks the primed binning rates R', which
// are always eliminated before projecting to (R1, R2).
enum class RateVar : int {
    R1, R2, R1c, R1pb, R2c, R2pa, R2pb, R1cP, R1pbP, R2pbP,
};

inline constexpr int kRateVarCount = 10;

const char* rate_var_name(RateVar v);
std::optional<RateVar> rate_var_from_name(std::string_view name);

enum class Sense { le, ge, eq };

// One linear row over the rate variables. Coefficients are exact integers
// (the source systems use only 0/±1 and Fourier-Motzkin keeps them integral);
// only the right-hand side is floating, it carries entropy values.
struct LinearConstraint {
    std::array<long long, kRateVarCount> coeff{};
    Sense sense = Sense::le;
    double rhs = 0.0;

    LinearConstraint() = default;
    LinearConstraint(std::initializer_list<std::pair<RateVar, long long>> terms, Sense s, double r);

    long long coefficient(RateVar v) const { return coeff[static_cast<int>(v)]; }
    void set(RateVar v, long long c) { coeff[static_cast<int>(v)] = c; }
    bool mentions(RateVar v) const { return coefficient(v) != 0; }
};

// Inequality system over the rate variables; every variable additionally
// satisfies the implicit nonnegativity constraint v >= 0.
struct RateSystem {
    std::vector<LinearConstraint> rows;

    void add(LinearConstraint c) { rows.push_back(std::move(c)); }
    bool mentions(RateVar v) const;
};

// Exact projection: the returned system has no occurrence of `var` and its
// feasible set (within the nonnegative orthant) is the projection of the
// input's. Equalities are split into inequality pairs first. Trivially true
// rows and duplicate rows are pruned; an infeasible input keeps a single
// 0 <= rhs marker row with rhs < 0.
RateSystem fme_eliminate(const RateSystem& sys, RateVar var);

// Drops every row implied by the remaining ones, certified by maximizing the
// candidate row subject to the others over a bounding box, slack 1e-9.
RateSystem remove_redundant(const RateSystem& sys);

struct LpResult {
    enum Status { finite, unbounded, infeasible } status = finite;
    double value = 0.0;
};

// max objective . x subject to sys and x >= 0 (plus 0 <= x_i <= box when
// box > 0), solved exactly by eliminating every variable.
LpResult max_linear(const RateSystem& sys, const std::array<long long, kRateVarCount>& objective,
                    double box = -1.0);

// Bounded 2-D region over {R1, R2} within the nonnegative orthant.
// Vertices are cached counterclockwise starting from the lexicographically
// smallest point; an empty region has no vertices.
class RatePolytope2D {
public:
    RatePolytope2D() = default;

    // Rows may only mention R1/R2 and are normalized to <=; redundant rows are
    // kept as given (callers prune beforehand when they care).
    explicit RatePolytope2D(std::vector<LinearConstraint> rows);

    const std::vector<LinearConstraint>& constraints() const { return rows_; }
    const std::vector<std::array<double, 2>>& vertices() const { return vertices_; }
    bool empty() const { return vertices_.empty(); }

    // Membership with slack >= -1e-9.
    bool contains_point(double r1, double r2) const;

private:
    std::vector<LinearConstraint> rows_;
    std::vector<std::array<double, 2>> vertices_;

    bool contains_point_rows(double r1, double r2) const;
};

// Substitutes R1 = R1c + R1pb and R2 = R2c + R2pa + R2pb as equalities,
// eliminates everything but R1/R2, removes redundancy and intersects with the
// nonnegative orthant. Errors with `unbounded` when the projection has no
// finite rate bound.
RatePolytope2D project_to_r1_r2(const RateSystem& sys);

std::vector<std::array<double, 2>> vertices_2d(const RatePolytope2D& poly);

// Every vertex of `inner` satisfies every constraint of `outer`, slack -1e-9.
bool contains(const RatePolytope2D& outer, const RatePolytope2D& inner);

struct FrontierSample {
    double lambda = 0.0;
    double value = 0.0;
    std::array<double, 2> point{0.0, 0.0};
    int poly_index = -1;
};

// For each weight, the maximum of lambda*R1 + (1-lambda)*R2 over the union of
// the polytopes together with an achieving vertex; ties keep the first found.
std::vector<FrontierSample> union_frontier(const std::vector<RatePolytope2D>& polys,
                                           const std::vector<double>& weights);

// {"constraints":[{"coeffs":{"R1":a,"R2":b},"sense":"<=","rhs":r},...],
//  "vertices":[[r1,r2],...]} with values rounded to 12 significant digits.
std::string polytope_to_json(const RatePolytope2D& poly);

// CSV with header "lambda,R1,R2,value", 12 significant digits.
std::string frontier_to_csv(const std::vector<FrontierSample>& frontier);

// Shared fixed-precision numeric formatting (12 significant digits).
std::string format_sig(double v);
double round_sig(double v);

} // namespace cifc
