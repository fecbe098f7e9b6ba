#include "cifc/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace cifc {

namespace {

constexpr double kSlack = 1e-9;

constexpr const char* kRateVarNames[kRateVarCount] = {
    "R1", "R2", "R1c", "R1pb", "R2c", "R2pa", "R2pb", "R1c'", "R1pb'", "R2pb'",
};

// Internal dense row; the extra last column is a scratch objective variable
// used by max_linear and never carries a nonnegativity constraint.
constexpr int kCols = kRateVarCount + 1;
constexpr int kObjCol = kRateVarCount;

struct Row {
    std::array<long long, kCols> c{};
    double rhs = 0.0;
};

long long gcd_ll(long long a, long long b) { return std::gcd(a < 0 ? -a : a, b < 0 ? -b : b); }

void normalize_row(Row& r) {
    long long g = 0;
    for (long long c : r.c) g = gcd_ll(g, c);
    if (g > 1) {
        for (long long& c : r.c) c /= g;
        r.rhs /= static_cast<double>(g);
    }
}

bool all_zero(const Row& r) {
    for (long long c : r.c)
        if (c != 0) return false;
    return true;
}

// Dedupe identical coefficient vectors (keep the tightest rhs), drop rows that
// are trivially true, keep at most one infeasibility marker.
std::vector<Row> prune(std::vector<Row> rows) {
    std::map<std::array<long long, kCols>, double> best;
    bool infeasible = false;
    for (Row& r : rows) {
        normalize_row(r);
        if (all_zero(r)) {
            if (r.rhs < -kSlack) infeasible = true;
            continue;
        }
        auto it = best.find(r.c);
        if (it == best.end())
            best.emplace(r.c, r.rhs);
        else
            it->second = std::min(it->second, r.rhs);
    }
    std::vector<Row> out;
    out.reserve(best.size() + 1);
    if (infeasible) {
        Row marker;
        marker.rhs = -1.0;
        out.push_back(marker);
    }
    for (const auto& [c, rhs] : best) out.push_back(Row{c, rhs});
    return out;
}

// One Fourier-Motzkin step over <=-rows; the eliminated variable's implicit
// nonnegativity participates for real rate variables.
std::vector<Row> eliminate_col(const std::vector<Row>& rows, int col) {
    std::vector<const Row*> pos, neg;
    std::vector<Row> out;
    Row nonneg;
    if (col != kObjCol) {
        nonneg.c[col] = -1;
        neg.push_back(&nonneg);
    }
    for (const Row& r : rows) {
        if (r.c[col] > 0)
            pos.push_back(&r);
        else if (r.c[col] < 0)
            neg.push_back(&r);
        else
            out.push_back(r);
    }
    for (const Row* p : pos)
        for (const Row* n : neg) {
            long long mp = -n->c[col]; // > 0
            long long mn = p->c[col];  // > 0
            long long g = gcd_ll(mp, mn);
            mp /= g;
            mn /= g;
            Row combo;
            for (int i = 0; i < kCols; ++i) combo.c[i] = mp * p->c[i] + mn * n->c[i];
            combo.rhs = static_cast<double>(mp) * p->rhs + static_cast<double>(mn) * n->rhs;
            out.push_back(combo);
        }
    return prune(std::move(out));
}

int pick_column(const std::vector<Row>& rows, const std::vector<int>& candidates) {
    int best = -1;
    long long best_cost = std::numeric_limits<long long>::max();
    for (int col : candidates) {
        long long p = 0, n = 1; // nonnegativity row counts as one lower bound
        for (const Row& r : rows) {
            if (r.c[col] > 0) ++p;
            else if (r.c[col] < 0) ++n;
        }
        long long cost = p * n;
        if (p == 0 && n == 1) cost = 0; // absent: free to drop
        if (cost < best_cost) {
            best_cost = cost;
            best = col;
        }
    }
    return best;
}

std::vector<Row> eliminate_all(std::vector<Row> rows, std::vector<int> cols) {
    while (!cols.empty()) {
        int col = pick_column(rows, cols);
        rows = eliminate_col(rows, col);
        cols.erase(std::find(cols.begin(), cols.end(), col));
    }
    return rows;
}

Row to_le_row(const LinearConstraint& c, bool negate) {
    Row r;
    for (int i = 0; i < kRateVarCount; ++i) r.c[i] = negate ? -c.coeff[i] : c.coeff[i];
    r.rhs = negate ? -c.rhs : c.rhs;
    return r;
}

// Expands senses: eq becomes a <=-pair, ge is negated.
std::vector<Row> to_le_rows(const RateSystem& sys) {
    std::vector<Row> rows;
    rows.reserve(sys.rows.size() + 2);
    for (const LinearConstraint& c : sys.rows) {
        switch (c.sense) {
            case Sense::le: rows.push_back(to_le_row(c, false)); break;
            case Sense::ge: rows.push_back(to_le_row(c, true)); break;
            case Sense::eq:
                rows.push_back(to_le_row(c, false));
                rows.push_back(to_le_row(c, true));
                break;
        }
    }
    return rows;
}

LinearConstraint from_row(const Row& r) {
    LinearConstraint c;
    for (int i = 0; i < kRateVarCount; ++i) c.coeff[i] = r.c[i];
    c.sense = Sense::le;
    c.rhs = r.rhs;
    return c;
}

LpResult max_rows(std::vector<Row> rows, const std::array<long long, kRateVarCount>& objective,
                  double box) {
    std::vector<int> mentioned;
    for (int i = 0; i < kRateVarCount; ++i) {
        bool used = objective[i] != 0;
        for (const Row& r : rows)
            if (r.c[i] != 0) used = true;
        if (used) mentioned.push_back(i);
    }
    Row def_a, def_b; // t - obj.x <= 0 and obj.x - t <= 0
    def_a.c[kObjCol] = 1;
    def_b.c[kObjCol] = -1;
    for (int i = 0; i < kRateVarCount; ++i) {
        def_a.c[i] = -objective[i];
        def_b.c[i] = objective[i];
    }
    rows.push_back(def_a);
    rows.push_back(def_b);
    if (box > 0.0) {
        for (int i : mentioned) {
            Row r;
            r.c[i] = 1;
            r.rhs = box;
            rows.push_back(r);
        }
    }
    rows = eliminate_all(prune(std::move(rows)), mentioned);

    double ub = std::numeric_limits<double>::infinity();
    double lb = -std::numeric_limits<double>::infinity();
    bool has_ub = false;
    for (const Row& r : rows) {
        if (all_zero(r)) {
            if (r.rhs < -kSlack) return {LpResult::infeasible, 0.0};
            continue;
        }
        long long a = r.c[kObjCol];
        if (a > 0) {
            ub = std::min(ub, r.rhs / static_cast<double>(a));
            has_ub = true;
        } else if (a < 0) {
            lb = std::max(lb, r.rhs / static_cast<double>(a));
        }
    }
    if (lb > ub + kSlack) return {LpResult::infeasible, 0.0};
    if (!has_ub) return {LpResult::unbounded, 0.0};
    return {LpResult::finite, ub};
}

} // namespace

const char* rate_var_name(RateVar v) { return kRateVarNames[static_cast<int>(v)]; }

std::optional<RateVar> rate_var_from_name(std::string_view name) {
    for (int i = 0; i < kRateVarCount; ++i)
        if (name == kRateVarNames[i]) return static_cast<RateVar>(i);
    return std::nullopt;
}

LinearConstraint::LinearConstraint(std::initializer_list<std::pair<RateVar, long long>> terms,
                                   Sense s, double r)
    : sense(s), rhs(r) {
    for (const auto& [v, c] : terms) coeff[static_cast<int>(v)] += c;
}

bool RateSystem::mentions(RateVar v) const {
    for (const LinearConstraint& c : rows)
        if (c.mentions(v)) return true;
    return false;
}

RateSystem fme_eliminate(const RateSystem& sys, RateVar var) {
    if (!sys.mentions(var))
        fail(Errc::unknown_variable, std::string(rate_var_name(var)) + " does not appear");
    std::vector<Row> rows = eliminate_col(prune(to_le_rows(sys)), static_cast<int>(var));
    RateSystem out;
    for (const Row& r : rows) out.add(from_row(r));
    return out;
}

LpResult max_linear(const RateSystem& sys, const std::array<long long, kRateVarCount>& objective,
                    double box) {
    return max_rows(to_le_rows(sys), objective, box);
}

RateSystem remove_redundant(const RateSystem& sys) {
    double box = 1.0;
    for (const LinearConstraint& c : sys.rows) box += std::abs(c.rhs);

    std::vector<bool> removed(sys.rows.size(), false);
    for (std::size_t i = 0; i < sys.rows.size(); ++i) {
        RateSystem others;
        for (std::size_t j = 0; j < sys.rows.size(); ++j)
            if (j != i && !removed[j]) others.add(sys.rows[j]);

        const LinearConstraint& cand = sys.rows[i];
        auto implied = [&](const LinearConstraint& c, bool negate) {
            std::array<long long, kRateVarCount> obj{};
            for (int k = 0; k < kRateVarCount; ++k) obj[k] = negate ? -c.coeff[k] : c.coeff[k];
            double limit = negate ? -c.rhs : c.rhs;
            LpResult r = max_rows(to_le_rows(others), obj, box);
            if (r.status == LpResult::infeasible) return true;
            return r.status == LpResult::finite && r.value <= limit + kSlack;
        };
        bool drop = false;
        switch (cand.sense) {
            case Sense::le: drop = implied(cand, false); break;
            case Sense::ge: drop = implied(cand, true); break;
            case Sense::eq: drop = implied(cand, false) && implied(cand, true); break;
        }
        removed[i] = drop;
    }
    RateSystem out;
    for (std::size_t i = 0; i < sys.rows.size(); ++i)
        if (!removed[i]) out.add(sys.rows[i]);
    return out;
}

RatePolytope2D::RatePolytope2D(std::vector<LinearConstraint> rows) {
    for (const LinearConstraint& c : rows)
        for (int i = 0; i < kRateVarCount; ++i)
            if (c.coeff[i] != 0 && i > static_cast<int>(RateVar::R2))
                fail(Errc::unknown_variable, "2-D polytope rows may only mention R1 and R2");

    {
        RateSystem tmp;
        tmp.rows = rows;
        for (Row& r : to_le_rows(tmp)) rows_.push_back(from_row(r));
    }

    // Bounded by construction in every produced region; guard anyway.
    for (RateVar v : {RateVar::R1, RateVar::R2}) {
        std::array<long long, kRateVarCount> obj{};
        obj[static_cast<int>(v)] = 1;
        RateSystem tmp;
        tmp.rows = rows_;
        if (max_linear(tmp, obj).status == LpResult::unbounded)
            fail(Errc::unbounded, std::string("no finite bound on ") + rate_var_name(v));
    }

    // Candidate vertices: pairwise line intersections including the two axes.
    struct Line {
        long long a, b;
        double r;
    };
    std::vector<Line> lines{{1, 0, 0.0}, {0, 1, 0.0}};
    for (const LinearConstraint& c : rows_)
        lines.push_back({c.coefficient(RateVar::R1), c.coefficient(RateVar::R2), c.rhs});

    std::vector<std::array<double, 2>> pts;
    for (std::size_t i = 0; i < lines.size(); ++i)
        for (std::size_t j = i + 1; j < lines.size(); ++j) {
            long long det = lines[i].a * lines[j].b - lines[j].a * lines[i].b;
            if (det == 0) continue;
            double x = (lines[i].r * lines[j].b - lines[j].r * lines[i].b) / static_cast<double>(det);
            double y = (lines[i].a * lines[j].r - lines[j].a * lines[i].r) / static_cast<double>(det);
            if (x < -kSlack || y < -kSlack) continue;
            if (!contains_point_rows(x, y)) continue;
            if (x <= 0.0) x = 0.0; // also normalizes -0.0
            if (y <= 0.0) y = 0.0;
            pts.push_back({x, y});
        }

    std::sort(pts.begin(), pts.end());
    auto near = [](const std::array<double, 2>& p, const std::array<double, 2>& q) {
        return std::abs(p[0] - q[0]) <= kSlack && std::abs(p[1] - q[1]) <= kSlack;
    };
    std::vector<std::array<double, 2>> uniq;
    for (const auto& p : pts) {
        bool dup = false;
        for (const auto& q : uniq)
            if (near(p, q)) { dup = true; break; }
        if (!dup) uniq.push_back(p);
    }

    if (uniq.size() <= 2) {
        vertices_ = uniq;
        return;
    }

    // Monotone chain; output is counterclockwise starting at the lex-min point.
    auto cross = [](const std::array<double, 2>& o, const std::array<double, 2>& a,
                    const std::array<double, 2>& b) {
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    };
    std::vector<std::array<double, 2>> hull;
    for (const auto& p : uniq) {
        while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), p) <= 1e-12) hull.pop_back();
        hull.push_back(p);
    }
    std::size_t lower_size = hull.size() + 1;
    for (auto it = uniq.rbegin(); it != uniq.rend(); ++it) {
        while (hull.size() >= lower_size && cross(hull[hull.size() - 2], hull.back(), *it) <= 1e-12)
            hull.pop_back();
        hull.push_back(*it);
    }
    hull.pop_back();
    vertices_ = std::move(hull);
}

bool RatePolytope2D::contains_point_rows(double r1, double r2) const {
    for (const LinearConstraint& c : rows_) {
        double lhs = static_cast<double>(c.coefficient(RateVar::R1)) * r1 +
                     static_cast<double>(c.coefficient(RateVar::R2)) * r2;
        if (lhs > c.rhs + kSlack) return false;
    }
    return true;
}

bool RatePolytope2D::contains_point(double r1, double r2) const {
    if (r1 < -kSlack || r2 < -kSlack) return false;
    return contains_point_rows(r1, r2);
}

RatePolytope2D project_to_r1_r2(const RateSystem& sys) {
    RateSystem work = sys;
    work.add(LinearConstraint({{RateVar::R1, 1}, {RateVar::R1c, -1}, {RateVar::R1pb, -1}},
                              Sense::eq, 0.0));
    work.add(LinearConstraint({{RateVar::R2, 1},
                               {RateVar::R2c, -1},
                               {RateVar::R2pa, -1},
                               {RateVar::R2pb, -1}},
                              Sense::eq, 0.0));

    std::vector<Row> rows = prune(to_le_rows(work));
    std::vector<int> cols;
    for (int i = 0; i < kRateVarCount; ++i)
        if (i != static_cast<int>(RateVar::R1) && i != static_cast<int>(RateVar::R2)) cols.push_back(i);
    rows = eliminate_all(std::move(rows), std::move(cols));

    RateSystem projected;
    for (const Row& r : rows) projected.add(from_row(r));
    projected = remove_redundant(projected);

    for (RateVar v : {RateVar::R1, RateVar::R2}) {
        std::array<long long, kRateVarCount> obj{};
        obj[static_cast<int>(v)] = 1;
        if (max_linear(projected, obj).status == LpResult::unbounded)
            fail(Errc::unbounded, std::string("projection unbounded in ") + rate_var_name(v));
    }
    return RatePolytope2D(projected.rows);
}

std::vector<std::array<double, 2>> vertices_2d(const RatePolytope2D& poly) { return poly.vertices(); }

bool contains(const RatePolytope2D& outer, const RatePolytope2D& inner) {
    if (inner.empty()) return true;
    if (outer.empty()) return false;
    for (const auto& v : inner.vertices())
        if (!outer.contains_point(v[0], v[1])) return false;
    return true;
}

std::vector<FrontierSample> union_frontier(const std::vector<RatePolytope2D>& polys,
                                           const std::vector<double>& weights) {
    std::vector<FrontierSample> out;
    out.reserve(weights.size());
    for (double lambda : weights) {
        FrontierSample best;
        best.lambda = lambda;
        best.value = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < polys.size(); ++k)
            for (const auto& v : polys[k].vertices()) {
                double val = lambda * v[0] + (1.0 - lambda) * v[1];
                if (val > best.value) {
                    best.value = val;
                    best.point = v;
                    best.poly_index = static_cast<int>(k);
                }
            }
        if (best.poly_index < 0) {
            best.value = 0.0;
            best.point = {0.0, 0.0};
        }
        out.push_back(best);
    }
    return out;
}

std::string format_sig(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

double round_sig(double v) { return std::strtod(format_sig(v).c_str(), nullptr); }

std::string polytope_to_json(const RatePolytope2D& poly) {
    nlohmann::json doc;
    doc["constraints"] = nlohmann::json::array();
    for (const LinearConstraint& c : poly.constraints()) {
        nlohmann::json coeffs = nlohmann::json::object();
        for (int i = 0; i < kRateVarCount; ++i)
            if (c.coeff[i] != 0) coeffs[kRateVarNames[i]] = c.coeff[i];
        doc["constraints"].push_back(
            {{"coeffs", coeffs}, {"sense", "<="}, {"rhs", round_sig(c.rhs)}});
    }
    doc["vertices"] = nlohmann::json::array();
    for (const auto& v : poly.vertices())
        doc["vertices"].push_back({round_sig(v[0]), round_sig(v[1])});
    return doc.dump(2) + "\n";
}

std::string frontier_to_csv(const std::vector<FrontierSample>& frontier) {
    std::string out = "lambda,R1,R2,value\n";
    for (const FrontierSample& f : frontier) {
        out += format_sig(f.lambda);
        out += ",";
        out += format_sig(f.point[0]);
        out += ",";
        out += format_sig(f.point[1]);
        out += ",";
        out += format_sig(f.value);
        out += "\n";
    }
    return out;
}

} // namespace cifc
