#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cifc/errors.hpp"

namespace cifc {

// Tables (x1,x2) -> y for the deterministic output maps. f2 is absent for
// semi-deterministic channels whose second output is noisy.
struct DeterministicMaps {
    std::vector<std::vector<int>> f1;
    std::optional<std::vector<std::vector<int>>> f2;
};

// Discrete memoryless cognitive interference channel: transition kernel
// p(y1,y2|x1,x2) over four finite alphabets, stored dense. Alphabets are
// 0-based integer ranges. Immutable after construction.
class CifcChannel {
public:
    CifcChannel() = default;

    // kernel laid out row-major as [x1][x2][y1][y2]; every (x1,x2) row must
    // sum to 1 within 1e-12 (row_not_stochastic) with nonnegative entries.
    static CifcChannel from_kernel(std::vector<double> kernel, int card_x1, int card_x2,
                                   int card_y1, int card_y2);

    static CifcChannel from_maps(const DeterministicMaps& maps, int card_x1, int card_x2,
                                 int card_y1, int card_y2);

    int card_x1() const { return card_x1_; }
    int card_x2() const { return card_x2_; }
    int card_y1() const { return card_y1_; }
    int card_y2() const { return card_y2_; }

    double kernel(int x1, int x2, int y1, int y2) const;
    const std::vector<double>& kernel_values() const { return kernel_; }

    // p(y1|x1,x2) and p(y2|x1,x2).
    double marginal_y1(int x1, int x2, int y1) const;
    double marginal_y2(int x1, int x2, int y2) const;

    // Semi-deterministic: p(y1|x1,x2) is 0/1-valued. Deterministic: both
    // output marginals are. Exactness tolerance 1e-12.
    bool is_semideterministic() const;
    bool is_deterministic() const;

    // Output maps, available when the corresponding marginal is 0/1-valued.
    std::optional<DeterministicMaps> maps() const;
    int f1(int x1, int x2) const; // not_semideterministic when noisy
    int f2(int x1, int x2) const; // not_deterministic when noisy

    friend bool operator==(const CifcChannel& a, const CifcChannel& b);

private:
    int card_x1_ = 0, card_x2_ = 0, card_y1_ = 0, card_y2_ = 0;
    std::vector<double> kernel_;

    std::size_t idx(int x1, int x2, int y1, int y2) const;
};

// Built-in example channels:
//   asymmetric_clipper: |X1|=|Y1|=4, |X2|=|Y2|=8,
//       Y1 = (X1 + X2) mod 4, Y2 = (1_{2,3}(X1) + X2) mod 8.
//   symmetric_clipper: |X1|=4, |X2|=3, |Y1|=2, |Y2|=4,
//       Y1 = (1_{1,2}(X1) + 1_{1,2}(X2)) mod 2, Y2 = 1_{0,1}(X1) + X2.
CifcChannel builtin_channel(std::string_view name);

// JSON serialization. Schema:
//   { "card": {"x1":int,"x2":int,"y1":int,"y2":int},
//     "kernel": [x1][x2][y1][y2] reals }   or
//   { "card": {...}, "maps": {"f1": [x1][x2] int, "f2": [x1][x2] int} }
// Deterministic channels are written in maps form, everything else as a
// kernel; load(save(ch)) == ch bit-exactly.
std::string save_channel(const CifcChannel& ch);
void save_channel(const CifcChannel& ch, std::ostream& out);
CifcChannel load_channel(std::istream& in);
CifcChannel load_channel_from_string(const std::string& text);

} // namespace cifc
