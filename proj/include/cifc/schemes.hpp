#pragma once

#include <string>
#include <vector>

#include "cifc/channel.hpp"
#include "cifc/prob.hpp"

namespace cifc {

// Single-letter zero-error code: message pair (w1,w2) -> inputs (x1,x2) with
// x2 depending on w2 only (encoder 2 is non-cognitive), plus per-receiver
// symbol decoders.
struct SchemeTable {
    int m1 = 0; // messages of user 1
    int m2 = 0; // messages of user 2
    std::vector<std::vector<int>> x1_of; // [w1][w2]
    std::vector<int> x2_of;              // [w2]
    std::vector<int> dec1;               // [y1] -> w1 estimate
    std::vector<int> dec2;               // [y2] -> w2 estimate

    std::array<double, 2> rates() const; // (log2 m1, log2 m2)
};

struct SchemeFailure {
    int w1, w2, x1, x2, y1, y2, w1_hat, w2_hat;
};

struct VerifyResult {
    bool ok = false;
    std::array<double, 2> rates{0.0, 0.0};
    std::vector<SchemeFailure> failures;
};

// Exhaustive check over all message pairs on a deterministic channel.
VerifyResult verify_zero_error(const CifcChannel& ch, const SchemeTable& s);

// x2 = w2, x1 = (w1 - w2) mod 2, dec1(y1) = y1 mod 2, dec2(y2) = y2;
// zero-error at rates (1, 3) on the asymmetric clipper.
SchemeTable scheme_clipper_13();

// x2 = 2 w2, x1 = (w1 - x2) mod 4, dec1(y1) = y1, dec2(y2) = floor(y2/2);
// zero-error at (2, 2) on the asymmetric clipper.
SchemeTable scheme_clipper_22();

// x2 = max(w2-1, 0) and x1 the value steering both channel outputs onto the
// message pair (unique for every pair); identity decoders, zero-error at
// (1, 2) on the symmetric clipper.
SchemeTable scheme_symmetric_12();

struct SchemeRow {
    int w1, w2, x1, x2, y1, y2, w1_hat, w2_hat;
};

// One row per message pair, w1 outer, w2 inner.
std::vector<SchemeRow> emit_table(const CifcChannel& ch, const SchemeTable& s);

// CSV with header "w1,w2,x1,x2,y1,y2,w1_hat,w2_hat".
std::string table_to_csv(const std::vector<SchemeRow>& rows);

// Input frequencies over (X1,X2) under uniform messages.
JointPMF induced_input_distribution(const SchemeTable& s, int card_x1, int card_x2);

// JSON form: {"m1":..,"m2":..,"x1":[[..]],"x2":[..],"dec1":[..],"dec2":[..]}.
std::string scheme_to_json(const SchemeTable& s);
SchemeTable scheme_from_json(const std::string& text);

// Reads the emitted CSV back; decoder tables are reconstructed from the
// (y, w_hat) columns, first occurrence winning. Verification is the arbiter
// for inconsistent files.
SchemeTable scheme_from_csv(const std::string& text, int card_y1, int card_y2);

SchemeTable builtin_scheme(std::string_view name); // clipper13 | clipper22 | symmetric12

const CifcChannel& scheme_channel(std::string_view name); // channel a builtin scheme targets

} // namespace cifc
