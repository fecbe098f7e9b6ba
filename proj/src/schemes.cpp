#include "cifc/schemes.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include <json.hpp>

namespace cifc {

namespace {

void validate_scheme(const CifcChannel& ch, const SchemeTable& s) {
    if (s.m1 < 1 || s.m2 < 1) fail(Errc::alphabet_mismatch, "scheme needs m1, m2 >= 1");
    if (static_cast<int>(s.x1_of.size()) != s.m1 || static_cast<int>(s.x2_of.size()) != s.m2)
        fail(Errc::alphabet_mismatch, "encoder table shape mismatch");
    for (const auto& row : s.x1_of) {
        if (static_cast<int>(row.size()) != s.m2) fail(Errc::alphabet_mismatch, "encoder table shape mismatch");
        for (int x1 : row)
            if (x1 < 0 || x1 >= ch.card_x1()) fail(Errc::alphabet_mismatch, "x1 outside channel alphabet");
    }
    for (int x2 : s.x2_of)
        if (x2 < 0 || x2 >= ch.card_x2()) fail(Errc::alphabet_mismatch, "x2 outside channel alphabet");
    if (static_cast<int>(s.dec1.size()) != ch.card_y1() || static_cast<int>(s.dec2.size()) != ch.card_y2())
        fail(Errc::alphabet_mismatch, "decoder table length mismatch");
}

} // namespace

std::array<double, 2> SchemeTable::rates() const {
    return {std::log2(static_cast<double>(m1)), std::log2(static_cast<double>(m2))};
}

VerifyResult verify_zero_error(const CifcChannel& ch, const SchemeTable& s) {
    if (!ch.is_deterministic())
        fail(Errc::not_deterministic, "zero-error verification needs a deterministic channel");
    validate_scheme(ch, s);
    VerifyResult out;
    out.rates = s.rates();
    // Message pairs sharing an input pair cannot be told apart; every member
    // of a colliding group is a failure even when its own decode comes back
    // right by accident.
    std::map<std::pair<int, int>, int> first_use;
    std::vector<std::vector<bool>> collided(s.m1, std::vector<bool>(s.m2, false));
    for (int w1 = 0; w1 < s.m1; ++w1)
        for (int w2 = 0; w2 < s.m2; ++w2) {
            auto key = std::make_pair(s.x1_of[w1][w2], s.x2_of[w2]);
            auto [it, fresh] = first_use.emplace(key, w1 * s.m2 + w2);
            if (!fresh) {
                collided[w1][w2] = true;
                collided[it->second / s.m2][it->second % s.m2] = true;
            }
        }
    for (int w1 = 0; w1 < s.m1; ++w1)
        for (int w2 = 0; w2 < s.m2; ++w2) {
            int x1 = s.x1_of[w1][w2];
            int x2 = s.x2_of[w2];
            int y1 = ch.f1(x1, x2);
            int y2 = ch.f2(x1, x2);
            int w1h = s.dec1[y1];
            int w2h = s.dec2[y2];
            if (w1h != w1 || w2h != w2 || collided[w1][w2])
                out.failures.push_back({w1, w2, x1, x2, y1, y2, w1h, w2h});
        }
    out.ok = out.failures.empty();
    return out;
}

SchemeTable scheme_clipper_13() {
    SchemeTable s;
    s.m1 = 2;
    s.m2 = 8;
    s.x1_of.assign(2, std::vector<int>(8, 0));
    s.x2_of.resize(8);
    for (int w2 = 0; w2 < 8; ++w2) {
        s.x2_of[w2] = w2;
        for (int w1 = 0; w1 < 2; ++w1) s.x1_of[w1][w2] = ((w1 - w2) % 2 + 2) % 2;
    }
    s.dec1.resize(4);
    for (int y1 = 0; y1 < 4; ++y1) s.dec1[y1] = y1 % 2;
    s.dec2.resize(8);
    for (int y2 = 0; y2 < 8; ++y2) s.dec2[y2] = y2;
    return s;
}

SchemeTable scheme_clipper_22() {
    SchemeTable s;
    s.m1 = 4;
    s.m2 = 4;
    s.x1_of.assign(4, std::vector<int>(4, 0));
    s.x2_of.resize(4);
    for (int w2 = 0; w2 < 4; ++w2) {
        s.x2_of[w2] = 2 * w2;
        for (int w1 = 0; w1 < 4; ++w1) s.x1_of[w1][w2] = ((w1 - 2 * w2) % 4 + 4) % 4;
    }
    s.dec1.resize(4);
    for (int y1 = 0; y1 < 4; ++y1) s.dec1[y1] = y1;
    s.dec2.resize(8);
    for (int y2 = 0; y2 < 8; ++y2) s.dec2[y2] = y2 / 2;
    return s;
}

SchemeTable scheme_symmetric_12() {
    CifcChannel ch = builtin_channel("symmetric_clipper");
    SchemeTable s;
    s.m1 = 2;
    s.m2 = 4;
    s.x1_of.assign(2, std::vector<int>(4, -1));
    s.x2_of.resize(4);
    for (int w2 = 0; w2 < 4; ++w2) {
        s.x2_of[w2] = std::max(w2 - 1, 0);
        for (int w1 = 0; w1 < 2; ++w1) {
            // The smallest input steering both outputs onto the message pair;
            // it exists and is unique for every pair.
            for (int x1 = 0; x1 < ch.card_x1(); ++x1)
                if (ch.f1(x1, s.x2_of[w2]) == w1 && ch.f2(x1, s.x2_of[w2]) == w2) {
                    s.x1_of[w1][w2] = x1;
                    break;
                }
        }
    }
    s.dec1 = {0, 1};
    s.dec2 = {0, 1, 2, 3};
    return s;
}

std::vector<SchemeRow> emit_table(const CifcChannel& ch, const SchemeTable& s) {
    if (!ch.is_deterministic())
        fail(Errc::not_deterministic, "achievability tables need a deterministic channel");
    validate_scheme(ch, s);
    std::vector<SchemeRow> rows;
    rows.reserve(static_cast<std::size_t>(s.m1) * s.m2);
    for (int w1 = 0; w1 < s.m1; ++w1)
        for (int w2 = 0; w2 < s.m2; ++w2) {
            int x1 = s.x1_of[w1][w2];
            int x2 = s.x2_of[w2];
            int y1 = ch.f1(x1, x2);
            int y2 = ch.f2(x1, x2);
            rows.push_back({w1, w2, x1, x2, y1, y2, s.dec1[y1], s.dec2[y2]});
        }
    return rows;
}

std::string table_to_csv(const std::vector<SchemeRow>& rows) {
    std::string out = "w1,w2,x1,x2,y1,y2,w1_hat,w2_hat\n";
    for (const SchemeRow& r : rows) {
        std::ostringstream os;
        os << r.w1 << "," << r.w2 << "," << r.x1 << "," << r.x2 << "," << r.y1 << "," << r.y2 << ","
           << r.w1_hat << "," << r.w2_hat << "\n";
        out += os.str();
    }
    return out;
}

JointPMF induced_input_distribution(const SchemeTable& s, int card_x1, int card_x2) {
    std::vector<double> v(static_cast<std::size_t>(card_x1) * card_x2, 0.0);
    double w = 1.0 / (static_cast<double>(s.m1) * s.m2);
    for (int w1 = 0; w1 < s.m1; ++w1)
        for (int w2 = 0; w2 < s.m2; ++w2) {
            int x1 = s.x1_of[w1][w2];
            int x2 = s.x2_of[w2];
            if (x1 < 0 || x1 >= card_x1 || x2 < 0 || x2 >= card_x2)
                fail(Errc::alphabet_mismatch, "scheme input outside alphabets");
            v[static_cast<std::size_t>(x1) * card_x2 + x2] += w;
        }
    return JointPMF::from_table(std::move(v), {{Role::X1, card_x1}, {Role::X2, card_x2}});
}

std::string scheme_to_json(const SchemeTable& s) {
    nlohmann::json doc;
    doc["m1"] = s.m1;
    doc["m2"] = s.m2;
    doc["x1"] = s.x1_of;
    doc["x2"] = s.x2_of;
    doc["dec1"] = s.dec1;
    doc["dec2"] = s.dec2;
    return doc.dump(2) + "\n";
}

SchemeTable scheme_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail(Errc::parse_error, e.what());
    }
    try {
        SchemeTable s;
        s.m1 = doc.at("m1").get<int>();
        s.m2 = doc.at("m2").get<int>();
        s.x1_of = doc.at("x1").get<std::vector<std::vector<int>>>();
        s.x2_of = doc.at("x2").get<std::vector<int>>();
        s.dec1 = doc.at("dec1").get<std::vector<int>>();
        s.dec2 = doc.at("dec2").get<std::vector<int>>();
        return s;
    } catch (const nlohmann::json::exception& e) {
        fail(Errc::schema_violation, e.what());
    }
}

SchemeTable scheme_from_csv(const std::string& text, int card_y1, int card_y2) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) fail(Errc::parse_error, "empty scheme CSV");

    struct Entry {
        int w1, w2, x1, x2, y1, y2, w1h, w2h;
    };
    std::vector<Entry> entries;
    int m1 = 0, m2 = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        Entry ent{};
        char comma;
        std::istringstream ls(line);
        if (!(ls >> ent.w1 >> comma >> ent.w2 >> comma >> ent.x1 >> comma >> ent.x2 >> comma >>
              ent.y1 >> comma >> ent.y2 >> comma >> ent.w1h >> comma >> ent.w2h))
            fail(Errc::parse_error, "bad scheme CSV row: " + line);
        m1 = std::max(m1, ent.w1 + 1);
        m2 = std::max(m2, ent.w2 + 1);
        entries.push_back(ent);
    }
    if (entries.empty()) fail(Errc::parse_error, "scheme CSV has no rows");

    SchemeTable s;
    s.m1 = m1;
    s.m2 = m2;
    s.x1_of.assign(m1, std::vector<int>(m2, -1));
    s.x2_of.assign(m2, -1);
    s.dec1.assign(card_y1, 0);
    s.dec2.assign(card_y2, 0);
    std::vector<bool> seen1(card_y1, false), seen2(card_y2, false);
    for (const Entry& ent : entries) {
        s.x1_of[ent.w1][ent.w2] = ent.x1;
        if (s.x2_of[ent.w2] >= 0 && s.x2_of[ent.w2] != ent.x2)
            fail(Errc::schema_violation, "x2 varies with w1 in scheme CSV");
        s.x2_of[ent.w2] = ent.x2;
        if (ent.y1 >= 0 && ent.y1 < card_y1 && !seen1[ent.y1]) {
            s.dec1[ent.y1] = ent.w1h;
            seen1[ent.y1] = true;
        }
        if (ent.y2 >= 0 && ent.y2 < card_y2 && !seen2[ent.y2]) {
            s.dec2[ent.y2] = ent.w2h;
            seen2[ent.y2] = true;
        }
    }
    for (int w1 = 0; w1 < m1; ++w1)
        for (int w2 = 0; w2 < m2; ++w2)
            if (s.x1_of[w1][w2] < 0) fail(Errc::schema_violation, "scheme CSV misses a message pair");
    return s;
}

SchemeTable builtin_scheme(std::string_view name) {
    if (name == "clipper13") return scheme_clipper_13();
    if (name == "clipper22") return scheme_clipper_22();
    if (name == "symmetric12") return scheme_symmetric_12();
    fail(Errc::unknown_name, std::string("no builtin scheme named ") + std::string(name));
}

const CifcChannel& scheme_channel(std::string_view name) {
    static const CifcChannel asym = builtin_channel("asymmetric_clipper");
    static const CifcChannel sym = builtin_channel("symmetric_clipper");
    if (name == "clipper13" || name == "clipper22") return asym;
    if (name == "symmetric12") return sym;
    fail(Errc::unknown_name, std::string("no builtin scheme named ") + std::string(name));
}

} // namespace cifc
