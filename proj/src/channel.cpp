#include "cifc/channel.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace cifc {

namespace {

constexpr double kRowTol = 1e-12;
constexpr double kZeroOneTol = 1e-12;

bool zero_one(double v) { return v <= kZeroOneTol || v >= 1.0 - kZeroOneTol; }

} // namespace

std::size_t CifcChannel::idx(int x1, int x2, int y1, int y2) const {
    return ((static_cast<std::size_t>(x1) * card_x2_ + x2) * card_y1_ + y1) * card_y2_ + y2;
}

CifcChannel CifcChannel::from_kernel(std::vector<double> kernel, int card_x1, int card_x2,
                                     int card_y1, int card_y2) {
    if (card_x1 < 1 || card_x2 < 1 || card_y1 < 1 || card_y2 < 1)
        fail(Errc::shape_mismatch, "cardinalities must be >= 1");
    std::size_t cells = static_cast<std::size_t>(card_x1) * card_x2 * card_y1 * card_y2;
    if (kernel.size() != cells) {
        std::ostringstream os;
        os << "kernel has " << kernel.size() << " entries, expected " << cells;
        fail(Errc::shape_mismatch, os.str());
    }
    CifcChannel ch;
    ch.card_x1_ = card_x1;
    ch.card_x2_ = card_x2;
    ch.card_y1_ = card_y1;
    ch.card_y2_ = card_y2;
    ch.kernel_ = std::move(kernel);
    for (int x1 = 0; x1 < card_x1; ++x1)
        for (int x2 = 0; x2 < card_x2; ++x2) {
            double row = 0.0;
            for (int y1 = 0; y1 < card_y1; ++y1)
                for (int y2 = 0; y2 < card_y2; ++y2) {
                    double v = ch.kernel_[ch.idx(x1, x2, y1, y2)];
                    if (v < 0.0) fail(Errc::row_not_stochastic, "negative kernel entry");
                    row += v;
                }
            if (std::abs(row - 1.0) > kRowTol) {
                std::ostringstream os;
                os << "row (x1=" << x1 << ",x2=" << x2 << ") sums to " << row;
                fail(Errc::row_not_stochastic, os.str());
            }
        }
    return ch;
}

CifcChannel CifcChannel::from_maps(const DeterministicMaps& maps, int card_x1, int card_x2,
                                   int card_y1, int card_y2) {
    if (!maps.f2) fail(Errc::shape_mismatch, "kernel construction from maps needs both f1 and f2");
    std::vector<double> kernel(static_cast<std::size_t>(card_x1) * card_x2 * card_y1 * card_y2, 0.0);
    if (maps.f1.size() != static_cast<std::size_t>(card_x1) ||
        maps.f2->size() != static_cast<std::size_t>(card_x1))
        fail(Errc::shape_mismatch, "map table shape mismatch");
    for (int x1 = 0; x1 < card_x1; ++x1) {
        if (maps.f1[x1].size() != static_cast<std::size_t>(card_x2) ||
            (*maps.f2)[x1].size() != static_cast<std::size_t>(card_x2))
            fail(Errc::shape_mismatch, "map table shape mismatch");
        for (int x2 = 0; x2 < card_x2; ++x2) {
            int y1 = maps.f1[x1][x2];
            int y2 = (*maps.f2)[x1][x2];
            if (y1 < 0 || y1 >= card_y1 || y2 < 0 || y2 >= card_y2)
                fail(Errc::shape_mismatch, "map value outside output alphabet");
            std::size_t base = ((static_cast<std::size_t>(x1) * card_x2 + x2) * card_y1 + y1);
            kernel[base * card_y2 + y2] = 1.0;
        }
    }
    return from_kernel(std::move(kernel), card_x1, card_x2, card_y1, card_y2);
}

double CifcChannel::kernel(int x1, int x2, int y1, int y2) const {
    return kernel_[idx(x1, x2, y1, y2)];
}

double CifcChannel::marginal_y1(int x1, int x2, int y1) const {
    double s = 0.0;
    for (int y2 = 0; y2 < card_y2_; ++y2) s += kernel_[idx(x1, x2, y1, y2)];
    return s;
}

double CifcChannel::marginal_y2(int x1, int x2, int y2) const {
    double s = 0.0;
    for (int y1 = 0; y1 < card_y1_; ++y1) s += kernel_[idx(x1, x2, y1, y2)];
    return s;
}

bool CifcChannel::is_semideterministic() const {
    for (int x1 = 0; x1 < card_x1_; ++x1)
        for (int x2 = 0; x2 < card_x2_; ++x2)
            for (int y1 = 0; y1 < card_y1_; ++y1)
                if (!zero_one(marginal_y1(x1, x2, y1))) return false;
    return true;
}

bool CifcChannel::is_deterministic() const {
    if (!is_semideterministic()) return false;
    for (int x1 = 0; x1 < card_x1_; ++x1)
        for (int x2 = 0; x2 < card_x2_; ++x2)
            for (int y2 = 0; y2 < card_y2_; ++y2)
                if (!zero_one(marginal_y2(x1, x2, y2))) return false;
    return true;
}

int CifcChannel::f1(int x1, int x2) const {
    for (int y1 = 0; y1 < card_y1_; ++y1)
        if (marginal_y1(x1, x2, y1) >= 1.0 - kZeroOneTol) return y1;
    fail(Errc::not_semideterministic, "first output is noisy");
}

int CifcChannel::f2(int x1, int x2) const {
    for (int y2 = 0; y2 < card_y2_; ++y2)
        if (marginal_y2(x1, x2, y2) >= 1.0 - kZeroOneTol) return y2;
    fail(Errc::not_deterministic, "second output is noisy");
}

std::optional<DeterministicMaps> CifcChannel::maps() const {
    if (!is_semideterministic()) return std::nullopt;
    DeterministicMaps m;
    m.f1.assign(card_x1_, std::vector<int>(card_x2_, 0));
    for (int x1 = 0; x1 < card_x1_; ++x1)
        for (int x2 = 0; x2 < card_x2_; ++x2) m.f1[x1][x2] = f1(x1, x2);
    if (is_deterministic()) {
        m.f2.emplace(card_x1_, std::vector<int>(card_x2_, 0));
        for (int x1 = 0; x1 < card_x1_; ++x1)
            for (int x2 = 0; x2 < card_x2_; ++x2) (*m.f2)[x1][x2] = f2(x1, x2);
    }
    return m;
}

bool operator==(const CifcChannel& a, const CifcChannel& b) {
    return a.card_x1_ == b.card_x1_ && a.card_x2_ == b.card_x2_ && a.card_y1_ == b.card_y1_ &&
           a.card_y2_ == b.card_y2_ && a.kernel_ == b.kernel_;
}

CifcChannel builtin_channel(std::string_view name) {
    if (name == "asymmetric_clipper") {
        DeterministicMaps m;
        m.f1.assign(4, std::vector<int>(8, 0));
        m.f2.emplace(4, std::vector<int>(8, 0));
        for (int x1 = 0; x1 < 4; ++x1)
            for (int x2 = 0; x2 < 8; ++x2) {
                m.f1[x1][x2] = (x1 + x2) % 4;
                (*m.f2)[x1][x2] = ((x1 == 2 || x1 == 3 ? 1 : 0) + x2) % 8;
            }
        return CifcChannel::from_maps(m, 4, 8, 4, 8);
    }
    if (name == "symmetric_clipper") {
        DeterministicMaps m;
        m.f1.assign(4, std::vector<int>(3, 0));
        m.f2.emplace(4, std::vector<int>(3, 0));
        for (int x1 = 0; x1 < 4; ++x1)
            for (int x2 = 0; x2 < 3; ++x2) {
                int i1 = (x1 == 1 || x1 == 2) ? 1 : 0;
                int i2 = (x2 == 1 || x2 == 2) ? 1 : 0;
                m.f1[x1][x2] = (i1 + i2) % 2;
                (*m.f2)[x1][x2] = (x1 == 0 || x1 == 1 ? 1 : 0) + x2;
            }
        return CifcChannel::from_maps(m, 4, 3, 2, 4);
    }
    fail(Errc::unknown_name, std::string("no builtin channel named ") + std::string(name));
}

namespace {

using nlohmann::json;

json card_block(const CifcChannel& ch) {
    return json{{"x1", ch.card_x1()}, {"x2", ch.card_x2()}, {"y1", ch.card_y1()}, {"y2", ch.card_y2()}};
}

} // namespace

std::string save_channel(const CifcChannel& ch) {
    json doc;
    doc["card"] = card_block(ch);
    if (ch.is_deterministic()) {
        auto m = ch.maps();
        doc["maps"] = json{{"f1", m->f1}, {"f2", *m->f2}};
    } else {
        std::vector<std::vector<std::vector<std::vector<double>>>> k(
            ch.card_x1(), std::vector<std::vector<std::vector<double>>>(
                              ch.card_x2(), std::vector<std::vector<double>>(
                                                ch.card_y1(), std::vector<double>(ch.card_y2()))));
        for (int x1 = 0; x1 < ch.card_x1(); ++x1)
            for (int x2 = 0; x2 < ch.card_x2(); ++x2)
                for (int y1 = 0; y1 < ch.card_y1(); ++y1)
                    for (int y2 = 0; y2 < ch.card_y2(); ++y2)
                        k[x1][x2][y1][y2] = ch.kernel(x1, x2, y1, y2);
        doc["kernel"] = k;
    }
    return doc.dump(2) + "\n";
}

void save_channel(const CifcChannel& ch, std::ostream& out) { out << save_channel(ch); }

CifcChannel load_channel_from_string(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        fail(Errc::parse_error, e.what());
    }
    try {
        if (!doc.is_object() || !doc.contains("card"))
            fail(Errc::schema_violation, "missing \"card\" block");
        const json& card = doc.at("card");
        int cx1 = card.at("x1").get<int>();
        int cx2 = card.at("x2").get<int>();
        int cy1 = card.at("y1").get<int>();
        int cy2 = card.at("y2").get<int>();
        if (doc.contains("kernel")) {
            const json& k = doc.at("kernel");
            std::vector<double> kernel;
            kernel.reserve(static_cast<std::size_t>(cx1) * cx2 * cy1 * cy2);
            if (static_cast<int>(k.size()) != cx1) fail(Errc::schema_violation, "kernel x1 extent");
            for (const json& jx1 : k) {
                if (static_cast<int>(jx1.size()) != cx2) fail(Errc::schema_violation, "kernel x2 extent");
                for (const json& jx2 : jx1) {
                    if (static_cast<int>(jx2.size()) != cy1) fail(Errc::schema_violation, "kernel y1 extent");
                    for (const json& jy1 : jx2) {
                        if (static_cast<int>(jy1.size()) != cy2) fail(Errc::schema_violation, "kernel y2 extent");
                        for (const json& v : jy1) kernel.push_back(v.get<double>());
                    }
                }
            }
            return CifcChannel::from_kernel(std::move(kernel), cx1, cx2, cy1, cy2);
        }
        if (doc.contains("maps")) {
            const json& m = doc.at("maps");
            DeterministicMaps maps;
            maps.f1 = m.at("f1").get<std::vector<std::vector<int>>>();
            maps.f2 = m.at("f2").get<std::vector<std::vector<int>>>();
            return CifcChannel::from_maps(maps, cx1, cx2, cy1, cy2);
        }
        fail(Errc::schema_violation, "document has neither \"kernel\" nor \"maps\"");
    } catch (const json::exception& e) {
        fail(Errc::schema_violation, e.what());
    }
}

CifcChannel load_channel(std::istream& in) {
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_channel_from_string(buf.str());
}

} // namespace cifc
