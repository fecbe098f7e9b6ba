#include "cifc/io.hpp"

#include <json.hpp>

namespace cifc {

std::string pmf_to_json(const JointPMF& p) {
    nlohmann::json doc;
    nlohmann::json roles = nlohmann::json::array();
    nlohmann::json cards = nlohmann::json::array();
    for (const Axis& ax : p.axes()) {
        roles.push_back(role_name(ax.role));
        cards.push_back(ax.card);
    }
    doc["roles"] = roles;
    doc["cards"] = cards;
    doc["values"] = p.values();
    return doc.dump(2) + "\n";
}

JointPMF pmf_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail(Errc::parse_error, e.what());
    }
    try {
        auto names = doc.at("roles").get<std::vector<std::string>>();
        auto cards = doc.at("cards").get<std::vector<int>>();
        auto values = doc.at("values").get<std::vector<double>>();
        if (names.size() != cards.size()) fail(Errc::schema_violation, "roles/cards length mismatch");
        std::vector<Axis> axes;
        for (std::size_t i = 0; i < names.size(); ++i) {
            auto r = role_from_name(names[i]);
            if (!r) fail(Errc::schema_violation, "unknown role name " + names[i]);
            axes.push_back({*r, cards[i]});
        }
        return JointPMF::from_table(std::move(values), std::move(axes));
    } catch (const nlohmann::json::exception& e) {
        fail(Errc::schema_violation, e.what());
    }
}

JointPMF builtin_input_table(std::string_view name) {
    if (name == "exII") {
        std::vector<double> v(12, 0.0);
        // (x1,x2) cells: x1 in {0..3} with x2=0, and x1 in {0,1} with x2 in {1,2}.
        for (int x1 = 0; x1 < 4; ++x1) v[x1 * 3 + 0] = 1.0 / 8.0;
        for (int x1 = 0; x1 < 2; ++x1)
            for (int x2 = 1; x2 < 3; ++x2) v[x1 * 3 + x2] = 1.0 / 8.0;
        return JointPMF::from_table(std::move(v), {{Role::X1, 4}, {Role::X2, 3}});
    }
    fail(Errc::unknown_name, std::string("no builtin input table named ") + std::string(name));
}

} // namespace cifc
