#include "cifc/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cifc/bounds.hpp"
#include "cifc/channel.hpp"
#include "cifc/io.hpp"
#include "cifc/polytope.hpp"
#include "cifc/schemes.hpp"

namespace cifc::cli {

namespace {

int exit_code_for(Errc c) {
    switch (c) {
        case Errc::unbounded:
        case Errc::empty_region:
        case Errc::factorization_mismatch:
        case Errc::bad_coupling:
        case Errc::not_semideterministic:
        case Errc::not_deterministic:
        case Errc::unsupported_bound:
            return 3;
        default:
            return 2;
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Errc::parse_error, "cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(Errc::parse_error, "cannot write " + path);
    out << text;
}

CifcChannel load_channel_arg(const std::string& spec) {
    if (spec.rfind("builtin:", 0) == 0) return builtin_channel(spec.substr(8));
    return load_channel_from_string(read_file(spec));
}

// uniform:AxB | table:NAME | pointmass:i,j | path to a PMF JSON file.
JointPMF load_input_arg(const std::string& spec, const CifcChannel& ch) {
    if (spec.rfind("uniform:", 0) == 0) {
        int a = 0, b = 0;
        char x = 0;
        std::istringstream is(spec.substr(8));
        if (!(is >> a >> x >> b) || x != 'x') fail(Errc::parse_error, "expected uniform:AxB");
        return product(uniform_pmf(Role::X1, a), uniform_pmf(Role::X2, b));
    }
    if (spec.rfind("table:", 0) == 0) return builtin_input_table(spec.substr(6));
    if (spec.rfind("pointmass:", 0) == 0) {
        int i = 0, j = 0;
        char comma = 0;
        std::istringstream is(spec.substr(10));
        if (!(is >> i >> comma >> j) || comma != ',') fail(Errc::parse_error, "expected pointmass:i,j");
        return product(point_mass_pmf(Role::X1, ch.card_x1(), i),
                       point_mass_pmf(Role::X2, ch.card_x2(), j));
    }
    return pmf_from_json(read_file(spec));
}

// copy:ROLE=SRC[,ROLE=SRC...] with SRC in {X1, X2, f1, f2, const},
// or a path to a PMF JSON file carrying the auxiliary axes directly.
JointPMF load_assignment_arg(const std::string& spec, const CifcChannel& ch,
                             const JointPMF& input) {
    if (spec.rfind("copy:", 0) == 0) {
        std::vector<std::pair<Role, AuxSource>> specs;
        std::string body = spec.substr(5);
        std::istringstream is(body);
        std::string item;
        while (std::getline(is, item, ',')) {
            auto eq = item.find('=');
            if (eq == std::string::npos) fail(Errc::parse_error, "expected copy:ROLE=SRC");
            auto role = role_from_name(item.substr(0, eq));
            if (!role) fail(Errc::parse_error, "unknown role in " + item);
            std::string src = item.substr(eq + 1);
            AuxSource s;
            if (src == "X1") s = AuxSource::copy_x1;
            else if (src == "X2") s = AuxSource::copy_x2;
            else if (src == "f1") s = AuxSource::map_f1;
            else if (src == "f2") s = AuxSource::map_f2;
            else if (src == "const") s = AuxSource::constant;
            else fail(Errc::parse_error, "unknown copy source " + src);
            specs.push_back({*role, s});
        }
        return with_aux_copies(ch, input, specs);
    }
    return pmf_from_json(read_file(spec));
}

std::map<Role, int> parse_aux_cards(const std::string& spec) {
    std::map<Role, int> out;
    if (spec.empty()) return out;
    std::istringstream is(spec);
    std::string item;
    while (std::getline(is, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) fail(Errc::parse_error, "expected --aux-cards ROLE=N[,...]");
        auto role = role_from_name(item.substr(0, eq));
        if (!role) fail(Errc::parse_error, "unknown role in " + item);
        out[*role] = std::stoi(item.substr(eq + 1));
    }
    return out;
}

struct EvalConfig {
    std::string channel, bound, input, assignment, out, binning = "joint";
    std::string format = "json";
    std::vector<std::string> couplings;
    std::string literal_coupling;
};

std::string vertices_csv(const RatePolytope2D& region) {
    std::string out = "R1,R2\n";
    for (const auto& v : region.vertices()) {
        out += format_sig(v[0]);
        out += ",";
        out += format_sig(v[1]);
        out += "\n";
    }
    return out;
}

Coupling named_coupling(const std::string& name, const CifcChannel& ch) {
    if (name == "identity") return Coupling::identity(ch);
    if (name == "independent") return Coupling::independent(ch);
    fail(Errc::unknown_name, "no coupling named " + name);
}

int cmd_eval(const EvalConfig& cfg) {
    CifcChannel ch = load_channel_arg(cfg.channel);
    JointPMF input = cfg.input.empty()
                         ? product(uniform_pmf(Role::X1, ch.card_x1()),
                                   uniform_pmf(Role::X2, ch.card_x2()))
                         : load_input_arg(cfg.input, ch);

    auto assignment = [&](Factorization tag) {
        if (cfg.assignment.empty())
            fail(Errc::parse_error, "--assignment required for bound " + cfg.bound);
        return AuxAssignment::make(load_assignment_arg(cfg.assignment, ch, input), tag);
    };

    RatePolytope2D region;
    if (cfg.bound == "det") {
        region = capacity_det(ch, input);
    } else if (cfg.bound == "semidet") {
        region = capacity_semidet(ch, assignment(Factorization::WU));
    } else if (cfg.bound == "wu_outer" || cfg.bound == "wu") {
        region = outer_bound_wu(ch, assignment(Factorization::WU));
    } else if (cfg.bound == "bc_outer" || cfg.bound == "bc") {
        region = outer_bound_bc(ch, assignment(Factorization::BC));
    } else if (cfg.bound == "better_cognitive") {
        region = capacity_better_cognitive(ch, assignment(Factorization::WU));
    } else if (cfg.bound == "marginal_outer" || cfg.bound == "marginal") {
        if (!cfg.literal_coupling.empty()) {
            region = outer_bound_marginal_literal(ch, input, named_coupling(cfg.literal_coupling, ch));
        } else {
            std::vector<Coupling> extra;
            for (const std::string& name : cfg.couplings) extra.push_back(named_coupling(name, ch));
            region = outer_bound_marginal(ch, input, extra);
        }
    } else if (cfg.bound == "rtd_inner" || cfg.bound == "rtd") {
        RtdOptions opts;
        if (cfg.binning == "joint") opts.binning = Binning::joint;
        else if (cfg.binning == "twostep") opts.binning = Binning::two_step;
        else fail(Errc::parse_error, "--binning must be joint or twostep");
        region = inner_bound_rtd(ch, assignment(Factorization::RTD), opts);
    } else {
        fail(Errc::unknown_name, "unknown bound " + cfg.bound);
    }
    if (cfg.format == "json")
        write_output(cfg.out, polytope_to_json(region));
    else if (cfg.format == "csv")
        write_output(cfg.out, vertices_csv(region));
    else
        fail(Errc::parse_error, "--format must be json or csv");
    return 0;
}

struct FrontierConfig {
    std::string channel, bound, aux_cards, out;
    std::string format = "csv";
    int weights = 33;
    int budget = 200;
    std::uint64_t seed = 0;
};

int cmd_frontier(const FrontierConfig& cfg) {
    CifcChannel ch = load_channel_arg(cfg.channel);
    auto bound = bound_kind_from_name(cfg.bound);
    if (!bound) fail(Errc::unknown_name, "unknown bound " + cfg.bound);
    if (cfg.weights < 2) fail(Errc::parse_error, "--weights must be >= 2");
    std::vector<double> weights;
    for (int i = 0; i < cfg.weights; ++i)
        weights.push_back(static_cast<double>(i) / (cfg.weights - 1));
    std::map<Role, int> cards = parse_aux_cards(cfg.aux_cards);

    std::vector<FrontierPoint> frontier =
        search_frontier(ch, *bound, cards, weights, cfg.budget, cfg.seed);
    std::vector<FrontierSample> samples;
    samples.reserve(frontier.size());
    for (const FrontierPoint& f : frontier) samples.push_back({f.lambda, f.value, f.point, 0});
    if (cfg.format == "csv") {
        write_output(cfg.out, frontier_to_csv(samples));
    } else if (cfg.format == "json") {
        nlohmann::json rows = nlohmann::json::array();
        for (const FrontierSample& s : samples)
            rows.push_back({{"lambda", round_sig(s.lambda)},
                            {"R1", round_sig(s.point[0])},
                            {"R2", round_sig(s.point[1])},
                            {"value", round_sig(s.value)}});
        nlohmann::json doc;
        doc["frontier"] = rows;
        doc["seed"] = cfg.seed;
        doc["budget"] = cfg.budget;
        write_output(cfg.out, doc.dump(2) + "\n");
        return 0;
    } else {
        fail(Errc::parse_error, "--format must be json or csv");
    }

    nlohmann::json meta;
    meta["channel"] = cfg.channel;
    meta["bound"] = cfg.bound;
    meta["seed"] = cfg.seed;
    meta["budget"] = cfg.budget;
    meta["weights"] = cfg.weights;
    nlohmann::json jc = nlohmann::json::object();
    RoleSet aux_roles;
    switch (*bound) {
        case BoundKind::wu_outer:
        case BoundKind::semidet: aux_roles = {Role::U}; break;
        case BoundKind::bc_outer: aux_roles = {Role::U1, Role::U2, Role::V}; break;
        case BoundKind::rtd_inner:
            aux_roles = {Role::U2c, Role::U1c, Role::U1pb, Role::U2pb};
            break;
        default: break;
    }
    for (Role r : aux_roles.to_vector()) {
        auto it = cards.find(r);
        jc[role_name(r)] = it != cards.end() ? it->second : default_aux_card(ch, r);
    }
    meta["aux_cards"] = jc;
    if (!cfg.out.empty()) write_output(cfg.out + ".meta.json", meta.dump(2) + "\n");
    return 0;
}

struct ClassifyConfig {
    std::string channel, out;
    int aux_card = 0; // 0: |X1| * |X2|
    int budget = 1000;
    std::uint64_t seed = 0;
};

int cmd_classify(const ClassifyConfig& cfg) {
    CifcChannel ch = load_channel_arg(cfg.channel);
    int aux = cfg.aux_card > 0 ? cfg.aux_card : ch.card_x1() * ch.card_x2();
    RegimeReport report = classify_regime(ch, aux, cfg.budget, cfg.seed);
    write_output(cfg.out, regime_report_to_json(report));
    return 0;
}

struct VerifyConfig {
    std::string scheme, channel, emit_table_path;
};

int cmd_verify(const VerifyConfig& cfg) {
    SchemeTable scheme;
    CifcChannel ch;
    bool have_channel = !cfg.channel.empty();
    if (have_channel) ch = load_channel_arg(cfg.channel);

    if (cfg.scheme == "clipper13" || cfg.scheme == "clipper22" || cfg.scheme == "symmetric12") {
        scheme = builtin_scheme(cfg.scheme);
        if (!have_channel) ch = scheme_channel(cfg.scheme);
    } else if (cfg.scheme.size() > 5 && cfg.scheme.rfind(".json") == cfg.scheme.size() - 5) {
        if (!have_channel) fail(Errc::parse_error, "--channel required for scheme files");
        scheme = scheme_from_json(read_file(cfg.scheme));
    } else if (cfg.scheme.size() > 4 && cfg.scheme.rfind(".csv") == cfg.scheme.size() - 4) {
        if (!have_channel) fail(Errc::parse_error, "--channel required for scheme files");
        scheme = scheme_from_csv(read_file(cfg.scheme), ch.card_y1(), ch.card_y2());
    } else {
        fail(Errc::unknown_name, "scheme must be a builtin name, .json or .csv file");
    }

    VerifyResult res = verify_zero_error(ch, scheme);
    std::ostringstream os;
    os << "scheme: " << cfg.scheme << "\n";
    os << "rates: " << format_sig(res.rates[0]) << "," << format_sig(res.rates[1]) << "\n";
    os << "zero_error: " << (res.ok ? "true" : "false") << "\n";
    for (const SchemeFailure& f : res.failures)
        os << "FAIL w1=" << f.w1 << " w2=" << f.w2 << " x1=" << f.x1 << " x2=" << f.x2
           << " y1=" << f.y1 << " y2=" << f.y2 << " w1_hat=" << f.w1_hat << " w2_hat=" << f.w2_hat
           << "\n";
    std::cout << os.str();
    if (!cfg.emit_table_path.empty())
        write_output(cfg.emit_table_path, table_to_csv(emit_table(ch, scheme)));
    return res.ok ? 0 : 4;
}

} // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"bounds and capacity regions for the discrete memoryless cognitive interference channel"};
    app.require_subcommand(1);

    EvalConfig ev;
    CLI::App* eval = app.add_subcommand("eval", "evaluate a bound for one channel and assignment");
    eval->add_option("--channel", ev.channel, "builtin:NAME or channel JSON path")->required();
    eval->add_option("--bound", ev.bound,
                     "det | semidet | wu_outer | bc_outer | marginal_outer | better_cognitive | rtd_inner")
        ->required();
    eval->add_option("--input", ev.input, "uniform:AxB | table:NAME | pointmass:i,j | PMF JSON path");
    eval->add_option("--assignment", ev.assignment, "copy:ROLE=SRC[,...] or PMF JSON path");
    eval->add_option("--binning", ev.binning, "joint | twostep (rtd_inner only)");
    eval->add_option("--couplings", ev.couplings, "extra couplings for marginal_outer");
    eval->add_option("--literal-coupling", ev.literal_coupling,
                     "evaluate marginal_outer with exactly this coupling");
    eval->add_option("--format", ev.format, "json (constraints+vertices) | csv (vertices)");
    eval->add_option("--out", ev.out, "output path (stdout when absent)");

    FrontierConfig fr;
    CLI::App* frontier = app.add_subcommand("frontier", "search the weighted-sum frontier of a bound");
    frontier->add_option("--channel", fr.channel)->required();
    frontier->add_option("--bound", fr.bound,
                         "rtd_inner | wu_outer | bc_outer | marginal_outer | semidet | det")
        ->required();
    frontier->add_option("--weights", fr.weights, "number of lambda samples (default 33)");
    frontier->add_option("--budget", fr.budget, "random assignments per search (default 200)");
    frontier->add_option("--seed", fr.seed);
    frontier->add_option("--aux-cards", fr.aux_cards, "ROLE=N[,ROLE=N...]");
    frontier->add_option("--format", fr.format, "csv (default) | json");
    frontier->add_option("--out", fr.out, "CSV path; sidecar written to PATH.meta.json");

    ClassifyConfig cl;
    CLI::App* classify = app.add_subcommand("classify", "falsification search over regime conditions");
    classify->add_option("--channel", cl.channel)->required();
    classify->add_option("--aux-card", cl.aux_card, "auxiliary cardinality (default |X1||X2|)");
    classify->add_option("--budget", cl.budget, "random samples per condition class (default 1000)");
    classify->add_option("--seed", cl.seed);
    classify->add_option("--out", cl.out);

    VerifyConfig vf;
    CLI::App* verify = app.add_subcommand("verify", "verify a zero-error scheme exhaustively");
    verify->add_option("--scheme", vf.scheme, "clipper13 | clipper22 | symmetric12 | .json | .csv")
        ->required();
    verify->add_option("--channel", vf.channel, "override channel (required for scheme files)");
    verify->add_option("--emit-table", vf.emit_table_path, "write the achievability table CSV here");

    int rc = 0;
    eval->callback([&] { rc = cmd_eval(ev); });
    frontier->callback([&] { rc = cmd_frontier(fr); });
    classify->callback([&] { rc = cmd_classify(cl); });
    verify->callback([&] { rc = cmd_verify(vf); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 3;
    }
    return rc;
}

} // namespace cifc::cli
