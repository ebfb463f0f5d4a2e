#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "koehler/kohler.hpp"
#include "koehler/selftest.hpp"

using namespace koehler;
using nlohmann::json;

namespace {

// "(n)" -> the principal ideal, "[a,b,c]" -> normal form
QuadIdeal parse_modulus(const QuadField& K, const std::string& s) {
    std::istringstream in(s);
    char open = 0;
    in >> open;
    if (open == '(') {
        Int n = 0;
        char close = 0;
        if (!(in >> n >> close) || close != ')' || n == 0)
            throw InputError("bad modulus spec: " + s);
        return QuadIdeal::principal(QuadInt(K, n, 0));
    }
    if (open == '[') {
        Int a, b, c;
        char c1, c2, close;
        if (!(in >> a >> c1 >> b >> c2 >> c >> close) || c1 != ',' || c2 != ',' ||
            close != ']')
            throw InputError("bad modulus spec: " + s);
        return QuadIdeal::from_abc(K, a, b, c);
    }
    throw InputError("bad modulus spec: " + s);
}

HeckeChar char_from_spec(const json& spec) {
    QuadField K = QuadField::from_disc(spec.at("disc").get<Int>());
    QuadIdeal m = QuadIdeal::unit(K);
    if (spec.contains("modulus")) {
        if (spec["modulus"].is_string())
            m = parse_modulus(K, spec["modulus"].get<std::string>());
        else
            m = QuadIdeal::from_abc(K, spec["modulus"].at(0).get<Int>(),
                                    spec["modulus"].at(1).get<Int>(),
                                    spec["modulus"].at(2).get<Int>());
    }
    auto G = RayClassGroup::make(Modulus{m});
    if (spec.contains("exponents"))
        return make_char(G, spec["exponents"].get<std::vector<Int>>());
    Int idx = spec.value("char_index", Int(0));
    auto chars = characters(G);
    if (idx < 0 || idx >= (Int)chars.size())
        throw InputError("char_index out of range");
    return chars[(size_t)idx];
}

json char_json(const HeckeChar& xi) {
    const QuadIdeal& m = xi.group->modulus().finite;
    return json{{"disc", m.disc()},
                {"modulus", {m.a(), m.b(), m.c()}},
                {"exponents", xi.exponents}};
}

json witness_json(const std::vector<PrimeWitness>& ws) {
    json out = json::array();
    for (const auto& w : ws)
        out.push_back({{"p", w.p},
                       {"value", w.xi_p.to_json()},
                       {"conj_value", w.xi_conj_p.to_json()},
                       {"pass", w.pass}});
    return out;
}

json condition_json(const ConditionBReport& r) {
    return json{{"cuspidal", r.cuspidal},
                {"epsilon_order", r.epsilon_order},
                {"holds", r.holds},
                {"prime_check", witness_json(r.prime_check)}};
}

json load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read " + path);
    return json::parse(in);
}

Triple load_triple(const std::string& path, Int max_level) {
    if (!path.empty()) return triple_from_json(load_file(path));
    return find_first_triple(max_level);
}

void emit(const json& j) { std::cout << j.dump(2) << std::endl; }

struct Opts {
    std::string spec_path, modulus = "(1)", triple_path, drop;
    Int disc = 0, bound = 0, char_index = -1, max_level = 400, jobs = 1;
    std::vector<Int> exponents;
    int line = 1, r = 1, target = 0, member = 0;
    Int m = 1;
    bool oracle = false, have_exponents = false;
};

HeckeChar char_from_opts(const Opts& o) {
    if (!o.spec_path.empty()) return char_from_spec(load_file(o.spec_path));
    json spec{{"disc", o.disc}, {"modulus", o.modulus}};
    if (o.have_exponents)
        spec["exponents"] = o.exponents;
    else
        spec["char_index"] = o.char_index < 0 ? 0 : o.char_index;
    return char_from_spec(spec);
}

int cmd_theta(const Opts& o) {
    HeckeChar xi = char_from_opts(o);
    Int B = o.bound > 0 ? o.bound : 100;
    ThetaExpansion T = o.oracle ? theta_oracle(xi, B) : theta_fast(xi, B);
    json out = T.to_json();
    out["schema"] = 1;
    emit(out);
    std::cerr << "theta series of disc " << T.disc << ", level " << T.level
              << ", " << B << " coefficients\n";
    return 0;
}

int cmd_partners(const Opts& o) {
    HeckeChar xi = char_from_opts(o);
    json out{{"schema", 1}, {"input", char_json(xi)}, {"level", level(xi)}};
    out["condition_B"] = condition_json(condition_B(xi));
    auto partners = find_partners(xi, o.bound);
    out["partners"] = json::array();
    for (const auto& p : partners) out["partners"].push_back(char_json(p));
    if (partners.size() == 2) {
        Triple T = make_triple(xi, o.bound);
        out["triple_certificate"] = T.to_json();
        ImageClass ic = image_class_of_triple(T);
        out["image"] = {{"line", ic.line},       {"name", ic.name},
                        {"full_name", ic.full_name}, {"r", ic.r},
                        {"m", ic.m},             {"presentation_ok", ic.presentation_ok}};
    }
    emit(out);
    std::cerr << partners.size() << " partner(s) at level " << level(xi) << "\n";
    return 0;
}

int cmd_verify_group(const Opts& o) {
    TableData td = table_group(o.line, o.r, o.m);
    auto eq = check_equivalences(td.G, td.chi1);
    ImageClass ic = classify_image(td.G);
    json out{{"schema", 1},
             {"line", o.line},
             {"r", o.r},
             {"m", o.m},
             {"order", td.G.size()},
             {"name", ic.name},
             {"full_name", ic.full_name},
             {"presentation_ok", ic.presentation_ok},
             {"equivalences", std::vector<bool>(eq.begin(), eq.end())},
             {"inducing_pairs", inducing_pairs(td.G).size()},
             {"involution_det_minus_one", has_involution_det_minus_one(td.G)}};
    emit(out);
    std::cerr << "group of order " << td.G.size() << " classified as " << ic.full_name
              << "\n";
    return 0;
}

int cmd_counterexample(const Opts& o) {
    Triple T = load_triple(o.triple_path, o.max_level);
    CounterexampleReport ce = imprimitive_counterexample(T);
    json out{{"schema", 1},
             {"level", T.level},
             {"p", ce.p},
             {"member", ce.member},
             {"partner", ce.partner},
             {"xi", char_json(ce.xi)},
             {"a_p", ce.a_p.to_json()},
             {"partner_ap_zero", ce.partner_ap_zero},
             {"prime_check", witness_json(ce.prime_check)}};
    emit(out);
    std::cerr << "a_" << ce.p << " survives on member " << ce.member
              << " but vanishes on member " << ce.partner << "\n";
    return 0;
}

int cmd_extend(const Opts& o) {
    Triple T = load_triple(o.triple_path, o.max_level);
    if (o.member < 0 || o.member > 2) throw InputError("member index out of range");
    const HeckeChar& mem = T.members[(size_t)o.member];
    HeckeChar xi = mem;
    if (!o.drop.empty()) {
        QuadIdeal extra = parse_modulus(T.field(o.member), o.drop);
        xi = lift_character(
            RayClassGroup::make(Modulus{mem.group->modulus().finite * extra}), mem);
    }
    ExtensionResult er = extend_modulus(T, xi, o.target, o.bound > 0 ? o.bound : 300);
    json out{{"schema", 1},
             {"target", o.target},
             {"modulus", {er.modulus.a(), er.modulus.b(), er.modulus.c()}},
             {"xi", char_json(er.xi)},
             {"cases",
              {{"unchanged", er.case_unchanged},
               {"kill_all", er.case_kill_all},
               {"half_split", er.case_half_split}}},
             {"verified", er.verified},
             {"bound", er.bound}};
    emit(out);
    std::cerr << "extension " << (er.verified ? "verified" : "FAILED") << " to bound "
              << er.bound << "\n";
    return 0;
}

int cmd_selftest() {
    std::ostringstream report;
    int failures = run_acceptance(report);
    std::cerr << report.str();
    emit(json{{"schema", 1}, {"failures", failures}, {"pass", failures == 0}});
    return failures ? 4 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"weight-one theta series of quadratic fields"};
    app.require_subcommand(1);
    Opts o;
    app.add_option("--jobs", o.jobs, "worker cap (accepted for compatibility)");

    auto add_char_opts = [&](CLI::App* c) {
        c->add_option("--spec", o.spec_path, "character spec JSON file");
        c->add_option("--disc", o.disc, "fundamental discriminant");
        c->add_option("--modulus", o.modulus, "modulus, \"(n)\" or \"[a,b,c]\"");
        c->add_option("--char", o.char_index, "character index");
        c->add_option("--exponents", o.exponents, "character exponents")
            ->delimiter(',');
        c->add_option("--bound", o.bound, "coefficient bound");
    };
    auto* theta = app.add_subcommand("theta", "q-expansion of a theta series");
    add_char_opts(theta);
    theta->add_flag("--oracle", o.oracle, "use the direct-summation engine");

    auto* partners = app.add_subcommand("partners", "search partner fields");
    add_char_opts(partners);

    auto* vg = app.add_subcommand("verify-group", "check a classified image group");
    vg->add_option("--line", o.line, "table line (1-6)")->required();
    vg->add_option("--r", o.r, "2-power parameter");
    vg->add_option("--m", o.m, "odd cyclic factor");

    auto* ce = app.add_subcommand("counterexample", "imprimitive restriction witness");
    ce->add_option("--triple", o.triple_path, "triple certificate JSON");
    ce->add_option("--max-level", o.max_level, "discovery level bound");

    auto* ext = app.add_subcommand("extend", "transfer a character across the triple");
    ext->add_option("--triple", o.triple_path, "triple certificate JSON");
    ext->add_option("--max-level", o.max_level, "discovery level bound");
    ext->add_option("--member", o.member, "source member index");
    ext->add_option("--drop", o.drop, "extra ideal for the source modulus");
    ext->add_option("--target", o.target, "target member index")->required();
    ext->add_option("--bound", o.bound, "verification bound");

    app.add_subcommand("selftest", "run the full acceptance suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    o.have_exponents = !o.exponents.empty();

    try {
        if (theta->parsed()) return cmd_theta(o);
        if (partners->parsed()) return cmd_partners(o);
        if (vg->parsed()) return cmd_verify_group(o);
        if (ce->parsed()) return cmd_counterexample(o);
        if (ext->parsed()) return cmd_extend(o);
        return cmd_selftest();
    } catch (const InputError& e) {
        std::cout << json{{"schema", 1}, {"error", e.what()}}.dump() << std::endl;
        return 2;
    } catch (const BoundError& e) {
        std::cout << json{{"schema", 1}, {"error", e.what()}}.dump() << std::endl;
        return 3;
    } catch (const std::exception& e) {
        std::cout << json{{"schema", 1}, {"error", e.what()}}.dump() << std::endl;
        return 4;
    }
}
