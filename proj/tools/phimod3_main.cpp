#include "phimod/ec3.hpp"
#include "phimod/serialize.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using nlohmann::json;
using namespace phimod;

struct CliConfig {
    int precision = 40;
    int weil_window = 6;
    int sample_budget = 5;
    std::string format = "human";
    long height_bound = 1000000;
    unsigned seed = 20240913u;
};

constexpr int kExitOk = 0;
constexpr int kExitParse = 1;
constexpr int kExitUnclassifiable = 2;

void print_conditions_human(const ConditionsReport& r) {
    auto yn = [](bool b) { return b ? "pass" : "FAIL"; };
    std::cout << "  condition (1) integral char poly:   " << yn(r.cond1);
    if (r.char_poly_coeffs)
        std::cout << "   X^2 + (" << (*r.char_poly_coeffs)[0] << ")X + "
                  << (*r.char_poly_coeffs)[1];
    std::cout << "\n  condition (2) rational Weil traces: " << yn(r.cond2) << "   ("
              << r.weil.size() << " witnesses, window " << r.weil_window << ")\n";
    std::cout << "  condition (3) determinants:         " << yn(r.cond3) << "\n";
    std::cout << "  condition (4) stable filtration:    " << yn(r.cond4) << "\n";
    std::cout << "  admissible (t_N = t_H = 1):         " << yn(r.admissible) << "   t_N = "
              << r.t_N << ", t_H = " << r.t_H << ", stable lines: " << r.lines.size() << "\n";
}

int run_classify(const std::string& path, const CliConfig& cfg) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "error: cannot open " << path << "\n";
        return kExitParse;
    }
    std::stringstream buf;
    buf << in.rdbuf();

    FilteredModule D;
    try {
        D = read_module(buf.str());
    } catch (const parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    }

    try {
        ConditionsReport rep = check_conditions(D, cfg.weil_window, BigInt(cfg.height_bound));
        if (!rep.all_pass()) {
            if (cfg.format == "json") {
                json j{{"command", "classify"},
                       {"input", path},
                       {"classified", false},
                       {"conditions", conditions_to_json(rep)}};
                std::cout << j.dump(2) << "\n";
            } else {
                std::cout << "unclassifiable: conditions (1)-(4) / admissibility not met\n";
                print_conditions_human(rep);
            }
            return kExitUnclassifiable;
        }
        ClassLabel label = classify(D);
        if (cfg.format == "json") {
            json j{{"command", "classify"},
                   {"input", path},
                   {"classified", true},
                   {"label", label.str()},
                   {"conditions", conditions_to_json(rep)}};
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << "label: " << label.str() << "\n";
            print_conditions_human(rep);
        }
        return kExitOk;
    } catch (const unclassifiable& e) {
        std::cerr << "unclassifiable: " << e.what() << "\n";
        return kExitUnclassifiable;
    } catch (const descent_failure& e) {
        std::cerr << "unclassifiable: " << e.what() << "\n";
        return kExitUnclassifiable;
    } catch (const std::exception& e) {
        std::cerr << "unclassifiable: " << e.what() << "\n";
        return kExitUnclassifiable;
    }
}

int run_verify_table(const CliConfig& cfg) {
    Table1Report t1 = verify_table1(cfg.sample_budget, cfg.seed);
    std::vector<Table2Row> t2 = verify_table2();
    bool t2_pass = true;
    for (const auto& r : t2) t2_pass = t2_pass && r.pass;
    bool all = t1.all_pass() && t2_pass;

    if (cfg.format == "json") {
        json j{{"command", "verify-table"},
               {"report_version", 1},
               {"table1", table1_to_json(t1)},
               {"table2", table2_to_json(t2)},
               {"all_pass", all}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "classification table (sample budget " << t1.sample_budget << ", seed "
                  << t1.seed << "):\n";
        for (const auto& r : t1.rows) {
            std::cout << "  " << (r.pass ? "pass" : "FAIL") << "  " << r.row << "  ("
                      << r.computed << "/" << r.expected << ")\n";
            for (const auto& n : r.notes) std::cout << "        " << n << "\n";
        }
        std::cout << "minimal Galois pairs:\n";
        for (const auto& r : t2) {
            std::cout << "  " << (r.pass ? "pass" : "FAIL") << "  " << r.name << "  ["
                      << r.curve << "]  -> " << r.verdict << "\n";
            for (const auto& n : r.notes) std::cout << "        " << n << "\n";
        }
        std::cout << (all ? "all rows pass\n" : "FAILURES present\n");
    }
    return all ? kExitOk : 1;
}

int run_ec_info(const std::string& field, const std::string& spec, const CliConfig& cfg) {
    int s = field == "f9" ? 2 : 1;
    CurveF3q E;
    try {
        E = parse_curve(spec, s);
    } catch (const parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    }
    try {
        int count = point_count(E);
        int trace = frobenius_trace(E);
        AutGroupDescription aut = automorphism_group(E);
        if (cfg.format == "json") {
            json j{{"command", "ec-info"},
                   {"curve", E.str()},
                   {"field", field},
                   {"point_count", count},
                   {"trace", trace},
                   {"supersingular", trace % 3 == 0},
                   {"aut_order", aut.order},
                   {"aut_shape", aut.shape}};
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << E.str() << "\n";
            std::cout << "  points:        " << count << "\n";
            std::cout << "  trace:         " << trace << "\n";
            std::cout << "  reduction:     " << (trace % 3 == 0 ? "supersingular" : "ordinary")
                      << "\n";
            std::cout << "  automorphisms: order " << aut.order << ", shape " << aut.shape
                      << "\n";
        }
        return kExitOk;
    } catch (const singular_curve& e) {
        std::cerr << "singular curve: " << e.what() << "\n";
        return kExitUnclassifiable;
    }
}

int run_fields_list(int e, const CliConfig& cfg) {
    std::vector<CatalogEntry> fields;
    try {
        fields = catalog_fields(e);
    } catch (const unsupported_index& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitParse;
    }
    if (cfg.format == "json") {
        json arr = json::array();
        for (const auto& c : fields) {
            json gens = json::array();
            for (const auto& g : c.presentation.generators)
                gens.push_back({{"name", g.name},
                                {"order", g.order},
                                {"unramified_exponent", g.unramified_exponent}});
            arr.push_back({{"label", c.label},
                           {"e", c.e},
                           {"f", c.f},
                           {"group_shape", c.group_shape},
                           {"row", c.row},
                           {"generators", gens}});
        }
        std::cout << json{{"command", "fields-list"}, {"e", e}, {"fields", arr}}.dump(2) << "\n";
    } else {
        for (const auto& c : fields)
            std::cout << c.label << "  (e=" << c.e << ", f=" << c.f << ", group "
                      << c.group_shape << ", row " << c.row << ")\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"phimod3: filtered (phi, Gal(K/Q3))-module classification for p = 3"};
    app.require_subcommand(1);

    CliConfig cfg;
    app.add_option("--precision", cfg.precision, "working 3-adic precision (>= 20)")
        ->check(CLI::Range(20, 1000000));
    app.add_option("--weil-window", cfg.weil_window, "Weil trace window N_max");
    app.add_option("--samples", cfg.sample_budget, "parameters sampled per P^1 row (>= 3)")
        ->check(CLI::Range(3, 1000000));
    app.add_option("--format", cfg.format, "output format")
        ->check(CLI::IsMember({"human", "json"}));
    app.add_option("--height-bound", cfg.height_bound,
                   "height bound for rational reconstruction");
    app.add_option("--seed", cfg.seed, "seed for parameter sampling");

    std::string module_path;
    CLI::App* c_classify = app.add_subcommand("classify", "classify a module file");
    c_classify->add_option("file", module_path, "module JSON file")->required();

    CLI::App* c_verify = app.add_subcommand("verify-table", "re-derive the classification table");

    std::string curve_spec, field_flag = "f3";
    CLI::App* c_ec = app.add_subcommand("ec-info", "point count / trace / automorphisms");
    c_ec->add_option("--field", field_flag, "base field")->check(CLI::IsMember({"f3", "f9"}));
    c_ec->add_option("curve", curve_spec, "Weierstrass equation, e.g. y^2=x^3-x")->required();

    CLI::App* c_fields = app.add_subcommand("fields", "field catalog queries");
    int e_filter = 0;
    CLI::App* c_list = c_fields->add_subcommand("list", "list catalog fields");
    c_list->add_option("--e", e_filter, "ramification index")->required();

    CLI11_PARSE(app, argc, argv);
    K0Value::default_precision = cfg.precision;

    if (*c_classify) return run_classify(module_path, cfg);
    if (*c_verify) return run_verify_table(cfg);
    if (*c_ec) return run_ec_info(field_flag, curve_spec, cfg);
    if (*c_fields && *c_list) return run_fields_list(e_filter, cfg);
    std::cerr << app.help();
    return kExitParse;
}
