#include "gmf/cli.hpp"

#include "gmf/homalg.hpp"
#include "gmf/scenario.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace gmf {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void emit_json(const std::string& path, const std::string& json, std::ostream& out) {
    if (path == "-") {
        out << json;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write '" + path + "'");
    f << json;
}

std::optional<std::pair<int, int>> parse_window_opt(const std::string& w) {
    if (w.empty()) return std::nullopt;
    auto dots = w.find("..");
    if (dots == std::string::npos) throw Error("window must look like LO..HI");
    return std::make_pair(std::stoi(w.substr(0, dots)), std::stoi(w.substr(dots + 2)));
}

int run_report(const ScenarioFile& file, const RunOverrides& over, const std::string& json_path,
               std::ostream& out) {
    ScenarioReport rep = run_scenario(file, over);
    if (!json_path.empty()) {
        emit_json(json_path, report_to_json(rep, true), out);
        if (json_path != "-") out << report_to_text(rep);
    } else {
        out << report_to_text(rep);
    }
    return rep.any_failure() ? 1 : 0;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"graded matrix factorization workbench"};
    app.require_subcommand(1);

    std::string file_path, json_path, window_text, builtin_name, from_name, to_name,
        object_name;
    int bound = -1;

    auto add_bounds = [&](CLI::App* cmd) {
        cmd->add_option("--bound", bound, "monomial exponent bound");
        cmd->add_option("--window", window_text, "degree window LO..HI");
        cmd->add_option("--json", json_path, "write a JSON report to this path ('-' = stdout)");
    };

    CLI::App* run = app.add_subcommand("run", "run a scenario file");
    run->add_option("file", file_path, "scenario file")->required();
    add_bounds(run);

    CLI::App* cat = app.add_subcommand("catalogue", "list the built-in scenarios");

    CLI::App* runb = app.add_subcommand("run-builtin", "run a built-in scenario");
    runb->add_option("name", builtin_name, "catalogue entry")->required();
    add_bounds(runb);

    CLI::App* ext = app.add_subcommand("ext", "morphism cohomology table between two objects");
    ext->add_option("file", file_path)->required();
    ext->add_option("--from", from_name)->required();
    ext->add_option("--to", to_name)->required();
    add_bounds(ext);

    CLI::App* con = app.add_subcommand("contract", "search a contracting homotopy");
    con->add_option("file", file_path)->required();
    con->add_option("--object", object_name)->required();
    add_bounds(con);

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            // --help
            out << app.help();
            return 0;
        }
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        RunOverrides over;
        if (bound > 0) over.poly_bound = bound;
        over.window = parse_window_opt(window_text);

        if (*cat) {
            for (const auto& name : catalogue_names()) {
                auto text = catalogue_text(name);
                ScenarioFile f = parse_scenario(*text);
                out << name << "  (" << f.objects.size() << " objects, " << f.checks.size()
                    << " checks)\n";
            }
            return 0;
        }
        if (*run || *runb) {
            std::string text;
            if (*runb) {
                const std::string* t = catalogue_text(builtin_name);
                if (!t) {
                    err << "unknown built-in '" << builtin_name << "'\n";
                    return 2;
                }
                text = *t;
            } else {
                text = read_file(file_path);
            }
            ScenarioFile file = parse_scenario(text);
            return run_report(file, over, json_path, out);
        }
        if (*ext) {
            ScenarioFile file = parse_scenario(read_file(file_path));
            ScenarioInstance inst = instantiate(file, over);
            auto a = inst.objects.find(from_name);
            auto b = inst.objects.find(to_name);
            if (a == inst.objects.end() || b == inst.objects.end()) {
                err << "unknown object\n";
                return 2;
            }
            auto table = cohomology_dims(
                hom_complex(a->second, b->second, inst.window_lo, inst.window_hi,
                            inst.poly_bound));
            if (!json_path.empty()) {
                nlohmann::ordered_json j;
                j["schema"] = "mf-workbench-ext/1";
                j["from"] = from_name;
                j["to"] = to_name;
                j["bounds"] = {{"poly_bound", inst.poly_bound},
                               {"window", std::to_string(inst.window_lo) + ".." +
                                              std::to_string(inst.window_hi)}};
                nlohmann::ordered_json dims, trusted;
                for (const auto& [n, dim] : table.dims) {
                    dims[std::to_string(n)] = dim;
                    trusted[std::to_string(n)] = table.trusted.at(n);
                }
                j["dims"] = std::move(dims);
                j["trusted"] = std::move(trusted);
                emit_json(json_path, j.dump(2) + "\n", out);
                return 0;
            }
            out << "ext table " << from_name << " -> " << to_name << "\n";
            for (const auto& [n, dim] : table.dims) {
                out << "  degree " << n << ": " << dim
                    << (table.trusted.at(n) ? "" : "  (untrusted)") << "\n";
            }
            return 0;
        }
        if (*con) {
            ScenarioFile file = parse_scenario(read_file(file_path));
            ScenarioInstance inst = instantiate(file, over);
            auto e = inst.objects.find(object_name);
            if (e == inst.objects.end()) {
                err << "unknown object\n";
                return 2;
            }
            auto cert = find_contraction(e->second, inst.poly_bound);
            if (cert) {
                out << "contracting homotopy found\n";
                return 0;
            }
            out << "no contraction up to the bound (one-sided)\n";
            return 1;
        }
    } catch (const ParseError& pe) {
        err << "parse error: " << pe.what() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << "\n";
        return 2;
    }
    return 2;
}

}  // namespace gmf
