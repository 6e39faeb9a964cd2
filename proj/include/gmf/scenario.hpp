#pragma once

#include "gmf/cover.hpp"
#include "gmf/mf.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gmf {

// ----- scenario file model -----

struct ScenarioVar {
    std::string name;
    long long coh = 0;
    std::vector<int> aux;
};

struct ScenarioSign {
    std::string a, b;
    int value = 1;
};

struct ScenarioRewrite {
    std::string var, to;
};

struct CoverSection {
    bool present = false;
    std::string f = "1", w = "0";
    std::string q_name = "q", y_name = "y";
    long long q_coh = 1, y_coh = 0;
    std::vector<int> q_aux, y_aux;
};

struct ScenarioObject {
    std::string name;
    std::string kind;          // loop | koszul | trivial | matrix | sum | shift | fm_forward | b_unit | zero
    std::string ring = "main";  // main | cover.a | cover.b
    std::map<std::string, std::string> params;
};

struct ScenarioCheck {
    std::string name;
    std::string op;
    std::map<std::string, std::string> params;
    std::string note;  // free-text origin of the expected value
};

struct ScenarioFile {
    int format = 1;
    std::string name;
    int poly_bound = 10;
    int window_lo = -6, window_hi = 6;
    long long coh_denominator = 1;
    std::vector<int> aux_moduli;
    std::vector<ScenarioVar> vars;
    std::vector<ScenarioSign> signs;
    std::vector<ScenarioRewrite> rewrites;
    CoverSection cover;
    std::vector<ScenarioObject> objects;
    std::vector<ScenarioCheck> checks;
};

// Line-oriented key = value format with [section] and [[block]] headers.
ScenarioFile parse_scenario(const std::string& text);
std::string serialize_scenario(const ScenarioFile& s);

// ----- execution -----

struct CheckResult {
    std::string name;
    std::string op;
    std::string status;  // pass | untrusted | fail | error
    std::string detail;
    std::string note;
    std::string witness;       // certificate data when one was produced
    std::map<int, int> table;  // ext dimensions when the check computed them
    bool has_table = false;
};

struct ScenarioReport {
    std::string scenario;
    int poly_bound = 0;
    int window_lo = 0, window_hi = 0;
    std::vector<CheckResult> checks;
    bool any_failure() const {
        for (const auto& c : checks)
            if (c.status == "fail" || c.status == "error") return true;
        return false;
    }
};

struct RunOverrides {
    std::optional<int> poly_bound;
    std::optional<std::pair<int, int>> window;
};

// Materialized scenario: rings, cover sides and named objects.
struct ScenarioInstance {
    ScenarioFile file;
    RingPtr main_ring;
    std::optional<Sides> sides;
    std::map<std::string, MatrixFactorization> objects;
    int poly_bound = 10;
    int window_lo = -6, window_hi = 6;
};

ScenarioInstance instantiate(const ScenarioFile& file, const RunOverrides& over = {});

// Runs every check; individual checks never abort the run.
ScenarioReport run_scenario(const ScenarioFile& file, const RunOverrides& over = {});

std::string report_to_json(const ScenarioReport& rep, bool include_timestamp);
std::string report_to_text(const ScenarioReport& rep);

// ----- built-in catalogue -----

std::vector<std::string> catalogue_names();
const std::string* catalogue_text(const std::string& name);  // null when absent

}  // namespace gmf
