#include "gmf/scenario.hpp"

#include <cctype>
#include <sstream>

namespace gmf {

namespace {

struct Line {
    size_t number = 0;
    std::string text;
};

[[noreturn]] void fail(size_t line, const std::string& msg) {
    throw ParseError("scenario line " + std::to_string(line) + ": " + msg, line);
}

std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

// values: "quoted", integers, [list, of, values]
std::string parse_string(const Line& l, const std::string& v) {
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return v.substr(1, v.size() - 2);
    fail(l.number, "expected a quoted string, got " + v);
}

// free-form parameters may be quoted strings or bare scalars
std::string parse_value(const std::string& v) {
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return v.substr(1, v.size() - 2);
    return v;
}

long long parse_int(const Line& l, const std::string& v) {
    try {
        size_t used = 0;
        long long x = std::stoll(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (...) {
        fail(l.number, "expected an integer, got " + v);
    }
}

std::vector<std::string> parse_list(const Line& l, const std::string& v) {
    if (v.size() < 2 || v.front() != '[' || v.back() != ']')
        fail(l.number, "expected a [list], got " + v);
    std::vector<std::string> out;
    std::string inner = v.substr(1, v.size() - 2);
    std::string cur;
    int depth = 0;
    bool quoted = false;
    for (char c : inner) {
        if (c == '"') quoted = !quoted;
        if (!quoted) {
            if (c == '[') ++depth;
            if (c == ']') --depth;
            if (c == ',' && depth == 0) {
                out.push_back(trim(cur));
                cur.clear();
                continue;
            }
        }
        cur += c;
    }
    if (!trim(cur).empty()) out.push_back(trim(cur));
    return out;
}

std::vector<int> parse_int_list(const Line& l, const std::string& v) {
    std::vector<int> out;
    for (const auto& s : parse_list(l, v)) out.push_back(static_cast<int>(parse_int(l, s)));
    return out;
}

std::pair<int, int> parse_window(const Line& l, const std::string& v) {
    std::string s = parse_string(l, v);
    auto dots = s.find("..");
    if (dots == std::string::npos) fail(l.number, "window must look like \"-6..6\"");
    try {
        int lo = std::stoi(s.substr(0, dots));
        int hi = std::stoi(s.substr(dots + 2));
        return {lo, hi};
    } catch (...) {
        fail(l.number, "window must look like \"-6..6\"");
    }
}

}  // namespace

ScenarioFile parse_scenario(const std::string& text) {
    ScenarioFile out;
    std::vector<Line> lines;
    {
        std::istringstream is(text);
        std::string raw;
        size_t n = 0;
        while (std::getline(is, raw)) {
            ++n;
            auto hash = raw.find('#');
            if (hash != std::string::npos) raw = raw.substr(0, hash);
            raw = trim(raw);
            if (!raw.empty()) lines.push_back({n, raw});
        }
    }
    std::string section;  // current [section] or [[block]] kind
    ScenarioVar* var = nullptr;
    ScenarioSign* sign = nullptr;
    ScenarioRewrite* rewrite = nullptr;
    ScenarioObject* object = nullptr;
    ScenarioCheck* check = nullptr;
    bool saw_format = false;

    auto close_blocks = [&]() {
        var = nullptr;
        sign = nullptr;
        rewrite = nullptr;
        object = nullptr;
        check = nullptr;
    };

    for (const auto& l : lines) {
        if (l.text.front() == '[') {
            close_blocks();
            if (l.text.size() > 3 && l.text.substr(0, 2) == "[[" &&
                l.text.substr(l.text.size() - 2) == "]]") {
                std::string kind = trim(l.text.substr(2, l.text.size() - 4));
                section = "[[" + kind + "]]";
                if (kind == "var") {
                    out.vars.emplace_back();
                    var = &out.vars.back();
                } else if (kind == "sign") {
                    out.signs.emplace_back();
                    sign = &out.signs.back();
                } else if (kind == "rewrite") {
                    out.rewrites.emplace_back();
                    rewrite = &out.rewrites.back();
                } else if (kind == "object") {
                    out.objects.emplace_back();
                    object = &out.objects.back();
                } else if (kind == "check") {
                    out.checks.emplace_back();
                    check = &out.checks.back();
                } else {
                    fail(l.number, "unknown block [[" + kind + "]]");
                }
            } else if (l.text.front() == '[' && l.text.back() == ']') {
                section = trim(l.text.substr(1, l.text.size() - 2));
                if (section != "bounds" && section != "ring" && section != "cover")
                    fail(l.number, "unknown section [" + section + "]");
                if (section == "cover") out.cover.present = true;
            } else {
                fail(l.number, "malformed section header");
            }
            continue;
        }
        auto eq = l.text.find('=');
        if (eq == std::string::npos) fail(l.number, "expected key = value");
        std::string key = trim(l.text.substr(0, eq));
        std::string value = trim(l.text.substr(eq + 1));
        if (value.empty()) fail(l.number, "missing value for " + key);

        if (var) {
            if (key == "name")
                var->name = parse_string(l, value);
            else if (key == "coh")
                var->coh = parse_int(l, value);
            else if (key == "aux")
                var->aux = parse_int_list(l, value);
            else
                fail(l.number, "unknown var key " + key);
        } else if (sign) {
            if (key == "vars") {
                auto vs = parse_list(l, value);
                if (vs.size() != 2) fail(l.number, "sign needs two variables");
                sign->a = parse_string(l, vs[0]);
                sign->b = parse_string(l, vs[1]);
            } else if (key == "value") {
                sign->value = static_cast<int>(parse_int(l, value));
            } else {
                fail(l.number, "unknown sign key " + key);
            }
        } else if (rewrite) {
            if (key == "var")
                rewrite->var = parse_string(l, value);
            else if (key == "to")
                rewrite->to = parse_string(l, value);
            else
                fail(l.number, "unknown rewrite key " + key);
        } else if (object) {
            if (key == "name")
                object->name = parse_string(l, value);
            else if (key == "kind")
                object->kind = parse_string(l, value);
            else if (key == "ring")
                object->ring = parse_string(l, value);
            else
                object->params[key] = parse_value(value);
        } else if (check) {
            if (key == "name")
                check->name = parse_string(l, value);
            else if (key == "op")
                check->op = parse_string(l, value);
            else if (key == "note")
                check->note = parse_string(l, value);
            else
                check->params[key] = parse_value(value);
        } else if (section == "bounds") {
            if (key == "poly_bound")
                out.poly_bound = static_cast<int>(parse_int(l, value));
            else if (key == "window") {
                auto [lo, hi] = parse_window(l, value);
                out.window_lo = lo;
                out.window_hi = hi;
            } else
                fail(l.number, "unknown bounds key " + key);
        } else if (section == "ring") {
            if (key == "coh_denominator")
                out.coh_denominator = parse_int(l, value);
            else if (key == "aux_moduli")
                out.aux_moduli = parse_int_list(l, value);
            else
                fail(l.number, "unknown ring key " + key);
        } else if (section == "cover") {
            if (key == "f")
                out.cover.f = parse_string(l, value);
            else if (key == "w")
                out.cover.w = parse_string(l, value);
            else if (key == "q")
                out.cover.q_name = parse_string(l, value);
            else if (key == "y")
                out.cover.y_name = parse_string(l, value);
            else if (key == "q_coh")
                out.cover.q_coh = parse_int(l, value);
            else if (key == "y_coh")
                out.cover.y_coh = parse_int(l, value);
            else if (key == "q_aux")
                out.cover.q_aux = parse_int_list(l, value);
            else if (key == "y_aux")
                out.cover.y_aux = parse_int_list(l, value);
            else
                fail(l.number, "unknown cover key " + key);
        } else if (section.empty()) {
            if (key == "format") {
                out.format = static_cast<int>(parse_int(l, value));
                if (out.format != 1) fail(l.number, "unsupported format " + value);
                saw_format = true;
            } else if (key == "name") {
                out.name = parse_string(l, value);
            } else {
                fail(l.number, "unknown top-level key " + key);
            }
        } else {
            fail(l.number, "key outside of a block");
        }
    }
    if (!saw_format) throw ParseError("scenario is missing the format key", 0);
    if (out.name.empty()) throw ParseError("scenario is missing a name", 0);

    // semantic validation that does not need ring construction
    std::map<std::string, int> seen;
    for (const auto& v : out.vars) {
        if (v.name.empty()) throw ParseError("variable without a name", 0);
        if (seen.count(v.name))
            throw ParseError("duplicate variable '" + v.name + "'", 0);
        seen[v.name] = 1;
    }
    std::map<std::string, int> obj_seen;
    for (const auto& o : out.objects) {
        if (o.name.empty()) throw ParseError("object without a name", 0);
        if (obj_seen.count(o.name)) throw ParseError("duplicate object '" + o.name + "'", 0);
        obj_seen[o.name] = 1;
    }
    return out;
}

namespace {

std::string quote(const std::string& s) { return "\"" + s + "\""; }

std::string int_list(const std::vector<int>& v) {
    std::string out = "[";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += std::to_string(v[i]);
    }
    return out + "]";
}

}  // namespace

std::string serialize_scenario(const ScenarioFile& s) {
    std::ostringstream os;
    os << "format = " << s.format << "\n";
    os << "name = " << quote(s.name) << "\n\n";
    os << "[bounds]\n";
    os << "poly_bound = " << s.poly_bound << "\n";
    os << "window = \"" << s.window_lo << ".." << s.window_hi << "\"\n\n";
    os << "[ring]\n";
    os << "coh_denominator = " << s.coh_denominator << "\n";
    os << "aux_moduli = " << int_list(s.aux_moduli) << "\n";
    for (const auto& v : s.vars) {
        os << "\n[[var]]\n";
        os << "name = " << quote(v.name) << "\n";
        os << "coh = " << v.coh << "\n";
        os << "aux = " << int_list(v.aux) << "\n";
    }
    for (const auto& g : s.signs) {
        os << "\n[[sign]]\n";
        os << "vars = [" << quote(g.a) << ", " << quote(g.b) << "]\n";
        os << "value = " << g.value << "\n";
    }
    for (const auto& r : s.rewrites) {
        os << "\n[[rewrite]]\n";
        os << "var = " << quote(r.var) << "\n";
        os << "to = " << quote(r.to) << "\n";
    }
    if (s.cover.present) {
        os << "\n[cover]\n";
        os << "f = " << quote(s.cover.f) << "\n";
        os << "w = " << quote(s.cover.w) << "\n";
        os << "q = " << quote(s.cover.q_name) << "\n";
        os << "q_coh = " << s.cover.q_coh << "\n";
        os << "q_aux = " << int_list(s.cover.q_aux) << "\n";
        os << "y = " << quote(s.cover.y_name) << "\n";
        os << "y_coh = " << s.cover.y_coh << "\n";
        os << "y_aux = " << int_list(s.cover.y_aux) << "\n";
    }
    for (const auto& o : s.objects) {
        os << "\n[[object]]\n";
        os << "name = " << quote(o.name) << "\n";
        os << "kind = " << quote(o.kind) << "\n";
        if (o.ring != "main") os << "ring = " << quote(o.ring) << "\n";
        for (const auto& [k, v] : o.params) os << k << " = " << quote(v) << "\n";
    }
    for (const auto& c : s.checks) {
        os << "\n[[check]]\n";
        os << "name = " << quote(c.name) << "\n";
        os << "op = " << quote(c.op) << "\n";
        for (const auto& [k, v] : c.params) os << k << " = " << quote(v) << "\n";
        if (!c.note.empty()) os << "note = " << quote(c.note) << "\n";
    }
    return os.str();
}

}  // namespace gmf
