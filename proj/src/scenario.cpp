#include "gmf/scenario.hpp"

#include "gmf/homalg.hpp"

#include "json.hpp"

#include <algorithm>
#include <cctype>
#include <ctime>
#include <set>
#include <sstream>

namespace gmf {

namespace {

// "coh" or "coh|a1;a2" (semicolons, because commas separate generators)
DegreeVector parse_degree_string(const RingPtr& ring, const std::string& text) {
    DegreeVector d = ring->zero_degree();
    auto bar = text.find('|');
    std::string coh = text.substr(0, bar);
    d.coh = std::stoll(coh);
    if (bar != std::string::npos) {
        std::string rest = text.substr(bar + 1);
        std::istringstream is(rest);
        std::string tok;
        size_t i = 0;
        while (std::getline(is, tok, ';')) {
            if (i >= d.aux.size()) throw Error("too many auxiliary entries in '" + text + "'");
            d.aux[i++] = std::stoi(tok);
        }
    }
    return ring->reduce_degree(d);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    for (auto& x : out) {
        size_t a = 0, b = x.size();
        while (a < b && std::isspace(static_cast<unsigned char>(x[a]))) ++a;
        while (b > a && std::isspace(static_cast<unsigned char>(x[b - 1]))) --b;
        x = x.substr(a, b - a);
    }
    if (out.size() == 1 && out[0].empty()) out.clear();
    return out;
}

const std::string& require_param(const ScenarioCheck& c, const std::string& key) {
    auto it = c.params.find(key);
    if (it == c.params.end()) throw Error("check '" + c.name + "' is missing " + key);
    return it->second;
}

const std::string& require_param(const ScenarioObject& o, const std::string& key) {
    auto it = o.params.find(key);
    if (it == o.params.end()) throw Error("object '" + o.name + "' is missing " + key);
    return it->second;
}

}  // namespace

ScenarioInstance instantiate(const ScenarioFile& file, const RunOverrides& over) {
    ScenarioInstance inst;
    inst.file = file;
    inst.poly_bound = over.poly_bound.value_or(file.poly_bound);
    if (over.window) {
        inst.window_lo = over.window->first;
        inst.window_hi = over.window->second;
    } else {
        inst.window_lo = file.window_lo;
        inst.window_hi = file.window_hi;
    }
    if (inst.window_lo >= inst.window_hi) throw Error("empty window");

    std::vector<VariableSpec> vars;
    for (const auto& v : file.vars) {
        std::vector<int> aux = v.aux;
        aux.resize(file.aux_moduli.size(), 0);
        vars.push_back({v.name, DegreeVector{v.coh, std::move(aux)}});
    }
    Ring::Options o;
    o.coh_denominator = file.coh_denominator;
    o.aux_moduli = file.aux_moduli;
    for (const auto& s : file.signs) o.sign_overrides.emplace_back(s.a, s.b, s.value);
    for (const auto& r : file.rewrites) o.rewrites.emplace_back(r.var, r.to);
    inst.main_ring = Ring::create(std::move(vars), o);

    if (file.cover.present) {
        std::vector<int> qa = file.cover.q_aux, ya = file.cover.y_aux;
        qa.resize(file.aux_moduli.size(), 0);
        ya.resize(file.aux_moduli.size(), 0);
        auto spec = make_cover_spec(inst.main_ring, parse_expr(inst.main_ring, file.cover.f),
                                    parse_expr(inst.main_ring, file.cover.w),
                                    DegreeVector{file.cover.q_coh, qa},
                                    DegreeVector{file.cover.y_coh, ya}, file.cover.q_name,
                                    file.cover.y_name);
        inst.sides = build_sides(spec);
    }

    auto ring_of = [&](const std::string& which) -> RingPtr {
        if (which == "main") return inst.main_ring;
        if (!inst.sides) throw Error("object needs a cover section for ring '" + which + "'");
        if (which == "cover.a") return inst.sides->a_ring;
        if (which == "cover.b") return inst.sides->b_ring;
        throw Error("unknown ring '" + which + "'");
    };

    for (const auto& ob : file.objects) {
        RingPtr ring = ring_of(ob.ring);
        MatrixFactorization built;
        if (ob.kind == "loop") {
            built = loop_factorization(parse_expr(ring, require_param(ob, "f")));
        } else if (ob.kind == "koszul") {
            built = koszul_factorization(parse_expr(ring, require_param(ob, "f")),
                                         parse_expr(ring, require_param(ob, "g")));
        } else if (ob.kind == "trivial") {
            built = trivial_mf(parse_expr(ring, require_param(ob, "w")));
        } else if (ob.kind == "zero") {
            built = zero_object(ring, parse_expr(ring, require_param(ob, "w")));
        } else if (ob.kind == "b_unit") {
            if (!inst.sides) throw Error("b_unit needs a cover section");
            built = b_side_unit_object(*inst.sides);
        } else if (ob.kind == "matrix") {
            built.ring = ring;
            for (const auto& g : split_list(require_param(ob, "gens")))
                built.gens.push_back(parse_degree_string(ring, g));
            std::istringstream rows(require_param(ob, "rows"));
            std::string row;
            while (std::getline(rows, row, '/')) {
                std::vector<RingElem> cells;
                for (const auto& cell : split_list(row)) cells.push_back(parse_expr(ring, cell));
                built.diff.push_back(std::move(cells));
            }
            built.curvature = parse_expr(ring, require_param(ob, "w"));
            require_valid(built);
        } else if (ob.kind == "sum") {
            auto parts = split_list(require_param(ob, "parts"));
            if (parts.empty()) throw Error("sum needs parts");
            bool first = true;
            for (const auto& p : parts) {
                auto it = inst.objects.find(p);
                if (it == inst.objects.end()) throw Error("unknown object '" + p + "'");
                built = first ? it->second : direct_sum(built, it->second);
                first = false;
            }
        } else if (ob.kind == "shift") {
            auto it = inst.objects.find(require_param(ob, "of"));
            if (it == inst.objects.end()) throw Error("unknown object in shift");
            built = shift(it->second);
        } else if (ob.kind == "fm_forward") {
            if (!inst.sides) throw Error("fm_forward needs a cover section");
            auto it = inst.objects.find(require_param(ob, "of"));
            if (it == inst.objects.end()) throw Error("unknown object in fm_forward");
            built = apply_fm_forward(*inst.sides, it->second);
        } else {
            throw Error("unknown object kind '" + ob.kind + "'");
        }
        inst.objects.emplace(ob.name, std::move(built));
    }
    return inst;
}

namespace {

std::map<int, int> parse_dim_table(const std::string& text) {
    std::map<int, int> out;
    if (text == "none") return out;
    for (const auto& entry : split_list(text)) {
        auto colon = entry.find(':');
        if (colon == std::string::npos) throw Error("expected deg:dim entries, got " + entry);
        out[std::stoi(entry.substr(0, colon))] = std::stoi(entry.substr(colon + 1));
    }
    return out;
}

const MatrixFactorization& object_of(const ScenarioInstance& inst, const std::string& name) {
    auto it = inst.objects.find(name);
    if (it == inst.objects.end()) throw Error("unknown object '" + name + "'");
    return it->second;
}

CheckResult run_check(const ScenarioInstance& inst, const ScenarioCheck& c) {
    CheckResult res;
    res.name = c.name;
    res.op = c.op;
    res.note = c.note;
    int lo = inst.window_lo, hi = inst.window_hi, bound = inst.poly_bound;

    if (c.op == "validate") {
        auto rep = validate_mf(object_of(inst, require_param(c, "object")));
        res.status = rep.ok ? "pass" : "fail";
        res.detail = rep.ok ? "valid" : rep.violations.front();
        return res;
    }
    if (c.op == "ext_dims" || c.op == "end_dims") {
        const auto& from = object_of(inst, require_param(c, c.op == "end_dims" ? "object" : "from"));
        const auto& to = c.op == "end_dims" ? from : object_of(inst, require_param(c, "to"));
        auto want = parse_dim_table(require_param(c, "expect"));
        auto table = cohomology_dims(hom_complex(from, to, lo, hi, bound));
        bool all_trusted = true;
        std::ostringstream got;
        for (const auto& [n, dim] : table.dims) {
            int expected = want.count(n) ? want.at(n) : 0;
            if (dim != expected) {
                res.status = "fail";
                res.detail = "degree " + std::to_string(n) + ": got " + std::to_string(dim) +
                             ", expected " + std::to_string(expected);
                return res;
            }
            if (!table.trusted.at(n)) all_trusted = false;
            if (dim) got << n << ":" << dim << " ";
        }
        for (const auto& [n, dim] : want) {
            if (dim != 0 && !table.dims.count(n)) {
                res.status = "fail";
                res.detail = "expected degree " + std::to_string(n) + " outside the window";
                return res;
            }
        }
        res.status = all_trusted ? "pass" : "untrusted";
        res.detail = "dims " + (got.str().empty() ? std::string("all zero") : got.str());
        res.table = table.dims;
        res.has_table = true;
        return res;
    }
    if (c.op == "iso") {
        const auto& a = object_of(inst, require_param(c, "a"));
        const auto& b = object_of(inst, require_param(c, "b"));
        bool want = require_param(c, "expect") == "found";
        auto cert = find_iso(a, b, bound);
        bool found = cert.has_value();
        res.status = found == want ? "pass" : "fail";
        res.detail = found ? "certificate found" : "no certificate up to the bound";
        if (cert) {
            std::ostringstream w_os;
            for (const auto& row : cert->forward.mat) {
                for (size_t i = 0; i < row.size(); ++i) w_os << (i ? ", " : "[") << row[i].str();
                w_os << "] ";
            }
            res.witness = w_os.str();
        }
        return res;
    }
    if (c.op == "contract") {
        const auto& e = object_of(inst, require_param(c, "object"));
        bool want = require_param(c, "expect") == "found";
        auto cert = find_contraction(e, bound);
        bool found = cert.has_value();
        res.status = found == want ? "pass" : "fail";
        res.detail = found ? "contracting homotopy found" : "no contraction up to the bound";
        if (cert) {
            std::ostringstream w_os;
            for (const auto& row : cert->h.mat) {
                for (size_t i = 0; i < row.size(); ++i) w_os << (i ? ", " : "[") << row[i].str();
                w_os << "] ";
            }
            res.witness = w_os.str();
        }
        return res;
    }
    if (c.op == "end_algebra") {
        const auto& e = object_of(inst, require_param(c, "object"));
        int gen = std::stoi(require_param(c, "gen_degree"));
        int height = std::stoi(require_param(c, "height"));
        auto chk = check_truncated_polynomial_algebra(e, gen, height, lo, hi, bound);
        res.status = chk.ok ? "pass" : "fail";
        res.detail = chk.detail;
        return res;
    }
    if (c.op == "loop_search") {
        RingPtr ring = inst.main_ring;
        RingElem w = parse_expr(ring, require_param(c, "w"));
        int expect = std::stoi(require_param(c, "expect_count"));
        bool orth = c.params.count("orthogonal") && c.params.at("orthogonal") == "true";
        auto basis = ring->graded_piece_basis(ring->chi(), 4);
        if (basis.size() > 4) throw Error("loop search space too large");
        std::vector<RingElem> found;
        std::vector<int> coeff(basis.size(), -2);
        if (!basis.empty()) {
            for (;;) {
                RingElem cand = RingElem::zero(ring);
                for (size_t i = 0; i < basis.size(); ++i)
                    cand = cand +
                           RingElem(ring, PolyData{{basis[i], Rational(coeff[i])}});
                if (!cand.is_zero() && cand * cand == w) found.push_back(cand);
                size_t k = 0;
                while (k < coeff.size() && coeff[k] == 2) coeff[k++] = -2;
                if (k == coeff.size()) break;
                ++coeff[k];
            }
        }
        if (static_cast<int>(found.size()) != expect) {
            res.status = "fail";
            res.detail = "found " + std::to_string(found.size()) + " loop differentials, expected " +
                         std::to_string(expect);
            return res;
        }
        if (orth) {
            for (size_t i = 0; i < found.size(); ++i) {
                for (size_t j = 0; j < found.size(); ++j) {
                    auto table = cohomology_dims(hom_complex(loop_factorization(found[i]),
                                                             loop_factorization(found[j]), lo,
                                                             hi, bound));
                    for (const auto& [n, dim] : table.dims) {
                        int expect_dim = (i == j && n == 0) ? 1 : 0;
                        if (dim != expect_dim) {
                            res.status = "fail";
                            res.detail = "pairing " + std::to_string(i) + "," +
                                         std::to_string(j) + " has dim " + std::to_string(dim) +
                                         " in degree " + std::to_string(n);
                            return res;
                        }
                    }
                }
            }
        }
        res.status = "pass";
        res.detail = std::to_string(found.size()) + " loop differentials" +
                     (orth ? ", pairwise orthogonal exceptional" : "");
        return res;
    }
    if (c.op == "rank2_search") {
        RingPtr ring = inst.main_ring;
        RingElem w = parse_expr(ring, require_param(c, "w"));
        int expect = std::stoi(require_param(c, "expect_count"));
        // candidate entry degrees from small monomials
        std::set<DegreeVector> degs;
        {
            size_t nv = ring->var_count();
            Exponents cur(nv, 0);
            auto rec = [&](auto&& self, size_t v, int budget) -> void {
                if (v == nv) {
                    degs.insert(ring->monomial_degree(cur));
                    return;
                }
                int cap = ring->rewrite(static_cast<int>(v)) ? std::min(budget, 1) : budget;
                for (int e = 0; e <= cap; ++e) {
                    cur[v] = e;
                    self(self, v + 1, budget - e);
                }
                cur[v] = 0;
            };
            rec(rec, 0, 3);
        }
        int count = 0;
        DegreeVector two_chi = ring->deg_scale(ring->chi(), 2);
        for (const auto& du : degs) {
            auto bu = ring->graded_piece_basis(du, 3);
            auto bv = ring->graded_piece_basis(ring->deg_sub(two_chi, du), 3);
            if (bu.empty() || bv.empty() || bu.size() > 3 || bv.size() > 3) continue;
            std::vector<int> cu(bu.size(), -1), cv;
            for (;;) {
                RingElem u = RingElem::zero(ring);
                for (size_t i = 0; i < bu.size(); ++i)
                    u = u + RingElem(ring, PolyData{{bu[i], Rational(cu[i])}});
                if (!u.is_zero()) {
                    cv.assign(bv.size(), -1);
                    for (;;) {
                        RingElem v = RingElem::zero(ring);
                        for (size_t i = 0; i < bv.size(); ++i)
                            v = v + RingElem(ring, PolyData{{bv[i], Rational(cv[i])}});
                        // unit entries give contractible objects; skip them
                        if (!v.is_zero() && !u.is_constant() && !v.is_constant() &&
                            u * v == w && v * u == w)
                            ++count;
                        size_t k = 0;
                        while (k < cv.size() && cv[k] == 1) cv[k++] = -1;
                        if (k == cv.size()) break;
                        ++cv[k];
                    }
                }
                size_t k = 0;
                while (k < cu.size() && cu[k] == 1) cu[k++] = -1;
                if (k == cu.size()) break;
                ++cu[k];
            }
        }
        res.status = count == expect ? "pass" : "fail";
        res.detail = "found " + std::to_string(count) + " rank-two factorizations";
        return res;
    }
    if (c.op == "cover_unit") {
        if (!inst.sides) throw Error("cover_unit needs a cover section");
        auto rep = check_unit(inst.sides->spec, lo, hi, bound);
        res.status = rep.pass ? "pass" : "fail";
        res.detail = rep.detail;
        return res;
    }
    if (c.op == "cover_counit") {
        if (!inst.sides) throw Error("cover_counit needs a cover section");
        auto rep = check_counit(inst.sides->spec, bound);
        res.status = rep.pass ? "pass" : "fail";
        res.detail = rep.detail;
        return res;
    }
    if (c.op == "cover_involution") {
        if (!inst.sides) throw Error("cover_involution needs a cover section");
        std::vector<MatrixFactorization> samples;
        for (const auto& n : split_list(require_param(c, "samples")))
            samples.push_back(object_of(inst, n));
        auto rep = check_involution(inst.sides->spec, samples, bound);
        res.status = rep.pass ? "pass" : "fail";
        std::ostringstream os;
        for (const auto& s : rep.sample_results) os << s << "; ";
        res.detail = os.str();
        return res;
    }
    if (c.op == "fm_split") {
        if (!inst.sides) throw Error("fm_split needs a cover section");
        const auto& e = object_of(inst, require_param(c, "object"));
        auto into = split_list(require_param(c, "into"));
        if (into.size() < 2) throw Error("fm_split needs at least two summands");
        MatrixFactorization target = object_of(inst, into[0]);
        for (size_t i = 1; i < into.size(); ++i)
            target = direct_sum(target, object_of(inst, into[i]));
        auto img = apply_fm_forward(*inst.sides, e);
        auto cert = find_iso(img, target, bound);
        if (!cert) {
            auto stripped = strip_trivial_summands(img);
            cert = find_iso(stripped.object, target, bound);
        }
        res.status = cert ? "pass" : "fail";
        res.detail = cert ? "image splits as requested" : "no splitting certificate";
        return res;
    }
    if (c.op == "fm_valid") {
        if (!inst.sides) throw Error("fm_valid needs a cover section");
        const auto& e = object_of(inst, require_param(c, "object"));
        auto img = apply_fm_forward(*inst.sides, e);  // validates internally
        res.status = "pass";
        res.detail = "image has rank " + std::to_string(img.rank());
        return res;
    }
    if (c.op == "dims_match") {
        const auto& a = object_of(inst, require_param(c, "a"));
        const auto& b = object_of(inst, require_param(c, "b"));
        auto ta = cohomology_dims(hom_complex(a, a, lo, hi, bound));
        auto tb = cohomology_dims(hom_complex(b, b, lo, hi, bound));
        bool all_trusted = true;
        for (const auto& [n, dim] : ta.dims) {
            if (tb.dims.at(n) != dim) {
                res.status = "fail";
                res.detail = "degree " + std::to_string(n) + ": " + std::to_string(dim) +
                             " vs " + std::to_string(tb.dims.at(n));
                return res;
            }
            if (!ta.trusted.at(n) || !tb.trusted.at(n)) all_trusted = false;
        }
        res.status = all_trusted ? "pass" : "untrusted";
        res.detail = "tables agree on the window";
        return res;
    }
    throw Error("unknown check op '" + c.op + "'");
}

}  // namespace

ScenarioReport run_scenario(const ScenarioFile& file, const RunOverrides& over) {
    ScenarioInstance inst = instantiate(file, over);
    ScenarioReport rep;
    rep.scenario = file.name;
    rep.poly_bound = inst.poly_bound;
    rep.window_lo = inst.window_lo;
    rep.window_hi = inst.window_hi;
    for (const auto& c : inst.file.checks) {
        try {
            rep.checks.push_back(run_check(inst, c));
        } catch (const std::exception& ex) {
            CheckResult res;
            res.name = c.name;
            res.op = c.op;
            res.note = c.note;
            res.status = "error";
            res.detail = ex.what();
            rep.checks.push_back(std::move(res));
        }
    }
    return rep;
}

std::string report_to_json(const ScenarioReport& rep, bool include_timestamp) {
    nlohmann::ordered_json j;
    j["schema"] = "mf-workbench-report/1";
    j["tool"] = {{"name", "gmf"}, {"version", "0.1.0"}};
    if (include_timestamp) j["generated_at"] = static_cast<long long>(std::time(nullptr));
    j["scenario"] = rep.scenario;
    j["bounds"] = {{"poly_bound", rep.poly_bound},
                   {"window", std::to_string(rep.window_lo) + ".." + std::to_string(rep.window_hi)}};
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    int pass = 0, fail = 0, untrusted = 0, error = 0;
    for (const auto& c : rep.checks) {
        nlohmann::ordered_json jc;
        jc["name"] = c.name;
        jc["op"] = c.op;
        jc["status"] = c.status;
        jc["detail"] = c.detail;
        if (!c.note.empty()) jc["note"] = c.note;
        if (c.has_table) {
            nlohmann::ordered_json jt;
            for (const auto& [deg, dim] : c.table) jt[std::to_string(deg)] = dim;
            jc["ext_table"] = std::move(jt);
        }
        if (!c.witness.empty()) jc["witness"] = c.witness;
        checks.push_back(std::move(jc));
        if (c.status == "pass") ++pass;
        if (c.status == "fail") ++fail;
        if (c.status == "untrusted") ++untrusted;
        if (c.status == "error") ++error;
    }
    j["checks"] = std::move(checks);
    j["summary"] = {{"pass", pass}, {"fail", fail}, {"untrusted", untrusted}, {"error", error}};
    return j.dump(2) + "\n";
}

std::string report_to_text(const ScenarioReport& rep) {
    std::ostringstream os;
    os << "scenario " << rep.scenario << " (poly_bound " << rep.poly_bound << ", window "
       << rep.window_lo << ".." << rep.window_hi << ")\n";
    for (const auto& c : rep.checks) {
        os << "  [" << c.status << "] " << c.name;
        if (!c.detail.empty()) os << " -- " << c.detail;
        os << "\n";
    }
    os << (rep.any_failure() ? "FAIL" : "OK") << "\n";
    return os.str();
}

}  // namespace gmf
