// Acceptance suite: one test case per criterion, each printing a single
// PASS/FAIL line. Everything is asserted exactly; no tolerances.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gmf/cover.hpp"
#include "gmf/homalg.hpp"
#include "gmf/scenario.hpp"
#include "test_util.hpp"

#include <iostream>
#include <random>

using namespace gmf;
using namespace gmf::testutil;

namespace {

struct Criterion {
    std::string label;
    bool ok = true;
    explicit Criterion(std::string l) : label(std::move(l)) {}
    void expect(bool c) { ok = ok && c; }
    ~Criterion() {
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << label << std::endl;
    }
};

CoverSpec point_spec() {
    auto pt = Ring::create({});
    return make_cover_spec(pt, RingElem::constant(pt, 1), RingElem::zero(pt), {1, {}},
                           {0, {}});
}

CoverSpec line_spec() {
    auto base = Ring::create({{"a", {0, {}}}});
    return make_cover_spec(base, RingElem::var(base, "a"), RingElem::zero(base), {1, {}},
                           {0, {}});
}

// Joint ring of two variable-disjoint rings with parity cross signs.
RingPtr parity_joint(const RingPtr& r1, const RingPtr& r2) {
    std::vector<VariableSpec> vars = r1->variables();
    for (const auto& v : r2->variables()) vars.push_back(v);
    Ring::Options o;
    o.coh_denominator = r1->coh_denominator();
    o.aux_moduli = r1->aux_moduli();
    auto copy_signs = [&](const Ring& r) {
        const auto& vs = r.variables();
        for (size_t i = 0; i < vs.size(); ++i)
            for (size_t j = i + 1; j < vs.size(); ++j)
                if (r.sign(static_cast<int>(i), static_cast<int>(j)) < 0)
                    o.sign_overrides.emplace_back(vs[i].name, vs[j].name, -1);
    };
    copy_signs(*r1);
    copy_signs(*r2);
    for (const auto& v1 : r1->variables())
        for (const auto& v2 : r2->variables())
            if ((r1->coh_parity(v1.degree) * r2->coh_parity(v2.degree)) % 2)
                o.sign_overrides.emplace_back(v1.name, v2.name, -1);
    auto copy_rewrites = [&](const Ring& r) {
        for (size_t i = 0; i < r.var_count(); ++i)
            if (r.rewrite(static_cast<int>(i)))
                o.rewrites.emplace_back(r.variables()[i].name,
                                        r.format(*r.rewrite(static_cast<int>(i))));
    };
    copy_rewrites(*r1);
    copy_rewrites(*r2);
    return Ring::create(std::move(vars), o);
}

RingPtr rename_vars(const RingPtr& r, const std::string& suffix) {
    std::vector<VariableSpec> vars;
    for (const auto& v : r->variables()) vars.push_back({v.name + suffix, v.degree});
    Ring::Options o;
    o.coh_denominator = r->coh_denominator();
    o.aux_moduli = r->aux_moduli();
    const auto& vs = r->variables();
    for (size_t i = 0; i < vs.size(); ++i)
        for (size_t j = i + 1; j < vs.size(); ++j)
            if (r->sign(static_cast<int>(i), static_cast<int>(j)) < 0)
                o.sign_overrides.emplace_back(vs[i].name + suffix, vs[j].name + suffix, -1);
    RingPtr renamed = Ring::create(vars, o);
    bool has = false;
    for (size_t i = 0; i < r->var_count(); ++i)
        if (r->rewrite(static_cast<int>(i))) has = true;
    if (!has) return renamed;
    Ring::Options o2 = o;
    for (size_t i = 0; i < r->var_count(); ++i) {
        if (!r->rewrite(static_cast<int>(i))) continue;
        // exponent vectors carry over verbatim: the variable order is shared
        RingElem rhs(renamed, *r->rewrite(static_cast<int>(i)));
        o2.rewrites.emplace_back(vs[i].name + suffix, renamed->format(rhs.data()));
    }
    return Ring::create(std::move(vars), o2);
}

MatrixFactorization transport(const MatrixFactorization& e, const RingPtr& target) {
    MatrixFactorization out;
    out.ring = target;
    out.gens = e.gens;
    out.curvature = RingElem(target, e.curvature.data());
    for (const auto& row : e.diff) {
        std::vector<RingElem> r2;
        for (const auto& x : row) r2.emplace_back(target, x.data());
        out.diff.push_back(std::move(r2));
    }
    require_valid(out);
    return out;
}

}  // namespace

TEST_CASE("criterion 1: odd point check") {
    Criterion c("criterion 1: two orthogonal exceptional loop objects on the odd line");
    auto lp = loop_factorization(parse_expr(qx_odd(), "x"));
    auto lm = loop_factorization(parse_expr(qx_odd(), "-x"));
    auto ends = cohomology_dims(hom_complex(lp, lp, -6, 6, 10));
    for (const auto& [n, dim] : ends.dims) {
        c.expect(dim == (n == 0 ? 1 : 0));
        c.expect(ends.trusted.at(n));
    }
    auto cross = cohomology_dims(hom_complex(lp, lm, -6, 6, 10));
    for (const auto& [n, dim] : cross.dims) {
        c.expect(dim == 0);
        c.expect(cross.trusted.at(n));
    }
    CHECK(c.ok);
}

TEST_CASE("criterion 2: the morphism differential matches the alternating formula") {
    Criterion c("criterion 2: End differential is 0 / 2x^{n+1} entrywise through n = 9");
    auto lp = loop_factorization(parse_expr(qx_odd(), "x"));
    auto cx = hom_complex(lp, lp, -2, 11, 12);
    for (int n = 0; n <= 9; ++n) {
        size_t k = static_cast<size_t>(n - cx.lo);
        c.expect(cx.dim(n) == 1);
        c.expect(cx.d[k].size() == 1 && cx.d[k][0].size() == 1);
        c.expect(cx.d[k][0][0] == (n % 2 ? Rational(2) : Rational(0)));
    }
    CHECK(c.ok);
}

TEST_CASE("criterion 3: contraction certificates") {
    Criterion c("criterion 3: standard homotopies and cones of identities contract");
    std::vector<RingElem> ws = {parse_expr(qx_odd(), "x^2"),
                                parse_expr(cover_a_ring(), "a*q^2"),
                                parse_expr(half_ring(), "y^2 - x^4")};
    for (const auto& w : ws) {
        auto t = trivial_mf(w);
        auto h = standard_contraction(w);
        c.expect(hom_differential(h).mat == identity_morphism(t).mat);
        auto found = find_contraction(t, 10);
        c.expect(found.has_value());
        if (found) c.expect(hom_differential(found->h).mat == identity_morphism(t).mat);
    }
    std::mt19937 rng(20240808);
    std::vector<RingPtr> rings = {qx_odd(), cover_a_ring(), kp_ring(), orbifold_ring()};
    for (int t = 0; t < 20; ++t) {
        auto e = random_object(rings[static_cast<size_t>(t) % rings.size()], rng);
        c.expect(validate_mf(e).ok);
        c.expect(find_contraction(cone(identity_morphism(e)), 8).has_value());
    }
    CHECK(c.ok);
}

TEST_CASE("criterion 4: Clifford splitting certificate") {
    Criterion c("criterion 4: koszul(x,x) is isomorphic to the sum of the two loops");
    auto R = qx_odd();
    auto k = koszul_factorization(parse_expr(R, "x"), parse_expr(R, "x"));
    auto s = direct_sum(loop_factorization(parse_expr(R, "x")),
                        loop_factorization(parse_expr(R, "-x")));
    auto cert = find_iso(k, s, 10);
    c.expect(cert.has_value());
    if (cert) {
        c.expect(compose(cert->inverse, cert->forward).mat == identity_morphism(k).mat);
        c.expect(compose(cert->forward, cert->inverse).mat == identity_morphism(s).mat);
    }
    CHECK(c.ok);
}

TEST_CASE("criterion 5: main equivalence at desk scale") {
    Criterion c("criterion 5: unit exactness, counit certificate, generator splitting");
    for (const auto& spec : {point_spec(), line_spec()}) {
        auto unit = check_unit(spec, -6, 6, 10);
        c.expect(unit.pass);
        auto counit = check_counit(spec, 10);
        c.expect(counit.pass);
    }
    auto s = build_sides(point_spec());
    auto img = apply_fm_forward(s, b_side_unit_object(s));
    RingElem q = RingElem::var(s.a_ring, "q");
    auto target = direct_sum(loop_factorization(q), loop_factorization(-q));
    auto cert = find_iso(img, target, 10);
    if (!cert) cert = find_iso(strip_trivial_summands(img).object, target, 10);
    c.expect(cert.has_value());
    CHECK(c.ok);
}

TEST_CASE("criterion 6: involution compatibility") {
    Criterion c("criterion 6: the deck transformation matches the fiber sign change");
    for (const auto& spec : {point_spec(), line_spec()}) {
        auto sides = build_sides(spec);
        auto rep = check_involution(spec, {b_side_unit_object(sides)}, 10);
        c.expect(rep.pass);
    }
    CHECK(c.ok);
}

TEST_CASE("criterion 7: anticommuting iterated cover") {
    Criterion c("criterion 7: exactly four orthogonal rank-one generators");
    auto R = kp_ring();
    RingElem w = parse_expr(R, "p^2 + q^2");
    std::vector<Rational> grid;
    for (int num = -4; num <= 4; ++num)
        for (int den = 1; den <= 2; ++den) grid.emplace_back(num, den);
    std::vector<RingElem> found;
    for (const auto& a : grid) {
        for (const auto& b : grid) {
            RingElem cand = a * RingElem::var(R, "p") + b * RingElem::var(R, "q");
            if (!cand.is_zero() && cand * cand == w) {
                bool dup = false;
                for (const auto& f : found) dup = dup || f == cand;
                if (!dup) found.push_back(cand);
            }
        }
    }
    c.expect(found.size() == 4);
    for (size_t i = 0; i < found.size(); ++i) {
        for (size_t j = 0; j < found.size(); ++j) {
            auto table = cohomology_dims(hom_complex(loop_factorization(found[i]),
                                                     loop_factorization(found[j]), -6, 6, 10));
            for (const auto& [n, dim] : table.dims)
                c.expect(dim == ((i == j && n == 0) ? 1 : 0));
        }
    }
    CHECK(c.ok);
}

TEST_CASE("criterion 8: kernel endomorphism algebras") {
    Criterion c("criterion 8: truncated polynomial algebras of heights three and four");
    {
        Ring::Options o;
        o.aux_moduli = {2};
        o.rewrites = {{"z", "1"}};
        auto R = Ring::create({{"x", {1, {1}}}, {"s", {-1, {1}}}, {"z", {0, {1}}}}, o);
        auto K = koszul_factorization(parse_expr(R, "-x^3"), RingElem::var(R, "s"));
        auto chk = check_truncated_polynomial_algebra(K, 1, 3, -4, 5, 10);
        c.expect(chk.ok);
    }
    {
        auto R = Ring::create({{"zeta", {1, {}}}, {"sigma", {-2, {}}}});
        auto K = koszul_factorization(parse_expr(R, "zeta^4"), RingElem::var(R, "sigma"));
        auto chk = check_truncated_polynomial_algebra(K, 1, 4, -4, 6, 10);
        c.expect(chk.ok);
    }
    for (const char* name : {"a2-kernel", "a3-kernel"}) {
        auto rep = run_scenario(parse_scenario(*catalogue_text(name)));
        c.expect(!rep.any_failure());
    }
    CHECK(c.ok);
}

TEST_CASE("criterion 9: truncation stability at a higher bound") {
    Criterion c("criterion 9: raising the bound to 14 changes no trusted dimension");
    auto lp = loop_factorization(parse_expr(qx_odd(), "x"));
    auto t10 = cohomology_dims(hom_complex(lp, lp, -6, 6, 10));
    auto t14 = cohomology_dims(hom_complex(lp, lp, -6, 6, 14));
    for (const auto& [n, dim] : t10.dims)
        if (t10.trusted.at(n) && t14.trusted.at(n)) c.expect(dim == t14.dims.at(n));
    RunOverrides over;
    over.poly_bound = 14;
    for (const char* name : {"cover-point-f1", "cover-line-fa", "a2-kernel", "a3-kernel"}) {
        auto rep = run_scenario(parse_scenario(*catalogue_text(name)), over);
        c.expect(!rep.any_failure());
    }
    CHECK(c.ok);
}

TEST_CASE("criterion 10: randomized differentials square to zero; tensor adds curvature") {
    Criterion c("criterion 10: 100 randomized pairs per scenario ring, exactly");
    std::vector<RingPtr> rings = {qx_odd(), kp_ring(),
                                  Ring::create({{"a", {0, {}}}}),
                                  orbifold_ring()};
    {
        Ring::Options o;
        o.aux_moduli = {2, 2};
        rings.push_back(Ring::create({{"x", {1, {1, 0}}}, {"y", {1, {0, 1}}}}, o));
    }
    {
        Ring::Options o;
        o.aux_moduli = {2};
        rings.push_back(Ring::create({{"x", {1, {1}}}, {"s", {-1, {1}}}}, o));
    }
    rings.push_back(Ring::create({{"gamma", {2, {}}}, {"sigma", {-2, {}}}}));

    std::mt19937 rng(881);
    for (const auto& R : rings) {
        RingPtr renamed = rename_vars(R, "b");
        RingPtr joint = parity_joint(R, renamed);
        int pairs = 0;
        while (pairs < 100) {
            auto pr = random_pair_same_curvature(R, rng);
            if (pr.first.rank() > 4 || pr.second.rank() > 4) continue;
            ++pairs;
            auto cx = hom_complex(pr.first, pr.second, -1, 2, 4);
            for (size_t k = 0; k + 1 < cx.d.size(); ++k)
                c.expect(qmat_is_zero(qmat_mul(cx.d[k + 1], cx.d[k])));
            auto f2 = transport(random_object(R, rng), renamed);
            if (f2.rank() > 4) continue;
            auto t = tensor(pr.first, f2, joint);
            RingElem want = inclusion_map(R, joint).apply(pr.first.curvature) +
                            inclusion_map(renamed, joint).apply(f2.curvature);
            c.expect(t.curvature == want);
        }
    }
    CHECK(c.ok);
}
