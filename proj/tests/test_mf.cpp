#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gmf/mf.hpp"
#include "test_util.hpp"

#include <random>

using namespace gmf;
using namespace gmf::testutil;

TEST_CASE("validate accepts the loop object and the trivial object") {
    auto R = qx_odd();
    auto lp = loop_factorization(parse_expr(R, "x"));
    CHECK(validate_mf(lp).ok);
    CHECK(lp.curvature == parse_expr(R, "x^2"));

    auto t = trivial_mf(parse_expr(R, "x^2"));
    CHECK(validate_mf(t).ok);
}

TEST_CASE("validate reports a curvature violation") {
    auto R = qx_odd();
    MatrixFactorization bad;
    bad.ring = R;
    bad.gens = {R->zero_degree()};
    bad.diff = {{parse_expr(R, "x")}};
    bad.curvature = parse_expr(R, "x^3");
    auto rep = validate_mf(bad);
    CHECK_FALSE(rep.ok);
    bool mentions_square = false;
    for (const auto& v : rep.violations)
        if (v.find("d^2") != std::string::npos) mentions_square = true;
    CHECK(mentions_square);
}

TEST_CASE("loop factorizations") {
    auto Q = Ring::create({{"q", {1, {}}}});
    auto l = loop_factorization(parse_expr(Q, "q"));
    CHECK(l.curvature == parse_expr(Q, "q^2"));

    auto K = kp_ring();
    auto lk = loop_factorization(parse_expr(K, "p + q"));
    CHECK(lk.curvature == parse_expr(K, "p^2 + q^2"));

    auto z = loop_factorization(RingElem::zero(Q));
    CHECK(z.diff[0][0].is_zero());
    CHECK(z.curvature.is_zero());

    CHECK_THROWS_AS(loop_factorization(parse_expr(Q, "q^2")), DegreeError);
}

TEST_CASE("koszul factorizations") {
    auto R = qx_odd();
    auto k = koszul_factorization(parse_expr(R, "x"), parse_expr(R, "x"));
    CHECK(k.diff[0][1] == parse_expr(R, "x"));
    CHECK(k.diff[1][0] == parse_expr(R, "x"));
    CHECK(k.diff[0][0].is_zero());
    CHECK(k.curvature == parse_expr(R, "x^2"));

    auto H = half_ring();
    auto kh = koszul_factorization(parse_expr(H, "y - x^2"), parse_expr(H, "y + x^2"));
    CHECK(validate_mf(kh).ok);
    CHECK(kh.curvature == parse_expr(H, "y^2 - x^4"));

    // f = 1, g = w degenerates to the trivial object
    auto w = parse_expr(R, "x^2");
    auto t1 = koszul_factorization(RingElem::constant(R, 1), w, R->chi());
    auto t2 = trivial_mf(w);
    CHECK(t1.gens == t2.gens);
    CHECK(t1.diff == t2.diff);
}

TEST_CASE("trivial object contracts via the standard homotopy") {
    for (const RingElem& w : {parse_expr(qx_odd(), "x^2"),
                              parse_expr(cover_a_ring(), "a*q^2"),
                              parse_expr(half_ring(), "y^2 - x^4")}) {
        auto h = standard_contraction(w);
        CHECK(h.mat[1][0] == RingElem::constant(w.ring(), 1));
        CHECK(h.mat[0][1].is_zero());
        // dh + hd = id, exactly
        auto dh_plus_hd = hom_differential(h);
        CHECK(dh_plus_hd.mat == identity_morphism(trivial_mf(w)).mat);
    }
}

TEST_CASE("trivial object of w = 0 is the cone of the identity on a zero-differential object") {
    auto R = qx_odd();
    MatrixFactorization z;
    z.ring = R;
    z.gens = {R->zero_degree()};
    z.diff = {{RingElem::zero(R)}};
    z.curvature = RingElem::zero(R);
    auto c = cone(identity_morphism(z));
    CHECK(validate_mf(c).ok);
    auto t = twist(trivial_mf(RingElem::zero(R)), R->deg_neg(R->chi()));
    auto cert = find_iso(c, t, 4);
    CHECK(cert.has_value());
}

TEST_CASE("shift negates the differential and squares to a twist") {
    auto R = qx_odd();
    auto k = koszul_factorization(parse_expr(R, "x"), parse_expr(R, "x"));
    auto s = shift(k);
    CHECK(validate_mf(s).ok);
    CHECK(s.diff[0][1] == -parse_expr(R, "x"));
    auto ss = shift(s);
    CHECK(ss.diff == k.diff);
    for (size_t i = 0; i < k.rank(); ++i)
        CHECK(ss.gens[i] == R->deg_sub(k.gens[i], R->deg_scale(R->chi(), 2)));

    // shift(loop(+x)) equals loop(-x) placed one step over
    auto l = shift(loop_factorization(parse_expr(R, "x")));
    auto lm = twist(loop_factorization(parse_expr(R, "-x")), R->deg_neg(R->chi()));
    CHECK(l.gens == lm.gens);
    CHECK(l.diff == lm.diff);
}

TEST_CASE("cone of zero is the sum with the target, source shifted") {
    auto R = qx_odd();
    auto e = loop_factorization(parse_expr(R, "x"));
    auto f = koszul_factorization(parse_expr(R, "x"), parse_expr(R, "x"));
    auto c = cone(zero_morphism(e, f, R->zero_degree()));
    auto s = direct_sum(shift(e), f);
    CHECK(c.gens == s.gens);
    CHECK(c.diff == s.diff);
}

TEST_CASE("cone rejects non-closed and curvature-mismatched input") {
    auto R = qx_odd();
    auto e = loop_factorization(parse_expr(R, "x"));
    auto t = trivial_mf(parse_expr(R, "x^2"));
    // x * id as a degree-0 map loop -> loop is not closed (it has odd entries
    // against an odd differential), scale to make it plainly non-closed:
    MfMorphism m = zero_morphism(e, shift(e), R->zero_degree());
    m.mat[0][0] = parse_expr(R, "x");
    CHECK_THROWS_AS(cone(m), NotClosedError);
    auto z = zero_object(R, RingElem::zero(R));
    CHECK_THROWS_AS(cone(zero_morphism(z, t, R->zero_degree())), CurvatureMismatchError);
}

TEST_CASE("two-term totalization equals the cone") {
    auto R = qx_odd();
    auto t = trivial_mf(parse_expr(R, "x^2"));
    auto k = koszul_factorization(parse_expr(R, "x"), parse_expr(R, "x"));
    MfMorphism alpha = zero_morphism(t, k, R->zero_degree());
    alpha.mat[0][0] = parse_expr(R, "x");
    alpha.mat[1][1] = RingElem::constant(R, 1);
    REQUIRE(is_closed(alpha));

    auto c = cone(alpha);
    // Translate alpha to its degree-1 avatar out of the shifted source.
    MfMorphism alpha1 = zero_morphism(shift(t), k, R->chi());
    alpha1.mat = alpha.mat;
    auto tot = totalize({shift(t), k}, {alpha1});
    CHECK(tot.gens == c.gens);
    CHECK(tot.diff == c.diff);
}

TEST_CASE("three-term totalization with exactly vanishing composites") {
    auto R = qx_odd();
    auto e = loop_factorization(parse_expr(R, "x"));
    auto f = koszul_factorization(parse_expr(R, "x"), parse_expr(R, "x"));
    auto mid = direct_sum(e, f);
    auto top = twist(shift(f), R->deg_scale(R->chi(), 2));  // inverse shift of f

    MfMorphism f0 = zero_morphism(shift(e), mid, R->chi());
    f0.mat[0][0] = RingElem::constant(R, 1);
    MfMorphism f1 = zero_morphism(mid, top, R->chi());
    f1.mat[0][1] = RingElem::constant(R, 1);
    f1.mat[1][2] = RingElem::constant(R, 1);

    auto tot = totalize({shift(e), mid, top}, {f0, f1});
    CHECK(validate_mf(tot).ok);
    CHECK(tot.rank() == 6);
}

TEST_CASE("constructor degree violations and mismatches are rejected") {
    auto R = qx_odd();
    // koszul needs f*g of cohomological degree 2
    CHECK_THROWS_AS(koszul_factorization(parse_expr(R, "x"), parse_expr(R, "x^2")),
                    DegreeError);
    // direct sums need a common curvature
    CHECK_THROWS_AS(direct_sum(loop_factorization(parse_expr(R, "x")),
                               trivial_mf(RingElem::zero(R))),
                    CurvatureMismatchError);
}

TEST_CASE("totalize rejects maps that fail its preconditions") {
    auto R = qx_odd();
    auto e = loop_factorization(parse_expr(R, "x"));
    auto f = koszul_factorization(parse_expr(R, "x"), parse_expr(R, "x"));
    // a degree-1 map that does not anticommute with the differentials
    MfMorphism bad = zero_morphism(e, f, R->chi());
    bad.mat[0][0] = parse_expr(R, "x");
    CHECK_THROWS_AS(totalize({e, f}, {bad}), NotClosedError);
    // a chain whose composite is nonzero
    MfMorphism f0 = zero_morphism(shift(e), e, R->chi());
    f0.mat[0][0] = RingElem::constant(R, 1);
    REQUIRE(is_closed(f0));
    auto unshifted = twist(shift(e), R->deg_scale(R->chi(), 2));
    MfMorphism f1 = zero_morphism(e, unshifted, R->chi());
    f1.mat[0][0] = RingElem::constant(R, 1);
    REQUIRE(is_closed(f1));
    CHECK_THROWS_AS(totalize({shift(e), e, unshifted}, {f0, f1}), Error);
}

TEST_CASE("totalize of a single object returns it") {
    auto R = qx_odd();
    auto e = loop_factorization(parse_expr(R, "x"));
    auto t = totalize({e}, {});
    CHECK(t.gens == e.gens);
    CHECK(t.diff == e.diff);
}

TEST_CASE("tensor over a joint ring with anticommuting cross variables") {
    auto P = Ring::create({{"p", {1, {}}}});
    auto Q = Ring::create({{"q", {1, {}}}});
    auto J = kp_ring();
    auto lp = loop_factorization(parse_expr(P, "p"));
    auto lq = loop_factorization(parse_expr(Q, "q"));
    auto t = tensor(lp, lq, J);
    CHECK(t.rank() == 1);
    CHECK(t.diff[0][0] == parse_expr(J, "p + q"));
    CHECK(t.curvature == parse_expr(J, "p^2 + q^2"));
}

TEST_CASE("tensor with the unit object is the identity") {
    auto R = qx_odd();
    auto unit_ring = Ring::create({});
    MatrixFactorization unit;
    unit.ring = unit_ring;
    unit.gens = {unit_ring->zero_degree()};
    unit.diff = {{RingElem::zero(unit_ring)}};
    unit.curvature = RingElem::zero(unit_ring);
    auto e = koszul_factorization(parse_expr(R, "x"), parse_expr(R, "x"));
    auto t = tensor(e, unit, R);
    CHECK(t.gens == e.gens);
    CHECK(t.diff == e.diff);
    CHECK(t.curvature == e.curvature);
}

TEST_CASE("tensor rejects a joint ring violating the parity sign rule") {
    auto P = Ring::create({{"p", {1, {}}}});
    auto Q = Ring::create({{"q", {1, {}}}});
    auto C = Ring::create({{"p", {1, {}}}, {"q", {1, {}}}});  // commuting odd pair
    auto lp = loop_factorization(parse_expr(P, "p"));
    auto lq = loop_factorization(parse_expr(Q, "q"));
    CHECK_THROWS_AS(tensor(lp, lq, C), Error);
}

TEST_CASE("base change diagonalizes the Koszul object") {
    auto R = qx_odd();
    auto k = koszul_factorization(parse_expr(R, "x"), parse_expr(R, "x"));
    std::vector<std::vector<RingElem>> u = {
        {RingElem::constant(R, 1), RingElem::constant(R, 1)},
        {RingElem::constant(R, 1), RingElem::constant(R, Rational(-1))}};
    auto d = base_change(k, u);
    auto s = direct_sum(loop_factorization(parse_expr(R, "x")),
                        loop_factorization(parse_expr(R, "-x")));
    CHECK(d.gens == s.gens);
    CHECK(d.diff == s.diff);

    std::vector<std::vector<RingElem>> sing = {
        {RingElem::constant(R, 1), RingElem::constant(R, 1)},
        {RingElem::constant(R, 1), RingElem::constant(R, 1)}};
    CHECK_THROWS_AS(base_change(k, sing), NotInvertibleError);
}

TEST_CASE("find_iso certifies the Clifford splitting") {
    auto R = qx_odd();
    auto k = koszul_factorization(parse_expr(R, "x"), parse_expr(R, "x"));
    auto s = direct_sum(loop_factorization(parse_expr(R, "x")),
                        loop_factorization(parse_expr(R, "-x")));
    auto cert = find_iso(k, s, 6);
    REQUIRE(cert.has_value());
    CHECK(is_closed(cert->forward));
    CHECK(compose(cert->inverse, cert->forward).mat == identity_morphism(k).mat);
    CHECK(compose(cert->forward, cert->inverse).mat == identity_morphism(s).mat);
}

TEST_CASE("find_iso returns the identity on equal objects and fails across loops") {
    auto R = qx_odd();
    auto lp = loop_factorization(parse_expr(R, "x"));
    auto cert = find_iso(lp, lp, 4);
    REQUIRE(cert.has_value());
    CHECK(cert->forward.mat == identity_morphism(lp).mat);

    auto lm = loop_factorization(parse_expr(R, "-x"));
    CHECK_FALSE(find_iso(lp, lm, 8).has_value());
}

TEST_CASE("stripping trivial summands reduces the cone of a quasi-isomorphism") {
    auto R = qx_odd();
    auto t = trivial_mf(parse_expr(R, "x^2"));
    auto k = koszul_factorization(parse_expr(R, "x"), parse_expr(R, "x"));
    MfMorphism alpha = zero_morphism(t, k, R->zero_degree());
    alpha.mat[0][0] = parse_expr(R, "x");
    alpha.mat[1][1] = RingElem::constant(R, 1);
    auto c = cone(alpha);
    auto stripped = strip_trivial_summands(c);
    CHECK(stripped.removed_pairs == 1);
    CHECK(stripped.object.rank() == 2);
    bool iso = false;
    for (int tw = -2; tw <= 2 && !iso; ++tw)
        iso = find_iso(stripped.object, twist(k, R->deg_scale(R->chi(), tw)), 6).has_value();
    CHECK(iso);
}

TEST_CASE("ring map transport twists objects") {
    auto Q = Ring::create({{"q", {1, {}}}});
    auto rho = RingMap::create(Q, Q, {parse_expr(Q, "-q")});
    auto lp = loop_factorization(parse_expr(Q, "q"));
    auto moved = apply_ring_map(rho, lp);
    CHECK(moved.diff[0][0] == parse_expr(Q, "-q"));
}

TEST_CASE("morphisms with auxiliary degree are rejected") {
    auto O = orbifold_ring();
    auto k = koszul_factorization(parse_expr(O, "x"), parse_expr(O, "x"));
    MfMorphism m = zero_morphism(k, k, O->zero_degree());
    m.degree.aux = {1};
    CHECK_FALSE(validate_morphism(m).ok);
}

TEST_CASE("property: constructor outputs validate; tensor adds curvature") {
    std::mt19937 rng(424242);
    std::vector<RingPtr> rings = {qx_odd(), kp_ring(), cover_a_ring(), orbifold_ring()};
    for (const auto& R : rings) {
        for (int t = 0; t < 15; ++t) {
            auto e = random_object(R, rng);
            CHECK(validate_mf(e).ok);
            auto s = shift(e);
            CHECK(validate_mf(s).ok);
            CHECK(validate_mf(direct_sum(e, twist(e, R->chi()))).ok);
        }
    }
}
