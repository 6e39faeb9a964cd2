#pragma once

#include "gmf/ring.hpp"

#include <optional>
#include <string>
#include <vector>

namespace gmf {

// A free graded module with a curved differential. Coordinates are on the
// right of generators (right-module convention), so the image of gen_j is
// sum_i gen_i * diff[i][j], compositions multiply entries left factor
// first, and an entry diff[i][j] is homogeneous of degree
// gens[j] + chi - gens[i].
struct MatrixFactorization {
    RingPtr ring;
    std::vector<DegreeVector> gens;
    std::vector<std::vector<RingElem>> diff;
    RingElem curvature;

    size_t rank() const { return gens.size(); }
};

// A homogeneous morphism of matrix factorizations. The degree has zero
// auxiliary part; entry mat[i][j] is homogeneous of degree
// source.gens[j] + degree - target.gens[i].
struct MfMorphism {
    MatrixFactorization source, target;
    std::vector<std::vector<RingElem>> mat;
    DegreeVector degree;
};

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> violations;
};

ValidationReport validate_mf(const MatrixFactorization& e);
void require_valid(const MatrixFactorization& e);  // throws on violation

ValidationReport validate_morphism(const MfMorphism& f);

MatrixFactorization zero_object(const RingPtr& ring, const RingElem& curvature);

// Rank-one object with differential f * id; needs f homogeneous of
// cohomological degree 1 with zero auxiliary weight.
MatrixFactorization loop_factorization(const RingElem& f, const DegreeVector& gen_degree);
MatrixFactorization loop_factorization(const RingElem& f);

// Rank-two object [[0, f], [g, 0]] of curvature f*g.
MatrixFactorization koszul_factorization(const RingElem& f, const RingElem& g,
                                         const DegreeVector& base_degree);
MatrixFactorization koszul_factorization(const RingElem& f, const RingElem& g);

MatrixFactorization trivial_mf(const RingElem& w);
MfMorphism standard_contraction(const RingElem& w);  // h with dh + hd = 1 on trivial_mf(w)

MatrixFactorization shift(const MatrixFactorization& e);
MatrixFactorization twist(const MatrixFactorization& e, const DegreeVector& t);
MatrixFactorization direct_sum(const MatrixFactorization& a, const MatrixFactorization& b);

MfMorphism identity_morphism(const MatrixFactorization& e);
MfMorphism zero_morphism(const MatrixFactorization& source, const MatrixFactorization& target,
                         const DegreeVector& degree);
MfMorphism compose(const MfMorphism& g, const MfMorphism& f);  // g after f
MfMorphism morphism_add(const MfMorphism& a, const MfMorphism& b);
MfMorphism morphism_scale(const Rational& c, const MfMorphism& a);

// d_F o f - (-1)^{|f|} f o d_E; |f| must be integral.
MfMorphism hom_differential(const MfMorphism& f);
bool is_closed(const MfMorphism& f);

MatrixFactorization cone(const MfMorphism& phi);

// Totalization of E_0 -> E_1 -> ... with degree-1 closed connecting maps
// (anticommutation d f = -f d and f f = 0 are checked exactly).
MatrixFactorization totalize(const std::vector<MatrixFactorization>& objects,
                             const std::vector<MfMorphism>& maps);

// Signed tensor product over a joint ring containing both variable sets,
// where cross-variables commute up to (-1)^{parity * parity}.
MatrixFactorization tensor(const MatrixFactorization& e, const MatrixFactorization& f,
                           const RingPtr& joint);

MatrixFactorization base_change(const MatrixFactorization& e,
                                const std::vector<std::vector<RingElem>>& u);

struct IsoCertificate {
    MfMorphism forward, inverse;
};

// Searches for a closed degree-0 isomorphism with exact two-sided inverse
// over monomials up to the bound. Absence of a certificate is one-sided.
std::optional<IsoCertificate> find_iso(const MatrixFactorization& e,
                                       const MatrixFactorization& f, int poly_bound);

struct StripResult {
    MatrixFactorization object;
    int removed_pairs = 0;
};

// Splits off contractible rank-two blocks wherever the differential has an
// invertible constant entry.
StripResult strip_trivial_summands(const MatrixFactorization& e);

// Transport along a ring map (entries and curvature mapped, degrees kept).
MatrixFactorization apply_ring_map(const RingMap& phi, const MatrixFactorization& e);

std::string describe(const MatrixFactorization& e);

}  // namespace gmf
