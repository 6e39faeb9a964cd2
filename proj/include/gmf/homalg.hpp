#pragma once

#include "gmf/linalg.hpp"
#include "gmf/mf.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gmf {

// One basis element of a morphism component: the single-entry map
// gen_src -> gen_tgt * monomial.
struct HomBasisElem {
    int tgt_gen = 0;
    int src_gen = 0;
    Exponents mono;
};

// The aux-degree-0 morphism complex Hom(E, F) over a window of integral
// cohomological degrees, truncated by monomial exponent. Per-degree caps
// grow along the window so that differentials never escape the truncation:
// every matrix column is the exact image of its basis element.
struct TruncatedComplex {
    MatrixFactorization e, f;
    int lo = 0, hi = 0;
    int poly_bound = 0;
    std::vector<std::vector<HomBasisElem>> basis;  // degree n at index n - lo
    std::vector<int> cap;                          // exponent cap used per degree
    std::vector<bool> complete;                    // full degree piece enumerated
    std::vector<QMat> d;                           // d[k]: C^{lo+k} -> C^{lo+k+1}

    size_t dim(int n) const { return basis[static_cast<size_t>(n - lo)].size(); }
};

TruncatedComplex hom_complex(const MatrixFactorization& e, const MatrixFactorization& f,
                             int lo, int hi, int poly_bound);

MfMorphism morphism_from_vector(const TruncatedComplex& c, int degree, const QVec& coords);
QVec vector_from_morphism(const TruncatedComplex& c, int degree, const MfMorphism& m);

struct ExtTable {
    int lo = 0, hi = 0;
    int poly_bound = 0;
    std::map<int, int> dims;       // interior degrees lo < n < hi
    std::map<int, bool> trusted;   // truncation provably did not interfere
};

ExtTable cohomology_dims(const TruncatedComplex& c);

struct ContractionCertificate {
    MfMorphism h;  // degree -1 with dh + hd = id, verified exactly
};

std::optional<ContractionCertificate> find_contraction(const MatrixFactorization& e,
                                                       int poly_bound);

// Contractibility of the cone certifies that a closed degree-0 morphism is
// a quasi-isomorphism.
std::optional<ContractionCertificate> is_quasi_iso(const MfMorphism& phi, int poly_bound);

// Underlying-module exactness of a sequence of degree-1 closed maps, checked
// degreewise (over every auxiliary sector) by exact rank computations.
struct ExactnessPosition {
    int index = 0;                // exactness at objects[index]
    DegreeVector degree;         // module degree of the piece
    bool exact = false;          // every truncated cocycle is a boundary
    int certified_exp = -1;      // cocycles supported below this exponent are boundaries
    int piece_dim = 0;
};

struct ExactnessReport {
    bool composites_zero = true;
    bool pass = true;  // exact at every checked position within the margin
    int margin = 0;
    std::vector<ExactnessPosition> positions;
    std::string summary() const;
};

ExactnessReport check_exact_sequence(const std::vector<MatrixFactorization>& objects,
                                     const std::vector<MfMorphism>& maps, int lo, int hi,
                                     int poly_bound);

// Ext algebra of End(E): chosen cocycle representatives per degree and the
// structure constants of composition on them.
struct ExtAlgebra {
    TruncatedComplex complex;
    std::map<int, std::vector<MfMorphism>> reps;       // degree -> chosen representatives
    std::map<int, std::vector<QVec>> rep_vectors;      // coordinates of the reps
    // (deg_a, idx_a, deg_b, idx_b) -> coefficients over reps at deg_a+deg_b;
    // absent when the product degree leaves the window.
    std::map<std::tuple<int, int, int, int>, QVec> products;
};

ExtAlgebra ext_algebra(const MatrixFactorization& e, int lo, int hi, int poly_bound);

// Reduce the composition of two chosen classes modulo coboundaries; the
// returned coordinates are over the representatives at the product degree.
std::optional<QVec> ext_product(const ExtAlgebra& alg, int deg_a, int idx_a, int deg_b,
                                int idx_b);
std::optional<QVec> ext_product_raw(const ExtAlgebra& alg, int deg_a, int idx_a, int deg_b,
                                    int idx_b);

// Express a morphism as a combination of the chosen representatives modulo
// coboundaries; nullopt when the system is unsolvable at this truncation.
std::optional<QVec> reduce_in_degree(const ExtAlgebra& alg, int degree, const MfMorphism& m);

// Convenience for scenario checks: is the algebra isomorphic to
// Q[t]/t^height with |t| = gen_degree (dims one in 0..height-1, generator
// powers nonvanishing, t^height = 0)?
struct TruncatedPolyCheck {
    bool ok = false;
    std::string detail;
};
TruncatedPolyCheck check_truncated_polynomial_algebra(const MatrixFactorization& e,
                                                      int gen_degree, int height, int lo,
                                                      int hi, int poly_bound);

}  // namespace gmf
