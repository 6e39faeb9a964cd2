#pragma once

#include "gmf/degree.hpp"
#include "gmf/error.hpp"
#include "gmf/rational.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace gmf {

class Ring;
using RingPtr = std::shared_ptr<const Ring>;

struct VariableSpec {
    std::string name;
    DegreeVector degree;
};

// Normal-ordered exponent vector, one entry per ring variable. Exponents of
// variables carrying a square rewrite stay below 2.
using Exponents = std::vector<int>;

// Canonical element data: normal-form monomials mapped to nonzero rationals.
// Equality of elements is equality of these maps.
using PolyData = std::map<Exponents, Rational>;

enum class DegKind { Homogeneous, AnyDegree, Inhomogeneous };

struct DegreeInfo {
    DegKind kind = DegKind::AnyDegree;
    DegreeVector degree;  // meaningful when Homogeneous
    bool compatible_with(const DegreeVector& d) const {
        return kind == DegKind::AnyDegree ||
               (kind == DegKind::Homogeneous && degree == d);
    }
};

// A presentation of a graded polynomial ring whose variables commute up to
// signs and may satisfy one square rewrite x^2 -> e each, with e supported
// on strictly earlier variables. Instances are immutable and shared.
class Ring {
  public:
    struct Options {
        std::vector<int> aux_moduli;
        long long coh_denominator = 1;
        // (name, name, sign) with sign in {+1,-1}; defaults to +1 everywhere.
        std::vector<std::tuple<std::string, std::string, int>> sign_overrides;
        // variable name -> expression text for x^2 (parsed during creation)
        std::vector<std::pair<std::string, std::string>> rewrites;
    };

    static RingPtr create(std::vector<VariableSpec> vars, Options opts);
    static RingPtr create(std::vector<VariableSpec> vars);

    const std::vector<VariableSpec>& variables() const { return vars_; }
    size_t var_count() const { return vars_.size(); }
    int var_index(const std::string& name) const;  // -1 when absent
    int require_var(const std::string& name) const;
    int sign(int i, int j) const { return sign_[static_cast<size_t>(i)][static_cast<size_t>(j)]; }
    const std::optional<PolyData>& rewrite(int i) const { return rewrites_[static_cast<size_t>(i)]; }
    bool has_rewrites() const;
    const std::vector<int>& aux_moduli() const { return aux_moduli_; }
    long long coh_denominator() const { return coh_den_; }

    // ----- degrees -----
    DegreeVector zero_degree() const { return degree_zero(aux_moduli_.size()); }
    DegreeVector chi() const;  // cohomological degree 1 in scenario units
    DegreeVector reduce_degree(DegreeVector d) const;
    DegreeVector deg_add(const DegreeVector& a, const DegreeVector& b) const;
    DegreeVector deg_sub(const DegreeVector& a, const DegreeVector& b) const;
    DegreeVector deg_neg(const DegreeVector& a) const;
    DegreeVector deg_scale(const DegreeVector& a, long long k) const;
    bool coh_integral(const DegreeVector& d) const { return d.coh % coh_den_ == 0; }
    long long coh_integer(const DegreeVector& d) const;  // throws when fractional
    int coh_parity(const DegreeVector& d) const;         // throws when fractional

    // ----- element arithmetic on raw data -----
    DegreeVector monomial_degree(const Exponents& e) const;
    PolyData add(const PolyData& a, const PolyData& b) const;
    PolyData sub(const PolyData& a, const PolyData& b) const;
    PolyData negate(const PolyData& a) const;
    PolyData scale(const Rational& c, const PolyData& a) const;
    PolyData mul(const PolyData& a, const PolyData& b) const;
    PolyData constant(const Rational& c) const;
    PolyData variable(int i, int exp = 1) const;

    // Normal form of a word of (variable, exponent) factors times a
    // coefficient: bubble factors into ring order accumulating signs, then
    // rewrite squares away.
    PolyData normal_form(const Rational& coeff,
                         const std::vector<std::pair<int, int>>& word) const;

    DegreeInfo degree_of(const PolyData& a) const;

    // All normal-form monomials of degree d with total exponent <= bound,
    // sorted by total exponent and then reverse-lexicographically.
    std::vector<Exponents> graded_piece_basis(const DegreeVector& d, int bound) const;

    // True when graded_piece_basis(d, bound) provably lists the entire
    // degree piece (raising the bound cannot add monomials).
    bool piece_complete(const DegreeVector& d, int bound) const;

    std::string format(const PolyData& a) const;  // parseable pretty-printer
    std::string describe() const;

    bool same_presentation(const Ring& other) const;

  private:
    Ring() = default;
    void reduce_into(PolyData& out, Rational coeff, Exponents e) const;

    std::vector<VariableSpec> vars_;
    std::map<std::string, int> index_;
    std::vector<std::vector<int>> sign_;
    std::vector<std::optional<PolyData>> rewrites_;
    std::vector<int> aux_moduli_;
    long long coh_den_ = 1;
    int max_rewrite_exp_ = 0;  // largest monomial exponent on a rewrite rhs

    mutable std::mutex cache_mutex_;
    mutable std::map<std::pair<DegreeVector, int>, std::vector<Exponents>> piece_cache_;
};

// An element tied to its ring. All operations check ring identity.
class RingElem {
  public:
    RingElem() = default;
    RingElem(RingPtr ring, PolyData data) : ring_(std::move(ring)), data_(std::move(data)) {}

    static RingElem zero(const RingPtr& ring) { return RingElem(ring, {}); }
    static RingElem constant(const RingPtr& ring, const Rational& c) {
        return RingElem(ring, ring->constant(c));
    }
    static RingElem var(const RingPtr& ring, const std::string& name, int exp = 1) {
        return RingElem(ring, ring->variable(ring->require_var(name), exp));
    }

    const RingPtr& ring() const { return ring_; }
    const PolyData& data() const { return data_; }
    bool is_zero() const { return data_.empty(); }
    bool is_constant() const;
    std::optional<Rational> constant_value() const;  // nullopt unless constant
    int max_exponent() const;  // largest total exponent among monomials

    DegreeInfo degree() const { return ring_->degree_of(data_); }
    std::string str() const { return ring_->format(data_); }

    friend RingElem operator+(const RingElem& a, const RingElem& b);
    friend RingElem operator-(const RingElem& a, const RingElem& b);
    friend RingElem operator-(const RingElem& a);
    friend RingElem operator*(const RingElem& a, const RingElem& b);
    friend RingElem operator*(const Rational& c, const RingElem& a);
    friend bool operator==(const RingElem& a, const RingElem& b);
    friend bool operator!=(const RingElem& a, const RingElem& b) { return !(a == b); }

  private:
    RingPtr ring_;
    PolyData data_;
};

void check_same_ring(const RingPtr& a, const RingPtr& b);

// Expression parser for the grammar: rationals a or a/b, variables,
// + - * ^ with nonnegative integer exponents, parentheses. Juxtaposition is
// not multiplication; factor order is preserved before normalization.
RingElem parse_expr(const RingPtr& ring, const std::string& text);

// A graded ring homomorphism given by one image per source variable.
class RingMap {
  public:
    static RingMap create(RingPtr source, RingPtr target, std::vector<RingElem> images);

    // Convenience: match variables by name; names absent from `images` map
    // to the same-named target variable.
    static RingMap by_name(const RingPtr& source, const RingPtr& target,
                           const std::vector<std::pair<std::string, std::string>>& images);

    const RingPtr& source() const { return source_; }
    const RingPtr& target() const { return target_; }
    RingElem apply(const RingElem& e) const;

  private:
    RingMap() = default;
    RingPtr source_, target_;
    std::vector<RingElem> images_;
};

// Embeds a ring into a larger one matching variables by name.
RingMap inclusion_map(const RingPtr& source, const RingPtr& target);

}  // namespace gmf
