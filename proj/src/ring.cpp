#include "gmf/ring.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <sstream>

namespace gmf {

std::string to_string(const DegreeVector& d) {
    std::ostringstream os;
    os << d.coh;
    if (!d.aux.empty()) {
        os << "|";
        for (size_t i = 0; i < d.aux.size(); ++i) {
            if (i) os << ",";
            os << d.aux[i];
        }
    }
    return os.str();
}

namespace {

bool valid_identifier(const std::string& s) {
    if (s.empty()) return false;
    if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    return true;
}

}  // namespace

RingPtr Ring::create(std::vector<VariableSpec> vars) {
    return create(std::move(vars), Options());
}

RingPtr Ring::create(std::vector<VariableSpec> vars, Options opts) {
    std::shared_ptr<Ring> r(new Ring());
    if (opts.coh_denominator < 1) throw Error("coh_denominator must be >= 1");
    r->coh_den_ = opts.coh_denominator;
    r->aux_moduli_ = opts.aux_moduli;
    for (int m : r->aux_moduli_)
        if (m < 0) throw Error("auxiliary modulus must be nonnegative");

    size_t n = vars.size();
    for (size_t i = 0; i < n; ++i) {
        auto& v = vars[i];
        if (!valid_identifier(v.name)) throw Error("bad variable name '" + v.name + "'");
        if (r->index_.count(v.name)) throw Error("duplicate variable '" + v.name + "'");
        if (v.degree.aux.size() != r->aux_moduli_.size())
            throw Error("variable '" + v.name + "' has wrong number of auxiliary weights");
        r->index_[v.name] = static_cast<int>(i);
    }
    r->vars_ = std::move(vars);
    for (auto& v : r->vars_) v.degree = r->reduce_degree(v.degree);

    r->sign_.assign(n, std::vector<int>(n, 1));
    for (const auto& [a, b, s] : opts.sign_overrides) {
        int i = r->var_index(a);
        int j = r->var_index(b);
        if (i < 0) throw UnknownVariableError(a);
        if (j < 0) throw UnknownVariableError(b);
        if (s != 1 && s != -1) throw Error("commutation sign must be +1 or -1");
        if (i == j && s != 1) throw Error("a variable always commutes with itself");
        r->sign_[static_cast<size_t>(i)][static_cast<size_t>(j)] = s;
        r->sign_[static_cast<size_t>(j)][static_cast<size_t>(i)] = s;
    }

    r->rewrites_.assign(n, std::nullopt);
    // Install rewrites in variable order so each right-hand side can be
    // normalized with the earlier rewrites already active.
    std::vector<std::pair<int, std::string>> rw;
    for (const auto& [name, text] : opts.rewrites) {
        int i = r->var_index(name);
        if (i < 0) throw UnknownVariableError(name);
        rw.emplace_back(i, text);
    }
    std::sort(rw.begin(), rw.end());
    for (const auto& [i, text] : rw) {
        if (r->rewrites_[static_cast<size_t>(i)])
            throw Error("duplicate rewrite for variable '" + r->vars_[static_cast<size_t>(i)].name + "'");
        RingElem rhs = parse_expr(r, text);
        for (const auto& [e, c] : rhs.data()) {
            (void)c;
            for (size_t j = static_cast<size_t>(i); j < n; ++j)
                if (e[j] != 0)
                    throw Error("rewrite for '" + r->vars_[static_cast<size_t>(i)].name +
                                "' mentions a variable that is not strictly earlier");
        }
        DegreeVector want = r->deg_add(r->vars_[static_cast<size_t>(i)].degree,
                                       r->vars_[static_cast<size_t>(i)].degree);
        if (!r->degree_of(rhs.data()).compatible_with(want))
            throw DegreeError("rewrite for '" + r->vars_[static_cast<size_t>(i)].name +
                              "' is not homogeneous of twice the variable degree");
        r->rewrites_[static_cast<size_t>(i)] = rhs.data();
        int m = 0;
        for (const auto& [e, c] : rhs.data()) {
            (void)c;
            int t = 0;
            for (int x : e) t += x;
            m = std::max(m, t);
        }
        r->max_rewrite_exp_ = std::max(r->max_rewrite_exp_, m);
    }
    return r;
}

int Ring::var_index(const std::string& name) const {
    auto it = index_.find(name);
    return it == index_.end() ? -1 : it->second;
}

int Ring::require_var(const std::string& name) const {
    int i = var_index(name);
    if (i < 0) throw UnknownVariableError(name);
    return i;
}

bool Ring::has_rewrites() const {
    for (const auto& r : rewrites_)
        if (r) return true;
    return false;
}

DegreeVector Ring::chi() const {
    DegreeVector d = zero_degree();
    d.coh = coh_den_;
    return d;
}

DegreeVector Ring::reduce_degree(DegreeVector d) const {
    if (d.aux.size() != aux_moduli_.size())
        throw Error("degree has wrong number of auxiliary entries");
    for (size_t i = 0; i < d.aux.size(); ++i) {
        int m = aux_moduli_[i];
        if (m > 0) d.aux[i] = ((d.aux[i] % m) + m) % m;
    }
    return d;
}

DegreeVector Ring::deg_add(const DegreeVector& a, const DegreeVector& b) const {
    DegreeVector d;
    d.coh = a.coh + b.coh;
    d.aux.resize(aux_moduli_.size());
    for (size_t i = 0; i < d.aux.size(); ++i) d.aux[i] = a.aux[i] + b.aux[i];
    return reduce_degree(std::move(d));
}

DegreeVector Ring::deg_sub(const DegreeVector& a, const DegreeVector& b) const {
    return deg_add(a, deg_neg(b));
}

DegreeVector Ring::deg_neg(const DegreeVector& a) const {
    DegreeVector d;
    d.coh = -a.coh;
    d.aux.resize(aux_moduli_.size());
    for (size_t i = 0; i < d.aux.size(); ++i) d.aux[i] = -a.aux[i];
    return reduce_degree(std::move(d));
}

DegreeVector Ring::deg_scale(const DegreeVector& a, long long k) const {
    DegreeVector d;
    d.coh = a.coh * k;
    d.aux.resize(aux_moduli_.size());
    for (size_t i = 0; i < d.aux.size(); ++i) d.aux[i] = a.aux[i] * static_cast<int>(k);
    return reduce_degree(std::move(d));
}

long long Ring::coh_integer(const DegreeVector& d) const {
    if (d.coh % coh_den_ != 0)
        throw NonIntegralDegreeError("cohomological degree " + std::to_string(d.coh) + "/" +
                                     std::to_string(coh_den_) + " is not an integer");
    return d.coh / coh_den_;
}

int Ring::coh_parity(const DegreeVector& d) const {
    long long k = coh_integer(d);
    return static_cast<int>(((k % 2) + 2) % 2);
}

DegreeVector Ring::monomial_degree(const Exponents& e) const {
    DegreeVector d = zero_degree();
    for (size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        d.coh += vars_[i].degree.coh * e[i];
        for (size_t k = 0; k < d.aux.size(); ++k) d.aux[k] += vars_[i].degree.aux[k] * e[i];
    }
    return reduce_degree(std::move(d));
}

PolyData Ring::add(const PolyData& a, const PolyData& b) const {
    PolyData out = a;
    for (const auto& [e, c] : b) {
        auto it = out.find(e);
        if (it == out.end()) {
            out.emplace(e, c);
        } else {
            it->second += c;
            if (it->second == 0) out.erase(it);
        }
    }
    return out;
}

PolyData Ring::sub(const PolyData& a, const PolyData& b) const { return add(a, negate(b)); }

PolyData Ring::negate(const PolyData& a) const {
    PolyData out = a;
    for (auto& [e, c] : out) c = -c;
    return out;
}

PolyData Ring::scale(const Rational& c, const PolyData& a) const {
    if (c == 0) return {};
    PolyData out = a;
    for (auto& [e, x] : out) x *= c;
    return out;
}

PolyData Ring::constant(const Rational& c) const {
    PolyData out;
    if (c != 0) out.emplace(Exponents(vars_.size(), 0), c);
    return out;
}

PolyData Ring::variable(int i, int exp) const {
    if (exp < 0) throw Error("negative exponent");
    PolyData out;
    if (exp == 0) return constant(1);
    Exponents e(vars_.size(), 0);
    e[static_cast<size_t>(i)] = exp;
    reduce_into(out, 1, std::move(e));
    return out;
}

// Moving the word `b` left past the word `a` transposes x_i (from a) with
// x_j (from b) exactly a_i*b_j times for every pair i > j.
static int crossing_sign(const std::vector<std::vector<int>>& sign, const Exponents& a,
                         const Exponents& b) {
    long long parity = 0;
    for (size_t i = 1; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < i; ++j) {
            if (b[j] == 0) continue;
            if (sign[i][j] < 0) parity += static_cast<long long>(a[i]) * b[j];
        }
    }
    return (parity % 2 == 0) ? 1 : -1;
}

void Ring::reduce_into(PolyData& out, Rational coeff, Exponents e) const {
    if (coeff == 0) return;
    int target = -1;
    for (int i = static_cast<int>(e.size()) - 1; i >= 0; --i) {
        if (rewrites_[static_cast<size_t>(i)] && e[static_cast<size_t>(i)] >= 2) {
            target = i;
            break;
        }
    }
    if (target < 0) {
        auto it = out.find(e);
        if (it == out.end()) {
            out.emplace(std::move(e), std::move(coeff));
        } else {
            it->second += coeff;
            if (it->second == 0) out.erase(it);
        }
        return;
    }
    size_t t = static_cast<size_t>(target);
    Exponents left = e;  // the prefix block up to and including x_t^{e_t-2}
    left[t] -= 2;
    for (size_t j = t + 1; j < left.size(); ++j) left[j] = 0;
    Exponents right(e.size(), 0);  // the suffix block of later variables
    for (size_t j = t + 1; j < e.size(); ++j) right[j] = e[j];
    for (const auto& [m, cm] : *rewrites_[t]) {
        // left * m * right; m uses variables before t only, so the final
        // merge with `right` crosses nothing.
        int s = crossing_sign(sign_, left, m);
        Exponents merged = left;
        for (size_t j = 0; j < merged.size(); ++j) merged[j] += m[j] + right[j];
        reduce_into(out, coeff * cm * s, std::move(merged));
    }
}

PolyData Ring::mul(const PolyData& a, const PolyData& b) const {
    PolyData out;
    for (const auto& [ea, ca] : a) {
        for (const auto& [eb, cb] : b) {
            int s = crossing_sign(sign_, ea, eb);
            Exponents e = ea;
            for (size_t j = 0; j < e.size(); ++j) e[j] += eb[j];
            reduce_into(out, ca * cb * s, std::move(e));
        }
    }
    return out;
}

PolyData Ring::normal_form(const Rational& coeff,
                           const std::vector<std::pair<int, int>>& word) const {
    PolyData acc = constant(coeff);
    for (const auto& [var, exp] : word) {
        if (var < 0 || var >= static_cast<int>(vars_.size()))
            throw UnknownVariableError("#" + std::to_string(var));
        if (acc.empty()) return {};
        acc = mul(acc, variable(var, exp));
    }
    return acc;
}

DegreeInfo Ring::degree_of(const PolyData& a) const {
    if (a.empty()) return DegreeInfo{DegKind::AnyDegree, zero_degree()};
    DegreeInfo info;
    info.kind = DegKind::Homogeneous;
    bool first = true;
    for (const auto& [e, c] : a) {
        (void)c;
        DegreeVector d = monomial_degree(e);
        if (first) {
            info.degree = d;
            first = false;
        } else if (!(d == info.degree)) {
            return DegreeInfo{DegKind::Inhomogeneous, zero_degree()};
        }
    }
    return info;
}

namespace {

int total_exp(const Exponents& e) {
    int t = 0;
    for (int x : e) t += x;
    return t;
}

// Ascending total exponent, ties broken reverse-lexicographically (the
// monomial with the larger exponent at the last differing variable sorts
// first).
bool degrevlex_less(const Exponents& a, const Exponents& b) {
    int ta = total_exp(a), tb = total_exp(b);
    if (ta != tb) return ta < tb;
    for (size_t i = a.size(); i-- > 0;) {
        if (a[i] != b[i]) return a[i] > b[i];
    }
    return false;
}

}  // namespace

std::vector<Exponents> Ring::graded_piece_basis(const DegreeVector& d, int bound) const {
    DegreeVector want = reduce_degree(d);
    {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        auto it = piece_cache_.find({want, bound});
        if (it != piece_cache_.end()) return it->second;
    }
    size_t n = vars_.size();
    // Pruning data: extreme cohomological degree reachable per unit of
    // remaining exponent budget using variables >= k.
    std::vector<long long> max_pos(n + 1, 0), min_neg(n + 1, 0);
    for (size_t k = n; k-- > 0;) {
        max_pos[k] = std::max(max_pos[k + 1], std::max(0LL, vars_[k].degree.coh));
        min_neg[k] = std::min(min_neg[k + 1], std::min(0LL, vars_[k].degree.coh));
    }
    std::vector<Exponents> result;
    Exponents cur(n, 0);
    auto rec = [&](auto&& self, size_t k, int budget, long long coh_acc) -> void {
        long long need = want.coh - coh_acc;
        if (k == n) {
            if (need == 0 && monomial_degree(cur) == want) result.push_back(cur);
            return;
        }
        if (need > max_pos[k] * budget || need < min_neg[k] * budget) return;
        int cap = rewrites_[k] ? std::min(budget, 1) : budget;
        for (int e = 0; e <= cap; ++e) {
            cur[k] = e;
            self(self, k + 1, budget - e, coh_acc + vars_[k].degree.coh * e);
        }
        cur[k] = 0;
    };
    rec(rec, 0, bound, 0);
    std::sort(result.begin(), result.end(), degrevlex_less);
    {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        piece_cache_.emplace(std::make_pair(want, bound), result);
    }
    return result;
}

bool Ring::piece_complete(const DegreeVector& d, int bound) const {
    int guard = std::max(8, 2 * max_rewrite_exp_ + 2);
    auto now = graded_piece_basis(d, bound);
    auto later = graded_piece_basis(d, bound + guard);
    if (now.size() != later.size()) return false;
    if (now.empty()) return true;
    // A nonzero monomial of degree zero on rewrite-free variables makes
    // every nonempty piece grow without bound.
    auto zero_monos = graded_piece_basis(zero_degree(), guard);
    for (const auto& m : zero_monos) {
        if (total_exp(m) == 0) continue;
        bool free_only = true;
        for (size_t i = 0; i < m.size(); ++i)
            if (m[i] != 0 && rewrites_[i]) free_only = false;
        if (free_only) return false;
    }
    return true;
}

std::string Ring::format(const PolyData& a) const {
    if (a.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : a) {
        Rational coeff = c;
        if (first) {
            if (coeff < 0) {
                os << "-";
                coeff = -coeff;
            }
        } else {
            os << (coeff < 0 ? " - " : " + ");
            if (coeff < 0) coeff = -coeff;
        }
        first = false;
        bool has_factors = total_exp(e) > 0;
        if (!has_factors) {
            os << to_string(coeff);
        } else {
            bool printed = false;
            if (coeff != 1) {
                os << to_string(coeff) << "*";
            }
            for (size_t i = 0; i < e.size(); ++i) {
                if (e[i] == 0) continue;
                if (printed) os << "*";
                os << vars_[i].name;
                if (e[i] > 1) os << "^" << e[i];
                printed = true;
            }
        }
    }
    return os.str();
}

std::string Ring::describe() const {
    std::ostringstream os;
    os << "ring(";
    for (size_t i = 0; i < vars_.size(); ++i) {
        if (i) os << ", ";
        os << vars_[i].name << ":" << to_string(vars_[i].degree);
        if (rewrites_[i]) os << "[sq]";
    }
    os << "; m=" << coh_den_;
    if (!aux_moduli_.empty()) {
        os << "; aux=";
        for (size_t i = 0; i < aux_moduli_.size(); ++i) {
            if (i) os << ",";
            os << aux_moduli_[i];
        }
    }
    os << ")";
    return os.str();
}

bool Ring::same_presentation(const Ring& other) const {
    if (coh_den_ != other.coh_den_ || aux_moduli_ != other.aux_moduli_) return false;
    if (vars_.size() != other.vars_.size()) return false;
    for (size_t i = 0; i < vars_.size(); ++i) {
        if (vars_[i].name != other.vars_[i].name) return false;
        if (!(vars_[i].degree == other.vars_[i].degree)) return false;
        if (rewrites_[i] != other.rewrites_[i]) return false;
    }
    return sign_ == other.sign_;
}

void check_same_ring(const RingPtr& a, const RingPtr& b) {
    if (a == b) return;
    if (a && b && a->same_presentation(*b)) return;
    throw RingMismatchError();
}

bool RingElem::is_constant() const {
    if (data_.empty()) return true;
    if (data_.size() != 1) return false;
    for (int x : data_.begin()->first)
        if (x != 0) return false;
    return true;
}

std::optional<Rational> RingElem::constant_value() const {
    if (data_.empty()) return Rational(0);
    if (data_.size() == 1) {
        int t = 0;
        for (int x : data_.begin()->first) t += x;
        if (t == 0) return data_.begin()->second;
    }
    return std::nullopt;
}

int RingElem::max_exponent() const {
    int m = 0;
    for (const auto& [e, c] : data_) {
        (void)c;
        int t = 0;
        for (int x : e) t += x;
        m = std::max(m, t);
    }
    return m;
}

RingElem operator+(const RingElem& a, const RingElem& b) {
    check_same_ring(a.ring_, b.ring_);
    return RingElem(a.ring_, a.ring_->add(a.data_, b.data_));
}

RingElem operator-(const RingElem& a, const RingElem& b) {
    check_same_ring(a.ring_, b.ring_);
    return RingElem(a.ring_, a.ring_->sub(a.data_, b.data_));
}

RingElem operator-(const RingElem& a) { return RingElem(a.ring_, a.ring_->negate(a.data_)); }

RingElem operator*(const RingElem& a, const RingElem& b) {
    check_same_ring(a.ring_, b.ring_);
    return RingElem(a.ring_, a.ring_->mul(a.data_, b.data_));
}

RingElem operator*(const Rational& c, const RingElem& a) {
    return RingElem(a.ring_, a.ring_->scale(c, a.data_));
}

bool operator==(const RingElem& a, const RingElem& b) {
    check_same_ring(a.ring_, b.ring_);
    return a.data_ == b.data_;
}

// ----- ring maps -----

RingMap RingMap::create(RingPtr source, RingPtr target, std::vector<RingElem> images) {
    if (images.size() != source->var_count())
        throw Error("ring map needs one image per source variable");
    if (source->aux_moduli() != target->aux_moduli() ||
        source->coh_denominator() != target->coh_denominator())
        throw Error("ring map requires matching grading shape");
    RingMap phi;
    phi.source_ = std::move(source);
    phi.target_ = std::move(target);
    for (auto& img : images) check_same_ring(img.ring(), phi.target_);
    phi.images_ = std::move(images);

    const auto& vars = phi.source_->variables();
    for (size_t i = 0; i < vars.size(); ++i) {
        if (!phi.images_[i].degree().compatible_with(vars[i].degree))
            throw DegreeError("image of '" + vars[i].name +
                              "' is not homogeneous of the variable's degree");
    }
    for (size_t i = 0; i < vars.size(); ++i) {
        for (size_t j = i + 1; j < vars.size(); ++j) {
            RingElem lhs = phi.images_[j] * phi.images_[i];
            RingElem rhs = Rational(phi.source_->sign(static_cast<int>(i), static_cast<int>(j))) *
                           (phi.images_[i] * phi.images_[j]);
            if (!(lhs == rhs))
                throw Error("images of '" + vars[i].name + "' and '" + vars[j].name +
                            "' violate the source commutation sign");
        }
        if (phi.source_->rewrite(static_cast<int>(i))) {
            RingElem rhs(phi.source_, *phi.source_->rewrite(static_cast<int>(i)));
            if (!(phi.images_[i] * phi.images_[i] == phi.apply(rhs)))
                throw Error("image of '" + vars[i].name + "' violates the square rewrite");
        }
    }
    return phi;
}

RingMap RingMap::by_name(const RingPtr& source, const RingPtr& target,
                         const std::vector<std::pair<std::string, std::string>>& images) {
    std::map<std::string, std::string> given(images.begin(), images.end());
    std::vector<RingElem> imgs;
    for (const auto& v : source->variables()) {
        auto it = given.find(v.name);
        if (it != given.end())
            imgs.push_back(parse_expr(target, it->second));
        else
            imgs.push_back(RingElem::var(target, v.name));
    }
    return create(source, target, std::move(imgs));
}

RingElem RingMap::apply(const RingElem& e) const {
    check_same_ring(e.ring(), source_);
    RingElem out = RingElem::zero(target_);
    for (const auto& [exps, c] : e.data()) {
        RingElem term = RingElem::constant(target_, c);
        for (size_t i = 0; i < exps.size(); ++i) {
            for (int k = 0; k < exps[i]; ++k) term = term * images_[i];
        }
        out = out + term;
    }
    return out;
}

RingMap inclusion_map(const RingPtr& source, const RingPtr& target) {
    std::vector<RingElem> images;
    for (const auto& v : source->variables()) images.push_back(RingElem::var(target, v.name));
    return RingMap::create(source, target, std::move(images));
}

}  // namespace gmf
