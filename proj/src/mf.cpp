#include "gmf/mf.hpp"

#include "gmf/linalg.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <sstream>
#include <tuple>

namespace gmf {

namespace {

using Matrix = std::vector<std::vector<RingElem>>;

Matrix zero_matrix(const RingPtr& ring, size_t rows, size_t cols) {
    return Matrix(rows, std::vector<RingElem>(cols, RingElem::zero(ring)));
}

Matrix mat_mul(const Matrix& a, const Matrix& b) {
    size_t rows = a.size();
    size_t inner = b.size();
    size_t cols = inner ? b[0].size() : 0;
    if (rows == 0 || cols == 0) return Matrix(rows, std::vector<RingElem>(cols));
    Matrix out;
    out.reserve(rows);
    for (size_t i = 0; i < rows; ++i) {
        std::vector<RingElem> row;
        row.reserve(cols);
        for (size_t j = 0; j < cols; ++j) {
            RingElem acc = RingElem::zero(a[i][0].ring());
            for (size_t r = 0; r < inner; ++r) acc = acc + a[i][r] * b[r][j];
            row.push_back(std::move(acc));
        }
        out.push_back(std::move(row));
    }
    return out;
}

Matrix mat_add(const Matrix& a, const Matrix& b) {
    Matrix out = a;
    for (size_t i = 0; i < out.size(); ++i)
        for (size_t j = 0; j < out[i].size(); ++j) out[i][j] = out[i][j] + b[i][j];
    return out;
}

Matrix mat_neg(const Matrix& a) {
    Matrix out = a;
    for (auto& row : out)
        for (auto& x : row) x = -x;
    return out;
}

bool mat_is_zero(const Matrix& a) {
    for (const auto& row : a)
        for (const auto& x : row)
            if (!x.is_zero()) return false;
    return true;
}

DegreeVector entry_degree(const Ring& ring, const DegreeVector& src_gen,
                          const DegreeVector& tgt_gen, const DegreeVector& map_degree) {
    return ring.deg_sub(ring.deg_add(src_gen, map_degree), tgt_gen);
}

}  // namespace

ValidationReport validate_mf(const MatrixFactorization& e) {
    ValidationReport rep;
    auto bad = [&](const std::string& msg) {
        rep.ok = false;
        rep.violations.push_back(msg);
    };
    size_t n = e.rank();
    if (e.diff.size() != n) {
        bad("differential is not square of the generator count");
        return rep;
    }
    for (const auto& row : e.diff)
        if (row.size() != n) {
            bad("differential is not square");
            return rep;
        }
    const Ring& R = *e.ring;
    DegreeVector two_chi = R.deg_scale(R.chi(), 2);
    if (!e.curvature.degree().compatible_with(two_chi))
        bad("curvature is not homogeneous of cohomological degree 2");
    for (size_t v = 0; v < R.var_count(); ++v) {
        RingElem xv(e.ring, R.variable(static_cast<int>(v)));
        if (!(e.curvature * xv == xv * e.curvature)) {
            bad("curvature is not a central element");
            break;
        }
    }
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) {
            check_same_ring(e.diff[i][j].ring(), e.ring);
            DegreeVector want = entry_degree(R, e.gens[j], e.gens[i], R.chi());
            if (!e.diff[i][j].degree().compatible_with(want))
                bad("entry d[" + std::to_string(i) + "][" + std::to_string(j) +
                    "] is not homogeneous of the required degree");
        }
    }
    if (n > 0) {
        Matrix sq = mat_mul(e.diff, e.diff);
        for (size_t i = 0; i < n; ++i) {
            for (size_t j = 0; j < n; ++j) {
                RingElem want = (i == j) ? e.curvature : RingElem::zero(e.ring);
                if (!(sq[i][j] == want))
                    bad("d^2[" + std::to_string(i) + "][" + std::to_string(j) +
                        "] != w*id: got " + sq[i][j].str());
            }
        }
    }
    return rep;
}

void require_valid(const MatrixFactorization& e) {
    auto rep = validate_mf(e);
    if (!rep.ok) {
        std::string msg = "invalid matrix factorization:";
        for (const auto& v : rep.violations) msg += "\n  " + v;
        throw Error(msg);
    }
}

ValidationReport validate_morphism(const MfMorphism& f) {
    ValidationReport rep;
    auto bad = [&](const std::string& msg) {
        rep.ok = false;
        rep.violations.push_back(msg);
    };
    for (int a : f.degree.aux)
        if (a != 0) bad("morphism has nonzero auxiliary degree");
    if (f.mat.size() != f.target.rank()) bad("morphism row count mismatch");
    const Ring& R = *f.source.ring;
    for (size_t i = 0; i < f.mat.size(); ++i) {
        if (f.mat[i].size() != f.source.rank()) {
            bad("morphism column count mismatch");
            break;
        }
        for (size_t j = 0; j < f.mat[i].size(); ++j) {
            DegreeVector want = entry_degree(R, f.source.gens[j], f.target.gens[i], f.degree);
            if (!f.mat[i][j].degree().compatible_with(want))
                bad("morphism entry [" + std::to_string(i) + "][" + std::to_string(j) +
                    "] is not homogeneous of the required degree");
        }
    }
    return rep;
}

MatrixFactorization zero_object(const RingPtr& ring, const RingElem& curvature) {
    return MatrixFactorization{ring, {}, {}, curvature};
}

MatrixFactorization loop_factorization(const RingElem& f, const DegreeVector& gen_degree) {
    const RingPtr& R = f.ring();
    if (!f.degree().compatible_with(R->chi()))
        throw DegreeError("loop factorization needs f of cohomological degree 1 "
                          "with zero auxiliary weight");
    MatrixFactorization e;
    e.ring = R;
    e.gens = {R->reduce_degree(gen_degree)};
    e.diff = {{f}};
    e.curvature = f * f;
    require_valid(e);
    return e;
}

MatrixFactorization loop_factorization(const RingElem& f) {
    return loop_factorization(f, f.ring()->zero_degree());
}

MatrixFactorization koszul_factorization(const RingElem& f, const RingElem& g,
                                         const DegreeVector& base_degree) {
    check_same_ring(f.ring(), g.ring());
    const RingPtr& R = f.ring();
    RingElem w = f * g;
    if (!w.degree().compatible_with(R->deg_scale(R->chi(), 2)))
        throw DegreeError("koszul factorization needs f*g of cohomological degree 2");
    DegreeVector dg;
    auto gd = g.degree();
    if (gd.kind == DegKind::Homogeneous) {
        dg = gd.degree;
    } else if (gd.kind == DegKind::AnyDegree) {
        // degenerate g = 0: place the second generator via f instead
        auto fd = f.degree();
        if (fd.kind != DegKind::Homogeneous)
            throw DegreeError("koszul factorization needs homogeneous f, g");
        dg = R->deg_sub(R->deg_scale(R->chi(), 2), fd.degree);
    } else {
        throw DegreeError("koszul factorization needs homogeneous f, g");
    }
    MatrixFactorization e;
    e.ring = R;
    DegreeVector d0 = R->reduce_degree(base_degree);
    e.gens = {d0, R->deg_sub(R->deg_add(d0, R->chi()), dg)};
    e.diff = {{RingElem::zero(R), f}, {g, RingElem::zero(R)}};
    e.curvature = w;
    require_valid(e);
    return e;
}

MatrixFactorization koszul_factorization(const RingElem& f, const RingElem& g) {
    return koszul_factorization(f, g, f.ring()->zero_degree());
}

MatrixFactorization trivial_mf(const RingElem& w) {
    const RingPtr& R = w.ring();
    return koszul_factorization(RingElem::constant(R, 1), w, R->chi());
}

MfMorphism standard_contraction(const RingElem& w) {
    const RingPtr& R = w.ring();
    MatrixFactorization t = trivial_mf(w);
    MfMorphism h;
    h.source = t;
    h.target = t;
    h.degree = R->deg_neg(R->chi());
    h.mat = zero_matrix(R, 2, 2);
    h.mat[1][0] = RingElem::constant(R, 1);
    return h;
}

// Shift [1]: negate the differential and move every generator one step.
// With coordinates on the right of generators, moving a generator "up" means
// subtracting chi from its stored degree; the entry-degree rule is invariant
// under any uniform twist, and cone blocks stay homogeneous exactly with
// this orientation.
MatrixFactorization shift(const MatrixFactorization& e) {
    MatrixFactorization s = e;
    for (auto& g : s.gens) g = e.ring->deg_sub(g, e.ring->chi());
    s.diff = mat_neg(s.diff);
    return s;
}

MatrixFactorization twist(const MatrixFactorization& e, const DegreeVector& t) {
    MatrixFactorization s = e;
    for (auto& g : s.gens) g = e.ring->deg_add(g, t);
    return s;
}

MatrixFactorization direct_sum(const MatrixFactorization& a, const MatrixFactorization& b) {
    check_same_ring(a.ring, b.ring);
    if (!(a.curvature == b.curvature))
        throw CurvatureMismatchError("direct sum needs equal curvature");
    MatrixFactorization s;
    s.ring = a.ring;
    s.gens = a.gens;
    s.gens.insert(s.gens.end(), b.gens.begin(), b.gens.end());
    size_t n = a.rank(), m = b.rank();
    s.diff = zero_matrix(a.ring, n + m, n + m);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) s.diff[i][j] = a.diff[i][j];
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < m; ++j) s.diff[n + i][n + j] = b.diff[i][j];
    s.curvature = a.curvature;
    return s;
}

MfMorphism identity_morphism(const MatrixFactorization& e) {
    MfMorphism f;
    f.source = e;
    f.target = e;
    f.degree = e.ring->zero_degree();
    f.mat = zero_matrix(e.ring, e.rank(), e.rank());
    for (size_t i = 0; i < e.rank(); ++i) f.mat[i][i] = RingElem::constant(e.ring, 1);
    return f;
}

MfMorphism zero_morphism(const MatrixFactorization& source, const MatrixFactorization& target,
                         const DegreeVector& degree) {
    check_same_ring(source.ring, target.ring);
    MfMorphism f;
    f.source = source;
    f.target = target;
    f.degree = source.ring->reduce_degree(degree);
    f.mat = zero_matrix(source.ring, target.rank(), source.rank());
    return f;
}

MfMorphism compose(const MfMorphism& g, const MfMorphism& f) {
    check_same_ring(g.source.ring, f.target.ring);
    MfMorphism out;
    out.source = f.source;
    out.target = g.target;
    out.degree = f.source.ring->deg_add(g.degree, f.degree);
    out.mat = mat_mul(g.mat, f.mat);
    return out;
}

MfMorphism morphism_add(const MfMorphism& a, const MfMorphism& b) {
    if (!(a.degree == b.degree)) throw DegreeError("morphism sum needs equal degrees");
    MfMorphism out = a;
    out.mat = mat_add(a.mat, b.mat);
    return out;
}

MfMorphism morphism_scale(const Rational& c, const MfMorphism& a) {
    MfMorphism out = a;
    for (auto& row : out.mat)
        for (auto& x : row) x = c * x;
    return out;
}

MfMorphism hom_differential(const MfMorphism& f) {
    const Ring& R = *f.source.ring;
    int parity = R.coh_parity(f.degree);  // throws when fractional
    MfMorphism out;
    out.source = f.source;
    out.target = f.target;
    out.degree = R.deg_add(f.degree, R.chi());
    Matrix df = mat_mul(f.target.diff, f.mat);
    Matrix fd = mat_mul(f.mat, f.source.diff);
    out.mat = (parity == 0) ? mat_add(df, mat_neg(fd)) : mat_add(df, fd);
    return out;
}

bool is_closed(const MfMorphism& f) { return mat_is_zero(hom_differential(f).mat); }

MatrixFactorization cone(const MfMorphism& phi) {
    if (!(phi.degree == phi.source.ring->zero_degree()))
        throw DegreeError("cone needs a degree-0 morphism");
    if (!(phi.source.curvature == phi.target.curvature))
        throw CurvatureMismatchError("cone needs equal curvature");
    if (!is_closed(phi)) throw NotClosedError("cone needs a closed morphism");
    const MatrixFactorization& e = phi.source;
    const MatrixFactorization& f = phi.target;
    MatrixFactorization c;
    c.ring = e.ring;
    MatrixFactorization se = shift(e);
    c.gens = se.gens;
    c.gens.insert(c.gens.end(), f.gens.begin(), f.gens.end());
    size_t n = e.rank(), m = f.rank();
    c.diff = zero_matrix(e.ring, n + m, n + m);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) c.diff[i][j] = se.diff[i][j];
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < m; ++j) c.diff[n + i][n + j] = f.diff[i][j];
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < n; ++j) c.diff[n + i][j] = phi.mat[i][j];
    c.curvature = e.curvature;
    return c;
}

MatrixFactorization totalize(const std::vector<MatrixFactorization>& objects,
                             const std::vector<MfMorphism>& maps) {
    if (objects.empty()) throw Error("totalize needs at least one object");
    if (maps.size() + 1 != objects.size())
        throw Error("totalize needs exactly one connecting map per adjacent pair");
    const RingPtr& R = objects[0].ring;
    for (const auto& o : objects) {
        check_same_ring(o.ring, R);
        if (!(o.curvature == objects[0].curvature))
            throw CurvatureMismatchError("totalize needs a common curvature");
    }
    for (size_t k = 0; k < maps.size(); ++k) {
        const MfMorphism& f = maps[k];
        if (!(f.degree == R->chi()))
            throw DegreeError("totalize connecting maps must have degree 1");
        auto rep = validate_morphism(f);
        if (!rep.ok) throw Error("totalize map " + std::to_string(k) + ": " + rep.violations[0]);
        // closed as a degree-1 morphism means d f + f d = 0
        if (!is_closed(f))
            throw NotClosedError("totalize map " + std::to_string(k) +
                                 " does not anticommute with the differentials");
        if (k + 1 < maps.size()) {
            if (!mat_is_zero(compose(maps[k + 1], f).mat))
                throw Error("totalize maps " + std::to_string(k) + "," + std::to_string(k + 1) +
                            " do not compose to zero");
        }
    }
    std::vector<size_t> offset(objects.size() + 1, 0);
    for (size_t k = 0; k < objects.size(); ++k) offset[k + 1] = offset[k] + objects[k].rank();
    size_t n = offset.back();
    MatrixFactorization t;
    t.ring = R;
    t.curvature = objects[0].curvature;
    t.diff = zero_matrix(R, n, n);
    for (const auto& o : objects) t.gens.insert(t.gens.end(), o.gens.begin(), o.gens.end());
    for (size_t k = 0; k < objects.size(); ++k) {
        const auto& o = objects[k];
        for (size_t i = 0; i < o.rank(); ++i)
            for (size_t j = 0; j < o.rank(); ++j)
                t.diff[offset[k] + i][offset[k] + j] = o.diff[i][j];
        if (k + 1 < objects.size()) {
            const auto& f = maps[k];
            for (size_t i = 0; i < objects[k + 1].rank(); ++i)
                for (size_t j = 0; j < o.rank(); ++j)
                    t.diff[offset[k + 1] + i][offset[k] + j] = f.mat[i][j];
        }
    }
    require_valid(t);
    return t;
}

MatrixFactorization tensor(const MatrixFactorization& e, const MatrixFactorization& f,
                           const RingPtr& joint) {
    const Ring& R1 = *e.ring;
    const Ring& R2 = *f.ring;
    for (const auto& v1 : R1.variables())
        if (R2.var_index(v1.name) >= 0)
            throw Error("tensor factors share variable '" + v1.name + "'");
    // Cross-variables must commute up to (-1)^{parity*parity}.
    for (const auto& v1 : R1.variables()) {
        for (const auto& v2 : R2.variables()) {
            int p1 = joint->coh_parity(v1.degree);
            int p2 = joint->coh_parity(v2.degree);
            int want = (p1 * p2) % 2 ? -1 : 1;
            if (joint->sign(joint->require_var(v1.name), joint->require_var(v2.name)) != want)
                throw Error("joint ring sign for (" + v1.name + "," + v2.name +
                            ") violates the parity rule");
        }
    }
    RingMap inc1 = inclusion_map(e.ring, joint);
    RingMap inc2 = inclusion_map(f.ring, joint);
    size_t n = e.rank(), m = f.rank();
    MatrixFactorization t;
    t.ring = joint;
    t.curvature = inc1.apply(e.curvature) + inc2.apply(f.curvature);
    t.gens.reserve(n * m);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < m; ++j) t.gens.push_back(joint->deg_add(e.gens[i], f.gens[j]));
    t.diff = zero_matrix(joint, n * m, n * m);
    auto idx = [m](size_t i, size_t j) { return i * m + j; };
    // d_E (x) 1  +  (-1)^{|gen_E|} 1 (x) d_F. Writing coefficients to the
    // right of the pair basis makes the first leg pick up the interchange
    // sign (-1)^{parity(entry) * parity(gen_F)} as the entry moves past the
    // second factor's generator.
    for (size_t i = 0; i < n; ++i) {
        int sign_i = joint->coh_parity(e.gens[i]);  // throws when fractional
        for (size_t j = 0; j < m; ++j) {
            int pj = joint->coh_parity(f.gens[j]);
            for (size_t i2 = 0; i2 < n; ++i2) {
                if (e.diff[i2][i].is_zero()) continue;
                RingElem v = inc1.apply(e.diff[i2][i]);
                int pa = joint->coh_parity(v.degree().degree);
                auto& cell = t.diff[idx(i2, j)][idx(i, j)];
                cell = cell + ((pa * pj) % 2 ? -v : v);
            }
            for (size_t j2 = 0; j2 < m; ++j2) {
                if (f.diff[j2][j].is_zero()) continue;
                RingElem v = inc2.apply(f.diff[j2][j]);
                auto& cell = t.diff[idx(i, j2)][idx(i, j)];
                cell = cell + (sign_i ? -v : v);
            }
        }
    }
    require_valid(t);
    return t;
}

namespace {

// Determinant by Laplace expansion along the first active row; only used
// for small base changes, and the result is verified afterwards.
RingElem det_small(const Matrix& m, std::vector<int> cols, size_t row, const RingPtr& ring) {
    if (cols.empty()) return RingElem::constant(ring, 1);
    RingElem acc = RingElem::zero(ring);
    for (size_t k = 0; k < cols.size(); ++k) {
        const RingElem& pivot = m[row][static_cast<size_t>(cols[k])];
        if (pivot.is_zero()) continue;
        std::vector<int> rest;
        for (size_t t = 0; t < cols.size(); ++t)
            if (t != k) rest.push_back(cols[t]);
        RingElem sub = det_small(m, rest, row + 1, ring);
        RingElem term = pivot * sub;
        acc = (k % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
}

}  // namespace

MatrixFactorization base_change(const MatrixFactorization& e,
                                const std::vector<std::vector<RingElem>>& u) {
    size_t n = e.rank();
    if (u.size() != n) throw Error("base change matrix has wrong size");
    for (const auto& row : u)
        if (row.size() != n) throw Error("base change matrix has wrong size");
    if (n == 0) return e;
    if (n > 8) throw Error("base change supports rank <= 8");
    const RingPtr& R = e.ring;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            DegreeVector want = entry_degree(*R, e.gens[j], e.gens[i], R->zero_degree());
            if (!u[i][j].degree().compatible_with(want))
                throw DegreeError("base change entry [" + std::to_string(i) + "][" +
                                  std::to_string(j) + "] has the wrong degree");
        }
    std::vector<int> cols(n);
    for (size_t i = 0; i < n; ++i) cols[i] = static_cast<int>(i);
    RingElem det = det_small(u, cols, 0, R);
    auto unit = det.constant_value();
    if (!unit || *unit == 0)
        throw NotInvertibleError("base change determinant is not a rational unit: " + det.str());
    // adjugate / det
    Matrix inv = zero_matrix(R, n, n);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) {
            // cofactor of (j, i)
            Matrix minor_m;
            for (size_t r = 0; r < n; ++r) {
                if (r == j) continue;
                std::vector<RingElem> row;
                for (size_t c = 0; c < n; ++c) {
                    if (c == i) continue;
                    row.push_back(u[r][c]);
                }
                minor_m.push_back(std::move(row));
            }
            std::vector<int> sub_cols(n - 1);
            for (size_t t = 0; t + 1 < n; ++t) sub_cols[t] = static_cast<int>(t);
            RingElem cof = det_small(minor_m, sub_cols, 0, R);
            if ((i + j) % 2) cof = -cof;
            inv[i][j] = Rational(1) / Rational(*unit) * cof;
        }
    }
    // Entries need not commute in general, so certify the inverse exactly.
    Matrix id = zero_matrix(R, n, n);
    for (size_t i = 0; i < n; ++i) id[i][i] = RingElem::constant(R, 1);
    auto check = [&](const Matrix& p) {
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j)
                if (!(p[i][j] == id[i][j])) return false;
        return true;
    };
    if (!check(mat_mul(u, inv)) || !check(mat_mul(inv, u)))
        throw NotInvertibleError("base change matrix is not two-sided invertible");
    MatrixFactorization out = e;
    out.diff = mat_mul(mat_mul(u, e.diff), inv);
    require_valid(out);
    if (!(out.curvature == e.curvature)) throw Error("base change altered the curvature");
    return out;
}

StripResult strip_trivial_summands(const MatrixFactorization& e) {
    MatrixFactorization cur = e;
    int removed = 0;
    const RingPtr& R = e.ring;
    for (;;) {
        size_t n = cur.rank();
        size_t pi = n, pj = n;
        Rational unit;
        for (size_t i = 0; i < n && pi == n; ++i) {
            for (size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                auto c = cur.diff[i][j].constant_value();
                if (c && *c != 0) {
                    pi = i;
                    pj = j;
                    unit = *c;
                    break;
                }
            }
        }
        if (pi == n) break;
        // Clear column pj outside row pi by conjugating with I + c E_{k,pi}.
        for (size_t k = 0; k < n; ++k) {
            if (k == pi) continue;
            RingElem c = Rational(-1) / unit * cur.diff[k][pj];
            if (c.is_zero()) continue;
            for (size_t col = 0; col < n; ++col)
                cur.diff[k][col] = cur.diff[k][col] + c * cur.diff[pi][col];
            for (size_t row = 0; row < n; ++row)
                cur.diff[row][pi] = cur.diff[row][pi] - cur.diff[row][k] * c;
        }
        // Clear row pi outside column pj by conjugating with I + c E_{pj,k}.
        for (size_t k = 0; k < n; ++k) {
            if (k == pj || k == pi) continue;
            RingElem c = Rational(1) / unit * cur.diff[pi][k];
            if (c.is_zero()) continue;
            for (size_t col = 0; col < n; ++col)
                cur.diff[pj][col] = cur.diff[pj][col] + c * cur.diff[k][col];
            for (size_t row = 0; row < n; ++row)
                cur.diff[row][k] = cur.diff[row][k] - cur.diff[row][pj] * c;
        }
        // The pair now decouples; d^2 = w forces the remaining couplings to
        // vanish, which we check exactly before dropping the two rows.
        for (size_t k = 0; k < n; ++k) {
            if (k != pi && !cur.diff[k][pj].is_zero())
                throw Error("strip: column did not clear");
            if (k != pj && !cur.diff[pi][k].is_zero()) throw Error("strip: row did not clear");
            if (k != pj && k != pi && !cur.diff[k][pi].is_zero())
                throw Error("strip: complementary column not zero");
            if (k != pi && k != pj && !cur.diff[pj][k].is_zero())
                throw Error("strip: complementary row not zero");
        }
        MatrixFactorization next;
        next.ring = R;
        next.curvature = cur.curvature;
        std::vector<size_t> keep;
        for (size_t k = 0; k < n; ++k)
            if (k != pi && k != pj) keep.push_back(k);
        for (size_t k : keep) next.gens.push_back(cur.gens[k]);
        next.diff = zero_matrix(R, keep.size(), keep.size());
        for (size_t a = 0; a < keep.size(); ++a)
            for (size_t b = 0; b < keep.size(); ++b) next.diff[a][b] = cur.diff[keep[a]][keep[b]];
        cur = std::move(next);
        ++removed;
    }
    require_valid(cur);
    return StripResult{std::move(cur), removed};
}

MatrixFactorization apply_ring_map(const RingMap& phi, const MatrixFactorization& e) {
    MatrixFactorization out;
    out.ring = phi.target();
    out.gens = e.gens;
    out.curvature = phi.apply(e.curvature);
    out.diff = zero_matrix(out.ring, e.rank(), e.rank());
    for (size_t i = 0; i < e.rank(); ++i)
        for (size_t j = 0; j < e.rank(); ++j) out.diff[i][j] = phi.apply(e.diff[i][j]);
    require_valid(out);
    return out;
}

std::string describe(const MatrixFactorization& e) {
    std::ostringstream os;
    os << "mf(rank " << e.rank() << ", w = " << e.curvature.str() << ", gens";
    for (const auto& g : e.gens) os << " " << to_string(g);
    os << ")";
    return os.str();
}

// ----- morphism-space linear algebra (shared with find_iso) -----

namespace {

struct HomComponentBasis {
    // (target generator, source generator, monomial)
    std::vector<std::tuple<int, int, Exponents>> elems;
};

HomComponentBasis hom_component_basis(const MatrixFactorization& e,
                                      const MatrixFactorization& f, const DegreeVector& t,
                                      int bound) {
    HomComponentBasis basis;
    const Ring& R = *e.ring;
    for (size_t i = 0; i < f.rank(); ++i) {
        for (size_t j = 0; j < e.rank(); ++j) {
            DegreeVector want = entry_degree(R, e.gens[j], f.gens[i], t);
            for (const auto& mono : R.graded_piece_basis(want, bound))
                basis.elems.emplace_back(static_cast<int>(i), static_cast<int>(j), mono);
        }
    }
    return basis;
}

MfMorphism morphism_from_coords(const MatrixFactorization& e, const MatrixFactorization& f,
                                const DegreeVector& t, const HomComponentBasis& basis,
                                const QVec& coords) {
    MfMorphism m = zero_morphism(e, f, t);
    for (size_t k = 0; k < basis.elems.size(); ++k) {
        if (coords[k] == 0) continue;
        const auto& [i, j, mono] = basis.elems[k];
        PolyData p;
        p.emplace(mono, coords[k]);
        m.mat[static_cast<size_t>(i)][static_cast<size_t>(j)] =
            m.mat[static_cast<size_t>(i)][static_cast<size_t>(j)] + RingElem(e.ring, p);
    }
    return m;
}

using CoordKey = std::tuple<int, int, Exponents>;

void flatten_morphism(const MfMorphism& m, std::map<CoordKey, Rational>& out) {
    for (size_t i = 0; i < m.mat.size(); ++i)
        for (size_t j = 0; j < m.mat[i].size(); ++j)
            for (const auto& [mono, c] : m.mat[i][j].data())
                out[{static_cast<int>(i), static_cast<int>(j), mono}] += c;
}

}  // namespace

std::optional<IsoCertificate> find_iso(const MatrixFactorization& e,
                                       const MatrixFactorization& f, int poly_bound) {
    check_same_ring(e.ring, f.ring);
    if (!(e.curvature == f.curvature)) return std::nullopt;
    if (e.rank() == 0 && f.rank() == 0) {
        return IsoCertificate{zero_morphism(e, f, e.ring->zero_degree()),
                              zero_morphism(f, e, e.ring->zero_degree())};
    }
    const DegreeVector zero = e.ring->zero_degree();
    if (e.gens == f.gens && e.diff == f.diff) {
        return IsoCertificate{identity_morphism(e), identity_morphism(e)};
    }

    HomComponentBasis fwd = hom_component_basis(e, f, zero, poly_bound);
    if (fwd.elems.empty()) return std::nullopt;

    // Closed degree-0 maps e -> f.
    std::map<CoordKey, int> row_index;
    std::vector<std::map<CoordKey, Rational>> cols;
    for (size_t k = 0; k < fwd.elems.size(); ++k) {
        QVec unit_vec(fwd.elems.size(), Rational(0));
        unit_vec[k] = 1;
        MfMorphism phi = morphism_from_coords(e, f, zero, fwd, unit_vec);
        std::map<CoordKey, Rational> img;
        flatten_morphism(hom_differential(phi), img);
        for (const auto& [key, c] : img) {
            (void)c;
            row_index.emplace(key, 0);
        }
        cols.push_back(std::move(img));
    }
    int next = 0;
    for (auto& [key, idx] : row_index) idx = next++;
    QMat closed_sys = qmat_zero(row_index.size(), fwd.elems.size());
    for (size_t k = 0; k < cols.size(); ++k)
        for (const auto& [key, c] : cols[k]) closed_sys[static_cast<size_t>(row_index[key])][k] = c;
    std::vector<QVec> closed = kernel_basis(closed_sys, fwd.elems.size());
    if (closed.empty()) return std::nullopt;

    HomComponentBasis bwd = hom_component_basis(f, e, zero, poly_bound);

    auto try_candidate = [&](const QVec& coords) -> std::optional<IsoCertificate> {
        MfMorphism phi = morphism_from_coords(e, f, zero, fwd, coords);
        if (mat_is_zero(phi.mat)) return std::nullopt;
        // Solve for psi: closed, psi phi = id_e, phi psi = id_f (all linear).
        std::map<CoordKey, int> rows_d, rows_pf, rows_fp;
        std::vector<std::map<CoordKey, Rational>> cd, cpf, cfp;
        for (size_t l = 0; l < bwd.elems.size(); ++l) {
            QVec uv(bwd.elems.size(), Rational(0));
            uv[l] = 1;
            MfMorphism psi = morphism_from_coords(f, e, zero, bwd, uv);
            std::map<CoordKey, Rational> m1, m2, m3;
            flatten_morphism(hom_differential(psi), m1);
            flatten_morphism(compose(psi, phi), m2);
            flatten_morphism(compose(phi, psi), m3);
            for (auto& [k2, c] : m1) {
                (void)c;
                rows_d.emplace(k2, 0);
            }
            for (auto& [k2, c] : m2) {
                (void)c;
                rows_pf.emplace(k2, 0);
            }
            for (auto& [k2, c] : m3) {
                (void)c;
                rows_fp.emplace(k2, 0);
            }
            cd.push_back(std::move(m1));
            cpf.push_back(std::move(m2));
            cfp.push_back(std::move(m3));
        }
        std::map<CoordKey, Rational> id_e_flat, id_f_flat;
        flatten_morphism(identity_morphism(e), id_e_flat);
        flatten_morphism(identity_morphism(f), id_f_flat);
        for (auto& [k2, c] : id_e_flat) {
            (void)c;
            rows_pf.emplace(k2, 0);
        }
        for (auto& [k2, c] : id_f_flat) {
            (void)c;
            rows_fp.emplace(k2, 0);
        }
        int r = 0;
        for (auto& [k2, idx] : rows_d) idx = r++;
        for (auto& [k2, idx] : rows_pf) idx = r++;
        for (auto& [k2, idx] : rows_fp) idx = r++;
        QMat sys = qmat_zero(static_cast<size_t>(r), bwd.elems.size());
        QVec rhs(static_cast<size_t>(r), Rational(0));
        for (size_t l = 0; l < bwd.elems.size(); ++l) {
            for (const auto& [k2, c] : cd[l]) sys[static_cast<size_t>(rows_d[k2])][l] = c;
            for (const auto& [k2, c] : cpf[l]) sys[static_cast<size_t>(rows_pf[k2])][l] = c;
            for (const auto& [k2, c] : cfp[l]) sys[static_cast<size_t>(rows_fp[k2])][l] = c;
        }
        for (const auto& [k2, c] : id_e_flat) rhs[static_cast<size_t>(rows_pf.at(k2))] = c;
        for (const auto& [k2, c] : id_f_flat) rhs[static_cast<size_t>(rows_fp.at(k2))] = c;
        auto sol = solve(sys, rhs);
        if (!sol) return std::nullopt;
        MfMorphism psi = morphism_from_coords(f, e, zero, bwd, *sol);
        // Exact certificate verification.
        if (!is_closed(phi) || !is_closed(psi)) return std::nullopt;
        if (!(compose(psi, phi).mat == identity_morphism(e).mat)) return std::nullopt;
        if (!(compose(phi, psi).mat == identity_morphism(f).mat)) return std::nullopt;
        return IsoCertificate{phi, psi};
    };

    for (const auto& c : closed) {
        if (auto cert = try_candidate(c)) return cert;
    }
    std::mt19937 rng(20240613);
    std::uniform_int_distribution<int> coeff(-2, 2);
    size_t use = std::min<size_t>(closed.size(), 10);
    for (int attempt = 0; attempt < 64; ++attempt) {
        QVec coords(fwd.elems.size(), Rational(0));
        for (size_t b = 0; b < use; ++b) {
            int c = coeff(rng);
            if (!c) continue;
            for (size_t k = 0; k < coords.size(); ++k) coords[k] += Rational(c) * closed[b][k];
        }
        if (auto cert = try_candidate(coords)) return cert;
    }
    return std::nullopt;
}

}  // namespace gmf
