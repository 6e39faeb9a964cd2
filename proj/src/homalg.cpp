#include "gmf/homalg.hpp"

#include <algorithm>
#include <cassert>
#include <set>
#include <sstream>

namespace gmf {

namespace {

int max_entry_exponent(const MfMorphism& f) {
    int m = 0;
    for (const auto& row : f.mat)
        for (const auto& x : row) m = std::max(m, x.max_exponent());
    return m;
}

using Key = std::tuple<int, int, Exponents>;

std::map<Key, Rational> flatten(const MfMorphism& m) {
    std::map<Key, Rational> out;
    for (size_t i = 0; i < m.mat.size(); ++i)
        for (size_t j = 0; j < m.mat[i].size(); ++j)
            for (const auto& [mono, c] : m.mat[i][j].data()) out[{(int)i, (int)j, mono}] += c;
    return out;
}

}  // namespace

TruncatedComplex hom_complex(const MatrixFactorization& e, const MatrixFactorization& f,
                             int lo, int hi, int poly_bound) {
    check_same_ring(e.ring, f.ring);
    if (hi < lo) throw Error("hom_complex window is empty");
    const Ring& R = *e.ring;
    TruncatedComplex c;
    c.e = e;
    c.f = f;
    c.lo = lo;
    c.hi = hi;
    c.poly_bound = poly_bound;
    size_t width = static_cast<size_t>(hi - lo + 1);
    c.basis.resize(width);
    c.cap.resize(width, poly_bound);
    c.complete.resize(width, true);

    auto degree_of_component = [&](int n, int i, int j) {
        DegreeVector t = R.deg_scale(R.chi(), n);
        return R.deg_sub(R.deg_add(e.gens[static_cast<size_t>(j)], t),
                         f.gens[static_cast<size_t>(i)]);
    };
    auto build_degree = [&](size_t k, int cap) {
        int n = lo + static_cast<int>(k);
        c.cap[k] = cap;
        c.basis[k].clear();
        bool complete = true;
        for (size_t i = 0; i < f.rank(); ++i) {
            for (size_t j = 0; j < e.rank(); ++j) {
                DegreeVector want = degree_of_component(n, (int)i, (int)j);
                for (const auto& mono : R.graded_piece_basis(want, cap))
                    c.basis[k].push_back(HomBasisElem{(int)i, (int)j, mono});
                if (!R.piece_complete(want, cap)) complete = false;
            }
        }
        c.complete[k] = complete;
    };

    build_degree(0, poly_bound);
    for (size_t k = 0; k + 1 < width; ++k) {
        int n = lo + static_cast<int>(k);
        // Exact images of the current basis under the morphism differential.
        std::vector<std::map<Key, Rational>> images;
        int needed = poly_bound;
        for (const auto& b : c.basis[k]) {
            MfMorphism m = zero_morphism(e, f, R.deg_scale(R.chi(), n));
            PolyData p;
            p.emplace(b.mono, Rational(1));
            m.mat[static_cast<size_t>(b.tgt_gen)][static_cast<size_t>(b.src_gen)] =
                RingElem(e.ring, p);
            auto img = flatten(hom_differential(m));
            for (const auto& [key, coeff] : img) {
                (void)coeff;
                int t = 0;
                for (int x : std::get<2>(key)) t += x;
                needed = std::max(needed, t);
            }
            images.push_back(std::move(img));
        }
        build_degree(k + 1, std::max(needed, poly_bound));
        // Index target basis and fill the matrix.
        std::map<Key, size_t> index;
        for (size_t r = 0; r < c.basis[k + 1].size(); ++r) {
            const auto& b = c.basis[k + 1][r];
            index[{b.tgt_gen, b.src_gen, b.mono}] = r;
        }
        QMat mat = qmat_zero(c.basis[k + 1].size(), c.basis[k].size());
        for (size_t col = 0; col < images.size(); ++col) {
            for (const auto& [key, coeff] : images[col]) {
                auto it = index.find(key);
                if (it == index.end()) throw Error("hom_complex: image escaped the truncation");
                mat[it->second][col] = coeff;
            }
        }
        c.d.push_back(std::move(mat));
    }
    return c;
}

MfMorphism morphism_from_vector(const TruncatedComplex& c, int degree, const QVec& coords) {
    const Ring& R = *c.e.ring;
    size_t k = static_cast<size_t>(degree - c.lo);
    MfMorphism m = zero_morphism(c.e, c.f, R.deg_scale(R.chi(), degree));
    for (size_t t = 0; t < c.basis[k].size(); ++t) {
        if (coords[t] == 0) continue;
        const auto& b = c.basis[k][t];
        PolyData p;
        p.emplace(b.mono, coords[t]);
        auto& cell = m.mat[static_cast<size_t>(b.tgt_gen)][static_cast<size_t>(b.src_gen)];
        cell = cell + RingElem(c.e.ring, p);
    }
    return m;
}

QVec vector_from_morphism(const TruncatedComplex& c, int degree, const MfMorphism& m) {
    size_t k = static_cast<size_t>(degree - c.lo);
    std::map<Key, size_t> index;
    for (size_t r = 0; r < c.basis[k].size(); ++r) {
        const auto& b = c.basis[k][r];
        index[{b.tgt_gen, b.src_gen, b.mono}] = r;
    }
    QVec v(c.basis[k].size(), Rational(0));
    for (const auto& [key, coeff] : flatten(m)) {
        auto it = index.find(key);
        if (it == index.end()) throw Error("morphism does not lie in the truncated basis");
        v[it->second] = coeff;
    }
    return v;
}

ExtTable cohomology_dims(const TruncatedComplex& c) {
    ExtTable t;
    t.lo = c.lo;
    t.hi = c.hi;
    t.poly_bound = c.poly_bound;
    for (int n = c.lo + 1; n < c.hi; ++n) {
        size_t k = static_cast<size_t>(n - c.lo);
        int dim = static_cast<int>(c.basis[k].size());
        int r_out = rank(c.d[k]);
        int r_in = rank(c.d[k - 1]);
        t.dims[n] = dim - r_out - r_in;
        t.trusted[n] = c.complete[k - 1] && c.complete[k] && c.complete[k + 1];
    }
    return t;
}

std::optional<ContractionCertificate> find_contraction(const MatrixFactorization& e,
                                                       int poly_bound) {
    const Ring& R = *e.ring;
    if (e.rank() == 0) {
        MfMorphism h = zero_morphism(e, e, R.deg_neg(R.chi()));
        return ContractionCertificate{h};
    }
    // Unknown h of degree -1; solve dh + hd = id exactly.
    DegreeVector hdeg = R.deg_neg(R.chi());
    std::vector<HomBasisElem> basis;
    for (size_t i = 0; i < e.rank(); ++i) {
        for (size_t j = 0; j < e.rank(); ++j) {
            DegreeVector want =
                R.deg_sub(R.deg_add(e.gens[j], hdeg), e.gens[i]);
            for (const auto& mono : R.graded_piece_basis(want, poly_bound))
                basis.push_back(HomBasisElem{(int)i, (int)j, mono});
        }
    }
    if (basis.empty()) return std::nullopt;
    std::map<Key, size_t> rows;
    std::vector<std::map<Key, Rational>> cols;
    for (const auto& b : basis) {
        MfMorphism h = zero_morphism(e, e, hdeg);
        PolyData p;
        p.emplace(b.mono, Rational(1));
        h.mat[static_cast<size_t>(b.tgt_gen)][static_cast<size_t>(b.src_gen)] =
            RingElem(e.ring, p);
        auto img = flatten(hom_differential(h));  // dh + hd since |h| is odd
        for (const auto& [key, coeff] : img) {
            (void)coeff;
            rows.emplace(key, 0);
        }
        cols.push_back(std::move(img));
    }
    auto id_flat = flatten(identity_morphism(e));
    for (const auto& [key, coeff] : id_flat) {
        (void)coeff;
        rows.emplace(key, 0);
    }
    size_t r = 0;
    for (auto& [key, idx] : rows) idx = r++;
    QMat sys = qmat_zero(r, basis.size());
    QVec rhs(r, Rational(0));
    for (size_t col = 0; col < cols.size(); ++col)
        for (const auto& [key, coeff] : cols[col]) sys[rows[key]][col] = coeff;
    for (const auto& [key, coeff] : id_flat) rhs[rows[key]] = coeff;
    auto sol = solve(sys, rhs);
    if (!sol) return std::nullopt;
    MfMorphism h = zero_morphism(e, e, hdeg);
    for (size_t t = 0; t < basis.size(); ++t) {
        if ((*sol)[t] == 0) continue;
        const auto& b = basis[t];
        PolyData p;
        p.emplace(b.mono, (*sol)[t]);
        auto& cell = h.mat[static_cast<size_t>(b.tgt_gen)][static_cast<size_t>(b.src_gen)];
        cell = cell + RingElem(e.ring, p);
    }
    // Re-verify the certificate by exact multiplication.
    MfMorphism check = hom_differential(h);
    if (!(check.mat == identity_morphism(e).mat)) return std::nullopt;
    return ContractionCertificate{h};
}

std::optional<ContractionCertificate> is_quasi_iso(const MfMorphism& phi, int poly_bound) {
    if (!is_closed(phi)) throw NotClosedError("is_quasi_iso needs a closed morphism");
    return find_contraction(cone(phi), poly_bound);
}

// ----- exact sequences -----

namespace {

struct PieceBasis {
    std::vector<std::pair<int, Exponents>> elems;  // (generator, monomial)
};

PieceBasis module_piece(const MatrixFactorization& obj, const DegreeVector& d, int cap) {
    PieceBasis out;
    const Ring& R = *obj.ring;
    for (size_t g = 0; g < obj.rank(); ++g) {
        DegreeVector want = R.deg_sub(d, obj.gens[g]);
        for (const auto& mono : R.graded_piece_basis(want, cap))
            out.elems.emplace_back(static_cast<int>(g), mono);
    }
    return out;
}

}  // namespace

std::string ExactnessReport::summary() const {
    std::ostringstream os;
    os << (pass ? "exact" : "NOT exact") << " (margin " << margin << "); positions:";
    int fails = 0;
    for (const auto& p : positions)
        if (!p.exact) ++fails;
    os << " " << positions.size() << ", full-truncation failures: " << fails;
    return os.str();
}

ExactnessReport check_exact_sequence(const std::vector<MatrixFactorization>& objects,
                                     const std::vector<MfMorphism>& maps, int lo, int hi,
                                     int poly_bound) {
    if (objects.size() < 2 || maps.size() + 1 != objects.size())
        throw Error("check_exact_sequence needs n objects and n-1 maps");
    const RingPtr& ring = objects[0].ring;
    const Ring& R = *ring;
    for (const auto& o : objects) check_same_ring(o.ring, ring);
    ExactnessReport rep;
    for (size_t k = 0; k < maps.size(); ++k) {
        if (!(maps[k].degree == R.chi()))
            throw DegreeError("check_exact_sequence maps must have degree 1");
        auto v = validate_morphism(maps[k]);
        if (!v.ok)
            throw DegreeError("check_exact_sequence map " + std::to_string(k) + ": " +
                              v.violations[0]);
    }
    int maxent = 0;
    for (const auto& m : maps) maxent = std::max(maxent, max_entry_exponent(m));
    rep.margin = maxent + 2;
    for (size_t k = 0; k + 1 < maps.size(); ++k) {
        if (!(compose(maps[k + 1], maps[k]).mat ==
              zero_morphism(objects[k], objects[k + 2], R.deg_scale(R.chi(), 2)).mat)) {
            rep.composites_zero = false;
            rep.pass = false;
            return rep;
        }
    }
    // Exponent caps grow along the sequence so images never escape.
    std::vector<int> caps(objects.size(), poly_bound);
    for (size_t k = 1; k < objects.size(); ++k)
        caps[k] = caps[k - 1] + std::max(1, maxent);

    // Degree buckets of interest: pieces of each object with cohomological
    // numerator inside the window, plus whatever the neighbours need.
    auto build_matrix = [&](size_t k, const DegreeVector& d, const PieceBasis& src,
                            const PieceBasis& tgt) {
        (void)d;
        std::map<std::pair<int, Exponents>, size_t> index;
        for (size_t r = 0; r < tgt.elems.size(); ++r) index[tgt.elems[r]] = r;
        QMat m = qmat_zero(tgt.elems.size(), src.elems.size());
        for (size_t col = 0; col < src.elems.size(); ++col) {
            const auto& [g, mono] = src.elems[col];
            RingElem mono_elem(ring, PolyData{{mono, Rational(1)}});
            for (size_t i = 0; i < objects[k + 1].rank(); ++i) {
                RingElem v = maps[k].mat[i][static_cast<size_t>(g)] * mono_elem;
                for (const auto& [m2, c2] : v.data()) {
                    auto it = index.find({static_cast<int>(i), m2});
                    if (it == index.end())
                        throw Error("check_exact_sequence: image escaped the truncation");
                    m[it->second][col] = c2;
                }
            }
        }
        return m;
    };

    for (size_t pos = 0; pos < maps.size(); ++pos) {
        // Occupied degrees of objects[pos] within the window, collected by
        // enumerating monomials up to the cap and bucketing their degrees.
        std::set<DegreeVector> degrees;
        {
            const auto& obj = objects[pos];
            std::vector<Exponents> all;
            {
                size_t nv = R.var_count();
                Exponents cur(nv, 0);
                auto rec = [&](auto&& self, size_t v, int budget) -> void {
                    if (v == nv) {
                        all.push_back(cur);
                        return;
                    }
                    int cap_v = R.rewrite(static_cast<int>(v)) ? std::min(budget, 1) : budget;
                    for (int e2 = 0; e2 <= cap_v; ++e2) {
                        cur[v] = e2;
                        self(self, v + 1, budget - e2);
                    }
                    cur[v] = 0;
                };
                rec(rec, 0, caps[pos]);
            }
            for (size_t g = 0; g < obj.rank(); ++g)
                for (const auto& mono : all) {
                    DegreeVector d = R.deg_add(obj.gens[g], R.monomial_degree(mono));
                    if (d.coh >= lo * R.coh_denominator() && d.coh <= hi * R.coh_denominator())
                        degrees.insert(d);
                }
        }
        for (const auto& d : degrees) {
            ExactnessPosition p;
            p.index = static_cast<int>(pos);
            p.degree = d;
            PieceBasis here = module_piece(objects[pos], d, caps[pos]);
            p.piece_dim = static_cast<int>(here.elems.size());
            if (here.elems.empty()) continue;
            DegreeVector dnext = R.deg_add(d, R.chi());
            PieceBasis next = module_piece(objects[pos + 1], dnext, caps[pos + 1]);
            QMat out = build_matrix(pos, d, here, next);
            QMat in;  // columns spanning the incoming image
            if (pos > 0) {
                DegreeVector dprev = R.deg_sub(d, R.chi());
                PieceBasis prev = module_piece(objects[pos - 1], dprev, caps[pos - 1]);
                QMat m_in = build_matrix(pos - 1, dprev, prev, here);
                in = std::move(m_in);
            } else {
                in = qmat_zero(here.elems.size(), 0);
            }
            auto kernel_of_restriction = [&](int max_exp) {
                // kernel of `out` restricted to columns of exponent <= max_exp
                std::vector<size_t> keep;
                for (size_t c2 = 0; c2 < here.elems.size(); ++c2) {
                    int t = 0;
                    for (int x : here.elems[c2].second) t += x;
                    if (t <= max_exp) keep.push_back(c2);
                }
                QMat sub = qmat_zero(out.size(), keep.size());
                for (size_t r2 = 0; r2 < out.size(); ++r2)
                    for (size_t c2 = 0; c2 < keep.size(); ++c2) sub[r2][c2] = out[r2][keep[c2]];
                auto kb = kernel_basis(sub, keep.size());
                std::vector<QVec> full;
                for (const auto& v : kb) {
                    QVec x(here.elems.size(), Rational(0));
                    for (size_t c2 = 0; c2 < keep.size(); ++c2) x[keep[c2]] = v[c2];
                    full.push_back(std::move(x));
                }
                return full;
            };
            auto contained_in_image = [&](const std::vector<QVec>& vecs) {
                if (vecs.empty()) return true;
                // rank(in) == rank([in | vecs])
                size_t rows = here.elems.size();
                QMat aug = qmat_zero(rows, in[0].size() + vecs.size());
                for (size_t r2 = 0; r2 < rows; ++r2)
                    for (size_t c2 = 0; c2 < in[0].size(); ++c2) aug[r2][c2] = in[r2][c2];
                for (size_t v2 = 0; v2 < vecs.size(); ++v2)
                    for (size_t r2 = 0; r2 < rows; ++r2)
                        aug[r2][in[0].size() + v2] = vecs[v2][r2];
                return rank(in) == rank(aug);
            };
            auto full_kernel = kernel_of_restriction(caps[pos]);
            p.exact = contained_in_image(full_kernel);
            if (p.exact) {
                p.certified_exp = caps[pos];
            } else {
                for (int K = caps[pos] - 1; K >= 0; --K) {
                    if (contained_in_image(kernel_of_restriction(K))) {
                        p.certified_exp = K;
                        break;
                    }
                }
            }
            if (p.certified_exp < poly_bound - rep.margin) rep.pass = false;
            rep.positions.push_back(std::move(p));
        }
    }
    return rep;
}

// ----- Ext algebras -----

namespace {

// Representatives: kernel columns that add pivots beyond the image columns.
std::vector<QVec> choose_reps(const QMat& image_cols, const std::vector<QVec>& kernel,
                              size_t dim) {
    std::vector<QVec> reps;
    if (dim == 0) return reps;
    size_t icols = image_cols.empty() ? 0 : image_cols[0].size();
    QMat work = qmat_zero(dim, icols + kernel.size());
    for (size_t r = 0; r < dim && r < image_cols.size(); ++r)
        for (size_t c = 0; c < icols; ++c) work[r][c] = image_cols[r][c];
    for (size_t k = 0; k < kernel.size(); ++k)
        for (size_t r = 0; r < dim; ++r) work[r][icols + k] = kernel[k][r];
    Echelon e = rref(std::move(work));
    for (int pc : e.pivot_col)
        if (static_cast<size_t>(pc) >= icols) reps.push_back(kernel[static_cast<size_t>(pc) - icols]);
    return reps;
}

}  // namespace

ExtAlgebra ext_algebra(const MatrixFactorization& e, int lo, int hi, int poly_bound) {
    ExtAlgebra alg;
    alg.complex = hom_complex(e, e, lo, hi, poly_bound);
    const TruncatedComplex& c = alg.complex;
    for (int n = lo + 1; n < hi; ++n) {
        size_t k = static_cast<size_t>(n - lo);
        auto kernel = kernel_basis(c.d[k], c.basis[k].size());
        // image columns of the incoming differential
        const QMat& din = c.d[k - 1];
        QMat image = qmat_zero(c.basis[k].size(), din.empty() ? 0 : din[0].size());
        for (size_t r = 0; r < image.size(); ++r)
            for (size_t c2 = 0; c2 < image[r].size(); ++c2) image[r][c2] = din[r][c2];
        auto reps = choose_reps(image, kernel, c.basis[k].size());
        for (const auto& v : reps) {
            alg.reps[n].push_back(morphism_from_vector(c, n, v));
            alg.rep_vectors[n].push_back(v);
        }
    }
    for (const auto& [na, reps_a] : alg.reps) {
        for (const auto& [nb, reps_b] : alg.reps) {
            int nab = na + nb;
            if (nab <= lo || nab >= hi) continue;
            for (size_t ia = 0; ia < reps_a.size(); ++ia) {
                for (size_t ib = 0; ib < reps_b.size(); ++ib) {
                    auto coords = ext_product_raw(alg, na, static_cast<int>(ia), nb,
                                                  static_cast<int>(ib));
                    if (coords) alg.products[{na, (int)ia, nb, (int)ib}] = *coords;
                }
            }
        }
    }
    return alg;
}

// Reduce compose(a, b) modulo coboundaries in degree na+nb.
std::optional<QVec> ext_product_raw(const ExtAlgebra& alg, int deg_a, int idx_a, int deg_b,
                                    int idx_b) {
    const TruncatedComplex& c = alg.complex;
    int n = deg_a + deg_b;
    if (n <= c.lo || n >= c.hi) return std::nullopt;
    const MfMorphism& a = alg.reps.at(deg_a)[static_cast<size_t>(idx_a)];
    const MfMorphism& b = alg.reps.at(deg_b)[static_cast<size_t>(idx_b)];
    MfMorphism ab = compose(a, b);
    return reduce_in_degree(alg, n, ab);
}

std::optional<QVec> ext_product(const ExtAlgebra& alg, int deg_a, int idx_a, int deg_b,
                                int idx_b) {
    auto it = alg.products.find({deg_a, idx_a, deg_b, idx_b});
    if (it != alg.products.end()) return it->second;
    return ext_product_raw(alg, deg_a, idx_a, deg_b, idx_b);
}

std::optional<QVec> reduce_in_degree(const ExtAlgebra& alg, int degree, const MfMorphism& m) {
    const TruncatedComplex& c = alg.complex;
    size_t k = static_cast<size_t>(degree - c.lo);
    const auto reps_it = alg.rep_vectors.find(degree);
    size_t nreps = reps_it == alg.rep_vectors.end() ? 0 : reps_it->second.size();
    // Solve  m = D(y) + sum c_r rep_r  over the flattened support.
    std::map<Key, size_t> rows;
    auto m_flat = flatten(m);
    for (const auto& [key, coeff] : m_flat) {
        (void)coeff;
        rows.emplace(key, 0);
    }
    std::vector<std::map<Key, Rational>> dcols;
    const Ring& R = *c.e.ring;
    if (k >= 1) {
        for (const auto& b : c.basis[k - 1]) {
            MfMorphism y = zero_morphism(c.e, c.f, R.deg_scale(R.chi(), degree - 1));
            PolyData p;
            p.emplace(b.mono, Rational(1));
            y.mat[static_cast<size_t>(b.tgt_gen)][static_cast<size_t>(b.src_gen)] =
                RingElem(c.e.ring, p);
            auto img = flatten(hom_differential(y));
            for (const auto& [key, coeff] : img) {
                (void)coeff;
                rows.emplace(key, 0);
            }
            dcols.push_back(std::move(img));
        }
    }
    std::vector<std::map<Key, Rational>> rcols;
    for (size_t r = 0; r < nreps; ++r) {
        auto img = flatten(alg.reps.at(degree)[r]);
        for (const auto& [key, coeff] : img) {
            (void)coeff;
            rows.emplace(key, 0);
        }
        rcols.push_back(std::move(img));
    }
    size_t nr = 0;
    for (auto& [key, idx] : rows) idx = nr++;
    QMat sys = qmat_zero(nr, dcols.size() + nreps);
    QVec rhs(nr, Rational(0));
    for (size_t col = 0; col < dcols.size(); ++col)
        for (const auto& [key, coeff] : dcols[col]) sys[rows[key]][col] = coeff;
    for (size_t r = 0; r < nreps; ++r)
        for (const auto& [key, coeff] : rcols[r]) sys[rows[key]][dcols.size() + r] = coeff;
    for (const auto& [key, coeff] : m_flat) rhs[rows[key]] = coeff;
    auto sol = solve(sys, rhs);
    if (!sol) return std::nullopt;
    QVec coords(nreps, Rational(0));
    for (size_t r = 0; r < nreps; ++r) coords[r] = (*sol)[dcols.size() + r];
    return coords;
}

TruncatedPolyCheck check_truncated_polynomial_algebra(const MatrixFactorization& e,
                                                      int gen_degree, int height, int lo,
                                                      int hi, int poly_bound) {
    TruncatedPolyCheck out;
    if (gen_degree <= 0 || height < 1) {
        out.detail = "bad parameters";
        return out;
    }
    if (!(lo < 0 && hi > (height)*gen_degree)) {
        out.detail = "window too small for the requested height";
        return out;
    }
    ExtAlgebra alg = ext_algebra(e, lo, hi, poly_bound);
    ExtTable table = cohomology_dims(alg.complex);
    std::ostringstream os;
    for (int n = lo + 1; n <= height * gen_degree; ++n) {
        bool expected_one = (n >= 0) && (n < height * gen_degree) && (n % gen_degree == 0);
        int want = expected_one ? 1 : 0;
        if (table.dims.at(n) != want) {
            os << "dim at degree " << n << " is " << table.dims.at(n) << ", expected " << want;
            out.detail = os.str();
            return out;
        }
    }
    // Unit: the identity reduces to a nonzero multiple of the degree-0 rep.
    auto unit = reduce_in_degree(alg, 0, identity_morphism(e));
    if (!unit || unit->size() != 1 || (*unit)[0] == 0) {
        out.detail = "identity class does not span degree 0";
        return out;
    }
    if (height == 1) {
        out.ok = true;
        out.detail = "algebra is the ground field";
        return out;
    }
    // Powers of the generator stay nonzero below the height and vanish at it.
    const MfMorphism& xi = alg.reps.at(gen_degree)[0];
    MfMorphism power = xi;
    for (int k = 2; k < height; ++k) {
        power = compose(xi, power);
        auto coords = reduce_in_degree(alg, k * gen_degree, power);
        if (!coords) {
            os << "power " << k << " not resolvable at this bound";
            out.detail = os.str();
            return out;
        }
        bool nonzero = false;
        for (const auto& c : *coords)
            if (c != 0) nonzero = true;
        if (!nonzero) {
            os << "generator power " << k << " vanishes";
            out.detail = os.str();
            return out;
        }
    }
    power = compose(xi, power);  // height-th power, in a zero group
    auto top = reduce_in_degree(alg, height * gen_degree, power);
    if (!top) {
        out.detail = "top power is not a coboundary at this bound";
        return out;
    }
    for (const auto& c : *top) {
        if (c != 0) {
            out.detail = "top power does not vanish";
            return out;
        }
    }
    out.ok = true;
    out.detail = "matches the truncated polynomial algebra";
    return out;
}

}  // namespace gmf
