#include "holo/dgcat.hpp"

#include "holo/locsys.hpp"

namespace holo {

const GradedModule& SmallDgCategory::hom_dims(int x, int y) const {
    auto it = homs_.find({x, y});
    if (it == homs_.end())
        throw structural_error("no hom data for the requested object pair");
    return it->second;
}

HomElem SmallDgCategory::d(const HomElem& e) const {
    HomElem r = zero(e.x, e.y, e.deg + 1);
    auto it = d_.find({e.x, e.y, e.deg});
    if (it == d_.end()) return r;
    const Mat<Rat>& m = it->second;
    for (std::size_t i = 0; i < r.coeffs.size(); ++i)
        for (std::size_t j = 0; j < e.coeffs.size(); ++j)
            if (e.coeffs[j] != 0) r.coeffs[i] += m(i, j) * e.coeffs[j];
    return r;
}

HomElem SmallDgCategory::compose(const HomElem& g, const HomElem& f) const {
    if (g.x != f.y) throw structural_error("compose: g.x must equal f.y");
    HomElem r = zero(f.x, g.y, g.deg + f.deg);
    auto it = comp_.find({f.x, f.y, g.y, g.deg, f.deg});
    if (it == comp_.end()) return r;
    const auto& t = it->second;
    for (std::size_t i = 0; i < g.coeffs.size(); ++i) {
        if (g.coeffs[i] == 0) continue;
        for (std::size_t j = 0; j < f.coeffs.size(); ++j) {
            if (f.coeffs[j] == 0) continue;
            Rat cij = g.coeffs[i] * f.coeffs[j];
            const auto& out = t[i][j];
            for (std::size_t k = 0; k < out.size(); ++k)
                if (out[k] != 0) r.coeffs[k] += cij * out[k];
        }
    }
    return r;
}

HomElem SmallDgCategory::add(const HomElem& a, const HomElem& b) {
    if (a.x != b.x || a.y != b.y || a.deg != b.deg)
        throw structural_error("HomElem add: shape mismatch");
    HomElem r = a;
    for (std::size_t i = 0; i < r.coeffs.size(); ++i) r.coeffs[i] += b.coeffs[i];
    return r;
}

HomElem SmallDgCategory::scale(const Rat& c, const HomElem& a) {
    HomElem r = a;
    for (auto& v : r.coeffs) v = c * v;
    return r;
}

void SmallDgCategory::validate() const {
    auto basis = [&](int x, int y, int deg) {
        std::vector<HomElem> out;
        for (std::size_t i = 0; i < hom_dim(x, y, deg); ++i) {
            HomElem e = zero(x, y, deg);
            e.coeffs[i] = Rat(1);
            out.push_back(std::move(e));
        }
        return out;
    };
    for (int x = 0; x < n_; ++x) {
        if (!d(identity(x)).is_zero()) throw invariant_error("identity is not closed");
    }
    for (int x = 0; x < n_; ++x)
        for (int y = 0; y < n_; ++y)
            for (auto& [a, na] : hom_dims(x, y).dims())
                for (auto& e : basis(x, y, a)) {
                    if (!d(d(e)).is_zero()) throw invariant_error("d^2 != 0");
                    HomElem l = compose(identity(y), e);
                    HomElem r = compose(e, identity(x));
                    if (!(l.coeffs == e.coeffs) || !(r.coeffs == e.coeffs))
                        throw invariant_error("identity is not a unit");
                }
    for (int x = 0; x < n_; ++x)
        for (int y = 0; y < n_; ++y)
            for (int z = 0; z < n_; ++z)
                for (auto& [b, nb] : hom_dims(x, y).dims())
                    for (auto& [a, na] : hom_dims(y, z).dims())
                        for (auto& g : basis(y, z, a))
                            for (auto& f : basis(x, y, b)) {
                                HomElem lhs = d(compose(g, f));
                                HomElem rhs =
                                    add(compose(d(g), f),
                                        scale(Rat(a % 2 == 0 ? 1 : -1), compose(g, d(f))));
                                if (!(lhs.coeffs == rhs.coeffs))
                                    throw invariant_error(
                                        "d is not a derivation of composition");
                                for (int w = 0; w < n_; ++w)
                                    for (auto& [c, nw] : hom_dims(z, w).dims())
                                        for (auto& h : basis(z, w, c)) {
                                            HomElem l2 = compose(h, compose(g, f));
                                            HomElem r2 = compose(compose(h, g), f);
                                            if (!(l2.coeffs == r2.coeffs))
                                                throw invariant_error(
                                                    "composition is not associative");
                                        }
                            }
}

std::vector<std::vector<Rat>> SmallDgCategory::closed_basis(int x, int y, int deg) const {
    std::size_t n = hom_dim(x, y, deg);
    std::size_t m = hom_dim(x, y, deg + 1);
    Mat<Rat> D(m, n);
    auto it = d_.find({x, y, deg});
    if (it != d_.end()) D = it->second;
    if (m == 0) {
        // no target: everything is closed
        std::vector<std::vector<Rat>> out;
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<Rat> v(n, Rat(0));
            v[j] = Rat(1);
            out.push_back(std::move(v));
        }
        return out;
    }
    return kernel_basis(D);
}

std::size_t hom_index(const GradedModule& src, const GradedModule& tgt, int deg, int ds,
                      std::size_t r, std::size_t c) {
    std::size_t off = 0;
    for (auto& [d2, n2] : src.dims()) {
        std::size_t nt = tgt.dim(d2 + deg);
        if (nt == 0) continue;
        if (d2 == ds) return off + r * n2 + c;
        off += n2 * nt;
    }
    throw structural_error("hom_index: no such basis element");
}

GradedMap<Rat> hom_elem_to_map(const ChainComplex<Rat>& src, const ChainComplex<Rat>& tgt,
                               const HomElem& e) {
    GradedMap<Rat> m(src.module, tgt.module, e.deg);
    std::size_t off = 0;
    for (auto& [ds, ns] : src.module.dims()) {
        std::size_t nt = tgt.module.dim(ds + e.deg);
        if (nt == 0) continue;
        Mat<Rat> blk(nt, ns);
        for (std::size_t r = 0; r < nt; ++r)
            for (std::size_t c = 0; c < ns; ++c) blk(r, c) = e.coeffs[off + r * ns + c];
        m.set_block(ds, std::move(blk));
        off += nt * ns;
    }
    return m;
}

HomElem map_to_hom_elem(int x, int y, const ChainComplex<Rat>& src,
                        const ChainComplex<Rat>& tgt, const GradedMap<Rat>& m) {
    std::size_t total = 0;
    for (auto& [ds, ns] : src.module.dims()) total += ns * tgt.module.dim(ds + m.degree());
    HomElem e{x, y, m.degree(), std::vector<Rat>(total, Rat(0))};
    std::size_t off = 0;
    for (auto& [ds, ns] : src.module.dims()) {
        std::size_t nt = tgt.module.dim(ds + m.degree());
        if (nt == 0) continue;
        if (m.has_block(ds)) {
            const Mat<Rat>& blk = m.block(ds);
            for (std::size_t r = 0; r < nt; ++r)
                for (std::size_t c = 0; c < ns; ++c) e.coeffs[off + r * ns + c] = blk(r, c);
        }
        off += nt * ns;
    }
    return e;
}

SmallDgCategory category_from_complexes(const std::vector<ChainComplex<Rat>>& objs) {
    const int n = static_cast<int>(objs.size());
    SmallDgCategory C(n);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            GradedModule m;
            for (auto& [ds, ns] : objs[x].module.dims())
                for (auto& [dt, nt] : objs[y].module.dims()) {
                    int deg = dt - ds;
                    if (deg < kDegreeMin || deg > kDegreeMax) continue;
                    m.set_dim(deg, m.dim(deg) + ns * nt);
                }
            C.set_hom_dims(x, y, m);
        }
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            ChainComplex<Rat> H = hom_fiber_complex(objs[x], objs[y]);
            for (auto& [deg, blk] : H.d.blocks()) C.set_d_block(x, y, deg, blk);
        }
    for (int x = 0; x < n; ++x)
        C.set_identity(x, map_to_hom_elem(x, x, objs[x], objs[x],
                                          GradedMap<Rat>::identity(objs[x].module)));
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z)
                for (auto& [b, nb] : C.hom_dims(x, y).dims())
                    for (auto& [a, na] : C.hom_dims(y, z).dims()) {
                        std::vector<std::vector<std::vector<Rat>>> t(
                            na, std::vector<std::vector<Rat>>(nb));
                        for (std::size_t i = 0; i < na; ++i) {
                            HomElem g{y, z, a, std::vector<Rat>(na, Rat(0))};
                            g.coeffs[i] = Rat(1);
                            GradedMap<Rat> gm = hom_elem_to_map(objs[y], objs[z], g);
                            for (std::size_t j = 0; j < nb; ++j) {
                                HomElem f{x, y, b, std::vector<Rat>(nb, Rat(0))};
                                f.coeffs[j] = Rat(1);
                                GradedMap<Rat> fm = hom_elem_to_map(objs[x], objs[y], f);
                                t[i][j] = map_to_hom_elem(x, z, objs[x], objs[z],
                                                          holo::compose(gm, fm))
                                              .coeffs;
                            }
                        }
                        C.set_composition(x, y, z, a, b, std::move(t));
                    }
    return C;
}

} // namespace holo
