#ifndef HOLO_LOCSYS_HPP
#define HOLO_LOCSYS_HPP

#include "holo/graded.hpp"
#include "holo/simplicial.hpp"

#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace holo {

template <class T>
using VertexData = std::map<int, ChainComplex<T>>;

// The sign on the second term of the vertex-differential commutator.
// `internal_degree` is the unique choice making (d + delta_hat)^2 = 0 and d a
// derivation of cup (the default everywhere). The other two reproduce the
// printed variants for comparison tests.
enum class DiffConvention { internal_degree, total_degree, unsigned_second_term };

// Sparse family of homogeneous maps sigma_k -> Hom^{q-k}(F(sigma_k), G(sigma_0)).
// Absent component = 0. Vertex components (k = 0) are allowed; Maurer-Cartan
// elements of a system store only k >= 1 (their k = 0 part is the vertex
// differential).
template <class T>
struct Components {
    const SimplicialComplex* base = nullptr;
    const VertexData<T>* src = nullptr;
    const VertexData<T>* tgt = nullptr;
    int q = 0; // total degree
    std::map<Simplex, GradedMap<T>> vals;

    GradedMap<T> zero_at(const Simplex& s) const {
        return GradedMap<T>::zero(src->at(s.v.back()).module,
                                  tgt->at(s.v.front()).module, q - s.dim());
    }

    GradedMap<T> at(const Simplex& s) const {
        auto it = vals.find(s);
        return it == vals.end() ? zero_at(s) : it->second;
    }

    bool has(const Simplex& s) const { return vals.count(s) != 0; }

    void set(const Simplex& s, GradedMap<T> m) {
        if (m.degree() != q - s.dim())
            throw structural_error("component degree must be q - k");
        vals[s] = std::move(m);
    }

    void add(const Simplex& s, const GradedMap<T>& m) {
        auto it = vals.find(s);
        if (it == vals.end())
            vals.emplace(s, m);
        else
            it->second = it->second + m;
    }

    bool is_zero(double tol = 0.0) const {
        for (auto& [s, m] : vals)
            if (!m.is_zero(tol)) return false;
        return true;
    }

    double max_abs() const {
        double r = 0.0;
        for (auto& [s, m] : vals) r = std::max(r, m.max_abs());
        return r;
    }

    Components operator+(const Components& o) const {
        Components r = *this;
        for (auto& [s, m] : o.vals) r.add(s, m);
        return r;
    }

    Components operator-() const {
        Components r = *this;
        for (auto& [s, m] : r.vals) m = -m;
        return r;
    }

    friend Components operator*(const T& c, const Components& x) {
        Components r = x;
        for (auto& [s, m] : r.vals) m = c * m;
        return r;
    }
};

template <class T>
int sign_pm(T) = delete;
inline int parity_sign(int e) { return (e % 2 == 0) ? 1 : -1; }

// Commutator with the vertex differentials:
//   (dx)(sigma_k) = d_{tgt(sigma_0)} x_k - sign * x_k d_{src(sigma_k)}
template <class T>
Components<T> d_comm(const Components<T>& x,
                     DiffConvention conv = DiffConvention::internal_degree) {
    Components<T> r{x.base, x.src, x.tgt, x.q + 1, {}};
    for (auto& [s, m] : x.vals) {
        int k = s.dim();
        const auto& dF = x.src->at(s.v.back()).d;
        const auto& dG = x.tgt->at(s.v.front()).d;
        int sgn = 1;
        switch (conv) {
            case DiffConvention::internal_degree: sgn = parity_sign(x.q - k); break;
            case DiffConvention::total_degree: sgn = parity_sign(x.q); break;
            case DiffConvention::unsigned_second_term: sgn = 1; break;
        }
        GradedMap<T> v = compose(dG, m) - T(sgn) * compose(m, dF);
        r.add(s, v);
    }
    return r;
}

// Alternating interior-face sum with the total-degree twist:
//   (delta_hat x)(sigma_k) = (-1)^{|x|} sum_{j=1..k-1} (-1)^j x_{k-1}(del_j sigma)
template <class T>
Components<T> delta_hat(const Components<T>& x) {
    Components<T> r{x.base, x.src, x.tgt, x.q + 1, {}};
    int tw = parity_sign(x.q);
    for (const Simplex& s : x.base->positive_simplices()) {
        int k = s.dim();
        if (k < 2) continue;
        std::optional<GradedMap<T>> acc;
        for (int j = 1; j < k; ++j) {
            Simplex f = s.face(j);
            if (!x.has(f)) continue;
            GradedMap<T> term = T(tw * parity_sign(j)) * x.at(f);
            if (!acc)
                acc = term;
            else
                acc = *acc + term;
        }
        if (acc) r.add(s, *acc);
    }
    return r;
}

// (x cup y)(sigma_k) = sum_t (-1)^{t |y|} x^t(front) o y^{k-t}(back).
// x maps G -> H, y maps F -> G; the splice ranges over whatever components
// are stored, so Maurer-Cartan elements (no vertex part) give t = 1..k-1 and
// morphisms include the endpoint terms.
template <class T>
Components<T> cup(const Components<T>& x, const Components<T>& y) {
    if (x.src != y.tgt)
        throw structural_error("cup: intermediate vertex data mismatch");
    Components<T> r{x.base, y.src, x.tgt, x.q + y.q, {}};
    std::vector<Simplex> all;
    for (int v = 0; v < x.base->vertex_count(); ++v) all.push_back(Simplex({v}));
    for (const Simplex& s : x.base->positive_simplices()) all.push_back(s);
    for (const Simplex& s : all) {
        int k = s.dim();
        std::optional<GradedMap<T>> acc;
        for (int t = 0; t <= k; ++t) {
            Simplex fr = s.front(t), bk = s.back(t);
            if (!x.has(fr) || !y.has(bk)) continue;
            GradedMap<T> term = T(parity_sign(t * y.q)) * compose(x.at(fr), y.at(bk));
            if (!acc)
                acc = term;
            else
                acc = *acc + term;
        }
        if (acc) r.add(s, *acc);
    }
    return r;
}

// An infinity-local system: chain complex per vertex plus degree (1-k) maps
// on k-simplices satisfying Maurer-Cartan.
template <class T>
struct InfinityLocalSystem {
    SimplicialComplex base;
    VertexData<T> vertex_data;
    std::map<Simplex, GradedMap<T>> f; // k >= 1 only

    Components<T> mc_element() const {
        Components<T> c{&base, &vertex_data, &vertex_data, 1, {}};
        for (auto& [s, m] : f) c.vals.emplace(s, m);
        return c;
    }

    GradedMap<T> value(const Simplex& s) const {
        auto it = f.find(s);
        if (it != f.end()) return it->second;
        return GradedMap<T>::zero(vertex_data.at(s.v.back()).module,
                                  vertex_data.at(s.v.front()).module, 1 - s.dim());
    }
};

// Residual of dF + delta_hat F + F cup F, componentwise on every simplex of
// dim >= 1. Zero exactly iff the candidate is an infinity-local system.
template <class T>
Components<T> mc_residual(const InfinityLocalSystem<T>& F) {
    Components<T> f = F.mc_element();
    Components<T> r = d_comm(f);
    r = r + delta_hat(f);
    r = r + cup(f, f);
    return r;
}

template <class T>
bool mc_holds(const InfinityLocalSystem<T>& F, double tol = 0.0) {
    return mc_residual(F).is_zero(tol);
}

// Morphism of total degree q between systems on the same base.
template <class T>
struct LocSysMorphism {
    const InfinityLocalSystem<T>* source = nullptr;
    const InfinityLocalSystem<T>* target = nullptr;
    int q = 0;
    std::map<Simplex, GradedMap<T>> comps; // includes vertex components

    Components<T> components() const {
        Components<T> c{&source->base, &source->vertex_data, &target->vertex_data, q, {}};
        for (auto& [s, m] : comps) c.vals.emplace(s, m);
        return c;
    }
};

// D phi = delta_hat phi + d phi + G cup phi - (-1)^{|phi|} phi cup F.
template <class T>
Components<T> hom_D(const LocSysMorphism<T>& phi,
                    DiffConvention conv = DiffConvention::internal_degree) {
    if (&phi.source->base != &phi.target->base &&
        !(phi.source->base.vertex_count() == phi.target->base.vertex_count()))
        throw structural_error("hom_D: base mismatch");
    Components<T> x = phi.components();
    Components<T> g = phi.target->mc_element();
    Components<T> f = phi.source->mc_element();
    Components<T> r = delta_hat(x) + d_comm(x, conv);
    r = r + cup(g, x);
    r = r + T(-parity_sign(phi.q)) * cup(x, f);
    return r;
}

template <class T>
bool is_closed(const LocSysMorphism<T>& phi, double tol = 0.0) {
    return hom_D(phi).is_zero(tol);
}

// Composition of morphisms (full-range cup; identity morphism is the unit).
template <class T>
LocSysMorphism<T> compose_morphisms(const LocSysMorphism<T>& psi, const LocSysMorphism<T>& phi) {
    if (psi.source != phi.target)
        throw structural_error("compose_morphisms: psi.source must be phi.target");
    Components<T> c = cup(psi.components(), phi.components());
    LocSysMorphism<T> r{phi.source, psi.target, psi.q + phi.q, {}};
    for (auto& [s, m] : c.vals) r.comps.emplace(s, m);
    return r;
}

template <class T>
LocSysMorphism<T> identity_morphism(const InfinityLocalSystem<T>& F) {
    LocSysMorphism<T> r{&F, &F, 0, {}};
    for (auto& [v, c] : F.vertex_data)
        r.comps.emplace(Simplex({v}), GradedMap<T>::identity(c.module));
    return r;
}

// Ordinary local system: vertex ranks with invertible edge maps that compose
// along 2-simplices. Promotion stores the edge maps as f_1 and nothing else.
template <class T>
InfinityLocalSystem<T> promote(const SimplicialComplex& base,
                               const std::map<int, std::size_t>& rank,
                               const std::map<Simplex, Mat<T>>& edge_maps) {
    InfinityLocalSystem<T> F;
    F.base = base;
    for (int v = 0; v < base.vertex_count(); ++v) {
        GradedModule m;
        m.set_dim(0, rank.at(v));
        F.vertex_data.emplace(v, ChainComplex<T>(m));
    }
    for (auto& e : base.simplices(1)) {
        auto it = edge_maps.find(e);
        if (it == edge_maps.end())
            throw structural_error("promote: missing edge map");
        GradedMap<T> g(F.vertex_data.at(e.v[1]).module, F.vertex_data.at(e.v[0]).module, 0);
        g.set_block(0, it->second);
        F.f.emplace(e, g);
    }
    for (auto& t : base.simplices(2)) {
        // rho(01) o rho(12) = rho(02)
        Mat<T> lhs = edge_maps.at(t.sub(0, 1)) * edge_maps.at(t.sub(1, 2));
        if (!(lhs == edge_maps.at(t.face(1))))
            throw invariant_error("promote: triangle (" + std::to_string(t.v[0]) + "," +
                                  std::to_string(t.v[1]) + "," + std::to_string(t.v[2]) +
                                  ") is not compatible");
    }
    return F;
}

// F[q]: vertex complexes shifted by q, component k scaled by (-1)^{q(k+1)}.
template <class T>
InfinityLocalSystem<T> shift_system(const InfinityLocalSystem<T>& F, int q) {
    InfinityLocalSystem<T> r;
    r.base = F.base;
    for (auto& [v, c] : F.vertex_data) r.vertex_data.emplace(v, shift_complex(c, q));
    for (auto& [s, m] : F.f) {
        T sc = T(parity_sign(q * (s.dim() + 1)));
        r.f.emplace(s, sc * m.shifted(q));
    }
    return r;
}

// Direct-sum helpers for the cone construction. Per degree, the shifted
// source part comes first.
template <class T>
GradedMap<T> block_lower_triangular(const GradedMap<T>& a11, const GradedMap<T>& a21,
                                    const GradedMap<T>& a22) {
    // a11 : A -> A', a21 : A -> B', a22 : B -> B', all of equal degree
    int deg = a11.degree();
    if (a21.degree() != deg || a22.degree() != deg)
        throw structural_error("block map: degree mismatch");
    GradedModule src = a11.source().direct_sum(a22.source());
    GradedModule tgt = a11.target().direct_sum(a22.target());
    GradedMap<T> r(src, tgt, deg);
    for (auto& [d, blk] : r.blocks()) {
        std::size_t aci = a11.source().dim(d), aro = a11.target().dim(d + deg);
        Mat<T> m(tgt.dim(d + deg), src.dim(d));
        if (a11.has_block(d)) {
            const Mat<T>& b = a11.block(d);
            for (std::size_t i = 0; i < b.rows(); ++i)
                for (std::size_t j = 0; j < b.cols(); ++j) m(i, j) = b(i, j);
        }
        if (a21.has_block(d)) {
            const Mat<T>& b = a21.block(d);
            for (std::size_t i = 0; i < b.rows(); ++i)
                for (std::size_t j = 0; j < b.cols(); ++j) m(aro + i, j) = b(i, j);
        }
        if (a22.has_block(d)) {
            const Mat<T>& b = a22.block(d);
            for (std::size_t i = 0; i < b.rows(); ++i)
                for (std::size_t j = 0; j < b.cols(); ++j) m(aro + i, aci + j) = b(i, j);
        }
        r.set_block(d, std::move(m));
    }
    return r;
}

// Candidate cone system of a (not necessarily closed) morphism of degree q:
// vertices F[1-q](x) + G(x), components [[f[1-q], 0], [(-1)^{k(q+1)} phi, g]].
// Its Maurer-Cartan residual vanishes iff D phi = 0; the 21-block of the
// residual is (-1)^{k(q+1)} (D phi)_k.
template <class T>
InfinityLocalSystem<T> cone_system(const LocSysMorphism<T>& phi) {
    const auto& F = *phi.source;
    const auto& G = *phi.target;
    int q = phi.q, s = 1 - q;
    InfinityLocalSystem<T> Fs = shift_system(F, s);
    InfinityLocalSystem<T> C;
    C.base = F.base;
    for (auto& [v, cF] : Fs.vertex_data) {
        const auto& cG = G.vertex_data.at(v);
        GradedModule m = cF.module.direct_sum(cG.module);
        Simplex vs({v});
        GradedMap<T> phi0 = phi.comps.count(vs)
                                ? phi.comps.at(vs).shift_source(s)
                                : GradedMap<T>::zero(cF.module, cG.module, 1);
        GradedMap<T> d = block_lower_triangular(cF.d, phi0, cG.d);
        C.vertex_data.emplace(v, ChainComplex<T>(m, d));
    }
    for (const Simplex& sx : F.base.positive_simplices()) {
        int k = sx.dim();
        GradedMap<T> a11 = Fs.value(sx);
        GradedMap<T> a22 = G.value(sx);
        GradedMap<T> a21 =
            phi.comps.count(sx)
                ? T(parity_sign(k * (q + 1))) * phi.comps.at(sx).shift_source(s)
                : GradedMap<T>::zero(a11.source(), a22.target(), 1 - k);
        GradedMap<T> blk = block_lower_triangular(a11, a21, a22);
        if (!blk.is_zero()) C.f.emplace(sx, blk);
    }
    return C;
}

// Extract the 21-block of a cone residual component as a map F[1-q] -> G part.
template <class T>
GradedMap<T> cone_block21(const GradedMap<T>& m, const GradedModule& srcF,
                          const GradedModule& tgtG) {
    GradedMap<T> r(srcF, tgtG, m.degree());
    for (auto& [d, blk] : r.blocks()) {
        if (!m.has_block(d)) continue;
        const Mat<T>& big = m.block(d);
        std::size_t row_off = big.rows() - blk.rows();
        Mat<T> out(blk.rows(), blk.cols());
        for (std::size_t i = 0; i < blk.rows(); ++i)
            for (std::size_t j = 0; j < blk.cols(); ++j)
                out(i, j) = big(row_off + i, j);
        r.set_block(d, std::move(out));
    }
    return r;
}

// ---- spectral sequence of the simplicial filtration ----

template <class T>
struct SpectralPage {
    int page = 0;
    // dims[p][q] = dim E_r^{p,q}, flattened as map
    std::map<std::pair<int, int>, std::size_t> dims;
    // page 0 only: the fiberwise differential per simplex
    std::map<Simplex, GradedMap<T>> d0;
    // page 1 only: induced edge maps on vertexwise Hom-cohomology classes,
    // one matrix per (edge, cohomological degree)
    std::map<std::pair<Simplex, int>, Mat<T>> edge_maps;
};

// Hom complex at a single simplex: Hom^*(F(sigma_k), G(sigma_0)) with
// d0(phi) = d_G phi - (-1)^{deg phi} phi d_F.
template <class T>
ChainComplex<T> hom_fiber_complex(const ChainComplex<T>& src, const ChainComplex<T>& tgt) {
    GradedModule m;
    for (auto& [ds, ns] : src.module.dims())
        for (auto& [dt, nt] : tgt.module.dims()) {
            int deg = dt - ds;
            if (deg < kDegreeMin || deg > kDegreeMax) continue;
            m.set_dim(deg, m.dim(deg) + ns * nt);
        }
    // basis of Hom^deg: ordered by (ds, row, col)
    auto index = [&](int deg, int ds, std::size_t r, std::size_t c) {
        std::size_t off = 0;
        for (auto& [ds2, ns2] : src.module.dims()) {
            int dt2 = ds2 + deg;
            std::size_t nt2 = tgt.module.dim(dt2);
            if (nt2 == 0) continue;
            if (ds2 == ds) return off + r * ns2 + c;
            off += ns2 * nt2;
        }
        throw structural_error("hom basis index out of range");
    };
    ChainComplex<T> H(m);
    for (auto& [deg, n] : m.dims()) {
        if (!H.d.has_block(deg)) continue;
        Mat<T> D(m.dim(deg + 1), n);
        int sgn = parity_sign(deg);
        for (auto& [ds, ns] : src.module.dims()) {
            std::size_t nt = tgt.module.dim(ds + deg);
            if (nt == 0) continue;
            for (std::size_t r = 0; r < nt; ++r)
                for (std::size_t c = 0; c < ns; ++c) {
                    std::size_t col = index(deg, ds, r, c);
                    // d_G o phi : block at ds of target raises dt
                    if (tgt.d.has_block(ds + deg)) {
                        const Mat<T>& dg = tgt.d.block(ds + deg);
                        for (std::size_t i = 0; i < dg.rows(); ++i)
                            if (!(dg(i, r) == T(0)))
                                D(index(deg + 1, ds, i, c), col) += dg(i, r);
                    }
                    // -(-1)^deg phi o d_F : d_F block at ds - 1
                    if (src.d.has_block(ds - 1)) {
                        const Mat<T>& df = src.d.block(ds - 1);
                        for (std::size_t j = 0; j < df.cols(); ++j)
                            if (!(df(c, j) == T(0)))
                                D(index(deg + 1, ds - 1, r, j), col) -= T(sgn) * df(c, j);
                    }
                }
        }
        H.d.set_block(deg, std::move(D));
    }
    return H;
}

template <class T>
SpectralPage<T> spectral_page0(const InfinityLocalSystem<T>& F, const InfinityLocalSystem<T>& G) {
    SpectralPage<T> P;
    P.page = 0;
    for (int p = 0; p <= F.base.max_dim(); ++p) {
        for (const Simplex& s : F.base.simplices(p)) {
            ChainComplex<T> H = hom_fiber_complex(F.vertex_data.at(s.v.back()),
                                                  G.vertex_data.at(s.v.front()));
            for (auto& [deg, n] : H.module.dims())
                P.dims[{p, deg}] += n;
            P.d0.emplace(s, H.d);
        }
    }
    return P;
}

// Express a kernel vector in terms of chosen cohomology representatives,
// modulo the image of d at the previous degree. Solves [reps | image] c = v.
template <class T>
std::vector<T> cohomology_coordinates(const ChainComplex<T>& c, const Cohomology<T>& H, int deg,
                                      const std::vector<T>& v, double tol = 1e-12) {
    auto it = H.representatives.find(deg);
    std::size_t h = (it == H.representatives.end()) ? 0 : it->second.size();
    std::size_t n = c.module.dim(deg);
    std::size_t ncols_img = c.module.dim(deg - 1);
    Mat<T> A(n, h + ncols_img);
    for (std::size_t j = 0; j < h; ++j)
        for (std::size_t i = 0; i < n; ++i) A(i, j) = it->second[j][i];
    if (ncols_img && c.d.has_block(deg - 1)) {
        const Mat<T>& dm = c.d.block(deg - 1);
        for (std::size_t j = 0; j < ncols_img; ++j)
            for (std::size_t i = 0; i < n; ++i) A(i, h + j) = dm(i, j);
    }
    std::vector<T> x;
    if (!solve(A, v, x, tol))
        throw invariant_error("cohomology_coordinates: vector is not a cocycle class");
    return std::vector<T>(x.begin(), x.begin() + h);
}

// Page 1: per-vertex cohomology of the Hom fiber plus, for each edge, the
// conjugation map on those classes induced by the edge data of F and G. The
// F edge maps must be quasi-isomorphisms (ordinary local system regime).
template <class T>
SpectralPage<T> spectral_page1(const InfinityLocalSystem<T>& F, const InfinityLocalSystem<T>& G,
                               double tol = 1e-12) {
    SpectralPage<T> P;
    P.page = 1;
    // fibers and their cohomology per vertex
    std::map<int, ChainComplex<T>> fiber;
    std::map<int, Cohomology<T>> fibH;
    for (int v = 0; v < F.base.vertex_count(); ++v) {
        fiber.emplace(v, hom_fiber_complex(F.vertex_data.at(v), G.vertex_data.at(v)));
        fibH.emplace(v, cohomology(fiber.at(v), tol));
    }
    for (int p = 0; p <= F.base.max_dim(); ++p)
        for (const Simplex& s : F.base.simplices(p)) {
            ChainComplex<T> Hs = hom_fiber_complex(F.vertex_data.at(s.v.back()),
                                                   G.vertex_data.at(s.v.front()));
            Cohomology<T> coh = cohomology(Hs, tol);
            for (auto& [deg, n] : coh.dims.dims()) P.dims[{p, deg}] += n;
        }
    // edge maps: phi |-> g_e o phi o (f_e)^{-1} on cohomology classes.
    for (const Simplex& e : F.base.simplices(1)) {
        int a = e.v[0], b = e.v[1];
        const GradedMap<T> fe = F.value(e);
        const GradedMap<T> ge = G.value(e);
        // invert [f_e] on H^*(F_b) -> H^*(F_a): here we need f_e to be a
        // quasi-iso; conjugate representatives directly. For Hom classes we
        // map phi_b : F(b) -> G(b) to g_e phi_b f_e^{-1} : F(a) -> G(a);
        // f_e^{-1} is computed degreewise on the nose (requires invertible
        // blocks, the promoted/ordinary regime).
        const auto& Fb = F.vertex_data.at(b);
        const auto& Fa = F.vertex_data.at(a);
        GradedMap<T> fe_inv(Fa.module, Fb.module, 0);
        for (auto& [d, blk] : fe.blocks()) {
            if (blk.rows() != blk.cols())
                throw invariant_error("spectral_page1: edge map not square; cannot invert");
            // solve blk * X = I
            std::size_t n = blk.rows();
            Mat<T> X(n, n);
            for (std::size_t col = 0; col < n; ++col) {
                std::vector<T> ei(n, T(0)), x;
                ei[col] = T(1);
                if (!solve(blk, ei, x, tol))
                    throw invariant_error("spectral_page1: edge map is not invertible");
                for (std::size_t i = 0; i < n; ++i) X(i, col) = x[i];
            }
            fe_inv.set_block(d, std::move(X));
        }
        const ChainComplex<T>& Hb = fiber.at(b);
        const Cohomology<T>& cohb = fibH.at(b);
        const ChainComplex<T>& Ha = fiber.at(a);
        const Cohomology<T>& coha = fibH.at(a);
        for (auto& [deg, reps] : cohb.representatives) {
            std::size_t hb = reps.size();
            auto ita = coha.representatives.find(deg);
            std::size_t ha = (ita == coha.representatives.end()) ? 0 : ita->second.size();
            Mat<T> M(ha, hb);
            for (std::size_t j = 0; j < hb; ++j) {
                // rep -> GradedMap phi_b, conjugate, re-expand
                GradedMap<T> phib(F.vertex_data.at(b).module, G.vertex_data.at(b).module, deg);
                std::size_t off = 0;
                for (auto& [ds, ns] : F.vertex_data.at(b).module.dims()) {
                    std::size_t nt = G.vertex_data.at(b).module.dim(ds + deg);
                    if (nt == 0) continue;
                    Mat<T> blk(nt, ns);
                    for (std::size_t r = 0; r < nt; ++r)
                        for (std::size_t cc = 0; cc < ns; ++cc)
                            blk(r, cc) = reps[j][off + r * ns + cc];
                    off += nt * ns;
                    phib.set_block(ds, std::move(blk));
                }
                GradedMap<T> conj = compose(compose(ge, phib), fe_inv);
                // flatten conj into the Ha fiber basis
                std::vector<T> vec(Ha.module.dim(deg), T(0));
                std::size_t off2 = 0;
                for (auto& [ds, ns] : F.vertex_data.at(a).module.dims()) {
                    std::size_t nt = G.vertex_data.at(a).module.dim(ds + deg);
                    if (nt == 0) continue;
                    if (conj.has_block(ds)) {
                        const Mat<T>& blk = conj.block(ds);
                        for (std::size_t r = 0; r < nt; ++r)
                            for (std::size_t cc = 0; cc < ns; ++cc)
                                vec[off2 + r * ns + cc] = blk(r, cc);
                    }
                    off2 += nt * ns;
                }
                std::vector<T> coords = cohomology_coordinates(Ha, coha, deg, vec, tol);
                for (std::size_t i = 0; i < ha; ++i) M(i, j) = coords[i];
            }
            P.edge_maps[{e, deg}] = std::move(M);
        }
    }
    return P;
}

// Page-1 edge maps compose along every 2-simplex (ordinary local system).
template <class T>
bool spectral_page1_triangles_commute(const SpectralPage<T>& P, const SimplicialComplex& base) {
    for (const Simplex& t : base.simplices(2)) {
        Simplex e01 = t.sub(0, 1), e12 = t.sub(1, 2), e02 = t.sub(0, 2);
        for (auto& [key, M02] : P.edge_maps) {
            if (!(key.first == e02)) continue;
            int deg = key.second;
            auto i01 = P.edge_maps.find({e01, deg});
            auto i12 = P.edge_maps.find({e12, deg});
            if (i01 == P.edge_maps.end() || i12 == P.edge_maps.end()) continue;
            if (!(i01->second * i12->second == M02)) return false;
        }
    }
    return true;
}

// ---- total complex of Loc(F, G) and its cohomology ----

template <class T>
struct HomBasisElement {
    Simplex s;
    int src_deg; // block degree inside the component map
    std::size_t row, col;
};

template <class T>
struct FlattenedHom {
    std::vector<Simplex> simplices; // lexicographic, all dims >= 0
    std::map<int, std::vector<HomBasisElement<T>>> basis; // per total degree
    ChainComplex<T> total;
};

template <class T>
FlattenedHom<T> flatten_hom(const InfinityLocalSystem<T>& F, const InfinityLocalSystem<T>& G) {
    FlattenedHom<T> out;
    for (int d = 0; d <= F.base.max_dim(); ++d)
        for (const Simplex& s : F.base.simplices(d)) out.simplices.push_back(s);
    std::sort(out.simplices.begin(), out.simplices.end());

    GradedModule m;
    for (const Simplex& s : out.simplices) {
        int k = s.dim();
        const GradedModule& A = F.vertex_data.at(s.v.back()).module;
        const GradedModule& B = G.vertex_data.at(s.v.front()).module;
        for (auto& [ds, ns] : A.dims())
            for (auto& [dt, nt] : B.dims()) {
                int n = k + dt - ds; // total degree
                if (n < kDegreeMin || n > kDegreeMax) continue;
                for (std::size_t r = 0; r < nt; ++r)
                    for (std::size_t c = 0; c < ns; ++c)
                        out.basis[n].push_back({s, ds, r, c});
                m.set_dim(n, m.dim(n) + ns * nt);
            }
    }
    out.total = ChainComplex<T>(m);
    auto index_of = [&](int n, const Simplex& s, int ds, std::size_t r, std::size_t c) {
        const auto& vec = out.basis.at(n);
        for (std::size_t i = 0; i < vec.size(); ++i) {
            const auto& b = vec[i];
            if (b.s == s && b.src_deg == ds && b.row == r && b.col == c) return i;
        }
        throw structural_error("flatten_hom: basis element not found");
    };
    for (auto& [n, vec] : out.basis) {
        if (!out.total.d.has_block(n)) continue;
        Mat<T> D(m.dim(n + 1), vec.size());
        for (std::size_t j = 0; j < vec.size(); ++j) {
            const auto& b = vec[j];
            LocSysMorphism<T> phi{&F, &G, n, {}};
            GradedMap<T> g(F.vertex_data.at(b.s.v.back()).module,
                           G.vertex_data.at(b.s.v.front()).module, n - b.s.dim());
            Mat<T> blk(g.block(b.src_deg).rows(), g.block(b.src_deg).cols());
            blk(b.row, b.col) = T(1);
            g.set_block(b.src_deg, std::move(blk));
            phi.comps.emplace(b.s, std::move(g));
            Components<T> Dphi = hom_D(phi);
            for (auto& [s2, m2] : Dphi.vals) {
                for (auto& [ds2, blk2] : m2.blocks())
                    for (std::size_t r2 = 0; r2 < blk2.rows(); ++r2)
                        for (std::size_t c2 = 0; c2 < blk2.cols(); ++c2)
                            if (!(blk2(r2, c2) == T(0)))
                                D(index_of(n + 1, s2, ds2, r2, c2), j) += blk2(r2, c2);
            }
        }
        out.total.d.set_block(n, std::move(D));
    }
    return out;
}

// Cohomology of (Loc(F,G), D).
template <class T>
GradedModule hom_cohomology(const InfinityLocalSystem<T>& F, const InfinityLocalSystem<T>& G,
                            double tol = 1e-12) {
    FlattenedHom<T> fl = flatten_hom(F, G);
    return cohomology(fl.total, tol).dims;
}

// Prop HE criterion: closed phi is a homotopy equivalence iff phi^0 is a
// vertexwise quasi-isomorphism.
template <class T>
bool is_homotopy_equivalence(const LocSysMorphism<T>& phi, double tol = 1e-12) {
    if (!is_closed(phi, scalar_traits<T>::exact ? 0.0 : 1e-8))
        throw invariant_error("is_homotopy_equivalence: morphism is not closed");
    for (int v = 0; v < phi.source->base.vertex_count(); ++v) {
        Simplex vs({v});
        const auto& cF = phi.source->vertex_data.at(v);
        const auto& cG = phi.target->vertex_data.at(v);
        GradedMap<T> p0 = phi.comps.count(vs)
                              ? phi.comps.at(vs)
                              : GradedMap<T>::zero(cF.module, cG.module, phi.q);
        if (p0.degree() != 0)
            throw structural_error("is_homotopy_equivalence: expected a degree-0 morphism");
        if (!is_quasi_iso(p0, cF, cG, tol)) return false;
    }
    return true;
}

} // namespace holo

#endif
