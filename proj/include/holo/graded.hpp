#ifndef HOLO_GRADED_HPP
#define HOLO_GRADED_HPP

#include "holo/matrix.hpp"

#include <map>
#include <string>
#include <vector>

namespace holo {

// Hard cap on the degree range. Keeps block storage dense and turns runaway
// degree arithmetic into loud failures.
constexpr int kDegreeMin = -16;
constexpr int kDegreeMax = 16;

inline void check_degree(int d) {
    if (d < kDegreeMin || d > kDegreeMax)
        throw structural_error("degree " + std::to_string(d) + " outside the supported range");
}

// Finitely supported dimension function degree -> dim.
class GradedModule {
public:
    GradedModule() = default;
    explicit GradedModule(std::map<int, std::size_t> dims) {
        for (auto& [d, n] : dims)
            if (n > 0) set_dim(d, n);
    }

    void set_dim(int d, std::size_t n) {
        check_degree(d);
        if (n == 0)
            dims_.erase(d);
        else
            dims_[d] = n;
    }

    std::size_t dim(int d) const {
        auto it = dims_.find(d);
        return it == dims_.end() ? 0 : it->second;
    }

    std::size_t total_dim() const {
        std::size_t t = 0;
        for (auto& [d, n] : dims_) t += n;
        return t;
    }

    const std::map<int, std::size_t>& dims() const { return dims_; }

    GradedModule shifted(int q) const {
        // M[q]^k = M^{k+q}
        GradedModule r;
        for (auto& [d, n] : dims_) r.set_dim(d - q, n);
        return r;
    }

    GradedModule direct_sum(const GradedModule& o) const {
        GradedModule r = *this;
        for (auto& [d, n] : o.dims_) r.set_dim(d, r.dim(d) + n);
        return r;
    }

    bool operator==(const GradedModule& o) const { return dims_ == o.dims_; }

private:
    std::map<int, std::size_t> dims_;
};

// Sign operators of the total/form/bundle grading. Values on a homogeneous
// element of form degree p and bundle degree q.
struct SignOperator {
    enum Kind { T, J, K, Xi } kind;
    int sign(int p, int q) const {
        switch (kind) {
            case T: return ((p + q) % 2 == 0) ? 1 : -1;
            case J: return (p % 2 == 0) ? 1 : -1;
            case K: return (q % 2 == 0) ? 1 : -1;
            case Xi: return ((q + 1) % 2 == 0) ? 1 : -1;
        }
        return 1;
    }
};

// Homogeneous linear map of a fixed degree between graded modules, stored as
// one block per source degree. Blocks exist exactly where both the source
// degree and the shifted target degree have nonzero dimension.
template <class T>
class GradedMap {
public:
    GradedMap() = default;
    GradedMap(GradedModule src, GradedModule tgt, int degree)
        : src_(std::move(src)), tgt_(std::move(tgt)), degree_(degree) {
        for (auto& [d, n] : src_.dims()) {
            std::size_t m = tgt_.dim(d + degree_);
            if (m > 0) blocks_.emplace(d, Mat<T>(m, n));
        }
    }

    static GradedMap identity(const GradedModule& m) {
        GradedMap f(m, m, 0);
        for (auto& [d, b] : f.blocks_) b = Mat<T>::identity(b.rows());
        return f;
    }

    static GradedMap zero(const GradedModule& src, const GradedModule& tgt, int degree) {
        return GradedMap(src, tgt, degree);
    }

    const GradedModule& source() const { return src_; }
    const GradedModule& target() const { return tgt_; }
    int degree() const { return degree_; }

    bool has_block(int d) const { return blocks_.count(d) != 0; }
    Mat<T>& block(int d) { return blocks_.at(d); }
    const Mat<T>& block(int d) const { return blocks_.at(d); }
    const std::map<int, Mat<T>>& blocks() const { return blocks_; }

    void set_block(int d, Mat<T> m) {
        auto it = blocks_.find(d);
        if (it == blocks_.end())
            throw structural_error("no block at source degree " + std::to_string(d));
        if (m.rows() != it->second.rows() || m.cols() != it->second.cols())
            throw structural_error("block shape mismatch at degree " + std::to_string(d));
        it->second = std::move(m);
    }

    bool is_zero(double tol = 0.0) const {
        for (auto& [d, b] : blocks_)
            if (!b.is_zero(tol)) return false;
        return true;
    }

    double max_abs() const {
        double m = 0.0;
        for (auto& [d, b] : blocks_) m = std::max(m, b.max_abs());
        return m;
    }

    GradedMap operator+(const GradedMap& o) const {
        require_same_shape(o);
        GradedMap r = *this;
        for (auto& [d, b] : r.blocks_) b += o.block(d);
        return r;
    }

    GradedMap operator-(const GradedMap& o) const {
        require_same_shape(o);
        GradedMap r = *this;
        for (auto& [d, b] : r.blocks_) b -= o.block(d);
        return r;
    }

    GradedMap operator-() const {
        GradedMap r = *this;
        for (auto& [d, b] : r.blocks_) b = -b;
        return r;
    }

    friend GradedMap operator*(const T& s, const GradedMap& f) {
        GradedMap r = f;
        for (auto& [d, b] : r.blocks_) b = s * b;
        return r;
    }

    bool operator==(const GradedMap& o) const {
        return degree_ == o.degree_ && src_ == o.src_ && tgt_ == o.tgt_ && blocks_ == o.blocks_;
    }

    // Reinterpret the same blocks with both source and target shifted by q.
    // Degrees relabel; the block at source degree d moves to d - q.
    GradedMap shifted(int q) const {
        GradedMap r(src_.shifted(q), tgt_.shifted(q), degree_);
        for (auto& [d, b] : blocks_) r.blocks_.at(d - q) = b;
        return r;
    }

    // Reinterpret with only the source regraded by q; the map's degree grows
    // by q to compensate.
    GradedMap shift_source(int q) const {
        GradedMap r(src_.shifted(q), tgt_, degree_ + q);
        for (auto& [d, b] : blocks_) r.blocks_.at(d - q) = b;
        return r;
    }

private:
    void require_same_shape(const GradedMap& o) const {
        if (!(src_ == o.src_) || !(tgt_ == o.tgt_) || degree_ != o.degree_)
            throw structural_error("graded map shape mismatch");
    }

    GradedModule src_, tgt_;
    int degree_ = 0;
    std::map<int, Mat<T>> blocks_;
};

// a after b (b first). Degrees add; blocks are matrix products.
template <class T>
GradedMap<T> compose(const GradedMap<T>& a, const GradedMap<T>& b) {
    if (!(a.source() == b.target()))
        throw structural_error("compose: a.source != b.target");
    GradedMap<T> r(b.source(), a.target(), a.degree() + b.degree());
    for (auto& [d, bb] : b.blocks()) {
        if (!r.has_block(d) || !a.has_block(d + b.degree())) continue;
        r.set_block(d, a.block(d + b.degree()) * bb);
    }
    return r;
}

template <class T>
struct ChainComplex {
    GradedModule module;
    GradedMap<T> d; // degree +1 endomorphism

    ChainComplex() = default;
    explicit ChainComplex(GradedModule m)
        : module(m), d(GradedMap<T>(m, m, +1)) {}
    ChainComplex(GradedModule m, GradedMap<T> diff) : module(std::move(m)), d(std::move(diff)) {
        if (d.degree() != 1 || !(d.source() == module) || !(d.target() == module))
            throw structural_error("chain complex: differential must be a degree +1 endomorphism");
    }

    // d*d = 0; exact backend literally, double backend within tol.
    bool is_valid(double tol = 1e-10) const {
        return compose(d, d).is_zero(tol);
    }
};

// Per-degree cohomology dimensions with representative bases (columns of the
// kernel spanning a complement of the image).
template <class T>
struct Cohomology {
    GradedModule dims;
    // representatives[k] = columns (coordinate vectors in degree k) spanning H^k
    std::map<int, std::vector<std::vector<T>>> representatives;
};

template <class T>
Cohomology<T> cohomology(const ChainComplex<T>& c, double tol = 1e-12) {
    if (!c.is_valid(scalar_traits<T>::exact ? 0.0 : 1e-8))
        throw invariant_error("cohomology: differential does not square to zero");
    Cohomology<T> H;
    for (auto& [k, nk] : c.module.dims()) {
        Mat<T> dk = c.d.has_block(k) ? c.d.block(k) : Mat<T>(c.module.dim(k + 1), nk);
        // kernel of d_k
        auto ker = kernel_basis(dk.rows() ? dk : Mat<T>(0, nk), tol);
        // image of d_{k-1}
        Mat<T> dkm = c.d.has_block(k - 1) ? c.d.block(k - 1)
                                          : Mat<T>(nk, c.module.dim(k - 1));
        std::size_t rk_im = dkm.cols() ? rank_of(dkm, tol) : 0;
        if (ker.size() < rk_im)
            throw invariant_error("cohomology: image larger than kernel");
        std::size_t hk = ker.size() - rk_im;
        if (hk == 0) continue;
        H.dims.set_dim(k, hk);
        // representatives: kernel vectors independent modulo the image.
        // Assemble [image | kernel...] and keep kernel columns that raise rank.
        std::vector<std::vector<T>> reps;
        Mat<T> acc(nk, rk_im + ker.size());
        std::size_t col = 0, have = rk_im;
        // image columns: the pivot columns of d_{k-1}
        if (rk_im > 0) {
            auto e = row_echelon(dkm, tol);
            for (std::size_t r = 0; r < e.rank; ++r) {
                for (std::size_t i = 0; i < nk; ++i)
                    acc(i, col) = dkm(i, e.pivot_cols[r]);
                ++col;
            }
        }
        std::size_t cur_rank = rank_of(acc, tol);
        for (auto& v : ker) {
            for (std::size_t i = 0; i < nk; ++i) acc(i, col) = v[i];
            ++col;
            std::size_t nr = rank_of(acc, tol);
            if (nr > cur_rank) {
                cur_rank = nr;
                reps.push_back(v);
                if (reps.size() == hk) break;
            } else {
                // drop the column again
                --col;
                for (std::size_t i = 0; i < nk; ++i) acc(i, col) = T(0);
            }
        }
        H.representatives[k] = std::move(reps);
    }
    return H;
}

// dims(k) of the output = dims(k+q) of the input; differential scaled by (-1)^q.
template <class T>
ChainComplex<T> shift_complex(const ChainComplex<T>& c, int q) {
    ChainComplex<T> r(c.module.shifted(q));
    T s = (q % 2 == 0) ? T(1) : T(-1);
    for (auto& [deg, blk] : c.d.blocks()) {
        if (r.d.has_block(deg - q)) r.d.set_block(deg - q, s * blk);
    }
    return r;
}

// phi closed of degree q: d_tgt phi - (-1)^q phi d_src = 0.
template <class T>
GradedMap<T> closure_defect(const GradedMap<T>& phi, const ChainComplex<T>& src,
                            const ChainComplex<T>& tgt) {
    T s = (phi.degree() % 2 == 0) ? T(1) : T(-1);
    return compose(tgt.d, phi) - s * compose(phi, src.d);
}

// C(phi)^k = src[1-q]^k + tgt^k with the lower-triangular differential
// [[d_src[1-q], 0], [phi(as block), d_tgt]].
template <class T>
ChainComplex<T> mapping_cone(const GradedMap<T>& phi, const ChainComplex<T>& src,
                             const ChainComplex<T>& tgt, double tol = 1e-10) {
    if (!closure_defect(phi, src, tgt).is_zero(scalar_traits<T>::exact ? 0.0 : tol))
        throw invariant_error("mapping_cone: morphism is not closed");
    int q = phi.degree();
    int s = 1 - q;
    GradedModule shifted = src.module.shifted(s);
    GradedModule m = shifted.direct_sum(tgt.module);
    ChainComplex<T> cone(m);
    T sd = (s % 2 == 0) ? T(1) : T(-1);
    for (auto& [k, n] : m.dims()) {
        if (!cone.d.has_block(k)) continue;
        Mat<T> blk(m.dim(k + 1), n);
        std::size_t a_in = shifted.dim(k), a_out = shifted.dim(k + 1);
        // 11: shifted differential (-1)^s d_src, block at original degree k+s
        if (a_in && a_out && src.d.has_block(k + s)) {
            const Mat<T>& b = src.d.block(k + s);
            for (std::size_t i = 0; i < b.rows(); ++i)
                for (std::size_t j = 0; j < b.cols(); ++j)
                    blk(i, j) = sd * b(i, j);
        }
        // 21: phi as a map shifted^k = src^{k+s} -> tgt^{k+1} (degree q maps
        // src^{k+s} to tgt^{k+s+q} = tgt^{k+1})
        if (a_in && phi.has_block(k + s)) {
            const Mat<T>& b = phi.block(k + s);
            for (std::size_t i = 0; i < b.rows(); ++i)
                for (std::size_t j = 0; j < b.cols(); ++j)
                    blk(a_out + i, j) = b(i, j);
        }
        // 22: d_tgt
        if (tgt.module.dim(k) && tgt.d.has_block(k)) {
            const Mat<T>& b = tgt.d.block(k);
            for (std::size_t i = 0; i < b.rows(); ++i)
                for (std::size_t j = 0; j < b.cols(); ++j)
                    blk(a_out + i, a_in + j) = b(i, j);
        }
        cone.d.set_block(k, std::move(blk));
    }
    return cone;
}

template <class T>
bool is_acyclic(const ChainComplex<T>& c, double tol = 1e-12) {
    return cohomology(c, tol).dims.total_dim() == 0;
}

template <class T>
bool is_quasi_iso(const GradedMap<T>& phi, const ChainComplex<T>& src,
                  const ChainComplex<T>& tgt, double tol = 1e-12) {
    return is_acyclic(mapping_cone(phi, src, tgt), tol);
}

} // namespace holo

#endif
