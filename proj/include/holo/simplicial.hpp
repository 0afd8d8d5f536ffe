#ifndef HOLO_SIMPLICIAL_HPP
#define HOLO_SIMPLICIAL_HPP

#include "holo/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <vector>

namespace holo {

// Strictly increasing vertex tuple; orientation comes from the global vertex
// order.
struct Simplex {
    std::vector<int> v;

    Simplex() = default;
    explicit Simplex(std::vector<int> verts) : v(std::move(verts)) {
        for (std::size_t i = 1; i < v.size(); ++i)
            if (v[i - 1] >= v[i])
                throw structural_error("simplex vertices must be strictly increasing");
    }

    int dim() const { return static_cast<int>(v.size()) - 1; }

    bool operator<(const Simplex& o) const { return v < o.v; }
    bool operator==(const Simplex& o) const { return v == o.v; }

    // delete vertex at position l
    Simplex face(int l) const {
        if (l < 0 || l > dim())
            throw structural_error("face index out of range");
        std::vector<int> w = v;
        w.erase(w.begin() + l);
        return Simplex(std::move(w));
    }

    // positions i..j inclusive
    Simplex sub(int i, int j) const {
        if (i < 0 || j > dim() || i > j)
            throw structural_error("sub-simplex range invalid");
        return Simplex(std::vector<int>(v.begin() + i, v.begin() + j + 1));
    }

    Simplex front(int t) const { return sub(0, t); }
    Simplex back(int t) const { return sub(t, dim()); }
};

// (front, back) pairs sharing the middle vertex, t = 1..k-1.
inline std::vector<std::pair<Simplex, Simplex>> splittings(const Simplex& s) {
    std::vector<std::pair<Simplex, Simplex>> out;
    for (int t = 1; t < s.dim(); ++t)
        out.emplace_back(s.front(t), s.back(t));
    return out;
}

// Finite ordered simplicial complex generated by its top simplices, with all
// faces derived. Optional geometric realization: global vertex coordinates
// or per-top-simplex affine charts.
class SimplicialComplex {
public:
    SimplicialComplex() = default;
    SimplicialComplex(int vertex_count, const std::vector<std::vector<int>>& top) {
        n_ = vertex_count;
        for (auto& t : top) {
            Simplex s(t);
            for (int vv : s.v)
                if (vv < 0 || vv >= n_)
                    throw structural_error("vertex index out of range");
            top_.push_back(s);
            add_with_faces(s);
        }
    }

    int vertex_count() const { return n_; }
    const std::vector<Simplex>& top_simplices() const { return top_; }

    int max_dim() const {
        int m = -1;
        for (auto& [d, ss] : by_dim_) m = std::max(m, d);
        return m;
    }

    std::vector<Simplex> simplices(int dim) const {
        auto it = by_dim_.find(dim);
        if (it == by_dim_.end()) return {};
        return {it->second.begin(), it->second.end()};
    }

    // all nondegenerate simplices of dim >= 1 in lexicographic order
    std::vector<Simplex> positive_simplices() const {
        std::vector<Simplex> out;
        for (auto& [d, ss] : by_dim_)
            if (d >= 1) out.insert(out.end(), ss.begin(), ss.end());
        std::sort(out.begin(), out.end());
        return out;
    }

    bool contains(const Simplex& s) const {
        auto it = by_dim_.find(s.dim());
        return it != by_dim_.end() && it->second.count(s) != 0;
    }

    std::size_t count(int dim) const {
        auto it = by_dim_.find(dim);
        return it == by_dim_.end() ? 0 : it->second.size();
    }

    // --- geometric realization ---
    void set_coords(const std::map<int, std::vector<double>>& coords) {
        coords_ = coords;
    }
    void set_chart(const Simplex& top, const std::vector<std::vector<double>>& verts) {
        charts_[top] = verts;
    }
    bool has_realization() const { return !coords_.empty() || !charts_.empty(); }

    // vertex coordinates of a simplex in some chart covering it
    std::vector<std::vector<double>> realize(const Simplex& s) const {
        if (!charts_.empty()) {
            for (auto& [top, verts] : charts_) {
                // s must be a subsequence of top
                std::vector<std::vector<double>> out;
                std::size_t pos = 0;
                bool ok = true;
                for (int vv : s.v) {
                    while (pos < top.v.size() && top.v[pos] != vv) ++pos;
                    if (pos == top.v.size()) { ok = false; break; }
                    out.push_back(verts[pos]);
                }
                if (ok) return out;
            }
            throw structural_error("no chart covers the requested simplex");
        }
        if (coords_.empty())
            throw structural_error("complex has no geometric realization");
        std::vector<std::vector<double>> out;
        for (int vv : s.v) out.push_back(coords_.at(vv));
        return out;
    }

    std::vector<double> vertex_coord(int v) const {
        if (!coords_.empty()) return coords_.at(v);
        for (auto& [top, verts] : charts_)
            for (std::size_t i = 0; i < top.v.size(); ++i)
                if (top.v[i] == v) return verts[i];
        throw structural_error("vertex has no coordinates");
    }

    const std::map<int, std::vector<double>>& coords() const { return coords_; }
    const std::map<Simplex, std::vector<std::vector<double>>>& charts() const { return charts_; }

private:
    void add_with_faces(const Simplex& s) {
        if (!by_dim_[s.dim()].insert(s).second) return;
        if (s.dim() == 0) return;
        for (int l = 0; l <= s.dim(); ++l) add_with_faces(s.face(l));
    }

    int n_ = 0;
    std::vector<Simplex> top_;
    std::map<int, std::set<Simplex>> by_dim_;
    std::map<int, std::vector<double>> coords_;
    std::map<Simplex, std::vector<std::vector<double>>> charts_;
};

// Inner horn data: ambient dimension k, missing face index q, faces by index.
struct Horn {
    int k = 0;
    int q = 0; // 0 < q < k for inner horns

    bool inner() const { return q > 0 && q < k; }
};

inline SimplicialComplex standard_simplex(int k) {
    std::vector<int> v(k + 1);
    for (int i = 0; i <= k; ++i) v[i] = i;
    return SimplicialComplex(k + 1, {v});
}

inline SimplicialComplex circle_complex() {
    return SimplicialComplex(3, {{0, 1}, {1, 2}, {0, 2}});
}

} // namespace holo

#endif
