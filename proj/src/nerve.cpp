#include "holo/nerve.hpp"

#include <algorithm>

namespace holo {

namespace {

int psign(int e) { return (e % 2 == 0) ? 1 : -1; }

// all strictly increasing tuples of length len from {0..n}
void tuples_rec(int n, int len, int start, std::vector<int>& cur,
                std::vector<Simplex>& out) {
    if ((int)cur.size() == len) {
        out.push_back(Simplex(cur));
        return;
    }
    for (int v = start; v <= n; ++v) {
        cur.push_back(v);
        tuples_rec(n, len, v + 1, cur, out);
        cur.pop_back();
    }
}

std::vector<Simplex> all_tuples(int n, int min_len) {
    std::vector<Simplex> out;
    for (int len = min_len; len <= n + 1; ++len) {
        std::vector<int> cur;
        tuples_rec(n, len, 0, cur, out);
    }
    return out;
}

} // namespace

std::map<Simplex, HomElem> mc_check_nerve(const NerveSimplex& F) {
    std::map<Simplex, HomElem> R;
    const SmallDgCategory& C = *F.cat;
    for (const Simplex& t : all_tuples(F.dim, 2)) {
        int m = t.dim();
        HomElem r = C.d(F.value(t));
        for (int q = 1; q < m; ++q)
            r = SmallDgCategory::add(r, SmallDgCategory::scale(Rat(-psign(q)),
                                                               F.value(t.face(q))));
        for (int q = 1; q < m; ++q)
            r = SmallDgCategory::add(
                r, SmallDgCategory::scale(
                       Rat(psign(q)), C.compose(F.value(t.front(q)), F.value(t.back(q)))));
        R.emplace(t, std::move(r));
    }
    return R;
}

bool nerve_mc_holds(const NerveSimplex& F) {
    for (auto& [t, r] : mc_check_nerve(F))
        if (!r.is_zero()) return false;
    return true;
}

NerveSimplex nerve_face(const NerveSimplex& F, int q) {
    if (q < 0 || q > F.dim) throw structural_error("nerve_face: index out of range");
    NerveSimplex r;
    r.cat = F.cat;
    r.dim = F.dim - 1;
    for (int i = 0; i <= F.dim; ++i)
        if (i != q) r.obj.push_back(F.obj[i]);
    for (const Simplex& t : all_tuples(r.dim, 2)) {
        std::vector<int> img;
        for (int i : t.v) img.push_back(i < q ? i : i + 1);
        HomElem v = F.value(Simplex(img));
        if (!v.is_zero()) r.comp.emplace(t, std::move(v));
    }
    return r;
}

NerveSimplex nerve_degeneracy(const NerveSimplex& F, int q) {
    if (q < 0 || q > F.dim) throw structural_error("nerve_degeneracy: index out of range");
    NerveSimplex r;
    r.cat = F.cat;
    r.dim = F.dim + 1;
    for (int i = 0; i <= F.dim; ++i) {
        r.obj.push_back(F.obj[i]);
        if (i == q) r.obj.push_back(F.obj[i]);
    }
    for (const Simplex& t : all_tuples(r.dim, 2)) {
        bool hits_q = std::count(t.v.begin(), t.v.end(), q) != 0;
        bool hits_q1 = std::count(t.v.begin(), t.v.end(), q + 1) != 0;
        if (hits_q && hits_q1) {
            // image tuple degenerates; only the doubled edge keeps a value
            if (t.dim() == 1) r.comp.emplace(t, F.cat->identity(F.obj[q]));
            continue;
        }
        std::vector<int> img;
        for (int i : t.v) img.push_back(i <= q ? i : i - 1);
        HomElem v = F.value(Simplex(img));
        if (!v.is_zero()) r.comp.emplace(t, std::move(v));
    }
    return r;
}

NerveSimplex horn_fill(const SmallDgCategory& cat, int k, int q,
                       const std::map<int, NerveSimplex>& faces,
                       const std::optional<HomElem>& top_gauge) {
    if (!(q > 0 && q < k))
        throw structural_error("horn_fill: only inner horns (0 < q < k) are supported");
    for (int j = 0; j <= k; ++j) {
        if (j == q) continue;
        auto it = faces.find(j);
        if (it == faces.end())
            throw structural_error("horn_fill: missing face " + std::to_string(j));
        if (it->second.dim != k - 1)
            throw structural_error("horn_fill: face " + std::to_string(j) +
                                   " has the wrong dimension");
        if (!nerve_mc_holds(it->second))
            throw invariant_error("horn_fill: face " + std::to_string(j) +
                                  " violates the nerve Maurer-Cartan equation");
    }
    // ambient object assignment, cross-checked over every face
    std::vector<int> obj(k + 1, -1);
    for (auto& [j, f] : faces)
        for (int i = 0; i <= k - 1; ++i) {
            int amb = (i < j) ? i : i + 1;
            if (obj[amb] == -1)
                obj[amb] = f.obj[i];
            else if (obj[amb] != f.obj[i])
                throw invariant_error("horn_fill: faces disagree on the vertex objects");
        }

    NerveSimplex S;
    S.cat = &cat;
    S.dim = k;
    S.obj = obj;

    std::vector<int> full(k + 1);
    for (int i = 0; i <= k; ++i) full[i] = i;
    Simplex top(full);
    Simplex missing = top.face(q);

    // components on every proper tuple except the missing face's own top
    for (const Simplex& t : all_tuples(k, 2)) {
        if (t == top || t == missing) continue;
        bool set = false;
        for (int j = 0; j <= k; ++j) {
            if (j == q) continue;
            if (std::count(t.v.begin(), t.v.end(), j)) continue;
            const NerveSimplex& f = faces.at(j);
            std::vector<int> local;
            for (int i : t.v) local.push_back(i < j ? i : i - 1);
            HomElem v = f.value(Simplex(local));
            if (!set) {
                if (!v.is_zero()) S.comp.emplace(t, v);
                set = true;
            } else {
                HomElem prev = S.value(t);
                if (!(prev.coeffs == v.coeffs))
                    throw invariant_error("horn_fill: faces are incompatible on a shared tuple");
            }
        }
    }

    // missing face: (-1)^{q+1} sum_{j != q} (-1)^j S(del_j) +
    //               (-1)^q sum_j (-1)^j S(0..j) o S(j..k)
    HomElem fill = cat.zero(obj[missing.v.back()], obj[missing.v.front()], 2 - k);
    for (int j = 1; j <= k - 1; ++j) {
        if (j == q) continue;
        fill = SmallDgCategory::add(
            fill, SmallDgCategory::scale(Rat(psign(q + 1) * psign(j)), S.value(top.face(j))));
    }
    for (int j = 1; j <= k - 1; ++j)
        fill = SmallDgCategory::add(
            fill, SmallDgCategory::scale(Rat(psign(q) * psign(j)),
                                         cat.compose(S.value(top.front(j)),
                                                     S.value(top.back(j)))));
    if (!fill.is_zero()) S.comp.emplace(missing, fill);

    if (top_gauge) {
        const HomElem& g = *top_gauge;
        if (g.deg != 1 - k || g.x != obj[k] || g.y != obj[0])
            throw structural_error("horn_fill: top gauge has the wrong type");
        if (!cat.d(g).is_zero())
            throw invariant_error("horn_fill: top gauge must be closed");
        if (!g.is_zero()) S.comp.emplace(top, g);
    }

    if (!nerve_mc_holds(S))
        throw invariant_error("horn_fill: assembled simplex fails Maurer-Cartan");
    return S;
}

CubePoset cube_poset(int i, int j) {
    if (i > j) throw structural_error("cube_poset: need i <= j");
    CubePoset P;
    P.i = i;
    P.j = j;
    std::vector<int> interior;
    for (int v = i + 1; v < j; ++v) interior.push_back(v);
    int n = (int)interior.size();
    for (int mask = 0; mask < (1 << n); ++mask) {
        std::vector<int> el{i};
        for (int b = 0; b < n; ++b)
            if (mask & (1 << b)) el.push_back(interior[b]);
        if (j != i) el.push_back(j);
        std::sort(el.begin(), el.end());
        el.erase(std::unique(el.begin(), el.end()), el.end());
        P.elements.push_back(std::move(el));
    }
    std::sort(P.elements.begin(), P.elements.end(),
              [](const std::vector<int>& a, const std::vector<int>& b) {
                  if (a.size() != b.size()) return a.size() < b.size();
                  return a < b;
              });
    P.elements.erase(std::unique(P.elements.begin(), P.elements.end()), P.elements.end());
    return P;
}

namespace {

bool subset_of(const std::vector<int>& a, const std::vector<int>& b) {
    return a != b && std::includes(b.begin(), b.end(), a.begin(), a.end());
}

void chains_rec(const CubePoset& P, int d, std::vector<std::vector<int>>& cur,
                std::vector<std::vector<std::vector<int>>>& out) {
    if ((int)cur.size() == d + 1) {
        out.push_back(cur);
        return;
    }
    for (auto& el : P.elements) {
        if (!cur.empty() && !subset_of(cur.back(), el)) continue;
        cur.push_back(el);
        chains_rec(P, d, cur, out);
        cur.pop_back();
    }
}

} // namespace

std::vector<std::vector<std::vector<int>>> poset_chains(const CubePoset& P, int d) {
    std::vector<std::vector<std::vector<int>>> out;
    std::vector<std::vector<int>> cur;
    chains_rec(P, d, cur, out);
    return out;
}

HomElem DgFunctorData::value(const std::vector<std::vector<int>>& chain) const {
    auto it = H.find(chain);
    if (it == H.end()) throw structural_error("functor data: missing chain value");
    return it->second;
}

namespace {

// restriction of a chain to the interval [a, b], with repeats collapsed
std::vector<std::vector<int>> restrict_chain(const std::vector<std::vector<int>>& chain,
                                             int a, int b) {
    std::vector<std::vector<int>> out;
    for (auto& el : chain) {
        std::vector<int> r;
        for (int v : el)
            if (v >= a && v <= b) r.push_back(v);
        if (out.empty() || out.back() != r) out.push_back(std::move(r));
    }
    return out;
}

} // namespace

void validate_functor_data(const DgFunctorData& D) {
    const SmallDgCategory& cat = *D.cat;
    for (auto& [chain, val] : D.H) {
        const std::vector<int>& bottom = chain.front();
        // factorization through the bottom element's interior points
        if (bottom.size() > 2) {
            HomElem prod = D.value(restrict_chain(chain, bottom[0], bottom[1]));
            for (std::size_t t = 1; t + 1 < bottom.size(); ++t)
                prod = cat.compose(prod, D.value(restrict_chain(chain, bottom[t], bottom[t + 1])));
            if (!(prod.coeffs == val.coeffs))
                throw invariant_error("functor data violates the union-composition factorization");
        }
        // d-compatibility with the chain boundary
        if (chain.size() >= 2) {
            HomElem dv = cat.d(val);
            HomElem rhs = cat.zero(dv.x, dv.y, dv.deg);
            for (std::size_t t = 0; t < chain.size(); ++t) {
                std::vector<std::vector<int>> sub;
                for (std::size_t s = 0; s < chain.size(); ++s)
                    if (s != t) sub.push_back(chain[s]);
                rhs = SmallDgCategory::add(
                    rhs, SmallDgCategory::scale(Rat(psign((int)t)), D.value(sub)));
            }
            if (!(dv.coeffs == rhs.coeffs))
                throw invariant_error("functor data does not intertwine the differentials");
        } else {
            // single-element chains of edges must be closed
            if (bottom.size() == 2 && !cat.d(val).is_zero())
                throw invariant_error("functor data: edge values must be closed");
        }
    }
}

NerveSimplex cube_to_coherence(const DgFunctorData& D) {
    NerveSimplex F;
    F.cat = D.cat;
    F.dim = D.k;
    F.obj = D.obj;
    for (const Simplex& t : all_tuples(D.k, 2)) {
        int a = t.v.front(), b = t.v.back();
        std::vector<int> interior(t.v.begin() + 1, t.v.end() - 1);
        std::sort(interior.begin(), interior.end());
        HomElem acc = D.cat->zero(D.obj[b], D.obj[a], 1 - t.dim());
        std::vector<int> perm = interior;
        std::sort(perm.begin(), perm.end());
        do {
            int inv = 0;
            for (std::size_t i = 0; i < perm.size(); ++i)
                for (std::size_t j = i + 1; j < perm.size(); ++j)
                    if (perm[i] > perm[j]) ++inv;
            std::vector<std::vector<int>> chain;
            std::vector<int> cur{a, b};
            std::sort(cur.begin(), cur.end());
            chain.push_back(cur);
            for (int v : perm) {
                cur.push_back(v);
                std::sort(cur.begin(), cur.end());
                chain.push_back(cur);
            }
            acc = SmallDgCategory::add(acc,
                                       SmallDgCategory::scale(Rat(psign(inv)), D.value(chain)));
        } while (std::next_permutation(perm.begin(), perm.end()));
        if (!acc.is_zero()) F.comp.emplace(t, acc);
    }
    return F;
}

} // namespace holo
