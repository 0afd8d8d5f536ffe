#ifndef HOLO_NERVE_HPP
#define HOLO_NERVE_HPP

#include "holo/dgcat.hpp"
#include "holo/simplicial.hpp"

#include <map>
#include <optional>
#include <vector>

namespace holo {

// Simplex of the linear simplicial nerve of a small dg-category: an object
// per vertex and, for every index tuple (i_0 < ... < i_j) with j >= 1, an
// element of Hom^{1-j}(obj(i_j), obj(i_0)).
struct NerveSimplex {
    const SmallDgCategory* cat = nullptr;
    int dim = 0;
    std::vector<int> obj;            // size dim+1
    std::map<Simplex, HomElem> comp; // keys: position tuples within [dim], length >= 2

    HomElem value(const Simplex& tuple) const {
        auto it = comp.find(tuple);
        if (it != comp.end()) return it->second;
        int m = tuple.dim();
        return cat->zero(obj[tuple.v.back()], obj[tuple.v.front()], 1 - m);
    }
};

// Componentwise residual of the nerve Maurer-Cartan equation
//   d F_m - sum_{q=1..m-1} (-1)^q F_{m-1}(drop q) + sum (-1)^q F_q o F_{m-q}.
std::map<Simplex, HomElem> mc_check_nerve(const NerveSimplex& F);
bool nerve_mc_holds(const NerveSimplex& F);

NerveSimplex nerve_face(const NerveSimplex& F, int q);
// s_q: duplicated vertex q; values on tuples through the doubled edge are the
// identity (edge) or vanish (longer tuples).
NerveSimplex nerve_degeneracy(const NerveSimplex& F, int q);

// Inner horn filler: faces[j] for j != q are the codimension-1 faces of a
// k-simplex; the missing face and top are produced by the alternating
// formula, the top gauge defaulting to zero (any closed element works).
NerveSimplex horn_fill(const SmallDgCategory& cat, int k, int q,
                       const std::map<int, NerveSimplex>& faces,
                       const std::optional<HomElem>& top_gauge = std::nullopt);

// Poset of subsets I of {i, ..., j} containing both endpoints, ordered by
// inclusion; elements are encoded as sorted vertex sets.
struct CubePoset {
    int i = 0, j = 0;
    std::vector<std::vector<int>> elements;

    std::size_t size() const { return elements.size(); }
};

CubePoset cube_poset(int i, int j);

// strictly increasing inclusion chains with d+1 entries (nerve d-simplices)
std::vector<std::vector<std::vector<int>>> poset_chains(const CubePoset& P, int d);

// Values of a dg-functor-style assignment H on the nondegenerate chains of
// the posets P_{a,b} inside [k], for one object per vertex. Chains are
// recorded by their element lists.
struct DgFunctorData {
    const SmallDgCategory* cat = nullptr;
    int k = 0;
    std::vector<int> obj;
    // key: chain of subsets (each a sorted vertex list); value in
    // Hom^{-(len-1)}(obj(b), obj(a)) for a chain in P_{a,b}
    std::map<std::vector<std::vector<int>>, HomElem> H;

    HomElem value(const std::vector<std::vector<int>>& chain) const;
};

// union-composition factorizations and d-compatibility of the data
void validate_functor_data(const DgFunctorData& H);

// F(tuple) = sum over permutations of the interior vertices, with the parity
// sign, of H on the corresponding maximal chain; assembled for every subtuple
// so the result can be fed to mc_check_nerve.
NerveSimplex cube_to_coherence(const DgFunctorData& H);

} // namespace holo

#endif
