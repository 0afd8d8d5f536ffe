#ifndef HOLO_DGCAT_HPP
#define HOLO_DGCAT_HPP

#include "holo/graded.hpp"

#include <array>
#include <map>
#include <tuple>
#include <vector>

namespace holo {

// Element of a hom complex of a small dg-category: coefficients over the
// chosen basis of Hom^deg(x, y).
struct HomElem {
    int x = 0, y = 0; // from x to y
    int deg = 0;
    std::vector<Rat> coeffs;

    bool is_zero() const {
        for (auto& c : coeffs)
            if (c != 0) return false;
        return true;
    }
};

// Small dg-category on chosen bases: graded hom dimensions, differentials and
// composition given by structure constants, distinguished identities.
class SmallDgCategory {
public:
    explicit SmallDgCategory(int n_objects) : n_(n_objects) {}

    int objects() const { return n_; }

    void set_hom_dims(int x, int y, GradedModule dims) { homs_[{x, y}] = std::move(dims); }
    const GradedModule& hom_dims(int x, int y) const;
    std::size_t hom_dim(int x, int y, int deg) const { return hom_dims(x, y).dim(deg); }

    void set_d_block(int x, int y, int deg, Mat<Rat> m) { d_[{x, y, deg}] = std::move(m); }
    void set_identity(int x, HomElem e) { ids_[x] = std::move(e); }

    // structure constants for Hom^a(y,z) x Hom^b(x,y) -> Hom^{a+b}(x,z):
    // tensor[i][j] = coefficient vector of e_i o e_j
    void set_composition(int x, int y, int z, int a, int b,
                         std::vector<std::vector<std::vector<Rat>>> tensor) {
        comp_[{x, y, z, a, b}] = std::move(tensor);
    }

    HomElem zero(int x, int y, int deg) const {
        return HomElem{x, y, deg, std::vector<Rat>(hom_dim(x, y, deg), Rat(0))};
    }

    HomElem identity(int x) const { return ids_.at(x); }

    HomElem d(const HomElem& e) const;
    HomElem compose(const HomElem& g, const HomElem& f) const; // g after f

    static HomElem add(const HomElem& a, const HomElem& b);
    static HomElem scale(const Rat& c, const HomElem& a);

    // exact validation of the category axioms on all basis elements
    void validate() const;

    // closed degree-`deg` elements of Hom(x, y), as coefficient vectors
    std::vector<std::vector<Rat>> closed_basis(int x, int y, int deg) const;

private:
    int n_;
    std::map<std::pair<int, int>, GradedModule> homs_;
    std::map<std::tuple<int, int, int>, Mat<Rat>> d_;
    std::map<std::tuple<int, int, int, int, int>,
             std::vector<std::vector<std::vector<Rat>>>>
        comp_;
    std::map<int, HomElem> ids_;
};

// Full dg-subcategory of complexes on the given objects: hom complexes with
// the commutator differential, composition by matrix product.
SmallDgCategory category_from_complexes(const std::vector<ChainComplex<Rat>>& objs);

// hom basis bookkeeping for complex-built categories: basis of Hom^deg(x,y)
// ordered by (source degree, target row, source column)
std::size_t hom_index(const GradedModule& src, const GradedModule& tgt, int deg, int ds,
                      std::size_t r, std::size_t c);
GradedMap<Rat> hom_elem_to_map(const ChainComplex<Rat>& src, const ChainComplex<Rat>& tgt,
                               const HomElem& e);
HomElem map_to_hom_elem(int x, int y, const ChainComplex<Rat>& src,
                        const ChainComplex<Rat>& tgt, const GradedMap<Rat>& m);

} // namespace holo

#endif
