#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "holo/simplicial.hpp"

#include <random>

using namespace holo;

TEST_CASE("faces") {
    Simplex s({0, 1, 2});
    CHECK(s.face(1) == Simplex({0, 2}));
    CHECK(Simplex({0, 1}).face(0) == Simplex({1}));
    CHECK_THROWS_AS(s.face(3), structural_error);
    CHECK_THROWS_AS(Simplex({2, 1}), structural_error);
}

TEST_CASE("simplicial identity on random simplices") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<int> v;
        int x = 0;
        std::uniform_int_distribution<int> step(1, 3);
        for (int i = 0; i < 5; ++i) {
            x += step(rng);
            v.push_back(x);
        }
        Simplex s(v);
        for (int i = 0; i < s.dim(); ++i)
            for (int j = i + 1; j <= s.dim(); ++j) {
                // del_i del_j = del_{j-1} del_i for i < j
                CHECK(s.face(j).face(i) == s.face(i).face(j - 1));
            }
    }
}

TEST_CASE("splittings") {
    CHECK(splittings(Simplex({0, 1})).empty());
    auto sp2 = splittings(Simplex({0, 1, 2}));
    REQUIRE(sp2.size() == 1);
    CHECK(sp2[0].first == Simplex({0, 1}));
    CHECK(sp2[0].second == Simplex({1, 2}));
    auto sp3 = splittings(Simplex({0, 1, 2, 3}));
    REQUIRE(sp3.size() == 2);
    CHECK(sp3[0].first == Simplex({0, 1}));
    CHECK(sp3[0].second == Simplex({1, 2, 3}));
    CHECK(sp3[1].first == Simplex({0, 1, 2}));
    CHECK(sp3[1].second == Simplex({2, 3}));
    // front/back glue back to the simplex
    std::mt19937 rng(9);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<int> v;
        int x = -1;
        std::uniform_int_distribution<int> step(1, 2);
        int k = 2 + (trial % 3);
        for (int i = 0; i <= k; ++i) {
            x += step(rng);
            v.push_back(x);
        }
        Simplex s(v);
        auto sp = splittings(s);
        CHECK((int)sp.size() == std::max(s.dim() - 1, 0));
        for (auto& [fr, bk] : sp) {
            CHECK(fr.v.back() == bk.v.front());
            std::vector<int> glued = fr.v;
            glued.insert(glued.end(), bk.v.begin() + 1, bk.v.end());
            CHECK(glued == s.v);
        }
    }
}

TEST_CASE("sub-simplex") {
    Simplex s({0, 2, 5});
    CHECK(s.sub(0, 2) == s);
    CHECK(s.sub(1, 2) == Simplex({2, 5}));
    CHECK_THROWS_AS(s.sub(2, 1), structural_error);
    // composition of extractions equals single extraction
    Simplex t({0, 1, 3, 4, 7});
    CHECK(t.sub(1, 4).sub(0, 2) == t.sub(1, 3));
    CHECK(t.sub(0, 3).sub(1, 3) == t.sub(1, 3));
}

TEST_CASE("build_complex and enumeration") {
    SimplicialComplex circle(3, {{0, 1}, {1, 2}, {0, 2}});
    CHECK(circle.count(0) == 3);
    CHECK(circle.count(1) == 3);
    CHECK(circle.count(2) == 0);

    SimplicialComplex disk(3, {{0, 1, 2}});
    CHECK(disk.count(0) == 3);
    CHECK(disk.count(1) == 3);
    CHECK(disk.count(2) == 1);

    // Delta^3 face counts follow binomial coefficients
    auto d3 = standard_simplex(3);
    CHECK(d3.count(0) == 4);
    CHECK(d3.count(1) == 6);
    CHECK(d3.count(2) == 4);
    CHECK(d3.count(3) == 1);

    CHECK_THROWS_AS(SimplicialComplex(3, {{1, 0}}), structural_error);
}

TEST_CASE("face closure") {
    SimplicialComplex X(5, {{0, 2, 4}, {1, 2, 3}});
    for (auto& s : X.simplices(2))
        for (int l = 0; l <= 2; ++l) CHECK(X.contains(s.face(l)));
}

TEST_CASE("realization charts") {
    SimplicialComplex circle(3, {{0, 1}, {1, 2}, {0, 2}});
    circle.set_chart(Simplex({0, 1}), {{0.0}, {1.0}});
    circle.set_chart(Simplex({1, 2}), {{0.0}, {1.0}});
    circle.set_chart(Simplex({0, 2}), {{1.0}, {0.0}});
    auto r = circle.realize(Simplex({0, 2}));
    CHECK(r[0][0] == 1.0);
    CHECK(r[1][0] == 0.0);
}
