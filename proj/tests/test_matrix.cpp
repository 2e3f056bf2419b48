#include <doctest.h>

#include <random>

#include "b1approx/matrix.hpp"
#include "oracles.hpp"

using namespace b1approx;

namespace {

IntMatrix make(int r, int c, std::initializer_list<long> vals) {
    IntMatrix m(r, c);
    auto it = vals.begin();
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j)
            m.at(i, j) = *it++;
    return m;
}

std::vector<long> diag_of(const SmithResult& s) {
    std::vector<long> d;
    for (const auto& x : s.diagonal)
        d.push_back(x.get_si());
    return d;
}

}  // namespace

TEST_CASE("smith normal form basics") {
    CHECK(diag_of(smith_normal_form(make(2, 2, {2, 0, 0, 3}))) == std::vector<long>{1, 6});
    CHECK(diag_of(smith_normal_form(make(1, 1, {4}))) == std::vector<long>{4});
    CHECK(diag_of(smith_normal_form(make(2, 2, {2, 4, 6, 8}))) == std::vector<long>{2, 4});
    CHECK(smith_normal_form(make(1, 2, {0, 0})).rank == 0);
    CHECK(diag_of(smith_normal_form(make(2, 3, {1, 2, 3, 4, 5, 6}))) ==
          std::vector<long>{1, 3});
    CHECK(smith_normal_form(IntMatrix()).rank == 0);
}

TEST_CASE("smith transform maps the row lattice onto the diagonal lattice") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        IntMatrix m = oracles::random_matrix(rng, 4, 6);
        auto st = smith_normal_form_with_transform(m);
        CHECK(st.snf.diagonal == smith_normal_form(m).diagonal);
        // every row of m times T lands in span{d_i e_i}
        for (int i = 0; i < m.rows; ++i) {
            for (int j = 0; j < m.cols; ++j) {
                mpz_class v = 0;
                for (int k = 0; k < m.cols; ++k)
                    v += m.at(i, k) * st.col_transform.at(k, j);
                if (j < st.snf.rank)
                    CHECK(v % st.snf.diagonal[j] == 0);
                else
                    CHECK(v == 0);
            }
        }
        // unimodular: its own SNF is all ones
        auto tn = smith_normal_form(st.col_transform);
        CHECK(tn.rank == m.cols);
        for (const auto& d : tn.diagonal)
            CHECK(d == 1);
    }
}

TEST_CASE("smith normal form against independent oracles") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 60; ++trial) {
        IntMatrix m = oracles::random_matrix(rng, 5, 5);
        CHECK(oracles::snf_matches_enumeration(m, 2000));
    }
}

TEST_CASE("rank over F_p") {
    IntMatrix m = make(2, 2, {2, 0, 0, 3});
    CHECK(rank_mod_p(m, 2) == 1);
    CHECK(rank_mod_p(m, 3) == 1);
    CHECK(rank_mod_p(m, 5) == 2);
}

TEST_CASE("F_p matrices") {
    FpMatrix a(2, 2, 3);
    a.at(0, 0) = 1;
    a.at(0, 1) = 2;
    a.at(1, 0) = 0;
    a.at(1, 1) = 1;
    CHECK(a.rank() == 2);
    FpMatrix b(2, 2, 3);
    b.at(0, 0) = 1;
    b.at(0, 1) = 2;
    b.at(1, 0) = 1;
    b.at(1, 1) = 2;
    CHECK(b.rank() == 1);
    auto prod = a.multiplied_by(b);
    CHECK(prod.at(0, 0) == 0);  // 1*1 + 2*1 = 3 = 0 mod 3
    CHECK(a.plus(b).at(0, 1) == 1);

    FpRowSpace sp(3, 2);
    CHECK(sp.add({1, 0, 1}));
    CHECK(sp.add({0, 1, 1}));
    CHECK_FALSE(sp.add({1, 1, 0}));
    CHECK(sp.contains({1, 1, 0}));
    CHECK_FALSE(sp.contains({0, 0, 1}));
    CHECK(sp.rank() == 2);
}
