#pragma once

// Independent reference computations used by the unit tests and the
// acceptance checks.  Everything here deliberately avoids the library's
// smith_normal_form path.

#include <gmpxx.h>

#include <random>
#include <vector>

#include "b1approx/matrix.hpp"

namespace oracles {

// gcd of all k x k minors (0 when every minor vanishes)
inline mpz_class determinantal_divisor(const b1approx::IntMatrix& m, int k) {
    std::vector<int> rows(k), cols(k);
    mpz_class g = 0;

    std::vector<int> rsel, csel;
    auto det = [&](auto&& self, std::vector<int> r, std::vector<int> c) -> mpz_class {
        if (r.size() == 1)
            return m.at(r[0], c[0]);
        mpz_class d = 0;
        for (size_t i = 0; i < r.size(); ++i) {
            std::vector<int> rr;
            for (size_t j = 0; j < r.size(); ++j)
                if (j != i)
                    rr.push_back(r[j]);
            std::vector<int> cc(c.begin() + 1, c.end());
            mpz_class sub = self(self, rr, cc);
            if (i % 2 == 0)
                d += m.at(r[i], c[0]) * sub;
            else
                d -= m.at(r[i], c[0]) * sub;
        }
        return d;
    };

    auto choose = [&](auto&& self, int n, int need, int start, std::vector<int>& sel,
                      auto&& emit) -> void {
        if (need == 0) {
            emit(sel);
            return;
        }
        for (int i = start; i + need <= n; ++i) {
            sel.push_back(i);
            self(self, n, need - 1, i + 1, sel, emit);
            sel.pop_back();
        }
    };

    std::vector<int> sr, sc;
    choose(choose, m.rows, k, 0, sr, [&](const std::vector<int>& r) {
        choose(choose, m.cols, k, 0, sc, [&](const std::vector<int>& c) {
            mpz_class d = det(det, r, c);
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
        });
    });
    return g;
}

// Row-style Hermite form of the row lattice, square cols x cols basis with
// zero rows for missing directions.  Returns false when the lattice has
// rank < cols (infinite cokernel).
struct HermiteBasis {
    int cols = 0;
    std::vector<std::vector<mpz_class>> basis;  // upper triangular, basis[i][i] >= 0
    bool full_rank = false;
};

inline HermiteBasis hermite_row_basis(const b1approx::IntMatrix& m) {
    HermiteBasis h;
    h.cols = m.cols;
    std::vector<std::vector<mpz_class>> rows;
    for (int i = 0; i < m.rows; ++i) {
        std::vector<mpz_class> r(m.cols);
        for (int j = 0; j < m.cols; ++j)
            r[j] = m.at(i, j);
        rows.push_back(std::move(r));
    }
    h.basis.assign(m.cols, std::vector<mpz_class>(m.cols, 0));
    std::vector<bool> have(m.cols, false);

    auto insert = [&](std::vector<mpz_class> r) {
        auto self = [&](auto&& rec, std::vector<mpz_class> row) -> void {
            for (int j = 0; j < h.cols; ++j) {
                if (row[j] == 0)
                    continue;
                if (!have[j]) {
                    if (row[j] < 0)
                        for (auto& x : row)
                            x = -x;
                    h.basis[j] = row;
                    have[j] = true;
                    return;
                }
                mpz_class q = row[j] / h.basis[j][j];
                std::vector<mpz_class> next = row;
                for (int t = 0; t < h.cols; ++t)
                    next[t] -= q * h.basis[j][t];
                if (next[j] != 0) {
                    // gcd step: swap the shorter remainder in
                    std::vector<mpz_class> old = h.basis[j];
                    if (next[j] < 0)
                        for (auto& x : next)
                            x = -x;
                    h.basis[j] = next;
                    rec(rec, old);
                    return;
                }
                row = next;
            }
        };
        self(self, std::move(r));
    };
    for (auto& r : rows)
        insert(std::move(r));
    // re-insert until stable so lower entries reduce cleanly
    for (int pass = 0; pass < m.cols; ++pass)
        for (int j = 0; j < m.cols; ++j)
            if (have[j])
                insert(h.basis[j]);
    h.full_rank = true;
    for (int j = 0; j < m.cols; ++j)
        if (!have[j])
            h.full_rank = false;
    return h;
}

// canonical coset representative mod the (full rank) row lattice
inline std::vector<mpz_class> hermite_reduce(const HermiteBasis& h,
                                             std::vector<mpz_class> v) {
    for (int j = 0; j < h.cols; ++j) {
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), v[j].get_mpz_t(), h.basis[j][j].get_mpz_t());
        for (int t = 0; t < h.cols; ++t)
            v[t] -= q * h.basis[j][t];
    }
    return v;
}

inline mpz_class hermite_cokernel_order(const HermiteBasis& h) {
    mpz_class n = 1;
    for (int j = 0; j < h.cols; ++j)
        n *= h.basis[j][j];
    return n;
}

inline b1approx::IntMatrix random_matrix(std::mt19937_64& rng, int max_dim, int max_abs) {
    std::uniform_int_distribution<int> dim(1, max_dim);
    std::uniform_int_distribution<int> val(-max_abs, max_abs);
    b1approx::IntMatrix m(dim(rng), dim(rng));
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j)
            m.at(i, j) = val(rng);
    return m;
}

// SNF cokernel versus exhaustive enumeration through an independent Hermite
// form; also rank_mod_p versus the diagonal count.  Returns false on any
// mismatch.  Enumeration is skipped when the cokernel is infinite or larger
// than max_order.
inline bool snf_matches_enumeration(const b1approx::IntMatrix& m, long max_order) {
    using b1approx::IntMatrix;
    auto snf = b1approx::smith_normal_form(m);

    // rank over Q must equal the number of nonzero diagonals
    if (static_cast<int>(snf.diagonal.size()) != snf.rank)
        return false;
    // divisibility chain
    for (size_t i = 1; i < snf.diagonal.size(); ++i)
        if (snf.diagonal[i] % snf.diagonal[i - 1] != 0)
            return false;
    // determinantal divisor identity d1*...*dk = gcd of k x k minors
    mpz_class prod = 1;
    int kmax = std::min(m.rows, m.cols);
    for (int k = 1; k <= kmax; ++k) {
        mpz_class dk = determinantal_divisor(m, k);
        if (k <= snf.rank)
            prod *= snf.diagonal[k - 1];
        if (k <= snf.rank ? (dk != prod) : (dk != 0))
            return false;
    }

    for (unsigned p : {2u, 3u, 5u}) {
        int expect = 0;
        for (const auto& d : snf.diagonal)
            if (d % p != 0)
                ++expect;
        if (b1approx::rank_mod_p(m, p) != expect)
            return false;
    }

    auto h = hermite_row_basis(m);
    if (!h.full_rank)
        return snf.rank < m.cols;  // both must report an infinite cokernel
    if (snf.rank != m.cols)
        return false;
    mpz_class order = hermite_cokernel_order(h);
    mpz_class snf_order = 1;
    for (const auto& d : snf.diagonal)
        snf_order *= d;
    if (order != snf_order)
        return false;
    if (order > max_order)
        return true;

    // enumerate representatives and compare, for each small m, the count of
    // elements killed by m against prod gcd(m, d_i)
    long n = order.get_si();
    std::vector<std::vector<mpz_class>> reps;
    std::vector<mpz_class> cur(m.cols, 0);
    auto walk = [&](auto&& self, int j) -> void {
        if (j == m.cols) {
            reps.push_back(hermite_reduce(h, cur));
            return;
        }
        for (mpz_class v = 0; v < h.basis[j][j]; ++v) {
            cur[j] = v;
            self(self, j + 1);
        }
    };
    walk(walk, 0);
    if (static_cast<long>(reps.size()) != n)
        return false;

    for (long mult = 1; mult <= 12; ++mult) {
        long killed = 0;
        for (const auto& r : reps) {
            std::vector<mpz_class> mv(r);
            for (auto& x : mv)
                x *= mult;
            auto red = hermite_reduce(h, std::move(mv));
            bool zero = true;
            for (const auto& x : red)
                if (x != 0)
                    zero = false;
            if (zero)
                ++killed;
        }
        mpz_class expect = 1;
        for (const auto& d : snf.diagonal) {
            mpz_class g, mm = mult;
            mpz_gcd(g.get_mpz_t(), mm.get_mpz_t(), d.get_mpz_t());
            expect *= g;
        }
        if (expect != killed)
            return false;
    }
    return true;
}

}  // namespace oracles
