#pragma once

#include <gmpxx.h>

#include <vector>

#include "b1approx/errors.hpp"

namespace b1approx {

// Dense integer matrix, arbitrary precision.  Fixed-width entries are
// deliberately not an option: SNF pivots blow up on Reidemeister-Schreier
// matrices.
struct IntMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<mpz_class> a;

    IntMatrix() = default;
    IntMatrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

    mpz_class& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const mpz_class& at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    static IntMatrix identity(int n);
};

struct SmithResult {
    std::vector<mpz_class> diagonal;  // d1 | d2 | ... | dr, all positive
    int rank = 0;                     // rank over Q
};

// Pivot strategy: smallest nonzero absolute value.  Output is canonical
// regardless of strategy.
SmithResult smith_normal_form(IntMatrix m);

// Also returns the unimodular column transform T: if L is the row lattice of
// M, then x |-> x*T maps L onto the lattice spanned by diagonal[i]*e_i.
struct SmithTransform {
    SmithResult snf;
    IntMatrix col_transform;  // cols x cols, unimodular
};
SmithTransform smith_normal_form_with_transform(IntMatrix m);

int rank_mod_p(const IntMatrix& m, unsigned p);

// Dense matrix over F_p (p < 2^15), for group-ring ranks and F_p homology.
struct FpMatrix {
    int rows = 0;
    int cols = 0;
    unsigned p = 2;
    std::vector<unsigned> a;

    FpMatrix() = default;
    FpMatrix(int r, int c, unsigned prime)
        : rows(r), cols(c), p(prime), a(static_cast<size_t>(r) * c, 0) {}

    unsigned& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    unsigned at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    int rank() const;
    FpMatrix multiplied_by(const FpMatrix& other) const;
    FpMatrix plus(const FpMatrix& other) const;
};

// Row echelon basis of the row space; useful for incremental span membership.
class FpRowSpace {
public:
    FpRowSpace(int cols, unsigned p) : cols_(cols), p_(p) {}
    // returns true if the row enlarged the space
    bool add(std::vector<unsigned> row);
    bool contains(std::vector<unsigned> row) const;
    int rank() const { return static_cast<int>(rows_.size()); }

private:
    void reduce(std::vector<unsigned>& row) const;
    int cols_;
    unsigned p_;
    std::vector<std::vector<unsigned>> rows_;  // echelon, pivot = first nonzero
    std::vector<int> pivots_;
};

}  // namespace b1approx
