#pragma once

#include <random>
#include <string>
#include <vector>

#include "b1approx/matrix.hpp"

namespace b1approx {

// Finite p-group given by its multiplication table (orders up to 64 in
// practice; validation is cubic).
struct PGroupTable {
    std::string name;
    unsigned p = 2;
    int order = 1;
    int identity = 0;
    std::vector<std::vector<int>> mult;  // mult[a][b] = a*b
    std::vector<int> inverse;

    // checks identity, inverses, associativity, p-power order
    void validate();
};

PGroupTable cyclic_group(long n, unsigned p);
PGroupTable direct_product(const PGroupTable& a, const PGroupTable& b);
PGroupTable dihedral8(unsigned p = 2);    // D4, order 8
PGroupTable quaternion8(unsigned p = 2);  // Q8

// Matrix over F_p[H]; each entry is a coefficient vector of length |H|.
struct GroupRingMatrix {
    const PGroupTable* group = nullptr;
    unsigned p = 2;
    int rows = 0;
    int cols = 0;
    std::vector<std::vector<unsigned>> entries;  // row-major

    GroupRingMatrix() = default;
    // requires |H| to be a power of prime (the Lemma 2.2 hypothesis)
    GroupRingMatrix(const PGroupTable& h, unsigned prime, int m, int n);

    std::vector<unsigned>& at(int i, int j) {
        return entries[static_cast<size_t>(i) * cols + j];
    }
    const std::vector<unsigned>& at(int i, int j) const {
        return entries[static_cast<size_t>(i) * cols + j];
    }
};

// Each entry expanded to its |H| x |H| right regular representation block.
FpMatrix regular_rep(const GroupRingMatrix& m);

// Coefficient sums mod p (the trivial-action functor).
FpMatrix augmentation(const GroupRingMatrix& m);

struct DimInequalityResult {
    long lhs = 0;  // dim im over F_p of the regular representation
    long rhs = 0;  // |H| * dim im of the augmentation
    bool holds = false;
};

// Lemma 2.2: lhs >= rhs whenever H is a p-group for the matrix prime.  A
// false result on valid input is an implementation bug.
DimInequalityResult check_dim_inequality(const GroupRingMatrix& m);

// Hypothesis-necessity demo: coefficients in F_3 over H = C_2 and the single
// entry 1 + h give lhs 1 < rhs 2.  Kept apart from check_dim_inequality so
// the oracle's p-group precondition stays enforced.
DimInequalityResult non_p_group_demo();

GroupRingMatrix random_groupring_matrix(const PGroupTable& h, int m, int n,
                                        std::mt19937_64& rng);

struct OracleSuiteSummary {
    long checked = 0;
    long violations = 0;
    std::vector<std::string> groups;
    bool demo_fails_as_expected = false;
};

// Randomized Lemma 2.2 suite over the standard small-group catalog, plus the
// necessity demo.
OracleSuiteSummary run_groupring_suite(std::uint64_t seed, int per_group = 500);

}  // namespace b1approx
