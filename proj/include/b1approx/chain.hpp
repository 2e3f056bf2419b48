#pragma once

#include <map>
#include <optional>
#include <vector>

#include "b1approx/homology.hpp"
#include "b1approx/quotient.hpp"

namespace b1approx {

// Descending finite-index normal chain G = G_0 >= G_1 >= ..., each level a
// quotient map with kernel G_i.  Level 0 is the trivial quotient.
struct Chain {
    Presentation base;
    std::vector<FiniteQuotientMap> levels;
    bool truncated = false;
    // smallest index the next level would need, when truncated (clamped to
    // LLONG_MAX; the true value can be astronomically larger)
    long long next_index_required = 0;
};

// Re-derives the nesting evidence: each consecutive pair must satisfy
// factors_through, and indices must form a divisibility chain.  Throws
// invariant_violation on failure.
void verify_nesting(const Chain& chain);

// Levels are pullbacks of n_i * Z under the weight homomorphism.
Chain cyclic_chain(const Presentation& p, const std::vector<long>& weights,
                   const std::vector<long>& moduli);

// One step of the mod-p^e derived series: the returned quotient has kernel
// [K,K] K^{p^e} where K = kernel(q).  Cosets are realized as pairs (coset of
// K, element of K/[K,K]K^{p^e}); the vector part transforms by the Schreier
// cocycle, so everything stays inside FiniteQuotientMap.
FiniteQuotientMap derived_step_mod(const Presentation& p, const FiniteQuotientMap& q,
                                   unsigned prime, unsigned e, long long index_budget);

// The e = 1 case: G_{i+1} = [G_i, G_i] G_i^p.
FiniteQuotientMap derived_p_step(const Presentation& p, const FiniteQuotientMap& q,
                                 unsigned prime, long long index_budget = 5000);

// Iterated derived_p_step from the trivial quotient.  Budget exhaustion
// truncates the chain (marked, not an error).
Chain derived_p_series(const Presentation& p, unsigned prime, int depth,
                       long long index_budget = 5000);

struct ReferenceConstants {
    // externally known first L2-Betti number, e.g. d-1 for F_d
    std::optional<mpq_class> b1_l2;
};

struct ChainLevelRow {
    int level = 0;
    long long index = 1;
    mpq_class b1_rational;
    std::map<unsigned, long> b1_mod;
    long d_H1 = 0;
    long rank_upper = 0;  // Schreier generator count
    long rank_lower = 0;  // max of the b1 values
    mpq_class ratio_rational;               // b1 / index
    std::map<unsigned, mpq_class> ratio_mod;  // b1(F_p) / index
    mpq_class rg_upper;                     // (rank_upper - 1) / index
    std::map<unsigned, mpq_class> ref_gap;  // ratio_mod[p] - b1_l2, when known
};

struct ChainReport {
    std::vector<ChainLevelRow> rows;
    bool truncated = false;
    long long next_index_required = 0;
    std::optional<mpq_class> b1_l2;
};

// Exact per-level quantities via Reidemeister-Schreier + SNF.  matrix_budget
// bounds each dimension of the abelianized relator matrix.
ChainReport report(const Chain& chain, const std::vector<unsigned>& primes,
                   const ReferenceConstants& refs = {}, long matrix_budget = 4000);

struct MonotoneCheck {
    bool monotone = true;
    std::optional<int> first_violation;
};

// b1_mod[p]/index must be non-increasing along a p-chain (Theorem 1.4(1)
// territory: a violation on a genuine p-chain is an implementation bug).
MonotoneCheck check_fp_monotone(const ChainReport& rep, unsigned p);

}  // namespace b1approx
