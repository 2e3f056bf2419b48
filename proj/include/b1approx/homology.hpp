#pragma once

#include <gmpxx.h>

#include <map>
#include <vector>

#include "b1approx/matrix.hpp"
#include "b1approx/presentation.hpp"

namespace b1approx {

// Structure of H_1 = Z^free_rank + Z/d_1 + ... (d_1 | d_2 | ...).
struct AbelianInvariants {
    long free_rank = 0;                     // = b_1 over Q
    std::vector<mpz_class> invariant_factors;  // each > 1
    long d_H1 = 0;                          // minimal generator count of H_1
    std::map<unsigned, long> betti_mod;     // prime -> b_1 over F_p

    long betti(unsigned p) const;  // computes from factors if not cached
};

// extra_primes: primes the caller wants reported in betti_mod in addition to
// the primes dividing the torsion (those are always included).
AbelianInvariants abelian_invariants(const Presentation& p,
                                     const std::vector<unsigned>& extra_primes = {2, 3});

// Same computation from a raw relator matrix (rows = relators, cols = gens).
AbelianInvariants abelian_invariants_of_matrix(const IntMatrix& m,
                                               const std::vector<unsigned>& extra_primes);

}  // namespace b1approx
