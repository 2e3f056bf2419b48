#include "b1approx/homology.hpp"

#include <set>

namespace b1approx {

long AbelianInvariants::betti(unsigned p) const {
    auto it = betti_mod.find(p);
    if (it != betti_mod.end())
        return it->second;
    long b = free_rank;
    for (const auto& d : invariant_factors)
        if (mpz_divisible_ui_p(d.get_mpz_t(), p))
            ++b;
    return b;
}

AbelianInvariants abelian_invariants_of_matrix(const IntMatrix& m,
                                               const std::vector<unsigned>& extra_primes) {
    AbelianInvariants inv;
    SmithResult snf = smith_normal_form(m);
    inv.free_rank = m.cols - snf.rank;
    for (const auto& d : snf.diagonal)
        if (d > 1)
            inv.invariant_factors.push_back(d);
    // Every prime dividing d_1 divides all later factors (divisibility
    // chain), so the maximal p-multiplicity equals the factor count.
    inv.d_H1 = inv.free_rank + static_cast<long>(inv.invariant_factors.size());

    std::set<unsigned> primes(extra_primes.begin(), extra_primes.end());
    if (!inv.invariant_factors.empty()) {
        // the last factor is divisible by every prime occurring in the torsion
        mpz_class d = inv.invariant_factors.back();
        for (unsigned q = 2; mpz_class(q) * q <= d; ++q)
            while (mpz_divisible_ui_p(d.get_mpz_t(), q)) {
                primes.insert(q);
                d /= q;
            }
        if (d > 1 && d.fits_ulong_p())
            primes.insert(static_cast<unsigned>(d.get_ui()));
    }
    for (unsigned p : primes)
        inv.betti_mod[p] = inv.betti(p);
    return inv;
}

AbelianInvariants abelian_invariants(const Presentation& p,
                                     const std::vector<unsigned>& extra_primes) {
    return abelian_invariants_of_matrix(abelianized_relator_matrix(p), extra_primes);
}

}  // namespace b1approx
