#include "b1approx/chain.hpp"

#include <algorithm>
#include <climits>

namespace b1approx {

void verify_nesting(const Chain& chain) {
    if (chain.levels.empty())
        throw invariant_violation("chain has no levels");
    if (chain.levels.front().order != 1)
        throw invariant_violation("chain level 0 is not the trivial quotient");
    for (size_t i = 0; i + 1 < chain.levels.size(); ++i) {
        const auto& coarse = chain.levels[i];
        const auto& fine = chain.levels[i + 1];
        if (fine.order % coarse.order != 0)
            throw invariant_violation("chain indices do not form a divisibility chain at level " +
                                      std::to_string(i + 1));
        if (!factors_through(fine, coarse))
            throw invariant_violation("kernel nesting fails between levels " +
                                      std::to_string(i) + " and " + std::to_string(i + 1));
    }
}

Chain cyclic_chain(const Presentation& p, const std::vector<long>& weights,
                   const std::vector<long>& moduli) {
    if (static_cast<int>(weights.size()) != p.generator_count())
        throw domain_error("one weight per generator required");
    for (int ri = 0; ri < p.relator_count(); ++ri) {
        auto sums = exponent_sums(p.relators[ri], p.generator_count());
        long long total = 0;
        for (size_t g = 0; g < weights.size(); ++g)
            total += weights[g] * sums[g];
        if (total != 0)
            throw domain_error("weight vector does not kill relator " +
                               format_word(p.relators[ri], p.alphabet));
    }
    for (size_t i = 0; i + 1 < moduli.size(); ++i)
        if (moduli[i] < 1 || moduli[i + 1] % moduli[i] != 0)
            throw domain_error("moduli must form a divisibility chain");
    if (!moduli.empty() && moduli.back() < 1)
        throw domain_error("moduli must be positive");
    Chain chain;
    chain.base = p;
    chain.levels.push_back(trivial_quotient(p));
    for (long n : moduli)
        chain.levels.push_back(quotient_cyclic(p, n, weights));
    verify_nesting(chain);
    return chain;
}

FiniteQuotientMap derived_step_mod(const Presentation& p, const FiniteQuotientMap& q,
                                   unsigned prime, unsigned e, long long index_budget) {
    if (!(q.source.alphabet == p.alphabet))
        throw domain_error("derived_step_mod: alphabet mismatch");
    if (e < 1)
        throw domain_error("derived_step_mod: exponent must be positive");
    SchreierData sd = schreier_data(q);
    const int m = sd.sgen_count;
    if (m == 0)
        return q;  // trivial kernel: the series has stabilized
    mpz_class pe;
    mpz_ui_pow_ui(pe.get_mpz_t(), prime, e);
    // H_1(K; Z/p^e) = Z^m / L with L spanned by the rewritten relators
    // (relations of K inside the presented group) together with p^e Z^m
    const int nrel = q.source.relator_count();
    IntMatrix lat(nrel * q.order + m, m);
    int row = 0;
    for (const auto& r : q.source.relators)
        for (int c = 0; c < q.order; ++c) {
            Word rw = rewrite_in_subgroup(sd, q, r, c);
            auto sums = exponent_sums(rw, m);
            for (int j = 0; j < m; ++j)
                lat.at(row, j) = static_cast<long>(sums[j]);
            ++row;
        }
    for (int j = 0; j < m; ++j)
        lat.at(row + j, j) = pe;
    SmithTransform st = smith_normal_form_with_transform(std::move(lat));
    if (st.snf.rank != m)
        throw invariant_violation("derived_step_mod: lattice not of full rank");
    // each diagonal entry divides p^e, so the moduli fit in machine words
    std::vector<long> mods;
    std::vector<int> positions;  // column in the transformed coordinates
    mpz_class volume = 1;
    for (int j = 0; j < m; ++j) {
        long d = st.snf.diagonal[j].get_si();
        if (d > 1) {
            mods.push_back(d);
            positions.push_back(j);
            volume *= d;
        }
    }
    mpz_class total = volume * q.order;
    if (cmp(total, static_cast<long>(std::min<long long>(index_budget, LONG_MAX))) > 0) {
        long long required = LLONG_MAX;
        if (total.fits_slong_p())
            required = total.get_si();
        throw resource_limit("derived series index exceeds budget", required);
    }
    const long vol = volume.get_si();
    const int k = static_cast<int>(mods.size());
    // image of Schreier generator s in the quotient, mixed-radix digits
    std::vector<std::vector<long>> sigma(m, std::vector<long>(k, 0));
    for (int s = 0; s < m; ++s)
        for (int j = 0; j < k; ++j) {
            mpz_class v = st.col_transform.at(s, positions[j]) % mods[j];
            if (v < 0)
                v += mods[j];
            sigma[s][j] = v.get_si();
        }
    const int order = q.order;
    const int N = static_cast<int>(vol * order);
    const int d = p.generator_count();
    FiniteQuotientMap out;
    out.source = q.source;
    out.order = N;
    out.images.assign(d, Permutation(N));
    std::vector<long> digits(k);
    for (int state = 0; state < N; ++state) {
        int c = state % order;
        long code = state / order;
        for (int j = 0; j < k; ++j) {
            digits[j] = code % mods[j];
            code /= mods[j];
        }
        for (int g = 1; g <= d; ++g) {
            // coset v*t_c; right multiplication appends the Schreier
            // generator of the traversed edge to the vector part
            int nc = q.apply(g, c);
            int s = sd.sgen_at[c][g - 1];
            long ncode = 0;
            for (int j = k - 1; j >= 0; --j) {
                long dig = digits[j];
                if (s > 0)
                    dig = (dig + sigma[s - 1][j]) % mods[j];
                ncode = ncode * mods[j] + dig;
            }
            out.images[g - 1][state] = static_cast<int>(ncode * order + nc);
        }
    }
    out.validate();
    return out;
}

FiniteQuotientMap derived_p_step(const Presentation& p, const FiniteQuotientMap& q,
                                 unsigned prime, long long index_budget) {
    return derived_step_mod(p, q, prime, 1, index_budget);
}

Chain derived_p_series(const Presentation& p, unsigned prime, int depth,
                       long long index_budget) {
    if (depth < 1)
        throw domain_error("derived_p_series: depth must be at least 1");
    Chain chain;
    chain.base = p;
    chain.levels.push_back(trivial_quotient(p));
    for (int i = 0; i < depth; ++i) {
        try {
            FiniteQuotientMap next =
                derived_p_step(p, chain.levels.back(), prime, index_budget);
            if (next.order == chain.levels.back().order)
                break;  // stabilized
            chain.levels.push_back(std::move(next));
        } catch (const resource_limit& rl) {
            chain.truncated = true;
            chain.next_index_required = rl.required_budget;
            break;
        }
    }
    verify_nesting(chain);
    return chain;
}

ChainReport report(const Chain& chain, const std::vector<unsigned>& primes,
                   const ReferenceConstants& refs, long matrix_budget) {
    ChainReport rep;
    rep.truncated = chain.truncated;
    rep.next_index_required = chain.next_index_required;
    rep.b1_l2 = refs.b1_l2;
    for (size_t i = 0; i < chain.levels.size(); ++i) {
        const auto& q = chain.levels[i];
        SubgroupPresentation sp = reidemeister_schreier(q);
        const Presentation& sub = sp.presentation;
        if (sub.generator_count() > matrix_budget || sub.relator_count() > matrix_budget)
            throw resource_limit("level " + std::to_string(i) +
                                     " relator matrix exceeds budget",
                                 std::max<long long>(sub.generator_count(),
                                                     sub.relator_count()));
        AbelianInvariants ai = abelian_invariants(sub, primes);
        ChainLevelRow row;
        row.level = static_cast<int>(i);
        row.index = q.order;
        row.b1_rational = ai.free_rank;
        row.d_H1 = ai.d_H1;
        row.rank_upper = sub.generator_count();
        row.rank_lower = ai.free_rank;
        for (unsigned p : primes) {
            long b = ai.betti(p);
            row.b1_mod[p] = b;
            row.rank_lower = std::max(row.rank_lower, b);
            row.ratio_mod[p] = mpq_class(b, q.order);
            row.ratio_mod[p].canonicalize();
            if (refs.b1_l2) {
                row.ref_gap[p] = row.ratio_mod[p] - *refs.b1_l2;
                row.ref_gap[p].canonicalize();
            }
        }
        row.ratio_rational = mpq_class(ai.free_rank, q.order);
        row.ratio_rational.canonicalize();
        row.rg_upper = mpq_class(row.rank_upper - 1, q.order);
        row.rg_upper.canonicalize();
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

MonotoneCheck check_fp_monotone(const ChainReport& rep, unsigned p) {
    MonotoneCheck out;
    for (const auto& row : rep.rows) {
        if (!is_p_power(row.index, p))
            throw domain_error("check_fp_monotone: not a p-chain (index " +
                               std::to_string(row.index) + ")");
        if (!row.ratio_mod.count(p))
            throw domain_error("check_fp_monotone: prime missing from report");
    }
    for (size_t i = 0; i + 1 < rep.rows.size(); ++i)
        if (rep.rows[i + 1].ratio_mod.at(p) > rep.rows[i].ratio_mod.at(p)) {
            out.monotone = false;
            out.first_violation = static_cast<int>(i + 1);
            return out;
        }
    return out;
}

}  // namespace b1approx
