#pragma once

// Seeded corpora shared by the unit tests and the acceptance checks.

#include <random>
#include <vector>

#include "b1approx/chain.hpp"
#include "b1approx/quotient.hpp"

namespace corpus {

struct QuotientInstance {
    b1approx::Presentation pres;
    b1approx::FiniteQuotientMap q;
    unsigned p = 2;
};

inline b1approx::Presentation random_presentation(std::mt19937_64& rng) {
    using namespace b1approx;
    std::uniform_int_distribution<int> gens(2, 3);
    std::uniform_int_distribution<int> rels(1, 3);
    std::uniform_int_distribution<int> len(2, 8);
    const int d = gens(rng);
    Alphabet a = Alphabet::standard(d);
    std::uniform_int_distribution<int> letter(1, d);
    std::uniform_int_distribution<int> sign(0, 1);
    std::vector<Word> rs;
    int want = rels(rng);
    while (static_cast<int>(rs.size()) < want) {
        std::vector<Letter> raw;
        int n = len(rng);
        for (int i = 0; i < n; ++i) {
            int g = letter(rng);
            raw.push_back(sign(rng) ? g : -g);
        }
        Word w = reduce(raw, d);
        if (!w.empty())
            rs.push_back(std::move(w));
    }
    return Presentation(std::move(a), std::move(rs));
}

// Random presentations paired with their mod-p derived-series levels.  Every
// instance is a normal p-power-index kernel by construction.
inline std::vector<QuotientInstance> derived_corpus(std::uint64_t seed, int count,
                                                    long long index_budget = 3000) {
    using namespace b1approx;
    std::vector<QuotientInstance> out;
    std::mt19937_64 rng(seed);
    while (static_cast<int>(out.size()) < count) {
        Presentation pres = random_presentation(rng);
        unsigned p = (rng() % 2 == 0) ? 2u : 3u;
        Chain ch = derived_p_series(pres, p, 2, index_budget);
        for (size_t i = 1; i < ch.levels.size(); ++i) {
            if (ch.levels[i].order == 1)
                continue;
            out.push_back({pres, ch.levels[i], p});
        }
    }
    return out;
}

}  // namespace corpus
