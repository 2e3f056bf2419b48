#pragma once

#include <optional>
#include <vector>

#include "b1approx/presentation.hpp"
#include "b1approx/word.hpp"

namespace b1approx {

using Permutation = std::vector<int>;

// A surjection from the group presented by `source` onto a finite group,
// represented by the right action of each generator on the cosets of the
// kernel.  Coset 0 is the kernel itself.  All kernels here are normal, so
// the action is the right regular action of the image group and cosets
// biject with image elements.
struct FiniteQuotientMap {
    Presentation source;
    int order = 1;
    std::vector<Permutation> images;  // one permutation per generator

    int apply(Letter l, int coset) const {
        const Permutation& perm = images[std::abs(l) - 1];
        if (l > 0)
            return perm[coset];
        // inverse image lookup is precomputed
        return inverse_images[std::abs(l) - 1][coset];
    }
    int act(const Word& w, int coset) const {
        for (Letter l : w.letters)
            coset = apply(l, coset);
        return coset;
    }

    std::vector<Permutation> inverse_images;  // filled by validate()

    // Checks: permutation well-formedness, transitivity, relators acting
    // trivially; optionally regularity of the action (normal kernel) —
    // quadratic, so only requested for user-supplied permutation targets.
    // All in-library constructions are regular by construction.
    void validate(bool check_regularity = false);
};

FiniteQuotientMap trivial_quotient(const Presentation& p);
// target Z/n, generator i -> residues[i]
FiniteQuotientMap quotient_cyclic(const Presentation& p, long n,
                                  const std::vector<long>& residues);
// target (Z/prime)^k, generator i -> vectors[i]
FiniteQuotientMap quotient_elementary_abelian(const Presentation& p, unsigned prime,
                                              int k,
                                              const std::vector<std::vector<long>>& vectors);
// explicit permutation images (must define a regular action)
FiniteQuotientMap quotient_from_permutations(const Presentation& p, int order,
                                             std::vector<Permutation> perms);

// w in kernel?  (w acts trivially iff it fixes coset 0, by regularity)
bool membership(const FiniteQuotientMap& q, const Word& w);

// Group algebra on coset labels (labels = image-group elements, via the
// regular action; label(g) = act(g, 0)).
struct QuotientGroupOps {
    explicit QuotientGroupOps(const FiniteQuotientMap& q);
    int mul(int a, int b) const;  // label(a*b)
    int inv(int a) const;
    int conj_by_gen(int a, Letter g) const;  // label(g^-1 a g)
    const Word& coset_word(int c) const { return words_[c]; }
    const std::vector<Word>& coset_words() const { return words_; }

private:
    const FiniteQuotientMap& q_;
    std::vector<Word> words_;  // BFS transversal words
};

// kernel(fine) subseteq kernel(coarse)?  Constructive check: the label map
// l -> act_coarse(t_l, 0) must intertwine both actions on every generator.
bool factors_through(const FiniteQuotientMap& fine, const FiniteQuotientMap& coarse);

// Kernel intersection via the orbit of (0,0) in the product action.
FiniteQuotientMap intersect(const FiniteQuotientMap& a, const FiniteQuotientMap& b,
                            long long order_budget);

// Schreier data for the kernel of q: BFS (prefix-closed, deterministic)
// transversal, Schreier generators with the tree edges eliminated.
struct SchreierData {
    std::vector<Word> transversal;           // index = coset
    std::vector<std::vector<int>> sgen_at;   // [coset][gen-1] -> sgen id (1-based), 0 = trivial
    int sgen_count = 0;
    std::vector<Word> sgen_words;            // [sgen id - 1] -> word in ambient alphabet
};
SchreierData schreier_data(const FiniteQuotientMap& q);

// Reidemeister rewriting of w (must lie in the kernel when start_coset
// returns to itself) into the Schreier alphabet, starting at start_coset.
Word rewrite_in_subgroup(const SchreierData& sd, const FiniteQuotientMap& q, const Word& w,
                         int start_coset);

struct SubgroupPresentation {
    Presentation presentation;     // on Schreier generators
    std::vector<Word> inclusion;   // Schreier generator -> ambient word
    std::vector<Word> transversal;
};

SubgroupPresentation reidemeister_schreier(const FiniteQuotientMap& q);

// e_p(r, F_H) for r in the kernel, via the root chain + membership walk.
int e_p_in_subgroup(const FiniteQuotientMap& q, const Word& r, unsigned p);

struct PuchtaRelatorEntry {
    int relator = 0;          // index into ambient relators
    int e_outer = 0;          // e_p(r, F)
    int e_inner = 0;          // e_p(r, F_H)
    long count = 0;           // [G:H] / p^(e_outer - e_inner)
    std::vector<Word> conjugator_transversal;  // the chosen T(r)
};
struct PuchtaCertificate {
    unsigned p = 2;
    std::vector<PuchtaRelatorEntry> entries;
};

// Certificate only (cheap: no rewriting).  Index of q must be a p-power.
PuchtaCertificate puchta_certificate(const FiniteQuotientMap& q, unsigned p);

// Full refined-count subgroup presentation of the kernel per the certificate.
std::pair<SubgroupPresentation, PuchtaCertificate> puchta_presentation(
    const FiniteQuotientMap& q, unsigned p);

// The quotient of the *presented* group induced by a quotient of the free
// group: collapses cosets by the normal closure of the relator images.  The
// result's kernel is ker(q) * <<relators>>; source keeps the presentation.
FiniteQuotientMap induced_quotient(const Presentation& p, const FiniteQuotientMap& q_free);

bool is_p_power(long long n, unsigned p);

}  // namespace b1approx
