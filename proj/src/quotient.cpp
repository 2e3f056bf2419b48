#include "b1approx/quotient.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <queue>
#include <set>

namespace b1approx {

bool is_p_power(long long n, unsigned p) {
    if (n < 1)
        return false;
    while (n % p == 0)
        n /= p;
    return n == 1;
}

void FiniteQuotientMap::validate(bool check_regularity) {
    const int d = source.generator_count();
    if (static_cast<int>(images.size()) != d)
        throw domain_error("one permutation per generator required");
    inverse_images.assign(d, Permutation(order, -1));
    for (int g = 0; g < d; ++g) {
        const Permutation& perm = images[g];
        if (static_cast<int>(perm.size()) != order)
            throw domain_error("permutation size mismatch");
        for (int c = 0; c < order; ++c) {
            int img = perm[c];
            if (img < 0 || img >= order || inverse_images[g][img] != -1)
                throw domain_error("generator image is not a permutation");
            inverse_images[g][img] = c;
        }
    }
    // transitivity
    std::vector<char> seen(order, 0);
    std::queue<int> bfs;
    bfs.push(0);
    seen[0] = 1;
    int visited = 1;
    while (!bfs.empty()) {
        int c = bfs.front();
        bfs.pop();
        for (int g = 0; g < d; ++g)
            for (int nc : {images[g][c], inverse_images[g][c]})
                if (!seen[nc]) {
                    seen[nc] = 1;
                    ++visited;
                    bfs.push(nc);
                }
    }
    if (visited != order)
        throw domain_error("generator images act non-transitively: generated "
                           "subgroup has order dividing " + std::to_string(visited));
    // relators must die
    for (const auto& r : source.relators)
        for (int c = 0; c < order; ++c)
            if (act(r, c) != c)
                throw domain_error("relator " + format_word(r, source.alphabet) +
                                   " does not act trivially: not a homomorphism");
    if (check_regularity) {
        // The stabilizer S of coset 0 is generated by the Schreier
        // generators.  If l^-1 S l fixes 0 for every letter l, S is normal,
        // hence S is the kernel of the action and the action is the regular
        // one on cosets of a normal subgroup.
        std::vector<Word> transversal(order);
        std::vector<char> seen2(order, 0);
        seen2[0] = 1;
        std::queue<int> bq;
        bq.push(0);
        while (!bq.empty()) {
            int c = bq.front();
            bq.pop();
            for (int g = 1; g <= d; ++g)
                for (Letter l : {Letter(g), Letter(-g)}) {
                    int nc = apply(l, c);
                    if (!seen2[nc]) {
                        seen2[nc] = 1;
                        transversal[nc] = multiply(transversal[c], Word({l}));
                        bq.push(nc);
                    }
                }
        }
        for (int c = 0; c < order; ++c)
            for (int g = 1; g <= d; ++g) {
                Word s = multiply(multiply(transversal[c], Word({g})),
                                  invert(transversal[apply(g, c)]));
                for (int h = 1; h <= d; ++h)
                    for (Letter l : {Letter(h), Letter(-h)}) {
                        int x = apply(-l, 0);
                        x = act(s, x);
                        if (apply(l, x) != 0)
                            throw domain_error("coset action is not regular: "
                                               "kernel is not normal");
                    }
            }
    }
}

FiniteQuotientMap trivial_quotient(const Presentation& p) {
    FiniteQuotientMap q;
    q.source = p;
    q.order = 1;
    q.images.assign(p.generator_count(), Permutation{0});
    q.validate();
    return q;
}

FiniteQuotientMap quotient_cyclic(const Presentation& p, long n,
                                  const std::vector<long>& residues) {
    if (n < 1)
        throw domain_error("cyclic target order must be positive");
    if (static_cast<int>(residues.size()) != p.generator_count())
        throw domain_error("one residue per generator required");
    FiniteQuotientMap q;
    q.source = p;
    q.order = static_cast<int>(n);
    for (long r : residues) {
        long rr = ((r % n) + n) % n;
        Permutation perm(n);
        for (long c = 0; c < n; ++c)
            perm[c] = static_cast<int>((c + rr) % n);
        q.images.push_back(std::move(perm));
    }
    q.validate();
    return q;
}

FiniteQuotientMap quotient_elementary_abelian(const Presentation& p, unsigned prime,
                                              int k,
                                              const std::vector<std::vector<long>>& vectors) {
    if (static_cast<int>(vectors.size()) != p.generator_count())
        throw domain_error("one vector per generator required");
    long long n = 1;
    for (int i = 0; i < k; ++i)
        n *= prime;
    auto encode = [&](const std::vector<unsigned>& v) {
        long long idx = 0;
        for (int i = k - 1; i >= 0; --i)
            idx = idx * prime + v[i];
        return static_cast<int>(idx);
    };
    FiniteQuotientMap q;
    q.source = p;
    q.order = static_cast<int>(n);
    for (const auto& vec : vectors) {
        if (static_cast<int>(vec.size()) != k)
            throw domain_error("vector length mismatch");
        Permutation perm(n);
        std::vector<unsigned> digits(k);
        for (long long c = 0; c < n; ++c) {
            long long cc = c;
            for (int i = 0; i < k; ++i) {
                digits[i] = static_cast<unsigned>(cc % prime);
                cc /= prime;
            }
            for (int i = 0; i < k; ++i)
                digits[i] = static_cast<unsigned>(
                    (digits[i] + ((vec[i] % prime) + prime)) % prime);
            perm[c] = encode(digits);
        }
        q.images.push_back(std::move(perm));
    }
    q.validate();
    return q;
}

FiniteQuotientMap quotient_from_permutations(const Presentation& p, int order,
                                             std::vector<Permutation> perms) {
    FiniteQuotientMap q;
    q.source = p;
    q.order = order;
    q.images = std::move(perms);
    q.validate(true);
    return q;
}

bool membership(const FiniteQuotientMap& q, const Word& w) {
    return q.act(w, 0) == 0;
}

QuotientGroupOps::QuotientGroupOps(const FiniteQuotientMap& q) : q_(q) {
    words_.resize(q.order);
    std::vector<char> seen(q.order, 0);
    seen[0] = 1;
    std::queue<int> bfs;
    bfs.push(0);
    const int d = q.source.generator_count();
    while (!bfs.empty()) {
        int c = bfs.front();
        bfs.pop();
        for (int g = 1; g <= d; ++g)
            for (Letter l : {Letter(g), Letter(-g)}) {
                int nc = q.apply(l, c);
                if (seen[nc])
                    continue;
                seen[nc] = 1;
                words_[nc] = multiply(words_[c], Word({l}));
                bfs.push(nc);
            }
    }
}

int QuotientGroupOps::mul(int a, int b) const {
    // label(ab) = act(word_b, label(a))
    return q_.act(words_[b], a);
}

int QuotientGroupOps::inv(int a) const {
    return q_.act(invert(words_[a]), 0);
}

int QuotientGroupOps::conj_by_gen(int a, Letter g) const {
    int c = q_.apply(-g, 0);
    c = q_.act(words_[a], c);
    return q_.apply(g, c);
}

bool factors_through(const FiniteQuotientMap& fine, const FiniteQuotientMap& coarse) {
    if (!(fine.source.alphabet == coarse.source.alphabet))
        return false;
    QuotientGroupOps ops(fine);
    std::vector<int> phi(fine.order);
    for (int c = 0; c < fine.order; ++c)
        phi[c] = coarse.act(ops.coset_word(c), 0);
    const int d = fine.source.generator_count();
    for (int c = 0; c < fine.order; ++c)
        for (int g = 1; g <= d; ++g)
            if (phi[fine.apply(g, c)] != coarse.apply(g, phi[c]))
                return false;
    return true;
}

FiniteQuotientMap intersect(const FiniteQuotientMap& a, const FiniteQuotientMap& b,
                            long long order_budget) {
    if (!(a.source.alphabet == b.source.alphabet))
        throw domain_error("intersect: alphabet mismatch");
    const int d = a.source.generator_count();
    // orbit of (0,0) under the product action
    std::vector<long long> index_of(static_cast<size_t>(a.order) * b.order, -1);
    auto key = [&](int ca, int cb) { return static_cast<size_t>(ca) * b.order + cb; };
    std::vector<std::pair<int, int>> states;
    states.push_back({0, 0});
    index_of[key(0, 0)] = 0;
    for (size_t head = 0; head < states.size(); ++head) {
        auto [ca, cb] = states[head];
        for (int g = 1; g <= d; ++g)
            for (Letter l : {Letter(g), Letter(-g)}) {
                int na = a.apply(l, ca), nb = b.apply(l, cb);
                if (index_of[key(na, nb)] < 0) {
                    if (static_cast<long long>(states.size()) >= order_budget)
                        throw resource_limit("intersection order exceeds budget",
                                             static_cast<long long>(states.size()) + 1);
                    index_of[key(na, nb)] = static_cast<long long>(states.size());
                    states.push_back({na, nb});
                }
            }
    }
    FiniteQuotientMap q;
    q.source = a.source;
    q.order = static_cast<int>(states.size());
    q.images.assign(d, Permutation(q.order));
    for (int s = 0; s < q.order; ++s)
        for (int g = 1; g <= d; ++g)
            q.images[g - 1][s] = static_cast<int>(
                index_of[key(a.apply(g, states[s].first), b.apply(g, states[s].second))]);
    q.validate();
    return q;
}

SchreierData schreier_data(const FiniteQuotientMap& q) {
    const int d = q.source.generator_count();
    SchreierData sd;
    sd.transversal.resize(q.order);
    sd.sgen_at.assign(q.order, std::vector<int>(d, -1));  // -1 = unassigned
    std::vector<char> seen(q.order, 0);
    seen[0] = 1;
    std::queue<int> bfs;
    bfs.push(0);
    // tree edges first (BFS over generators in order, positive sign then
    // negative), so the transversal is prefix-closed and deterministic
    while (!bfs.empty()) {
        int c = bfs.front();
        bfs.pop();
        for (int g = 1; g <= d; ++g)
            for (Letter l : {Letter(g), Letter(-g)}) {
                int nc = q.apply(l, c);
                if (!seen[nc]) {
                    seen[nc] = 1;
                    sd.transversal[nc] = multiply(sd.transversal[c], Word({l}));
                    if (l > 0)
                        sd.sgen_at[c][g - 1] = 0;  // tree edge: trivial
                    else
                        sd.sgen_at[nc][g - 1] = 0;  // same edge, traversed backwards
                    bfs.push(nc);
                }
            }
    }
    for (int c = 0; c < q.order; ++c)
        for (int g = 1; g <= d; ++g) {
            if (sd.sgen_at[c][g - 1] == 0)
                continue;
            int nc = q.apply(g, c);
            Word s = multiply(multiply(sd.transversal[c], Word({g})),
                              invert(sd.transversal[nc]));
            if (s.empty()) {
                sd.sgen_at[c][g - 1] = 0;
                continue;
            }
            sd.sgen_words.push_back(std::move(s));
            sd.sgen_at[c][g - 1] = ++sd.sgen_count;
        }
    return sd;
}

Word rewrite_in_subgroup(const SchreierData& sd, const FiniteQuotientMap& q, const Word& w,
                         int start_coset) {
    std::vector<Letter> out;
    int c = start_coset;
    for (Letter l : w.letters) {
        int g = std::abs(l);
        if (l > 0) {
            int s = sd.sgen_at[c][g - 1];
            if (s != 0) {
                if (!out.empty() && out.back() == -s)
                    out.pop_back();
                else
                    out.push_back(s);
            }
            c = q.apply(l, c);
        } else {
            c = q.apply(l, c);
            int s = sd.sgen_at[c][g - 1];
            if (s != 0) {
                if (!out.empty() && out.back() == s)
                    out.pop_back();
                else
                    out.push_back(-s);
            }
        }
    }
    return Word(std::move(out));
}

static Alphabet schreier_alphabet(int count) {
    if (count == 0)
        return Alphabet{};  // trivial kernel presents the trivial group
    std::vector<std::string> names;
    names.reserve(count);
    for (int i = 1; i <= count; ++i)
        names.push_back("s" + std::to_string(i));
    return Alphabet(std::move(names));
}

SubgroupPresentation reidemeister_schreier(const FiniteQuotientMap& q) {
    SchreierData sd = schreier_data(q);
    SubgroupPresentation sp;
    Alphabet sub_alphabet = schreier_alphabet(sd.sgen_count);
    std::vector<Word> relators;
    std::set<Word> seen;  // distinct conjugates only; refined counts live in puchta_presentation
    for (const auto& r : q.source.relators)
        for (int c = 0; c < q.order; ++c) {
            Word rw = rewrite_in_subgroup(sd, q, r, c);
            if (!rw.empty() && seen.insert(rw).second)
                relators.push_back(std::move(rw));
        }
    sp.presentation = Presentation(sub_alphabet, std::move(relators));
    sp.inclusion = sd.sgen_words;
    sp.transversal = sd.transversal;
    return sp;
}

int e_p_in_subgroup(const FiniteQuotientMap& q, const Word& r, unsigned p) {
    if (!membership(q, r))
        throw domain_error("e_p_in_subgroup: word is not in the kernel");
    RootDecomposition rd = p_root_decomposition(r, p);
    // p^j-th root of r = conj * base^(p^(e-j)) * conj^-1; largest j with the
    // root in the kernel
    for (int j = static_cast<int>(rd.exponent); j >= 1; --j) {
        Word root = rd.base;
        for (int k = 0; k < static_cast<int>(rd.exponent) - j; ++k)
            root = power(root, p);
        root = multiply(multiply(rd.conjugator, root), invert(rd.conjugator));
        if (membership(q, root))
            return j;
    }
    return 0;
}

PuchtaCertificate puchta_certificate(const FiniteQuotientMap& q, unsigned p) {
    if (!is_p_power(q.order, p))
        throw domain_error("puchta presentation requires p-power index");
    PuchtaCertificate cert;
    cert.p = p;
    SchreierData sd = schreier_data(q);
    for (int ri = 0; ri < q.source.relator_count(); ++ri) {
        const Word& r = q.source.relators[ri];
        PuchtaRelatorEntry entry;
        entry.relator = ri;
        RootDecomposition rd = p_root_decomposition(r, p);
        entry.e_outer = static_cast<int>(rd.exponent);
        entry.e_inner = e_p_in_subgroup(q, r, p);
        // w(r): the full p^e_outer-th root of r in F
        Word w_r = multiply(multiply(rd.conjugator, rd.base), invert(rd.conjugator));
        // cosets of <w(r)> F_H in F = blocks of labels under left mult by
        // the cyclic subgroup generated by label(w(r))
        std::vector<int> cyc;
        int c = 0;
        do {
            cyc.push_back(c);
            c = q.act(w_r, c);
        } while (c != 0);
        long ord = static_cast<long>(cyc.size());
        long expected = q.order;
        for (int k = 0; k < entry.e_outer - entry.e_inner; ++k)
            expected /= static_cast<long>(p);
        // block of label l = image of the cyclic set under the permutation
        // of the transversal word t_l; representative = lowest label
        std::vector<char> used(q.order, 0);
        for (int l = 0; l < q.order; ++l) {
            if (used[l])
                continue;
            // w^k * t_l has label act(t_l, cyc[k])
            bool is_rep = true;
            for (int k = 0; k < ord; ++k) {
                int member = q.act(sd.transversal[l], cyc[k]);
                used[member] = 1;
                if (member < l)
                    is_rep = false;
            }
            if (is_rep)
                entry.conjugator_transversal.push_back(sd.transversal[l]);
        }
        entry.count = static_cast<long>(entry.conjugator_transversal.size());
        if (entry.count * ord != q.order || entry.count != expected)
            throw invariant_violation("puchta certificate count mismatch for relator " +
                                      std::to_string(ri));
        cert.entries.push_back(std::move(entry));
    }
    return cert;
}

std::pair<SubgroupPresentation, PuchtaCertificate> puchta_presentation(
    const FiniteQuotientMap& q, unsigned p) {
    PuchtaCertificate cert = puchta_certificate(q, p);
    SchreierData sd = schreier_data(q);
    SubgroupPresentation sp;
    sp.inclusion = sd.sgen_words;
    sp.transversal = sd.transversal;
    std::vector<Word> relators;
    for (const auto& entry : cert.entries) {
        const Word& r = q.source.relators[entry.relator];
        for (const auto& t : entry.conjugator_transversal) {
            Word conj = multiply(multiply(invert(t), r), t);
            Word rw = rewrite_in_subgroup(sd, q, conj, 0);
            if (rw.empty())
                throw invariant_violation("puchta relator rewrites to identity");
            relators.push_back(std::move(rw));
        }
    }
    sp.presentation = Presentation(schreier_alphabet(sd.sgen_count),
                                   std::move(relators));
    return {std::move(sp), std::move(cert)};
}

FiniteQuotientMap induced_quotient(const Presentation& p, const FiniteQuotientMap& q_free) {
    if (!(p.alphabet == q_free.source.alphabet))
        throw domain_error("induced_quotient: alphabet mismatch");
    QuotientGroupOps ops(q_free);
    // normal closure M of the relator images
    std::vector<char> in_m(q_free.order, 0);
    in_m[0] = 1;
    std::vector<int> members{0};
    std::vector<int> gens;
    auto add_gen = [&](int l) {
        if (l != 0)
            gens.push_back(l);
    };
    for (const auto& r : p.relators)
        add_gen(q_free.act(r, 0));
    const int d = p.generator_count();
    bool grew = true;
    while (grew) {
        grew = false;
        // subgroup closure under the current generator set
        for (size_t head = 0; head < members.size(); ++head)
            for (int g : gens) {
                int prod = ops.mul(members[head], g);
                if (!in_m[prod]) {
                    in_m[prod] = 1;
                    members.push_back(prod);
                    grew = true;
                }
            }
        // close the generator set under conjugation by alphabet generators
        size_t before = gens.size();
        std::set<int> gen_set(gens.begin(), gens.end());
        for (size_t i = 0; i < before; ++i)
            for (int g = 1; g <= d; ++g)
                for (Letter l : {Letter(g), Letter(-g)}) {
                    int cg = ops.conj_by_gen(gens[i], l);
                    if (!in_m[cg] && gen_set.insert(cg).second) {
                        gens.push_back(cg);
                        grew = true;
                    }
                }
    }
    // blocks = right cosets of M; block of label l = perm of t_l applied to M
    std::vector<int> block(q_free.order, -1);
    int nblocks = 0;
    for (int l = 0; l < q_free.order; ++l) {
        if (block[l] >= 0)
            continue;
        int b = nblocks++;
        for (int m : members) {
            int member_label = q_free.act(ops.coset_word(l), m);
            block[member_label] = b;
        }
    }
    FiniteQuotientMap out;
    out.source = p;
    out.order = nblocks;
    out.images.assign(d, Permutation(nblocks, -1));
    for (int l = 0; l < q_free.order; ++l)
        for (int g = 1; g <= d; ++g)
            out.images[g - 1][block[l]] = block[q_free.apply(g, l)];
    out.validate();
    return out;
}

}  // namespace b1approx
