#include "b1approx/constructions.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

namespace b1approx {

// --- section 4 ----------------------------------------------------------

std::pair<Presentation, Chain> free_product_counterexample(
    unsigned p, unsigned q, const std::vector<long>& moduli) {
    if (p == q)
        throw domain_error("free product counterexample needs distinct primes");
    Alphabet a({"x", "y", "z", "t"});
    std::vector<Word> rels;
    rels.push_back(power(Word({1}), p));
    rels.push_back(power(Word({2}), q));
    rels.push_back(power(Word({3}), q));
    Presentation pres(a, std::move(rels));
    Chain chain = cyclic_chain(pres, {0, 0, 0, 1}, moduli);
    return {std::move(pres), std::move(chain)};
}

SmallCancellationTriple find_small_cancellation_words(unsigned p, unsigned q,
                                                      std::uint64_t seed,
                                                      int min_length, int attempts) {
    if (min_length < 24)
        throw domain_error("commutator words shorter than 24 cannot reach C'(1/6) "
                           "against the power relators");
    Alphabet a({"x", "y", "z"});
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> gen(1, 3);
    std::uniform_int_distribution<int> sign(0, 1);
    std::uniform_int_distribution<int> seg(3, 6);
    auto random_word = [&](int len) {
        std::vector<Letter> ls;
        while (static_cast<int>(ls.size()) < len) {
            Letter l = gen(rng) * (sign(rng) ? 1 : -1);
            if (!ls.empty() && ls.back() == -l)
                continue;
            ls.push_back(l);
        }
        return reduce(ls, 3);
    };
    auto random_commutator_word = [&]() {
        Word w;
        while (w.length() < min_length)
            w = multiply(w, commutator(random_word(seg(rng)), random_word(seg(rng))));
        return w;
    };
    SmallCancellationTriple best;
    best.best_ratio = 1;
    for (int t = 0; t < attempts; ++t) {
        Word u = random_commutator_word();
        Word v = random_commutator_word();
        Word w = random_commutator_word();
        std::vector<Word> rels;
        rels.push_back(multiply(power(Word({1}), p), invert(u)));
        rels.push_back(multiply(power(Word({2}), q), invert(v)));
        rels.push_back(multiply(power(Word({3}), q), invert(w)));
        Presentation pres(a, std::move(rels));
        SmallCancellationReport rep = small_cancellation_check(pres);
        if (rep.worst_piece_ratio < best.best_ratio) {
            best.best_ratio = rep.worst_piece_ratio;
            best.u = u;
            best.v = v;
            best.w = w;
            best.presentation = pres;
            best.report = rep;
        }
        if (rep.satisfied) {
            best.found = true;
            return best;
        }
    }
    return best;
}

// --- p-regularity -------------------------------------------------------

static std::vector<std::pair<int, Word>> p_th_roots(const Presentation& pres,
                                                    unsigned p) {
    std::vector<std::pair<int, Word>> roots;
    for (int i = 0; i < pres.relator_count(); ++i) {
        RootDecomposition rd = p_root_decomposition(pres.relators[i], p);
        if (rd.exponent >= 1) {
            mpz_class k;
            mpz_ui_pow_ui(k.get_mpz_t(), p, rd.exponent - 1);
            Word root = multiply(multiply(rd.conjugator, power(rd.base, k.get_si())),
                                 invert(rd.conjugator));
            roots.push_back({i, std::move(root)});
        }
    }
    return roots;
}

RegularityCertificate is_p_regular(const Presentation& pres, unsigned p,
                                   int depth_budget, long long index_budget) {
    RegularityCertificate cert;
    auto roots = p_th_roots(pres, p);
    if (roots.empty()) {
        // vacuously regular
        cert.status = RegularityCertificate::Status::Certified;
        cert.witness = trivial_quotient(pres);
        return cert;
    }
    unsigned emax = 2;
    for (const auto& r : pres.relators)
        emax = std::max(emax, p_root_decomposition(r, p).exponent + 1);
    emax = std::min(emax, 20u);
    auto try_witness = [&](const FiniteQuotientMap& q) -> bool {
        std::vector<RootSurvivor> survivors;
        for (const auto& [ri, root] : roots) {
            int img = q.act(root, 0);
            if (img == 0)
                return false;
            survivors.push_back({ri, root, img});
        }
        cert.status = RegularityCertificate::Status::Certified;
        cert.witness = q;
        cert.survivors = std::move(survivors);
        return true;
    };
    FiniteQuotientMap base = trivial_quotient(pres);
    std::map<unsigned, FiniteQuotientMap> depth1;
    for (unsigned e = 1; e <= emax; ++e) {
        try {
            depth1[e] = derived_step_mod(pres, base, p, e, index_budget);
        } catch (const resource_limit&) {
            continue;
        }
        if (try_witness(depth1[e]))
            return cert;
    }
    if (depth_budget >= 2) {
        // shallow first exponents, deep second ones, cheap sums first
        for (unsigned total = 2; total <= emax + 3; ++total)
            for (unsigned e1 = 1; e1 <= std::min(3u, total - 1); ++e1) {
                unsigned e2 = total - e1;
                if (e2 < 1 || e2 > emax || !depth1.count(e1))
                    continue;
                try {
                    FiniteQuotientMap q2 =
                        derived_step_mod(pres, depth1[e1], p, e2, index_budget);
                    if (try_witness(q2))
                        return cert;
                } catch (const resource_limit&) {
                    continue;
                }
            }
    }
    return cert;  // Unknown
}

void recheck_certificate(const Presentation& pres, unsigned p,
                         const RegularityCertificate& cert) {
    if (cert.status != RegularityCertificate::Status::Certified)
        return;  // Unknown asserts nothing
    if (!cert.witness)
        throw invariant_violation("certified certificate lacks a witness");
    FiniteQuotientMap w = *cert.witness;
    if (!(w.source.alphabet == pres.alphabet))
        throw invariant_violation("certificate witness alphabet mismatch");
    w.source = pres;
    w.validate(true);  // includes normality of the kernel
    if (!is_p_power(w.order, p))
        throw invariant_violation("certificate witness index is not a p-power");
    auto roots = p_th_roots(pres, p);
    if (roots.size() != cert.survivors.size())
        throw invariant_violation("certificate survivor list is incomplete");
    for (size_t i = 0; i < roots.size(); ++i) {
        const auto& s = cert.survivors[i];
        if (s.relator != roots[i].first || !(s.root == roots[i].second))
            throw invariant_violation("certificate root mismatch at relator " +
                                      std::to_string(roots[i].first));
        if (w.act(s.root, 0) != s.image || s.image == 0)
            throw invariant_violation("certificate root does not survive in witness");
    }
}

// --- Lemma 5.2 wiring ---------------------------------------------------

bool puchta_count_check(const Presentation& pres, const FiniteQuotientMap& q,
                        unsigned p) {
    if (!(q.source.alphabet == pres.alphabet))
        throw domain_error("puchta_count_check: alphabet mismatch");
    auto [puchta, cert] = puchta_presentation(q, p);
    for (const auto& entry : cert.entries) {
        long expected = q.order;
        for (int k = 0; k < entry.e_outer - entry.e_inner; ++k)
            expected /= static_cast<long>(p);
        if (entry.count != expected)
            return false;
    }
    SubgroupPresentation rs = reidemeister_schreier(q);
    AbelianInvariants a = abelian_invariants(puchta.presentation, {p});
    AbelianInvariants b = abelian_invariants(rs.presentation, {p});
    return a.free_rank == b.free_rank && a.invariant_factors == b.invariant_factors;
}

// --- Lemma 5.5 ----------------------------------------------------------

PregularSubgroup pregular_subgroup(const Presentation& pres, unsigned p,
                                   const RegularityCertificate& cert,
                                   int depth_budget, long long index_budget) {
    (void)depth_budget;
    (void)index_budget;
    PregularSubgroup out;
    out.def_p_value = p_deficiency(pres, p);
    if (cert.status != RegularityCertificate::Status::Certified)
        return out;
    out.h = *cert.witness;
    out.cert = puchta_certificate(out.h, p);
    SchreierData sd = schreier_data(out.h);
    mpz_class relator_total = 0;
    for (const auto& e : out.cert.entries)
        relator_total += e.count;
    out.def_h = mpz_class(sd.sgen_count) - relator_total;
    out.measurement = mpq_class(out.def_h - 1) / out.h.order;
    out.measurement.canonicalize();
    out.bound_holds = out.measurement >= out.def_p_value;
    out.ok = true;
    return out;
}

// --- Lemma 5.6 ----------------------------------------------------------

AdjoinResult adjoin_power(const Presentation& pres, const Word& f, unsigned p,
                          int start_n, const RegularityCertificate& cert,
                          int depth_budget, long long index_budget, int n_slack) {
    AdjoinResult out;
    if (f.empty())
        throw domain_error("adjoin_power: identity word");
    // image order of f in the witness: smallest p^k killing it there, so
    // f^(p^n) vanishes in G/H for all n >= k (the lemma's choice of N)
    int n0 = start_n;
    if (cert.status == RegularityCertificate::Status::Certified) {
        long ord = 1;
        int c = cert.witness->act(f, 0);
        while (c != 0) {
            c = cert.witness->act(f, c);
            ++ord;
        }
        int k = 0;
        long t = 1;
        while (t < ord) {
            t *= p;
            ++k;
        }
        n0 = std::max(n0, k);
    }
    for (int n = n0; n <= n0 + n_slack; ++n) {
        mpz_class pn;
        mpz_ui_pow_ui(pn.get_mpz_t(), p, n);
        std::vector<Word> rels = pres.relators;
        rels.push_back(power(f, pn.get_si()));
        Presentation ext(pres.alphabet, std::move(rels));
        RegularityCertificate c2 = is_p_regular(ext, p, depth_budget, index_budget);
        if (c2.status == RegularityCertificate::Status::Certified) {
            out.ok = true;
            out.extended = std::move(ext);
            out.n_used = n;
            out.cert = std::move(c2);
            return out;
        }
    }
    return out;
}

// --- Corollary 5.7 ------------------------------------------------------

// Nielsen transformations on the free basis of H, tracked on the images in
// K/[K,K]; the rows that reduce to zero give basis elements inside [K,K].
static std::vector<Word> commutator_side_basis(const FiniteQuotientMap& K_level,
                                               const FiniteQuotientMap& H_level) {
    SchreierData sd_K = schreier_data(K_level);
    SchreierData sd_H = schreier_data(H_level);
    const int dK = sd_K.sgen_count;
    std::vector<Word> words = sd_H.sgen_words;
    const int m = static_cast<int>(words.size());
    std::vector<std::vector<mpz_class>> rows(m, std::vector<mpz_class>(dK));
    for (int i = 0; i < m; ++i) {
        Word rw = rewrite_in_subgroup(sd_K, K_level, words[i], 0);
        auto sums = exponent_sums(rw, dK);
        for (int j = 0; j < dK; ++j)
            rows[i][j] = static_cast<long>(sums[j]);
    }
    int done = 0;
    for (int col = 0; col < dK && done < m; ++col) {
        while (true) {
            int piv = -1;
            for (int i = done; i < m; ++i)
                if (rows[i][col] != 0 &&
                    (piv < 0 || mpz_cmpabs(rows[i][col].get_mpz_t(),
                                           rows[piv][col].get_mpz_t()) < 0))
                    piv = i;
            if (piv < 0)
                break;
            std::swap(rows[done], rows[piv]);
            std::swap(words[done], words[piv]);
            bool clean = true;
            for (int i = done + 1; i < m; ++i) {
                if (rows[i][col] == 0)
                    continue;
                mpz_class quo = rows[i][col] / rows[done][col];  // truncated
                if (quo != 0) {
                    for (int j = 0; j < dK; ++j)
                        rows[i][j] -= quo * rows[done][j];
                    words[i] = multiply(words[i], power(words[done], -quo.get_si()));
                }
                if (rows[i][col] != 0)
                    clean = false;
            }
            if (clean) {
                ++done;
                break;
            }
        }
    }
    std::vector<Word> y2(words.begin() + done, words.end());
    std::sort(y2.begin(), y2.end(), [](const Word& a, const Word& b) {
        if (a.length() != b.length())
            return a.length() < b.length();
        return a.letters < b.letters;
    });
    return y2;
}

struct TrackedLevel {
    FiniteQuotientMap hq;
    SchreierData sd;
    Presentation sub;
    IntMatrix lat;  // abelianized relator matrix of sub
    long b1 = 0;
};

static TrackedLevel track_level(const Presentation& pres,
                                const FiniteQuotientMap& H_level, FieldMode mode) {
    TrackedLevel t;
    t.hq = induced_quotient(pres, H_level);
    t.sd = schreier_data(t.hq);
    t.sub = reidemeister_schreier(t.hq).presentation;
    t.lat = abelianized_relator_matrix(t.sub);
    if (mode.rational)
        t.b1 = t.sub.generator_count() - smith_normal_form(t.lat).rank;
    else
        t.b1 = t.sub.generator_count() - rank_mod_p(t.lat, mode.q);
    return t;
}

// non-trivial image in H_1(H'; F_q), or infinite order in H_1(H') for the
// rational mode: the vector must enlarge the relator row space
static bool survives_in_h1(const TrackedLevel& t, const Word& f, FieldMode mode) {
    Word rw = rewrite_in_subgroup(t.sd, t.hq, f, 0);
    auto sums = exponent_sums(rw, t.sub.generator_count());
    IntMatrix ext(t.lat.rows + 1, t.lat.cols);
    ext.a = t.lat.a;
    ext.a.resize(static_cast<size_t>(ext.rows) * ext.cols);
    for (int j = 0; j < ext.cols; ++j)
        ext.at(ext.rows - 1, j) = static_cast<long>(sums[j]);
    if (mode.rational)
        return smith_normal_form(ext).rank > smith_normal_form(t.lat).rank;
    return rank_mod_p(ext, mode.q) > rank_mod_p(t.lat, mode.q);
}

KillResult kill_excess_homology(const Presentation& pres, unsigned p,
                                const RegularityCertificate& cert,
                                const FiniteQuotientMap& K_level,
                                const FiniteQuotientMap& H_level,
                                const mpq_class& delta, FieldMode mode,
                                int depth_budget, long long index_budget) {
    if (!mode.rational && mode.q == 0)
        throw domain_error("kill_excess_homology: field prime required");
    KillResult out;
    SchreierData sd_K = schreier_data(K_level);
    out.d_K = sd_K.sgen_count;
    out.extended = pres;
    out.cert = cert;
    out.delta_spent = 0;
    TrackedLevel t = track_level(out.extended, H_level, mode);
    out.b1_initial = t.b1;
    out.b1_final = t.b1;
    if (t.b1 <= out.d_K) {
        out.reached = true;  // R' = empty set
        return out;
    }
    mpq_class per_step = delta / (t.b1 - out.d_K);
    per_step.canonicalize();
    if (!is_p_power(H_level.order, p) || !is_p_power(K_level.order, p))
        throw domain_error("kill_excess_homology: levels must have p-power index");
    std::vector<Word> candidates = commutator_side_basis(K_level, H_level);
    std::vector<bool> used(candidates.size(), false);
    while (t.b1 > out.d_K) {
        int pick = -1;
        for (size_t i = 0; i < candidates.size(); ++i)
            if (!used[i] && survives_in_h1(t, candidates[i], mode)) {
                pick = static_cast<int>(i);
                break;
            }
        if (pick < 0)
            break;  // no usable candidate: partial result
        used[pick] = true;
        const Word& f = candidates[pick];
        int n = 1;
        mpq_class cost(1, p);
        while (cost >= per_step || out.delta_spent + cost >= delta) {
            ++n;
            cost /= p;
            if (n > 62)
                break;
        }
        AdjoinResult ar = adjoin_power(out.extended, f, p, n, out.cert,
                                       depth_budget, index_budget);
        if (!ar.ok)
            break;
        mpz_class pn;
        mpz_ui_pow_ui(pn.get_mpz_t(), p, ar.n_used);
        int e = static_cast<int>(p_root_decomposition(power(f, pn.get_si()), p).exponent);
        mpq_class spent;
        mpz_ui_pow_ui(spent.get_den().get_mpz_t(), p, e);
        spent.get_num() = 1;
        out.delta_spent += spent;
        out.extended = std::move(ar.extended);
        out.cert = std::move(ar.cert);
        long prev = t.b1;
        t = track_level(out.extended, H_level, mode);
        if (!mode.rational && t.b1 >= prev)
            throw invariant_violation("kill step failed to decrease b1 over F_q");
        out.steps.push_back({f, ar.n_used, e, t.b1});
        out.b1_final = t.b1;
    }
    out.reached = t.b1 <= out.d_K;
    if (out.delta_spent >= delta)
        throw invariant_violation("kill_excess_homology overspent its budget");
    return out;
}

// --- Theorem 5.1 driver -------------------------------------------------

Presentation ConstructionState::presentation_at(int stage) const {
    std::vector<Word> rels;
    for (size_t i = 0; i < relators.size(); ++i)
        if (relator_stage[i] <= stage)
            rels.push_back(relators[i]);
    return Presentation(alphabet, std::move(rels));
}

static void log_line(std::ostream* log, const std::string& action,
                     std::initializer_list<std::pair<std::string, std::string>> kv) {
    if (!log)
        return;
    nlohmann::json j;
    j["action"] = action;
    for (const auto& [k, v] : kv)
        j[k] = v;
    *log << j.dump() << "\n";
}

static std::string q_str(const mpq_class& q) {
    std::ostringstream os;
    os << q;
    return os.str();
}

ConstructionState theorem51_driver(int d, unsigned p, const mpq_class& epsilon,
                                   const std::vector<mpq_class>& delta_schedule,
                                   int stages, const DriverBudgets& budgets,
                                   std::uint64_t seed, FieldMode mode,
                                   std::ostream* log) {
    if (d < 2)
        throw domain_error("theorem51_driver: need d >= 2");
    if (epsilon <= 0 || epsilon >= 1)
        throw domain_error("theorem51_driver: need 0 < epsilon < 1");
    if (static_cast<int>(delta_schedule.size()) < stages)
        throw domain_error("theorem51_driver: delta schedule shorter than stages");
    if (!mode.rational && mode.q == p)
        throw domain_error("theorem51_driver: field prime must differ from p");
    ConstructionState st;
    st.alphabet = Alphabet::standard(d);
    st.p = p;
    st.epsilon = epsilon;
    st.delta_schedule = delta_schedule;
    st.mode = mode;
    st.seed = seed;
    Presentation pfree(st.alphabet, {});
    st.f_tower.push_back(trivial_quotient(pfree));
    mpq_class target = mpq_class(d - 1) - epsilon;
    target.canonicalize();
    // stage 0: only condition (i), trivially b1(F) = d over index 1
    StageRecord base;
    base.n = 0;
    base.even_ratio_lower = d;
    base.cert = is_p_regular(Presentation(st.alphabet, {}), p);
    base.conditions[0] = mpq_class(d) > target;
    for (int c = 1; c < 6; ++c)
        base.conditions[c] = true;  // vacuous at n = 0
    st.stages.push_back(std::move(base));
    log_line(log, "stage0", {{"even_ratio", q_str(mpq_class(d))}});

    FiniteQuotientMap phi_cursor = st.f_tower[0];
    for (int N = 0; N < stages; ++N) {
        try {
            Presentation pn = st.presentation_at(N);
            // copy: f_tower grows below and would invalidate a reference
            const FiniteQuotientMap K_level = st.f_tower[2 * N];
            SchreierData sd_K = schreier_data(K_level);
            const long dK = sd_K.sgen_count;  // d(F_{2N}) by the Schreier formula
            // pick e: d(F_2N) / [G(N):G(N)_{2N+1}] < delta_{N+1}
            FiniteQuotientMap H_level;
            unsigned e_used = 0;
            for (unsigned e = 1; e <= 24; ++e) {
                FiniteQuotientMap cand =
                    derived_step_mod(pfree, K_level, p, e, budgets.index_budget);
                FiniteQuotientMap ind = induced_quotient(pn, cand);
                mpq_class ratio(dK, ind.order);
                ratio.canonicalize();
                if (ratio < delta_schedule[N]) {
                    H_level = std::move(cand);
                    e_used = e;
                    break;
                }
            }
            if (e_used == 0)
                throw resource_limit("no exponent e reached the delta bound", 0);
            log_line(log, "odd_level",
                     {{"stage", std::to_string(N + 1)},
                      {"e", std::to_string(e_used)},
                      {"free_index", std::to_string(H_level.order)}});
            // Corollary 5.7 with H = F_{2N+1}, K = F_{2N}
            mpq_class defp = p_deficiency(pn, p);
            mpq_class delta_budget = defp - target;
            delta_budget.canonicalize();
            if (delta_budget <= 0)
                throw invariant_violation("deficiency budget exhausted before stage " +
                                          std::to_string(N + 1));
            KillResult kr =
                kill_excess_homology(pn, p, st.stages[N].cert, K_level, H_level,
                                     delta_budget, mode, budgets.depth_budget,
                                     budgets.index_budget);
            if (!kr.reached) {
                st.failure = "kill_excess_homology stalled at stage " +
                             std::to_string(N + 1) + " with b1 " +
                             std::to_string(kr.b1_final);
                return st;
            }
            for (const auto& step : kr.steps) {
                mpz_class pn_exp;
                mpz_ui_pow_ui(pn_exp.get_mpz_t(), p, step.n);
                st.relators.push_back(power(step.f, pn_exp.get_si()));
                st.relator_stage.push_back(N + 1);
                log_line(log, "adjoin",
                         {{"stage", std::to_string(N + 1)},
                          {"f", format_word(step.f, st.alphabet)},
                          {"n", std::to_string(step.n)},
                          {"b1_after", std::to_string(step.b1_after)}});
            }
            st.f_tower.push_back(H_level);  // F_{2N+1}
            Presentation pn1 = st.presentation_at(N + 1);
            StageRecord rec;
            rec.n = N + 1;
            rec.e_used = e_used;
            for (size_t i = 0; i < st.relators.size(); ++i)
                if (st.relator_stage[i] == N + 1)
                    rec.new_relators.push_back(static_cast<int>(i));
            rec.cert = kr.cert;
            // condition (ii): exact b1 of the odd level, rational mode uses
            // free rank, F_q mode dominates it
            {
                FiniteQuotientMap ind = induced_quotient(pn1, H_level);
                SubgroupPresentation sp = reidemeister_schreier(ind);
                AbelianInvariants ai = abelian_invariants(
                    sp.presentation, mode.rational
                                         ? std::vector<unsigned>{p}
                                         : std::vector<unsigned>{p, mode.q});
                long b1 = mode.rational ? ai.free_rank : ai.betti(mode.q);
                rec.odd_ratio = mpq_class(b1, ind.order);
                rec.odd_ratio.canonicalize();
                rec.conditions[1] = rec.odd_ratio < delta_schedule[N];
            }
            rec.def_p_after = p_deficiency(pn1, p);
            rec.conditions[4] = rec.def_p_after > target;
            rec.conditions[5] =
                rec.cert.status == RegularityCertificate::Status::Certified;
            // condition (iii): new relators lie in [F_2N, F_2N]
            rec.conditions[2] = true;
            for (int ri : rec.new_relators) {
                Word rw = rewrite_in_subgroup(sd_K, K_level, st.relators[ri], 0);
                for (long long s : exponent_sums(rw, sd_K.sgen_count))
                    if (s != 0)
                        rec.conditions[2] = false;
            }
            // F_{2N+2}: preimage of the Lemma 5.5 subgroup, cut down by
            // F_{2N+1} and Phi_{N+1}
            PregularSubgroup ps = pregular_subgroup(pn1, p, rec.cert);
            if (!ps.ok || !ps.bound_holds) {
                st.failure = "pregular subgroup bound failed at stage " +
                             std::to_string(N + 1);
                st.stages.push_back(std::move(rec));
                return st;
            }
            FiniteQuotientMap pull;
            pull.source = pfree;
            pull.order = ps.h.order;
            pull.images = ps.h.images;
            pull.validate();
            phi_cursor = derived_p_step(pfree, phi_cursor, p, budgets.index_budget);
            st.phi.push_back(phi_cursor);
            FiniteQuotientMap f_next = intersect(
                intersect(pull, H_level, budgets.index_budget), phi_cursor,
                budgets.index_budget);
            st.f_tower.push_back(f_next);  // F_{2N+2}
            rec.conditions[3] = factors_through(f_next, phi_cursor);
            // condition (i) via the deficiency route: b1 >= def of the
            // Lemma 5.2 presentation of G(N+1)_{2N+2}
            {
                FiniteQuotientMap ind = induced_quotient(pn1, f_next);
                PuchtaCertificate pc = puchta_certificate(ind, p);
                SchreierData sdi = schreier_data(ind);
                mpz_class total = 0;
                for (const auto& en : pc.entries)
                    total += en.count;
                mpz_class deficiency = mpz_class(sdi.sgen_count) - total;
                rec.even_ratio_lower = mpq_class(deficiency - 1) / ind.order;
                rec.even_ratio_lower.canonicalize();
                rec.conditions[0] = rec.even_ratio_lower > target;
            }
            log_line(log, "stage_done",
                     {{"stage", std::to_string(N + 1)},
                      {"even_ratio_lower", q_str(rec.even_ratio_lower)},
                      {"odd_ratio", q_str(rec.odd_ratio)},
                      {"def_p", q_str(rec.def_p_after)}});
            bool all = true;
            for (bool c : rec.conditions)
                all = all && c;
            st.stages.push_back(std::move(rec));
            if (!all) {
                st.failure = "a section 5.2 condition failed at stage " +
                             std::to_string(N + 1);
                return st;
            }
        } catch (const resource_limit& rl) {
            st.failure = std::string("budget exhausted at stage ") +
                         std::to_string(N + 1) + ": " + rl.what();
            return st;
        }
    }
    st.completed = true;
    return st;
}

std::vector<ConditionReport> verify_construction(const ConstructionState& st,
                                                 const DriverBudgets& budgets) {
    std::vector<ConditionReport> reports;
    Presentation pfree(st.alphabet, {});
    const int d = st.alphabet.size();
    mpq_class target = mpq_class(d - 1) - st.epsilon;
    target.canonicalize();
    auto add = [&](int cond, int stage, bool ok, std::string detail) {
        reports.push_back({cond, stage, ok, std::move(detail)});
    };
    int top = static_cast<int>(st.stages.size()) - 1;
    for (int n = 0; n <= top; ++n) {
        Presentation pn = st.presentation_at(n);
        // (i): even-level normalized b1 above d-1-epsilon
        if (2 * n < static_cast<int>(st.f_tower.size())) {
            const FiniteQuotientMap& lvl = st.f_tower[2 * n];
            FiniteQuotientMap ind = induced_quotient(pn, lvl);
            mpq_class ratio;
            if (ind.order == 1) {
                ratio = d;  // b1 of the free group
            } else {
                PuchtaCertificate pc = puchta_certificate(ind, st.p);
                SchreierData sd = schreier_data(ind);
                mpz_class total = 0;
                for (const auto& e : pc.entries)
                    total += e.count;
                ratio = mpq_class(mpz_class(sd.sgen_count) - total - 1) / ind.order;
                ratio.canonicalize();
            }
            add(1, n, ratio > target,
                "b1 lower bound ratio " + q_str(ratio) + " vs " + q_str(target));
        }
        if (n == 0)
            continue;
        // (ii): odd-level normalized b1 below delta_n
        {
            const FiniteQuotientMap& lvl = st.f_tower[2 * n - 1];
            FiniteQuotientMap ind = induced_quotient(pn, lvl);
            SubgroupPresentation sp = reidemeister_schreier(ind);
            if (sp.presentation.generator_count() > budgets.matrix_budget)
                throw resource_limit("verifier matrix budget exceeded",
                                     sp.presentation.generator_count());
            AbelianInvariants ai = abelian_invariants(
                sp.presentation, st.mode.rational
                                     ? std::vector<unsigned>{st.p}
                                     : std::vector<unsigned>{st.p, st.mode.q});
            long b1 = st.mode.rational ? ai.free_rank : ai.betti(st.mode.q);
            mpq_class ratio(b1, ind.order);
            ratio.canonicalize();
            add(2, n, ratio < st.delta_schedule[n - 1],
                "odd ratio " + q_str(ratio) + " vs delta " +
                    q_str(st.delta_schedule[n - 1]));
        }
        // (iii): R_n inside [F_{2n-2}, F_{2n-2}]
        {
            const FiniteQuotientMap& lvl = st.f_tower[2 * n - 2];
            SchreierData sd = schreier_data(lvl);
            bool ok = true;
            for (size_t i = 0; i < st.relators.size(); ++i) {
                if (st.relator_stage[i] != n)
                    continue;
                if (!membership(lvl, st.relators[i])) {
                    ok = false;
                    continue;
                }
                Word rw = rewrite_in_subgroup(sd, lvl, st.relators[i], 0);
                for (long long s : exponent_sums(rw, sd.sgen_count))
                    if (s != 0)
                        ok = false;
            }
            add(3, n, ok, "stage relators in the derived subgroup of F_{2n-2}");
        }
        // (iv): F_{2n} inside Phi_n
        if (2 * n < static_cast<int>(st.f_tower.size()) &&
            n - 1 < static_cast<int>(st.phi.size())) {
            bool ok = factors_through(st.f_tower[2 * n], st.phi[n - 1]);
            add(4, n, ok, "F_{2n} contained in Phi_n");
        }
        // (v): p-deficiency stays above the target
        {
            mpq_class defp = p_deficiency(pn, st.p);
            add(5, n, defp > target, "def_p " + q_str(defp) + " vs " + q_str(target));
        }
        // (vi): stored certificate replays
        {
            bool ok = true;
            std::string detail = "certificate replays against its witness";
            try {
                if (st.stages[n].cert.status !=
                    RegularityCertificate::Status::Certified) {
                    ok = false;
                    detail = "certificate is not Certified";
                } else {
                    recheck_certificate(pn, st.p, st.stages[n].cert);
                }
            } catch (const invariant_violation& iv) {
                ok = false;
                detail = iv.what();
            }
            add(6, n, ok, detail);
        }
    }
    return reports;
}

}  // namespace b1approx
