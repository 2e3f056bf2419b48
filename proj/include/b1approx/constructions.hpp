#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>

#include "b1approx/chain.hpp"

namespace b1approx {

// --- section 4: the free product counterexample -------------------------

// <x,y,z,t | x^p, y^q, z^q> with the cyclic chain pulled back from t -> 1.
std::pair<Presentation, Chain> free_product_counterexample(
    unsigned p, unsigned q, const std::vector<long>& moduli);

struct SmallCancellationTriple {
    bool found = false;
    Word u, v, w;              // commutator words in F(x,y,z)
    Presentation presentation;  // <x,y,z | x^p u^-1, y^q v^-1, z^q w^-1>
    SmallCancellationReport report;
    mpq_class best_ratio;  // best (smallest) worst-piece ratio seen
};

// Seeded search for u,v,w in [F,F] making the amalgamated presentation
// C'(1/6).  Deterministic under a fixed seed.
SmallCancellationTriple find_small_cancellation_words(unsigned p, unsigned q,
                                                      std::uint64_t seed,
                                                      int min_length = 24,
                                                      int attempts = 5000);

// --- p-regularity -------------------------------------------------------

struct RootSurvivor {
    int relator = 0;  // index into the presentation's relators
    Word root;        // the p-th root in F(X)
    int image = 0;    // its non-zero coset label in the witness
};

struct RegularityCertificate {
    enum class Status { Certified, Unknown };
    Status status = Status::Unknown;
    std::optional<FiniteQuotientMap> witness;  // present iff Certified
    std::vector<RootSurvivor> survivors;
};

// Searches derived-series quotients mod p^e (depth up to depth_budget) for a
// witness in which every defined p-th root survives.  Semi-decision:
// Unknown never asserts non-regularity.
RegularityCertificate is_p_regular(const Presentation& pres, unsigned p,
                                   int depth_budget = 2,
                                   long long index_budget = 300000);

// Replays a certificate against its own witness; pure function of the
// certificate.  Throws invariant_violation if anything fails.
void recheck_certificate(const Presentation& pres, unsigned p,
                         const RegularityCertificate& cert);

// --- Lemma 5.2 regression wiring ---------------------------------------

// Certificate counts match the closed formula for every relator, and the
// refined-count presentation has the same abelian invariants as the plain
// Reidemeister-Schreier one.
bool puchta_count_check(const Presentation& pres, const FiniteQuotientMap& q,
                        unsigned p);

// --- Lemma 5.5 ----------------------------------------------------------

struct PregularSubgroup {
    bool ok = false;
    FiniteQuotientMap h;  // quotient of the presented group with kernel H
    PuchtaCertificate cert;
    mpq_class def_h;        // deficiency of the Lemma 5.2 presentation
    mpq_class measurement;  // (def(H) - 1) / [G:H]
    mpq_class def_p_value;
    bool bound_holds = false;  // measurement >= def_p
};

PregularSubgroup pregular_subgroup(const Presentation& pres, unsigned p,
                                   const RegularityCertificate& cert,
                                   int depth_budget = 2,
                                   long long index_budget = 300000);

// --- Lemma 5.6 ----------------------------------------------------------

struct AdjoinResult {
    bool ok = false;
    Presentation extended;
    int n_used = 0;
    RegularityCertificate cert;  // for the extended presentation
};

// Adjoins f^(p^n) for the smallest workable n >= start_n and re-certifies
// p-regularity of the result directly (the pro-p infinite-order hypothesis
// is not decidable here; the conclusion is what callers consume).
AdjoinResult adjoin_power(const Presentation& pres, const Word& f, unsigned p,
                          int start_n, const RegularityCertificate& cert,
                          int depth_budget = 2, long long index_budget = 300000,
                          int n_slack = 4);

// --- Corollary 5.7 ------------------------------------------------------

struct FieldMode {
    bool rational = false;  // true: track b1 over Q, f chosen of infinite order
    unsigned q = 3;         // field prime otherwise (must differ from p)
};

struct KillStep {
    Word f;
    int n = 0;       // adjoined relator is f^(p^n)
    int e_p = 0;     // e_p of the adjoined relator in F(X)
    long b1_after = 0;
};

struct KillResult {
    bool reached = false;  // b1(H') <= d(K) achieved
    Presentation extended;
    RegularityCertificate cert;
    std::vector<KillStep> steps;
    mpq_class delta_spent;  // sum of p^(-e_p) over adjoined relators
    long d_K = 0;
    long b1_initial = 0;
    long b1_final = 0;
};

// K_level and H_level are quotients of the free group F(X) (kernels K >= H).
// Adjoins p-power relators of elements of [K,K] until the tracked first
// Betti number of the image of H drops to d(K), spending less than delta of
// p-deficiency.
KillResult kill_excess_homology(const Presentation& pres, unsigned p,
                                const RegularityCertificate& cert,
                                const FiniteQuotientMap& K_level,
                                const FiniteQuotientMap& H_level,
                                const mpq_class& delta, FieldMode mode,
                                int depth_budget = 2,
                                long long index_budget = 300000);

// --- Theorem 5.1 driver -------------------------------------------------

struct StageRecord {
    int n = 0;
    unsigned e_used = 0;               // exponent in F_{2n-1} = [F,F]F^(p^e)
    std::vector<int> new_relators;     // indices into ConstructionState::relators
    RegularityCertificate cert;        // for the stage-n presentation
    mpq_class even_ratio_lower;        // (i) lower bound via deficiency
    mpq_class odd_ratio;               // (ii) exact
    mpq_class def_p_after;             // (v)
    bool conditions[6] = {false, false, false, false, false, false};
};

struct ConstructionState {
    Alphabet alphabet;
    unsigned p = 2;
    mpq_class epsilon;
    std::vector<mpq_class> delta_schedule;
    FieldMode mode;
    std::uint64_t seed = 0;
    std::vector<Word> relators;      // accumulated R_1 u R_2 u ...
    std::vector<int> relator_stage;  // stage that introduced each relator
    std::vector<FiniteQuotientMap> f_tower;  // F_0 .. F_{2n}, over the free group
    std::vector<FiniteQuotientMap> phi;      // Phi_1 .. Phi_n
    std::vector<StageRecord> stages;
    bool completed = false;
    std::string failure;  // which condition or budget failed, when not completed

    Presentation presentation_at(int stage) const;  // (X, R_1 u .. u R_stage)
};

struct DriverBudgets {
    long long index_budget = 300000;
    int depth_budget = 2;
    long matrix_budget = 4000;
};

// Runs the section 5.2 induction for the requested number of stages.  The
// log stream (optional) receives one JSON object per line per action.
ConstructionState theorem51_driver(int d, unsigned p, const mpq_class& epsilon,
                                   const std::vector<mpq_class>& delta_schedule,
                                   int stages, const DriverBudgets& budgets,
                                   std::uint64_t seed, FieldMode mode = {},
                                   std::ostream* log = nullptr);

// Independent per-condition verifiers; each recomputes its condition from
// the state alone, trusting no stored measurement.
struct ConditionReport {
    int condition = 0;  // 1..6
    int stage = 0;
    bool ok = false;
    std::string detail;
};

std::vector<ConditionReport> verify_construction(const ConstructionState& state,
                                                 const DriverBudgets& budgets);

}  // namespace b1approx
