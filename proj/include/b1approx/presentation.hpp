#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "b1approx/matrix.hpp"
#include "b1approx/word.hpp"

namespace b1approx {

// Finite presentation (X, R).  Relators are a multiset: duplicates are
// allowed and their count matters (subgroup presentations produce repeated
// conjugates).
struct Presentation {
    Alphabet alphabet;
    std::vector<Word> relators;  // stored reduced, none the identity

    Presentation() = default;
    Presentation(Alphabet a, std::vector<Word> rs);

    int generator_count() const { return alphabet.size(); }
    int relator_count() const { return static_cast<int>(relators.size()); }
};

// Grammar: '<' names (',' names)* '|' [word (',' word)*] '>'
Presentation parse_presentation(const std::string& text);
std::string format_presentation(const Presentation& p);

// def_p(X,R) = |X| - 1 - sum_r p^{-e_p(r, F(X))}, exact.
mpq_class p_deficiency(const Presentation& p, unsigned prime);

// |R| x |X| exponent-sum matrix.
IntMatrix abelianized_relator_matrix(const Presentation& p);

struct PieceWitness {
    int relator_a = -1;  // index into relators
    bool inverted_a = false;
    int shift_a = 0;
    int relator_b = -1;
    bool inverted_b = false;
    int shift_b = 0;
    int piece_length = 0;
    std::string description;
};

struct SmallCancellationReport {
    bool satisfied = false;
    mpq_class worst_piece_ratio;  // exact; 0 when no piece exists
    PieceWitness witness;
};

// C'(lambda) metric condition over the symmetrized closure (all cyclic
// shifts of relators and their inverses).  A piece is a word with two
// distinct occurrences (occurrence = relator, orientation, cyclic start);
// its length against a relator of length L is capped at L-1.
SmallCancellationReport small_cancellation_check(const Presentation& p,
                                                 long lambda_num = 1,
                                                 long lambda_den = 6);

}  // namespace b1approx
