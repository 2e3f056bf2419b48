#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "b1approx/errors.hpp"

namespace b1approx {

// Generating set of a free group F(X).  Generator indices are 1-based;
// a letter +g is the generator, -g its inverse.
struct Alphabet {
    std::vector<std::string> names;

    Alphabet() = default;
    explicit Alphabet(std::vector<std::string> n);
    static Alphabet standard(int size);  // x1,...,xd (or x,y,z,t for d<=4)

    int size() const { return static_cast<int>(names.size()); }
    // -1 if unknown
    int index_of(const std::string& name) const;
    bool operator==(const Alphabet&) const = default;
};

using Letter = std::int32_t;

// Freely reduced word over a fixed alphabet.  The alphabet itself is not
// stored; operations take the alphabet size where validation is needed.
struct Word {
    std::vector<Letter> letters;

    Word() = default;
    explicit Word(std::vector<Letter> ls) : letters(std::move(ls)) {}

    bool empty() const { return letters.empty(); }
    int length() const { return static_cast<int>(letters.size()); }
    bool operator==(const Word&) const = default;
    auto operator<=>(const Word&) const = default;
};

Word reduce(std::span<const Letter> raw, int alphabet_size);
Word multiply(const Word& a, const Word& b);
Word invert(const Word& a);
// t^-1 * a * t
Word conjugate(const Word& a, const Word& t);
// [a,b] = a b a^-1 b^-1
Word commutator(const Word& a, const Word& b);
Word power(const Word& a, long long k);

// core cyclically reduced, w = conjugator * core * conjugator^-1
struct CyclicForm {
    Word core;
    Word conjugator;
};
CyclicForm cyclic_reduce(const Word& w);

// input = conjugator * base^(p^exponent) * conjugator^-1, base cyclically
// reduced and not a proper p-th power.
struct RootDecomposition {
    Word base;
    unsigned exponent = 0;
    Word conjugator;
};

// e_p(w, F): throws domain_error on the identity word.
RootDecomposition p_root_decomposition(const Word& w, unsigned p);

// Text syntax: juxtaposition ('*' optional), '^k' powers, '^-1' inverse,
// '[a,b]' commutator sugar, parentheses.
Word parse_word(const std::string& text, const Alphabet& alphabet);
std::string format_word(const Word& w, const Alphabet& alphabet);

// exponent sum of each generator
std::vector<long long> exponent_sums(const Word& w, int alphabet_size);

}  // namespace b1approx
