#include "b1approx/word.hpp"

#include <cctype>
#include <cstdlib>
#include <set>

namespace b1approx {

static bool valid_name(const std::string& s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0]))))
        return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
            return false;
    return true;
}

Alphabet::Alphabet(std::vector<std::string> n) : names(std::move(n)) {
    if (names.empty())
        throw malformed_input("alphabet must have at least one generator");
    std::set<std::string> seen;
    for (const auto& s : names) {
        if (!valid_name(s))
            throw malformed_input("invalid generator name: '" + s + "'");
        if (!seen.insert(s).second)
            throw malformed_input("duplicate generator name: '" + s + "'");
    }
}

Alphabet Alphabet::standard(int size) {
    static const char* small[] = {"x", "y", "z", "t"};
    std::vector<std::string> names;
    for (int i = 0; i < size; ++i)
        names.push_back(size <= 4 ? small[i] : "x" + std::to_string(i + 1));
    return Alphabet(std::move(names));
}

int Alphabet::index_of(const std::string& name) const {
    for (int i = 0; i < size(); ++i)
        if (names[i] == name)
            return i + 1;
    return -1;
}

Word reduce(std::span<const Letter> raw, int alphabet_size) {
    std::vector<Letter> out;
    out.reserve(raw.size());
    for (Letter l : raw) {
        if (l == 0 || std::abs(l) > alphabet_size)
            throw malformed_input("letter references generator index " +
                                  std::to_string(l) + " outside alphabet of size " +
                                  std::to_string(alphabet_size));
        if (!out.empty() && out.back() == -l)
            out.pop_back();
        else
            out.push_back(l);
    }
    return Word(std::move(out));
}

static void append_reducing(std::vector<Letter>& out, std::span<const Letter> tail) {
    for (Letter l : tail) {
        if (!out.empty() && out.back() == -l)
            out.pop_back();
        else
            out.push_back(l);
    }
}

Word multiply(const Word& a, const Word& b) {
    std::vector<Letter> out = a.letters;
    append_reducing(out, b.letters);
    return Word(std::move(out));
}

Word invert(const Word& a) {
    std::vector<Letter> out;
    out.reserve(a.letters.size());
    for (auto it = a.letters.rbegin(); it != a.letters.rend(); ++it)
        out.push_back(-*it);
    return Word(std::move(out));
}

Word conjugate(const Word& a, const Word& t) {
    return multiply(multiply(invert(t), a), t);
}

Word commutator(const Word& a, const Word& b) {
    return multiply(multiply(a, b), multiply(invert(a), invert(b)));
}

Word power(const Word& a, long long k) {
    Word base = k < 0 ? invert(a) : a;
    long long n = k < 0 ? -k : k;
    Word out;
    for (long long i = 0; i < n; ++i)
        out = multiply(out, base);
    return out;
}

CyclicForm cyclic_reduce(const Word& w) {
    int i = 0, j = w.length();
    const auto& ls = w.letters;
    while (j - i >= 2 && ls[i] == -ls[j - 1]) {
        ++i;
        --j;
    }
    CyclicForm cf;
    cf.core.letters.assign(ls.begin() + i, ls.begin() + j);
    cf.conjugator.letters.assign(ls.begin(), ls.begin() + i);
    return cf;
}

// A cyclically reduced word is a p-th power iff its letter sequence is a
// literal repetition of period len/p (roots in free groups are unique and
// cyclically reduced whenever the power is).
static bool has_period(const std::vector<Letter>& ls, int period) {
    for (size_t i = period; i < ls.size(); ++i)
        if (ls[i] != ls[i - period])
            return false;
    return true;
}

RootDecomposition p_root_decomposition(const Word& w, unsigned p) {
    if (w.empty())
        throw domain_error("e_p is undefined for the identity word");
    if (p < 2)
        throw domain_error("p must be a prime >= 2");
    CyclicForm cf = cyclic_reduce(w);
    RootDecomposition rd;
    rd.conjugator = cf.conjugator;
    rd.base = cf.core;
    rd.exponent = 0;
    while (rd.base.length() % static_cast<int>(p) == 0 &&
           has_period(rd.base.letters, rd.base.length() / static_cast<int>(p))) {
        rd.base.letters.resize(rd.base.length() / static_cast<int>(p));
        ++rd.exponent;
    }
    return rd;
}

std::vector<long long> exponent_sums(const Word& w, int alphabet_size) {
    std::vector<long long> sums(alphabet_size, 0);
    for (Letter l : w.letters)
        sums[std::abs(l) - 1] += (l > 0 ? 1 : -1);
    return sums;
}

// ---- text syntax ----

namespace {

struct WordParser {
    const std::string& text;
    const Alphabet& alphabet;
    size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
            ++pos;
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw malformed_input("word syntax error at position " + std::to_string(pos) +
                              ": " + msg);
    }
    bool peek(char c) {
        skip_ws();
        return pos < text.size() && text[pos] == c;
    }
    bool eat(char c) {
        if (peek(c)) {
            ++pos;
            return true;
        }
        return false;
    }

    long long parse_int() {
        skip_ws();
        size_t start = pos;
        if (pos < text.size() && (text[pos] == '-' || text[pos] == '+'))
            ++pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
            ++pos;
        if (pos == start || (pos == start + 1 && !std::isdigit(static_cast<unsigned char>(text[start]))))
            fail("expected integer exponent");
        return std::stoll(text.substr(start, pos - start));
    }

    Word parse_atom() {
        skip_ws();
        if (pos >= text.size())
            fail("expected generator, '(' or '['");
        if (eat('(')) {
            Word w = parse_word_body();
            if (!eat(')'))
                fail("expected ')'");
            return w;
        }
        if (eat('[')) {
            Word a = parse_word_body();
            if (!eat(','))
                fail("expected ',' in commutator");
            Word b = parse_word_body();
            if (!eat(']'))
                fail("expected ']'");
            return commutator(a, b);
        }
        if (!std::isalpha(static_cast<unsigned char>(text[pos])))
            fail(std::string("unexpected character '") + text[pos] + "'");
        size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            ++pos;
        std::string name = text.substr(start, pos - start);
        int g = alphabet.index_of(name);
        if (g < 0)
            fail("unknown generator '" + name + "'");
        return Word({g});
    }

    Word parse_factor() {
        Word atom = parse_atom();
        if (eat('^'))
            return power(atom, parse_int());
        return atom;
    }

    bool at_factor_start() {
        skip_ws();
        if (pos >= text.size())
            return false;
        char c = text[pos];
        return std::isalpha(static_cast<unsigned char>(c)) || c == '(' || c == '[';
    }

    Word parse_word_body() {
        Word w;
        bool first = true;
        for (;;) {
            if (!first && eat('*')) {
                // explicit separator; a factor must follow
                w = multiply(w, parse_factor());
                continue;
            }
            if (!at_factor_start()) {
                if (first)
                    return w;  // empty word
                return w;
            }
            w = multiply(w, parse_factor());
            first = false;
        }
    }
};

}  // namespace

Word parse_word(const std::string& text, const Alphabet& alphabet) {
    {
        size_t a = text.find_first_not_of(" \t\r\n");
        if (a != std::string::npos && text.find_last_not_of(" \t\r\n") == a && text[a] == '1')
            return Word{};  // identity
    }
    WordParser p{text, alphabet};
    Word w = p.parse_word_body();
    p.skip_ws();
    if (p.pos != text.size())
        p.fail("trailing input");
    return w;
}

std::string format_word(const Word& w, const Alphabet& alphabet) {
    if (w.empty())
        return "1";
    std::string out;
    int i = 0;
    const int n = w.length();
    while (i < n) {
        Letter l = w.letters[i];
        int run = 1;
        while (i + run < n && w.letters[i + run] == l)
            ++run;
        if (!out.empty())
            out += "*";
        out += alphabet.names[std::abs(l) - 1];
        long long e = (l > 0 ? run : -run);
        if (e != 1)
            out += "^" + std::to_string(e);
        i += run;
    }
    return out;
}

}  // namespace b1approx
