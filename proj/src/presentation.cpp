#include "b1approx/presentation.hpp"

#include <algorithm>
#include <sstream>

namespace b1approx {

Presentation::Presentation(Alphabet a, std::vector<Word> rs) : alphabet(std::move(a)) {
    relators.reserve(rs.size());
    for (auto& r : rs) {
        Word red = reduce(r.letters, alphabet.size());
        if (red.empty())
            throw malformed_input("identity relator rejected: relators must be "
                                  "non-trivial after free reduction");
        relators.push_back(std::move(red));
    }
}

Presentation parse_presentation(const std::string& text) {
    auto fail = [&](size_t pos, const std::string& msg) -> void {
        int line = 1, col = 1;
        for (size_t i = 0; i < pos && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw malformed_input("presentation syntax error at line " + std::to_string(line) +
                              ", column " + std::to_string(col) + ": " + msg);
    };

    size_t lt = text.find('<');
    if (lt == std::string::npos)
        fail(0, "expected '<'");
    size_t bar = text.find('|', lt);
    if (bar == std::string::npos)
        fail(text.size(), "expected '|'");
    size_t gt = text.rfind('>');
    if (gt == std::string::npos || gt < bar)
        fail(text.size(), "expected '>'");

    auto split = [](const std::string& s) {
        std::vector<std::string> parts;
        std::string cur;
        int depth = 0;
        for (char c : s) {
            if (c == '[' || c == '(')
                ++depth;
            if (c == ']' || c == ')')
                --depth;
            if (c == ',' && depth == 0) {
                parts.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
        parts.push_back(cur);
        return parts;
    };
    auto trim = [](std::string s) {
        size_t a = s.find_first_not_of(" \t\r\n");
        if (a == std::string::npos)
            return std::string();
        size_t b = s.find_last_not_of(" \t\r\n");
        return s.substr(a, b - a + 1);
    };

    std::vector<std::string> names;
    for (auto& part : split(text.substr(lt + 1, bar - lt - 1))) {
        std::string n = trim(part);
        if (n.empty())
            fail(lt + 1, "empty generator name");
        names.push_back(n);
    }
    Alphabet alphabet(names);

    std::vector<Word> relators;
    std::string rel_text = text.substr(bar + 1, gt - bar - 1);
    if (!trim(rel_text).empty()) {
        for (auto& part : split(rel_text)) {
            std::string w = trim(part);
            if (w.empty())
                fail(bar + 1, "empty relator");
            relators.push_back(parse_word(w, alphabet));
        }
    }
    return Presentation(std::move(alphabet), std::move(relators));
}

std::string format_presentation(const Presentation& p) {
    std::ostringstream os;
    os << "< ";
    for (int i = 0; i < p.generator_count(); ++i)
        os << (i ? ", " : "") << p.alphabet.names[i];
    os << " | ";
    for (int i = 0; i < p.relator_count(); ++i)
        os << (i ? ", " : "") << format_word(p.relators[i], p.alphabet);
    os << " >";
    return os.str();
}

mpq_class p_deficiency(const Presentation& p, unsigned prime) {
    mpq_class def(p.generator_count() - 1, 1);
    for (const auto& r : p.relators) {
        RootDecomposition rd = p_root_decomposition(r, prime);
        mpz_class pe;
        mpz_ui_pow_ui(pe.get_mpz_t(), prime, rd.exponent);
        def -= mpq_class(1, pe);
    }
    def.canonicalize();
    return def;
}

IntMatrix abelianized_relator_matrix(const Presentation& p) {
    IntMatrix m(p.relator_count(), p.generator_count());
    for (int i = 0; i < p.relator_count(); ++i) {
        auto sums = exponent_sums(p.relators[i], p.generator_count());
        for (int j = 0; j < p.generator_count(); ++j)
            m.at(i, j) = static_cast<long>(sums[j]);
    }
    return m;
}

namespace {

struct CyclicRelator {
    int relator;
    bool inverted;
    std::vector<Letter> letters;  // cyclically reduced core (or its inverse)
};

}  // namespace

SmallCancellationReport small_cancellation_check(const Presentation& p, long lambda_num,
                                                 long lambda_den) {
    std::vector<CyclicRelator> cyc;
    for (int i = 0; i < p.relator_count(); ++i) {
        Word core = cyclic_reduce(p.relators[i]).core;
        cyc.push_back({i, false, core.letters});
        cyc.push_back({i, true, invert(core).letters});
    }

    SmallCancellationReport rep;
    rep.worst_piece_ratio = 0;
    mpq_class lambda(lambda_num, lambda_den);
    lambda.canonicalize();

    for (size_t a = 0; a < cyc.size(); ++a) {
        const auto& wa = cyc[a].letters;
        const int la = static_cast<int>(wa.size());
        for (size_t b = a; b < cyc.size(); ++b) {
            const auto& wb = cyc[b].letters;
            const int lb = static_cast<int>(wb.size());
            const int cap = std::min(la, lb) - 1;
            if (cap <= 0)
                continue;
            for (int i = 0; i < la; ++i) {
                int jstart = (a == b) ? i + 1 : 0;
                for (int j = jstart; j < lb; ++j) {
                    int len = 0;
                    while (len < cap && wa[(i + len) % la] == wb[(j + len) % lb])
                        ++len;
                    if (len == 0)
                        continue;
                    mpq_class ratio(len, std::min(la, lb));
                    ratio.canonicalize();
                    if (ratio > rep.worst_piece_ratio) {
                        rep.worst_piece_ratio = ratio;
                        rep.witness = {cyc[a].relator, cyc[a].inverted, i,
                                       cyc[b].relator, cyc[b].inverted, j,
                                       len,           ""};
                    }
                }
            }
        }
    }
    if (rep.witness.piece_length > 0) {
        std::ostringstream os;
        os << "piece of length " << rep.witness.piece_length << " shared by relator "
           << rep.witness.relator_a << (rep.witness.inverted_a ? "^-1" : "") << " (shift "
           << rep.witness.shift_a << ") and relator " << rep.witness.relator_b
           << (rep.witness.inverted_b ? "^-1" : "") << " (shift " << rep.witness.shift_b
           << ")";
        rep.witness.description = os.str();
    }
    rep.satisfied = rep.worst_piece_ratio < lambda;
    return rep;
}

}  // namespace b1approx
