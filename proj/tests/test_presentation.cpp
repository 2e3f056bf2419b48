#include <doctest.h>

#include "b1approx/presentation.hpp"

using namespace b1approx;

TEST_CASE("presentation parsing") {
    Presentation p = parse_presentation("< x, y | x^4 >");
    CHECK(p.generator_count() == 2);
    CHECK(p.relator_count() == 1);
    CHECK(p.relators[0] == parse_word("x^4", p.alphabet));

    Presentation surf = parse_presentation("< a,b,c,d | [a,b]*[c,d] >");
    CHECK(surf.generator_count() == 4);
    CHECK(surf.relators[0].length() == 8);

    Presentation free1 = parse_presentation("< x | >");
    CHECK(free1.generator_count() == 1);
    CHECK(free1.relator_count() == 0);

    // round-trip
    for (const auto* text :
         {"< x, y | x^4 >", "< a,b,c,d | [a,b]*[c,d] >", "< x | >", "< x,y | x^2, y^3 >"}) {
        Presentation q = parse_presentation(text);
        CHECK(format_presentation(parse_presentation(format_presentation(q))) ==
              format_presentation(q));
    }
}

TEST_CASE("presentation parse errors carry position") {
    try {
        parse_presentation("< x, y  x^4 >");
        FAIL("expected malformed_input");
    } catch (const malformed_input& e) {
        CHECK(std::string(e.what()).find("line 1") != std::string::npos);
    }
    // identity relator rejected with explanation
    CHECK_THROWS_AS(parse_presentation("< x | x*x^-1 >"), malformed_input);
    CHECK_THROWS_AS(parse_presentation("< x | y >"), malformed_input);
    CHECK_THROWS_AS(parse_presentation("x^2"), malformed_input);
}

TEST_CASE("p-deficiency") {
    CHECK(p_deficiency(parse_presentation("< x, y | x^4 >"), 2) == mpq_class(3, 4));
    CHECK(p_deficiency(parse_presentation("< x | >"), 2) == 0);
    CHECK(p_deficiency(parse_presentation("< x,y | x^2, y^3 >"), 2) == mpq_class(-1, 2));
    CHECK(p_deficiency(parse_presentation("< x,y | x^2, y^3 >"), 3) ==
          mpq_class(1) - mpq_class(1) - mpq_class(1, 3));

    // adding a relator r drops def_p by exactly p^{-e_p(r)}
    Presentation base = parse_presentation("< x, y | x^4 >");
    Presentation more = parse_presentation("< x, y | x^4, y^8 >");
    CHECK(p_deficiency(base, 2) - p_deficiency(more, 2) == mpq_class(1, 8));
}

TEST_CASE("abelianized relator matrix") {
    auto m = abelianized_relator_matrix(parse_presentation("< x,y | x^2, y^3 >"));
    CHECK(m.rows == 2);
    CHECK(m.cols == 2);
    CHECK(m.at(0, 0) == 2);
    CHECK(m.at(0, 1) == 0);
    CHECK(m.at(1, 1) == 3);

    auto s = abelianized_relator_matrix(parse_presentation("< a,b,c,d | [a,b]*[c,d] >"));
    for (int j = 0; j < 4; ++j)
        CHECK(s.at(0, j) == 0);

    CHECK(abelianized_relator_matrix(parse_presentation("< x | x^4 >")).at(0, 0) == 4);
}

TEST_CASE("small cancellation") {
    auto r1 = small_cancellation_check(parse_presentation("< x | x^4 >"));
    CHECK_FALSE(r1.satisfied);
    CHECK(r1.worst_piece_ratio == mpq_class(3, 4));

    auto r2 = small_cancellation_check(parse_presentation("< x, y | (x*y)^7 >"));
    CHECK_FALSE(r2.satisfied);

    auto r3 = small_cancellation_check(parse_presentation("< a,b,c,d | [a,b]*[c,d] >"));
    CHECK(r3.satisfied);
    CHECK(r3.worst_piece_ratio == mpq_class(1, 8));
    CHECK_FALSE(r3.witness.description.empty());
}
