#include <doctest.h>

#include "b1approx/serialize.hpp"

using namespace b1approx;

TEST_CASE("rational serialization keeps exactness") {
    mpq_class big("123456789012345678901234567890/987654321098765432109876543211");
    big.canonicalize();
    CHECK(rational_from_json(rational_json(big)) == big);
    CHECK(rational_json(mpq_class(-3, 4))["num"] == "-3");
}

TEST_CASE("presentation and quotient round-trips") {
    Presentation p = parse_presentation("< x, y | x^4, [x,y]^2 >");
    Presentation p2 = presentation_from_json(presentation_json(p));
    CHECK(p2.alphabet == p.alphabet);
    CHECK(p2.relators == p.relators);

    auto q = quotient_elementary_abelian(p, 2, 2, {{1, 0}, {0, 1}});
    auto q2 = quotient_from_json(quotient_json(q), p);
    CHECK(q2.order == q.order);
    CHECK(q2.images == q.images);
}

TEST_CASE("chain report json and csv") {
    Presentation f2 = parse_presentation("< x, y | >");
    ChainReport rep = report(derived_p_series(f2, 2, 2, 5000), {2});
    json j = chain_report_json(rep);
    CHECK(j["rows"].size() == 3);
    CHECK(j["rows"][2]["index"] == 128);
    CHECK(rational_from_json(j["rows"][2]["ratio_mod"]["2"]) == mpq_class(129, 128));

    std::string csv = chain_report_csv(rep);
    CHECK(csv.find("display-only") != std::string::npos);
    CHECK(csv.find("128") != std::string::npos);
}

TEST_CASE("certificate round-trip replays") {
    Presentation x4 = parse_presentation("< x, y | x^4 >");
    auto cert = is_p_regular(x4, 2);
    REQUIRE(cert.status == RegularityCertificate::Status::Certified);
    auto cert2 = certificate_from_json(certificate_json(cert, x4), x4);
    recheck_certificate(x4, 2, cert2);
    CHECK(certificate_json(cert2, x4) == certificate_json(cert, x4));
}

TEST_CASE("construction state round-trip is byte identical") {
    DriverBudgets budgets;
    auto st = theorem51_driver(2, 2, mpq_class(9, 10), {mpq_class(3, 4)}, 1, budgets, 7);
    REQUIRE(st.completed);
    json j = state_json(st);
    auto st2 = state_from_json(j);
    CHECK(state_json(st2).dump(2) == j.dump(2));

    auto reports = verify_construction(st2, budgets);
    for (const auto& r : reports)
        CHECK(r.ok);
    json jr = condition_reports_json(reports);
    CHECK(jr.size() == reports.size());
}

TEST_CASE("suite summary json") {
    auto s = run_groupring_suite(1, 5);
    json j = suite_json(s);
    CHECK(j["checked"] == 40);
    CHECK(j["violations"] == 0);
    CHECK(j["demo_fails_as_expected"] == true);
}
