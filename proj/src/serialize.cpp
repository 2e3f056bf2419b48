#include "b1approx/serialize.hpp"

#include <sstream>

namespace b1approx {

json rational_json(const mpq_class& q) {
    return {{"num", q.get_num().get_str()}, {"den", q.get_den().get_str()}};
}

mpq_class rational_from_json(const json& j) {
    mpq_class q;
    try {
        q = mpq_class(mpz_class(j.at("num").get<std::string>()),
                      mpz_class(j.at("den").get<std::string>()));
    } catch (const std::invalid_argument&) {
        throw malformed_input("bad rational in JSON input");
    }
    if (q.get_den() == 0)
        throw malformed_input("zero denominator in JSON input");
    q.canonicalize();
    return q;
}

json presentation_json(const Presentation& p) {
    json j;
    j["generators"] = p.alphabet.names;
    json rels = json::array();
    for (const auto& r : p.relators)
        rels.push_back(format_word(r, p.alphabet));
    j["relators"] = std::move(rels);
    return j;
}

Presentation presentation_from_json(const json& j) {
    Alphabet a(j.at("generators").get<std::vector<std::string>>());
    std::vector<Word> rels;
    for (const auto& s : j.at("relators"))
        rels.push_back(parse_word(s.get<std::string>(), a));
    return Presentation(std::move(a), std::move(rels));
}

json quotient_json(const FiniteQuotientMap& q) {
    return {{"order", q.order}, {"images", q.images}};
}

FiniteQuotientMap quotient_from_json(const json& j, const Presentation& source) {
    FiniteQuotientMap q;
    q.source = source;
    q.order = j.at("order").get<int>();
    q.images = j.at("images").get<std::vector<Permutation>>();
    q.validate(true);  // external data: insist on a normal kernel
    return q;
}

json invariants_json(const AbelianInvariants& a) {
    json j;
    j["free_rank"] = a.free_rank;
    json factors = json::array();
    for (const auto& f : a.invariant_factors)
        factors.push_back(f.get_str());
    j["invariant_factors"] = std::move(factors);
    j["d_H1"] = a.d_H1;
    json betti = json::object();
    for (const auto& [p, b] : a.betti_mod)
        betti[std::to_string(p)] = b;
    j["betti_mod"] = std::move(betti);
    return j;
}

static json row_json(const ChainLevelRow& r) {
    json j;
    j["level"] = r.level;
    j["index"] = r.index;
    j["b1_rational"] = rational_json(r.b1_rational);
    json mod = json::object(), ratio = json::object(), gap = json::object();
    for (const auto& [p, b] : r.b1_mod)
        mod[std::to_string(p)] = b;
    for (const auto& [p, q] : r.ratio_mod)
        ratio[std::to_string(p)] = rational_json(q);
    for (const auto& [p, q] : r.ref_gap)
        gap[std::to_string(p)] = rational_json(q);
    j["b1_mod"] = std::move(mod);
    j["d_H1"] = r.d_H1;
    j["rank_upper"] = r.rank_upper;
    j["rank_lower"] = r.rank_lower;
    j["ratio_rational"] = rational_json(r.ratio_rational);
    j["ratio_mod"] = std::move(ratio);
    j["rg_upper"] = rational_json(r.rg_upper);
    if (!r.ref_gap.empty())
        j["ref_gap"] = std::move(gap);
    return j;
}

json chain_report_json(const ChainReport& rep) {
    json j;
    json rows = json::array();
    for (const auto& r : rep.rows)
        rows.push_back(row_json(r));
    j["rows"] = std::move(rows);
    j["truncated"] = rep.truncated;
    if (rep.truncated)
        j["next_index_required"] = rep.next_index_required;
    if (rep.b1_l2)
        j["b1_l2"] = rational_json(*rep.b1_l2);
    return j;
}

static std::string decimal12(const mpq_class& q) {
    mpf_class f(q, 96);
    std::ostringstream os;
    os.precision(12);
    os << std::fixed << f;
    return os.str();
}

std::string chain_report_csv(const ChainReport& rep) {
    std::ostringstream os;
    os << "# decimal rendering, display-only\n";
    os << "level,index,b1_rational,";
    std::vector<unsigned> primes;
    if (!rep.rows.empty())
        for (const auto& [p, b] : rep.rows.front().b1_mod)
            primes.push_back(p);
    for (unsigned p : primes)
        os << "b1_mod_" << p << ",";
    os << "d_H1,rank_upper,rank_lower,ratio_rational,";
    for (unsigned p : primes)
        os << "ratio_mod_" << p << ",";
    os << "rg_upper\n";
    for (const auto& r : rep.rows) {
        os << r.level << "," << r.index << "," << decimal12(r.b1_rational) << ",";
        for (unsigned p : primes)
            os << r.b1_mod.at(p) << ",";
        os << r.d_H1 << "," << r.rank_upper << "," << r.rank_lower << ","
           << decimal12(r.ratio_rational) << ",";
        for (unsigned p : primes)
            os << decimal12(r.ratio_mod.at(p)) << ",";
        os << decimal12(r.rg_upper) << "\n";
    }
    return os.str();
}

json certificate_json(const RegularityCertificate& c, const Presentation& pres) {
    json j;
    j["status"] =
        c.status == RegularityCertificate::Status::Certified ? "Certified" : "Unknown";
    if (c.witness)
        j["witness"] = quotient_json(*c.witness);
    json surv = json::array();
    for (const auto& s : c.survivors)
        surv.push_back({{"relator", s.relator},
                        {"root", format_word(s.root, pres.alphabet)},
                        {"image", s.image}});
    j["survivors"] = std::move(surv);
    return j;
}

RegularityCertificate certificate_from_json(const json& j, const Presentation& pres) {
    RegularityCertificate c;
    c.status = j.at("status").get<std::string>() == "Certified"
                   ? RegularityCertificate::Status::Certified
                   : RegularityCertificate::Status::Unknown;
    if (j.contains("witness"))
        c.witness = quotient_from_json(j.at("witness"), pres);
    for (const auto& s : j.at("survivors"))
        c.survivors.push_back({s.at("relator").get<int>(),
                               parse_word(s.at("root").get<std::string>(), pres.alphabet),
                               s.at("image").get<int>()});
    return c;
}

json puchta_json(const PuchtaCertificate& c, const Alphabet& alphabet) {
    json j;
    j["p"] = c.p;
    json entries = json::array();
    for (const auto& e : c.entries) {
        json t = json::array();
        for (const auto& w : e.conjugator_transversal)
            t.push_back(format_word(w, alphabet));
        entries.push_back({{"relator", e.relator},
                           {"e_outer", e.e_outer},
                           {"e_inner", e.e_inner},
                           {"count", e.count},
                           {"transversal", std::move(t)}});
    }
    j["entries"] = std::move(entries);
    return j;
}

json suite_json(const OracleSuiteSummary& s) {
    return {{"checked", s.checked},
            {"violations", s.violations},
            {"groups", s.groups},
            {"demo_fails_as_expected", s.demo_fails_as_expected}};
}

json state_json(const ConstructionState& st) {
    json j;
    j["alphabet"] = st.alphabet.names;
    j["p"] = st.p;
    j["epsilon"] = rational_json(st.epsilon);
    json deltas = json::array();
    for (const auto& d : st.delta_schedule)
        deltas.push_back(rational_json(d));
    j["delta_schedule"] = std::move(deltas);
    j["mode"] = st.mode.rational ? json{{"rational", true}}
                                 : json{{"rational", false}, {"q", st.mode.q}};
    j["seed"] = st.seed;
    json rels = json::array();
    for (size_t i = 0; i < st.relators.size(); ++i)
        rels.push_back({{"word", format_word(st.relators[i], st.alphabet)},
                        {"stage", st.relator_stage[i]}});
    j["relators"] = std::move(rels);
    json tower = json::array();
    for (const auto& q : st.f_tower)
        tower.push_back(quotient_json(q));
    j["f_tower"] = std::move(tower);
    json phis = json::array();
    for (const auto& q : st.phi)
        phis.push_back(quotient_json(q));
    j["phi"] = std::move(phis);
    json stages = json::array();
    for (const auto& s : st.stages) {
        Presentation pn = st.presentation_at(s.n);
        json rec;
        rec["n"] = s.n;
        rec["e_used"] = s.e_used;
        rec["new_relators"] = s.new_relators;
        rec["certificate"] = certificate_json(s.cert, pn);
        rec["even_ratio_lower"] = rational_json(s.even_ratio_lower);
        rec["odd_ratio"] = rational_json(s.odd_ratio);
        rec["def_p_after"] = rational_json(s.def_p_after);
        rec["conditions"] = std::vector<bool>(s.conditions, s.conditions + 6);
        stages.push_back(std::move(rec));
    }
    j["stages"] = std::move(stages);
    j["completed"] = st.completed;
    j["failure"] = st.failure;
    return j;
}

ConstructionState state_from_json(const json& j) {
    ConstructionState st;
    st.alphabet = Alphabet(j.at("alphabet").get<std::vector<std::string>>());
    st.p = j.at("p").get<unsigned>();
    st.epsilon = rational_from_json(j.at("epsilon"));
    for (const auto& d : j.at("delta_schedule"))
        st.delta_schedule.push_back(rational_from_json(d));
    st.mode.rational = j.at("mode").at("rational").get<bool>();
    if (!st.mode.rational)
        st.mode.q = j.at("mode").at("q").get<unsigned>();
    st.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& r : j.at("relators")) {
        st.relators.push_back(parse_word(r.at("word").get<std::string>(), st.alphabet));
        st.relator_stage.push_back(r.at("stage").get<int>());
    }
    Presentation pfree(st.alphabet, {});
    for (const auto& q : j.at("f_tower"))
        st.f_tower.push_back(quotient_from_json(q, pfree));
    for (const auto& q : j.at("phi"))
        st.phi.push_back(quotient_from_json(q, pfree));
    for (const auto& rec : j.at("stages")) {
        StageRecord s;
        s.n = rec.at("n").get<int>();
        s.e_used = rec.at("e_used").get<unsigned>();
        s.new_relators = rec.at("new_relators").get<std::vector<int>>();
        Presentation pn = st.presentation_at(s.n);
        s.cert = certificate_from_json(rec.at("certificate"), pn);
        s.even_ratio_lower = rational_from_json(rec.at("even_ratio_lower"));
        s.odd_ratio = rational_from_json(rec.at("odd_ratio"));
        s.def_p_after = rational_from_json(rec.at("def_p_after"));
        auto conds = rec.at("conditions").get<std::vector<bool>>();
        for (size_t i = 0; i < 6 && i < conds.size(); ++i)
            s.conditions[i] = conds[i];
        st.stages.push_back(std::move(s));
    }
    st.completed = j.at("completed").get<bool>();
    st.failure = j.at("failure").get<std::string>();
    return st;
}

json condition_reports_json(const std::vector<ConditionReport>& reps) {
    json arr = json::array();
    for (const auto& r : reps)
        arr.push_back({{"condition", r.condition},
                       {"stage", r.stage},
                       {"ok", r.ok},
                       {"detail", r.detail}});
    return arr;
}

}  // namespace b1approx
