#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "b1approx/serialize.hpp"

using namespace b1approx;

namespace {

Presentation load_presentation(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw malformed_input("cannot open presentation file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    // a file may be the canonical text form or the JSON record form
    for (char c : text)
        if (c == '{')
            return presentation_from_json(json::parse(text, nullptr, true, true));
        else if (!isspace(static_cast<unsigned char>(c)))
            break;
    return parse_presentation(text);
}

mpq_class parse_rational(const std::string& s) {
    try {
        mpq_class q(s);
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument&) {
        throw malformed_input("bad rational: '" + s + "'");
    }
}

struct GlobalOpts {
    std::uint64_t seed = 0;
    std::string format = "json";
    long long index_budget = 5000;
    long matrix_budget = 4000;
};

void emit(const json& j, const std::string& format) {
    if (format == "json")
        std::cout << j.dump(2) << "\n";
    else
        std::cout << j.dump(2) << "\n";  // text falls back to pretty JSON
}

int run(int argc, char** argv) {
    CLI::App app{"exact b1 approximation along finite-index normal chains"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand
    GlobalOpts g;
    app.add_option("--seed", g.seed, "random seed (reproducibility contract)");
    app.add_option("--format", g.format, "json | csv | text")
        ->check(CLI::IsMember({"json", "csv", "text"}));
    app.add_option("--index-budget", g.index_budget, "max coset count");
    app.add_option("--matrix-budget", g.matrix_budget, "max relator matrix dimension");

    // b1
    auto* cmd_b1 = app.add_subcommand("b1", "abelian invariants of a presentation");
    std::string b1_file;
    std::vector<unsigned> b1_primes{2, 3};
    cmd_b1->add_option("file", b1_file, "presentation file")->required();
    cmd_b1->add_option("--primes", b1_primes, "primes for betti_mod")->delimiter(',');

    // chain / gradient
    auto* cmd_chain = app.add_subcommand("chain", "chain report along a normal chain");
    auto* cmd_grad = app.add_subcommand("gradient", "normalized gradient estimates");
    std::string ch_file, ch_type = "derived";
    unsigned ch_p = 2;
    int ch_depth = 2;
    std::vector<long> ch_weights, ch_moduli;
    std::vector<unsigned> ch_primes{2};
    std::string ch_ref;
    for (CLI::App* c : {cmd_chain, cmd_grad}) {
        c->add_option("file", ch_file, "presentation file")->required();
        c->add_option("--type", ch_type, "derived | cyclic")
            ->check(CLI::IsMember({"derived", "cyclic"}));
        c->add_option("-p,--prime", ch_p, "prime of the derived p-series");
        c->add_option("--depth", ch_depth, "derived series depth");
        c->add_option("--weights", ch_weights, "cyclic chain weights")->delimiter(',');
        c->add_option("--moduli", ch_moduli, "cyclic chain moduli")->delimiter(',');
        c->add_option("--primes", ch_primes, "report primes")->delimiter(',');
        c->add_option("--ref-b1l2", ch_ref, "known b1^(2) as an exact rational");
    }

    // counterexample
    auto* cmd_cx = app.add_subcommand("counterexample", "section-4 free product family");
    unsigned cx_p = 2, cx_q = 3;
    std::vector<long> cx_moduli{2, 4, 8};
    cmd_cx->add_option("-p,--prime", cx_p, "first prime");
    cmd_cx->add_option("-q", cx_q, "second prime");
    cmd_cx->add_option("--moduli", cx_moduli, "cyclic moduli")->delimiter(',');

    // oracle-groupring
    auto* cmd_or = app.add_subcommand("oracle-groupring", "Lemma 2.2 randomized oracle");
    int or_per = 500;
    cmd_or->add_option("--per-group", or_per, "matrices per group");

    // regularity
    auto* cmd_reg = app.add_subcommand("regularity", "p-regularity certification");
    std::string reg_file;
    unsigned reg_p = 2;
    int reg_depth = 2;
    cmd_reg->add_option("file", reg_file, "presentation file")->required();
    cmd_reg->add_option("-p,--prime", reg_p, "prime");
    cmd_reg->add_option("--depth", reg_depth, "witness search depth budget");

    // construct
    auto* cmd_con = app.add_subcommand("construct", "Theorem 5.1 staged driver");
    int con_d = 2, con_stages = 1;
    unsigned con_p = 2, con_q = 3;
    std::string con_eps = "9/10";
    std::vector<std::string> con_deltas;
    bool con_rational = false;
    std::string con_log;
    cmd_con->add_option("-d", con_d, "free rank");
    cmd_con->add_option("-p,--prime", con_p, "prime");
    cmd_con->add_option("--epsilon", con_eps, "epsilon (exact rational)");
    cmd_con->add_option("--delta", con_deltas, "delta schedule (exact rationals)")
        ->delimiter(',');
    cmd_con->add_option("--stages", con_stages, "stages to run");
    cmd_con->add_flag("--rational", con_rational, "track b1 over Q instead of F_q");
    cmd_con->add_option("-q", con_q, "field prime for the F_q mode");
    cmd_con->add_option("--log", con_log, "JSON-lines action log file");

    CLI11_PARSE(app, argc, argv);

    if (*cmd_b1) {
        Presentation p = load_presentation(b1_file);
        AbelianInvariants ai = abelian_invariants(p, b1_primes);
        emit(invariants_json(ai), g.format);
        return 0;
    }
    if (*cmd_chain || *cmd_grad) {
        Presentation p = load_presentation(ch_file);
        Chain chain;
        if (ch_type == "derived") {
            chain = derived_p_series(p, ch_p, ch_depth, g.index_budget);
        } else {
            if (ch_weights.empty() || ch_moduli.empty())
                throw malformed_input("cyclic chains need --weights and --moduli");
            chain = cyclic_chain(p, ch_weights, ch_moduli);
        }
        ReferenceConstants refs;
        if (!ch_ref.empty())
            refs.b1_l2 = parse_rational(ch_ref);
        ChainReport rep = report(chain, ch_primes, refs, g.matrix_budget);
        if (*cmd_grad) {
            json out;
            json rows = json::array();
            for (const auto& r : rep.rows)
                rows.push_back({{"index", r.index},
                                {"ratio_rational", rational_json(r.ratio_rational)},
                                {"rg_upper", rational_json(r.rg_upper)}});
            out["levels"] = std::move(rows);
            out["truncated"] = rep.truncated;
            emit(out, g.format);
        } else if (g.format == "csv") {
            std::cout << chain_report_csv(rep);
        } else {
            emit(chain_report_json(rep), g.format);
        }
        return 0;
    }
    if (*cmd_cx) {
        auto [pres, chain] = free_product_counterexample(cx_p, cx_q, cx_moduli);
        ChainReport rep = report(chain, {cx_p, cx_q}, {}, g.matrix_budget);
        json out = chain_report_json(rep);
        out["presentation"] = presentation_json(pres);
        // finite-level strict form of eq. (4.2): the four normalized
        // quantities must increase strictly left to right
        json flags = json::array();
        for (const auto& r : rep.rows) {
            long idx = static_cast<long>(r.index);
            mpq_class a = r.ratio_rational;
            mpq_class b(r.b1_mod.at(cx_p), idx);
            mpq_class c(r.d_H1, idx);
            mpq_class d(r.rank_upper, idx);
            flags.push_back({{"level", r.level},
                             {"strictly_increasing", a < b && b < c && c < d}});
        }
        out["eq42_strict"] = std::move(flags);
        if (g.format == "csv")
            std::cout << chain_report_csv(rep);
        else
            emit(out, g.format);
        return 0;
    }
    if (*cmd_or) {
        OracleSuiteSummary s = run_groupring_suite(g.seed, or_per);
        emit(suite_json(s), g.format);
        return s.violations == 0 && s.demo_fails_as_expected ? 0 : 3;
    }
    if (*cmd_reg) {
        Presentation p = load_presentation(reg_file);
        RegularityCertificate cert = is_p_regular(p, reg_p, reg_depth,
                                                  std::max(g.index_budget, 300000LL));
        emit(certificate_json(cert, p), g.format);
        return 0;
    }
    if (*cmd_con) {
        std::vector<mpq_class> deltas;
        for (const auto& s : con_deltas)
            deltas.push_back(parse_rational(s));
        // default schedule: geometric, delta_n = 3/4 * 2^-(n-1)
        mpq_class d0(3, 4);
        while (static_cast<int>(deltas.size()) < con_stages) {
            deltas.push_back(d0);
            d0 /= 2;
        }
        FieldMode mode;
        mode.rational = con_rational;
        mode.q = con_q;
        DriverBudgets budgets;
        budgets.index_budget = std::max(g.index_budget, 300000LL);
        budgets.matrix_budget = g.matrix_budget;
        std::ofstream logf;
        std::ostream* log = nullptr;
        if (!con_log.empty()) {
            logf.open(con_log);
            if (!logf)
                throw malformed_input("cannot open log file: " + con_log);
            log = &logf;
        }
        ConstructionState st =
            theorem51_driver(con_d, con_p, parse_rational(con_eps), deltas,
                             con_stages, budgets, g.seed, mode, log);
        json out = state_json(st);
        out["verification"] = condition_reports_json(verify_construction(st, budgets));
        emit(out, g.format);
        return 0;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const invariant_violation& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return 3;
    } catch (const malformed_input& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const domain_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const resource_limit& e) {
        std::cerr << "budget exceeded: " << e.what()
                  << " (required " << e.required_budget << ")\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    }
}
