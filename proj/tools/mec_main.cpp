// Command-line front end: instance I/O plus one subcommand per library
// operation, and the randomized verification harness.
//
// Exit codes: 0 success, 1 input or usage error, 2 a mathematical assertion
// failed on computed numbers.

#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mec/mec.hpp"

namespace {

using nlohmann::json;

constexpr int exit_ok = 0;
constexpr int exit_input = 1;
constexpr int exit_math = 2;

struct global_options {
    double tol = 1e-9;
    double tail = 1e-12;
    bool force_exact = false;
    bool as_json = false;

    mec::tolerances tolerances() const {
        mec::tolerances t;
        t.mass = tol;
        t.bound = tol;
        return t;
    }
};

std::ostream& human(std::ostream& os) {
    os << std::fixed << std::setprecision(9);
    return os;
}

template <class R>
json mass_json(const R& v) {
    if constexpr (mec::numeric_traits<R>::exact)
        return json(mec::to_string(v));
    else
        return json(v);
}

template <class R>
std::string mass_text(const R& v) {
    if constexpr (mec::numeric_traits<R>::exact) {
        return mec::to_string(v) + " (" +
               (std::ostringstream() << human << mec::numeric_traits<R>::to_double(v)).str() +
               ")";
    } else {
        return (std::ostringstream() << human << v).str();
    }
}

template <class R>
json cells_json(const mec::basic_coupling<R>& c) {
    json arr = json::array();
    for (const auto& cell : c.cells()) {
        json jc;
        jc["indices"] = cell.indices;
        jc["mass"] = mass_json(cell.mass);
        arr.push_back(jc);
    }
    return arr;
}

bool use_exact(const global_options& g, const mec::instance_document& doc) {
    return g.force_exact || doc.mode == mec::numeric_mode::exact_rational;
}

// ---------------------------------------------------------------- couple --

template <class R>
int run_couple(const mec::basic_instance<R>& S, const global_options& g,
               const std::vector<long>& z_values) {
    auto tol = g.tolerances();
    bool pass = true;
    std::string cert_note = "ok";

    auto trace = mec::greedy_couple(S, false, tol);
    auto mt = mec::meet(S);
    std::optional<mec::theorem1_certificate> cert;
    try {
        cert = mec::make_theorem1_certificate(trace, mt, tol);
    } catch (const mec::certificate_violation& e) {
        pass = false;
        cert_note = e.what();
    }
    double h_greedy = trace.coupling.entropy_bits();
    double h_meet = mt.meet.entropy_bits();
    double gap = h_greedy - h_meet;
    bool band_ok = gap >= -tol.bound && gap <= mec::log2_e + tol.bound;
    pass = pass && band_ok;

    json jz = json::array();
    for (long z : z_values) {
        double bound = mec::corollary1_bound(h_meet, z);
        bool ok = h_greedy <= bound + tol.bound;
        pass = pass && ok;
        jz.push_back({{"z", z}, {"bound", bound}, {"ok", ok}});
    }

    if (g.as_json) {
        json out;
        out["cells"] = cells_json(trace.coupling);
        out["entropy_greedy"] = h_greedy;
        out["entropy_meet"] = h_meet;
        out["gap"] = gap;
        out["gap_band_ok"] = band_ok;
        out["meet"] = mec::to_json(mt.meet);
        json jc = json::array();
        if (cert)
            for (const auto& e : cert->entries)
                jc.push_back({{"lower_bound", e.lower_bound},
                              {"max_j", e.max_j},
                              {"state", e.state}});
        out["theorem1"] = {{"ok", cert.has_value()}, {"entries", jc}};
        out["upper_bounds"] = jz;
        out["pass"] = pass;
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "greedy coupling (" << trace.coupling.cell_count() << " cells)\n";
        for (const auto& cell : trace.coupling.cells()) {
            std::cout << "  (";
            for (std::size_t j = 0; j < cell.indices.size(); ++j)
                std::cout << (j ? "," : "") << cell.indices[j] + 1;
            std::cout << ")  " << mass_text(cell.mass) << "\n";
        }
        std::cout << human << "H(greedy) = " << h_greedy << "\nH(meet)   = " << h_meet
                  << "\ngap       = " << gap << "  [0, log2(e)] " << (band_ok ? "ok" : "VIOLATED")
                  << "\n";
        std::cout << "per-state lower bounds: " << cert_note << "\n";
        if (cert) {
            std::cout << "  step  state          bound          at j\n";
            for (std::size_t i = 0; i < cert->entries.size(); ++i) {
                const auto& e = cert->entries[i];
                std::cout << "  " << std::setw(4) << i + 1 << "  " << human << e.state << "  "
                          << e.lower_bound << "  " << std::setw(4) << e.max_j << "\n";
            }
        }
        for (const auto& item : jz)
            std::cout << "H(greedy) <= H(meet) + " << human
                      << (item["bound"].get<double>() - h_meet) << "  (z=" << item["z"]
                      << ")  " << (item["ok"].get<bool>() ? "ok" : "VIOLATED") << "\n";
        std::cout << (pass ? "PASS" : "FAIL") << "\n";
    }
    return pass ? exit_ok : exit_math;
}

// ------------------------------------------------------------------ meet --

template <class R>
int run_meet(const mec::basic_instance<R>& S, const global_options& g) {
    auto mt = mec::meet(S);
    if (g.as_json) {
        json out;
        out["meet"] = mec::to_json(mt.meet);
        out["entropy"] = mt.meet.entropy_bits();
        out["per_index_argmin"] = mt.per_index_argmin;
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "meet states (argmin marginal per prefix)\n";
        for (std::size_t i = 0; i < mt.meet.size(); ++i)
            std::cout << "  " << std::setw(4) << i + 1 << "  " << mass_text(mt.meet.state(i))
                      << "  [marginal " << mt.per_index_argmin[i] + 1 << "]\n";
        std::cout << human << "H(meet) = " << mt.meet.entropy_bits() << "\n";
    }
    return exit_ok;
}

// ---------------------------------------------------------------- gprime --

template <class R>
int run_gprime(const mec::basic_distribution<R>& base, const global_options& g) {
    auto gp = mec::gprime(base, g.tail);
    if (g.as_json) {
        json out;
        json st = json::array();
        for (std::size_t i = 1; i <= gp.size(); ++i)
            st.push_back({{"state", mass_json(gp.state(i))}, {"max_j", gp.max_j(i)}});
        out["states"] = st;
        out["residual"] = mec::numeric_traits<R>::to_double(gp.residual());
        out["entropy_materialized"] = gp.entropy_bits();
        out["tail_entropy_allowance"] = gp.tail_entropy_allowance();
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "recursion states (maximizing prefix length per state)\n";
        for (std::size_t i = 1; i <= gp.size(); ++i)
            std::cout << "  " << std::setw(4) << i << "  " << mass_text(gp.state(i)) << "  [j="
                      << gp.max_j(i) << "]\n";
        std::cout << human << "residual            = "
                  << mec::numeric_traits<R>::to_double(gp.residual())
                  << "\nentropy materialized = " << gp.entropy_bits()
                  << "\ntail allowance       = " << gp.tail_entropy_allowance() << "\n";
    }
    return exit_ok;
}

// ----------------------------------------------------------------- split --

template <class R>
int run_split(const mec::basic_distribution<R>& base, double gamma, const global_options& g) {
    auto sp = mec::split(base, gamma, g.tail);
    if (g.as_json) {
        json out;
        json entries = json::array();
        for (const auto& e : sp.entries())
            entries.push_back(
                {{"source", e.source_index}, {"geom", e.geom_index}, {"mass", e.mass}});
        out["entries"] = entries;
        out["gamma"] = sp.gamma();
        out["tail_bound"] = sp.tail_bound();
        out["entropy_materialized"] = sp.entropy_bits();
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "split entries (source state x geometric index)\n";
        for (const auto& e : sp.entries())
            std::cout << "  (" << e.source_index + 1 << "," << e.geom_index << ")  " << human
                      << e.mass << "\n";
        std::cout << human << "tail bound           = " << sp.tail_bound()
                  << "\nentropy materialized = " << sp.entropy_bits() << "\n";
    }
    return exit_ok;
}

// ---------------------------------------------------------------- oracle --

template <class R>
int run_oracle(const mec::basic_instance<R>& S, const global_options& g, mec::oracle_caps caps) {
    auto tol = g.tolerances();
    auto res = mec::exact_mec(S, caps);
    auto trace = mec::greedy_couple(S, false, tol);
    auto mt = mec::meet(S);
    double h_greedy = trace.coupling.entropy_bits();
    double h_meet = mt.meet.entropy_bits();
    bool bracket_ok = res.best_entropy >= h_meet - tol.bound &&
                      res.best_entropy <= h_greedy + tol.bound;
    bool pass = res.exhaustive && bracket_ok;

    if (g.as_json) {
        json out;
        out["best_entropy"] = res.best_entropy;
        out["exhaustive"] = res.exhaustive;
        out["exact_for_two_marginals"] = S.marginal_count() == 2 && res.exhaustive;
        out["nodes_explored"] = res.nodes_explored;
        out["couplings_found"] = res.couplings_found;
        if (res.best_coupling) out["best_coupling"] = cells_json(*res.best_coupling);
        out["entropy_greedy"] = h_greedy;
        out["entropy_meet"] = h_meet;
        out["greedy_minus_best"] = h_greedy - res.best_entropy;
        out["bracket_ok"] = bracket_ok;
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << human << "best entropy found = " << res.best_entropy << " over "
                  << res.couplings_found << " couplings (" << res.nodes_explored << " nodes, "
                  << (res.exhaustive ? "complete" : "CAPPED") << ")\n";
        if (S.marginal_count() == 2 && res.exhaustive)
            std::cout << "two marginals and complete: this is the exact optimum\n";
        else if (res.exhaustive)
            std::cout << "three or more marginals: best-found upper bound\n";
        if (res.best_coupling) {
            for (const auto& cell : res.best_coupling->cells()) {
                std::cout << "  (";
                for (std::size_t j = 0; j < cell.indices.size(); ++j)
                    std::cout << (j ? "," : "") << cell.indices[j] + 1;
                std::cout << ")  " << mass_text(cell.mass) << "\n";
            }
        }
        std::cout << human << "H(greedy) = " << h_greedy << ", H(meet) = " << h_meet
                  << ", greedy - best = " << h_greedy - res.best_entropy << "\n"
                  << "bracket H(meet) <= best <= H(greedy): " << (bracket_ok ? "ok" : "VIOLATED")
                  << "\n";
    }
    return pass ? exit_ok : exit_math;
}

// --------------------------------------------------------------- uniform --

int run_uniform(long n_max, const global_options& g) {
    if (n_max < 2) {
        std::cerr << "uniform: --n-max must be at least 2\n";
        return exit_input;
    }
    json rows = json::array();
    for (long n = 2; n <= n_max; ++n)
        rows.push_back({{"n", n}, {"gap", mec::uniform_gap(n)}});
    if (g.as_json) {
        json out;
        out["rows"] = rows;
        out["limit"] = mec::log2_e;
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "   n  gap (bits)\n";
        for (const auto& r : rows)
            std::cout << std::setw(4) << r["n"].get<long>() << "  " << human
                      << r["gap"].get<double>() << "\n";
        std::cout << "limit " << human << mec::log2_e << "\n";
    }
    return exit_ok;
}

// ---------------------------------------------------------------- verify --

int run_verify(const mec::verify_config& cfg, const global_options& g) {
    auto sum = mec::run_verification(cfg);
    if (g.as_json) {
        json out;
        out["trials"] = sum.trials;
        out["checks_run"] = sum.checks_run;
        out["all_passed"] = sum.all_passed;
        out["max_gap"] = sum.max_gap;
        out["min_gap"] = sum.min_gap;
        out["max_oracle_difference"] = sum.max_oracle_difference;
        out["min_lemma6_slack"] =
            sum.trials == 0 || cfg.z_values.empty() ? json() : json(sum.min_lemma6_slack);
        out["oracle_trials"] = sum.oracle_trials;
        out["max_greedy_cells"] = sum.max_greedy_cells;
        if (sum.first_failure) {
            out["first_failure"] = {{"trial", sum.first_failure->trial},
                                    {"check", sum.first_failure->check},
                                    {"detail", sum.first_failure->detail},
                                    {"marginals", sum.first_failure->marginals}};
        } else {
            out["first_failure"] = json();
        }
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << sum.trials << " trials, " << sum.checks_run << " checks: "
                  << (sum.all_passed ? "all passed" : "FAILURES") << "\n"
                  << human << "max gap observed      = " << sum.max_gap << " (limit "
                  << mec::log2_e << ")\n";
        if (sum.oracle_trials > 0)
            std::cout << "oracle comparisons    = " << sum.oracle_trials
                      << ", max greedy - optimum = " << human << sum.max_oracle_difference
                      << "\n";
        if (!cfg.z_values.empty() && sum.trials > 0)
            std::cout << "min entropy-order slack = " << human << sum.min_lemma6_slack << "\n";
        if (sum.first_failure) {
            std::cout << "first failure: trial " << sum.first_failure->trial << " ["
                      << sum.first_failure->check << "] " << sum.first_failure->detail << "\n";
            std::cout << "counterexample marginals:\n";
            for (const auto& row : sum.first_failure->marginals) {
                std::cout << "  [";
                for (std::size_t i = 0; i < row.size(); ++i)
                    std::cout << (i ? ", " : "") << human << row[i];
                std::cout << "]\n";
            }
        }
    }
    return sum.all_passed ? exit_ok : exit_math;
}

// ------------------------------------------------------------------ main --

std::optional<mec::instance_document> load_document(const std::string& path) {
    try {
        return mec::load_instance_file(path);
    } catch (const mec::parse_error& e) {
        std::cerr << e.what() << "\n";
        return std::nullopt;
    }
}

// Base distribution for gprime/split: the meet of a file instance, or an
// exact/float uniform over n states.
template <class R>
mec::basic_distribution<R> base_from(const mec::basic_instance<R>& S) {
    return mec::meet(S).meet;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Greedy minimum-entropy coupling with certified bounds"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    global_options g;
    app.add_option("--tol", g.tol, "mass and inequality tolerance")
        ->envname("MEC_TOL")
        ->check(CLI::PositiveNumber);
    app.add_option("--tail", g.tail, "un-materialized tail threshold for infinite supports")
        ->envname("MEC_TAIL")
        ->check(CLI::Range(1e-15, 0.5));
    app.add_flag("--exact", g.force_exact, "force exact rational arithmetic");
    app.add_flag("--json", g.as_json, "structured output");

    std::string file;
    std::vector<long> z_values{2, 3, 5, 10};
    long uniform_n = 0;
    double gamma = 0.5;
    long n_max = 10;
    mec::oracle_caps caps;

    auto* c_couple = app.add_subcommand("couple", "greedy coupling with bound certificates");
    c_couple->add_option("file", file, "instance file")->required();
    c_couple->add_option("--z", z_values, "z values for the upper-bound family")
        ->check(CLI::Range(2l, 1000000l));

    auto* c_meet = app.add_subcommand("meet", "majorization meet of the instance");
    c_meet->add_option("file", file, "instance file")->required();

    auto* c_gprime = app.add_subcommand("gprime", "closed-form recursion for majorizing sets");
    c_gprime->add_option("file", file, "instance file (uses its meet)");
    c_gprime->add_option("--uniform", uniform_n, "uniform base over n states")
        ->check(CLI::PositiveNumber);

    auto* c_split = app.add_subcommand("split", "geometric split of the meet");
    c_split->add_option("file", file, "instance file (uses its meet)");
    c_split->add_option("--uniform", uniform_n, "uniform base over n states")
        ->check(CLI::PositiveNumber);
    c_split->add_option("--gamma", gamma, "geometric parameter in (0,1)")->required();

    auto* c_oracle = app.add_subcommand("oracle", "exact small-instance optimum by enumeration");
    c_oracle->add_option("file", file, "instance file")->required();
    c_oracle->add_option("--max-nodes", caps.max_nodes, "node cap");
    c_oracle->add_option("--max-seconds", caps.max_seconds, "wall clock cap (0 = off)");

    auto* c_uniform = app.add_subcommand("uniform", "entropy-gap table for uniform bases");
    c_uniform->add_option("--n-max", n_max, "largest support size")->required();

    mec::verify_config vcfg;
    std::string mode_name = "float64";
    bool no_oracle = false;
    auto* c_verify = app.add_subcommand("verify", "randomized verification harness");
    c_verify->add_option("--trials", vcfg.trials, "number of random instances")->required();
    c_verify->add_option("--m", vcfg.m, "marginals per instance")->check(CLI::PositiveNumber);
    c_verify->add_option("--n", vcfg.n, "states per marginal")->check(CLI::PositiveNumber);
    c_verify->add_option("--seed", vcfg.seed, "PRNG seed");
    c_verify->add_option("--z", vcfg.z_values, "z values to verify")
        ->check(CLI::Range(2l, 1000000l));
    c_verify->add_option("--mode", mode_name, "float64 or exact-rational")
        ->check(CLI::IsMember({"float64", "exact-rational"}));
    c_verify->add_flag("--no-oracle", no_oracle, "skip the enumeration comparison");

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_uniform->parsed()) return run_uniform(n_max, g);

        if (c_verify->parsed()) {
            vcfg.tol = g.tolerances();
            vcfg.tail = g.tail;
            vcfg.with_oracle = !no_oracle;
            vcfg.mode = (mode_name == "exact-rational" || g.force_exact)
                            ? mec::numeric_mode::exact_rational
                            : mec::numeric_mode::float64;
            return run_verify(vcfg, g);
        }

        if (c_gprime->parsed() || c_split->parsed()) {
            bool is_split = c_split->parsed();
            if ((file.empty()) == (uniform_n == 0)) {
                std::cerr << "provide exactly one of an instance file or --uniform\n";
                return exit_input;
            }
            if (uniform_n > 0) {
                if (g.force_exact) {
                    auto base = mec::uniform_distribution<mec::rational>(uniform_n);
                    return is_split ? run_split(base, gamma, g) : run_gprime(base, g);
                }
                auto base = mec::uniform_distribution<double>(uniform_n);
                return is_split ? run_split(base, gamma, g) : run_gprime(base, g);
            }
            auto doc = load_document(file);
            if (!doc) return exit_input;
            if (use_exact(g, *doc)) {
                auto base = base_from(doc->as_exact(g.tolerances()));
                return is_split ? run_split(base, gamma, g) : run_gprime(base, g);
            }
            auto base = base_from(doc->as_float(g.tolerances()));
            return is_split ? run_split(base, gamma, g) : run_gprime(base, g);
        }

        // Remaining subcommands read an instance file.
        auto doc = load_document(file);
        if (!doc) return exit_input;
        if (use_exact(g, *doc)) {
            auto S = doc->as_exact(g.tolerances());
            if (c_couple->parsed()) return run_couple(S, g, z_values);
            if (c_meet->parsed()) return run_meet(S, g);
            if (c_oracle->parsed()) return run_oracle(S, g, caps);
        } else {
            auto S = doc->as_float(g.tolerances());
            if (c_couple->parsed()) return run_couple(S, g, z_values);
            if (c_meet->parsed()) return run_meet(S, g);
            if (c_oracle->parsed()) return run_oracle(S, g, caps);
        }
        std::cerr << "no subcommand handled\n";
        return exit_input;
    } catch (const mec::certificate_violation& e) {
        std::cerr << "certificate violation: " << e.what() << "\n";
        return exit_math;
    } catch (const mec::bound_violation& e) {
        std::cerr << "bound violation: " << e.what() << "\n";
        return exit_math;
    } catch (const mec::parse_error& e) {
        std::cerr << e.what() << "\n";
        return exit_input;
    } catch (const mec::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_input;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_input;
    }
}
