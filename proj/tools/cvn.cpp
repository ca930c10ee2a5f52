#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "cvn/engine.hpp"

namespace {

// success 0, usage 1, parse 2, coherence 3, conflict 4, solver 5
int exit_code_for(const cvn::Error& e) {
    if (dynamic_cast<const cvn::EmptyCredalSetError*>(&e)) return 3;
    if (dynamic_cast<const cvn::CoherenceError*>(&e)) return 3;
    if (dynamic_cast<const cvn::TotalConflictError*>(&e)) return 4;
    if (dynamic_cast<const cvn::SolverError*>(&e)) return 5;
    if (dynamic_cast<const cvn::ThresholdExceededError*>(&e)) return 5;
    return 2;  // parse/file-content errors
}

std::vector<std::string> split_names(const std::string& csv) {
    std::vector<std::string> out;
    std::string token;
    std::istringstream is(csv);
    while (std::getline(is, token, ',')) {
        if (!token.empty()) out.push_back(token);
    }
    return out;
}

cvn::SolverConfig make_solver(const std::string& mode, std::int64_t seed_flag) {
    cvn::SolverConfig cfg;
    cfg.mode = cvn::solver_mode_from_string(mode);
    if (seed_flag >= 0) {
        cfg.rng_seed = static_cast<std::uint64_t>(seed_flag);
    } else if (const char* env = std::getenv("CVN_SEED")) {
        cfg.rng_seed = std::strtoull(env, nullptr, 10);
    }
    cfg.validate();
    return cfg;
}

// order flags are usage errors, not network errors
std::optional<cvn::EliminationOrder> parse_order_flag(const std::string& order_csv,
                                                      const cvn::NetworkSpec& spec) {
    if (order_csv.empty()) return std::nullopt;
    cvn::EliminationOrder order = split_names(order_csv);
    for (const std::string& name : order) {
        bool known = false;
        for (const auto& d : spec.variables) known |= d.name == name;
        if (!known) {
            std::cerr << "error: --order names unknown variable '" << name << "'\n";
            std::exit(1);
        }
    }
    return order;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"credal valuation network engine"};
    app.require_subcommand(1);

    std::string file, engine_name = "credal", order_csv, solver_mode = "auto";
    std::int64_t seed = -1;
    bool as_json = false, with_timing = false;

    auto add_solver_flags = [&](CLI::App* cmd) {
        cmd->add_option("--solver", solver_mode, "inner solver route: auto|lp|oracle")
            ->check(CLI::IsMember({"auto", "lp", "oracle"}));
        cmd->add_option("--seed", seed, "solver rng seed (overrides CVN_SEED)");
        cmd->add_flag("--json", as_json, "machine-readable output");
        cmd->add_flag("--timing", with_timing, "include wall-clock time in the output");
    };

    CLI::App* infer = app.add_subcommand("infer", "run inference on a network file");
    infer->add_option("file", file, "network file (.cvn)")->required();
    infer->add_option("--engine", engine_name, "precise|credal")
        ->check(CLI::IsMember({"precise", "credal"}));
    infer->add_option("--order", order_csv, "elimination order, comma-separated");
    add_solver_flags(infer);

    CLI::App* validate = app.add_subcommand("validate", "check a network file");
    validate->add_option("file", file, "network file (.cvn)")->required();
    bool explain = false;
    validate->add_flag("--explain", explain, "print the canonical configuration order per valuation");

    CLI::App* compare_cmd = app.add_subcommand("compare", "compare interval marginals against a truth");
    compare_cmd->add_option("file", file, "network file (.cvn)")->required();
    std::string truth_file, truth_inline;
    std::vector<std::string> extras;
    compare_cmd->add_option("--truth", truth_file, "network file whose precise run is the truth");
    compare_cmd->add_option("--truth-inline", truth_inline, "comma-separated truth mass function");
    compare_cmd->add_option("--extra", extras, "NAME=intervals-file, an extra interval column");
    compare_cmd->add_option("--order", order_csv, "elimination order for the credal run");
    add_solver_flags(compare_cmd);

    CLI::App* demo = app.add_subcommand("demo", "run a bundled demonstration");
    std::string demo_name;
    demo->add_option("name", demo_name, "demo name (arrival-delay)")->required();
    add_solver_flags(demo);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (*infer) {
            const cvn::NetworkSpec spec = cvn::parse_network_file(file);
            cvn::InferOptions options;
            options.engine = cvn::engine_from_string(engine_name);
            options.order = parse_order_flag(order_csv, spec);
            options.solver = make_solver(solver_mode, seed);
            options.with_timing = with_timing;
            const cvn::ResultDocument doc = cvn::run_infer(spec, options);
            if (as_json) {
                std::cout << doc.to_json().dump(2) << "\n";
            } else {
                std::cout << doc.engine << " marginal of ";
                for (std::size_t i = 0; i < doc.query.size(); ++i) {
                    std::cout << (i ? "," : "") << doc.query[i];
                }
                std::cout << " (order";
                for (const std::string& v : doc.order_used) std::cout << " " << v;
                std::cout << ")\n";
                for (std::size_t i = 0; i < doc.states.size(); ++i) {
                    std::cout << "  " << doc.states[i] << " : ";
                    if (doc.precise) {
                        std::cout << doc.lower[static_cast<cvn::Index>(i)] << "\n";
                    } else {
                        std::cout << "[" << doc.lower[static_cast<cvn::Index>(i)] << ", "
                                  << doc.upper[static_cast<cvn::Index>(i)] << "]\n";
                    }
                }
                if (doc.elapsed_seconds) std::cout << "elapsed: " << *doc.elapsed_seconds << " s\n";
            }
            return 0;
        }

        if (*validate) {
            const cvn::NetworkSpec spec = cvn::parse_network_file(file);
            const std::vector<cvn::Diagnostic> diags = cvn::validate_spec(spec);
            if (explain) std::cout << cvn::explain_configuration_order(spec);
            if (diags.empty()) {
                std::cout << "ok: " << spec.variables.size() << " variables, " << spec.rules.size()
                          << " valuations, query";
                for (const std::string& q : spec.query) std::cout << " " << q;
                std::cout << "\n";
                return 0;
            }
            bool coherence = false;
            for (const cvn::Diagnostic& d : diags) {
                std::cerr << "line " << d.line << " [" << d.category << "] " << d.message << "\n";
                coherence |= d.category == "coherence";
            }
            return coherence ? 3 : 2;
        }

        if (*compare_cmd) {
            const cvn::NetworkSpec spec = cvn::parse_network_file(file);
            cvn::CompareOptions options;
            if (!truth_file.empty()) options.truth_file = truth_file;
            if (!truth_inline.empty()) options.truth_inline = truth_inline;
            for (const std::string& e : extras) {
                const auto eq = e.find('=');
                if (eq == std::string::npos) {
                    std::cerr << "error: --extra expects NAME=FILE\n";
                    return 1;
                }
                options.extra.emplace_back(e.substr(0, eq), e.substr(eq + 1));
            }
            options.order = parse_order_flag(order_csv, spec);
            options.solver = make_solver(solver_mode, seed);
            options.with_timing = with_timing;
            const cvn::CompareOutput out = cvn::run_compare(spec, options);
            if (as_json) {
                std::cout << out.to_json().dump(2) << "\n";
            } else {
                std::cout << out.table.to_text();
            }
            return 0;
        }

        if (*demo) {
            const cvn::SolverConfig solver = make_solver(solver_mode, seed);
            const cvn::DemoOutput out = cvn::run_demo(demo_name, solver, with_timing || !as_json);
            if (as_json) {
                std::cout << out.to_json().dump(2) << "\n";
            } else {
                std::cout << out.to_text();
            }
            return 0;
        }
    } catch (const cvn::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const cvn::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 5;
    }
    return 1;
}
