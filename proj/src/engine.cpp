#include "cvn/engine.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <sstream>

namespace cvn {

namespace {

double round12(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return std::strtod(buf, nullptr);
}

Eigen::VectorXd round12(Eigen::VectorXd v) {
    for (Index i = 0; i < v.size(); ++i) v[i] = round12(v[i]);
    return v;
}

nlohmann::ordered_json vector_json(const Eigen::VectorXd& v) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

Eigen::VectorXd vector_from_json(const nlohmann::json& arr) {
    Eigen::VectorXd v(static_cast<Index>(arr.size()));
    Index i = 0;
    for (const auto& x : arr) v[i++] = x.get<double>();
    return v;
}

nlohmann::ordered_json solver_json(const SolverConfig& cfg) {
    nlohmann::ordered_json j;
    j["mode"] = to_string(cfg.mode);
    j["bisection_tol"] = round12(cfg.bisection_tol);
    j["bisection_max_iter"] = cfg.bisection_max_iter;
    j["multistart_count"] = cfg.multistart_count;
    j["rng_seed"] = cfg.rng_seed;
    j["vertex_threshold"] = cfg.vertex_threshold;
    j["conflict_floor"] = round12(cfg.conflict_floor);
    j["oracle_pair_budget"] = cfg.oracle_pair_budget;
    return j;
}

SolverConfig solver_from_json(const nlohmann::json& j) {
    SolverConfig cfg;
    cfg.mode = solver_mode_from_string(j.at("mode").get<std::string>());
    cfg.bisection_tol = j.at("bisection_tol").get<double>();
    cfg.bisection_max_iter = j.at("bisection_max_iter").get<int>();
    cfg.multistart_count = j.at("multistart_count").get<int>();
    cfg.rng_seed = j.at("rng_seed").get<std::uint64_t>();
    cfg.vertex_threshold = j.at("vertex_threshold").get<Index>();
    cfg.conflict_floor = j.at("conflict_floor").get<double>();
    cfg.oracle_pair_budget = j.at("oracle_pair_budget").get<std::size_t>();
    return cfg;
}

std::vector<std::string> state_labels(const Domain& domain) {
    std::vector<std::string> labels;
    for (Index c = 0; c < domain.cardinality(); ++c) labels.push_back(config_label(domain, c));
    return labels;
}

}  // namespace

std::string to_string(EngineKind kind) {
    return kind == EngineKind::Precise ? "precise" : "credal";
}

EngineKind engine_from_string(const std::string& name) {
    if (name == "precise") return EngineKind::Precise;
    if (name == "credal") return EngineKind::Credal;
    throw InvalidStateError("unknown engine '" + name + "' (expected precise|credal)");
}

nlohmann::ordered_json ResultDocument::to_json() const {
    nlohmann::ordered_json j;
    j["engine"] = engine;
    j["query"] = query;
    j["states"] = states;
    j["elimination_order"] = order_used;
    if (precise) {
        j["probs"] = vector_json(lower);
    } else {
        j["lower"] = vector_json(lower);
        j["upper"] = vector_json(upper);
    }
    j["solver"] = solver_json(solver);
    if (elapsed_seconds) j["elapsed_seconds"] = *elapsed_seconds;
    return j;
}

ResultDocument ResultDocument::from_json(const nlohmann::json& j) {
    ResultDocument doc;
    doc.engine = j.at("engine").get<std::string>();
    doc.query = j.at("query").get<std::vector<std::string>>();
    doc.states = j.at("states").get<std::vector<std::string>>();
    doc.order_used = j.at("elimination_order").get<std::vector<std::string>>();
    doc.precise = j.contains("probs");
    if (doc.precise) {
        doc.lower = vector_from_json(j.at("probs"));
        doc.upper = doc.lower;
    } else {
        doc.lower = vector_from_json(j.at("lower"));
        doc.upper = vector_from_json(j.at("upper"));
    }
    doc.solver = solver_from_json(j.at("solver"));
    if (j.contains("elapsed_seconds")) doc.elapsed_seconds = j.at("elapsed_seconds").get<double>();
    return doc;
}

bool operator==(const ResultDocument& a, const ResultDocument& b) {
    return a.engine == b.engine && a.query == b.query && a.states == b.states &&
           a.order_used == b.order_used && a.precise == b.precise && a.lower == b.lower &&
           a.upper == b.upper && a.solver.mode == b.solver.mode &&
           a.solver.bisection_tol == b.solver.bisection_tol &&
           a.solver.bisection_max_iter == b.solver.bisection_max_iter &&
           a.solver.multistart_count == b.solver.multistart_count &&
           a.solver.rng_seed == b.solver.rng_seed &&
           a.solver.vertex_threshold == b.solver.vertex_threshold &&
           a.solver.conflict_floor == b.solver.conflict_floor &&
           a.solver.oracle_pair_budget == b.solver.oracle_pair_budget &&
           a.elapsed_seconds == b.elapsed_seconds;
}

ResultDocument run_infer(const NetworkSpec& spec, const InferOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    const ValuationNetwork net = build_network(spec, options.engine == EngineKind::Credal);
    EliminationOrder order;
    if (options.order) {
        order = *options.order;
    } else if (spec.elimination_order) {
        order = *spec.elimination_order;
    } else {
        order = default_order(net);
    }
    validate_order(net, order);
    const Valuation result = fuse(net, order, options.solver);

    ResultDocument doc;
    doc.engine = to_string(options.engine);
    doc.query = spec.query;
    doc.states = state_labels(net.query_domain());
    doc.order_used = order;
    doc.solver = options.solver;
    if (std::holds_alternative<PmfValuation>(result)) {
        doc.precise = true;
        doc.lower = round12(std::get<PmfValuation>(result).probs());
        doc.upper = doc.lower;
    } else {
        const auto& k = std::get<IntervalValuation>(result);
        doc.precise = false;
        doc.lower = round12(k.lower());
        doc.upper = round12(k.upper());
    }
    if (options.with_timing) {
        const auto end = std::chrono::steady_clock::now();
        doc.elapsed_seconds = round12(std::chrono::duration<double>(end - start).count());
    }
    return doc;
}

std::vector<Diagnostic> validate_spec(const NetworkSpec& spec) {
    std::vector<Diagnostic> out;
    const auto classify = [](const Error& e) -> std::string {
        if (dynamic_cast<const EmptyCredalSetError*>(&e) || dynamic_cast<const CoherenceError*>(&e)) {
            return "coherence";
        }
        if (dynamic_cast<const TotalConflictError*>(&e)) return "conflict";
        if (dynamic_cast<const UnsatisfiableRuleError*>(&e) || dynamic_cast<const InvalidRuleError*>(&e)) {
            return "rule";
        }
        return "parse";
    };
    for (const RuleSpec& rule : spec.rules) {
        try {
            const Domain domain = spec.domain_of(rule);
            (void)compile_rule(rule, domain, /*interval_kind=*/true);
            if (rule.point || rule.kind != RuleKind::Table) {
                (void)compile_rule(rule, domain, /*interval_kind=*/false);
            }
        } catch (const Error& e) {
            out.push_back({rule.source_line, classify(e), e.what()});
        }
    }
    // structural checks that span rules
    std::set<std::string> covered;
    for (const RuleSpec& rule : spec.rules) {
        for (const std::string& p : rule.participants) covered.insert(p);
    }
    for (const VariableDecl& d : spec.variables) {
        if (!covered.count(d.name)) {
            out.push_back({d.source_line, "parse", "variable '" + d.name + "' appears in no valuation"});
        }
    }
    if (spec.elimination_order) {
        std::set<std::string> expected;
        for (const VariableDecl& d : spec.variables) expected.insert(d.name);
        for (const std::string& q : spec.query) expected.erase(q);
        std::set<std::string> given(spec.elimination_order->begin(), spec.elimination_order->end());
        if (given != expected || given.size() != spec.elimination_order->size()) {
            out.push_back({0, "parse", "order statement is not a permutation of the non-query variables"});
        }
    }
    return out;
}

std::string explain_configuration_order(const NetworkSpec& spec) {
    std::ostringstream os;
    os << "Canonical configuration order (variables sorted by name, last varies fastest):\n";
    for (const RuleSpec& rule : spec.rules) {
        const Domain d = spec.domain_of(rule);
        os << "  " << rule.name << " on " << to_string(d) << ": ";
        for (Index c = 0; c < d.cardinality(); ++c) {
            if (c) os << "; ";
            os << c << ":" << config_label(d, c);
        }
        os << "\n";
    }
    return os.str();
}

IntervalValuation load_interval_column(const NetworkSpec& spec, const Domain& expected) {
    if (spec.rules.size() != 1) {
        throw DomainError("an intervals file must hold exactly one valuation, got " +
                          std::to_string(spec.rules.size()));
    }
    const Domain domain = spec.domain_of(spec.rules.front());
    if (!(domain == expected)) {
        throw DomainError("intervals file is on " + to_string(domain) + ", expected " +
                          to_string(expected));
    }
    const Valuation v = compile_rule(spec.rules.front(), domain, /*interval_kind=*/true);
    return std::get<IntervalValuation>(v);
}

CompareOutput run_compare(const NetworkSpec& spec, const CompareOptions& options) {
    InferOptions credal_opts;
    credal_opts.engine = EngineKind::Credal;
    credal_opts.order = options.order;
    credal_opts.solver = options.solver;
    credal_opts.with_timing = options.with_timing;

    CompareOutput out{.table = {}, .credal = run_infer(spec, credal_opts), .precise = std::nullopt};
    const ValuationNetwork net = build_network(spec, /*interval_kind=*/true);
    const Domain target = net.query_domain();

    std::optional<Eigen::VectorXd> truth;
    if (options.truth_inline) {
        std::istringstream is(*options.truth_inline);
        std::vector<double> xs;
        std::string tok;
        while (std::getline(is, tok, ',')) xs.push_back(std::stod(tok));
        if (static_cast<Index>(xs.size()) != target.cardinality()) {
            throw DomainError("inline truth has " + std::to_string(xs.size()) + " entries, expected " +
                              std::to_string(target.cardinality()));
        }
        Eigen::VectorXd t(target.cardinality());
        for (Index i = 0; i < t.size(); ++i) t[i] = xs[static_cast<std::size_t>(i)];
        truth = t;
    } else {
        InferOptions precise_opts = credal_opts;
        precise_opts.engine = EngineKind::Precise;
        const NetworkSpec truth_spec =
            options.truth_file ? parse_network_file(*options.truth_file) : spec;
        if (options.truth_file) precise_opts.order = std::nullopt;
        out.precise = run_infer(truth_spec, precise_opts);
        if (out.precise->lower.size() != target.cardinality()) {
            throw DomainError("truth network's query frame does not match");
        }
        truth = out.precise->lower;
    }

    std::vector<MarginalReport> reports;
    reports.push_back({.method = "credal",
                       .domain = target,
                       .lower = out.credal.lower,
                       .upper = out.credal.upper,
                       .truth = std::nullopt,
                       .distance = std::nullopt,
                       .contains_truth = {}});
    for (const auto& [name, path] : options.extra) {
        const IntervalValuation column = load_interval_column(parse_network_file(path), target);
        reports.push_back({.method = name,
                           .domain = target,
                           .lower = column.lower(),
                           .upper = column.upper(),
                           .truth = std::nullopt,
                           .distance = std::nullopt,
                           .contains_truth = {}});
    }
    out.table = compare(reports, truth);
    return out;
}

nlohmann::ordered_json CompareOutput::to_json() const {
    nlohmann::ordered_json j;
    j["credal"] = credal.to_json();
    if (precise) j["precise"] = precise->to_json();
    nlohmann::ordered_json cols = nlohmann::ordered_json::array();
    for (const MarginalReport& col : table.columns) {
        nlohmann::ordered_json c;
        c["method"] = col.method;
        c["lower"] = vector_json(col.lower);
        c["upper"] = vector_json(col.upper);
        if (col.distance) c["distance"] = round12(*col.distance);
        if (!col.contains_truth.empty()) c["contains_truth"] = col.contains_truth;
        cols.push_back(c);
    }
    j["columns"] = cols;
    return j;
}

std::string_view demo_network_text() {
    static const std::string text = []() {
        return std::string(
R"(# Arrival-delay demo: estimate a ship's arrival delay (in days) from partially
# reliable knowledge about its departure and travel delays.
#
# Each statement carries the true reliability (drives the precise engine) and
# the interval the reasoning system actually knows (drives the credal engine).

var A : 0..4
var D : 0..2
var T : 0..2
var L : {0,1}
var S : {0,1}
var W : {0,1}
var R : {0,1}

val phi1 on A,D,T : sum A = D + T          prob 1.0  [0.96,1.00]
val phi2 on D,L,S : sum D = L + S          prob 0.91 [0.90,0.92]
val phi3 on T,R,W : sum T = R + W          prob 0.94 [0.92,0.95]
val phi4 on S,R   : implies S=1 -> R=0     prob 0.89 [0.88,0.91]
val phi5 on L     : assign L=1             prob 0.82 [0.80,0.83]
val phi6 on S     : assign S=0             prob 0.73 [0.71,0.74]
val phi7 on W     : assign W=1             prob 0.64 [0.62,0.65]

# The credal result depends on the elimination schedule; this order is the one
# that reproduces the published interval marginals. Override with --order.
order W,R,L,S,D,T

query A
)");
    }();
    return text;
}

std::string_view demo_en_intervals_text() {
    static const std::string text = []() {
        return std::string(
R"(# Published evidential-network (belief/plausibility) output for the
# arrival-delay demo, ingested as data for metric comparison only.
var A : 0..4
val en on A : table 0.000,0.129; 0.012,0.485; 0.076,0.823; 0.105,0.603; 0.011,0.121
query A
)");
    }();
    return text;
}

std::vector<std::string> demo_names() { return {"arrival-delay"}; }

DemoOutput run_demo(const std::string& name, const SolverConfig& solver, bool with_timing) {
    if (name != "arrival-delay") {
        std::string known;
        for (const std::string& d : demo_names()) known += " " + d;
        throw InvalidStateError("unknown demo '" + name + "'; available:" + known);
    }
    const NetworkSpec spec = parse_network(demo_network_text());
    InferOptions opts;
    opts.solver = solver;
    opts.with_timing = with_timing;
    opts.engine = EngineKind::Precise;
    ResultDocument precise = run_infer(spec, opts);
    opts.engine = EngineKind::Credal;
    ResultDocument credal = run_infer(spec, opts);

    const ValuationNetwork net = build_network(spec, true);
    const Domain target = net.query_domain();
    const IntervalValuation en = load_interval_column(parse_network(demo_en_intervals_text()), target);

    std::vector<MarginalReport> reports;
    reports.push_back({.method = "credal",
                       .domain = target,
                       .lower = credal.lower,
                       .upper = credal.upper,
                       .truth = std::nullopt,
                       .distance = std::nullopt,
                       .contains_truth = {}});
    reports.push_back({.method = "en",
                       .domain = target,
                       .lower = en.lower(),
                       .upper = en.upper(),
                       .truth = std::nullopt,
                       .distance = std::nullopt,
                       .contains_truth = {}});
    ComparisonTable table = compare(reports, precise.lower);
    return DemoOutput{.precise = std::move(precise), .credal = std::move(credal),
                      .table = std::move(table)};
}

nlohmann::ordered_json DemoOutput::to_json() const {
    nlohmann::ordered_json j;
    j["precise"] = precise.to_json();
    j["credal"] = credal.to_json();
    nlohmann::ordered_json d;
    for (const MarginalReport& col : table.columns) {
        if (col.distance) d[col.method] = round12(*col.distance);
    }
    j["distance"] = d;
    return j;
}

std::string DemoOutput::to_text() const {
    std::ostringstream os;
    os << "arrival-delay: marginal of A\n\n" << table.to_text();
    if (precise.elapsed_seconds && credal.elapsed_seconds) {
        os << "\nprecise engine: " << *precise.elapsed_seconds << " s, credal engine: "
           << *credal.elapsed_seconds << " s\n";
    }
    return os.str();
}

}  // namespace cvn
