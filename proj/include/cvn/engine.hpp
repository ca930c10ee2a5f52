#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "cvn/metrics.hpp"
#include "cvn/parser.hpp"

namespace cvn {

enum class EngineKind { Precise, Credal };

std::string to_string(EngineKind kind);
EngineKind engine_from_string(const std::string& name);

struct InferOptions {
    EngineKind engine = EngineKind::Credal;
    std::optional<EliminationOrder> order;  // overrides a file-level order statement
    SolverConfig solver;
    bool with_timing = false;
};

/// Machine-readable inference result. All numbers are quantized to 12
/// significant digits, so the document round-trips through its own parser and
/// serializes deterministically.
struct ResultDocument {
    std::string engine;
    std::vector<std::string> query;
    std::vector<std::string> states;
    EliminationOrder order_used;
    bool precise = false;
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;  // == lower for precise results
    SolverConfig solver;
    std::optional<double> elapsed_seconds;  // emitted only when timing was requested

    nlohmann::ordered_json to_json() const;
    static ResultDocument from_json(const nlohmann::json& j);

    friend bool operator==(const ResultDocument& a, const ResultDocument& b);
};

ResultDocument run_infer(const NetworkSpec& spec, const InferOptions& options);

struct Diagnostic {
    int line = 0;
    std::string category;  // "parse" | "coherence" | "conflict" | "rule"
    std::string message;
};

/// Rule-level compile checks plus network-level structure checks, collected
/// rather than thrown so every problem is reported at once.
std::vector<Diagnostic> validate_spec(const NetworkSpec& spec);

/// The canonical configuration order of each valuation's domain, for table
/// authors ("validate --explain").
std::string explain_configuration_order(const NetworkSpec& spec);

struct CompareOptions {
    std::optional<std::string> truth_file;          // network file; its precise run is the truth
    std::optional<std::string> truth_inline;        // comma-separated mass function
    std::vector<std::pair<std::string, std::string>> extra;  // name -> intervals file
    std::optional<EliminationOrder> order;
    SolverConfig solver;
    bool with_timing = false;
};

struct CompareOutput {
    ComparisonTable table;
    ResultDocument credal;
    std::optional<ResultDocument> precise;
    nlohmann::ordered_json to_json() const;
};

CompareOutput run_compare(const NetworkSpec& spec, const CompareOptions& options);

/// The interval column stored in a table-kind intervals file (one table
/// valuation whose domain must match `expected`).
IntervalValuation load_interval_column(const NetworkSpec& spec, const Domain& expected);

// Bundled demo inputs (also shipped under fixtures/).
std::string_view demo_network_text();
std::string_view demo_en_intervals_text();

struct DemoOutput {
    ResultDocument precise;
    ResultDocument credal;
    ComparisonTable table;
    nlohmann::ordered_json to_json() const;
    std::string to_text() const;
};

/// Runs both engines on the bundled network and compares them against the
/// bundled external intervals. `name` must be "arrival-delay".
DemoOutput run_demo(const std::string& name, const SolverConfig& solver, bool with_timing);

std::vector<std::string> demo_names();

}  // namespace cvn
