#pragma once

#include <optional>

#include "robobench/judge.hpp"
#include "robobench/mock_policy.hpp"
#include "robobench/planner.hpp"

namespace robobench::bench {

/// Where the planner/executor completions come from: the deterministic
/// perfect-script mock or a remote chat endpoint.
struct ModelSpec {
    bool mock = false;
    llm::EndpointConfig endpoint;  // when !mock
    std::string label;             // display name, e.g. "mock" or the model id
};

/// "mock" or "url=...,model=...[,key_env=...][,timeout=...][,retries=...]".
ModelSpec parse_model_spec(const std::string& text);

/// "oracle" or one to three semicolon-separated model specs (a single spec
/// is used for all three judges).
struct JudgeSpec {
    bool oracle = false;
    std::vector<ModelSpec> judges;
};
JudgeSpec parse_judge_spec(const std::string& text);

struct RunConfig {
    Mode mode = Mode::Cap;
    ModelSpec model;
    JudgeSpec judges;
    std::string corpus_dir = "data/corpus";
    std::string prompts_dir = "prompts";
    std::string output_dir;
    std::optional<int> env_filter;
    std::optional<int> task_filter;
    std::optional<Category> category_filter;
    int parallelism = 1;
    int repeat = 1;
    std::string seed_tag;
    std::string api_url;  // when set, actions go through a remote server
    double temperature = 0.0;  // planner/executor sampling temperature
    agent::PlannerConfig planner;

    Json to_json() const;
};

struct TaskResult {
    std::string instance_key;
    int env_id = 0;
    int task_id = 0;
    std::string category;
    std::string instruction;
    double final_score = 0.0;
    bool fractional = false;  // aggregated by mean of three distinct scores
    std::vector<int> judge_scores;
    std::vector<std::string> judge_rationales;
    double latency_seconds = 0.0;  // wall clock, task start to trace complete
    double llm_seconds = 0.0;      // planner + executor model-call durations
    double judge_seconds = 0.0;    // judge model-call durations (zero for the oracle)
    int planner_steps = 0;
    bool unfinished = false;
    std::string error_note;
    std::vector<std::string> trace;
    std::string completed_at;  // ISO timestamp, excluded from determinism checks

    Json to_json() const;
    static TaskResult from_json(const Json& j);
};

struct ResultSet {
    Json config_snapshot;
    std::vector<TaskResult> results;
};

struct ScoreCounts {
    int n0 = 0;
    int n1 = 0;
    int n2 = 0;
    int n_fractional = 0;
};

/// Histogram of final scores; fractional finals (all-distinct judge
/// averages) are counted separately.
ScoreCounts score_counts(const std::vector<TaskResult>& results);

/// 100 * sum(final scores) / (2 * N) over the filtered results; nullopt when
/// the filter selects nothing.
std::optional<double> success_rate(const std::vector<TaskResult>& results,
                                   const std::optional<Category>& category = std::nullopt);

struct LatencyStats {
    double mean = 0.0;
    double median = 0.0;
    double max = 0.0;
};
LatencyStats latency_stats(const std::vector<TaskResult>& results);

/// Runs the configured benchmark. Results persist incrementally, one JSON
/// file per task under <output_dir>/results/, and existing files are loaded
/// instead of re-run so interrupted runs resume. Per-task failures are
/// recorded as score 0 with an error note; they never abort the run.
ResultSet run_benchmark(const RunConfig& config);

/// Aggregate row in the summary table's column order.
struct SummaryRow {
    std::string mode;
    std::string model;
    ScoreCounts counts;
    std::optional<double> can, lex, syn, sem, hlr, avg;
    double mean_latency = 0.0;
};
SummaryRow summarize(const std::string& mode, const std::string& model,
                     const std::vector<TaskResult>& results);

std::string render_summary_csv(const SummaryRow& row);
std::string render_summary_table(const SummaryRow& row);

/// Writes per-task results (already on disk), summary.csv and summary.txt.
void emit_report(const ResultSet& result_set, const std::string& output_dir,
                 const std::string& format = "table");

/// Loads previously persisted results from <dir>/results/.
ResultSet load_results(const std::string& output_dir);

/// One-decimal percent rendering; "-" for empty cells.
std::string format_percent(const std::optional<double>& value);

}  // namespace robobench::bench
