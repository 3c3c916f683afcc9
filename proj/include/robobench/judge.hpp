#pragma once

#include <array>

#include "robobench/corpus.hpp"
#include "robobench/llm.hpp"
#include "robobench/prompts.hpp"

namespace robobench::bench {

struct JudgeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Three independent scores and their aggregation. The final score is the
/// majority value when one exists and the mean of the three otherwise (with
/// scores in {0,1,2} the all-distinct mean is always exactly 1.0, but it is
/// flagged as fractional and histogrammed separately).
struct JudgeVerdict {
    std::vector<int> per_judge;
    double final_score = 0.0;
    bool by_majority = true;
    std::vector<std::string> rationales;
};

struct AggregateResult {
    double final_score = 0.0;
    bool majority = true;
};

AggregateResult aggregate(const std::array<int, 3>& scores);

struct JudgeReply {
    int score = 0;
    std::string rationale;
};

/// One LLM judgment at temperature 0: rubric and guidelines in the system
/// prompt, then the task, the ground truth trace, and the predicted trace.
/// The reply must end with a `Score: N` line; one reprompt is attempted
/// before a JudgeError escapes.
JudgeReply judge_once(const std::string& instruction,
                      const std::vector<std::string>& ground_truth,
                      const std::vector<std::string>& predicted, llm::ChatClient& judge_llm,
                      const PromptLibrary& prompts, double* llm_seconds = nullptr);

/// Extracts the score from the terminal `Score: N` line; -1 when absent.
int parse_score_line(const std::string& reply);

/// Rule-based stand-in used by CI and the default runner configuration.
/// Scores by replaying both traces on fresh worlds and comparing per-object
/// final effects:
///   2  every ground-truth object effect achieved, no extraneous object
///      manipulated, and the required order respected when the task is
///      order-constrained;
///   1  at least one object effect achieved;
///   0  otherwise.
int oracle_judge(const TaskInstance& instance, const std::vector<std::string>& predicted);

/// Detail behind an oracle score, for rationales and debugging.
struct OracleBreakdown {
    int score = 0;
    std::vector<std::string> achieved;
    std::vector<std::string> missed;
    std::vector<std::string> extraneous;
    bool order_ok = true;
    std::string summary() const;
};
OracleBreakdown oracle_judge_breakdown(const TaskInstance& instance,
                                       const std::vector<std::string>& predicted);

}  // namespace robobench::bench
