#include "robobench/judge.hpp"

#include <algorithm>
#include <sstream>

namespace robobench::bench {

AggregateResult aggregate(const std::array<int, 3>& scores) {
    for (int value : scores) {
        if (value < 0 || value > 2) {
            throw JudgeError("judge score out of range: " + std::to_string(value));
        }
    }
    for (int candidate : {0, 1, 2}) {
        int votes = static_cast<int>(std::count(scores.begin(), scores.end(), candidate));
        if (votes >= 2) {
            return {static_cast<double>(candidate), true};
        }
    }
    double mean = (scores[0] + scores[1] + scores[2]) / 3.0;
    return {mean, false};
}

int parse_score_line(const std::string& reply) {
    // Search from the end for the last "Score:" marker.
    size_t pos = reply.rfind("Score:");
    if (pos == std::string::npos) {
        return -1;
    }
    size_t i = pos + 6;
    while (i < reply.size() && (reply[i] == ' ' || reply[i] == '\t')) {
        ++i;
    }
    if (i >= reply.size() || reply[i] < '0' || reply[i] > '2') {
        return -1;
    }
    int score = reply[i] - '0';
    // The digit must end the line.
    ++i;
    while (i < reply.size() && (reply[i] == ' ' || reply[i] == '\t' || reply[i] == '\r')) {
        ++i;
    }
    if (i < reply.size() && reply[i] != '\n') {
        return -1;
    }
    return score;
}

namespace {

std::string join_lines(const std::vector<std::string>& lines) {
    if (lines.empty()) {
        return "(no actions)";
    }
    std::string out;
    for (const auto& line : lines) {
        out += line + "\n";
    }
    return out;
}

}  // namespace

JudgeReply judge_once(const std::string& instruction,
                      const std::vector<std::string>& ground_truth,
                      const std::vector<std::string>& predicted, llm::ChatClient& judge_llm,
                      const PromptLibrary& prompts, double* llm_seconds) {
    std::string user = "Task: " + instruction + "\n\nGround truth action sequence:\n" +
                       join_lines(ground_truth) + "\nGenerated action sequence:\n" +
                       join_lines(predicted);

    llm::ChatRequest request;
    request.temperature = 0.0;
    request.messages.push_back(llm::system_message(prompts.judge_system));
    request.messages.push_back(llm::user_message(user));

    llm::ChatReply reply = judge_llm.complete(request);
    if (llm_seconds != nullptr) {
        *llm_seconds += reply.seconds;
    }
    int score = parse_score_line(reply.message.content);
    if (score < 0) {
        // One reprompt with an explicit format demand.
        request.messages.push_back(reply.message);
        request.messages.push_back(llm::user_message("Reply with only `Score: N`."));
        llm::ChatReply retry = judge_llm.complete(request);
        if (llm_seconds != nullptr) {
            *llm_seconds += retry.seconds;
        }
        score = parse_score_line(retry.message.content);
        if (score < 0) {
            throw JudgeError("judge reply has no parseable Score line");
        }
        return {score, retry.message.content};
    }
    return {score, reply.message.content};
}

OracleBreakdown oracle_judge_breakdown(const TaskInstance& instance,
                                       const std::vector<std::string>& predicted) {
    OracleBreakdown breakdown;
    ReplayOutcome expected = replay_call_lines(instance.ground_truth, instance.env_id);
    ReplayOutcome actual = replay_call_lines(predicted, instance.env_id);

    for (const auto& name : expected.picked_order) {
        const ObjectEffect& want = expected.final_items.at(name);
        auto it = actual.final_items.find(name);
        if (it != actual.final_items.end() && effects_match(it->second, want)) {
            breakdown.achieved.push_back(name);
        } else {
            breakdown.missed.push_back(name);
        }
    }
    for (const auto& name : actual.manipulated) {
        if (expected.manipulated.count(name) == 0) {
            breakdown.extraneous.push_back(name);
        }
    }
    if (instance.order_constrained) {
        // The required objects must be first-picked in the ground truth's
        // order, over the full required set.
        std::vector<std::string> actual_required_order;
        for (const auto& name : actual.picked_order) {
            if (expected.manipulated.count(name) != 0) {
                actual_required_order.push_back(name);
            }
        }
        breakdown.order_ok = actual_required_order == expected.picked_order;
    }

    bool all_achieved = breakdown.missed.empty() && !expected.picked_order.empty();
    if (expected.picked_order.empty()) {
        // Degenerate: nothing to do; clean hands get full credit.
        breakdown.score = breakdown.extraneous.empty() ? 2 : 0;
    } else if (all_achieved && breakdown.extraneous.empty() && breakdown.order_ok) {
        breakdown.score = 2;
    } else if (!breakdown.achieved.empty()) {
        breakdown.score = 1;
    } else {
        breakdown.score = 0;
    }
    return breakdown;
}

std::string OracleBreakdown::summary() const {
    std::ostringstream out;
    out << "oracle score " << score << ";";
    auto list = [&](const char* label, const std::vector<std::string>& names) {
        out << " " << label << ": ";
        if (names.empty()) {
            out << "none";
        } else {
            for (size_t i = 0; i < names.size(); ++i) {
                if (i > 0) out << ", ";
                out << names[i];
            }
        }
        out << ";";
    };
    list("achieved", achieved);
    list("missed", missed);
    list("extraneous", extraneous);
    out << " order " << (order_ok ? "ok" : "violated");
    return out.str();
}

int oracle_judge(const TaskInstance& instance, const std::vector<std::string>& predicted) {
    return oracle_judge_breakdown(instance, predicted).score;
}

}  // namespace robobench::bench
