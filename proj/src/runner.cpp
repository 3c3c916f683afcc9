#include "robobench/runner.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include "robobench/executor_cap.hpp"
#include "robobench/executor_tap.hpp"
#include "robobench/server.hpp"

namespace robobench::bench {

namespace fs = std::filesystem;

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string current;
    for (char c : text) {
        if (c == sep) {
            parts.push_back(current);
            current.clear();
        } else {
            current += c;
        }
    }
    parts.push_back(current);
    return parts;
}

std::string now_iso8601() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

ModelSpec parse_model_spec(const std::string& text) {
    ModelSpec spec;
    if (text == "mock") {
        spec.mock = true;
        spec.label = "mock";
        return spec;
    }
    for (const auto& part : split(text, ',')) {
        auto eq = part.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("bad model spec fragment \"" + part +
                              "\" (expected key=value, or \"mock\")");
        }
        std::string key = part.substr(0, eq);
        std::string value = part.substr(eq + 1);
        if (key == "url") {
            spec.endpoint.base_url = value;
        } else if (key == "model") {
            spec.endpoint.model = value;
        } else if (key == "key_env") {
            spec.endpoint.api_key_env = value;
        } else if (key == "timeout") {
            spec.endpoint.timeout_seconds = std::stod(value);
        } else if (key == "retries") {
            spec.endpoint.retries = std::stoi(value);
        } else {
            throw ConfigError("unknown model spec key \"" + key + "\"");
        }
    }
    if (spec.endpoint.base_url.empty() || spec.endpoint.model.empty()) {
        throw ConfigError("model spec needs at least url=... and model=...");
    }
    spec.label = spec.endpoint.model;
    return spec;
}

JudgeSpec parse_judge_spec(const std::string& text) {
    JudgeSpec spec;
    if (text == "oracle") {
        spec.oracle = true;
        return spec;
    }
    for (const auto& part : split(text, ';')) {
        if (!part.empty()) {
            spec.judges.push_back(parse_model_spec(part));
        }
    }
    if (spec.judges.empty()) {
        throw ConfigError("judge spec must be \"oracle\" or 1-3 model specs");
    }
    if (spec.judges.size() == 1) {
        // A single endpoint still votes three times.
        spec.judges.push_back(spec.judges[0]);
        spec.judges.push_back(spec.judges[0]);
    }
    if (spec.judges.size() != 3) {
        throw ConfigError("judge spec must name exactly one or three endpoints");
    }
    return spec;
}

Json RunConfig::to_json() const {
    Json j;
    j["mode"] = mode_to_string(mode);
    j["model"] = model.label;
    j["judges"] = judges.oracle ? "oracle" : std::to_string(judges.judges.size()) + " endpoints";
    j["corpus_dir"] = corpus_dir;
    j["prompts_dir"] = prompts_dir;
    j["output_dir"] = output_dir;
    if (env_filter) j["env"] = *env_filter;
    if (task_filter) j["task"] = *task_filter;
    if (category_filter) j["category"] = category_to_string(*category_filter);
    j["parallelism"] = parallelism;
    j["repeat"] = repeat;
    j["seed_tag"] = seed_tag;
    j["api_url"] = api_url;
    j["temperature"] = temperature;
    j["max_steps"] = planner.max_steps;
    return j;
}

Json TaskResult::to_json() const {
    Json j;
    j["instance"] = instance_key;
    j["env_id"] = env_id;
    j["task_id"] = task_id;
    j["category"] = category;
    j["instruction"] = instruction;
    j["final_score"] = final_score;
    j["fractional"] = fractional;
    j["judge_scores"] = judge_scores;
    j["judge_rationales"] = judge_rationales;
    j["latency_seconds"] = latency_seconds;
    j["llm_seconds"] = llm_seconds;
    j["judge_seconds"] = judge_seconds;
    j["planner_steps"] = planner_steps;
    j["unfinished"] = unfinished;
    j["error_note"] = error_note;
    j["trace"] = trace;
    j["completed_at"] = completed_at;
    return j;
}

TaskResult TaskResult::from_json(const Json& j) {
    TaskResult r;
    r.instance_key = j.at("instance").get<std::string>();
    r.env_id = j.at("env_id").get<int>();
    r.task_id = j.at("task_id").get<int>();
    r.category = j.at("category").get<std::string>();
    r.instruction = j.at("instruction").get<std::string>();
    r.final_score = j.at("final_score").get<double>();
    r.fractional = j.at("fractional").get<bool>();
    r.judge_scores = j.at("judge_scores").get<std::vector<int>>();
    r.judge_rationales = j.at("judge_rationales").get<std::vector<std::string>>();
    r.latency_seconds = j.at("latency_seconds").get<double>();
    r.llm_seconds = j.at("llm_seconds").get<double>();
    r.judge_seconds = j.value("judge_seconds", 0.0);
    r.planner_steps = j.at("planner_steps").get<int>();
    r.unfinished = j.at("unfinished").get<bool>();
    r.error_note = j.at("error_note").get<std::string>();
    r.trace = j.at("trace").get<std::vector<std::string>>();
    r.completed_at = j.value("completed_at", "");
    return r;
}

ScoreCounts score_counts(const std::vector<TaskResult>& results) {
    ScoreCounts counts;
    for (const auto& r : results) {
        if (r.fractional) {
            ++counts.n_fractional;
        } else if (r.final_score == 0.0) {
            ++counts.n0;
        } else if (r.final_score == 1.0) {
            ++counts.n1;
        } else if (r.final_score == 2.0) {
            ++counts.n2;
        }
    }
    return counts;
}

std::optional<double> success_rate(const std::vector<TaskResult>& results,
                                   const std::optional<Category>& category) {
    double total = 0.0;
    int n = 0;
    for (const auto& r : results) {
        if (category && r.category != category_to_string(*category)) continue;
        total += r.final_score;
        ++n;
    }
    if (n == 0) {
        return std::nullopt;
    }
    return 100.0 * total / (2.0 * n);
}

LatencyStats latency_stats(const std::vector<TaskResult>& results) {
    LatencyStats stats;
    if (results.empty()) {
        return stats;
    }
    std::vector<double> values;
    values.reserve(results.size());
    for (const auto& r : results) {
        values.push_back(r.latency_seconds);
        stats.mean += r.latency_seconds;
        stats.max = std::max(stats.max, r.latency_seconds);
    }
    stats.mean /= static_cast<double>(values.size());
    std::sort(values.begin(), values.end());
    size_t mid = values.size() / 2;
    stats.median =
        values.size() % 2 == 1 ? values[mid] : (values[mid - 1] + values[mid]) / 2.0;
    return stats;
}

namespace {

struct TaskRuntime {
    const Corpus* corpus = nullptr;
    const PromptLibrary* prompts = nullptr;
    const RunConfig* config = nullptr;
};

std::unique_ptr<llm::ChatClient> make_agent_client(const ModelSpec& spec,
                                                   std::vector<llm::ChatMessage> mock_script) {
    if (spec.mock) {
        return std::make_unique<llm::MockChatClient>(std::move(mock_script));
    }
    return std::make_unique<llm::HttpChatClient>(spec.endpoint);
}

void judge_result(const TaskInstance& instance, const std::vector<std::string>& trace_lines,
                  const TaskRuntime& rt, TaskResult& result) {
    const JudgeSpec& judges = rt.config->judges;
    if (judges.oracle) {
        OracleBreakdown breakdown = oracle_judge_breakdown(instance, trace_lines);
        result.final_score = breakdown.score;
        result.fractional = false;
        result.judge_scores = {breakdown.score};
        result.judge_rationales = {breakdown.summary()};
        return;
    }
    std::array<int, 3> scores{};
    for (int i = 0; i < 3; ++i) {
        llm::HttpChatClient judge_llm(judges.judges[i].endpoint);
        JudgeReply reply = judge_once(instance.instruction, instance.ground_truth, trace_lines,
                                      judge_llm, *rt.prompts, &result.judge_seconds);
        scores[i] = reply.score;
        result.judge_scores.push_back(reply.score);
        result.judge_rationales.push_back(reply.rationale);
    }
    AggregateResult agg = aggregate(scores);
    result.final_score = agg.final_score;
    result.fractional = !agg.majority;
}

TaskResult run_one_task(const TaskInstance& instance, const TaskRuntime& rt) {
    TaskResult result;
    result.instance_key = instance.key();
    result.env_id = instance.env_id;
    result.task_id = instance.task_id;
    result.category = category_to_string(instance.category);
    result.instruction = instance.instruction;

    auto start = std::chrono::steady_clock::now();
    try {
        const RunConfig& config = *rt.config;

        std::unique_ptr<ActionDispatcher> dispatcher;
        if (config.api_url.empty()) {
            dispatcher = std::make_unique<LocalDispatcher>(World::load_environment(instance.env_id));
        } else {
            dispatcher = HttpDispatcher::create_session(config.api_url, instance.env_id);
        }

        MockRunScripts scripts;
        if (config.model.mock) {
            scripts = make_perfect_scripts(instance, config.mode);
        }
        auto planner_llm = make_agent_client(config.model, std::move(scripts.planner));
        auto executor_llm = make_agent_client(config.model, std::move(scripts.executor));

        std::unique_ptr<agent::SubtaskExecutor> executor;
        if (config.mode == Mode::Cap) {
            executor = std::make_unique<agent::CapExecutor>(*executor_llm, *dispatcher,
                                                            *rt.prompts, config.temperature);
        } else {
            agent::TapConfig tap_config;
            tap_config.temperature = config.temperature;
            executor = std::make_unique<agent::TapExecutor>(*executor_llm, *dispatcher,
                                                            *rt.prompts, tap_config);
        }

        agent::PlannerConfig planner_config = config.planner;
        planner_config.temperature = config.temperature;
        agent::TaskTrace trace = agent::run_task(instance.instruction, *executor, *planner_llm,
                                                 *rt.prompts, planner_config);
        result.llm_seconds += trace.llm_seconds;
        result.planner_steps = static_cast<int>(trace.steps.size());
        result.unfinished = trace.unfinished_budget;
        result.trace = dispatcher->trace_lines();
        // Task latency stops when the trace is complete; judging time is
        // accounted separately.
        result.latency_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        // Planner transcript, for debugging.
        if (!config.output_dir.empty()) {
            fs::path dir = fs::path(config.output_dir) / "transcripts";
            fs::create_directories(dir);
            std::ofstream out(dir / (result.instance_key + ".txt"));
            out << "Instruction: " << instance.instruction << "\n\n" << trace.transcript();
        }

        if (trace.format_error) {
            // Aborted task: scored 0 without judging.
            result.final_score = 0.0;
            result.judge_scores = {0};
            result.judge_rationales = {trace.format_error_detail};
            result.error_note = trace.format_error_detail;
        } else {
            judge_result(instance, result.trace, rt, result);
        }
    } catch (const std::exception& e) {
        result.final_score = 0.0;
        result.judge_scores = {0};
        result.error_note = std::string("task failed: ") + e.what();
    }
    if (result.latency_seconds == 0.0) {
        result.latency_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    result.completed_at = now_iso8601();
    return result;
}

}  // namespace

ResultSet run_benchmark(const RunConfig& config) {
    Corpus corpus = load_corpus(config.corpus_dir);
    PromptLibrary prompts = PromptLibrary::load(config.prompts_dir);

    CorpusFilter predicate;
    predicate.env_id = config.env_filter;
    predicate.task_id = config.task_filter;
    predicate.category = config.category_filter;
    Corpus selected = filter(corpus, predicate);
    if (selected.instances.empty()) {
        throw ConfigError("the configured filters select no corpus instances");
    }

    fs::path results_dir;
    if (!config.output_dir.empty()) {
        results_dir = fs::path(config.output_dir) / "results";
        fs::create_directories(results_dir);
        std::ofstream cfg(fs::path(config.output_dir) / "run_config.json");
        cfg << config.to_json().dump(2) << "\n";
        std::ofstream schemas(fs::path(config.output_dir) / "tool_schemas.json");
        schemas << tool_schemas_json().dump(2) << "\n";
    }

    struct WorkItem {
        TaskInstance instance;
        std::string key;
        int slot = 0;
    };
    std::vector<WorkItem> work;
    for (int rep = 1; rep <= config.repeat; ++rep) {
        for (const auto& instance : selected.instances) {
            WorkItem item;
            item.instance = instance;
            item.key = instance.key();
            if (config.repeat > 1) {
                item.key += "-rep" + std::to_string(rep);
            }
            item.slot = static_cast<int>(work.size());
            work.push_back(std::move(item));
        }
    }

    TaskRuntime rt{&corpus, &prompts, &config};
    std::vector<TaskResult> results(work.size());
    std::atomic<size_t> next{0};
    std::mutex io_mutex;

    auto worker = [&] {
        while (true) {
            size_t i = next.fetch_add(1);
            if (i >= work.size()) return;
            const WorkItem& item = work[i];
            fs::path result_path =
                results_dir.empty() ? fs::path() : results_dir / (item.key + ".json");

            // Resume: completed tasks are loaded, never re-run or re-judged.
            if (!result_path.empty() && fs::exists(result_path)) {
                try {
                    std::ifstream in(result_path);
                    results[item.slot] = TaskResult::from_json(Json::parse(in));
                    continue;
                } catch (const std::exception&) {
                    // Unreadable stale file: fall through and re-run.
                }
            }

            TaskResult result = run_one_task(item.instance, rt);
            result.instance_key = item.key;
            results[item.slot] = result;
            if (!result_path.empty()) {
                std::lock_guard<std::mutex> lock(io_mutex);
                std::ofstream out(result_path);
                out << result.to_json().dump(2) << "\n";
            }
        }
    };

    int threads = std::max(1, config.parallelism);
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(threads));
        for (int i = 0; i < threads; ++i) {
            pool.emplace_back(worker);
        }
        for (auto& t : pool) {
            t.join();
        }
    }

    ResultSet set;
    set.config_snapshot = config.to_json();
    set.results = std::move(results);
    return set;
}

SummaryRow summarize(const std::string& mode, const std::string& model,
                     const std::vector<TaskResult>& results) {
    SummaryRow row;
    row.mode = mode;
    row.model = model;
    row.counts = score_counts(results);
    row.can = success_rate(results, Category::CAN);
    row.lex = success_rate(results, Category::LEX);
    row.syn = success_rate(results, Category::SYN);
    row.sem = success_rate(results, Category::SEM);
    row.hlr = success_rate(results, Category::HLR);
    row.avg = success_rate(results);
    row.mean_latency = latency_stats(results).mean;
    return row;
}

std::string format_percent(const std::optional<double>& value) {
    if (!value) {
        return "-";
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f", *value);
    return buf;
}

namespace {

std::string format_latency(double seconds) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", seconds);
    return buf;
}

}  // namespace

std::string render_summary_csv(const SummaryRow& row) {
    std::string out = "mode,model,score_0,score_1,score_2,score_frac,CAN,LEX,SYN,SEM,HLR,AVG,latency_s\n";
    out += row.mode + "," + row.model + "," + std::to_string(row.counts.n0) + "," +
           std::to_string(row.counts.n1) + "," + std::to_string(row.counts.n2) + "," +
           std::to_string(row.counts.n_fractional) + "," + format_percent(row.can) + "," +
           format_percent(row.lex) + "," + format_percent(row.syn) + "," +
           format_percent(row.sem) + "," + format_percent(row.hlr) + "," +
           format_percent(row.avg) + "," + format_latency(row.mean_latency) + "\n";
    return out;
}

std::string render_summary_table(const SummaryRow& row) {
    std::ostringstream out;
    out << std::left << std::setw(6) << "Mode" << std::setw(16) << "Model" << std::right
        << std::setw(5) << "0" << std::setw(5) << "1" << std::setw(5) << "2" << std::setw(6)
        << "frac" << std::setw(8) << "CAN" << std::setw(8) << "LEX" << std::setw(8) << "SYN"
        << std::setw(8) << "SEM" << std::setw(8) << "HLR" << std::setw(8) << "AVG" << std::setw(12)
        << "Latency(s)" << "\n";
    out << std::string(103, '-') << "\n";
    out << std::left << std::setw(6) << row.mode << std::setw(16) << row.model << std::right
        << std::setw(5) << row.counts.n0 << std::setw(5) << row.counts.n1 << std::setw(5)
        << row.counts.n2 << std::setw(6) << row.counts.n_fractional << std::setw(8)
        << format_percent(row.can) << std::setw(8) << format_percent(row.lex) << std::setw(8)
        << format_percent(row.syn) << std::setw(8) << format_percent(row.sem) << std::setw(8)
        << format_percent(row.hlr) << std::setw(8) << format_percent(row.avg) << std::setw(12)
        << format_latency(row.mean_latency) << "\n";
    return out.str();
}

void emit_report(const ResultSet& result_set, const std::string& output_dir,
                 const std::string& format) {
    std::string mode = result_set.config_snapshot.value("mode", "?");
    std::string model = result_set.config_snapshot.value("model", "?");
    SummaryRow row = summarize(mode, model, result_set.results);

    fs::create_directories(output_dir);
    {
        std::ofstream csv(fs::path(output_dir) / "summary.csv");
        if (!csv) {
            throw ConfigError("cannot write report to " + output_dir);
        }
        csv << render_summary_csv(row);
    }
    {
        std::ofstream table(fs::path(output_dir) / "summary.txt");
        table << render_summary_table(row);
    }
    (void)format;
}

ResultSet load_results(const std::string& output_dir) {
    ResultSet set;
    fs::path dir = fs::path(output_dir) / "results";
    if (!fs::is_directory(dir)) {
        throw ConfigError("no results directory under " + output_dir);
    }
    fs::path config_path = fs::path(output_dir) / "run_config.json";
    if (fs::exists(config_path)) {
        std::ifstream in(config_path);
        set.config_snapshot = Json::parse(in);
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    for (const auto& path : files) {
        std::ifstream in(path);
        set.results.push_back(TaskResult::from_json(Json::parse(in)));
    }
    return set;
}

}  // namespace robobench::bench
