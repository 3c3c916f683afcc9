#include <iostream>

#include <CLI11.hpp>

#include "robobench/runner.hpp"
#include "robobench/server.hpp"

using namespace robobench;

namespace {

int cmd_run(const std::string& mode, const std::string& model, const std::string& judges,
            const std::string& corpus, const std::string& prompts, const std::string& out,
            int env, int task, const std::string& category, int parallel, int repeat,
            const std::string& seed_tag, const std::string& api_url, int max_steps,
            double temperature) {
    bench::RunConfig config;
    config.mode = mode == "tap" ? bench::Mode::Tap : bench::Mode::Cap;
    config.model = bench::parse_model_spec(model);
    config.judges = bench::parse_judge_spec(judges);
    config.corpus_dir = corpus;
    config.prompts_dir = prompts;
    config.output_dir = out;
    if (env > 0) config.env_filter = env;
    if (task > 0) config.task_filter = task;
    if (!category.empty()) {
        auto parsed = bench::category_from_string(category);
        if (!parsed) {
            std::cerr << "unknown category " << category << " (use CAN|LEX|SYN|SEM|HLR)\n";
            return 2;
        }
        config.category_filter = parsed;
    }
    config.parallelism = parallel;
    config.repeat = repeat;
    config.seed_tag = seed_tag;
    config.api_url = api_url;
    config.temperature = temperature;
    config.planner.max_steps = max_steps;

    bench::ResultSet results = bench::run_benchmark(config);
    bench::emit_report(results, out);

    bench::SummaryRow row =
        bench::summarize(bench::mode_to_string(config.mode), config.model.label, results.results);
    std::cout << bench::render_summary_table(row);
    std::cout << "\n" << results.results.size() << " task(s) complete; results in " << out
              << "/results\n";
    return 0;
}

int cmd_corpus_validate(const std::string& corpus_dir) {
    bench::Corpus corpus = bench::load_corpus(corpus_dir);
    auto findings = bench::validate_corpus(corpus);
    std::cout << "loaded " << corpus.instances.size() << " instances from " << corpus_dir << "\n";
    if (findings.empty()) {
        std::cout << "corpus OK\n";
        return 0;
    }
    for (const auto& finding : findings) {
        std::cout << "FINDING: " << finding << "\n";
    }
    return 1;
}

int cmd_serve(const std::string& bind, const std::string& corpus_dir, int default_env) {
    // The corpus directory doubles as the layout source; loading it verifies
    // the layouts agree with the simulator before serving.
    if (!corpus_dir.empty()) {
        bench::load_corpus(corpus_dir);
    }
    ServerConfig config;
    auto colon = bind.rfind(':');
    if (colon == std::string::npos) {
        std::cerr << "bind address must be host:port\n";
        return 2;
    }
    config.host = bind.substr(0, colon);
    config.port = std::stoi(bind.substr(colon + 1));
    config.default_env = default_env;
    ApiServer server(config);
    std::cout << "serving on http://" << config.host << ":" << config.port << "\n";
    server.run_blocking();
    return 0;
}

int cmd_report(const std::string& results_dir, const std::string& format) {
    bench::ResultSet set = bench::load_results(results_dir);
    std::string mode = set.config_snapshot.value("mode", "?");
    std::string model = set.config_snapshot.value("model", "?");
    bench::SummaryRow row = bench::summarize(mode, model, set.results);
    if (format == "csv") {
        std::cout << bench::render_summary_csv(row);
    } else {
        std::cout << bench::render_summary_table(row);
    }
    bench::emit_report(set, results_dir, format);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"robobench: agentic pick-and-place benchmark harness"};
    app.set_config("--config", "", "Read options from an INI file ([run] section for run flags)");
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "Run the benchmark for one (mode, model) configuration");
    run->configurable();
    std::string mode = "cap", model = "mock", judges = "oracle";
    std::string corpus = "data/corpus", prompts = "prompts", out = "out";
    std::string category, seed_tag, api_url;
    int env = 0, task = 0, parallel = 1, repeat = 1, max_steps = 20;
    double temperature = 0.0;
    run->add_option("--mode", mode, "Executor mode: cap or tap")
        ->check(CLI::IsMember({"cap", "tap"}));
    run->add_option("--model", model,
                    "Model spec: \"mock\" or url=...,model=...[,key_env=...][,timeout=...]");
    run->add_option("--judges", judges, "\"oracle\" or 1-3 semicolon-separated model specs");
    run->add_option("--corpus", corpus, "Corpus directory");
    run->add_option("--prompts", prompts, "Prompt asset directory");
    run->add_option("--out", out, "Output directory")->required();
    run->add_option("--env", env, "Filter: environment id");
    run->add_option("--task", task, "Filter: task id");
    run->add_option("--category", category, "Filter: CAN|LEX|SYN|SEM|HLR");
    run->add_option("--parallel", parallel, "Parallel task degree")->check(CLI::PositiveNumber);
    run->add_option("--repeat", repeat, "Repetitions per instruction")->check(CLI::PositiveNumber);
    run->add_option("--seed-tag", seed_tag, "Label recorded in the config snapshot");
    run->add_option("--api", api_url, "Use a remote action server instead of in-process worlds");
    run->add_option("--max-steps", max_steps, "Planner step budget")->check(CLI::PositiveNumber);
    run->add_option("--temperature", temperature, "Planner/executor sampling temperature")
        ->check(CLI::NonNegativeNumber);

    // corpus validate
    auto* corpus_cmd = app.add_subcommand("corpus", "Corpus utilities");
    auto* validate = corpus_cmd->add_subcommand("validate", "Validate the shipped corpus");
    std::string validate_dir = "data/corpus";
    validate->add_option("--corpus", validate_dir, "Corpus directory");

    // serve
    auto* serve = app.add_subcommand("serve", "Serve the action API over HTTP");
    std::string bind = "127.0.0.1:8080";
    std::string serve_corpus = "data/corpus";
    int default_env = 1;
    serve->add_option("--bind", bind, "host:port to listen on");
    serve->add_option("--corpus", serve_corpus, "Corpus directory (layout source)");
    serve->add_option("--default-env", default_env, "Environment of the default session")
        ->check(CLI::Range(1, 3));

    // report
    auto* report = app.add_subcommand("report", "Summarize a results directory");
    std::string results_dir, format = "table";
    report->add_option("results_dir", results_dir, "Directory produced by run")->required();
    report->add_option("--format", format, "csv or table")
        ->check(CLI::IsMember({"csv", "table"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            return cmd_run(mode, model, judges, corpus, prompts, out, env, task, category,
                           parallel, repeat, seed_tag, api_url, max_steps, temperature);
        }
        if (corpus_cmd->parsed() && validate->parsed()) {
            return cmd_corpus_validate(validate_dir);
        }
        if (serve->parsed()) {
            return cmd_serve(bind, serve_corpus, default_env);
        }
        if (report->parsed()) {
            return cmd_report(results_dir, format);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
