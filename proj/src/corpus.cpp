#include "robobench/corpus.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>

#include "robobench/actions.hpp"
#include "robobench/script.hpp"

namespace robobench::bench {

std::optional<Category> category_from_string(const std::string& text) {
    if (text == "CAN") return Category::CAN;
    if (text == "LEX") return Category::LEX;
    if (text == "SYN") return Category::SYN;
    if (text == "SEM") return Category::SEM;
    if (text == "HLR") return Category::HLR;
    return std::nullopt;
}

std::string category_to_string(Category category) {
    switch (category) {
        case Category::CAN: return "CAN";
        case Category::LEX: return "LEX";
        case Category::SYN: return "SYN";
        case Category::SEM: return "SEM";
        case Category::HLR: return "HLR";
    }
    return "CAN";
}

const std::vector<Category>& all_categories() {
    static const std::vector<Category> categories = {Category::CAN, Category::LEX, Category::SYN,
                                                     Category::SEM, Category::HLR};
    return categories;
}

std::string TaskInstance::key() const {
    std::string k = "env" + std::to_string(env_id) + "-task" + std::to_string(task_id) + "-" +
                    category_to_string(category);
    if (category == Category::HLR) {
        k += std::to_string(paraphrase_index);
    }
    return k;
}

const EnvironmentLayout& Corpus::layout_for(int env_id) const {
    for (const auto& layout : layouts) {
        if (layout.env_id == env_id) return layout;
    }
    throw ConfigError("corpus has no layout for environment " + std::to_string(env_id));
}

namespace {

[[noreturn]] void load_fail(const std::string& file, const std::string& detail) {
    throw ConfigError("corpus load error in " + file + ": " + detail);
}

Vec3 parse_position(const Json& value, const std::string& file, const std::string& object_name) {
    if (!value.is_array() || value.size() != 3) {
        load_fail(file, "object \"" + object_name + "\": position must be an array of 3 numbers");
    }
    return {value[0].get<double>(), value[1].get<double>(), value[2].get<double>()};
}

EnvironmentLayout parse_layout(const Json& doc, const std::string& file) {
    EnvironmentLayout layout;
    layout.env_id = doc.at("env_id").get<int>();
    layout.name = doc.value("name", "");
    const Json& objects = doc.at("layout").at("objects");
    if (!objects.is_array() || objects.empty()) {
        load_fail(file, "layout.objects must be a non-empty array");
    }
    for (const Json& obj : objects) {
        LayoutObject out;
        out.name = obj.at("name").get<std::string>();
        std::string kind = obj.at("kind").get<std::string>();
        if (kind == "item") {
            out.kind = ObjectKind::Item;
        } else if (kind == "container") {
            out.kind = ObjectKind::Container;
        } else {
            load_fail(file, "object \"" + out.name + "\": unknown kind \"" + kind + "\"");
        }
        out.position = parse_position(obj.at("position"), file, out.name);
        out.footprint_radius = obj.value("footprint_radius", 0.0);
        if (out.kind == ObjectKind::Container && out.footprint_radius <= 0.0) {
            load_fail(file, "container \"" + out.name + "\" needs a positive footprint_radius");
        }
        out.attributes = obj.value("attributes", Json::object());
        layout.objects.push_back(std::move(out));
    }
    return layout;
}

std::vector<TaskInstance> parse_tasks(const Json& doc, int env_id, const std::string& file) {
    std::vector<TaskInstance> instances;
    const Json& tasks = doc.at("tasks");
    if (!tasks.is_array()) {
        load_fail(file, "tasks must be an array");
    }
    for (const Json& task : tasks) {
        int task_id = task.at("task_id").get<int>();
        bool order_constrained = task.value("order_constrained", false);
        std::vector<std::string> ground_truth;
        for (const Json& line : task.at("ground_truth")) {
            ground_truth.push_back(line.get<std::string>());
        }
        if (ground_truth.empty()) {
            load_fail(file, "task " + std::to_string(task_id) + ": empty ground_truth");
        }
        std::map<Category, int> seen;
        for (const Json& instr : task.at("instructions")) {
            TaskInstance instance;
            instance.env_id = env_id;
            instance.task_id = task_id;
            std::string cat_text = instr.at("category").get<std::string>();
            auto category = category_from_string(cat_text);
            if (!category) {
                load_fail(file, "task " + std::to_string(task_id) + ": unknown category \"" +
                                    cat_text + "\"");
            }
            instance.category = *category;
            instance.paraphrase_index = ++seen[*category];
            instance.instruction = instr.at("text").get<std::string>();
            if (instance.instruction.empty()) {
                load_fail(file, "task " + std::to_string(task_id) + ": empty instruction text");
            }
            instance.ground_truth = ground_truth;
            instance.order_constrained = order_constrained;
            instances.push_back(std::move(instance));
        }
        for (Category c : all_categories()) {
            int expected = c == Category::HLR ? 2 : 1;
            if (seen[c] != expected) {
                load_fail(file, "task " + std::to_string(task_id) + ": expected " +
                                    std::to_string(expected) + " " + category_to_string(c) +
                                    " instruction(s), found " + std::to_string(seen[c]));
            }
        }
    }
    return instances;
}

}  // namespace

Corpus load_corpus(const std::string& directory) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(directory)) {
        throw ConfigError("corpus directory not found: " + directory);
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(directory)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) {
        throw ConfigError("corpus directory has no .json files: " + directory);
    }

    Corpus corpus;
    for (const auto& path : files) {
        std::ifstream in(path);
        Json doc;
        try {
            doc = Json::parse(in);
        } catch (const Json::parse_error& e) {
            load_fail(path.string(), e.what());
        }
        try {
            EnvironmentLayout layout = parse_layout(doc, path.string());
            int env_id = layout.env_id;
            for (const auto& existing : corpus.layouts) {
                if (existing.env_id == env_id) {
                    load_fail(path.string(),
                              "duplicate environment " + std::to_string(env_id));
                }
            }
            corpus.layouts.push_back(std::move(layout));
            auto instances = parse_tasks(doc, env_id, path.string());
            corpus.instances.insert(corpus.instances.end(), instances.begin(), instances.end());
            std::string version = doc.value("version", "");
            if (!version.empty()) {
                corpus.version = version;
            }
        } catch (const Json::exception& e) {
            load_fail(path.string(), e.what());
        }
    }

    // Structural invariants that hold for any well-formed corpus of this
    // shape, checked at load time so downstream code can rely on them.
    for (const auto& instance : corpus.instances) {
        for (const auto& line : instance.ground_truth) {
            auto parsed = script::parse_call_line(line);
            if (auto* error = std::get_if<script::ParseError>(&parsed)) {
                throw ConfigError("corpus ground truth line does not parse (" + instance.key() +
                                  "): " + error->to_string());
            }
        }
    }
    return corpus;
}

Corpus filter(const Corpus& corpus, const CorpusFilter& predicate) {
    Corpus out;
    out.version = corpus.version;
    out.layouts = corpus.layouts;
    for (const auto& instance : corpus.instances) {
        if (predicate.env_id && instance.env_id != *predicate.env_id) continue;
        if (predicate.task_id && instance.task_id != *predicate.task_id) continue;
        if (predicate.category && instance.category != *predicate.category) continue;
        out.instances.push_back(instance);
    }
    return out;
}

ReplayOutcome replay_call_lines(const std::vector<std::string>& lines, int env_id) {
    ReplayOutcome outcome;
    LocalDispatcher dispatcher(World::load_environment(env_id));
    for (size_t i = 0; i < lines.size(); ++i) {
        auto parsed = script::parse_call_line(lines[i]);
        if (auto* error = std::get_if<script::ParseError>(&parsed)) {
            if (outcome.all_ok) {
                outcome.all_ok = false;
                outcome.failed_line = static_cast<int>(i);
                outcome.first_error = "unparseable line: " + error->to_string();
            }
            continue;
        }
        // Each line runs as its own single-statement script so that a failed
        // line never blocks the lines after it.
        script::ActionScript ast;
        ast.statements.push_back({std::nullopt, std::get<script::Expr>(parsed), 1});
        script::ExecutionLog log = script::run_script(ast, dispatcher);
        if (!log.completed() && outcome.all_ok) {
            outcome.all_ok = false;
            outcome.failed_line = static_cast<int>(i);
            outcome.first_error = log.halt_reason;
        }
    }

    const World& world = dispatcher.world();
    for (const auto& [name, obj] : world.objects()) {
        if (obj.kind == ObjectKind::Item) {
            outcome.final_items[name] = {obj.contained_in, obj.pose.position};
        }
    }
    for (const auto& record : world.trace()) {
        if (record.action == "pick" && record.ok) {
            std::string name = record.args.at("object_name").get<std::string>();
            if (outcome.manipulated.insert(name).second) {
                outcome.picked_order.push_back(name);
            }
        }
    }
    return outcome;
}

bool effects_match(const ObjectEffect& a, const ObjectEffect& b, double tolerance) {
    if (a.contained_in != b.contained_in) return false;
    if (a.contained_in.has_value()) {
        // Inside the same container counts as the same effect regardless of
        // the exact drop point.
        return true;
    }
    return a.position.distance_to(b.position) <= tolerance;
}

namespace {

const TaskInstance* find_canonical(const Corpus& corpus, int env_id, int task_id) {
    for (const auto& instance : corpus.instances) {
        if (instance.env_id == env_id && instance.task_id == task_id &&
            instance.category == Category::CAN) {
            return &instance;
        }
    }
    return nullptr;
}

}  // namespace

std::vector<std::string> validate_instance(const TaskInstance& instance, const Corpus& corpus) {
    std::vector<std::string> findings;
    const std::string key = instance.key();

    // Every object named in the ground truth must exist in the environment.
    World world = World::load_environment(instance.env_id);
    for (const auto& line : instance.ground_truth) {
        auto parsed = script::parse_call_line(line);
        if (std::holds_alternative<script::ParseError>(parsed)) {
            findings.push_back(key + ": unparseable ground truth line: " + line);
            continue;
        }
        // Walk the call tree for object_name / reference arguments.
        const script::Expr& call = std::get<script::Expr>(parsed);
        std::vector<const script::Expr*> stack{&call};
        while (!stack.empty()) {
            const script::Expr* expr = stack.back();
            stack.pop_back();
            if (expr->kind == script::Expr::Kind::Call) {
                for (size_t i = 0; i < expr->names.size(); ++i) {
                    const auto& arg_name = expr->names[i];
                    const auto& arg = expr->children[i];
                    if ((arg_name == "object_name" || arg_name == "reference") &&
                        arg.kind == script::Expr::Kind::StringLit) {
                        if (arg.str != "home" && world.find_object(arg.str) == nullptr) {
                            findings.push_back(key + ": ground truth names unknown object \"" +
                                               arg.str + "\"");
                        }
                    }
                }
            }
            for (const auto& child : expr->children) {
                stack.push_back(&child);
            }
        }
    }

    ReplayOutcome replay = replay_call_lines(instance.ground_truth, instance.env_id);
    if (!replay.all_ok) {
        findings.push_back(key + ": ground truth replay failed at line " +
                           std::to_string(replay.failed_line) + ": " + replay.first_error);
        return findings;
    }

    const TaskInstance* canonical = find_canonical(corpus, instance.env_id, instance.task_id);
    if (canonical == nullptr) {
        findings.push_back(key + ": task group has no canonical instance");
        return findings;
    }
    ReplayOutcome canonical_replay =
        replay_call_lines(canonical->ground_truth, canonical->env_id);
    for (const auto& [name, effect] : canonical_replay.final_items) {
        auto it = replay.final_items.find(name);
        if (it == replay.final_items.end() || !effects_match(it->second, effect)) {
            findings.push_back(key + ": final effect of \"" + name +
                               "\" differs from the canonical instance");
        }
    }
    if (instance.order_constrained && replay.picked_order != canonical_replay.picked_order) {
        findings.push_back(key + ": manipulation order differs from the canonical instance");
    }
    return findings;
}

std::vector<std::string> validate_corpus(const Corpus& corpus) {
    std::vector<std::string> findings;

    if (corpus.instances.size() != 54) {
        findings.push_back("expected 54 instances, found " +
                           std::to_string(corpus.instances.size()));
    }
    std::map<Category, int> histogram;
    for (const auto& instance : corpus.instances) {
        ++histogram[instance.category];
    }
    const std::map<Category, int> expected = {{Category::CAN, 9},
                                              {Category::LEX, 9},
                                              {Category::SYN, 9},
                                              {Category::SEM, 9},
                                              {Category::HLR, 18}};
    for (const auto& [category, count] : expected) {
        if (histogram[category] != count) {
            findings.push_back("expected " + std::to_string(count) + " " +
                               category_to_string(category) + " instances, found " +
                               std::to_string(histogram[category]));
        }
    }

    // Layouts must agree with the built-in environments the simulator uses.
    for (const auto& layout : corpus.layouts) {
        const EnvironmentLayout* builtin = nullptr;
        try {
            builtin = &builtin_environment(layout.env_id);
        } catch (const ConfigError&) {
            findings.push_back("corpus declares unknown environment " +
                               std::to_string(layout.env_id));
            continue;
        }
        if (layout.objects.size() != builtin->objects.size()) {
            findings.push_back("environment " + std::to_string(layout.env_id) +
                               ": object count differs from the built-in layout");
            continue;
        }
        for (const auto& obj : layout.objects) {
            const LayoutObject* match = nullptr;
            for (const auto& candidate : builtin->objects) {
                if (candidate.name == obj.name) {
                    match = &candidate;
                    break;
                }
            }
            if (match == nullptr) {
                findings.push_back("environment " + std::to_string(layout.env_id) + ": object \"" +
                                   obj.name + "\" is not in the built-in layout");
                continue;
            }
            if (match->kind != obj.kind || !(match->position == obj.position) ||
                match->footprint_radius != obj.footprint_radius ||
                match->attributes != obj.attributes) {
                findings.push_back("environment " + std::to_string(layout.env_id) + ": object \"" +
                                   obj.name + "\" differs from the built-in layout");
            }
        }

        // Numeric attributes must be pairwise distinct among items so that
        // every superlative or ranked reference resolves to a unique object.
        std::map<std::string, std::map<double, std::string>> values;
        for (const auto& obj : layout.objects) {
            if (obj.kind != ObjectKind::Item) continue;
            for (const auto& attr : obj.attributes.items()) {
                if (!attr.value().is_number()) continue;
                auto& seen = values[attr.key()];
                double v = attr.value().get<double>();
                auto [it, inserted] = seen.emplace(v, obj.name);
                if (!inserted) {
                    findings.push_back("environment " + std::to_string(layout.env_id) +
                                       ": attribute \"" + attr.key() + "\" ties between \"" +
                                       it->second + "\" and \"" + obj.name + "\"");
                }
            }
        }
    }

    // Per-(env, task) composition plus per-instance deep checks.
    std::map<std::pair<int, int>, std::map<Category, int>> composition;
    for (const auto& instance : corpus.instances) {
        ++composition[{instance.env_id, instance.task_id}][instance.category];
        auto instance_findings = validate_instance(instance, corpus);
        findings.insert(findings.end(), instance_findings.begin(), instance_findings.end());
    }
    for (const auto& [group, counts] : composition) {
        for (Category c : all_categories()) {
            int expected_count = c == Category::HLR ? 2 : 1;
            auto it = counts.find(c);
            int actual = it == counts.end() ? 0 : it->second;
            if (actual != expected_count) {
                findings.push_back("env " + std::to_string(group.first) + " task " +
                                   std::to_string(group.second) + ": expected " +
                                   std::to_string(expected_count) + " " + category_to_string(c) +
                                   ", found " + std::to_string(actual));
            }
        }
    }
    return findings;
}

}  // namespace robobench::bench
