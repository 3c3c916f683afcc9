#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "robobench/world.hpp"

namespace robobench::bench {

enum class Category { CAN, LEX, SYN, SEM, HLR };

std::optional<Category> category_from_string(const std::string& text);
std::string category_to_string(Category category);
const std::vector<Category>& all_categories();

struct TaskInstance {
    int env_id = 0;
    int task_id = 0;
    Category category = Category::CAN;
    int paraphrase_index = 1;  // 1-based within the category (HLR has two)
    std::string instruction;
    std::vector<std::string> ground_truth;  // canonical call lines, no -> suffix
    bool order_constrained = false;

    /// Stable identifier, e.g. "env3-task1-HLR2".
    std::string key() const;
};

struct Corpus {
    std::string version;
    std::vector<EnvironmentLayout> layouts;
    std::vector<TaskInstance> instances;

    const EnvironmentLayout& layout_for(int env_id) const;  // throws ConfigError
};

/// Loads and schema-checks the corpus from a directory of env*.json files.
/// Violations of the structural invariants (instance counts, category
/// composition, unparseable ground truth) raise ConfigError naming the file
/// and field.
Corpus load_corpus(const std::string& directory);

struct CorpusFilter {
    std::optional<int> env_id;
    std::optional<int> task_id;
    std::optional<Category> category;
};

Corpus filter(const Corpus& corpus, const CorpusFilter& predicate);

/// Result of replaying canonical call lines on a fresh world. Failed lines
/// do not stop the replay; the final object states reflect everything that
/// succeeded.
struct ObjectEffect {
    std::optional<std::string> contained_in;
    Vec3 position;
};

struct ReplayOutcome {
    bool all_ok = true;
    int failed_line = -1;  // 0-based index of the first failing line
    std::string first_error;
    std::map<std::string, ObjectEffect> final_items;  // item-kind objects only
    std::vector<std::string> picked_order;            // first successful pick per object
    std::set<std::string> manipulated;                // objects successfully picked at least once
};

ReplayOutcome replay_call_lines(const std::vector<std::string>& lines, int env_id);

bool effects_match(const ObjectEffect& a, const ObjectEffect& b, double tolerance = 1e-6);

/// Deep checks on one instance: the ground truth replays all-ok and produces
/// the same object-level effect as the canonical instance of its task group.
/// Returns human-readable findings; empty means clean.
std::vector<std::string> validate_instance(const TaskInstance& instance, const Corpus& corpus);

/// Full corpus validation: structural invariants, per-instance replay,
/// cross-paraphrase effect equivalence, attribute-table distinctness, and
/// layout agreement with the built-in environments.
std::vector<std::string> validate_corpus(const Corpus& corpus);

}  // namespace robobench::bench
