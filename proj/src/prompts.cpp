#include "robobench/prompts.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace robobench {

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read prompt file " + path.string());
    }
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

}  // namespace

PromptLibrary PromptLibrary::load(const std::string& directory) {
    std::filesystem::path dir(directory);
    if (!std::filesystem::is_directory(dir)) {
        throw ConfigError("prompt directory not found: " + directory);
    }
    PromptLibrary lib;
    lib.planner_system = read_file(dir / "planner_system.txt");
    lib.executor_tap_system = read_file(dir / "executor_tap_system.txt");
    lib.executor_cap_system = read_file(dir / "executor_cap_system.txt");
    lib.judge_system = read_file(dir / "judge_system.txt");
    return lib;
}

std::string substitute_placeholder(std::string text, const std::string& key,
                                   const std::string& value) {
    const std::string needle = "{{" + key + "}}";
    size_t pos = 0;
    while ((pos = text.find(needle, pos)) != std::string::npos) {
        text.replace(pos, needle.size(), value);
        pos += value.size();
    }
    return text;
}

}  // namespace robobench
