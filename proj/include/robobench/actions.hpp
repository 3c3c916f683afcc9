#pragma once

#include <string>
#include <vector>

#include "robobench/llm.hpp"
#include "robobench/world.hpp"

namespace robobench {

// Single source of truth for the eight action signatures. Endpoint routing,
// argument validation, tool schemas, and the code-generation docs all derive
// from this table.

enum class ParamType { String, Pose, Relation };

struct ParamSpec {
    std::string name;
    ParamType type = ParamType::String;
    std::string description;
};

struct ActionSpec {
    std::string name;
    std::string description;
    std::vector<ParamSpec> params;
    std::string returns_doc;
};

const std::vector<ActionSpec>& action_specs();
const ActionSpec* find_action(const std::string& name);

/// JSON-schema parameter object for one action, suitable for a tool schema.
Json action_parameters_schema(const ActionSpec& spec);

/// Tool schemas for all eight actions, for chat requests with tool calling.
std::vector<llm::ToolSchema> build_tool_schemas();
Json tool_schemas_json();

/// Plain-text signature docs (name, parameters, return) for the
/// code-generation prompt.
std::string action_docs_text();

/// Outcome of routing one action request. Schema violations never reach the
/// simulator and leave no trace record; in-domain failures are ordinary
/// ActionResults with ok = false.
struct DispatchOutcome {
    enum class Status { Ok, SchemaError, UnknownAction };
    Status status = Status::Ok;
    ActionResult result;  // valid when status == Ok
    std::string error;    // valid otherwise

    bool ok() const { return status == Status::Ok; }
    /// {"ok": ..., "message": ...} envelope in all cases, for feedback text.
    Json to_json() const;
};

/// Validates `args` against the action's declared parameters and invokes the
/// simulator. The one mutation point for a World behind a dispatch surface.
DispatchOutcome dispatch_action(World& world, const std::string& action, const Json& args);

/// Transport failure while reaching a remote action service.
struct DispatchTransportError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Uniform action surface handed to executors. The HTTP client and the
/// in-process wrapper both implement it.
class ActionDispatcher {
public:
    virtual ~ActionDispatcher() = default;
    virtual DispatchOutcome dispatch(const std::string& action, const Json& args) = 0;
    virtual std::vector<std::string> trace_lines() = 0;
};

/// In-process dispatcher owning its World.
class LocalDispatcher : public ActionDispatcher {
public:
    explicit LocalDispatcher(World world) : world_(std::move(world)) {}

    DispatchOutcome dispatch(const std::string& action, const Json& args) override {
        return dispatch_action(world_, action, args);
    }
    std::vector<std::string> trace_lines() override { return world_.trace_lines(); }

    World& world() { return world_; }
    const World& world() const { return world_; }

private:
    World world_;
};

}  // namespace robobench
