#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

namespace robobench {

// Order-preserving JSON is used everywhere so that serialized argument maps
// and reports render deterministically.
using Json = nlohmann::ordered_json;

/// Bad configuration supplied by the caller (unknown environment id,
/// unreadable corpus file, missing prompt asset, ...).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A JSON payload that does not match the declared schema of an action or
/// endpoint. Distinct from in-domain action failures, which are ordinary
/// ActionResult values with ok = false.
struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace robobench
