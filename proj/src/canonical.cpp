#include "robobench/canonical.hpp"

#include <cmath>
#include <cstdio>

namespace robobench {

std::string format_number(double value) {
    if (!std::isfinite(value)) {
        return "0";
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", value);
    std::string s(buf);
    while (!s.empty() && s.back() == '0') {
        s.pop_back();
    }
    if (!s.empty() && s.back() == '.') {
        s.pop_back();
    }
    if (s == "-0" || s.empty()) {
        s = "0";
    }
    return s;
}

namespace {

std::string quote_string(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default: out += c;
        }
    }
    out += '"';
    return out;
}

}  // namespace

std::string render_value(const Json& value) {
    switch (value.type()) {
        case Json::value_t::string:
            return quote_string(value.get<std::string>());
        case Json::value_t::number_integer:
        case Json::value_t::number_unsigned:
        case Json::value_t::number_float:
            return format_number(value.get<double>());
        case Json::value_t::boolean:
            return value.get<bool>() ? "true" : "false";
        case Json::value_t::array: {
            std::string out = "[";
            bool first = true;
            for (const auto& item : value) {
                if (!first) out += ", ";
                first = false;
                out += render_value(item);
            }
            return out + "]";
        }
        case Json::value_t::object: {
            std::string out = "{";
            bool first = true;
            for (const auto& item : value.items()) {
                if (!first) out += ", ";
                first = false;
                out += quote_string(item.key()) + ": " + render_value(item.value());
            }
            return out + "}";
        }
        default:
            return "null";
    }
}

std::string render_call(const std::string& action, const Json& args) {
    std::string out = action + "(";
    bool first = true;
    if (args.is_object()) {
        for (const auto& item : args.items()) {
            if (!first) out += ", ";
            first = false;
            out += item.key() + "=" + render_value(item.value());
        }
    }
    return out + ")";
}

std::string render_trace_line(const std::string& action, const Json& args, bool ok) {
    return render_call(action, args) + (ok ? " -> ok" : " -> fail");
}

SplitTraceLine split_trace_line(const std::string& line) {
    SplitTraceLine result;
    std::string text = line;
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
        text.pop_back();
    }
    auto try_suffix = [&](const std::string& suffix, bool flag) {
        if (text.size() >= suffix.size() &&
            text.compare(text.size() - suffix.size(), suffix.size(), suffix) == 0) {
            result.ok = flag;
            text.erase(text.size() - suffix.size());
            while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) {
                text.pop_back();
            }
            return true;
        }
        return false;
    };
    if (!try_suffix("-> ok", true)) {
        try_suffix("-> fail", false);
    }
    result.call_text = text;
    return result;
}

}  // namespace robobench
