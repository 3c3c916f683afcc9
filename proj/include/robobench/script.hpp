#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "robobench/actions.hpp"
#include "robobench/common.hpp"

namespace robobench::script {

// Restricted call language that code-generation executors emit. Closed by
// construction: the only callable functions are the eight actions, there are
// no loops, branches, arithmetic, or user-defined functions, and variables
// must be assigned before use.
//
//   script      := statement*
//   statement   := IDENT "=" expr NEWLINE | expr NEWLINE
//   expr        := call | literal | IDENT | expr "." IDENT | expr "[" (STRING|INT) "]"
//   call        := ACTION "(" [arg {"," arg}] ")"
//   arg         := IDENT "=" expr
//   literal     := STRING | NUMBER | "[" [expr {"," expr}] "]"
//                | "{" [STRING ":" expr {"," STRING ":" expr}] "}"
//
// `#` starts a comment running to end of line. Strings are double-quoted
// with \" \\ \n \t \r escapes. Newlines inside open brackets do not
// terminate a statement.

struct Expr {
    enum class Kind {
        StringLit,
        NumberLit,
        ListLit,
        RecordLit,
        Variable,
        Member,  // children[0] . str
        Index,   // children[0] [ str or int_value ]
        Call,    // str = action name, names/children = keyword args
    };

    Kind kind = Kind::StringLit;
    std::string str;                 // string value / variable / field / action / string key
    double number = 0.0;             // NumberLit value, Index int key
    bool int_key = false;            // Index: true when the key is an integer
    std::vector<std::string> names;  // RecordLit keys / Call argument names
    std::vector<Expr> children;

    static Expr string_lit(std::string value);
    static Expr number_lit(double value);
    static Expr variable(std::string name);
};

struct Statement {
    std::optional<std::string> target;  // assignment target, absent for bare expressions
    Expr value;
    int line = 0;
};

struct ActionScript {
    std::vector<Statement> statements;
};

struct ParseError {
    int line = 0;    // 1-based
    int column = 0;  // 1-based
    std::string message;
    std::string token;  // offending token text, possibly empty at end of input

    std::string to_string() const;
};

using ParseResult = std::variant<ActionScript, ParseError>;

/// Total: every input produces exactly one of AST or ParseError.
ParseResult parse_script(const std::string& source);

/// Parses a single canonical call line (an expr that must be a call).
/// Accepts an optional trailing " -> ok|fail" marker.
std::variant<Expr, ParseError> parse_call_line(const std::string& line);

/// Canonical source rendering; parse(print(ast)) is structurally identical
/// to ast.
std::string print_expr(const Expr& expr);
std::string print_script(const ActionScript& ast);

bool structurally_equal(const Expr& a, const Expr& b);
bool structurally_equal(const ActionScript& a, const ActionScript& b);

struct LogEntry {
    int statement_index = 0;  // 0-based enclosing statement
    std::string action;
    Json args;  // normalized argument values
    std::string result_summary;
    bool ok = false;
};

/// Log of all action executions. Nested calls produce their own entries, in
/// evaluation order, so the ok-flagged entries mirror the simulator trace
/// exactly. halted_at is the statement where a failure or evaluation error
/// stopped the run.
struct ExecutionLog {
    std::vector<LogEntry> entries;
    std::optional<int> halted_at;
    std::optional<int> halted_line;  // 1-based source line, for observations
    std::string halt_reason;

    bool completed() const { return !halted_at.has_value(); }
};

/// Executes statements in order against the dispatcher. Variables bind the
/// data payloads of action results; member and index expressions read into
/// those payloads. The first failed action or evaluation error halts the
/// run; statements after the halt are not executed.
ExecutionLog run_script(const ActionScript& ast, ActionDispatcher& actions);

}  // namespace robobench::script
