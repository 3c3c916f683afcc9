#include "robobench/script.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <map>
#include <set>

#include "robobench/canonical.hpp"

namespace robobench::script {

namespace {

enum class TokenKind {
    Ident,
    String,
    Number,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Comma,
    Dot,
    Colon,
    Equals,
    Newline,
    End,
};

struct Token {
    TokenKind kind = TokenKind::End;
    std::string text;
    double number = 0.0;
    int line = 1;
    int column = 1;
};

struct ParseFailure {
    ParseError error;
};

[[noreturn]] void fail(const Token& at, const std::string& message) {
    throw ParseFailure{ParseError{at.line, at.column, message, at.text}};
}

const std::set<std::string>& reserved_keywords() {
    static const std::set<std::string> keywords = {
        "while", "for",   "if",    "else", "elif",   "def",  "import", "from",
        "return", "lambda", "class", "try",  "except", "with", "pass",   "break",
        "continue", "and", "or",    "not",  "in",     "is",   "True",   "False",
        "None",   "global", "yield", "del",  "assert", "raise"};
    return keywords;
}

bool is_action_name(const std::string& name) {
    return find_action(name) != nullptr;
}

class Lexer {
public:
    explicit Lexer(const std::string& source) : src_(source) {}

    std::vector<Token> tokenize() {
        std::vector<Token> tokens;
        int depth = 0;
        while (true) {
            skip_spaces_and_comments();
            Token tok;
            tok.line = line_;
            tok.column = column_;
            if (pos_ >= src_.size()) {
                tok.kind = TokenKind::End;
                tokens.push_back(tok);
                return tokens;
            }
            char c = src_[pos_];
            if (c == '\n') {
                advance();
                if (depth == 0) {
                    if (!tokens.empty() && tokens.back().kind != TokenKind::Newline) {
                        tok.kind = TokenKind::Newline;
                        tokens.push_back(tok);
                    }
                }
                continue;
            }
            if (c == '"') {
                tok.kind = TokenKind::String;
                tok.text = lex_string(tok);
                tokens.push_back(tok);
                continue;
            }
            if (std::isdigit(static_cast<unsigned char>(c)) ||
                (c == '-' && pos_ + 1 < src_.size() &&
                 std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
                tok.kind = TokenKind::Number;
                tok.number = lex_number(tok);
                tokens.push_back(tok);
                continue;
            }
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                tok.kind = TokenKind::Ident;
                while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                                              src_[pos_] == '_')) {
                    tok.text += src_[pos_];
                    advance();
                }
                tokens.push_back(tok);
                continue;
            }
            tok.text = std::string(1, c);
            switch (c) {
                case '(': tok.kind = TokenKind::LParen; ++depth; break;
                case ')': tok.kind = TokenKind::RParen; depth = std::max(0, depth - 1); break;
                case '[': tok.kind = TokenKind::LBracket; ++depth; break;
                case ']': tok.kind = TokenKind::RBracket; depth = std::max(0, depth - 1); break;
                case '{': tok.kind = TokenKind::LBrace; ++depth; break;
                case '}': tok.kind = TokenKind::RBrace; depth = std::max(0, depth - 1); break;
                case ',': tok.kind = TokenKind::Comma; break;
                case '.': tok.kind = TokenKind::Dot; break;
                case ':': tok.kind = TokenKind::Colon; break;
                case '=': tok.kind = TokenKind::Equals; break;
                default:
                    fail(tok, std::string("unexpected character '") + c + "'");
            }
            advance();
            tokens.push_back(tok);
        }
    }

private:
    void advance() {
        if (pos_ < src_.size()) {
            if (src_[pos_] == '\n') {
                ++line_;
                column_ = 1;
            } else {
                ++column_;
            }
            ++pos_;
        }
    }

    void skip_spaces_and_comments() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == ' ' || c == '\t' || c == '\r') {
                advance();
            } else if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') {
                    advance();
                }
            } else {
                break;
            }
        }
    }

    std::string lex_string(const Token& start) {
        advance();  // opening quote
        std::string value;
        while (true) {
            if (pos_ >= src_.size() || src_[pos_] == '\n') {
                fail(start, "unterminated string literal");
            }
            char c = src_[pos_];
            if (c == '"') {
                advance();
                return value;
            }
            if (c == '\\') {
                advance();
                if (pos_ >= src_.size()) {
                    fail(start, "unterminated string escape");
                }
                char esc = src_[pos_];
                switch (esc) {
                    case '"': value += '"'; break;
                    case '\\': value += '\\'; break;
                    case 'n': value += '\n'; break;
                    case 't': value += '\t'; break;
                    case 'r': value += '\r'; break;
                    default:
                        fail(start, std::string("unsupported string escape '\\") + esc + "'");
                }
                advance();
                continue;
            }
            value += c;
            advance();
        }
    }

    double lex_number(Token& tok) {
        size_t start = pos_;
        if (src_[pos_] == '-') advance();
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
        if (pos_ < src_.size() && src_[pos_] == '.') {
            advance();
            if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                fail(tok, "malformed number literal");
            }
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                advance();
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            advance();
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) advance();
            if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                fail(tok, "malformed number exponent");
            }
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                advance();
        }
        tok.text = src_.substr(start, pos_ - start);
        return std::strtod(tok.text.c_str(), nullptr);
    }

    const std::string& src_;
    size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
};

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    ActionScript parse_program() {
        ActionScript ast;
        skip_newlines();
        while (!at(TokenKind::End)) {
            ast.statements.push_back(parse_statement());
            if (!at(TokenKind::End)) {
                expect(TokenKind::Newline, "expected end of statement");
            }
            skip_newlines();
        }
        return ast;
    }

    Expr parse_single_call() {
        skip_newlines();
        Expr expr = parse_expr();
        skip_newlines();
        if (!at(TokenKind::End)) {
            fail(peek(), "unexpected trailing input after call");
        }
        if (expr.kind != Expr::Kind::Call) {
            fail(peek(), "expected an action call");
        }
        return expr;
    }

private:
    const Token& peek(size_t ahead = 0) const {
        size_t i = pos_ + ahead;
        return i < tokens_.size() ? tokens_[i] : tokens_.back();
    }
    bool at(TokenKind kind) const { return peek().kind == kind; }
    Token consume() { return tokens_[std::min(pos_++, tokens_.size() - 1)]; }
    Token expect(TokenKind kind, const std::string& message) {
        if (!at(kind)) fail(peek(), message);
        return consume();
    }
    void skip_newlines() {
        while (at(TokenKind::Newline)) consume();
    }

    Statement parse_statement() {
        Statement stmt;
        stmt.line = peek().line;
        if (at(TokenKind::Ident) && peek(1).kind == TokenKind::Equals) {
            Token name = consume();
            check_not_reserved(name);
            if (is_action_name(name.text)) {
                fail(name, "cannot assign to action name \"" + name.text + "\"");
            }
            consume();  // '='
            stmt.target = name.text;
            stmt.value = parse_expr();
            defined_.insert(name.text);
            return stmt;
        }
        stmt.value = parse_expr();
        return stmt;
    }

    void check_not_reserved(const Token& tok) {
        if (reserved_keywords().count(tok.text) != 0) {
            fail(tok, "keyword \"" + tok.text + "\" is not part of the action-script language");
        }
    }

    Expr parse_expr() {
        Expr expr = parse_primary();
        while (true) {
            if (at(TokenKind::Dot)) {
                consume();
                Token field = expect(TokenKind::Ident, "expected field name after '.'");
                Expr member;
                member.kind = Expr::Kind::Member;
                member.str = field.text;
                member.children.push_back(std::move(expr));
                expr = std::move(member);
            } else if (at(TokenKind::LBracket)) {
                consume();
                Expr index;
                index.kind = Expr::Kind::Index;
                if (at(TokenKind::String)) {
                    Token key = consume();
                    index.str = key.text;
                    index.int_key = false;
                } else if (at(TokenKind::Number)) {
                    Token key = consume();
                    double v = key.number;
                    if (v < 0 || v != std::floor(v)) {
                        fail(key, "index must be a non-negative integer");
                    }
                    index.number = v;
                    index.int_key = true;
                } else {
                    fail(peek(), "expected a string or integer index");
                }
                expect(TokenKind::RBracket, "expected ']'");
                index.children.push_back(std::move(expr));
                expr = std::move(index);
            } else {
                return expr;
            }
        }
    }

    Expr parse_primary() {
        const Token& tok = peek();
        switch (tok.kind) {
            case TokenKind::String: {
                Token t = consume();
                return Expr::string_lit(t.text);
            }
            case TokenKind::Number: {
                Token t = consume();
                return Expr::number_lit(t.number);
            }
            case TokenKind::LBracket: return parse_list();
            case TokenKind::LBrace: return parse_record();
            case TokenKind::Ident: return parse_ident();
            default:
                fail(tok, "expected an expression");
        }
    }

    Expr parse_ident() {
        Token name = consume();
        check_not_reserved(name);
        bool called = at(TokenKind::LParen);
        if (is_action_name(name.text)) {
            if (!called) {
                fail(name, "action name \"" + name.text + "\" must be called");
            }
            return parse_call(name);
        }
        if (called) {
            fail(name, "unknown function \"" + name.text +
                           "\" (only the predefined actions may be called)");
        }
        if (defined_.count(name.text) == 0) {
            fail(name, "undefined variable \"" + name.text + "\"");
        }
        return Expr::variable(name.text);
    }

    Expr parse_call(const Token& name) {
        Expr call;
        call.kind = Expr::Kind::Call;
        call.str = name.text;
        expect(TokenKind::LParen, "expected '('");
        if (!at(TokenKind::RParen)) {
            while (true) {
                Token arg_name = expect(TokenKind::Ident, "expected a keyword argument name");
                check_not_reserved(arg_name);
                if (!at(TokenKind::Equals)) {
                    fail(peek(), "action arguments must be keyword arguments (name=value)");
                }
                consume();
                call.names.push_back(arg_name.text);
                call.children.push_back(parse_expr());
                if (at(TokenKind::Comma)) {
                    consume();
                    continue;
                }
                break;
            }
        }
        expect(TokenKind::RParen, "expected ')'");
        return call;
    }

    Expr parse_list() {
        consume();  // '['
        Expr list;
        list.kind = Expr::Kind::ListLit;
        if (!at(TokenKind::RBracket)) {
            while (true) {
                list.children.push_back(parse_expr());
                if (at(TokenKind::Comma)) {
                    consume();
                    continue;
                }
                break;
            }
        }
        expect(TokenKind::RBracket, "expected ']'");
        return list;
    }

    Expr parse_record() {
        consume();  // '{'
        Expr rec;
        rec.kind = Expr::Kind::RecordLit;
        if (!at(TokenKind::RBrace)) {
            while (true) {
                Token key = expect(TokenKind::String, "record keys must be string literals");
                expect(TokenKind::Colon, "expected ':' after record key");
                rec.names.push_back(key.text);
                rec.children.push_back(parse_expr());
                if (at(TokenKind::Comma)) {
                    consume();
                    continue;
                }
                break;
            }
        }
        expect(TokenKind::RBrace, "expected '}'");
        return rec;
    }

    std::vector<Token> tokens_;
    size_t pos_ = 0;
    std::set<std::string> defined_;
};

std::string print_number(double value) {
    if (value == std::floor(value) && std::abs(value) < 1e15) {
        return std::to_string(static_cast<long long>(value));
    }
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    (void)ec;
    return std::string(buf, end);
}

std::string quote(const std::string& s) {
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
    return out + "\"";
}

}  // namespace

Expr Expr::string_lit(std::string value) {
    Expr e;
    e.kind = Kind::StringLit;
    e.str = std::move(value);
    return e;
}

Expr Expr::number_lit(double value) {
    Expr e;
    e.kind = Kind::NumberLit;
    e.number = value;
    return e;
}

Expr Expr::variable(std::string name) {
    Expr e;
    e.kind = Kind::Variable;
    e.str = std::move(name);
    return e;
}

std::string ParseError::to_string() const {
    std::string out =
        "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message;
    if (!token.empty()) {
        out += " (near \"" + token + "\")";
    }
    return out;
}

ParseResult parse_script(const std::string& source) {
    try {
        Lexer lexer(source);
        Parser parser(lexer.tokenize());
        return parser.parse_program();
    } catch (const ParseFailure& failure) {
        return failure.error;
    }
}

std::variant<Expr, ParseError> parse_call_line(const std::string& line) {
    SplitTraceLine split = split_trace_line(line);
    try {
        Lexer lexer(split.call_text);
        Parser parser(lexer.tokenize());
        return parser.parse_single_call();
    } catch (const ParseFailure& failure) {
        return failure.error;
    }
}

std::string print_expr(const Expr& expr) {
    switch (expr.kind) {
        case Expr::Kind::StringLit: return quote(expr.str);
        case Expr::Kind::NumberLit: return print_number(expr.number);
        case Expr::Kind::Variable: return expr.str;
        case Expr::Kind::Member: return print_expr(expr.children[0]) + "." + expr.str;
        case Expr::Kind::Index:
            return print_expr(expr.children[0]) + "[" +
                   (expr.int_key ? print_number(expr.number) : quote(expr.str)) + "]";
        case Expr::Kind::ListLit: {
            std::string out = "[";
            for (size_t i = 0; i < expr.children.size(); ++i) {
                if (i > 0) out += ", ";
                out += print_expr(expr.children[i]);
            }
            return out + "]";
        }
        case Expr::Kind::RecordLit: {
            std::string out = "{";
            for (size_t i = 0; i < expr.children.size(); ++i) {
                if (i > 0) out += ", ";
                out += quote(expr.names[i]) + ": " + print_expr(expr.children[i]);
            }
            return out + "}";
        }
        case Expr::Kind::Call: {
            std::string out = expr.str + "(";
            for (size_t i = 0; i < expr.children.size(); ++i) {
                if (i > 0) out += ", ";
                out += expr.names[i] + "=" + print_expr(expr.children[i]);
            }
            return out + ")";
        }
    }
    return "";
}

std::string print_script(const ActionScript& ast) {
    std::string out;
    for (const auto& stmt : ast.statements) {
        if (stmt.target) {
            out += *stmt.target + " = ";
        }
        out += print_expr(stmt.value) + "\n";
    }
    return out;
}

bool structurally_equal(const Expr& a, const Expr& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Expr::Kind::StringLit:
        case Expr::Kind::Variable:
            if (a.str != b.str) return false;
            break;
        case Expr::Kind::NumberLit:
            if (a.number != b.number) return false;
            break;
        case Expr::Kind::Member:
            if (a.str != b.str) return false;
            break;
        case Expr::Kind::Index:
            if (a.int_key != b.int_key) return false;
            if (a.int_key ? a.number != b.number : a.str != b.str) return false;
            break;
        case Expr::Kind::ListLit: break;
        case Expr::Kind::RecordLit:
        case Expr::Kind::Call:
            if (a.str != b.str || a.names != b.names) return false;
            break;
    }
    if (a.children.size() != b.children.size()) return false;
    for (size_t i = 0; i < a.children.size(); ++i) {
        if (!structurally_equal(a.children[i], b.children[i])) return false;
    }
    return true;
}

bool structurally_equal(const ActionScript& a, const ActionScript& b) {
    if (a.statements.size() != b.statements.size()) return false;
    for (size_t i = 0; i < a.statements.size(); ++i) {
        if (a.statements[i].target != b.statements[i].target) return false;
        if (!structurally_equal(a.statements[i].value, b.statements[i].value)) return false;
    }
    return true;
}

namespace {

struct Halt {
    std::string reason;
};

class Interpreter {
public:
    Interpreter(ActionDispatcher& actions, ExecutionLog& log) : actions_(actions), log_(log) {}

    Json eval(const Expr& expr, int stmt_index) {
        switch (expr.kind) {
            case Expr::Kind::StringLit: return Json(expr.str);
            case Expr::Kind::NumberLit: return Json(expr.number);
            case Expr::Kind::Variable: return env_.at(expr.str);
            case Expr::Kind::ListLit: {
                Json list = Json::array();
                for (const auto& child : expr.children) {
                    list.push_back(eval(child, stmt_index));
                }
                return list;
            }
            case Expr::Kind::RecordLit: {
                Json rec = Json::object();
                for (size_t i = 0; i < expr.children.size(); ++i) {
                    rec[expr.names[i]] = eval(expr.children[i], stmt_index);
                }
                return rec;
            }
            case Expr::Kind::Member: {
                Json base = eval(expr.children[0], stmt_index);
                if (!base.is_object() || !base.contains(expr.str)) {
                    throw Halt{"no field \"" + expr.str + "\" on " + value_kind(base)};
                }
                return base[expr.str];
            }
            case Expr::Kind::Index: {
                Json base = eval(expr.children[0], stmt_index);
                if (expr.int_key) {
                    auto idx = static_cast<size_t>(expr.number);
                    if (!base.is_array() || idx >= base.size()) {
                        throw Halt{"index " + std::to_string(static_cast<long long>(expr.number)) +
                                   " out of range on " + value_kind(base)};
                    }
                    return base[idx];
                }
                if (!base.is_object() || !base.contains(expr.str)) {
                    throw Halt{"no key \"" + expr.str + "\" on " + value_kind(base)};
                }
                return base[expr.str];
            }
            case Expr::Kind::Call: {
                Json args = Json::object();
                for (size_t i = 0; i < expr.children.size(); ++i) {
                    args[expr.names[i]] = eval(expr.children[i], stmt_index);
                }
                DispatchOutcome outcome = actions_.dispatch(expr.str, args);
                if (outcome.status != DispatchOutcome::Status::Ok) {
                    throw Halt{outcome.error};
                }
                LogEntry entry;
                entry.statement_index = stmt_index;
                entry.action = expr.str;
                entry.args = std::move(args);
                entry.result_summary = outcome.result.message;
                entry.ok = outcome.result.ok;
                log_.entries.push_back(entry);
                if (!outcome.result.ok) {
                    throw Halt{outcome.result.message};
                }
                return outcome.result.data;
            }
        }
        return Json();
    }

    void bind(const std::string& name, Json value) { env_[name] = std::move(value); }

private:
    static std::string value_kind(const Json& v) {
        if (v.is_null()) return "an empty result";
        if (v.is_array()) return "a list";
        if (v.is_object()) return "a record";
        if (v.is_string()) return "a string";
        return "a value";
    }

    ActionDispatcher& actions_;
    ExecutionLog& log_;
    std::map<std::string, Json> env_;
};

}  // namespace

ExecutionLog run_script(const ActionScript& ast, ActionDispatcher& actions) {
    ExecutionLog log;
    Interpreter interp(actions, log);
    for (size_t i = 0; i < ast.statements.size(); ++i) {
        const Statement& stmt = ast.statements[i];
        try {
            Json value = interp.eval(stmt.value, static_cast<int>(i));
            if (stmt.target) {
                interp.bind(*stmt.target, std::move(value));
            }
        } catch (const Halt& halt) {
            log.halted_at = static_cast<int>(i);
            log.halted_line = stmt.line;
            log.halt_reason = halt.reason;
            break;
        }
    }
    return log;
}

}  // namespace robobench::script
