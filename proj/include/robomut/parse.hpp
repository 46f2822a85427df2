#pragma once

#include <cctype>
#include <charconv>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "robomut/ast.hpp"

namespace robomut {

/// Syntax error with document coordinates (1-based).
class ParseError : public std::runtime_error {
public:
    ParseError(int line, int column, const std::string& message)
        : std::runtime_error("parse error at " + std::to_string(line) + ":" +
                             std::to_string(column) + ": " + message),
          line_(line),
          column_(column) {}

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

namespace detail {

struct Token {
    enum class Kind { Ident, Number, String, Symbol, End };
    Kind kind = Kind::End;
    std::string text;
    int line = 0;
    int column = 0;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) { advance(); }

    const Token& peek() const { return current_; }

    Token take() {
        Token t = current_;
        advance();
        return t;
    }

private:
    void advance() {
        skip_space_and_comments();
        current_.line = line_;
        current_.column = column_;
        if (pos_ >= src_.size()) {
            current_.kind = Token::Kind::End;
            current_.text.clear();
            return;
        }
        const char c = src_[pos_];
        if (c == '"') {
            consume();
            std::string text;
            while (pos_ < src_.size() && src_[pos_] != '"' && src_[pos_] != '\n') {
                text += src_[pos_];
                consume();
            }
            if (pos_ >= src_.size() || src_[pos_] != '"')
                throw ParseError(current_.line, current_.column, "unterminated string");
            consume();
            current_.kind = Token::Kind::String;
            current_.text = std::move(text);
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string text;
            while (pos_ < src_.size()) {
                const char d = src_[pos_];
                if (std::isalnum(static_cast<unsigned char>(d)) || d == '_' || d == '.') {
                    text += d;
                    consume();
                } else {
                    break;
                }
            }
            current_.kind = Token::Kind::Ident;
            current_.text = std::move(text);
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' ||
            c == '.') {
            std::string text;
            if (c == '-' || c == '+') {
                text += c;
                consume();
            }
            bool any_digit = false;
            while (pos_ < src_.size() &&
                   (std::isdigit(static_cast<unsigned char>(src_[pos_])) ||
                    src_[pos_] == '.' || src_[pos_] == 'e' || src_[pos_] == 'E' ||
                    ((src_[pos_] == '-' || src_[pos_] == '+') && !text.empty() &&
                     (text.back() == 'e' || text.back() == 'E')))) {
                any_digit = any_digit || std::isdigit(static_cast<unsigned char>(src_[pos_]));
                text += src_[pos_];
                consume();
            }
            if (!any_digit)
                throw ParseError(current_.line, current_.column, "bad number");
            current_.kind = Token::Kind::Number;
            current_.text = std::move(text);
            return;
        }
        if (c == '!' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '=') {
            consume();
            consume();
            current_.kind = Token::Kind::Symbol;
            current_.text = "!=";
            return;
        }
        if (c == '(' || c == ')' || c == '=' || c == '<' || c == '>') {
            consume();
            current_.kind = Token::Kind::Symbol;
            current_.text = std::string(1, c);
            return;
        }
        throw ParseError(line_, column_, std::string("unexpected character '") + c + "'");
    }

    void skip_space_and_comments() {
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') consume();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                consume();
            } else {
                break;
            }
        }
    }

    void consume() {
        if (src_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
    Token current_;
};

inline bool parse_full_double(const std::string& text, double& out) {
    if (text.empty()) return false;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (*first == '+') ++first;  // from_chars rejects an explicit plus
    if (first == last) return false;
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

/// Splits a send() payload into verb and arguments. The split is purely
/// lexical so that arbitrary character-level mutants stay representable:
/// unknown verbs and malformed parts become Command/Word nodes and are
/// reported by validation instead of crashing the parser.
inline Command parse_payload(const std::string& payload) {
    std::vector<std::string> segments;
    std::string cur;
    for (char c : payload) {
        if (c == '/') {
            segments.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    segments.push_back(cur);

    Command cmd;
    cmd.verb = segments.front();
    for (std::size_t i = 1; i < segments.size(); ++i) {
        const std::string& part = segments[i];
        double num = 0.0;
        if (parse_full_double(part, num)) {
            cmd.args.emplace_back(num);
            continue;
        }
        // probe parts: "@channel", "-@channel", optional "+n"/"-n" offset
        bool negated = false;
        std::string_view rest = part;
        if (rest.size() >= 2 && rest[0] == '-' && rest[1] == '@') {
            negated = true;
            rest.remove_prefix(1);
        }
        if (!rest.empty() && rest[0] == '@') {
            rest.remove_prefix(1);
            std::size_t split = rest.size();
            for (std::size_t j = 0; j < rest.size(); ++j) {
                if (rest[j] == '+' || rest[j] == '-') {
                    split = j;
                    break;
                }
            }
            const std::string channel(rest.substr(0, split));
            double offset = 0.0;
            bool ok = !channel.empty();
            for (char c : channel) {
                if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '.')
                    ok = false;
            }
            if (ok && split < rest.size())
                ok = parse_full_double(std::string(rest.substr(split)), offset);
            if (ok) {
                // channel vocabulary is checked by validation, not here
                cmd.args.emplace_back(Probe{channel, offset, negated});
                continue;
            }
        }
        cmd.args.emplace_back(part);  // bare word (axis, name, or junk)
    }
    return cmd;
}

class Parser {
public:
    explicit Parser(std::string_view src) : lexer_(src) {}

    Program parse() {
        Program p;
        p.statements = parse_lines(/*top_level=*/true);
        return p;
    }

private:
    std::vector<Statement> parse_lines(bool top_level) {
        std::vector<Statement> out;
        for (;;) {
            const Token& t = lexer_.peek();
            if (t.kind == Token::Kind::End) {
                if (!top_level)
                    throw ParseError(t.line, t.column, "unexpected end of input, expected 'end'");
                return out;
            }
            if (t.kind == Token::Kind::Ident &&
                (t.text == "end" || t.text == "else")) {
                if (top_level)
                    throw ParseError(t.line, t.column, "'" + t.text + "' outside a block");
                return out;
            }
            out.push_back(parse_line());
        }
    }

    Statement parse_line() {
        const Token t = lexer_.take();
        if (t.kind != Token::Kind::Ident)
            throw ParseError(t.line, t.column, "expected a statement");
        if (t.text == "send") return parse_send();
        if (t.text == "if") return parse_if();
        if (t.text == "repeat") return parse_repeat();
        throw ParseError(t.line, t.column, "unknown statement '" + t.text + "'");
    }

    Statement parse_send() {
        expect_symbol("(");
        const Token payload = lexer_.take();
        if (payload.kind != Token::Kind::String)
            throw ParseError(payload.line, payload.column, "expected a quoted command payload");
        expect_symbol(")");
        return Statement{parse_payload(payload.text)};
    }

    Statement parse_if() {
        expect_ident("read");
        expect_symbol("(");
        const Token channel = lexer_.take();
        if (channel.kind != Token::Kind::String)
            throw ParseError(channel.line, channel.column, "expected a quoted channel name");
        expect_symbol(")");

        const Token cmp_tok = lexer_.take();
        if (cmp_tok.kind != Token::Kind::Symbol)
            throw ParseError(cmp_tok.line, cmp_tok.column, "expected a comparator");
        Comparator cmp;
        if (cmp_tok.text == "=") cmp = Comparator::Eq;
        else if (cmp_tok.text == "!=") cmp = Comparator::Ne;
        else if (cmp_tok.text == "<") cmp = Comparator::Lt;
        else if (cmp_tok.text == ">") cmp = Comparator::Gt;
        else throw ParseError(cmp_tok.line, cmp_tok.column, "bad comparator '" + cmp_tok.text + "'");

        const Token lit_tok = lexer_.take();
        Literal literal;
        if (lit_tok.kind == Token::Kind::String) {
            literal = lit_tok.text;
        } else if (lit_tok.kind == Token::Kind::Number) {
            double v = 0.0;
            if (!parse_full_double(lit_tok.text, v))
                throw ParseError(lit_tok.line, lit_tok.column, "bad number '" + lit_tok.text + "'");
            literal = v;
        } else {
            throw ParseError(lit_tok.line, lit_tok.column, "expected a literal");
        }

        expect_ident("then");
        If node;
        node.channel = channel.text;
        node.cmp = cmp;
        node.literal = std::move(literal);
        node.then_branch = parse_lines(false);
        if (lexer_.peek().kind == Token::Kind::Ident && lexer_.peek().text == "else") {
            lexer_.take();
            node.else_branch = parse_lines(false);
        }
        expect_ident("end");
        return Statement{std::move(node)};
    }

    Statement parse_repeat() {
        const Token count_tok = lexer_.take();
        if (count_tok.kind != Token::Kind::Number)
            throw ParseError(count_tok.line, count_tok.column, "expected a repeat count");
        long long count = 0;
        const char* first = count_tok.text.data();
        const char* last = first + count_tok.text.size();
        if (first != last && *first == '+') ++first;
        auto [ptr, ec] = std::from_chars(first, last, count);
        if (ec != std::errc{} || ptr != last)
            throw ParseError(count_tok.line, count_tok.column,
                             "bad repeat count '" + count_tok.text + "'");
        expect_ident("do");
        Repeat node;
        node.count = count;
        node.body = parse_lines(false);
        expect_ident("end");
        return Statement{std::move(node)};
    }

    void expect_symbol(const std::string& text) {
        const Token t = lexer_.take();
        if (t.kind != Token::Kind::Symbol || t.text != text)
            throw ParseError(t.line, t.column, "expected '" + text + "'");
    }

    void expect_ident(const std::string& text) {
        const Token t = lexer_.take();
        if (t.kind != Token::Kind::Ident || t.text != text)
            throw ParseError(t.line, t.column, "expected '" + text + "'");
    }

    Lexer lexer_;
};

}  // namespace detail

/// Parses a DSL document. Unknown verbs are accepted here and rejected by
/// validate_program, so string-level mutants remain representable.
/// Throws ParseError for malformed syntax.
inline Program parse_program(std::string_view source) {
    return detail::Parser(source).parse();
}

}  // namespace robomut
