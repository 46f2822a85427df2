#pragma once

#include <charconv>
#include <string>

#include "robomut/ast.hpp"

namespace robomut {

/// Shortest round-trip decimal form of a double ("90", "0.1", "-0.05").
inline std::string format_number(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

namespace detail {

inline std::string format_arg(const Arg& arg) {
    if (const auto* num = std::get_if<double>(&arg)) return format_number(*num);
    if (const auto* probe = std::get_if<Probe>(&arg)) {
        std::string out;
        if (probe->negated) out += '-';
        out += '@';
        out += probe->channel;
        if (probe->offset != 0.0) {
            if (probe->offset > 0.0) out += '+';
            out += format_number(probe->offset);
        }
        return out;
    }
    return std::get<std::string>(arg);
}

inline std::string format_literal(const Literal& lit) {
    if (const auto* num = std::get_if<double>(&lit)) return format_number(*num);
    return '"' + std::get<std::string>(lit) + '"';
}

inline void unparse_statements(const std::vector<Statement>& stmts, int indent,
                               std::string& out) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    for (const Statement& s : stmts) {
        if (const auto* cmd = s.as_command()) {
            out += pad;
            out += "send(\"";
            out += cmd->verb;
            for (const Arg& a : cmd->args) {
                out += '/';
                out += format_arg(a);
            }
            out += "\")\n";
        } else if (const auto* iff = s.as_if()) {
            out += pad;
            out += "if read(\"" + iff->channel + "\") ";
            out += comparator_text(iff->cmp);
            out += ' ';
            out += format_literal(iff->literal);
            out += " then\n";
            unparse_statements(iff->then_branch, indent + 1, out);
            if (!iff->else_branch.empty()) {
                out += pad;
                out += "else\n";
                unparse_statements(iff->else_branch, indent + 1, out);
            }
            out += pad;
            out += "end\n";
        } else if (const auto* rep = s.as_repeat()) {
            out += pad;
            out += "repeat " + std::to_string(rep->count) + " do\n";
            unparse_statements(rep->body, indent + 1, out);
            out += pad;
            out += "end\n";
        }
    }
}

}  // namespace detail

/// Canonical text form. Accepts invalid programs (mutants must serialize);
/// parse(unparse(p)) is structurally identical to p.
inline std::string unparse_program(const Program& p) {
    std::string out;
    detail::unparse_statements(p.statements, 0, out);
    return out;
}

}  // namespace robomut
