#include "cvn/parser.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace cvn {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool label_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
}

class Cursor {
public:
    Cursor(std::string_view line, int line_no) : line_(line), line_no_(line_no) {}

    int line_no() const { return line_no_; }
    int column() const { return static_cast<int>(pos_) + 1; }

    void skip_ws() {
        while (pos_ < line_.size() && (line_[pos_] == ' ' || line_[pos_] == '\t')) ++pos_;
    }
    bool at_end() {
        skip_ws();
        return pos_ >= line_.size();
    }
    char peek() {
        skip_ws();
        return pos_ < line_.size() ? line_[pos_] : '\0';
    }
    bool consume(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    bool consume(std::string_view word) {
        skip_ws();
        if (line_.substr(pos_, word.size()) == word) {
            const std::size_t after = pos_ + word.size();
            if (after >= line_.size() || !ident_char(line_[after])) {
                pos_ = after;
                return true;
            }
        }
        return false;
    }
    void expect(char c, const std::string& what) {
        if (!consume(c)) fail("expected '" + std::string(1, c) + "' " + what);
    }
    [[noreturn]] void fail(const std::string& message) {
        throw ParseError(line_no_, column(), message);
    }

    std::string identifier(const std::string& what) {
        skip_ws();
        if (pos_ >= line_.size() || !ident_start(line_[pos_])) fail("expected " + what);
        const std::size_t start = pos_;
        while (pos_ < line_.size() && ident_char(line_[pos_])) ++pos_;
        return std::string(line_.substr(start, pos_ - start));
    }

    std::string label(const std::string& what) {
        skip_ws();
        if (pos_ >= line_.size() || !label_char(line_[pos_])) fail("expected " + what);
        const std::size_t start = pos_;
        while (pos_ < line_.size() && label_char(line_[pos_])) {
            // keep '->' out of state labels
            if (line_[pos_] == '-' && pos_ + 1 < line_.size() && line_[pos_ + 1] == '>') break;
            ++pos_;
        }
        if (pos_ == start) fail("expected " + what);
        return std::string(line_.substr(start, pos_ - start));
    }

    double number(const std::string& what) {
        skip_ws();
        double value = 0.0;
        const char* first = line_.data() + pos_;
        const char* last = line_.data() + line_.size();
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc{}) fail("expected " + what);
        pos_ += static_cast<std::size_t>(ptr - first);
        return value;
    }

    std::optional<long> try_integer() {
        skip_ws();
        long value = 0;
        const char* first = line_.data() + pos_;
        const char* last = line_.data() + line_.size();
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc{}) return std::nullopt;
        pos_ += static_cast<std::size_t>(ptr - first);
        return value;
    }

    bool starts_with(std::string_view s) {
        skip_ws();
        return line_.substr(pos_, s.size()) == s;
    }

private:
    std::string_view line_;
    int line_no_;
    std::size_t pos_ = 0;
};

std::vector<std::string> parse_name_list(Cursor& cur, const std::string& what) {
    std::vector<std::string> names;
    names.push_back(cur.identifier(what));
    while (cur.consume(',')) names.push_back(cur.identifier(what));
    return names;
}

void parse_prob_clause(Cursor& cur, RuleSpec& rule) {
    if (!cur.consume("prob")) cur.fail("expected 'prob' clause");
    if (cur.peek() != '[') {
        const double r = cur.number("a probability");
        rule.point = r;
        rule.lower = r;
        rule.upper = r;
        if (!cur.consume('[')) return;
    } else {
        cur.expect('[', "to open the probability interval");
    }
    rule.lower = cur.number("the interval lower bound");
    cur.expect(',', "between the interval bounds");
    rule.upper = cur.number("the interval upper bound");
    cur.expect(']', "to close the probability interval");
    if (rule.lower > rule.upper) cur.fail("probability interval has lower > upper");
}

std::string format_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

}  // namespace

Domain NetworkSpec::domain_of(const RuleSpec& rule) const {
    std::vector<Variable> vars;
    for (const std::string& name : rule.participants) {
        for (const VariableDecl& d : variables) {
            if (d.name == name) vars.push_back(Variable(d.name, d.labels));
        }
    }
    return Domain(std::move(vars));
}

NetworkSpec parse_network(std::string_view text) {
    NetworkSpec spec;
    std::set<std::string> var_names;
    std::set<std::string> val_names;

    int line_no = 0;
    std::size_t begin = 0;
    while (begin <= text.size()) {
        const std::size_t end = text.find('\n', begin);
        std::string_view raw =
            text.substr(begin, end == std::string_view::npos ? text.size() - begin : end - begin);
        begin = end == std::string_view::npos ? text.size() + 1 : end + 1;
        ++line_no;

        const std::size_t hash = raw.find('#');
        if (hash != std::string_view::npos) raw = raw.substr(0, hash);
        Cursor cur(raw, line_no);
        if (cur.at_end()) continue;

        if (cur.consume("var")) {
            VariableDecl decl;
            decl.source_line = line_no;
            decl.name = cur.identifier("a variable name");
            if (!var_names.insert(decl.name).second) {
                cur.fail("variable '" + decl.name + "' is already declared");
            }
            cur.expect(':', "after the variable name");
            if (cur.consume('{')) {
                decl.labels.push_back(cur.label("a state label"));
                while (cur.consume(',')) decl.labels.push_back(cur.label("a state label"));
                cur.expect('}', "to close the frame");
            } else {
                const auto lo = cur.try_integer();
                if (!lo) cur.fail("expected '{' or an integer range");
                if (!(cur.consume('.') && cur.consume('.'))) {
                    cur.fail("expected '..' in the integer frame shorthand");
                }
                const auto hi = cur.try_integer();
                if (!hi || *hi < *lo) cur.fail("invalid integer frame range");
                for (long v = *lo; v <= *hi; ++v) decl.labels.push_back(std::to_string(v));
            }
            if (decl.labels.size() < 2) cur.fail("frame of '" + decl.name + "' needs at least 2 states");
            if (!cur.at_end()) cur.fail("unexpected trailing text after the variable declaration");
            spec.variables.push_back(std::move(decl));
            continue;
        }

        if (cur.consume("val")) {
            RuleSpec rule;
            rule.source_line = line_no;
            rule.name = cur.identifier("a valuation name");
            if (!val_names.insert(rule.name).second) {
                cur.fail("valuation '" + rule.name + "' is already declared");
            }
            if (!cur.consume("on")) cur.fail("expected 'on' after the valuation name");
            rule.participants = parse_name_list(cur, "a variable name");
            Index cardinality = 1;
            for (const std::string& p : rule.participants) {
                if (!var_names.count(p)) cur.fail("undeclared variable '" + p + "'");
                for (const VariableDecl& d : spec.variables) {
                    if (d.name == p) cardinality *= static_cast<Index>(d.labels.size());
                }
            }
            cur.expect(':', "after the domain list");

            if (cur.consume("sum")) {
                rule.kind = RuleKind::Sum;
                rule.sum_target = cur.identifier("the sum target variable");
                cur.expect('=', "after the sum target");
                rule.sum_addends.push_back(cur.identifier("an addend variable"));
                while (cur.consume('+')) rule.sum_addends.push_back(cur.identifier("an addend variable"));
                for (const std::string& used : rule.sum_addends) {
                    if (std::find(rule.participants.begin(), rule.participants.end(), used) ==
                        rule.participants.end()) {
                        cur.fail("sum addend '" + used + "' is not in the 'on' list");
                    }
                }
                if (std::find(rule.participants.begin(), rule.participants.end(), rule.sum_target) ==
                    rule.participants.end()) {
                    cur.fail("sum target '" + rule.sum_target + "' is not in the 'on' list");
                }
                parse_prob_clause(cur, rule);
            } else if (cur.consume("implies")) {
                rule.kind = RuleKind::Implies;
                rule.antecedent.variable = cur.identifier("the antecedent variable");
                cur.expect('=', "in the antecedent");
                rule.antecedent.state = cur.label("the antecedent state");
                if (!(cur.consume('-') && cur.consume('>'))) cur.fail("expected '->'");
                rule.consequent.variable = cur.identifier("the consequent variable");
                cur.expect('=', "in the consequent");
                rule.consequent.state = cur.label("the consequent state");
                for (const std::string& used : {rule.antecedent.variable, rule.consequent.variable}) {
                    if (std::find(rule.participants.begin(), rule.participants.end(), used) ==
                        rule.participants.end()) {
                        cur.fail("variable '" + used + "' is not in the 'on' list");
                    }
                }
                parse_prob_clause(cur, rule);
            } else if (cur.consume("assign")) {
                rule.kind = RuleKind::Assign;
                rule.assignment.variable = cur.identifier("the assigned variable");
                cur.expect('=', "in the assignment");
                rule.assignment.state = cur.label("the assigned state");
                if (std::find(rule.participants.begin(), rule.participants.end(),
                              rule.assignment.variable) == rule.participants.end()) {
                    cur.fail("variable '" + rule.assignment.variable + "' is not in the 'on' list");
                }
                parse_prob_clause(cur, rule);
            } else if (cur.consume("table")) {
                rule.kind = RuleKind::Table;
                do {
                    const double lo = cur.number("a table entry");
                    double hi = lo;
                    if (cur.consume(',')) hi = cur.number("the row's upper bound");
                    rule.table_rows.emplace_back(lo, hi);
                } while (cur.consume(';'));
                if (static_cast<Index>(rule.table_rows.size()) != cardinality) {
                    cur.fail("table has " + std::to_string(rule.table_rows.size()) + " rows but the domain has " +
                             std::to_string(cardinality) + " configurations (canonical order, last variable fastest)");
                }
            } else {
                cur.fail("expected one of sum|implies|assign|table");
            }
            if (!cur.at_end()) cur.fail("unexpected trailing text after the valuation");
            spec.rules.push_back(std::move(rule));
            continue;
        }

        if (cur.consume("order")) {
            if (spec.elimination_order) cur.fail("duplicate order statement");
            EliminationOrder order = parse_name_list(cur, "a variable name");
            for (const std::string& v : order) {
                if (!var_names.count(v)) cur.fail("undeclared variable '" + v + "' in order");
            }
            if (!cur.at_end()) cur.fail("unexpected trailing text after the order statement");
            spec.elimination_order = std::move(order);
            continue;
        }

        if (cur.consume("query")) {
            if (spec.query_line) cur.fail("duplicate query statement");
            spec.query = parse_name_list(cur, "a variable name");
            spec.query_line = line_no;
            for (const std::string& v : spec.query) {
                if (!var_names.count(v)) cur.fail("undeclared query variable '" + v + "'");
            }
            if (!cur.at_end()) cur.fail("unexpected trailing text after the query");
            continue;
        }

        cur.fail("expected one of var|val|order|query");
    }

    if (spec.query.empty()) {
        throw ParseError(line_no, 1, "no query statement in the network file");
    }
    return spec;
}

NetworkSpec parse_network_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidStateError("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_network(buffer.str());
}

std::string NetworkSpec::to_text() const {
    std::ostringstream os;
    for (const VariableDecl& d : variables) {
        os << "var " << d.name << " : {";
        for (std::size_t i = 0; i < d.labels.size(); ++i) {
            if (i) os << ",";
            os << d.labels[i];
        }
        os << "}\n";
    }
    for (const RuleSpec& r : rules) {
        os << "val " << r.name << " on ";
        for (std::size_t i = 0; i < r.participants.size(); ++i) {
            if (i) os << ",";
            os << r.participants[i];
        }
        os << " : ";
        switch (r.kind) {
            case RuleKind::Sum: {
                os << "sum " << r.sum_target << " = ";
                for (std::size_t i = 0; i < r.sum_addends.size(); ++i) {
                    if (i) os << " + ";
                    os << r.sum_addends[i];
                }
                break;
            }
            case RuleKind::Implies:
                os << "implies " << r.antecedent.variable << "=" << r.antecedent.state << " -> "
                   << r.consequent.variable << "=" << r.consequent.state;
                break;
            case RuleKind::Assign:
                os << "assign " << r.assignment.variable << "=" << r.assignment.state;
                break;
            case RuleKind::Table: {
                os << "table ";
                for (std::size_t i = 0; i < r.table_rows.size(); ++i) {
                    if (i) os << "; ";
                    os << format_number(r.table_rows[i].first) << ","
                       << format_number(r.table_rows[i].second);
                }
                break;
            }
        }
        if (r.kind != RuleKind::Table) {
            os << " prob ";
            if (r.point) os << format_number(*r.point);
            if (!r.point || r.lower != r.upper || *r.point != r.lower) {
                if (r.point) os << " ";
                os << "[" << format_number(r.lower) << "," << format_number(r.upper) << "]";
            }
        }
        os << "\n";
    }
    if (elimination_order) {
        os << "order ";
        for (std::size_t i = 0; i < elimination_order->size(); ++i) {
            if (i) os << ",";
            os << (*elimination_order)[i];
        }
        os << "\n";
    }
    os << "query ";
    for (std::size_t i = 0; i < query.size(); ++i) {
        if (i) os << ",";
        os << query[i];
    }
    os << "\n";
    return os.str();
}

bool structurally_equal(const NetworkSpec& a, const NetworkSpec& b) {
    if (a.variables.size() != b.variables.size() || a.rules.size() != b.rules.size()) return false;
    for (std::size_t i = 0; i < a.variables.size(); ++i) {
        if (a.variables[i].name != b.variables[i].name) return false;
        if (a.variables[i].labels != b.variables[i].labels) return false;
    }
    const auto same_ref = [](const StateRef& x, const StateRef& y) {
        return x.variable == y.variable && x.state == y.state;
    };
    for (std::size_t i = 0; i < a.rules.size(); ++i) {
        const RuleSpec& x = a.rules[i];
        const RuleSpec& y = b.rules[i];
        if (x.name != y.name || x.kind != y.kind || x.participants != y.participants) return false;
        if (x.sum_target != y.sum_target || x.sum_addends != y.sum_addends) return false;
        if (!same_ref(x.antecedent, y.antecedent) || !same_ref(x.consequent, y.consequent)) return false;
        if (!same_ref(x.assignment, y.assignment)) return false;
        if (x.table_rows != y.table_rows) return false;
        if (x.point != y.point || x.lower != y.lower || x.upper != y.upper) return false;
    }
    return a.elimination_order == b.elimination_order && a.query == b.query;
}

ValuationNetwork build_network(const NetworkSpec& spec, bool interval_kind) {
    ValuationNetwork net;
    for (const VariableDecl& d : spec.variables) net.variables.push_back(Variable(d.name, d.labels));
    for (const RuleSpec& rule : spec.rules) {
        const Domain domain = spec.domain_of(rule);
        net.valuations.push_back({rule.name, compile_rule(rule, domain, interval_kind)});
    }
    net.query = spec.query;
    net.validate();
    return net;
}

}  // namespace cvn
