#include "amreval/penman.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "amreval/errors.hpp"

namespace amreval {
namespace {

struct Token {
    enum Kind { LParen, RParen, Slash, Relation, Atom, Quoted, End } kind;
    std::string text;  // relation text without ':', quoted text without quotes
    int line;
    int column;
};

class Lexer {
public:
    Lexer(const std::string& text, int line_offset)
        : text_(text), line_(1 + line_offset) {}

    Token next() {
        skip_ws();
        int line = line_, col = col_;
        if (pos_ >= text_.size()) return {Token::End, "", line, col};
        char c = text_[pos_];
        if (c == '(') { advance(); return {Token::LParen, "(", line, col}; }
        if (c == ')') { advance(); return {Token::RParen, ")", line, col}; }
        if (c == '/') { advance(); return {Token::Slash, "/", line, col}; }
        if (c == '"') return quoted(line, col);
        if (c == ':') {
            advance();
            std::string rel = take_atom_chars();
            if (rel.empty()) throw ParseError("empty relation name after ':'", line, col);
            return {Token::Relation, rel, line, col};
        }
        std::string atom = take_atom_chars();
        if (atom.empty())
            throw ParseError(std::string("unexpected character '") + c + "'", line, col);
        return {Token::Atom, atom, line, col};
    }

private:
    void advance() {
        if (text_[pos_] == '\n') { ++line_; col_ = 1; } else { ++col_; }
        ++pos_;
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            advance();
    }

    std::string take_atom_chars() {
        std::string out;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' ||
                c == '/' || c == '"' || c == ':')
                break;
            out += c;
            advance();
        }
        return out;
    }

    Token quoted(int line, int col) {
        advance();  // opening quote
        std::string out;
        while (pos_ < text_.size() && text_[pos_] != '"') {
            if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) advance();
            out += text_[pos_];
            advance();
        }
        if (pos_ >= text_.size()) throw ParseError("unterminated string literal", line, col);
        advance();  // closing quote
        return {Token::Quoted, out, line, col};
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    int line_;
    int col_ = 1;
};

bool ends_with_of(const std::string& rel) {
    return rel.size() > 3 && rel.compare(rel.size() - 3, 3, "-of") == 0;
}

struct PendingValue {
    std::string source;
    std::string relation;
    std::string token;   // bare atom: variable reference or constant
    bool quoted;         // quoted tokens are always constants
    int line, column;
};

struct PendingRef {
    std::string source;   // empty for the root form "(v)"
    std::string relation;
    std::string var;
    int line, column;
};

class Parser {
public:
    Parser(const std::string& text, int line_offset) : lexer_(text, line_offset) {
        tok_ = lexer_.next();
    }

    AmrGraph parse() {
        expect(Token::LParen, "expected '('");
        std::string root = parse_node();
        if (tok_.kind != Token::End)
            throw ParseError("trailing content after graph", tok_.line, tok_.column);
        graph_.set_root(root);
        resolve();
        graph_.validate();
        return std::move(graph_);
    }

private:
    void bump() { tok_ = lexer_.next(); }

    void expect(Token::Kind kind, const char* msg) {
        if (tok_.kind != kind) throw ParseError(msg, tok_.line, tok_.column);
        bump();
    }

    // Parses the body after '(' was consumed; returns the node variable.
    std::string parse_node() {
        if (tok_.kind != Token::Atom)
            throw ParseError("expected a variable name", tok_.line, tok_.column);
        std::string var = tok_.text;
        int var_line = tok_.line, var_col = tok_.column;
        bump();

        if (tok_.kind == Token::Slash) {
            bump();
            if (tok_.kind != Token::Atom)
                throw ParseError("missing concept label after '/'", tok_.line,
                                 tok_.column);
            if (!graph_.add_node(var, tok_.text))
                throw ParseError("duplicate variable definition: " + var, var_line, var_col);
            bump();
        } else if (tok_.kind == Token::RParen) {
            // "(v)" re-entrant reference form: no definition here.
            refs_.push_back({"", "", var, var_line, var_col});
        } else {
            throw ParseError("expected '/' and a concept after variable", tok_.line,
                             tok_.column);
        }

        while (tok_.kind == Token::Relation) {
            std::string rel = tok_.text;
            int rel_line = tok_.line, rel_col = tok_.column;
            bump();
            switch (tok_.kind) {
                case Token::LParen: {
                    bump();
                    int child_line = tok_.line, child_col = tok_.column;
                    std::string child = parse_node();
                    refs_.push_back({var, rel, child, child_line, child_col});
                    break;
                }
                case Token::Quoted:
                    pending_.push_back({var, rel, tok_.text, true, tok_.line, tok_.column});
                    bump();
                    break;
                case Token::Atom:
                    pending_.push_back({var, rel, tok_.text, false, tok_.line, tok_.column});
                    bump();
                    break;
                default:
                    throw ParseError("missing value for relation :" + rel, rel_line, rel_col);
            }
        }
        expect(Token::RParen, "unbalanced parentheses: expected ')'");
        return var;
    }

    void add_relation(const std::string& src, const std::string& rel,
                      const std::string& tgt) {
        // Inverse roles are normalized to forward edges at parse time.
        if (ends_with_of(rel))
            graph_.add_edge(tgt, rel.substr(0, rel.size() - 3), src);
        else
            graph_.add_edge(src, rel, tgt);
    }

    void resolve() {
        for (const PendingRef& r : refs_) {
            if (!graph_.has_node(r.var))
                throw ParseError("dangling re-entrancy: variable '" + r.var +
                                     "' is never defined",
                                 r.line, r.column);
            if (!r.source.empty()) add_relation(r.source, r.relation, r.var);
        }
        for (const PendingValue& p : pending_) {
            if (!p.quoted && graph_.has_node(p.token))
                add_relation(p.source, p.relation, p.token);
            else
                graph_.add_attribute(p.source, p.relation, p.token);
        }
    }

    Lexer lexer_;
    Token tok_{Token::End, "", 0, 0};
    AmrGraph graph_;
    std::vector<PendingRef> refs_;
    std::vector<PendingValue> pending_;
};

// Splits "# ::key value" metadata lines from the penman body. Returns the
// number of lines consumed before the body so errors stay file-relative.
int split_metadata(const std::string& text,
                   std::vector<std::pair<std::string, std::string>>& meta,
                   std::string& body) {
    std::istringstream in(text);
    std::string line;
    int consumed = 0;
    std::ostringstream rest;
    bool in_body = false;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string trimmed = line;
        std::size_t start = trimmed.find_first_not_of(" \t\r");
        if (!in_body && start != std::string::npos && trimmed[start] == '#') {
            std::size_t key_at = trimmed.find("::", start);
            if (key_at != std::string::npos) {
                std::size_t key_end = trimmed.find_first_of(" \t", key_at);
                std::string key = trimmed.substr(key_at + 2,
                                                 key_end == std::string::npos
                                                     ? std::string::npos
                                                     : key_end - key_at - 2);
                std::string value;
                if (key_end != std::string::npos) {
                    std::size_t val_at = trimmed.find_first_not_of(" \t", key_end);
                    if (val_at != std::string::npos) value = trimmed.substr(val_at);
                    while (!value.empty() && (value.back() == '\r' || value.back() == ' '))
                        value.pop_back();
                }
                meta.emplace_back(key, value);
            }
            consumed = line_no;
            continue;
        }
        if (start != std::string::npos) in_body = true;
        if (in_body) rest << line << '\n';
        else consumed = line_no;
    }
    body = rest.str();
    return consumed;
}

}  // namespace

AmrGraph parse_penman(const std::string& text) {
    std::vector<std::pair<std::string, std::string>> meta;
    std::string body;
    int offset = split_metadata(text, meta, body);
    Parser parser(body, offset);
    AmrGraph g = parser.parse();
    for (auto& [k, v] : meta) g.add_metadata(std::move(k), std::move(v));
    return g;
}

namespace {

bool needs_quoting(const std::string& value, const AmrGraph& g) {
    if (value.empty()) return true;
    if (g.has_node(value)) return true;  // would reparse as a variable
    for (char c : value)
        if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' ||
            c == '/' || c == ':' || c == '"')
            return true;
    return false;
}

class Serializer {
public:
    explicit Serializer(const AmrGraph& g) : g_(g), edge_done_(g.edges().size(), false) {}

    std::string run() {
        emit_node(g_.root(), 0);
        return out_.str();
    }

private:
    void indent(int depth) {
        out_ << '\n';
        for (int i = 0; i < depth; ++i) out_ << "    ";
    }

    void emit_node(const std::string& var, int depth) {
        visited_.insert(var);
        out_ << '(' << var << " / " << g_.concept_of(var);
        for (const Attribute& a : g_.attributes()) {
            if (a.source != var) continue;
            indent(depth + 1);
            out_ << ':' << a.relation << ' ';
            if (needs_quoting(a.value, g_))
                out_ << '"' << a.value << '"';
            else
                out_ << a.value;
        }
        const auto& edges = g_.edges();
        for (std::size_t i = 0; i < edges.size(); ++i) {
            if (edge_done_[i]) continue;
            if (edges[i].source == var) {
                edge_done_[i] = true;
                indent(depth + 1);
                out_ << ':' << edges[i].relation << ' ';
                if (visited_.count(edges[i].target))
                    out_ << edges[i].target;
                else
                    emit_node(edges[i].target, depth + 1);
            } else if (edges[i].target == var) {
                edge_done_[i] = true;
                indent(depth + 1);
                out_ << ':' << edges[i].relation << "-of ";
                if (visited_.count(edges[i].source))
                    out_ << edges[i].source;
                else
                    emit_node(edges[i].source, depth + 1);
            }
        }
        out_ << ')';
    }

    const AmrGraph& g_;
    std::vector<bool> edge_done_;
    std::unordered_set<std::string> visited_;
    std::ostringstream out_;
};

}  // namespace

std::string serialize_penman(const AmrGraph& g) {
    std::ostringstream out;
    for (const auto& [k, v] : g.metadata())
        out << "# ::" << k << (v.empty() ? "" : " " + v) << '\n';
    out << Serializer(g).run() << '\n';
    return out.str();
}

namespace {

std::vector<AmrGraph> read_amr_blocks(std::istream& in, const std::string& origin) {
    std::vector<AmrGraph> graphs;
    std::string line;
    std::string block;
    int block_start = 1;
    int line_no = 0;
    auto flush = [&]() {
        if (block.find_first_not_of(" \t\r\n") == std::string::npos) {
            block.clear();
            return;
        }
        try {
            graphs.push_back(parse_penman(block));
        } catch (const DataError& e) {
            // e.what() already carries line/column for syntax errors.
            throw DataError(origin + ": block starting at line " +
                            std::to_string(block_start) + ": " + e.what());
        }
        block.clear();
    };
    while (std::getline(in, line)) {
        ++line_no;
        std::string trimmed = line;
        if (trimmed.find_first_not_of(" \t\r") == std::string::npos) {
            flush();
            block_start = line_no + 1;
        } else {
            if (block.empty()) block_start = line_no;
            block += line;
            block += '\n';
        }
    }
    flush();
    return graphs;
}

}  // namespace

std::vector<AmrGraph> read_amr_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open AMR file: " + path);
    return read_amr_blocks(in, path);
}

std::vector<AmrGraph> read_amr_string(const std::string& text) {
    std::istringstream in(text);
    return read_amr_blocks(in, "<string>");
}

}  // namespace amreval
