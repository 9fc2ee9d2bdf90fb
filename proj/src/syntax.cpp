#include "vpc/syntax.hpp"

#include <cctype>
#include <charconv>
#include <sstream>

namespace vpc {

ParseError::ParseError(SourceSpan span, const std::string& message)
    : std::runtime_error(std::to_string(span.line) + ":" + std::to_string(span.column) + ": " +
                         message),
      span_(span),
      message_(message) {}

// --- rendering --------------------------------------------------------------

std::string render_term(const Term& t) {
    switch (t.kind()) {
    case Term::Kind::Var: return t.name();
    case Term::Kind::Int: return std::to_string(t.value());
    case Term::Kind::Empty: return "ep";
    case Term::Kind::Prog: return render_program(t.program());
    }
    return "?";
}

namespace {

std::string render_operand(const Program& p) {
    if (p.size() == 1 && p.stmts[0].is_atomic()) return render_statement(p.stmts[0]);
    return render_program(p);
}

}  // namespace

std::string render_statement(const Statement& s) {
    if (s.is_atomic()) {
        const auto& a = s.atomic();
        std::string out = a.name + "([";
        for (std::size_t i = 0; i < a.inputs.size(); ++i) {
            if (i) out += ',';
            out += render_term(a.inputs[i]);
        }
        out += "],[";
        for (std::size_t i = 0; i < a.outputs.size(); ++i) {
            if (i) out += ',';
            out += a.outputs[i];
        }
        out += "])";
        return out;
    }
    std::string out;
    const auto& ops = s.disjunction().operands;
    for (std::size_t i = 0; i < ops.size(); ++i) {
        if (i) out += " | ";
        out += render_operand(ops[i]);
    }
    return out;
}

std::string render_statements(const std::vector<Statement>& stmts) {
    std::string out;
    for (std::size_t i = 0; i < stmts.size(); ++i) {
        if (i) out += ',';
        out += render_statement(stmts[i]);
    }
    return out;
}

std::string render_program(const Program& p) { return "[" + render_statements(p.stmts) + "]"; }

std::string render_connection(const ConnectionList& c) {
    std::string out = "[" + c.entry;
    for (auto l : c.labels) out += "," + std::to_string(l);
    return out + "]";
}

// --- lexing -----------------------------------------------------------------

namespace {

enum class Tok { LBrack, RBrack, LParen, RParen, Comma, Bar, Star, Colon, Tilde, Dot, Ident, Int, End };

struct Token {
    Tok kind;
    std::string text;
    SourceSpan span;
};

std::vector<Token> lex(std::string_view text, std::size_t first_line = 1) {
    std::vector<Token> out;
    std::size_t line = first_line, col = 1;
    std::size_t i = 0;
    auto span = [&](std::size_t len) { return SourceSpan{line, col, len}; };
    while (i < text.size()) {
        char c = text[i];
        if (c == '\n') {
            ++line;
            col = 1;
            ++i;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            ++col;
            continue;
        }
        auto single = [&](Tok k) {
            out.push_back({k, std::string(1, c), span(1)});
            ++i;
            ++col;
        };
        switch (c) {
        case '[': single(Tok::LBrack); continue;
        case ']': single(Tok::RBrack); continue;
        case '(': single(Tok::LParen); continue;
        case ')': single(Tok::RParen); continue;
        case ',': single(Tok::Comma); continue;
        case '|': single(Tok::Bar); continue;
        case '*': single(Tok::Star); continue;
        case ':': single(Tok::Colon); continue;
        case '~': single(Tok::Tilde); continue;
        case '.': single(Tok::Dot); continue;
        default: break;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < text.size() && std::isalnum(static_cast<unsigned char>(text[j]))) ++j;
            out.push_back({Tok::Ident, std::string(text.substr(i, j - i)), span(j - i)});
            col += j - i;
            i = j;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '-' && i + 1 < text.size() && std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
            std::size_t j = i + 1;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            out.push_back({Tok::Int, std::string(text.substr(i, j - i)), span(j - i)});
            col += j - i;
            i = j;
            continue;
        }
        throw ParseError(span(1), std::string("unexpected character '") + c + "'");
    }
    out.push_back({Tok::End, "", span(0)});
    return out;
}

const char* describe(Tok k) {
    switch (k) {
    case Tok::LBrack: return "'['";
    case Tok::RBrack: return "']'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Comma: return "','";
    case Tok::Bar: return "'|'";
    case Tok::Star: return "'*'";
    case Tok::Colon: return "':'";
    case Tok::Tilde: return "'~'";
    case Tok::Dot: return "'.'";
    case Tok::Ident: return "identifier";
    case Tok::Int: return "integer";
    case Tok::End: return "end of input";
    }
    return "?";
}

// Element of a bracketed header body: either a bracket group or a statement.
struct Element {
    bool group = false;
    std::vector<Statement> stmts;
};

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    const Token& peek(std::size_t ahead = 0) const {
        return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
    }
    bool at(Tok k) const { return peek().kind == k; }
    bool at_end() const { return at(Tok::End); }

    Token expect(Tok k) {
        if (!at(k))
            throw ParseError(peek().span, std::string("expected ") + describe(k) + ", found " +
                                              (at_end() ? describe(Tok::End) : "'" + peek().text + "'"));
        return toks_[pos_++];
    }

    bool accept(Tok k) {
        if (!at(k)) return false;
        ++pos_;
        return true;
    }

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(peek().span, msg); }

    bool at_atomic() const { return at(Tok::Ident) && peek(1).kind == Tok::LParen; }

    // '[' ... ']' including `[]` and `[~]`.
    std::vector<Statement> bracket_list() {
        expect(Tok::LBrack);
        std::vector<Statement> out;
        if (accept(Tok::Tilde)) {
            expect(Tok::RBrack);
            return out;
        }
        while (!at(Tok::RBrack)) {
            auto part = element_flat();
            out.insert(out.end(), part.begin(), part.end());
            if (!accept(Tok::Comma) && !at(Tok::RBrack) && !at(Tok::LBrack) && !at_atomic())
                fail("expected ',' or ']' in statement list");
        }
        expect(Tok::RBrack);
        return out;
    }

    // A statement or bracket group in list context; groups are spliced.
    std::vector<Statement> element_flat() {
        Element e = element();
        return e.stmts;
    }

    Element element() {
        if (at(Tok::LBrack)) {
            auto group = bracket_list();
            if (at(Tok::Bar)) return Element{false, {disjunction_from(Program{std::move(group)})}};
            return Element{true, std::move(group)};
        }
        if (at_atomic()) {
            Statement s = atomic();
            if (at(Tok::Bar)) return Element{false, {disjunction_from(Program{{std::move(s)}})}};
            return Element{false, {std::move(s)}};
        }
        fail("expected a statement");
    }

    Statement statement() {
        Element e = element();
        if (e.group) {
            if (e.stmts.size() == 1) return e.stmts[0];
            fail("a bracketed list is not a single statement");
        }
        return e.stmts[0];
    }

    Statement disjunction_from(Program first) {
        Disjunction d;
        d.operands.push_back(std::move(first));
        while (accept(Tok::Bar)) {
            if (at(Tok::LBrack))
                d.operands.push_back(Program{bracket_list()});
            else if (at_atomic())
                d.operands.push_back(Program{{atomic()}});
            else
                fail("expected a disjunction operand after '|'");
        }
        return d;
    }

    Statement atomic() {
        Token name = expect(Tok::Ident);
        expect(Tok::LParen);
        Atomic a;
        a.name = name.text;
        a.inputs = input_list();
        if (!accept(Tok::Comma)) fail("expected ',' and an output list after the input list of " + a.name);
        a.outputs = output_list();
        expect(Tok::RParen);
        return a;
    }

    std::vector<Term> input_list() {
        expect(Tok::LBrack);
        std::vector<Term> out;
        if (accept(Tok::Tilde)) {
            expect(Tok::RBrack);
            return out;
        }
        while (!at(Tok::RBrack)) {
            out.push_back(term());
            if (!accept(Tok::Comma) && !at(Tok::RBrack)) fail("expected ',' or ']' in input list");
        }
        expect(Tok::RBrack);
        return out;
    }

    std::vector<std::string> output_list() {
        expect(Tok::LBrack);
        std::vector<std::string> out;
        if (accept(Tok::Tilde)) {
            expect(Tok::RBrack);
            return out;
        }
        while (!at(Tok::RBrack)) {
            out.push_back(expect(Tok::Ident).text);
            if (!accept(Tok::Comma) && !at(Tok::RBrack)) fail("expected ',' or ']' in output list");
        }
        expect(Tok::RBrack);
        return out;
    }

    Term term() {
        if (at(Tok::Ident)) {
            Token t = expect(Tok::Ident);
            if (t.text == "ep") return Term::empty();
            return Term::var(t.text);
        }
        if (at(Tok::Int)) {
            Token t = expect(Tok::Int);
            if (t.text == "-1") return Term::integer(-1);
            if (t.text == "0") return Term::integer(0);
            if (t.text == "1") return Term::integer(1);
            throw ParseError(t.span, "integer constant '" + t.text + "' is not one of -1, 0, 1");
        }
        if (at(Tok::LBrack)) {
            auto stmts = bracket_list();
            if (stmts.empty()) return Term::empty();
            return Term::program(Program{std::move(stmts)});
        }
        fail("expected a variable, constant or program literal");
    }

    ConnectionList connection() {
        expect(Tok::LBrack);
        ConnectionList c;
        c.entry = expect(Tok::Ident).text;
        while (accept(Tok::Comma)) {
            Token t = expect(Tok::Int);
            if (t.text[0] == '-' || t.text == "0") throw ParseError(t.span, "connection labels are positive");
            c.labels.push_back(std::stoul(t.text));
        }
        expect(Tok::RBrack);
        return c;
    }

    std::size_t pos_ = 0;

private:
    std::vector<Token> toks_;
};

}  // namespace

Statement parse_statement(std::string_view text) {
    Parser p(lex(text));
    Statement s = p.statement();
    if (!p.at_end()) p.fail("unexpected trailing text after statement");
    return s;
}

Program parse_program(std::string_view text) {
    Parser p(lex(text));
    Program out;
    if (p.at_end()) return out;
    while (!p.at_end()) {
        auto part = p.element_flat();
        out.stmts.insert(out.stmts.end(), part.begin(), part.end());
        if (!p.accept(Tok::Comma) && !p.at_end() && !p.at(Tok::LBrack) && !p.at_atomic())
            p.fail("expected ',' between statements");
    }
    return out;
}

// --- proof headers ------------------------------------------------------------

namespace {

constexpr std::size_t kWrapWidth = 78;

std::string wrap_tokens(const std::vector<std::string>& tokens) {
    std::string out, line;
    for (const auto& tok : tokens) {
        if (line.empty()) {
            line = tok;
        } else if (line.size() + 1 + tok.size() <= kWrapWidth) {
            line += " " + tok;
        } else {
            out += line + "\n";
            line = " " + tok;
        }
    }
    return out + line;
}

void push_list(std::vector<std::string>& tokens, const std::vector<Statement>& stmts,
               const std::string& closer) {
    for (std::size_t i = 0; i < stmts.size(); ++i) {
        std::string t = render_statement(stmts[i]);
        if (i + 1 < stmts.size())
            t += ",";
        else
            t += closer;
        tokens.push_back(std::move(t));
    }
}

}  // namespace

std::string render_header_body(const ProofHeader& header) {
    std::vector<std::string> tokens{"["};
    if (header.falsity) {
        push_list(tokens, header.premise.stmts, " ]:False");
        return wrap_tokens(tokens);
    }
    if (!header.premise.empty()) {
        tokens.push_back("[");
        push_list(tokens, header.premise.stmts, " ],");
    }
    if (header.conclusion.size() == 1) {
        tokens.push_back(render_statement(header.conclusion.stmts[0]) + " ]");
    } else {
        tokens.push_back("[");
        push_list(tokens, header.conclusion.stmts, " ] ]");
    }
    return wrap_tokens(tokens);
}

namespace {

ProofHeader header_from_parser(Parser& p) {
    ProofHeader h;
    p.expect(Tok::LBrack);
    std::vector<Element> elems;
    while (!p.at(Tok::RBrack)) {
        elems.push_back(p.element());
        if (!p.accept(Tok::Comma) && !p.at(Tok::RBrack) && !p.at(Tok::LBrack) && !p.at_atomic())
            p.fail("expected ',' or ']' in header");
    }
    p.expect(Tok::RBrack);
    if (p.accept(Tok::Colon)) {
        Token kw = p.expect(Tok::Ident);
        if (kw.text != "False") throw ParseError(kw.span, "expected 'False' after ':'");
        h.falsity = true;
        if (elems.size() == 1 && elems[0].group) {
            h.premise.stmts = elems[0].stmts;
        } else {
            for (auto& e : elems) {
                if (e.group) p.fail("a falsity header lists the false program's statements");
                h.premise.stmts.insert(h.premise.stmts.end(), e.stmts.begin(), e.stmts.end());
            }
        }
        if (h.premise.empty()) p.fail("a falsity header needs a nonempty program");
        return h;
    }
    if (elems.size() == 1) {
        h.conclusion.stmts = elems[0].stmts;
    } else if (elems.size() == 2) {
        h.premise.stmts = elems[0].stmts;
        h.conclusion.stmts = elems[1].stmts;
    } else {
        p.fail("header must have the form [ [premise], conclusion ] or [ conclusion ]");
    }
    if (h.conclusion.empty()) p.fail("header conclusion is empty");
    return h;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t nl = text.find('\n', start);
        std::string_view line = text.substr(start, nl == std::string_view::npos ? text.size() - start : nl - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        out.push_back(line);
        if (nl == std::string_view::npos) break;
        start = nl + 1;
    }
    if (!out.empty() && out.back().empty()) out.pop_back();
    return out;
}

}  // namespace

ProofHeader parse_header_body(std::string_view text) {
    Parser p(lex(text));
    ProofHeader h = header_from_parser(p);
    if (!p.at_end()) p.fail("unexpected text after header");
    return h;
}

std::string render_proof_line(std::size_t label, const std::optional<Statement>& statement,
                              bool split_mark, const std::vector<ConnectionList>& connections) {
    std::string out = std::to_string(label);
    if (out.size() < 3) out.insert(0, 3 - out.size(), ' ');
    out += ' ';
    std::string body = statement ? render_statement(*statement) : std::string("False");
    if (split_mark) body += '*';
    if (body.size() < 20)
        body.append(20 - body.size(), ' ');
    else if (!connections.empty())
        body += ' ';
    out += body;
    for (const auto& c : connections) out += render_connection(c);
    return out;
}

ProofScript parse_proof(std::string_view text) {
    auto lines = split_lines(text);
    ProofScript script;
    std::size_t i = 0;
    while (i < lines.size() && trim(lines[i]).empty()) ++i;
    if (i == lines.size()) throw ParseError({1, 1, 0}, "empty proof file");

    {
        std::string_view first = trim(lines[i]);
        SourceSpan span{i + 1, 1, first.size()};
        std::string_view kind_word = first.substr(0, first.find(' '));
        if (kind_word == "Theorem")
            script.header.kind = ProofKind::Theorem;
        else if (kind_word == "Lemma")
            script.header.kind = ProofKind::Lemma;
        else
            throw ParseError(span, "expected 'Theorem <id>.' or 'Lemma <id>.'");
        std::string_view rest = trim(first.substr(kind_word.size()));
        if (rest.empty() || rest.back() != '.' || !is_var_name(rest.substr(0, rest.size() - 1)))
            throw ParseError(span, "malformed theorem identifier");
        script.header.id = std::string(rest.substr(0, rest.size() - 1));
        ++i;
    }

    std::string body;
    std::size_t body_line = i + 1;
    while (i < lines.size() && trim(lines[i]) != "Proof.") {
        body += std::string(lines[i]) + "\n";
        ++i;
    }
    {
        Parser p(lex(body, body_line));
        ProofHeader h = header_from_parser(p);
        if (!p.at_end()) p.fail("unexpected text after header");
        h.kind = script.header.kind;
        h.id = script.header.id;
        script.header = std::move(h);
    }
    if (i == lines.size()) throw ParseError({i, 1, 0}, "missing 'Proof.' line");
    ++i;

    for (; i < lines.size(); ++i) {
        std::string_view raw = lines[i];
        if (trim(raw).empty()) continue;
        Parser p(lex(raw, i + 1));
        ProofLine pl;
        pl.span = p.peek().span;
        if (!p.at(Tok::Int)) p.fail("proof lines start with a numeric label");
        Token label = p.expect(Tok::Int);
        if (label.text[0] == '-') throw ParseError(label.span, "labels are positive");
        pl.label = std::stoul(label.text);
        if (pl.label != script.lines.size() + 1)
            throw ParseError(label.span, "label " + label.text + " breaks the contiguous numbering (expected " +
                                             std::to_string(script.lines.size() + 1) + ")");
        if (p.at(Tok::Ident) && p.peek().text == "False" && p.peek(1).kind != Tok::LParen) {
            p.expect(Tok::Ident);
        } else {
            pl.statement = p.statement();
        }
        pl.split_mark = p.accept(Tok::Star);
        while (p.at(Tok::LBrack)) pl.connections.push_back(p.connection());
        if (!p.at_end()) p.fail("unexpected text after connection lists");
        script.lines.push_back(std::move(pl));
    }
    return script;
}

std::string render_proof(const ProofScript& script) {
    std::string out = script.header.kind == ProofKind::Theorem ? "Theorem " : "Lemma ";
    out += script.header.id + ".\n";
    out += render_header_body(script.header) + "\n\nProof.\n";
    for (const auto& l : script.lines)
        out += render_proof_line(l.label, l.statement, l.split_mark, l.connections) + "\n";
    return out;
}

// --- configuration --------------------------------------------------------------

MachineParams parse_config(std::string_view text) {
    MachineParams params;
    auto lines = split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::string_view line = trim(lines[i]);
        if (line.empty() || line.front() == '#') continue;
        auto eq = line.find('=');
        SourceSpan span{i + 1, 1, line.size()};
        if (eq == std::string_view::npos) throw ParseError(span, "expected key=value");
        std::string_view key = trim(line.substr(0, eq));
        std::string_view value = trim(line.substr(eq + 1));
        std::int64_t v = 0;
        auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
        if (ec != std::errc() || ptr != value.data() + value.size())
            throw ParseError({i + 1, eq + 2, value.size()},
                             "value of " + std::string(key) + " is not an integer: '" + std::string(value) + "'");
        if (key == "K")
            params.alphabet = v;
        else if (key == "L")
            params.max_string = v;
        else if (key == "M")
            params.max_list = v;
        else if (key == "N")
            params.max_int = v;
        else if (key == "T")
            params.max_millis = v;
        else
            throw ParseError(span, "unknown parameter '" + std::string(key) + "'");
    }
    try {
        params.check();
    } catch (const std::invalid_argument& e) {
        throw ParseError({1, 1, 0}, e.what());
    }
    return params;
}

std::string render_config(const MachineParams& params) {
    std::ostringstream os;
    os << "K=" << params.alphabet << "\n"
       << "L=" << params.max_string << "\n"
       << "M=" << params.max_list << "\n"
       << "N=" << params.max_int << "\n"
       << "T=" << params.max_millis << "\n";
    return os.str();
}

}  // namespace vpc
