#include <cctype>
#include <charconv>
#include <optional>

#include "ftbn/fault_tree.hpp"

namespace ftbn {

namespace {

enum class Tok { Ident, Number, LParen, RParen, Comma, Semi, Equals, End };

struct Token {
    Tok kind;
    std::string_view text;
    SourcePos pos;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        skip_space();
        const SourcePos pos{line_, col_};
        if (i_ >= src_.size()) return {Tok::End, {}, pos};
        const char c = src_[i_];
        const auto single = [&](Tok k) {
            advance(1);
            return Token{k, src_.substr(i_ - 1, 1), pos};
        };
        switch (c) {
            case '(': return single(Tok::LParen);
            case ')': return single(Tok::RParen);
            case ',': return single(Tok::Comma);
            case ';': return single(Tok::Semi);
            case '=': return single(Tok::Equals);
            default: break;
        }
        const std::size_t start = i_;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (i_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[i_])) || src_[i_] == '_'))
                advance(1);
            return {Tok::Ident, src_.substr(start, i_ - start), pos};
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '+') {
            if (c == '-' || c == '+') advance(1);
            scan_digits();
            if (peek() == '.') {
                advance(1);
                scan_digits();
            }
            if ((peek() == 'e' || peek() == 'E') && exponent_follows()) {
                advance(1);
                if (peek() == '-' || peek() == '+') advance(1);
                scan_digits();
            }
            return {Tok::Number, src_.substr(start, i_ - start), pos};
        }
        throw ParseError(std::string("unexpected character '") + c + "'", pos.line, pos.column);
    }

private:
    char peek(std::size_t ahead = 0) const {
        return i_ + ahead < src_.size() ? src_[i_ + ahead] : '\0';
    }

    bool exponent_follows() const {
        char d = peek(1);
        if (d == '-' || d == '+') d = peek(2);
        return std::isdigit(static_cast<unsigned char>(d)) != 0;
    }

    void scan_digits() {
        while (std::isdigit(static_cast<unsigned char>(peek()))) advance(1);
    }

    void advance(std::size_t n) {
        for (; n > 0 && i_ < src_.size(); --n, ++i_) {
            if (src_[i_] == '\n') {
                ++line_;
                col_ = 1;
            } else {
                ++col_;
            }
        }
    }

    void skip_space() {
        while (i_ < src_.size()) {
            const char c = src_[i_];
            if (c == '#') {
                while (i_ < src_.size() && src_[i_] != '\n') advance(1);
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance(1);
            } else {
                break;
            }
        }
    }

    std::string_view src_;
    std::size_t i_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

class Parser {
public:
    explicit Parser(std::string_view text) : lex_(text) { tok_ = lex_.next(); }

    ParsedFaultTree run() {
        bool have_top = false;
        while (tok_.kind != Tok::End) {
            const Token kw = expect(Tok::Ident, "statement keyword");
            if (kw.text == "primary") {
                primary(kw.pos);
            } else if (kw.text == "event") {
                event(kw.pos);
            } else if (kw.text == "top") {
                if (have_top) fail("duplicate 'top' statement", kw.pos);
                have_top = true;
                out_.tree.top = std::string(expect(Tok::Ident, "top event name").text);
                out_.top_position = kw.pos;
            } else {
                fail("expected 'primary', 'event' or 'top', found '" + std::string(kw.text) + "'", kw.pos);
            }
            expect(Tok::Semi, "';'");
        }
        if (!have_top) fail("missing 'top' statement", tok_.pos);
        return std::move(out_);
    }

private:
    [[noreturn]] static void fail(const std::string& msg, SourcePos pos) {
        throw ParseError(msg, pos.line, pos.column);
    }

    Token expect(Tok kind, const char* what) {
        if (tok_.kind != kind) {
            const std::string found = tok_.kind == Tok::End ? "end of input" : "'" + std::string(tok_.text) + "'";
            fail(std::string("expected ") + what + ", found " + found, tok_.pos);
        }
        Token t = tok_;
        tok_ = lex_.next();
        return t;
    }

    double number(const Token& t) {
        std::string_view s = t.text;
        if (!s.empty() && s.front() == '+') s.remove_prefix(1);
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size())
            fail("malformed number '" + std::string(t.text) + "'", t.pos);
        return v;
    }

    int integer(const Token& t) {
        int v = 0;
        auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc() || ptr != t.text.data() + t.text.size())
            fail("expected an integer, found '" + std::string(t.text) + "'", t.pos);
        return v;
    }

    void primary(SourcePos pos) {
        PrimaryEvent pe;
        pe.id = std::string(expect(Tok::Ident, "primary event name").text);
        std::optional<FailureModel> model;
        while (tok_.kind == Tok::Ident) {
            const Token key = expect(Tok::Ident, "attribute");
            expect(Tok::Equals, "'='");
            if (key.text == "rate" || key.text == "prob") {
                if (model) fail("primary event '" + pe.id + "' has more than one failure model", key.pos);
                const double v = number(expect(Tok::Number, "number"));
                model = key.text == "rate" ? FailureModel{Exponential{v}} : FailureModel{Fixed{v}};
            } else if (key.text == "class") {
                pe.component_class = std::string(expect(Tok::Ident, "component class").text);
            } else {
                fail("unknown attribute '" + std::string(key.text) + "'", key.pos);
            }
        }
        if (!model) fail("primary event '" + pe.id + "' needs 'rate=' or 'prob='", pos);
        pe.failure = *model;
        if (pe.component_class.empty()) pe.component_class = pe.id.substr(0, pe.id.find('_'));
        out_.positions[pe.id] = pos;
        out_.tree.primaries.push_back(std::move(pe));
    }

    void event(SourcePos pos) {
        Gate g;
        g.output = std::string(expect(Tok::Ident, "event name").text);
        expect(Tok::Equals, "'='");
        if (tok_.kind == Tok::Number) {
            g.kind = GateKind::KofN;
            g.k = integer(expect(Tok::Number, "k"));
            const Token of = expect(Tok::Ident, "'of'");
            if (of.text == "of") {
                g.n = integer(expect(Tok::Number, "n"));
            } else if (of.text.size() > 2 && of.text.substr(0, 2) == "of") {
                // "2of3" lexes as number "2" and identifier "of3".
                g.n = integer(Token{Tok::Number, of.text.substr(2), of.pos});
            } else {
                fail("expected 'of', found '" + std::string(of.text) + "'", of.pos);
            }
        } else {
            const Token kind = expect(Tok::Ident, "gate type");
            if (kind.text == "and")
                g.kind = GateKind::And;
            else if (kind.text == "or")
                g.kind = GateKind::Or;
            else
                fail("unknown gate type '" + std::string(kind.text) + "'", kind.pos);
        }
        expect(Tok::LParen, "'('");
        g.inputs.emplace_back(expect(Tok::Ident, "event name").text);
        while (tok_.kind == Tok::Comma) {
            expect(Tok::Comma, "','");
            g.inputs.emplace_back(expect(Tok::Ident, "event name").text);
        }
        expect(Tok::RParen, "')'");
        out_.positions[g.output] = pos;
        out_.tree.gates.push_back(std::move(g));
    }

    Lexer lex_;
    Token tok_{};
    ParsedFaultTree out_;
};

}  // namespace

ParsedFaultTree parse_fault_tree_syntax(std::string_view text) {
    return Parser(text).run();
}

FaultTree parse_fault_tree(std::string_view text) {
    ParsedFaultTree parsed = parse_fault_tree_syntax(text);
    auto diagnostics = validate(parsed.tree);
    if (diagnostics.empty()) return std::move(parsed.tree);
    for (auto& d : diagnostics) {
        SourcePos pos = parsed.top_position;
        if (auto it = parsed.positions.find(d.subject); it != parsed.positions.end()) pos = it->second;
        d.message = std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " + d.message;
    }
    throw ValidationError(std::move(diagnostics));
}

}  // namespace ftbn
