//------------------------------------------------------------------------------
// parse.cpp
// Lexer, parser, and post-parse validation for the synthesizable subset
//
// SPDX-License-Identifier: Apache-2.0
//------------------------------------------------------------------------------
#include "hyperflow/parse.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace hyperflow {
namespace {

const std::unordered_set<std::string>& supported_keywords() {
    static const std::unordered_set<std::string> kw = {
        "module", "endmodule", "input", "output", "wire", "reg", "logic",
        "assign", "always", "begin", "end", "if", "else", "case", "endcase",
        "default", "posedge", "parameter",
    };
    return kw;
}

// Reserved words the lexer recognizes but the subset rejects. Anything here
// raises UnsupportedConstruct at the use site instead of misparsing as an
// identifier.
const std::unordered_set<std::string>& rejected_keywords() {
    static const std::unordered_set<std::string> kw = {
        "inout", "negedge", "casez", "casex", "localparam", "initial", "final",
        "generate", "endgenerate", "genvar", "for", "while", "repeat",
        "forever", "function", "endfunction", "task", "endtask", "integer",
        "real", "time", "signed", "unsigned", "typedef", "struct", "enum",
        "union", "interface", "endinterface", "modport", "package",
        "endpackage", "import", "export", "always_comb", "always_ff",
        "always_latch", "wait", "fork", "join", "disable", "deassign",
        "force", "release", "specify", "endspecify", "primitive",
        "endprimitive", "table", "endtable", "supply0", "supply1", "tri",
        "tri0", "tri1", "trireg", "wand", "wor", "event", "edge", "scalared",
        "vectored", "small", "medium", "large", "defparam", "unique",
        "priority", "return", "void", "bit", "byte", "shortint", "int",
        "longint", "string", "const", "var", "automatic", "static", "assert",
        "assume", "cover", "property", "endproperty", "sequence",
        "endsequence", "program", "endprogram", "clocking", "endclocking",
    };
    return kw;
}

uint32_t needed_bits(uint64_t v) {
    uint32_t n = 1;
    while (v >>= 1)
        ++n;
    return n;
}

struct Token {
    enum class Kind { Eof, Ident, SystemIdent, Number, Keyword, Punct };

    Kind kind = Kind::Eof;
    std::string text;
    SourceSite site;
    Bits value{1};       // Number only
    bool sized = false;  // Number only
};

class Lexer {
public:
    // flat_names lets an identifier continue across a single '/' into another
    // identifier, so hierarchical signal names round-trip through predicate
    // text; "//" still opens a comment.
    Lexer(std::string path, const std::string& text, bool flat_names = false)
        : path_(std::move(path)), text_(text), flat_names_(flat_names) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_trivia();
            Token t = next();
            bool done = t.kind == Token::Kind::Eof;
            out.push_back(std::move(t));
            if (done)
                return out;
        }
    }

private:
    std::string path_;
    const std::string& text_;
    bool flat_names_ = false;
    size_t pos_ = 0;
    uint32_t line_ = 1, col_ = 1;

    SourceSite here() const { return SourceSite{path_, line_, col_}; }

    char cur() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
    char ahead(size_t k) const { return pos_ + k < text_.size() ? text_[pos_ + k] : '\0'; }

    void advance() {
        if (pos_ >= text_.size())
            return;
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_trivia() {
        for (;;) {
            char c = cur();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else if (c == '/' && ahead(1) == '/') {
                while (cur() && cur() != '\n')
                    advance();
            } else if (c == '/' && ahead(1) == '*') {
                SourceSite open = here();
                advance();
                advance();
                while (!(cur() == '*' && ahead(1) == '/')) {
                    if (!cur())
                        throw SyntaxError("unterminated block comment", open);
                    advance();
                }
                advance();
                advance();
            } else {
                return;
            }
        }
    }

    static bool ident_start(char c) { return std::isalpha((unsigned char)c) || c == '_'; }
    static bool ident_char(char c) {
        return std::isalnum((unsigned char)c) || c == '_' || c == '$';
    }

    Token next() {
        SourceSite site = here();
        char c = cur();
        if (!c)
            return Token{Token::Kind::Eof, "<eof>", site, Bits{1}, false};

        if (c == '`')
            throw UnsupportedConstruct("compiler directives are not supported", site);
        if (c == '\\')
            throw UnsupportedConstruct("escaped identifiers are not supported", site);
        if (c == '"')
            throw UnsupportedConstruct("string literals are not supported", site);
        if (c == '#')
            throw UnsupportedConstruct("delays and parameter overrides are not supported", site);

        if (c == '$' || ident_start(c)) {
            bool system = c == '$';
            std::string s;
            s += c;
            advance();
            while (ident_char(cur()) ||
                   (flat_names_ && cur() == '/' && ident_start(ahead(1)))) {
                s += cur();
                advance();
            }
            if (system)
                return Token{Token::Kind::SystemIdent, std::move(s), site, Bits{1}, false};
            if (supported_keywords().count(s) || rejected_keywords().count(s))
                return Token{Token::Kind::Keyword, std::move(s), site, Bits{1}, false};
            return Token{Token::Kind::Ident, std::move(s), site, Bits{1}, false};
        }

        if (std::isdigit((unsigned char)c) || c == '\'')
            return lex_number(site);

        // Two-character operators first.
        static const char* two[] = {"<=", ">=", "==", "!=", "<<", ">>", "&&", "||"};
        for (const char* p : two) {
            if (c == p[0] && ahead(1) == p[1]) {
                advance();
                advance();
                return Token{Token::Kind::Punct, p, site, Bits{1}, false};
            }
        }

        static const std::string singles = "()[]{};:,.=@?~!&|^+-*<>";
        if (singles.find(c) != std::string::npos) {
            advance();
            return Token{Token::Kind::Punct, std::string(1, c), site, Bits{1}, false};
        }
        throw SyntaxError(std::string("unexpected character '") + c + "'", site);
    }

    static std::optional<uint32_t> digit_value(char c, uint32_t base) {
        uint32_t v;
        if (c >= '0' && c <= '9')
            v = uint32_t(c - '0');
        else if (c >= 'a' && c <= 'f')
            v = uint32_t(c - 'a' + 10);
        else if (c >= 'A' && c <= 'F')
            v = uint32_t(c - 'A' + 10);
        else
            return std::nullopt;
        if (v >= base)
            return std::nullopt;
        return v;
    }

    std::string take_digits(uint32_t base, const SourceSite& site) {
        std::string digits;
        for (;;) {
            char c = cur();
            if (c == '_') {
                advance();
                continue;
            }
            if (c == 'x' || c == 'X' || c == 'z' || c == 'Z')
                throw UnsupportedConstruct("four-state literals are not supported", site);
            auto v = digit_value(c, base);
            if (!v)
                break;
            digits += c;
            advance();
        }
        if (digits.empty())
            throw SyntaxError("expected digits in numeric literal", site);
        return digits;
    }

    Token lex_number(const SourceSite& site) {
        uint64_t size = 0;
        bool have_size = false;
        if (std::isdigit((unsigned char)cur())) {
            std::string digits = take_digits(10, site);
            if (cur() != '\'') {
                // Plain decimal literal: unsized, at least 32 bits wide.
                uint64_t v = decode_decimal(digits, site);
                uint32_t w = std::max<uint32_t>(32, needed_bits(v));
                return Token{Token::Kind::Number, digits, site, Bits::from_uint(v, w), false};
            }
            size = decode_decimal(digits, site);
            have_size = true;
            if (size == 0)
                throw SyntaxError("literal size must be positive", site);
            if (size > (1u << 20))
                throw SyntaxError("literal size is unreasonably large", site);
        }

        // cur() == '\''
        advance();
        char b = cur();
        if (b == 's' || b == 'S')
            throw UnsupportedConstruct("signed literals are not supported", site);
        uint32_t base;
        switch (b) {
        case 'b': case 'B': base = 2; break;
        case 'o': case 'O': base = 8; break;
        case 'd': case 'D': base = 10; break;
        case 'h': case 'H': base = 16; break;
        default:
            throw SyntaxError("expected literal base (b, o, d, or h)", site);
        }
        advance();
        std::string digits = take_digits(base, site);

        if (base == 10) {
            uint64_t v = decode_decimal(digits, site);
            uint32_t w = have_size ? uint32_t(size) : std::max<uint32_t>(32, needed_bits(v));
            return Token{Token::Kind::Number, digits, site, Bits::from_uint(v, w).resized(w),
                         have_size};
        }

        uint32_t bits_per = base == 2 ? 1 : base == 8 ? 3 : 4;
        uint32_t natural = uint32_t(digits.size()) * bits_per;
        uint32_t w = have_size ? uint32_t(size) : std::max<uint32_t>(32, natural);
        Bits v{std::max(natural, w)};
        for (char d : digits) {
            v = v.shl(bits_per);
            v = v | Bits::from_uint(*digit_value(d, base), v.width());
        }
        return Token{Token::Kind::Number, digits, site, v.resized(w), have_size};
    }

    static uint64_t decode_decimal(const std::string& digits, const SourceSite& site) {
        uint64_t v = 0;
        for (char c : digits) {
            uint64_t nv = v * 10 + uint64_t(c - '0');
            if (nv < v)
                throw SyntaxError("decimal literal exceeds 64 bits", site);
            v = nv;
        }
        return v;
    }
};

// Constant folding over parameter bindings; used for ranges, selects, and
// parameter values. Returns nullopt when the expression is not constant.
std::optional<int64_t> fold_const(const Expr& e, const std::map<std::string, int64_t>& params) {
    switch (e.kind) {
    case Expr::Kind::Literal:
        return int64_t(e.literal.low64());
    case Expr::Kind::Ident: {
        auto it = params.find(e.ident);
        if (it == params.end())
            return std::nullopt;
        return it->second;
    }
    case Expr::Kind::Unary: {
        if (e.uop != UnaryOp::Negate)
            return std::nullopt;
        auto v = fold_const(*e.ops[0], params);
        if (!v)
            return std::nullopt;
        return -*v;
    }
    case Expr::Kind::Binary: {
        auto a = fold_const(*e.ops[0], params);
        auto b = fold_const(*e.ops[1], params);
        if (!a || !b)
            return std::nullopt;
        switch (e.bop) {
        case BinaryOp::Add: return *a + *b;
        case BinaryOp::Sub: return *a - *b;
        default: return std::nullopt;
        }
    }
    default:
        return std::nullopt;
    }
}

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    void parse_into(Ast& ast) {
        while (!at_eof()) {
            if (at_keyword("module")) {
                ast.modules.push_back(parse_module());
            } else {
                const Token& t = peek();
                if (t.kind == Token::Kind::Keyword)
                    throw UnsupportedConstruct("'" + t.text + "' is not supported", t.site);
                throw SyntaxError("expected 'module', got '" + t.text + "'", t.site);
            }
        }
    }

    ExprPtr parse_lone_expr() {
        ExprPtr e = parse_expr();
        if (!at_eof()) {
            const Token& t = peek();
            throw SyntaxError("unexpected '" + t.text + "' after expression", t.site);
        }
        return e;
    }

private:
    std::vector<Token> toks_;
    size_t pos_ = 0;
    std::map<std::string, int64_t> params_;

    const Token& peek(size_t k = 0) const {
        size_t i = std::min(pos_ + k, toks_.size() - 1);
        return toks_[i];
    }
    bool at_eof() const { return peek().kind == Token::Kind::Eof; }
    bool at_punct(const char* p) const {
        return peek().kind == Token::Kind::Punct && peek().text == p;
    }
    bool at_keyword(const char* k) const {
        return peek().kind == Token::Kind::Keyword && peek().text == k;
    }
    Token take() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

    Token expect_punct(const char* p) {
        if (!at_punct(p))
            throw SyntaxError("expected '" + std::string(p) + "', got '" + peek().text + "'",
                              peek().site);
        return take();
    }
    Token expect_keyword(const char* k) {
        if (!at_keyword(k))
            throw SyntaxError("expected '" + std::string(k) + "', got '" + peek().text + "'",
                              peek().site);
        return take();
    }
    Token expect_ident() {
        const Token& t = peek();
        if (t.kind == Token::Kind::SystemIdent)
            throw UnsupportedConstruct("system identifiers are not supported", t.site);
        if (t.kind == Token::Kind::Keyword && rejected_keywords().count(t.text))
            throw UnsupportedConstruct("'" + t.text + "' is not supported", t.site);
        if (t.kind != Token::Kind::Ident)
            throw SyntaxError("expected identifier, got '" + t.text + "'", t.site);
        return take();
    }

    [[noreturn]] void reject(const Token& t) {
        if (t.kind == Token::Kind::SystemIdent)
            throw UnsupportedConstruct("system identifiers are not supported", t.site);
        if (t.kind == Token::Kind::Keyword && rejected_keywords().count(t.text))
            throw UnsupportedConstruct("'" + t.text + "' is not supported", t.site);
        throw SyntaxError("unexpected '" + t.text + "'", t.site);
    }

    int64_t const_value(const ExprPtr& e) {
        auto v = fold_const(*e, params_);
        if (!v)
            throw UnsupportedConstruct(
                "expression is not constant (only literals, parameters, +, - allowed here)",
                e->site);
        return *v;
    }

    // [msb:lsb] with constant bounds, descending, non-negative.
    std::pair<uint32_t, uint32_t> parse_range() {
        SourceSite site = peek().site;
        expect_punct("[");
        int64_t msb = const_value(parse_expr());
        expect_punct(":");
        int64_t lsb = const_value(parse_expr());
        expect_punct("]");
        if (msb < 0 || lsb < 0)
            throw SyntaxError("range bounds must be non-negative", site);
        if (msb < lsb)
            throw UnsupportedConstruct("ascending ranges are not supported", site);
        return {uint32_t(msb), uint32_t(lsb)};
    }

    ModuleDecl parse_module() {
        ModuleDecl m;
        Token kw = expect_keyword("module");
        m.site = kw.site;
        m.name = expect_ident().text;
        params_.clear();

        if (at_punct("(")) {
            take();
            if (!at_punct(")")) {
                Direction dir = Direction::Input;
                NetKind kind = NetKind::Wire;
                bool has_range = false;
                uint32_t msb = 0, lsb = 0;
                bool seen_dir = false;
                for (;;) {
                    if (at_keyword("input") || at_keyword("output")) {
                        dir = take().text == "input" ? Direction::Input : Direction::Output;
                        kind = NetKind::Wire;
                        has_range = false;
                        seen_dir = true;
                        if (at_keyword("wire") || at_keyword("reg") || at_keyword("logic")) {
                            std::string k = take().text;
                            kind = k == "wire" ? NetKind::Wire
                                 : k == "reg"  ? NetKind::Reg
                                               : NetKind::Logic;
                        }
                        if (at_punct("[")) {
                            auto [hi, lo] = parse_range();
                            has_range = true;
                            msb = hi;
                            lsb = lo;
                        }
                    } else if (!seen_dir) {
                        throw SyntaxError("port list must start with a direction", peek().site);
                    }
                    Token name = expect_ident();
                    Port p;
                    p.name = name.text;
                    p.dir = dir;
                    p.kind = kind;
                    p.has_range = has_range;
                    p.msb = msb;
                    p.lsb = lsb;
                    p.site = name.site;
                    m.ports.push_back(std::move(p));
                    if (at_punct(",")) {
                        take();
                        continue;
                    }
                    break;
                }
            }
            expect_punct(")");
        }
        expect_punct(";");

        while (!at_keyword("endmodule")) {
            if (at_eof())
                throw SyntaxError("missing 'endmodule' for module '" + m.name + "'", peek().site);
            parse_module_item(m);
        }
        take();  // endmodule
        return m;
    }

    void parse_module_item(ModuleDecl& m) {
        const Token& t = peek();
        if (at_keyword("parameter")) {
            take();
            for (;;) {
                Token name = expect_ident();
                expect_punct("=");
                int64_t v = const_value(parse_expr());
                Param p;
                p.name = name.text;
                p.value = v;
                p.site = name.site;
                params_[p.name] = v;
                m.params.push_back(std::move(p));
                if (at_punct(",")) {
                    take();
                    continue;
                }
                break;
            }
            expect_punct(";");
            return;
        }
        if (at_keyword("wire") || at_keyword("reg") || at_keyword("logic")) {
            parse_decl(m);
            return;
        }
        if (at_keyword("input") || at_keyword("output"))
            throw UnsupportedConstruct("non-ANSI port declarations are not supported", t.site);
        if (at_keyword("assign")) {
            Token kw = take();
            auto stmt = std::make_shared<Stmt>();
            stmt->kind = Stmt::Kind::Assign;
            stmt->site = kw.site;
            stmt->lhs = parse_lvalue();
            expect_punct("=");
            stmt->rhs = parse_expr();
            expect_punct(";");
            ProcessDecl proc;
            proc.kind = ProcessDecl::Kind::Continuous;
            proc.site = kw.site;
            proc.body.push_back(std::move(stmt));
            m.processes.push_back(std::move(proc));
            return;
        }
        if (at_keyword("always")) {
            m.processes.push_back(parse_always());
            return;
        }
        if (t.kind == Token::Kind::Ident) {
            m.instances.push_back(parse_instance());
            return;
        }
        reject(t);
    }

    void parse_decl(ModuleDecl& m) {
        std::string k = take().text;
        NetKind kind = k == "wire" ? NetKind::Wire : k == "reg" ? NetKind::Reg : NetKind::Logic;
        bool has_range = false;
        uint32_t msb = 0, lsb = 0;
        if (at_punct("[")) {
            auto [hi, lo] = parse_range();
            has_range = true;
            msb = hi;
            lsb = lo;
        }
        for (;;) {
            Token name = expect_ident();
            Decl d;
            d.name = name.text;
            d.kind = kind;
            d.has_range = has_range;
            d.msb = msb;
            d.lsb = lsb;
            d.site = name.site;
            if (at_punct("["))
                throw UnsupportedConstruct("arrays and memories are not supported", peek().site);
            if (at_punct("=")) {
                take();
                d.init = parse_expr();
            }
            m.decls.push_back(std::move(d));
            if (at_punct(",")) {
                take();
                continue;
            }
            break;
        }
        expect_punct(";");
    }

    ProcessDecl parse_always() {
        Token kw = expect_keyword("always");
        ProcessDecl proc;
        proc.site = kw.site;
        expect_punct("@");
        if (at_punct("*")) {
            take();
            proc.kind = ProcessDecl::Kind::Combinational;
        } else {
            expect_punct("(");
            if (at_punct("*")) {
                take();
                proc.kind = ProcessDecl::Kind::Combinational;
            } else if (at_keyword("posedge")) {
                take();
                proc.kind = ProcessDecl::Kind::Clocked;
                proc.clock = expect_ident().text;
                if (!at_punct(")"))
                    throw UnsupportedConstruct(
                        "only a single posedge event is supported in a sensitivity list",
                        peek().site);
            } else {
                throw UnsupportedConstruct(
                    "explicit sensitivity lists are not supported; use @(*) or @(posedge clk)",
                    peek().site);
            }
            expect_punct(")");
        }
        proc.body = parse_stmt_or_block();
        return proc;
    }

    std::vector<StmtPtr> parse_stmt_or_block() {
        std::vector<StmtPtr> body;
        if (at_keyword("begin")) {
            Token b = take();
            if (at_punct(":"))
                throw UnsupportedConstruct("named blocks are not supported", b.site);
            while (!at_keyword("end")) {
                if (at_eof())
                    throw SyntaxError("missing 'end'", b.site);
                if (at_punct(";")) {  // empty statement
                    take();
                    continue;
                }
                body.push_back(parse_stmt());
            }
            take();  // end
        } else {
            body.push_back(parse_stmt());
        }
        return body;
    }

    StmtPtr parse_stmt() {
        const Token& t = peek();
        if (at_keyword("if")) {
            Token kw = take();
            auto s = std::make_shared<Stmt>();
            s->kind = Stmt::Kind::If;
            s->site = kw.site;
            expect_punct("(");
            s->cond = parse_expr();
            expect_punct(")");
            s->then_body = parse_stmt_or_block();
            if (at_keyword("else")) {
                take();
                s->else_body = parse_stmt_or_block();
            }
            return s;
        }
        if (at_keyword("case")) {
            Token kw = take();
            auto s = std::make_shared<Stmt>();
            s->kind = Stmt::Kind::Case;
            s->site = kw.site;
            expect_punct("(");
            s->sel = parse_expr();
            expect_punct(")");
            bool saw_default = false;
            while (!at_keyword("endcase")) {
                if (at_eof())
                    throw SyntaxError("missing 'endcase'", kw.site);
                CaseItem item;
                item.site = peek().site;
                if (at_keyword("default")) {
                    take();
                    if (saw_default)
                        throw SyntaxError("multiple 'default' items in one case", item.site);
                    saw_default = true;
                } else {
                    for (;;) {
                        item.labels.push_back(parse_expr());
                        if (at_punct(",")) {
                            take();
                            continue;
                        }
                        break;
                    }
                }
                expect_punct(":");
                item.body = parse_stmt_or_block();
                s->items.push_back(std::move(item));
            }
            take();  // endcase
            return s;
        }
        if (t.kind == Token::Kind::Ident) {
            auto s = std::make_shared<Stmt>();
            s->kind = Stmt::Kind::Assign;
            s->site = t.site;
            s->lhs = parse_lvalue();
            if (at_punct("<=")) {
                take();
                s->nonblocking = true;
            } else {
                expect_punct("=");
            }
            s->rhs = parse_expr();
            expect_punct(";");
            return s;
        }
        if (at_punct("{"))
            throw UnsupportedConstruct("concatenation targets are not supported", t.site);
        reject(t);
    }

    LValue parse_lvalue() {
        Token name = expect_ident();
        LValue lv;
        lv.name = name.text;
        lv.site = name.site;
        if (at_punct("[")) {
            take();
            int64_t a = const_value(parse_expr());
            int64_t b = a;
            bool range = false;
            if (at_punct(":")) {
                take();
                b = const_value(parse_expr());
                range = true;
            }
            expect_punct("]");
            if (a < 0 || b < 0)
                throw SyntaxError("select indices must be non-negative", name.site);
            if (range && a < b)
                throw UnsupportedConstruct("ascending part-selects are not supported", name.site);
            lv.has_range = true;
            lv.msb = uint32_t(a);
            lv.lsb = uint32_t(b);
        }
        return lv;
    }

    // Precedence climbing. Levels, loosest first:
    //   ?:  ||  &&  |  ^  &  ==/!=  </<=/>/>=  <</>>  +/-  unary  primary
    ExprPtr parse_expr() { return parse_ternary(); }

    ExprPtr parse_ternary() {
        ExprPtr cond = parse_binary(0);
        if (!at_punct("?"))
            return cond;
        Token q = take();
        ExprPtr t = parse_expr();
        expect_punct(":");
        ExprPtr f = parse_ternary();
        return Expr::make_ternary(std::move(cond), std::move(t), std::move(f), q.site);
    }

    static std::optional<BinaryOp> binary_at(const std::string& p, int level) {
        struct Row {
            const char* text;
            BinaryOp op;
            int level;
        };
        static const Row rows[] = {
            {"||", BinaryOp::LogicOr, 0}, {"&&", BinaryOp::LogicAnd, 1},
            {"|", BinaryOp::Or, 2},       {"^", BinaryOp::Xor, 3},
            {"&", BinaryOp::And, 4},      {"==", BinaryOp::Eq, 5},
            {"!=", BinaryOp::Ne, 5},      {"<", BinaryOp::Lt, 6},
            {"<=", BinaryOp::Le, 6},      {">", BinaryOp::Gt, 6},
            {">=", BinaryOp::Ge, 6},      {"<<", BinaryOp::Shl, 7},
            {">>", BinaryOp::Shr, 7},     {"+", BinaryOp::Add, 8},
            {"-", BinaryOp::Sub, 8},
        };
        for (const auto& r : rows)
            if (r.level == level && p == r.text)
                return r.op;
        return std::nullopt;
    }

    ExprPtr parse_binary(int level) {
        if (level > 8)
            return parse_unary();
        ExprPtr lhs = parse_binary(level + 1);
        for (;;) {
            if (peek().kind != Token::Kind::Punct)
                return lhs;
            auto op = binary_at(peek().text, level);
            if (!op)
                return lhs;
            Token t = take();
            ExprPtr rhs = parse_binary(level + 1);
            lhs = Expr::make_binary(*op, std::move(lhs), std::move(rhs), t.site);
        }
    }

    ExprPtr parse_unary() {
        const Token& t = peek();
        if (t.kind == Token::Kind::Punct) {
            UnaryOp op;
            if (t.text == "~")
                op = UnaryOp::BitNot;
            else if (t.text == "!")
                op = UnaryOp::LogicNot;
            else if (t.text == "-")
                op = UnaryOp::Negate;
            else if (t.text == "&")
                op = UnaryOp::ReduceAnd;
            else if (t.text == "|")
                op = UnaryOp::ReduceOr;
            else if (t.text == "^")
                op = UnaryOp::ReduceXor;
            else
                return parse_primary();
            Token taken = take();
            return Expr::make_unary(op, parse_unary(), taken.site);
        }
        return parse_primary();
    }

    ExprPtr parse_primary() {
        const Token& t = peek();
        if (t.kind == Token::Kind::Number) {
            Token n = take();
            return Expr::make_literal(n.value, n.sized, n.site);
        }
        if (t.kind == Token::Kind::Ident) {
            Token name = take();
            // Parameters fold to literals here; later passes only ever see
            // signal identifiers.
            auto pit = params_.find(name.text);
            if (pit != params_.end()) {
                if (at_punct("["))
                    throw UnsupportedConstruct("cannot select bits of a parameter", name.site);
                int64_t v = pit->second;
                uint32_t w = v < 0 ? 64 : std::max<uint32_t>(32, needed_bits(uint64_t(v)));
                return Expr::make_literal(Bits::from_uint(uint64_t(v), w), false, name.site);
            }
            if (!at_punct("["))
                return Expr::make_ident(name.text, name.site);
            take();
            int64_t a = const_value(parse_expr());
            int64_t b = a;
            bool range = false;
            if (at_punct(":")) {
                take();
                b = const_value(parse_expr());
                range = true;
            }
            expect_punct("]");
            if (a < 0 || b < 0)
                throw SyntaxError("select indices must be non-negative", name.site);
            if (range && a < b)
                throw UnsupportedConstruct("ascending part-selects are not supported", name.site);
            return Expr::make_select(name.text, uint32_t(a), uint32_t(b), range, name.site);
        }
        if (at_punct("(")) {
            take();
            ExprPtr e = parse_expr();
            expect_punct(")");
            return e;
        }
        if (at_punct("{")) {
            Token open = take();
            std::vector<ExprPtr> parts;
            for (;;) {
                if (at_punct("{"))
                    throw UnsupportedConstruct("replication is not supported", peek().site);
                parts.push_back(parse_expr());
                if (at_punct(",")) {
                    take();
                    continue;
                }
                break;
            }
            expect_punct("}");
            if (parts.empty())
                throw SyntaxError("empty concatenation", open.site);
            return Expr::make_concat(std::move(parts), open.site);
        }
        if (t.kind == Token::Kind::Punct && t.text == "*")
            throw UnsupportedConstruct("multiplication is not supported", t.site);
        reject(t);
    }

    Instance parse_instance() {
        Token mod = expect_ident();
        if (at_punct("("))
            throw SyntaxError("expected instance name after module name", peek().site);
        Token inst = expect_ident();
        Instance out;
        out.module_name = mod.text;
        out.inst_name = inst.text;
        out.site = mod.site;
        expect_punct("(");
        if (!at_punct(")")) {
            bool named = at_punct(".");
            for (;;) {
                Connection c;
                c.site = peek().site;
                if (at_punct(".")) {
                    if (!named)
                        throw SyntaxError("cannot mix named and positional connections", c.site);
                    take();
                    if (at_punct("*"))
                        throw UnsupportedConstruct("wildcard connections are not supported",
                                                   peek().site);
                    c.port = expect_ident().text;
                    expect_punct("(");
                    if (!at_punct(")"))
                        c.expr = parse_expr();
                    expect_punct(")");
                } else {
                    if (named)
                        throw SyntaxError("cannot mix named and positional connections", c.site);
                    c.expr = parse_expr();
                }
                out.conns.push_back(std::move(c));
                if (at_punct(",")) {
                    take();
                    continue;
                }
                break;
            }
        }
        expect_punct(")");
        expect_punct(";");
        return out;
    }
};

//----------------------------------------------------------------------------
// Post-parse validation
//----------------------------------------------------------------------------

struct SymbolInfo {
    uint32_t msb = 0, lsb = 0;
    bool has_range = false;
    NetKind kind = NetKind::Wire;
    Direction dir = Direction::Internal;

    uint32_t width() const { return has_range ? msb - lsb + 1 : 1; }
};

class Validator {
public:
    explicit Validator(const Ast& ast) : ast_(ast) {}

    void run() {
        std::set<std::string> module_names;
        for (const auto& m : ast_.modules) {
            if (!module_names.insert(m.name).second)
                throw ElaborationError("duplicate module '" + m.name + "'", m.site);
        }
        for (const auto& m : ast_.modules)
            check_module(m);
    }

private:
    const Ast& ast_;
    std::map<std::string, SymbolInfo> symbols_;
    std::set<std::string> param_names_;

    void check_module(const ModuleDecl& m) {
        symbols_.clear();
        param_names_.clear();

        for (const auto& p : m.params) {
            if (!param_names_.insert(p.name).second)
                throw ElaborationError("duplicate parameter '" + p.name + "'", p.site);
        }
        for (const auto& p : m.ports)
            define(p.name, SymbolInfo{p.msb, p.lsb, p.has_range, p.kind, p.dir}, p.site);
        for (const auto& d : m.decls)
            define(d.name, SymbolInfo{d.msb, d.lsb, d.has_range, d.kind, Direction::Internal},
                   d.site);

        for (const auto& d : m.decls)
            if (d.init)
                check_expr(*d.init);

        // Driver overlap: each process (or instance output, or decl
        // initializer) owns the bits it writes; two owners on one bit clash.
        std::map<std::string, std::vector<std::pair<int, std::pair<uint32_t, uint32_t>>>> driven;
        int owner = 0;
        for (const auto& d : m.decls) {
            if (d.init) {
                const auto& s = symbols_.at(d.name);
                driven[d.name].push_back({owner, {s.lsb, s.msb}});
            }
            ++owner;
        }
        for (const auto& proc : m.processes) {
            check_process(m, proc);
            collect_drives(proc, owner, driven);
            ++owner;
        }
        std::set<std::string> inst_names;
        for (const auto& inst : m.instances) {
            if (symbols_.count(inst.inst_name) || param_names_.count(inst.inst_name) ||
                !inst_names.insert(inst.inst_name).second)
                throw ElaborationError("instance name '" + inst.inst_name +
                                           "' collides with another declaration",
                                       inst.site);
            check_instance(inst);
            ++owner;  // reserved; instance output drive overlap is checked after flattening
        }
        for (const auto& [name, spans] : driven) {
            for (size_t i = 0; i < spans.size(); ++i) {
                for (size_t j = i + 1; j < spans.size(); ++j) {
                    if (spans[i].first == spans[j].first)
                        continue;  // same process may write a bit several times
                    auto [alo, ahi] = spans[i].second;
                    auto [blo, bhi] = spans[j].second;
                    if (alo <= bhi && blo <= ahi)
                        throw DriveConflict("signal '" + name + "' is driven by multiple processes",
                                            m.site);
                }
            }
        }
    }

    void define(const std::string& name, SymbolInfo info, const SourceSite& site) {
        if (param_names_.count(name))
            throw ElaborationError("'" + name + "' is declared as both parameter and signal", site);
        if (!symbols_.emplace(name, info).second)
            throw ElaborationError("duplicate declaration of '" + name + "'", site);
        if (info.has_range && info.msb - info.lsb + 1 > 4096)
            throw ElaborationError("'" + name + "' is wider than 4096 bits", site);
    }

    const SymbolInfo& resolve(const std::string& name, const SourceSite& site) {
        auto it = symbols_.find(name);
        if (it == symbols_.end())
            throw UnresolvedIdentifier("unknown identifier '" + name + "'", site);
        return it->second;
    }

    void check_select(const std::string& base, uint32_t msb, uint32_t lsb,
                      const SourceSite& site) {
        const auto& s = resolve(base, site);
        if (!s.has_range)
            throw ElaborationError("cannot select bits of 1-bit signal '" + base + "'", site);
        if (msb > s.msb || lsb < s.lsb)
            throw ElaborationError("select [" + std::to_string(msb) + ":" + std::to_string(lsb) +
                                       "] is outside '" + base + "' [" + std::to_string(s.msb) +
                                       ":" + std::to_string(s.lsb) + "]",
                                   site);
    }

    void check_expr(const Expr& e) {
        switch (e.kind) {
        case Expr::Kind::Ident:
            if (!param_names_.count(e.ident))
                resolve(e.ident, e.site);
            break;
        case Expr::Kind::Select:
            check_select(e.ident, e.sel_msb, e.sel_lsb, e.site);
            break;
        default:
            for (const auto& op : e.ops)
                check_expr(*op);
            break;
        }
    }

    void check_lvalue(const LValue& lv, bool procedural) {
        const auto& s = resolve(lv.name, lv.site);
        if (s.dir == Direction::Input)
            throw ElaborationError("cannot assign to input port '" + lv.name + "'", lv.site);
        if (procedural && s.kind == NetKind::Wire)
            throw ElaborationError("procedural assignment to wire '" + lv.name + "'", lv.site);
        if (!procedural && s.kind == NetKind::Reg)
            throw ElaborationError("continuous assignment to reg '" + lv.name + "'", lv.site);
        if (lv.has_range)
            check_select(lv.name, lv.msb, lv.lsb, lv.site);
    }

    void check_stmt(const Stmt& s, bool procedural) {
        switch (s.kind) {
        case Stmt::Kind::Assign:
            check_lvalue(s.lhs, procedural);
            check_expr(*s.rhs);
            break;
        case Stmt::Kind::If:
            check_expr(*s.cond);
            for (const auto& st : s.then_body)
                check_stmt(*st, procedural);
            for (const auto& st : s.else_body)
                check_stmt(*st, procedural);
            break;
        case Stmt::Kind::Case:
            check_expr(*s.sel);
            for (const auto& item : s.items) {
                for (const auto& l : item.labels)
                    check_expr(*l);
                for (const auto& st : item.body)
                    check_stmt(*st, procedural);
            }
            break;
        }
    }

    void check_process(const ModuleDecl& m, const ProcessDecl& proc) {
        if (proc.kind == ProcessDecl::Kind::Clocked) {
            const auto& clk = resolve(proc.clock, proc.site);
            if (clk.width() != 1)
                throw ElaborationError("clock '" + proc.clock + "' of module '" + m.name +
                                           "' must be 1 bit wide",
                                       proc.site);
        }
        bool procedural = proc.kind != ProcessDecl::Kind::Continuous;
        for (const auto& st : proc.body)
            check_stmt(*st, procedural);
    }

    void collect_stmt_drives(const Stmt& s, int owner,
                             std::map<std::string, std::vector<std::pair<int, std::pair<uint32_t, uint32_t>>>>& out) {
        switch (s.kind) {
        case Stmt::Kind::Assign: {
            const auto& sym = symbols_.at(s.lhs.name);
            uint32_t lo = s.lhs.has_range ? s.lhs.lsb : sym.lsb;
            uint32_t hi = s.lhs.has_range ? s.lhs.msb : sym.msb;
            if (!sym.has_range)
                lo = hi = 0;
            out[s.lhs.name].push_back({owner, {lo, hi}});
            break;
        }
        case Stmt::Kind::If:
            for (const auto& st : s.then_body)
                collect_stmt_drives(*st, owner, out);
            for (const auto& st : s.else_body)
                collect_stmt_drives(*st, owner, out);
            break;
        case Stmt::Kind::Case:
            for (const auto& item : s.items)
                for (const auto& st : item.body)
                    collect_stmt_drives(*st, owner, out);
            break;
        }
    }

    void collect_drives(const ProcessDecl& proc, int owner,
                        std::map<std::string, std::vector<std::pair<int, std::pair<uint32_t, uint32_t>>>>& out) {
        for (const auto& st : proc.body)
            collect_stmt_drives(*st, owner, out);
    }

    void check_instance(const Instance& inst) {
        const ModuleDecl* target = ast_.find_module(inst.module_name);
        if (!target)
            throw UnresolvedIdentifier("unknown module '" + inst.module_name + "'", inst.site);
        bool named = !inst.conns.empty() && !inst.conns[0].port.empty();
        if (named) {
            std::set<std::string> seen;
            for (const auto& c : inst.conns) {
                bool found = false;
                for (const auto& p : target->ports)
                    if (p.name == c.port)
                        found = true;
                if (!found)
                    throw UnresolvedIdentifier("module '" + inst.module_name + "' has no port '" +
                                                   c.port + "'",
                                               c.site);
                if (!seen.insert(c.port).second)
                    throw ElaborationError("port '" + c.port + "' connected twice", c.site);
            }
        } else if (inst.conns.size() != target->ports.size()) {
            throw ElaborationError("instance '" + inst.inst_name + "' has " +
                                       std::to_string(inst.conns.size()) + " connections but '" +
                                       inst.module_name + "' has " +
                                       std::to_string(target->ports.size()) + " ports",
                                   inst.site);
        }
        for (const auto& c : inst.conns)
            if (c.expr)
                check_expr(*c.expr);
    }
};

} // namespace

Ast parse_rtl(const SourceUnit& unit) {
    Ast ast;
    for (const auto& [path, text] : unit.files) {
        Lexer lex(path, text);
        Parser parser(lex.run());
        parser.parse_into(ast);
    }
    Validator(ast).run();
    if (!unit.top_module.empty() && !ast.find_module(unit.top_module))
        throw ElaborationError("top module '" + unit.top_module + "' not found", SourceSite{});
    return ast;
}

Ast parse_text(const std::string& text, const std::string& path) {
    SourceUnit unit;
    unit.files.emplace_back(path, text);
    return parse_rtl(unit);
}

ExprPtr parse_expression(const std::string& text, const std::string& path) {
    Lexer lex(path, text, /*flat_names=*/true);
    Parser parser(lex.run());
    return parser.parse_lone_expr();
}

} // namespace hyperflow
