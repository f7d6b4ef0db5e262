#include "nncalc/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace nncalc::expr {

namespace {

enum class Tok {
    Number, Ident,
    Plus, Minus, Star, Slash, Caret,
    NnPlus, NnMinus, NnStar, NnSlash,
    LParen, RParen,
    End,
};

struct Token {
    Tok type = Tok::End;
    double number = 0.0;
    std::string ident;
    int line = 1;
    int col = 1;
};

const char* tok_name(Tok t) {
    switch (t) {
    case Tok::Number: return "number";
    case Tok::Ident: return "identifier";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::Caret: return "'^'";
    case Tok::NnPlus: return "'~+'";
    case Tok::NnMinus: return "'~-'";
    case Tok::NnStar: return "'~*'";
    case Tok::NnSlash: return "'~/'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::End: return "end of input";
    }
    return "?";
}

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
        skip_ws();
        current_.line = line_;
        current_.col = col_;
        if (pos_ >= src_.size()) {
            current_.type = Tok::End;
            return;
        }
        char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            lex_number();
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            lex_ident();
            return;
        }
        switch (c) {
        case '+': one(Tok::Plus); return;
        case '-': one(Tok::Minus); return;
        case '*': one(Tok::Star); return;
        case '/': one(Tok::Slash); return;
        case '^': one(Tok::Caret); return;
        case '(': one(Tok::LParen); return;
        case ')': one(Tok::RParen); return;
        case '~': {
            if (pos_ + 1 < src_.size()) {
                char d = src_[pos_ + 1];
                Tok t = d == '+'   ? Tok::NnPlus
                        : d == '-' ? Tok::NnMinus
                        : d == '*' ? Tok::NnStar
                        : d == '/' ? Tok::NnSlash
                                   : Tok::End;
                if (t != Tok::End) {
                    current_.type = t;
                    consume(2);
                    return;
                }
            }
            throw ParseError("expected '+', '-', '*' or '/' after '~'", line_, col_);
        }
        default:
            throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
        }
    }

    void one(Tok t) {
        current_.type = t;
        consume(1);
    }

    void lex_number() {
        std::size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
            ++pos_;
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                ++pos_;
        }
        // exponent only when followed by a digit or signed digit
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < src_.size() && (src_[p] == '+' || src_[p] == '-'))
                ++p;
            if (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) {
                pos_ = p;
                while (pos_ < src_.size() &&
                       std::isdigit(static_cast<unsigned char>(src_[pos_])))
                    ++pos_;
            }
        }
        std::string text(src_.substr(start, pos_ - start));
        if (text == ".")
            throw ParseError("malformed number", line_, col_);
        current_.type = Tok::Number;
        current_.number = std::strtod(text.c_str(), nullptr);
        col_ += static_cast<int>(pos_ - start);
    }

    void lex_ident() {
        std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
            ++pos_;
        current_.type = Tok::Ident;
        current_.ident = std::string(src_.substr(start, pos_ - start));
        col_ += static_cast<int>(pos_ - start);
    }

    void skip_ws() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '\n') {
                ++line_;
                col_ = 1;
                ++pos_;
            } else if (c == ' ' || c == '\t' || c == '\r') {
                ++col_;
                ++pos_;
            } else {
                break;
            }
        }
    }

    void consume(std::size_t k) {
        pos_ += k;
        col_ += static_cast<int>(k);
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
    Token current_;
};

using NodePtr = std::shared_ptr<const Node>;

NodePtr make_number(double v) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Number;
    n->number = v;
    return n;
}

NodePtr make_constant(ConstantId c) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Constant;
    n->constant = c;
    return n;
}

NodePtr make_variable(int slot, std::string name) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Variable;
    n->slot = slot;
    n->name = std::move(name);
    return n;
}

NodePtr make_unary(UnaryOp op, NodePtr a) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Unary;
    n->un = op;
    n->a = std::move(a);
    return n;
}

NodePtr make_binary(BinaryOp op, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Binary;
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

bool lookup_function(const std::string& name, UnaryOp& out) {
    if (name == "ln") { out = UnaryOp::Ln; return true; }
    if (name == "exp") { out = UnaryOp::Exp; return true; }
    if (name == "sin") { out = UnaryOp::Sin; return true; }
    if (name == "cos") { out = UnaryOp::Cos; return true; }
    if (name == "sqrt") { out = UnaryOp::Sqrt; return true; }
    if (name == "abs") { out = UnaryOp::Abs; return true; }
    return false;
}

class Parser {
public:
    Parser(std::string_view src, std::span<const std::string> vars)
        : lex_(src), vars_(vars) {}

    NodePtr run() {
        NodePtr root = parse_nn_sum();
        const Token& t = lex_.peek();
        if (t.type != Tok::End)
            throw ParseError(std::string("unexpected ") + tok_name(t.type) +
                                 ", expected an operator or end of input",
                             t.line, t.col);
        return root;
    }

private:
    NodePtr parse_nn_sum() {
        NodePtr left = parse_nn_term();
        for (;;) {
            Tok t = lex_.peek().type;
            if (t != Tok::NnPlus && t != Tok::NnMinus)
                return left;
            lex_.take();
            left = make_binary(t == Tok::NnPlus ? BinaryOp::NnAdd : BinaryOp::NnSub,
                               left, parse_nn_term());
        }
    }

    NodePtr parse_nn_term() {
        NodePtr left = parse_sum();
        for (;;) {
            Tok t = lex_.peek().type;
            if (t != Tok::NnStar && t != Tok::NnSlash)
                return left;
            lex_.take();
            left = make_binary(t == Tok::NnStar ? BinaryOp::NnMul : BinaryOp::NnDiv,
                               left, parse_sum());
        }
    }

    NodePtr parse_sum() {
        NodePtr left = parse_term();
        for (;;) {
            Tok t = lex_.peek().type;
            if (t != Tok::Plus && t != Tok::Minus)
                return left;
            lex_.take();
            left = make_binary(t == Tok::Plus ? BinaryOp::Add : BinaryOp::Sub,
                               left, parse_term());
        }
    }

    NodePtr parse_term() {
        NodePtr left = parse_unary();
        for (;;) {
            Tok t = lex_.peek().type;
            if (t != Tok::Star && t != Tok::Slash)
                return left;
            lex_.take();
            left = make_binary(t == Tok::Star ? BinaryOp::Mul : BinaryOp::Div,
                               left, parse_unary());
        }
    }

    NodePtr parse_unary() {
        if (lex_.peek().type == Tok::Minus) {
            lex_.take();
            return make_unary(UnaryOp::Neg, parse_unary());
        }
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_primary();
        if (lex_.peek().type == Tok::Caret) {
            lex_.take();
            return make_binary(BinaryOp::Pow, base, parse_unary());
        }
        return base;
    }

    NodePtr parse_primary() {
        Token t = lex_.take();
        switch (t.type) {
        case Tok::Number:
            return make_number(t.number);
        case Tok::LParen: {
            NodePtr inner = parse_nn_sum();
            expect(Tok::RParen);
            return inner;
        }
        case Tok::Ident: {
            UnaryOp fn;
            if (lookup_function(t.ident, fn)) {
                expect(Tok::LParen);
                NodePtr arg = parse_nn_sum();
                expect(Tok::RParen);
                return make_unary(fn, std::move(arg));
            }
            if (t.ident == "e")
                return make_constant(ConstantId::E);
            if (t.ident == "pi")
                return make_constant(ConstantId::Pi);
            for (std::size_t i = 0; i < vars_.size(); ++i)
                if (vars_[i] == t.ident)
                    return make_variable(static_cast<int>(i), t.ident);
            throw UnknownIdentifierError(t.ident, t.line, t.col);
        }
        default:
            throw ParseError(std::string("unexpected ") + tok_name(t.type) +
                                 ", expected a number, identifier or '('",
                             t.line, t.col);
        }
    }

    void expect(Tok want) {
        const Token& t = lex_.peek();
        if (t.type != want)
            throw ParseError(std::string("expected ") + tok_name(want) + ", found " +
                                 tok_name(t.type),
                             t.line, t.col);
        lex_.take();
    }

    Lexer lex_;
    std::span<const std::string> vars_;
};

long double checked(long double v) {
    if (!std::isfinite(v))
        throw RangeError("expression produced a non-finite value");
    return v;
}

long double require_pos(long double v) {
    if (std::isnan(v))
        throw RangeError("operand of a '~' operator is not finite");
    if (v <= 0.0L)
        throw InvariantError("operand of a '~' operator must be strictly positive");
    return v;
}

// Same formulas and error behavior as the nn-arith kernel, carried out in
// long double so that difference quotients downstream keep the extra bits.
long double eval_node(const Node& n, std::span<const double> values) {
    switch (n.kind) {
    case Node::Kind::Number:
        return n.number;
    case Node::Kind::Constant:
        return n.constant == ConstantId::E ? std::numbers::e_v<long double>
                                           : std::numbers::pi_v<long double>;
    case Node::Kind::Variable:
        return values[static_cast<std::size_t>(n.slot)];
    case Node::Kind::Unary: {
        long double a = eval_node(*n.a, values);
        switch (n.un) {
        case UnaryOp::Neg: return -a;
        case UnaryOp::Ln: return checked(std::log(a));
        case UnaryOp::Exp: return checked(std::exp(a));
        case UnaryOp::Sin: return std::sin(a);
        case UnaryOp::Cos: return std::cos(a);
        case UnaryOp::Sqrt: return checked(std::sqrt(a));
        case UnaryOp::Abs: return std::fabs(a);
        }
        break;
    }
    case Node::Kind::Binary: {
        long double a = eval_node(*n.a, values);
        long double b = eval_node(*n.b, values);
        switch (n.op) {
        case BinaryOp::Add: return checked(a + b);
        case BinaryOp::Sub: return checked(a - b);
        case BinaryOp::Mul: return checked(a * b);
        case BinaryOp::Div: return checked(a / b);
        case BinaryOp::Pow: return checked(std::pow(a, b));
        case BinaryOp::NnAdd: return checked(require_pos(a) * require_pos(b));
        case BinaryOp::NnSub: return checked(require_pos(a) / require_pos(b));
        case BinaryOp::NnMul:
            return checked(std::exp(std::log(require_pos(a)) * std::log(require_pos(b))));
        case BinaryOp::NnDiv:
            if (require_pos(b) == 1.0L)
                throw DomainError("nn_div: divisor is the odot-zero (y = 1)");
            return checked(std::exp(std::log(require_pos(a)) / std::log(b)));
        }
        break;
    }
    }
    throw Error("corrupt expression tree");
}

int prec_of(BinaryOp op) {
    switch (op) {
    case BinaryOp::NnAdd:
    case BinaryOp::NnSub: return 1;
    case BinaryOp::NnMul:
    case BinaryOp::NnDiv: return 2;
    case BinaryOp::Add:
    case BinaryOp::Sub: return 3;
    case BinaryOp::Mul:
    case BinaryOp::Div: return 4;
    case BinaryOp::Pow: return 6;
    }
    return 7;
}

int prec_of(const Node& n) {
    switch (n.kind) {
    case Node::Kind::Binary: return prec_of(n.op);
    case Node::Kind::Unary: return n.un == UnaryOp::Neg ? 5 : 7;
    default: return 7;
    }
}

const char* op_text(BinaryOp op) {
    switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Pow: return "^";
    case BinaryOp::NnAdd: return "~+";
    case BinaryOp::NnSub: return "~-";
    case BinaryOp::NnMul: return "~*";
    case BinaryOp::NnDiv: return "~/";
    }
    return "?";
}

const char* fn_text(UnaryOp op) {
    switch (op) {
    case UnaryOp::Ln: return "ln";
    case UnaryOp::Exp: return "exp";
    case UnaryOp::Sin: return "sin";
    case UnaryOp::Cos: return "cos";
    case UnaryOp::Sqrt: return "sqrt";
    case UnaryOp::Abs: return "abs";
    case UnaryOp::Neg: break;
    }
    return "?";
}

void print_node(const Node& n, std::string& out);

void print_child(const Node& child, int parent_prec, bool needs_parens_on_tie,
                 std::string& out) {
    int cp = prec_of(child);
    bool parens = cp < parent_prec || (cp == parent_prec && needs_parens_on_tie);
    if (parens)
        out += '(';
    print_node(child, out);
    if (parens)
        out += ')';
}

void print_node(const Node& n, std::string& out) {
    switch (n.kind) {
    case Node::Kind::Number: {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", n.number);
        out += buf;
        return;
    }
    case Node::Kind::Constant:
        out += n.constant == ConstantId::E ? "e" : "pi";
        return;
    case Node::Kind::Variable:
        out += n.name;
        return;
    case Node::Kind::Unary:
        if (n.un == UnaryOp::Neg) {
            out += '-';
            print_child(*n.a, 5, false, out);
        } else {
            out += fn_text(n.un);
            out += '(';
            print_node(*n.a, out);
            out += ')';
        }
        return;
    case Node::Kind::Binary: {
        int p = prec_of(n.op);
        bool right_assoc = n.op == BinaryOp::Pow;
        print_child(*n.a, p, right_assoc, out);
        out += ' ';
        out += op_text(n.op);
        out += ' ';
        print_child(*n.b, p, !right_assoc, out);
        return;
    }
    }
}

bool node_references(const Node& n, std::string_view var) {
    switch (n.kind) {
    case Node::Kind::Variable:
        return n.name == var;
    case Node::Kind::Unary:
        return node_references(*n.a, var);
    case Node::Kind::Binary:
        return node_references(*n.a, var) || node_references(*n.b, var);
    default:
        return false;
    }
}

} // namespace

Expr Expr::parse(std::string_view source, std::span<const std::string> allowed_vars) {
    if (source.find_first_not_of(" \t\r\n") == std::string_view::npos)
        throw ParseError("empty expression", 1, 1);
    Expr e;
    e.vars_.assign(allowed_vars.begin(), allowed_vars.end());
    Parser p(source, e.vars_);
    e.root_ = p.run();
    return e;
}

Expr Expr::parse(std::string_view source, std::initializer_list<std::string> allowed_vars) {
    std::vector<std::string> vars(allowed_vars);
    return parse(source, std::span<const std::string>(vars));
}

double Expr::evaluate(std::span<const double> values) const {
    double v = static_cast<double>(evaluate_precise(values));
    if (!std::isfinite(v))
        throw RangeError("expression produced a non-finite value");
    return v;
}

long double Expr::evaluate_precise(std::span<const double> values) const {
    if (!root_)
        throw PreconditionError("evaluate called on an empty expression");
    if (values.size() < vars_.size())
        throw PreconditionError("evaluate: not enough values for the declared variables");
    return eval_node(*root_, values);
}

double Expr::evaluate(const std::map<std::string, double>& bindings) const {
    std::vector<double> values(vars_.size());
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        auto it = bindings.find(vars_[i]);
        if (it == bindings.end())
            throw PreconditionError("evaluate: unbound variable '" + vars_[i] + "'");
        values[i] = it->second;
    }
    return evaluate(values);
}

std::string Expr::str() const {
    if (!root_)
        return "";
    std::string out;
    print_node(*root_, out);
    return out;
}

bool Expr::references(std::string_view var) const {
    return root_ && node_references(*root_, var);
}

} // namespace nncalc::expr
