#include "deckmap/parse.hpp"

#include "deckmap/error.hpp"

#include <cctype>
#include <optional>

namespace deckmap {

namespace {

struct Token {
    enum class Type { Number, Ident, Op, LParen, RParen, End };
    Type type = Type::End;
    std::string text;
    GaussianRational value;
    /// Integer literal without fraction, decimal point or i suffix.
    bool plain_integer = false;
    std::size_t pos = 0;
};

bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

class Lexer {
public:
    explicit Lexer(const std::string& src) : s_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            skip_space();
            Token t;
            t.pos = i_;
            if (i_ >= s_.size()) {
                t.type = Token::Type::End;
                out.push_back(t);
                return out;
            }
            char c = s_[i_];
            if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && i_ + 1 < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_ + 1])))) {
                out.push_back(number());
            } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::size_t start = i_;
                while (i_ < s_.size() && ident_char(s_[i_])) {
                    ++i_;
                }
                t.type = Token::Type::Ident;
                t.text = s_.substr(start, i_ - start);
                out.push_back(t);
            } else if (c == '+' || c == '-' || c == '*' || c == '/' || c == '^') {
                t.type = Token::Type::Op;
                t.text = std::string(1, c);
                ++i_;
                out.push_back(t);
            } else if (c == '(') {
                t.type = Token::Type::LParen;
                ++i_;
                out.push_back(t);
            } else if (c == ')') {
                t.type = Token::Type::RParen;
                ++i_;
                out.push_back(t);
            } else {
                throw ParseError(std::string("unexpected character '") + c + "'", i_);
            }
        }
    }

private:
    void skip_space() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) {
            ++i_;
        }
    }

    // Digits with an optional decimal part.
    std::optional<Rational> unsigned_decimal() {
        std::size_t start = i_;
        std::string digits;
        std::size_t scale = 0;
        bool dot = false;
        while (i_ < s_.size()) {
            char c = s_[i_];
            if (std::isdigit(static_cast<unsigned char>(c))) {
                digits.push_back(c);
                if (dot) {
                    ++scale;
                }
            } else if (c == '.' && !dot) {
                dot = true;
            } else {
                break;
            }
            ++i_;
        }
        if (digits.empty()) {
            i_ = start;
            return std::nullopt;
        }
        Rational q(mpz_class(digits, 10));
        if (scale > 0) {
            mpz_class den;
            mpz_ui_pow_ui(den.get_mpz_t(), 10, scale);
            q /= Rational(den);
        }
        q.canonicalize();
        plain_ = plain_ && !dot;
        return q;
    }

    bool imaginary_suffix() const {
        return i_ < s_.size() && s_[i_] == 'i' && (i_ + 1 >= s_.size() || !ident_char(s_[i_ + 1]));
    }

    Token number() {
        Token t;
        t.type = Token::Type::Number;
        t.pos = i_;
        plain_ = true;
        Rational q = *unsigned_decimal();
        // p/q directly followed by i is a single imaginary literal.
        if (i_ + 1 < s_.size() && s_[i_] == '/' && std::isdigit(static_cast<unsigned char>(s_[i_ + 1]))) {
            std::size_t save = i_;
            bool save_plain = plain_;
            ++i_;
            auto den = unsigned_decimal();
            if (den && imaginary_suffix() && sgn(*den) != 0) {
                q /= *den;
                plain_ = false;
            } else {
                i_ = save;
                plain_ = save_plain;
            }
        }
        if (imaginary_suffix()) {
            ++i_;
            t.value = GaussianRational(0, q);
            plain_ = false;
        } else {
            t.value = GaussianRational(q);
        }
        t.plain_integer = plain_;
        t.text = s_.substr(t.pos, i_ - t.pos);
        return t;
    }

    const std::string& s_;
    std::size_t i_ = 0;
    bool plain_ = true;
};

using NodePtr = std::shared_ptr<const ExprNode>;

NodePtr make(ExprNode::Kind kind, std::size_t pos, std::vector<NodePtr> children = {}) {
    auto n = std::make_shared<ExprNode>();
    n->kind = kind;
    n->position = pos;
    n->children = std::move(children);
    return n;
}

// Binding powers: + - 10, * / 20, unary - 30, ^ 40.
class Parser {
public:
    explicit Parser(std::vector<Token> toks) : t_(std::move(toks)) {}

    NodePtr run() {
        NodePtr e = expr(0);
        if (peek().type != Token::Type::End) {
            throw ParseError("unexpected '" + describe(peek()) + "'", peek().pos);
        }
        return e;
    }

private:
    const Token& peek() const { return t_[k_]; }
    const Token& next() { return t_[k_++]; }

    static std::string describe(const Token& t) {
        switch (t.type) {
        case Token::Type::LParen:
            return "(";
        case Token::Type::RParen:
            return ")";
        case Token::Type::End:
            return "end of input";
        default:
            return t.text;
        }
    }

    static int infix_power(const Token& t) {
        if (t.type != Token::Type::Op) {
            return -1;
        }
        switch (t.text[0]) {
        case '+':
        case '-':
            return 10;
        case '*':
        case '/':
            return 20;
        case '^':
            return 40;
        default:
            return -1;
        }
    }

    NodePtr expr(int min_power) {
        NodePtr lhs = prefix();
        while (true) {
            const Token& op = peek();
            int p = infix_power(op);
            if (p <= min_power) {
                break;
            }
            next();
            if (op.text == "^") {
                const Token& e = next();
                if (e.type != Token::Type::Number || !e.plain_integer) {
                    throw ParseError("exponent must be a nonnegative integer literal", e.pos);
                }
                auto n = std::make_shared<ExprNode>();
                n->kind = ExprNode::Kind::Pow;
                n->position = op.pos;
                n->exponent = e.value.re().get_num().get_ui();
                if (!e.value.re().get_num().fits_ulong_p() || n->exponent > 4096) {
                    throw ParseError("exponent too large", e.pos);
                }
                n->children = {lhs};
                lhs = n;
                // Right associativity: a further ^ applies to the exponent,
                // which must stay a literal.
                if (peek().type == Token::Type::Op && peek().text == "^") {
                    throw ParseError("exponent must be a nonnegative integer literal", peek().pos);
                }
                continue;
            }
            NodePtr rhs = expr(p);
            ExprNode::Kind kind = op.text == "+"   ? ExprNode::Kind::Add
                                  : op.text == "-" ? ExprNode::Kind::Sub
                                  : op.text == "*" ? ExprNode::Kind::Mul
                                                   : ExprNode::Kind::Div;
            lhs = make(kind, op.pos, {lhs, rhs});
        }
        return lhs;
    }

    NodePtr prefix() {
        const Token& t = next();
        switch (t.type) {
        case Token::Type::Number: {
            auto n = std::make_shared<ExprNode>();
            n->kind = ExprNode::Kind::Literal;
            n->value = t.value;
            n->position = t.pos;
            return n;
        }
        case Token::Type::Ident: {
            auto n = std::make_shared<ExprNode>();
            n->position = t.pos;
            if (t.text == "z") {
                n->kind = ExprNode::Kind::Variable;
            } else if (t.text == "i") {
                n->kind = ExprNode::Kind::Literal;
                n->value = GaussianRational::i();
            } else {
                n->kind = ExprNode::Kind::Parameter;
                n->name = t.text;
            }
            return n;
        }
        case Token::Type::LParen: {
            NodePtr inner = expr(0);
            const Token& close = next();
            if (close.type != Token::Type::RParen) {
                throw ParseError("expected ')'", close.pos);
            }
            return inner;
        }
        case Token::Type::Op:
            if (t.text == "-") {
                return make(ExprNode::Kind::Neg, t.pos, {expr(30)});
            }
            if (t.text == "+") {
                return expr(30);
            }
            break;
        default:
            break;
        }
        throw ParseError("unexpected '" + describe(t) + "'", t.pos);
    }

    std::vector<Token> t_;
    std::size_t k_ = 0;
};

RationalMap constant(const GaussianRational& c) {
    return RationalMap(ComplexPoly::constant(c), ComplexPoly::constant(1));
}

RationalMap combine(const RationalMap& a, const RationalMap& b, ExprNode::Kind kind, std::size_t pos) {
    switch (kind) {
    case ExprNode::Kind::Add:
        return RationalMap(a.num() * b.den() + b.num() * a.den(), a.den() * b.den());
    case ExprNode::Kind::Sub:
        return RationalMap(a.num() * b.den() - b.num() * a.den(), a.den() * b.den());
    case ExprNode::Kind::Mul:
        return RationalMap(a.num() * b.num(), a.den() * b.den());
    case ExprNode::Kind::Div:
        if (b.num().is_zero()) {
            throw Error(ErrorKind::InvalidArgument, "division by zero at position " + std::to_string(pos));
        }
        return RationalMap(a.num() * b.den(), a.den() * b.num());
    default:
        throw Error(ErrorKind::InternalError, "not a binary operator");
    }
}

RationalMap eval(const ExprNode& n, const ParamBindings& params) {
    using K = ExprNode::Kind;
    switch (n.kind) {
    case K::Variable:
        return RationalMap::identity();
    case K::Literal:
        return constant(n.value);
    case K::Parameter: {
        auto it = params.find(n.name);
        if (it == params.end()) {
            throw Error(ErrorKind::UnboundParameter, "parameter '" + n.name + "' is not bound");
        }
        return constant(it->second);
    }
    case K::Neg: {
        RationalMap a = eval(*n.children[0], params);
        return RationalMap(-a.num(), a.den());
    }
    case K::Pow: {
        RationalMap base = eval(*n.children[0], params);
        RationalMap acc = constant(1);
        for (std::size_t e = n.exponent; e > 0; e >>= 1) {
            if (e & 1) {
                acc = combine(acc, base, K::Mul, n.position);
            }
            if (e > 1) {
                base = combine(base, base, K::Mul, n.position);
            }
        }
        return acc;
    }
    default:
        return combine(eval(*n.children[0], params), eval(*n.children[1], params), n.kind, n.position);
    }
}

void collect(const ExprNode& n, std::set<std::string>& out) {
    if (n.kind == ExprNode::Kind::Parameter) {
        out.insert(n.name);
    }
    for (const auto& c : n.children) {
        collect(*c, out);
    }
}

} // namespace

MapExpression MapExpression::parse(const std::string& source) {
    MapExpression e;
    e.source_ = source;
    e.root_ = Parser(Lexer(source).run()).run();
    return e;
}

std::set<std::string> MapExpression::parameters() const {
    std::set<std::string> out;
    collect(*root_, out);
    return out;
}

RationalMap MapExpression::evaluate(const ParamBindings& params) const {
    return eval(*root_, params);
}

RationalMap parse_map(const std::string& source, const ParamBindings& params) {
    return MapExpression::parse(source).evaluate(params);
}

std::pair<std::string, GaussianRational> parse_binding(const std::string& text) {
    auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw Error(ErrorKind::InvalidArgument, "expected name=value, got '" + text + "'");
    }
    std::string name = text.substr(0, eq);
    for (char c : name) {
        if (!ident_char(c)) {
            throw Error(ErrorKind::InvalidArgument, "bad parameter name '" + name + "'");
        }
    }
    if (name == "z" || name == "i" || std::isdigit(static_cast<unsigned char>(name[0]))) {
        throw Error(ErrorKind::InvalidArgument, "'" + name + "' cannot be a parameter name");
    }
    RationalMap v = parse_map(text.substr(eq + 1));
    if (v.num().degree_or_zero() != 0 || v.den().degree_or_zero() != 0) {
        throw Error(ErrorKind::InvalidArgument, "parameter value must be a constant: '" + text + "'");
    }
    GaussianRational value = v.num().is_zero() ? GaussianRational(0) : v.num().coeff(0) / v.den().coeff(0);
    return {name, value};
}

} // namespace deckmap
