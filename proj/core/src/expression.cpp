#include "torus/expression.hpp"

#include <cctype>
#include <cmath>

namespace torus {

struct Expression::Node {
    enum class Kind { number, imaginary, var_x, var_xi, var_t, angle, call, binary, power, negate };
    Kind kind;
    double number = 0;
    int index = 0;           // 0-based axis for var_x / var_xi
    char op = 0;             // + - * /
    int exponent = 0;        // for power
    std::string fn;          // exp / cos / sin
    std::shared_ptr<const Node> lhs, rhs;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

struct Parser {
    const std::string& src;
    std::size_t pos = 0;

    explicit Parser(const std::string& s) : src(s) {}

    void skip_ws() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos])))
            ++pos;
    }
    bool eat(char c) {
        skip_ws();
        if (pos < src.size() && src[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    char peek() {
        skip_ws();
        return pos < src.size() ? src[pos] : '\0';
    }
    [[noreturn]] void fail(const std::string& msg) { throw parse_error(msg, pos); }

    NodePtr parse_expression() {
        auto lhs = parse_term();
        while (true) {
            skip_ws();
            if (pos < src.size() && (src[pos] == '+' || src[pos] == '-')) {
                char op = src[pos++];
                auto rhs = parse_term();
                auto node = std::make_shared<Node>();
                node->kind = Node::Kind::binary;
                node->op = op;
                node->lhs = lhs;
                node->rhs = rhs;
                lhs = node;
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_term() {
        auto lhs = parse_factor();
        while (true) {
            skip_ws();
            if (pos < src.size() && (src[pos] == '*' || src[pos] == '/')) {
                char op = src[pos++];
                auto rhs = parse_factor();
                auto node = std::make_shared<Node>();
                node->kind = Node::Kind::binary;
                node->op = op;
                node->lhs = lhs;
                node->rhs = rhs;
                lhs = node;
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_factor() {
        auto base = parse_unary();
        skip_ws();
        if (pos < src.size() && src[pos] == '^') {
            ++pos;
            skip_ws();
            bool neg = eat('-');
            std::size_t start = pos;
            while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos])))
                ++pos;
            if (pos == start) fail("expected an integer exponent");
            int e = std::stoi(src.substr(start, pos - start));
            auto node = std::make_shared<Node>();
            node->kind = Node::Kind::power;
            node->exponent = neg ? -e : e;
            node->lhs = base;
            return node;
        }
        return base;
    }

    NodePtr parse_unary() {
        if (eat('-')) {
            auto node = std::make_shared<Node>();
            node->kind = Node::Kind::negate;
            node->lhs = parse_unary();
            return node;
        }
        return parse_primary();
    }

    NodePtr parse_primary() {
        skip_ws();
        if (pos >= src.size()) fail("unexpected end of expression");
        char c = src[pos];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t start = pos;
            while (pos < src.size() &&
                   (std::isdigit(static_cast<unsigned char>(src[pos])) ||
                    src[pos] == '.' || src[pos] == 'e' || src[pos] == 'E' ||
                    ((src[pos] == '+' || src[pos] == '-') && pos > start &&
                     (src[pos - 1] == 'e' || src[pos - 1] == 'E'))))
                ++pos;
            auto node = std::make_shared<Node>();
            node->kind = Node::Kind::number;
            try {
                node->number = std::stod(src.substr(start, pos - start));
            } catch (const std::exception&) {
                pos = start;
                fail("malformed number");
            }
            return node;
        }
        if (c == '(') {
            ++pos;
            auto inner = parse_expression();
            if (!eat(')')) fail("expected ')'");
            return inner;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos;
            while (pos < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[pos])) ||
                    src[pos] == '_'))
                ++pos;
            std::string name = src.substr(start, pos - start);
            if (name == "i") {
                auto node = std::make_shared<Node>();
                node->kind = Node::Kind::imaginary;
                return node;
            }
            if (name == "t") {
                auto node = std::make_shared<Node>();
                node->kind = Node::Kind::var_t;
                return node;
            }
            if (name == "pi") {
                auto node = std::make_shared<Node>();
                node->kind = Node::Kind::number;
                node->number = pi;
                return node;
            }
            if (name.rfind("xi", 0) == 0 && name.size() > 2) {
                auto node = std::make_shared<Node>();
                node->kind = Node::Kind::var_xi;
                node->index = std::stoi(name.substr(2)) - 1;
                if (node->index < 0 || node->index > 2) {
                    pos = start;
                    fail("frequency variable index out of range");
                }
                return node;
            }
            if (name[0] == 'x' && name.size() > 1 &&
                std::isdigit(static_cast<unsigned char>(name[1]))) {
                auto node = std::make_shared<Node>();
                node->kind = Node::Kind::var_x;
                node->index = std::stoi(name.substr(1)) - 1;
                if (node->index < 0 || node->index > 2) {
                    pos = start;
                    fail("space variable index out of range");
                }
                return node;
            }
            if (name == "ang") {
                if (!eat('(')) fail("expected '(' after ang");
                skip_ws();
                std::size_t astart = pos;
                while (pos < src.size() &&
                       std::isalnum(static_cast<unsigned char>(src[pos])))
                    ++pos;
                if (src.substr(astart, pos - astart) != "xi") {
                    pos = astart;
                    fail("ang expects the whole frequency vector: ang(xi)");
                }
                if (!eat(')')) fail("expected ')'");
                auto node = std::make_shared<Node>();
                node->kind = Node::Kind::angle;
                return node;
            }
            if (name == "exp" || name == "cos" || name == "sin") {
                if (!eat('(')) fail("expected '(' after function name");
                auto arg = parse_expression();
                if (!eat(')')) fail("expected ')'");
                auto node = std::make_shared<Node>();
                node->kind = Node::Kind::call;
                node->fn = name;
                node->lhs = arg;
                return node;
            }
            pos = start;
            fail("unknown identifier '" + name + "'");
        }
        fail(std::string("unexpected character '") + c + "'");
    }
};

cplx eval_node(const Node& node, const std::vector<double>& x,
               const std::vector<double>& xi, double t) {
    switch (node.kind) {
        case Node::Kind::number: return cplx(node.number, 0.0);
        case Node::Kind::imaginary: return cplx(0.0, 1.0);
        case Node::Kind::var_t: return cplx(t, 0.0);
        case Node::Kind::var_x:
            if (std::size_t(node.index) >= x.size())
                throw config_error("expression references x beyond the dimension");
            return cplx(x[std::size_t(node.index)], 0.0);
        case Node::Kind::var_xi:
            if (std::size_t(node.index) >= xi.size())
                throw config_error("expression references xi beyond the dimension");
            return cplx(xi[std::size_t(node.index)], 0.0);
        case Node::Kind::angle: {
            double r2 = 0;
            for (double q : xi) r2 += q * q;
            return cplx(std::sqrt(1.0 + r2), 0.0);
        }
        case Node::Kind::call: {
            cplx a = eval_node(*node.lhs, x, xi, t);
            if (node.fn == "exp") return std::exp(a);
            if (node.fn == "cos") return std::cos(a);
            return std::sin(a);
        }
        case Node::Kind::negate: return -eval_node(*node.lhs, x, xi, t);
        case Node::Kind::power: {
            cplx base = eval_node(*node.lhs, x, xi, t);
            int e = node.exponent;
            cplx acc = 1.0;
            cplx b = e < 0 ? 1.0 / base : base;
            for (int k = 0; k < std::abs(e); ++k) acc *= b;
            return acc;
        }
        case Node::Kind::binary: {
            cplx a = eval_node(*node.lhs, x, xi, t);
            cplx b = eval_node(*node.rhs, x, xi, t);
            switch (node.op) {
                case '+': return a + b;
                case '-': return a - b;
                case '*': return a * b;
                default: return a / b;
            }
        }
    }
    throw error("corrupt expression node");
}

bool depends(const Node& node, Node::Kind kind) {
    if (node.kind == kind) return true;
    if (node.kind == Node::Kind::angle && kind == Node::Kind::var_xi) return true;
    if (node.lhs && depends(*node.lhs, kind)) return true;
    if (node.rhs && depends(*node.rhs, kind)) return true;
    return false;
}

}  // namespace

Expression Expression::parse(const std::string& source) {
    Parser p(source);
    Expression e;
    e.root_ = p.parse_expression();
    p.skip_ws();
    if (p.pos != source.size()) throw parse_error("trailing input", p.pos);
    e.source_ = source;
    return e;
}

cplx Expression::eval(const std::vector<double>& x, const std::vector<double>& xi,
                      double t) const {
    if (!root_) throw config_error("empty expression");
    return eval_node(*root_, x, xi, t);
}

bool Expression::depends_on_x() const { return root_ && depends(*root_, Node::Kind::var_x); }
bool Expression::depends_on_xi() const { return root_ && depends(*root_, Node::Kind::var_xi); }
bool Expression::depends_on_t() const { return root_ && depends(*root_, Node::Kind::var_t); }

SymbolTable symbol_from_expression(const Expression& e, const FrequencyBox& box,
                                   int grid_size, SymbolOrder order, double t,
                                   bool check_smoothness) {
    return SymbolTable::from_rule(
        box, grid_size, order,
        [&e, t](const std::vector<double>& x, const LatticePoint& xi) {
            std::vector<double> q(std::size_t(xi.dim()), 0.0);
            for (int j = 0; j < xi.dim(); ++j) q[std::size_t(j)] = double(xi[j]);
            return e.eval(x, q, t);
        },
        check_smoothness);
}

LatticeFunction lattice_from_expression(const Expression& e, int n, long bound,
                                        double t) {
    std::vector<double> x(std::size_t(n), 0.0);
    return LatticeFunction(n, bound, [e, x, t](const LatticePoint& xi) {
        std::vector<double> q(std::size_t(xi.dim()), 0.0);
        for (int j = 0; j < xi.dim(); ++j) q[std::size_t(j)] = double(xi[j]);
        return e.eval(x, q, t);
    });
}

GridFunction grid_function_from_expression(const Expression& e,
                                           const FrequencyBox& box, int grid_size,
                                           double t) {
    std::vector<double> q(std::size_t(box.n), 0.0);
    return GridFunction::from_rule(box, grid_size,
                                   [&e, &q, t](const std::vector<double>& x) {
                                       return e.eval(x, q, t);
                                   });
}

}  // namespace torus
