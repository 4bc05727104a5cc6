#include "subexp/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <vector>

namespace subexp {

namespace {

// Expression tree evaluated against the argument vector. Plain recursive
// structure; specs in practice are a handful of nodes.
struct Node {
    virtual ~Node() = default;
    virtual double eval(std::span<const double> x) const = 0;
};
using NodePtr = std::unique_ptr<Node>;

struct Constant : Node {
    double value;
    explicit Constant(double v) : value(v) {}
    double eval(std::span<const double>) const override { return value; }
};

struct Variable : Node {
    int index; // zero-based
    explicit Variable(int i) : index(i) {}
    double eval(std::span<const double> x) const override { return x[index]; }
};

struct Binary : Node {
    char op;
    NodePtr lhs, rhs;
    Binary(char o, NodePtr l, NodePtr r) : op(o), lhs(std::move(l)), rhs(std::move(r)) {}
    double eval(std::span<const double> x) const override {
        double a = lhs->eval(x), b = rhs->eval(x);
        switch (op) {
            case '+': return a + b;
            case '-': return a - b;
            case '*': return a * b;
            default: return a / b;
        }
    }
};

struct Negate : Node {
    NodePtr inner;
    explicit Negate(NodePtr n) : inner(std::move(n)) {}
    double eval(std::span<const double> x) const override { return -inner->eval(x); }
};

// Whole-sample statistic used as a bare identifier inside an expression:
// "2*mean" is twice the mean of all coordinates.
struct Builtin : Node {
    enum class Which { mean, median, max, min } which;
    explicit Builtin(Which w) : which(w) {}
    double eval(std::span<const double> x) const override {
        switch (which) {
            case Which::mean: {
                double s = 0.0;
                for (double v : x) s += v;
                return s / x.size();
            }
            case Which::median: {
                std::vector<double> v(x.begin(), x.end());
                std::sort(v.begin(), v.end());
                std::size_t n = v.size();
                return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
            }
            case Which::max: return *std::max_element(x.begin(), x.end());
            default: return *std::min_element(x.begin(), x.end());
        }
    }
};

enum class Fn { min, max, abs, sin, cos, exp };

struct Call : Node {
    Fn fn;
    std::vector<NodePtr> args;
    Call(Fn f, std::vector<NodePtr> a) : fn(f), args(std::move(a)) {}
    double eval(std::span<const double> x) const override {
        switch (fn) {
            case Fn::min: {
                double m = args[0]->eval(x);
                for (std::size_t i = 1; i < args.size(); ++i) m = std::min(m, args[i]->eval(x));
                return m;
            }
            case Fn::max: {
                double m = args[0]->eval(x);
                for (std::size_t i = 1; i < args.size(); ++i) m = std::max(m, args[i]->eval(x));
                return m;
            }
            case Fn::abs: return std::abs(args[0]->eval(x));
            case Fn::sin: return std::sin(args[0]->eval(x));
            case Fn::cos: return std::cos(args[0]->eval(x));
            default: return std::exp(args[0]->eval(x));
        }
    }
};

class Parser {
public:
    Parser(const std::string& src, int arity) : src_(src), arity_(arity) {}

    NodePtr parse() {
        NodePtr e = expression();
        skip_ws();
        if (pos_ != src_.size()) throw ParseError("unexpected trailing input", pos_);
        return e;
    }

private:
    const std::string& src_;
    int arity_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool consume(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }

    NodePtr expression() {
        NodePtr lhs = term();
        for (;;) {
            if (consume('+')) lhs = std::make_unique<Binary>('+', std::move(lhs), term());
            else if (consume('-')) lhs = std::make_unique<Binary>('-', std::move(lhs), term());
            else return lhs;
        }
    }

    NodePtr term() {
        NodePtr lhs = factor();
        for (;;) {
            if (consume('*')) lhs = std::make_unique<Binary>('*', std::move(lhs), factor());
            else if (consume('/')) lhs = std::make_unique<Binary>('/', std::move(lhs), factor());
            else return lhs;
        }
    }

    NodePtr factor() {
        if (consume('-')) return std::make_unique<Negate>(factor());
        if (consume('+')) return factor();
        return primary();
    }

    NodePtr primary() {
        skip_ws();
        if (pos_ >= src_.size()) throw ParseError("unexpected end of expression", pos_);
        char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = expression();
            if (!consume(')')) throw ParseError("expected ')'", pos_);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    NodePtr number() {
        const char* begin = src_.c_str() + pos_;
        char* end = nullptr;
        double v = std::strtod(begin, &end);
        if (end == begin) throw ParseError("malformed number", pos_);
        pos_ += static_cast<std::size_t>(end - begin);
        return std::make_unique<Constant>(v);
    }

    NodePtr identifier() {
        std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
            ++pos_;
        std::string name = src_.substr(start, pos_ - start);
        if (name.size() >= 2 && name[0] == 'x' &&
            std::isdigit(static_cast<unsigned char>(name[1]))) {
            int idx = std::atoi(name.c_str() + 1);
            if (idx < 1 || idx > arity_)
                throw ParseError("variable " + name + " out of range for arity " +
                                     std::to_string(arity_),
                                 start);
            return std::make_unique<Variable>(idx - 1);
        }
        if (name == "mean") return std::make_unique<Builtin>(Builtin::Which::mean);
        if (name == "median") return std::make_unique<Builtin>(Builtin::Which::median);
        // Bare max/min (no call parens) are the whole-sample statistics.
        if ((name == "max" || name == "min") && peek() != '(')
            return std::make_unique<Builtin>(name == "max" ? Builtin::Which::max
                                                           : Builtin::Which::min);
        Fn fn;
        std::size_t min_args = 1, max_args = 1;
        if (name == "min") { fn = Fn::min; min_args = 2; max_args = 64; }
        else if (name == "max") { fn = Fn::max; min_args = 2; max_args = 64; }
        else if (name == "abs") fn = Fn::abs;
        else if (name == "sin") fn = Fn::sin;
        else if (name == "cos") fn = Fn::cos;
        else if (name == "exp") fn = Fn::exp;
        else throw ParseError("unknown identifier '" + name + "'", start);

        if (!consume('(')) throw ParseError("expected '(' after '" + name + "'", pos_);
        std::vector<NodePtr> args;
        args.push_back(expression());
        while (consume(',')) args.push_back(expression());
        if (!consume(')')) throw ParseError("expected ')' in call to '" + name + "'", pos_);
        if (args.size() < min_args || args.size() > max_args)
            throw ParseError("'" + name + "' takes " + std::to_string(min_args) +
                                 (max_args > min_args ? "+" : "") + " argument(s)",
                             start);
        return std::make_unique<Call>(fn, std::move(args));
    }
};

std::string trimmed(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

} // namespace

TestFunction parse_function(const std::string& spec, int arity) {
    if (arity < 1) throw InputError("parse_function: arity must be >= 1");
    std::string name = trimmed(spec);
    if (name == "max") return TestFunction::max_of(arity);
    if (name == "min") return TestFunction::min_of(arity);
    if (name == "mean") return TestFunction::mean_of(arity);
    if (name == "median") return TestFunction::median_of(arity);
    if (name.empty()) throw ParseError("empty function spec", 0);

    Parser parser(name, arity);
    std::shared_ptr<Node> root{parser.parse()};
    return TestFunction(name, arity, [root](std::span<const double> x) { return root->eval(x); });
}

} // namespace subexp
