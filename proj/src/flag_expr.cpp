#include "overlap/harness.hpp"

#include <algorithm>
#include <cctype>
#include <string_view>

namespace overlap::harness {

struct FlagExpr::Node {
    enum class Op { constant, flag, negate, conj, disj };
    Op op = Op::constant;
    bool value = false;
    std::string name;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
};

namespace {

using NodePtr = std::shared_ptr<const FlagExpr::Node>;
using Op = FlagExpr::Node::Op;

bool is_name_char(char c)
{
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
}

class Parser {
public:
    explicit Parser(const std::string& text) : text_(text) {}

    NodePtr parse()
    {
        auto node = disjunction();
        skip_space();
        if (pos_ != text_.size())
            fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return node;
    }

    std::vector<std::string> names;

private:
    NodePtr disjunction()
    {
        auto lhs = conjunction();
        while (accept("||"))
            lhs = binary(Op::disj, lhs, conjunction());
        return lhs;
    }

    NodePtr conjunction()
    {
        auto lhs = unary();
        while (accept("&&"))
            lhs = binary(Op::conj, lhs, unary());
        return lhs;
    }

    NodePtr unary()
    {
        if (accept("!")) {
            auto node = std::make_shared<FlagExpr::Node>();
            node->op = Op::negate;
            node->lhs = unary();
            return node;
        }
        if (accept("(")) {
            auto inner = disjunction();
            if (!accept(")"))
                fail("missing ')'");
            return inner;
        }
        return atom();
    }

    NodePtr atom()
    {
        skip_space();
        std::size_t start = pos_;
        while (pos_ < text_.size() && is_name_char(text_[pos_]))
            ++pos_;
        if (start == pos_)
            fail(pos_ < text_.size() ? "unexpected '" + std::string(1, text_[pos_]) + "'"
                                     : "unexpected end of expression");
        auto node = std::make_shared<FlagExpr::Node>();
        node->name = text_.substr(start, pos_ - start);
        if (node->name == "true" || node->name == "false") {
            node->value = node->name == "true";
        } else {
            node->op = Op::flag;
            if (std::find(names.begin(), names.end(), node->name) == names.end())
                names.push_back(node->name);
        }
        return node;
    }

    static NodePtr binary(Op op, NodePtr lhs, NodePtr rhs)
    {
        auto node = std::make_shared<FlagExpr::Node>();
        node->op = op;
        node->lhs = std::move(lhs);
        node->rhs = std::move(rhs);
        return node;
    }

    bool accept(std::string_view token)
    {
        skip_space();
        if (text_.compare(pos_, token.size(), token) != 0)
            return false;
        pos_ += token.size();
        return true;
    }

    void skip_space()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    [[noreturn]] void fail(const std::string& what) const
    {
        throw ValidationError("precondition '" + text_ + "': " + what);
    }

    const std::string& text_;
    std::size_t pos_ = 0;
};

bool evaluate(const FlagExpr::Node& node, const std::map<std::string, bool>& flags)
{
    switch (node.op) {
    case Op::constant: return node.value;
    case Op::flag: {
        auto it = flags.find(node.name);
        return it != flags.end() && it->second;
    }
    case Op::negate: return !evaluate(*node.lhs, flags);
    case Op::conj: return evaluate(*node.lhs, flags) && evaluate(*node.rhs, flags);
    case Op::disj: return evaluate(*node.lhs, flags) || evaluate(*node.rhs, flags);
    }
    return false;
}

} // namespace

FlagExpr FlagExpr::parse(const std::string& text)
{
    Parser parser(text);
    FlagExpr expr;
    expr.root_ = parser.parse();
    expr.names_ = std::move(parser.names);
    expr.text_ = text;
    return expr;
}

bool FlagExpr::eval(const std::map<std::string, bool>& flags) const
{
    return evaluate(*root_, flags);
}

} // namespace overlap::harness
