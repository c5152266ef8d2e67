#include "tfode/rhs_expr.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <sstream>

#include "tfode/error.hpp"
#include "tfode/specfun.hpp"

namespace tfode {

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

struct FuncInfo {
  std::string_view name;
  ExprFunc func;
  std::size_t arity;
};

constexpr std::array<FuncInfo, 7> kFuncs{{{"exp", ExprFunc::exp, 1},
                                          {"sin", ExprFunc::sin, 1},
                                          {"cos", ExprFunc::cos, 1},
                                          {"sqrt", ExprFunc::sqrt, 1},
                                          {"pow", ExprFunc::pow, 2},
                                          {"gamma", ExprFunc::gamma, 1},
                                          {"abs", ExprFunc::abs, 1}}};

const FuncInfo& func_info(ExprFunc f) {
  for (const FuncInfo& fi : kFuncs) {
    if (fi.func == f) return fi;
  }
  throw std::logic_error("unknown function tag");
}

bool is_ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

int binding_power(char op) {
  switch (op) {
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

constexpr int kUnaryPower = 30;

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  NodePtr run() {
    skip_ws();
    if (pos_ == src_.size()) {
      throw ParseError("empty expression", pos_);
    }
    NodePtr root = expression(0);
    skip_ws();
    if (pos_ != src_.size()) {
      throw ParseError(std::string("unexpected '") + src_[pos_] + "'", pos_);
    }
    return root;
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' ||
                                  src_[pos_] == '\r')) {
      ++pos_;
    }
  }

  NodePtr finish(ExprNode node) {
    int h = -1;
    for (const NodePtr& c : node.children) {
      h = std::max(h, c->height);
    }
    node.height = h + 1;
    if (node.height > kMaxExprDepth) {
      throw ParseError("expression nested too deeply", node.span.offset);
    }
    return std::make_shared<const ExprNode>(std::move(node));
  }

  NodePtr expression(int min_bp) {
    if (++nesting_ > kMaxExprDepth) {
      throw ParseError("expression nested too deeply", pos_);
    }
    NodePtr lhs = prefix();
    for (;;) {
      skip_ws();
      if (pos_ == src_.size()) break;
      const char op = src_[pos_];
      const int bp = binding_power(op);
      if (bp < 0 || bp <= min_bp) break;
      ++pos_;
      // ^ is right-associative: its right operand may contain another ^.
      NodePtr rhs = expression(op == '^' ? bp - 1 : bp);
      ExprNode node;
      node.kind = ExprKind::binary;
      node.op = op;
      node.span = {lhs->span.offset, rhs->span.offset + rhs->span.length - lhs->span.offset};
      node.children = {std::move(lhs), std::move(rhs)};
      lhs = finish(std::move(node));
    }
    --nesting_;
    return lhs;
  }

  NodePtr prefix() {
    skip_ws();
    if (pos_ == src_.size()) {
      throw ParseError("unexpected end of input", pos_);
    }
    const std::size_t start = pos_;
    const char c = src_[pos_];
    if (c == '-') {
      ++pos_;
      NodePtr operand = expression(kUnaryPower);
      ExprNode node;
      node.kind = ExprKind::unary;
      node.op = '-';
      node.span = {start, operand->span.offset + operand->span.length - start};
      node.children = {std::move(operand)};
      return finish(std::move(node));
    }
    if (c == '(') {
      ++pos_;
      NodePtr inner = expression(0);
      expect(')');
      // The group's span covers its parentheses.
      ExprNode grouped = *inner;
      grouped.span = {start, pos_ - start};
      return std::make_shared<const ExprNode>(std::move(grouped));
    }
    if (is_digit(c) || c == '.') {
      return number();
    }
    if (is_ident_start(c)) {
      return identifier();
    }
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  void expect(char want) {
    skip_ws();
    if (pos_ == src_.size()) {
      throw ParseError(std::string("expected '") + want + "' but input ended", pos_);
    }
    if (src_[pos_] != want) {
      throw ParseError(std::string("expected '") + want + "'", pos_);
    }
    ++pos_;
  }

  NodePtr number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && (is_digit(src_[pos_]) || src_[pos_] == '.')) ++pos_;
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
      if (p < src_.size() && is_digit(src_[p])) {
        while (p < src_.size() && is_digit(src_[p])) ++p;
        pos_ = p;
      }
    }
    double v = 0.0;
    const char* first = src_.data() + start;
    const char* last = src_.data() + pos_;
    const auto res = std::from_chars(first, last, v);
    if (res.ec == std::errc::result_out_of_range) {
      throw ParseError("number out of range", start);
    }
    if (res.ec != std::errc() || res.ptr != last) {
      throw ParseError("malformed number", start);
    }
    ExprNode node;
    node.kind = ExprKind::constant;
    node.value = v;
    node.span = {start, pos_ - start};
    return finish(std::move(node));
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && is_ident_char(src_[pos_])) ++pos_;
    const std::string_view name = src_.substr(start, pos_ - start);
    if (name == "t" || name == "x") {
      ExprNode node;
      node.kind = ExprKind::variable;
      node.var = name == "t" ? ExprVar::t : ExprVar::x;
      node.span = {start, name.size()};
      return finish(std::move(node));
    }
    const FuncInfo* info = nullptr;
    for (const FuncInfo& fi : kFuncs) {
      if (fi.name == name) info = &fi;
    }
    if (info == nullptr) {
      throw ParseError("unknown identifier '" + std::string(name) + "'", start);
    }
    skip_ws();
    if (pos_ == src_.size() || src_[pos_] != '(') {
      throw ParseError("expected '(' after function '" + std::string(name) + "'", pos_);
    }
    ++pos_;
    ExprNode node;
    node.kind = ExprKind::call;
    node.func = info->func;
    if (++nesting_ > kMaxExprDepth) {
      throw ParseError("expression nested too deeply", pos_);
    }
    node.children.push_back(expression(0));
    skip_ws();
    while (pos_ < src_.size() && src_[pos_] == ',') {
      ++pos_;
      node.children.push_back(expression(0));
      skip_ws();
    }
    --nesting_;
    expect(')');
    if (node.children.size() != info->arity) {
      std::ostringstream os;
      os << "function '" << name << "' takes " << info->arity << " argument(s), got "
         << node.children.size();
      throw ParseError(os.str(), start);
    }
    node.span = {start, pos_ - start};
    return finish(std::move(node));
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int nesting_ = 0;
};

[[noreturn]] void domain_fail(const std::string& what, const ExprNode& node) {
  std::ostringstream os;
  os << what << " at offset " << node.span.offset;
  throw DomainError(os.str(), node.span.offset, node.span.length);
}

double checked_pow(double base, double expo, const ExprNode& node) {
  if (base == 0.0 && expo < 0.0) {
    domain_fail("zero raised to a negative power", node);
  }
  if (base < 0.0 && expo != std::trunc(expo)) {
    domain_fail("fractional power of a negative number", node);
  }
  return std::pow(base, expo);
}

double eval_node(const ExprNode& n, double t, double x) {
  double v = 0.0;
  switch (n.kind) {
    case ExprKind::constant:
      return n.value;
    case ExprKind::variable:
      return n.var == ExprVar::t ? t : x;
    case ExprKind::unary:
      return -eval_node(*n.children[0], t, x);
    case ExprKind::binary: {
      const double a = eval_node(*n.children[0], t, x);
      const double b = eval_node(*n.children[1], t, x);
      switch (n.op) {
        case '+': v = a + b; break;
        case '-': v = a - b; break;
        case '*': v = a * b; break;
        case '/':
          if (b == 0.0) domain_fail("division by zero", n);
          v = a / b;
          break;
        default: v = checked_pow(a, b, n); break;
      }
      break;
    }
    case ExprKind::call: {
      const double a = eval_node(*n.children[0], t, x);
      switch (n.func) {
        case ExprFunc::exp: v = std::exp(a); break;
        case ExprFunc::sin: v = std::sin(a); break;
        case ExprFunc::cos: v = std::cos(a); break;
        case ExprFunc::abs: v = std::abs(a); break;
        case ExprFunc::sqrt:
          if (a < 0.0) domain_fail("sqrt of a negative number", n);
          v = std::sqrt(a);
          break;
        case ExprFunc::gamma:
          try {
            v = gamma_fn(a);
          } catch (const DomainError&) {
            domain_fail("gamma evaluated at a pole", n);
          }
          break;
        case ExprFunc::pow:
          v = checked_pow(a, eval_node(*n.children[1], t, x), n);
          break;
      }
      break;
    }
  }
  if (!std::isfinite(v)) {
    domain_fail("non-finite result", n);
  }
  return v;
}

void print_node(const ExprNode& n, std::string& out) {
  switch (n.kind) {
    case ExprKind::constant: {
      char buf[64];
      const auto res = std::to_chars(buf, buf + sizeof buf, n.value);
      out.append(buf, res.ptr);
      return;
    }
    case ExprKind::variable:
      out += n.var == ExprVar::t ? 't' : 'x';
      return;
    case ExprKind::unary:
      out += "(-";
      print_node(*n.children[0], out);
      out += ')';
      return;
    case ExprKind::binary:
      out += '(';
      print_node(*n.children[0], out);
      out += ' ';
      out += n.op;
      out += ' ';
      print_node(*n.children[1], out);
      out += ')';
      return;
    case ExprKind::call:
      out += func_info(n.func).name;
      out += '(';
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (i) out += ", ";
        print_node(*n.children[i], out);
      }
      out += ')';
      return;
  }
}

bool equal_nodes(const ExprNode& a, const ExprNode& b) {
  if (a.kind != b.kind || a.children.size() != b.children.size()) return false;
  switch (a.kind) {
    case ExprKind::constant:
      if (a.value != b.value) return false;
      break;
    case ExprKind::variable:
      if (a.var != b.var) return false;
      break;
    case ExprKind::unary:
    case ExprKind::binary:
      if (a.op != b.op) return false;
      break;
    case ExprKind::call:
      if (a.func != b.func) return false;
      break;
  }
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (!equal_nodes(*a.children[i], *b.children[i])) return false;
  }
  return true;
}

}  // namespace

ExprAst parse_expr(std::string_view src) {
  Parser p(src);
  return ExprAst(p.run(), std::string(src));
}

double evaluate(const ExprAst& ast, double t, double x) {
  if (ast.empty()) {
    throw ConfigError("evaluate called on an empty expression");
  }
  return eval_node(ast.root(), t, x);
}

std::string pretty_print(const ExprAst& ast) {
  std::string out;
  if (!ast.empty()) print_node(ast.root(), out);
  return out;
}

bool structurally_equal(const ExprAst& a, const ExprAst& b) {
  if (a.empty() || b.empty()) return a.empty() == b.empty();
  return equal_nodes(a.root(), b.root());
}

Rhs make_rhs(ExprAst ast) {
  if (ast.empty()) {
    throw ConfigError("rhs expression is empty");
  }
  return [ast = std::move(ast)](double t, double x) { return evaluate(ast, t, x); };
}

}  // namespace tfode
