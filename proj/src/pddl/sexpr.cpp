#include "twinloop/pddl/sexpr.hpp"

#include <cctype>

#include "twinloop/common/error.hpp"

namespace twinloop::pddl {
namespace {

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  std::vector<SExpr> read_all() {
    std::vector<SExpr> out;
    skip_space();
    while (!at_end()) {
      out.push_back(read_expr());
      skip_space();
    }
    return out;
  }

 private:
  bool at_end() const { return index_ >= text_.size(); }
  char peek() const { return text_[index_]; }

  void advance() {
    if (text_[index_] == '\n') {
      ++pos_.line;
      pos_.column = 1;
    } else {
      ++pos_.column;
    }
    ++index_;
  }

  void skip_space() {
    while (!at_end()) {
      const char c = peek();
      if (c == ';') {
        while (!at_end() && peek() != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  [[noreturn]] void fail(SourcePos where, const std::string& message) const {
    throw Error(ErrorCode::kSyntaxError, position_prefix(where) + message);
  }

  SExpr read_expr() {
    SExpr node;
    node.pos = pos_;
    const char c = peek();
    if (c == ')') {
      fail(pos_, "unexpected ')'");
    }
    if (c == '(') {
      node.is_list = true;
      advance();
      skip_space();
      while (true) {
        if (at_end()) fail(node.pos, "unterminated list");
        if (peek() == ')') {
          advance();
          break;
        }
        node.items.push_back(read_expr());
        skip_space();
      }
      return node;
    }
    while (!at_end()) {
      const char ch = peek();
      if (std::isspace(static_cast<unsigned char>(ch)) || ch == '(' || ch == ')' || ch == ';') break;
      node.atom.push_back(ch);
      advance();
    }
    return node;
  }

  std::string_view text_;
  std::size_t index_ = 0;
  SourcePos pos_;
};

}  // namespace

std::string position_prefix(SourcePos pos) {
  return "line " + std::to_string(pos.line) + ", column " + std::to_string(pos.column) + ": ";
}

std::string lower(std::string_view text) {
  std::string out(text);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<SExpr> parse_sexprs(std::string_view text) { return Reader(text).read_all(); }

SExpr parse_sexpr(std::string_view text) {
  auto all = parse_sexprs(text);
  if (all.empty()) {
    throw Error(ErrorCode::kSyntaxError, "line 1, column 1: empty input");
  }
  if (all.size() > 1) {
    throw Error(ErrorCode::kSyntaxError,
                position_prefix(all[1].pos) + "unexpected content after the top-level expression");
  }
  return std::move(all.front());
}

}  // namespace twinloop::pddl
