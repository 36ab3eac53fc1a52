#include "twinloop/pddl/parser.hpp"

#include <algorithm>
#include <set>

#include "twinloop/common/error.hpp"
#include "twinloop/pddl/sexpr.hpp"

namespace twinloop::pddl {
namespace {

[[noreturn]] void fail(ErrorCode code, SourcePos pos, const std::string& message) {
  throw Error(code, position_prefix(pos) + message);
}

bool is_keyword(const SExpr& expr, std::string_view keyword) {
  return expr.is_atom() && lower(expr.atom) == keyword;
}

const SExpr& expect_list(const SExpr& expr, std::string_view what) {
  if (!expr.is_list) fail(ErrorCode::kSyntaxError, expr.pos, "expected " + std::string(what));
  return expr;
}

const std::string& expect_atom(const SExpr& expr, std::string_view what) {
  if (!expr.is_atom()) fail(ErrorCode::kSyntaxError, expr.pos, "expected " + std::string(what));
  return expr.atom;
}

struct Positioned {
  TypedName entry;
  SourcePos pos;
};

// "a b - t c" -> a:t b:t c:object
std::vector<Positioned> parse_typed_list(const std::vector<SExpr>& items, std::size_t begin) {
  std::vector<Positioned> out;
  std::size_t pending = 0;
  for (std::size_t i = begin; i < items.size(); ++i) {
    const SExpr& item = items[i];
    if (item.is_list) {
      if (!item.items.empty() && is_keyword(item.items.front(), "either")) {
        fail(ErrorCode::kUnsupportedFeature, item.pos, "(either ...) types are not supported");
      }
      fail(ErrorCode::kSyntaxError, item.pos, "unexpected list in typed list");
    }
    if (item.atom == "-") {
      if (i + 1 >= items.size()) fail(ErrorCode::kSyntaxError, item.pos, "missing type after '-'");
      const SExpr& type = items[++i];
      if (type.is_list) {
        fail(ErrorCode::kUnsupportedFeature, type.pos, "(either ...) types are not supported");
      }
      if (pending == 0) fail(ErrorCode::kSyntaxError, item.pos, "type without names");
      for (std::size_t k = out.size() - pending; k < out.size(); ++k) out[k].entry.type = type.atom;
      pending = 0;
      continue;
    }
    out.push_back({{item.atom, "object"}, item.pos});
    ++pending;
  }
  return out;
}

void require_type(const Domain& domain, const std::string& type, SourcePos pos) {
  if (!domain.has_type(type)) fail(ErrorCode::kUndeclaredType, pos, "undeclared type '" + type + "'");
}

void check_unsupported_head(const SExpr& head) {
  static const std::set<std::string> kUnsupported = {"or", "forall", "exists", "when", "imply", "=",
                                                     "increase", "decrease", "assign"};
  if (head.is_atom() && kUnsupported.count(lower(head.atom)) != 0) {
    fail(ErrorCode::kUnsupportedFeature, head.pos,
         "'" + head.atom + "' is outside the STRIPS subset");
  }
}

// Flattens (and ...) conjunctions into literal expressions.
void flatten_conjunction(const SExpr& formula, std::vector<const SExpr*>& out) {
  const SExpr& list = expect_list(formula, "formula");
  if (list.items.empty()) return;  // () is the empty conjunction
  check_unsupported_head(list.items.front());
  if (is_keyword(list.items.front(), "and")) {
    for (std::size_t i = 1; i < list.items.size(); ++i) flatten_conjunction(list.items[i], out);
    return;
  }
  out.push_back(&list);
}

class DomainParser {
 public:
  Domain parse(const SExpr& root) {
    const SExpr& top = expect_list(root, "(define ...)");
    if (top.items.size() < 2 || !is_keyword(top.items[0], "define")) {
      fail(ErrorCode::kSyntaxError, top.pos, "expected (define (domain NAME) ...)");
    }
    const SExpr& header = expect_list(top.items[1], "(domain NAME)");
    if (header.items.size() != 2 || !is_keyword(header.items[0], "domain")) {
      fail(ErrorCode::kSyntaxError, header.pos, "expected (domain NAME)");
    }
    domain_.name = expect_atom(header.items[1], "domain name");

    for (std::size_t i = 2; i < top.items.size(); ++i) {
      const SExpr& section = expect_list(top.items[i], "domain section");
      if (section.items.empty()) fail(ErrorCode::kSyntaxError, section.pos, "empty section");
      const std::string key = lower(expect_atom(section.items[0], "section keyword"));
      if (key == ":requirements") {
        for (std::size_t k = 1; k < section.items.size(); ++k) {
          domain_.requirements.push_back(lower(expect_atom(section.items[k], "requirement flag")));
        }
      } else if (key == ":types") {
        parse_types(section);
      } else if (key == ":predicates") {
        parse_predicates(section);
      } else if (key == ":action") {
        parse_action(section);
      } else if (key == ":constants" || key == ":functions" || key == ":durative-action" ||
                 key == ":derived") {
        fail(ErrorCode::kUnsupportedFeature, section.pos, "section '" + key + "' is not supported");
      } else {
        fail(ErrorCode::kSyntaxError, section.pos, "unknown domain section '" + key + "'");
      }
    }
    return std::move(domain_);
  }

 private:
  void parse_types(const SExpr& section) {
    const auto entries = parse_typed_list(section.items, 1);
    for (const auto& e : entries) {
      if (e.entry.name == "object") continue;
      if (domain_.has_type(e.entry.name)) {
        fail(ErrorCode::kSyntaxError, e.pos, "type '" + e.entry.name + "' declared twice");
      }
      domain_.types.push_back({e.entry.name, e.entry.type});
    }
    for (const auto& e : entries) require_type(domain_, e.entry.type, e.pos);
  }

  void parse_predicates(const SExpr& section) {
    for (std::size_t i = 1; i < section.items.size(); ++i) {
      const SExpr& decl = expect_list(section.items[i], "(predicate ?args...)");
      if (decl.items.empty()) fail(ErrorCode::kSyntaxError, decl.pos, "empty predicate declaration");
      PredicateSchema schema;
      schema.name = expect_atom(decl.items[0], "predicate name");
      if (domain_.find_predicate(schema.name) != nullptr) {
        fail(ErrorCode::kSyntaxError, decl.pos, "predicate '" + schema.name + "' declared twice");
      }
      for (const auto& p : parse_typed_list(decl.items, 1)) {
        require_type(domain_, p.entry.type, p.pos);
        schema.params.push_back(p.entry);
      }
      domain_.predicates.push_back(std::move(schema));
    }
  }

  void parse_action(const SExpr& section) {
    if (section.items.size() < 2) fail(ErrorCode::kSyntaxError, section.pos, "action without a name");
    ActionSchema action;
    action.name = expect_atom(section.items[1], "action name");
    if (domain_.find_action(action.name) != nullptr) {
      fail(ErrorCode::kSyntaxError, section.pos, "action '" + action.name + "' declared twice");
    }
    const SExpr* precondition = nullptr;
    const SExpr* effect = nullptr;
    for (std::size_t i = 2; i < section.items.size(); i += 2) {
      const std::string key = lower(expect_atom(section.items[i], "action keyword"));
      if (i + 1 >= section.items.size()) {
        fail(ErrorCode::kSyntaxError, section.items[i].pos, "missing value for '" + key + "'");
      }
      const SExpr& value = section.items[i + 1];
      if (key == ":parameters") {
        for (const auto& p : parse_typed_list(expect_list(value, "parameter list").items, 0)) {
          require_type(domain_, p.entry.type, p.pos);
          if (p.entry.name.empty() || p.entry.name.front() != '?') {
            fail(ErrorCode::kSyntaxError, p.pos, "parameter '" + p.entry.name + "' must start with '?'");
          }
          action.params.push_back(p.entry);
        }
      } else if (key == ":precondition") {
        precondition = &value;
      } else if (key == ":effect") {
        effect = &value;
      } else {
        fail(ErrorCode::kSyntaxError, section.items[i].pos, "unknown action keyword '" + key + "'");
      }
    }
    if (precondition != nullptr) action.precondition = parse_literals(*precondition, action, false);
    if (effect != nullptr) action.effect = parse_literals(*effect, action, true);
    domain_.actions.push_back(std::move(action));
  }

  std::vector<Literal> parse_literals(const SExpr& formula, const ActionSchema& action,
                                      bool allow_negative) {
    std::vector<const SExpr*> parts;
    flatten_conjunction(formula, parts);
    std::vector<Literal> out;
    for (const SExpr* part : parts) {
      Literal literal;
      const SExpr* body = part;
      if (is_keyword(part->items.front(), "not")) {
        if (!allow_negative) {
          fail(ErrorCode::kUnsupportedFeature, part->pos, "negative preconditions are not supported");
        }
        if (part->items.size() != 2) fail(ErrorCode::kSyntaxError, part->pos, "(not ...) takes one literal");
        literal.positive = false;
        body = &expect_list(part->items[1], "literal");
        if (body->items.empty()) fail(ErrorCode::kSyntaxError, body->pos, "empty literal");
        check_unsupported_head(body->items.front());
      }
      literal.predicate = expect_atom(body->items.front(), "predicate name");
      const PredicateSchema* schema = domain_.find_predicate(literal.predicate);
      if (schema == nullptr) {
        fail(ErrorCode::kUnknownPredicate, body->pos, "unknown predicate '" + literal.predicate + "'");
      }
      if (body->items.size() - 1 != schema->params.size()) {
        fail(ErrorCode::kArityMismatch, body->pos,
             "predicate '" + literal.predicate + "' takes " + std::to_string(schema->params.size()) +
                 " argument(s), got " + std::to_string(body->items.size() - 1));
      }
      for (std::size_t k = 1; k < body->items.size(); ++k) {
        const std::string& arg = expect_atom(body->items[k], "argument");
        if (arg.empty() || arg.front() != '?') {
          fail(ErrorCode::kUnsupportedFeature, body->items[k].pos,
               "constant '" + arg + "' in action schema is not supported");
        }
        auto param = std::find_if(action.params.begin(), action.params.end(),
                                  [&](const auto& p) { return p.name == arg; });
        if (param == action.params.end()) {
          fail(ErrorCode::kUndeclaredVariable, body->items[k].pos,
               "variable '" + arg + "' is not a parameter of '" + action.name + "'");
        }
        const std::string& expected = schema->params[k - 1].type;
        if (!domain_.is_subtype(param->type, expected)) {
          fail(ErrorCode::kTypeError, body->items[k].pos,
               "'" + arg + "' is a " + param->type + ", '" + literal.predicate + "' expects " + expected);
        }
        literal.args.push_back(arg);
      }
      out.push_back(std::move(literal));
    }
    return out;
  }

  Domain domain_;
};

class ProblemParser {
 public:
  explicit ProblemParser(const Domain& domain) : domain_(domain) {}

  Problem parse(const SExpr& root) {
    const SExpr& top = expect_list(root, "(define ...)");
    if (top.items.size() < 2 || !is_keyword(top.items[0], "define")) {
      fail(ErrorCode::kSyntaxError, top.pos, "expected (define (problem NAME) ...)");
    }
    const SExpr& header = expect_list(top.items[1], "(problem NAME)");
    if (header.items.size() != 2 || !is_keyword(header.items[0], "problem")) {
      fail(ErrorCode::kSyntaxError, header.pos, "expected (problem NAME)");
    }
    problem_.name = expect_atom(header.items[1], "problem name");

    const SExpr* init = nullptr;
    const SExpr* goal = nullptr;
    for (std::size_t i = 2; i < top.items.size(); ++i) {
      const SExpr& section = expect_list(top.items[i], "problem section");
      if (section.items.empty()) fail(ErrorCode::kSyntaxError, section.pos, "empty section");
      const std::string key = lower(expect_atom(section.items[0], "section keyword"));
      if (key == ":domain") {
        if (section.items.size() != 2) fail(ErrorCode::kSyntaxError, section.pos, "expected (:domain NAME)");
        problem_.domain = expect_atom(section.items[1], "domain name");
        if (problem_.domain != domain_.name) {
          fail(ErrorCode::kSyntaxError, section.pos,
               "problem is for domain '" + problem_.domain + "', not '" + domain_.name + "'");
        }
      } else if (key == ":requirements") {
        // recorded by the domain; ignored here
      } else if (key == ":objects") {
        parse_objects(section);
      } else if (key == ":init") {
        init = &section;
      } else if (key == ":goal") {
        goal = &section;
      } else if (key == ":metric" || key == ":constraints") {
        fail(ErrorCode::kUnsupportedFeature, section.pos, "section '" + key + "' is not supported");
      } else {
        fail(ErrorCode::kSyntaxError, section.pos, "unknown problem section '" + key + "'");
      }
    }
    if (problem_.domain.empty()) problem_.domain = domain_.name;

    if (init != nullptr) {
      for (std::size_t i = 1; i < init->items.size(); ++i) {
        const SExpr& atom = expect_list(init->items[i], "ground atom");
        if (!atom.items.empty() && is_keyword(atom.items.front(), "not")) {
          fail(ErrorCode::kSyntaxError, atom.pos, "negative literal in :init");
        }
        problem_.init.insert(ground_atom(atom));
      }
    }
    if (goal != nullptr) {
      if (goal->items.size() != 2) fail(ErrorCode::kSyntaxError, goal->pos, "expected (:goal FORMULA)");
      std::vector<const SExpr*> parts;
      flatten_conjunction(goal->items[1], parts);
      for (const SExpr* part : parts) {
        if (is_keyword(part->items.front(), "not")) {
          fail(ErrorCode::kUnsupportedFeature, part->pos, "negative goals are not supported");
        }
        problem_.goal.insert(ground_atom(*part));
      }
    }
    return std::move(problem_);
  }

 private:
  void parse_objects(const SExpr& section) {
    for (const auto& o : parse_typed_list(section.items, 1)) {
      if (!domain_.has_type(o.entry.type)) {
        fail(ErrorCode::kUnknownObjectType, o.pos,
             "object '" + o.entry.name + "' has undeclared type '" + o.entry.type + "'");
      }
      if (!problem_.objects.emplace(o.entry.name, o.entry.type).second) {
        fail(ErrorCode::kSyntaxError, o.pos, "object '" + o.entry.name + "' declared twice");
      }
    }
  }

  Atom ground_atom(const SExpr& expr) {
    if (expr.items.empty()) fail(ErrorCode::kSyntaxError, expr.pos, "empty atom");
    Atom atom;
    atom.predicate = expect_atom(expr.items.front(), "predicate name");
    const PredicateSchema* schema = domain_.find_predicate(atom.predicate);
    if (schema == nullptr) {
      fail(ErrorCode::kUnknownPredicate, expr.pos, "unknown predicate '" + atom.predicate + "'");
    }
    if (expr.items.size() - 1 != schema->params.size()) {
      fail(ErrorCode::kArityMismatch, expr.pos,
           "predicate '" + atom.predicate + "' takes " + std::to_string(schema->params.size()) +
               " argument(s), got " + std::to_string(expr.items.size() - 1));
    }
    for (std::size_t k = 1; k < expr.items.size(); ++k) {
      const std::string& arg = expect_atom(expr.items[k], "object name");
      auto obj = problem_.objects.find(arg);
      if (obj == problem_.objects.end()) {
        fail(ErrorCode::kUnknownObjectType, expr.items[k].pos, "undeclared object '" + arg + "'");
      }
      const std::string& expected = schema->params[k - 1].type;
      if (!domain_.is_subtype(obj->second, expected)) {
        fail(ErrorCode::kUnknownObjectType, expr.items[k].pos,
             "object '" + arg + "' is a " + obj->second + ", '" + atom.predicate + "' expects " + expected);
      }
      atom.args.push_back(arg);
    }
    return atom;
  }

  const Domain& domain_;
  Problem problem_;
};

}  // namespace

Domain parse_domain(std::string_view text) { return DomainParser().parse(parse_sexpr(text)); }

Problem parse_problem(std::string_view text, const Domain& domain) {
  return ProblemParser(domain).parse(parse_sexpr(text));
}

Plan parse_plan(std::string_view text) {
  Plan plan;
  for (const SExpr& step : parse_sexprs(text)) {
    if (!step.is_list || step.items.empty()) {
      fail(ErrorCode::kSyntaxError, step.pos, "expected (action args...)");
    }
    ActionCall call;
    call.name = expect_atom(step.items.front(), "action name");
    for (std::size_t i = 1; i < step.items.size(); ++i) {
      call.args.push_back(expect_atom(step.items[i], "object name"));
    }
    plan.steps.push_back(std::move(call));
  }
  return plan;
}

}  // namespace twinloop::pddl
