#include <doctest.h>

#include "check.hpp"
#include "support.hpp"
#include "twinloop/pddl/blocksworld.hpp"
#include "twinloop/pddl/emit.hpp"
#include "twinloop/pddl/grounding.hpp"
#include "twinloop/pddl/parser.hpp"
#include "twinloop/pddl/sexpr.hpp"

using namespace twinloop;
using namespace twinloop::pddl;

namespace {

const char* kTinyDomain = R"(
(define (domain tiny)
  (:requirements :strips :typing)
  (:types thing)
  (:predicates (p ?x - thing) (q ?x - thing))
  (:action flip :parameters (?x - thing)
    :precondition (p ?x)
    :effect (and (not (p ?x)) (q ?x))))
)";

std::string with_action_body(const std::string& body) {
  return R"((define (domain d) (:types thing) (:predicates (p ?x - thing) (r ?x - thing ?y - thing))
    (:action a :parameters (?x - thing) )" +
         body + "))";
}

}  // namespace

TEST_CASE("s-expressions") {
  const auto e = parse_sexpr("(a (b c) ; comment\n d)");
  REQUIRE(e.is_list);
  CHECK(e.items.size() == 3);
  CHECK(e.items[1].items[1].atom == "c");
  CHECK(e.items[2].pos.line == 2);
  CHECK_ERROR_CODE(parse_sexpr("(a (b)"), ErrorCode::kSyntaxError);
  CHECK_ERROR_CODE(parse_sexpr("(a))"), ErrorCode::kSyntaxError);
  CHECK_ERROR_CODE(parse_sexpr(""), ErrorCode::kSyntaxError);
  CHECK(lower("PiCk-Up") == "pick-up");
}

TEST_CASE("syntax errors carry the position") {
  try {
    parse_domain("(define (domain x)\n  (:predicates (p ?x)\n");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kSyntaxError);
    CHECK(std::string(e.what()).find("line ") != std::string::npos);
  }
}

TEST_CASE("bundled extended Blocksworld domain") {
  const Domain& d = extended_blocksworld();
  CHECK(d.name == "blocksworld-positions");
  CHECK(d.predicates.size() == 7);
  CHECK(d.actions.size() == 6);
  for (const char* p : {"on", "ontable", "clear", "handempty", "holding", "at", "free"})
    CHECK_MESSAGE(d.find_predicate(p), p);
  for (const char* a : {"pick-up", "put-down", "stack", "unstack", "place", "pick-from-pos"})
    CHECK_MESSAGE(d.find_action(a), a);
  CHECK(d.is_subtype("block", "object"));
  CHECK_FALSE(d.is_subtype("block", "position"));

  const auto* place = d.find_action("place");
  REQUIRE(place);
  CHECK(place->params.size() == 2);
  CHECK(place->params[1].type == "position");
  CHECK(place->effect.size() == 5);
}

TEST_CASE("golden AST snapshot") {
  CHECK(dump_ast(extended_blocksworld()) == support::read_text(support::golden_path("blocksworld.ast")));
  CHECK(parse_domain(support::read_text(support::data_path("pddl/blocksworld.pddl"))) == extended_blocksworld());
}

TEST_CASE("domain emit/parse round trip") {
  const Domain& d = extended_blocksworld();
  CHECK(parse_domain(emit_domain(d)) == d);
  const Domain tiny = parse_domain(kTinyDomain);
  CHECK(parse_domain(emit_domain(tiny)) == tiny);
}

TEST_CASE("keywords are case-insensitive") {
  const Domain d = parse_domain(R"((DEFINE (DOMAIN Up) (:TYPES t) (:PREDICATES (P ?x - t))
     (:ACTION A :PARAMETERS (?x - t) :PRECONDITION (P ?x) :EFFECT (NOT (P ?x)))))");
  CHECK(d.name == "Up");
  CHECK(d.actions.at(0).effect.at(0).positive == false);
}

TEST_CASE("domain semantic errors") {
  CHECK_ERROR_CODE(parse_domain("(define (domain d) (:types a - missing) (:predicates))"), ErrorCode::kUndeclaredType);
  CHECK_ERROR_CODE(parse_domain(with_action_body(":precondition (p ?y) :effect (p ?x)")),
                   ErrorCode::kUndeclaredVariable);
  CHECK_ERROR_CODE(parse_domain(with_action_body(":precondition (p ?x ?x) :effect (p ?x)")),
                   ErrorCode::kArityMismatch);
  CHECK_ERROR_CODE(parse_domain(with_action_body(":precondition (z ?x) :effect (p ?x)")),
                   ErrorCode::kUnknownPredicate);
  CHECK_ERROR_CODE(parse_domain(with_action_body(":precondition (not (p ?x)) :effect (p ?x)")),
                   ErrorCode::kUnsupportedFeature);
  CHECK_ERROR_CODE(parse_domain(with_action_body(":precondition (p ?x) :effect (when (p ?x) (p ?x))")),
                   ErrorCode::kUnsupportedFeature);
  CHECK_ERROR_CODE(parse_domain("(define (domain d) (:functions (f)))"), ErrorCode::kUnsupportedFeature);
  CHECK_ERROR_CODE(parse_domain(R"((define (domain d) (:types a b) (:predicates (p ?x - a))
     (:action k :parameters (?y - b) :precondition (p ?y) :effect (p ?y))))"),
                   ErrorCode::kTypeError);
}

TEST_CASE("two-cube problem") {
  const Domain& d = extended_blocksworld();
  const Problem p = parse_problem(support::read_text(support::data_path("problems/two_cubes.pddl")), d);
  CHECK(p.name == "two-cubes");
  CHECK(p.objects.size() == 4);
  CHECK(p.objects.at("pos_1") == "position");
  CHECK(p.init.size() == 7);
  CHECK(p.goal == AtomSet{parse_atom("(at cube_0 pos_0)"), parse_atom("(at cube_1 pos_1)")});
  CHECK(parse_problem(emit_problem(p), d) == p);
}

TEST_CASE("problem errors") {
  const Domain& d = extended_blocksworld();
  const std::string head = "(define (problem x) (:domain blocksworld-positions) (:objects a - block p - position) ";
  CHECK_ERROR_CODE(parse_problem(head + "(:init (zap a)) (:goal (clear a)))", d), ErrorCode::kUnknownPredicate);
  CHECK_ERROR_CODE(parse_problem(head + "(:init (on a)) (:goal (clear a)))", d), ErrorCode::kArityMismatch);
  CHECK_ERROR_CODE(parse_problem(head + "(:init (clear b)) (:goal (clear a)))", d), ErrorCode::kUnknownObjectType);
  CHECK_ERROR_CODE(parse_problem(head + "(:init (clear p)) (:goal (clear a)))", d), ErrorCode::kUnknownObjectType);
  CHECK_ERROR_CODE(parse_problem(head + "(:init) (:goal (not (clear a))))", d), ErrorCode::kUnsupportedFeature);
  CHECK_ERROR_CODE(parse_problem("(define (problem x) (:domain blocksworld-positions) (:objects a - gizmo) (:init) (:goal (and)))", d),
                   ErrorCode::kUnknownObjectType);
}

TEST_CASE("plans") {
  const Plan plan = parse_plan(support::read_text(support::data_path("plans/two_cubes.plan")));
  REQUIRE(plan.size() == 4);
  CHECK(to_string(plan.steps[1]) == "(place cube_0 pos_0)");
  CHECK(parse_plan(emit_plan(plan)) == plan);
  CHECK(parse_plan("; nothing\n\n").empty());
  CHECK_ERROR_CODE(parse_plan("pick-up a"), ErrorCode::kSyntaxError);
}

TEST_CASE("grounding and plan validation") {
  const Domain& d = extended_blocksworld();
  const Problem p = parse_problem(support::read_text(support::data_path("problems/two_cubes.pddl")), d);
  const auto actions = ground(d, p);
  // 2 pick-up, 2 put-down, 2 stack (no self), 2 unstack, 4 place, 4 pick-from-pos
  CHECK(actions.size() == 16);

  const Plan good = parse_plan(support::read_text(support::data_path("plans/two_cubes.plan")));
  const auto ok = validate_plan(d, p, good);
  CHECK(ok.valid);
  CHECK(ok.trace.size() == 5);

  const auto short_plan = validate_plan(d, p, parse_plan("(pick-up cube_0)(place cube_0 pos_0)"));
  CHECK_FALSE(short_plan.valid);
  CHECK(short_plan.failed_step == 2u);

  const auto bad = validate_plan(d, p, parse_plan("(place cube_0 pos_0)"));
  CHECK_FALSE(bad.valid);
  CHECK(bad.failed_step == 0u);

  CHECK_ERROR_CODE(instantiate(d, p, {"fly", {"cube_0"}}), ErrorCode::kUnknownAction);
  CHECK_ERROR_CODE(instantiate(d, p, {"pick-up", {}}), ErrorCode::kArityMismatch);
  CHECK_ERROR_CODE(instantiate(d, p, {"pick-up", {"pos_0"}}), ErrorCode::kUnknownObjectType);

  const auto pick = instantiate(d, p, {"pick-up", {"cube_0"}});
  CHECK(applicable(p.init, pick));
  const auto after = apply(p.init, pick);
  CHECK(after.contains(parse_atom("(holding cube_0)")));
  CHECK_FALSE(after.contains(parse_atom("(handempty)")));
}

TEST_CASE("atoms") {
  const Atom a = parse_atom("(at cube_0 pos_0)");
  CHECK(a.predicate == "at");
  CHECK(a.args == std::vector<std::string>{"cube_0", "pos_0"});
  CHECK(to_string(a) == "(at cube_0 pos_0)");
  CHECK(to_string(parse_atom("(handempty)")) == "(handempty)");
  CHECK_ERROR_CODE(parse_atom("at x"), ErrorCode::kSyntaxError);
}
