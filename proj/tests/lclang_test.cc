// Copyright 2026 The Declearn Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cctype>
#include <string>
#include <vector>

#include <doctest.h>

#include "declearn/error.h"
#include "declearn/lclang.h"
#include "support/fixtures.h"
#include "support/gen.h"

namespace declearn {
namespace {

constexpr const char* kEmr = R"(
concept phrase
concept pair
concept sentence
sentence contains phrase
pair has_a (arg1=phrase, arg2=phrase)
concept people : phrase
concept organization : phrase
concept work_for : pair
)";

ErrorCode ParseCode(const std::string& text) {
  try {
    Parse(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("parse succeeded: " << text);
  return ErrorCode::kIoError;
}

// Structural random expressions; well-formedness is not required for the
// text round trip.
LcExpr RandomLc(testing::Gen& gen, int depth) {
  static const char* kConcepts[] = {"people", "organization", "work_for",
                                    "city", "x_1"};
  static const char* kVars[] = {"x", "y", "z1"};
  if (depth >= 3 || gen.Coin(0.35)) {
    const std::string c = kConcepts[gen.Int(0, 4)];
    switch (gen.Int(0, 3)) {
      case 0:
        return Atom(c);
      case 1:
        return Atom(c, std::string(kVars[gen.Int(0, 2)]));
      default: {
        Path p{kVars[gen.Int(0, 2)], {}};
        const int n = gen.Int(0, 3);
        for (int i = 0; i < n; ++i) {
          switch (gen.Int(0, 2)) {
            case 0: p.steps.push_back({"", "arg" + std::to_string(i + 1)}); break;
            case 1: p.steps.push_back({"neighbor", "arg2"}); break;
            default: p.steps.push_back({"", "sentence"}); break;
          }
        }
        std::optional<std::string> var;
        if (gen.Coin(0.3)) var = kVars[gen.Int(0, 2)];
        return Atom(c, var, p);
      }
    }
  }
  auto kids = [&](int lo, int hi) {
    std::vector<LcExpr> out;
    const int n = gen.Int(lo, hi);
    for (int i = 0; i < n; ++i) out.push_back(RandomLc(gen, depth + 1));
    return out;
  };
  switch (gen.Int(0, 6)) {
    case 0: return NotL(RandomLc(gen, depth + 1));
    case 1: return AndL(kids(2, 3));
    case 2: return OrL(kids(2, 3));
    case 3: return IfL(RandomLc(gen, depth + 1), RandomLc(gen, depth + 1));
    case 4: return ExistsL(RandomLc(gen, depth + 1));
    case 5: return AtMostL(gen.Int(1, 3), kids(1, 3));
    default: {
      std::vector<std::string> cs = {"truck", "dog"};
      if (gen.Coin()) cs.push_back("cat");
      return Disjoint(cs);
    }
  }
}

struct Token {
  std::size_t begin;
  std::size_t end;
  bool ident;
};

// Token spans of DSL text outside comments.
std::vector<Token> Tokens(const std::string& s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (c == '#') {
      while (i < s.size() && s[i] != '\n') ++i;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) ||
                              s[j] == '_')) {
        ++j;
      }
      out.push_back({i, j, true});
      i = j;
    } else if (c == '\'') {
      std::size_t j = s.find('\'', i + 1);
      out.push_back({i, j + 1, false});
      i = j + 1;
    } else {
      out.push_back({i, i + 1, false});
      ++i;
    }
  }
  return out;
}

bool Rejected(const std::string& text) {
  try {
    Document d = Parse(text);
    return !Validate(d.graph).ok();
  } catch (const Error&) {
    return true;
  }
}

TEST_SUITE("lclang") {
  TEST_CASE("work_for constraint parses to the expected tree") {
    Document d = Parse(std::string(kEmr) +
                       "ifL(work_for('x'), andL(people(path=('x',arg1)), "
                       "organization(path=('x',arg2))))\n");
    REQUIRE(d.constraints.size() == 1);
    CHECK(d.constraints.constraints[0].id == "lc0");
    const LcExpr expected =
        IfL(Atom("work_for", "x"),
            AndL({Atom("people", std::nullopt, Path{"x", {{"", "arg1"}}}),
                  Atom("organization", std::nullopt,
                       Path{"x", {{"", "arg2"}}})}));
    CHECK(d.constraints.constraints[0].expr == expected);
    CHECK(CheckWellFormed(expected, d.graph).empty());
  }

  TEST_CASE("disjoint over siblings") {
    Document d = Parse(
        "concept image\nconcept truck : image\nconcept dog : image\n"
        "disjoint(truck, dog)\n");
    CHECK(d.constraints.constraints[0].expr == Disjoint({"truck", "dog"}));
    CHECK(Pretty(Disjoint({"a", "b", "c"})) == "disjoint(a, b, c)");
  }

  TEST_CASE("question variable cannot reach the symmetric pair's argument") {
    const std::string graph =
        "concept question\nconcept symmetric\n"
        "symmetric has_a (arg1=question, arg2=question)\n"
        "concept is_more : question\nconcept is_less : question\n";
    CHECK(ParseCode(graph + "ifL(is_more('x'), is_less(path=('x', arg2)))\n") ==
          ErrorCode::kBadPath);
    // The explicit form binds the pair and is accepted.
    Document ok = Parse(graph +
                        "ifL(symmetric('s'), ifL(is_more(path=('s', arg1)), "
                        "is_less(path=('s', arg2))))\n");
    CHECK(ok.constraints.size() == 1);
  }

  TEST_CASE("well-formedness reports") {
    Document d = Parse(kEmr);
    ValidationReport r = CheckWellFormed(
        ParseExpr("ifL(work_for('x'), people(path=('x', arg3)))"), d.graph);
    CHECK(r.count("bad_path") == 1);
    CHECK(CheckWellFormed(AndL({Atom("people", "x")}), d.graph).count("arity") ==
          1);
    CHECK(CheckWellFormed(ParseExpr("people(path=('q', arg1))"), d.graph)
              .count("unbound_variable") == 1);
    CHECK(CheckWellFormed(ParseExpr("ifL(people('x'), nobody('x'))"), d.graph)
              .count("unknown_concept") == 1);
    CHECK(ParseCode(std::string(kEmr) + "andL(people('x'))\n") ==
          ErrorCode::kSyntaxError);
    CHECK(ParseCode(std::string(kEmr) + "people(path=('q', arg1))\n") ==
          ErrorCode::kUnboundVariable);
    CHECK(ParseCode(std::string(kEmr) + "ifL(people('x'), nobody('x'))\n") ==
          ErrorCode::kUnknownConcept);
  }

  TEST_CASE("syntax errors carry line and column") {
    try {
      Parse("concept a\nconcept b : a\nifL(b('x'), a('x')\n");
      FAIL("expected SyntaxError");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kSyntaxError);
      CHECK(e.loc().line == 4);
    }
    try {
      Parse("concept a\nconcept @b\n");
      FAIL("expected SyntaxError");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kSyntaxError);
      CHECK(e.loc().line == 2);
      CHECK(e.loc().column == 9);
    }
  }

  TEST_CASE("statement forms and separators") {
    Document a = Parse(
        "concept phrase; concept pair\npair.has_a(arg1=phrase, arg2=phrase)\n"
        "concept sentence\nsentence.contains(phrase)\n");
    Document b = Parse(
        "concept phrase\nconcept pair\npair has_a (arg1=phrase, arg2=phrase);\n"
        "concept sentence\nsentence contains phrase\n");
    CHECK(a.graph == b.graph);
    CHECK(ParseCode("concept a concept b\n") == ErrorCode::kSyntaxError);
  }

  TEST_CASE("pretty printing") {
    const LcExpr fire =
        OrL({Atom("firestationCity", "x"),
             ExistsL(Atom("firestationCity", std::nullopt,
                          Path{"x", {{"neighbor", "arg2"}}}))});
    CHECK(Pretty(fire) ==
          "orL(firestationCity('x'), existsL(firestationCity(path=('x', "
          "neighbor.arg2))))");
    CHECK(Pretty(IfL(Atom("a", "x"), Atom("b", "x"))).rfind("ifL(", 0) == 0);
  }

  TEST_CASE("property: parse(pretty(e)) == e") {
    testing::Gen gen(21);
    for (int i = 0; i < 2000; ++i) {
      const LcExpr e = RandomLc(gen, 0);
      const std::string text = Pretty(e);
      INFO(text);
      CHECK(ParseExpr(text) == e);
    }
  }

  TEST_CASE("property: shipped files parse and round-trip") {
    for (const char* f : {"emr.dk", "work_for.dk", "firestation.dk",
                          "wiqa.dk", "cifar.dk", "emr_synth.dk"}) {
      Document d = Parse(testing::ReadData(f));
      CHECK(Validate(d.graph).ok());
      CHECK(Parse(PrettyGraph(d.graph)).graph == d.graph);
      for (const Constraint& c : d.constraints.constraints) {
        CHECK(ParseExpr(Pretty(c.expr)) == c.expr);
      }
    }
  }

  TEST_CASE("fuzz: one-token mutations of valid files are rejected") {
    int mutants = 0;
    for (const char* f : {"work_for.dk", "firestation.dk", "cifar.dk"}) {
      const std::string text = testing::ReadData(f);
      REQUIRE_FALSE(Rejected(text));
      for (const Token& t : Tokens(text)) {
        const std::string before = text.substr(0, t.begin);
        const std::string after = text.substr(t.end);
        std::vector<std::string> variants;
        // Renaming a declared argument is an alpha-renaming when the
        // argument is never used, so only its removal counts as a mutation.
        const bool arg_decl = t.ident && after.rfind("=", 0) == 0;
        if (t.ident && !arg_decl) {
          variants.push_back(before + "zz_undeclared" + after);
          variants.push_back(before + "7" + after);
        } else if (arg_decl) {
          variants.push_back(before + after);
        } else if (text[t.begin] != ';') {
          variants.push_back(before + after);
          variants.push_back(before + "(" + text.substr(t.begin));
        }
        for (const std::string& v : variants) {
          ++mutants;
          INFO(std::string(f) << " mutant:\n" << v);
          CHECK(Rejected(v));
        }
      }
    }
    CHECK(mutants > 100);
  }
}

}  // namespace
}  // namespace declearn
