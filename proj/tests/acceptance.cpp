// Acceptance suite: runs every acceptance criterion and prints one
// PASS/FAIL line per criterion. Exits nonzero if any criterion fails.

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "doccalc/io/html.hpp"
#include "doccalc/io/json_ast.hpp"
#include "doccalc/refs/refs.hpp"
#include "doccalc/reforest/reforest.hpp"
#include "doccalc/template/check.hpp"
#include "support.hpp"

using namespace support;
using doccalc::kernel::eval;
using doccalc::kernel::step;
using doccalc::kernel::TplKind;
using doccalc::tpl::ContextType;
using doccalc::tpl::desugar;
using doccalc::tpl::desugar_expr;

namespace {

namespace fs = std::filesystem;

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void expect(bool condition, const std::string& what) {
    if (!condition) {
      ok = false;
      detail << " [" << what << "]";
    }
  }
};

struct Runner {
  int failures = 0;

  void run(const std::string& label, const std::function<void(Check&)>& body) {
    Check check;
    auto start = std::chrono::steady_clock::now();
    try {
      body(check);
    } catch (const std::exception& err) {
      check.ok = false;
      check.detail << " [exception: " << err.what() << "]";
    }
    auto seconds = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - start)
                       .count();
    std::printf("[%s] %s (%.1fs)%s\n", check.ok ? "PASS" : "FAIL",
                label.c_str(), seconds, check.detail.str().c_str());
    std::fflush(stdout);
    if (!check.ok) ++failures;
  }
};

std::string fixture(const std::string& name) {
  return std::string(DOCCALC_FIXTURES) + "/" + name;
}

struct CliResult {
  int code;
  std::string out;
};

CliResult run_cli(const std::string& args) {
  std::string cmd = std::string(DOCCALC_CLI_PATH) + " " + args + " 2>/dev/null";
  std::array<char, 4096> buffer{};
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  size_t n;
  while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
    out.append(buffer.data(), n);
  }
  int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

Expr load_body(const std::string& name) {
  std::ifstream in(fixture(name));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return doccalc::io::program_from_json(doccalc::io::json::parse(buffer.str()))
      .body;
}

std::string eval_str(const Expr& program) {
  return docm::decode_str(eval(desugar(program)));
}

docm::NodeList eval_tree(const Expr& program, bool fragment_strategy = false) {
  doccalc::tpl::DesugarOptions opts;
  opts.fragment_strategy = fragment_strategy;
  return docm::decode_doc(eval(desugar(program, opts)));
}

std::string dump_articles(const std::vector<docm::NodeList>& articles) {
  std::string out;
  for (const auto& a : articles) {
    out += doccalc::io::doc_to_json(a).dump();
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------

void criterion_theorem1(Check& check) {
  TyCtxt ctx = enum_ctx();
  const std::vector<TplKind> wrappers = {TplKind::StrTpl, TplKind::TreeTpl,
                                         TplKind::FragTpl, TplKind::FlowTpl};
  TplEnum enumeration;
  auto templates = enumeration.all();
  long accepted = 0;
  long mismatches = 0;
  for (const auto& t : templates) {
    for (TplKind kind : wrappers) {
      Expr sugared = Expr::tpl(kind, t);
      Type before = Type::str();
      try {
        before = doccalc::kernel::typecheck(ctx, sugared);
      } catch (const doccalc::kernel::TypeError&) {
        continue;  // ill-typed templates are outside the theorem
      }
      ++accepted;
      Expr lowered = desugar_expr(ctx, sugared);
      if (doccalc::kernel::contains_template(lowered) ||
          doccalc::kernel::typecheck(ctx, lowered) != before) {
        ++mismatches;
      }
    }
  }
  check.expect(mismatches == 0, "exhaustive counterexamples");
  check.expect(accepted > 100000, "exhaustive coverage");

  // 1,000 randomized larger templates over the full part grammar
  auto report = doccalc::tpl::check_theorem1(test_seed(), 1000);
  check.expect(report.checked == 1000, "randomized coverage");
  check.expect(report.ok(), "randomized counterexamples");
}

void criterion_theorem2(Check& check) {
  Rng rng(test_seed());
  long dirty_lemma_checks = 0;
  for (int trial = 0; trial < 200; ++trial) {
    reactive::Runtime rt(reactive::builtin_registry());
    ReactGen gen(rng, rt);
    auto roots = gen.gen_doc(5);
    auto trace = gen.gen_trace(roots, 50);

    auto simple = reactive::run_simple(rt, roots, trace);
    auto incr = reactive::run_incr(rt, roots, trace);

    if (dump_articles(simple.outputs) != dump_articles(incr.outputs)) {
      check.expect(false, "strategy outputs differ at trial " +
                              std::to_string(trial));
      return;
    }
    for (size_t i = 1; i < simple.articles.size(); ++i) {
      if (doccalc::refs::sections(simple.articles[i - 1]) !=
          doccalc::refs::sections(simple.articles[i])) {
        ++dirty_lemma_checks;
        if (!incr.stats.dirty_steps[i - 1]) {
          check.expect(false, "dirty lemma violated at trial " +
                                  std::to_string(trial) + " step " +
                                  std::to_string(i));
          return;
        }
      }
    }
  }
  check.expect(dirty_lemma_checks > 100, "dirty lemma exercised");
}

void criterion_aba(Check& check) {
  check.expect(eval_str(load_body("aba_program.json")) == "aba",
               "program value");
  check.expect(eval_str(load_body("aba_template.json")) == "aba",
               "template value");
}

void criterion_hello_world(Check& check) {
  docm::NodeList article = eval_tree(load_body("hello_world.json"));
  docm::NodeList expected = {docm::node(
      "para", {},
      {docm::text("Hello "), docm::node("bold", {}, {docm::text("World")})})};
  check.expect(article == expected, "tree shape");
  check.expect(docm::validate_article(article).ok(), "schema validation");
}

void criterion_shopping_list(Check& check) {
  Expr program = load_body("shopping_list.json");
  docm::NodeList spliced = eval_tree(program, false);
  docm::NodeList fragged = eval_tree(program, true);
  check.expect(spliced == fragged, "strategies agree");

  check.expect(spliced.size() == 2, "one para plus one list");
  const auto* para = std::get_if<docm::StructNode>(&spliced[0]);
  const auto* list = std::get_if<docm::StructNode>(&spliced[1]);
  check.expect(para && para->name == "para", "para first");
  if (!list || list->name != "list") {
    check.expect(false, "list second");
    return;
  }
  check.expect(list->children.size() == 3, "three items");
  Strings texts;
  for (const auto& child : list->children) {
    const auto* item = std::get_if<docm::StructNode>(&child);
    if (!item || item->name != "item" || item->children.size() != 1) {
      check.expect(false, "item shape");
      return;
    }
    const auto* inner = std::get_if<docm::StructNode>(&item->children[0]);
    if (!inner || inner->name != "para" || inner->children.size() != 1) {
      check.expect(false, "item contains a para");
      return;
    }
    const auto* text = std::get_if<docm::TextNode>(&inner->children[0]);
    if (!text) {
      check.expect(false, "para contains text, not a nested list");
      return;
    }
    texts.push_back(text->text);
  }
  check.expect(texts == Strings{"Milk", "Eggs", "Cheese"}, "item texts");
}

void criterion_scribble(Check& check) {
  docm::NodeList article = eval_tree(load_body("scribble_pairs.json"));
  const auto* list = std::get_if<docm::StructNode>(&article[0]);
  if (!list) {
    check.expect(false, "list node");
    return;
  }
  check.expect(list->children.size() == 4, "four items, none dropped");
  Strings texts;
  for (const auto& child : list->children) {
    const auto* item = std::get_if<docm::StructNode>(&child);
    if (!item || item->children.size() != 1) {
      check.expect(false, "item shape");
      return;
    }
    const auto* text = std::get_if<docm::TextNode>(&item->children[0]);
    texts.push_back(text ? text->text : "?");
  }
  check.expect(texts == Strings{"A", "B", "C", "D"}, "order preserved");
}

void criterion_reforest(Check& check) {
  docm::NodeList article = eval_tree(load_body("reforest_doc.json"));
  docm::NodeList expected = {
      docm::node("para", {}, {docm::text("Hello"), docm::text("World")}),
      docm::node("figure", {}, {}),
      docm::node("para", {}, {docm::text("Post-figure")})};
  check.expect(article == expected, "worked example output");
  check.expect(docm::validate_article(article).ok(), "schema validation");
}

void criterion_references(Check& check) {
  docm::NodeList article = eval_tree(load_body("sections_doc.json"));
  docm::NodeList rendered = doccalc::refs::render_refs(article);
  const auto* intro = std::get_if<docm::StructNode>(&rendered[0]);
  bool found = false;
  if (intro && !intro->children.empty()) {
    const auto* para = std::get_if<docm::StructNode>(&intro->children[0]);
    if (para && para->children.size() == 2) {
      found = para->children[1] == docm::text("2.1");
    }
  }
  check.expect(found, "ref renders 2.1");

  try {
    doccalc::refs::render_refs(eval_tree(load_body("dangling_ref.json")));
    check.expect(false, "dangling target rejected");
  } catch (const doccalc::refs::RefsException& err) {
    check.expect(err.errors.size() == 1 &&
                     err.errors[0].kind ==
                         doccalc::refs::RefErrorKind::UnknownTarget &&
                     err.errors[0].id == "ghost",
                 "dangling target error");
  }
  try {
    doccalc::refs::render_refs(eval_tree(load_body("duplicate_id.json")));
    check.expect(false, "duplicate id rejected");
  } catch (const doccalc::refs::RefsException& err) {
    check.expect(err.errors.size() == 1 &&
                     err.errors[0].kind ==
                         doccalc::refs::RefErrorKind::DuplicateId &&
                     err.errors[0].id == "a",
                 "duplicate id error");
  }
}

void criterion_metatheory(Check& check) {
  Rng rng(test_seed());
  TermGen gen(rng);
  long stuck = 0;
  long preservation_failures = 0;
  for (int trial = 0; trial < 5000; ++trial) {
    Type want = gen.gen_type(2);
    Expr term = gen.gen({}, want, 6);
    Type ty = check_closed(term);
    Expr cur = term;
    for (int i = 0; i < 300; ++i) {
      std::optional<Expr> next;
      try {
        next = step(cur);
      } catch (const doccalc::kernel::EvalError&) {
        ++stuck;
        break;
      }
      if (!next) break;  // progress: values are the only non-stepping terms
      try {
        if (check_closed(*next) != ty) ++preservation_failures;
      } catch (const doccalc::kernel::TypeError&) {
        ++preservation_failures;
      }
      cur = *next;
    }
  }
  check.expect(stuck == 0, "progress");
  check.expect(preservation_failures == 0, "preservation");

  // primitive behavior against sequence-level oracles
  for (int trial = 0; trial < 300; ++trial) {
    Strings xs, ys;
    int n = rng.range(0, 5);
    for (int i = 0; i < n; ++i) xs.push_back(rng.word());
    int m = rng.range(0, 5);
    for (int i = 0; i < m; ++i) ys.push_back(rng.word());
    bool ok =
        decode_str_list(eval(Expr::prim(doccalc::kernel::PrimName::Append,
                                        {Type::str()},
                                        {str_list(xs), str_list(ys)}))) ==
            oracle_append(xs, ys) &&
        decode_str_list(eval(Expr::prim(doccalc::kernel::PrimName::Rev,
                                        {Type::str()}, {str_list(xs)}))) ==
            oracle_rev(xs) &&
        docm::decode_str(eval(Expr::prim(doccalc::kernel::PrimName::Join, {},
                                         {str_list(xs)}))) == oracle_join(xs);
    if (!ok) {
      check.expect(false, "primitive oracle mismatch");
      return;
    }
  }
}

void criterion_strategy_equivalence(Check& check) {
  Rng rng(test_seed());
  TplGen gen(rng);
  gen.frag_expressible_only = true;
  long mismatches = 0;
  for (int trial = 0; trial < 500; ++trial) {
    Template t = gen.gen({}, ContextType::Node, 2, 6);
    Expr program = Expr::tpl(TplKind::TreeTpl, t);
    if (eval_tree(program, false) != eval_tree(program, true)) ++mismatches;
  }
  check.expect(mismatches == 0, "pipelines agree");
}

void criterion_incremental_saving(Check& check) {
  fs::path dir = fs::temp_directory_path() / "doccalc_acceptance_react";
  fs::remove_all(dir);

  auto incr = run_cli("react " + fixture("counter.json") + " --trace " +
                      fixture("counter_trace.jsonl") + " --strategy incr " +
                      "--emit " + (dir / "incr").string());
  check.expect(incr.code == 0, "incr run succeeds");
  check.expect(incr.out.find("sections_invocations: 1\n") != std::string::npos,
               "incr invokes sections once");

  auto simple = run_cli("react " + fixture("counter.json") + " --trace " +
                        fixture("counter_trace.jsonl") +
                        " --strategy simple --emit " + (dir / "simple").string());
  check.expect(simple.code == 0, "simple run succeeds");
  check.expect(
      simple.out.find("sections_invocations: 21\n") != std::string::npos,
      "simple invokes sections per article");

  for (int i = 0; i <= 20; ++i) {
    fs::path name = "article_" + std::to_string(i) + ".json";
    std::ifstream a(dir / "incr" / name);
    std::ifstream b(dir / "simple" / name);
    std::stringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    if (sa.str() != sb.str() || sa.str().empty()) {
      check.expect(false, "per-step articles identical");
      return;
    }
  }
}

}  // namespace

int main() {
  Runner runner;
  runner.run(
      "1. Theorem 1: desugaring preserves types (exhaustive size<=4 + 1000 "
      "randomized)",
      criterion_theorem1);
  runner.run(
      "2. Theorem 2: simple and incremental strategies agree (200 docs x 50 "
      "steps) and the dirty lemma holds",
      criterion_theorem2);
  runner.run("3. Golden aba: program and template evaluate to \"aba\"",
             criterion_aba);
  runner.run("4. Golden hello-world paragraph tree validates",
             criterion_hello_world);
  runner.run(
      "5. Golden shopping list: splice and fragment strategies agree and "
      "stay flat",
      criterion_shopping_list);
  runner.run("6. Scribble regression: two items per iteration keep A,B,C,D",
             criterion_scribble);
  runner.run("7. Reforestation worked example (no empty paragraph)",
             criterion_reforest);
  runner.run("8. References golden: \"2.1\" plus dangling/duplicate errors",
             criterion_references);
  runner.run(
      "9. Kernel metatheory: preservation and progress over 5000 terms, "
      "primitives match oracles",
      criterion_metatheory);
  runner.run("10. Strategy equivalence on 500 random templates",
             criterion_strategy_equivalence);
  runner.run(
      "11. Incremental saving: counter doc reports 1 vs 21 sections "
      "invocations",
      criterion_incremental_saving);

  if (runner.failures > 0) {
    std::printf("%d criterion(s) failed\n", runner.failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
