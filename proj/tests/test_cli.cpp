#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doccalc/io/json_ast.hpp"

namespace {

namespace fs = std::filesystem;

struct CliResult {
  int code;
  std::string out;
};

std::string fixture(const std::string& name) {
  return std::string(DOCCALC_FIXTURES) + "/" + name;
}

CliResult run_cli(const std::string& args) {
  std::string cmd =
      std::string(DOCCALC_CLI_PATH) + " " + args + " 2>/dev/null";
  std::array<char, 4096> buffer{};
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  size_t n;
  while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
    out.append(buffer.data(), n);
  }
  int status = pclose(pipe);
  int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return {code, out};
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("check prints synthesized types") {
  auto aba = run_cli("check " + fixture("aba_program.json"));
  CHECK(aba.code == 0);
  CHECK(aba.out == "Str\n");

  auto tree = run_cli("check " + fixture("hello_world.json"));
  CHECK(tree.code == 0);
  CHECK(tree.out == "NodeTy list\n");

  auto react = run_cli("check " + fixture("counter.json"));
  CHECK(react.code == 0);
  CHECK(react.out == "ReactNode list\n");
}

TEST_CASE("check rejects ill-typed programs with exit 1") {
  fs::path bad = fs::temp_directory_path() / "doccalc_bad_attr.json";
  {
    std::ofstream out(bad);
    out << R"({"version":"1","body":{"kind":"treetpl","template":[
      {"kind":"node","name":"para",
       "attrs":[["k",{"kind":"boollit","value":true}]],"children":[]}]}})";
  }
  auto res = run_cli("check " + bad.string());
  CHECK(res.code == 1);

  fs::path garbled = fs::temp_directory_path() / "doccalc_garbled.json";
  {
    std::ofstream out(garbled);
    out << "{ not json";
  }
  CHECK(run_cli("check " + garbled.string()).code == 2);
}

TEST_CASE("eval prints strings raw and documents structured") {
  CHECK(run_cli("eval " + fixture("aba_program.json")).out == "aba\n");
  CHECK(run_cli("eval " + fixture("aba_template.json")).out == "aba\n");

  auto html = run_cli("eval " + fixture("hello_world.json") + " --out html");
  CHECK(html.out == "<p>Hello <strong>World</strong></p>\n");

  auto shop = run_cli("eval " + fixture("shopping_list.json") + " --out html");
  auto frag = run_cli("eval " + fixture("shopping_list.json") +
                      " --strategy fragment --out html");
  CHECK(shop.out == frag.out);
  CHECK(shop.out ==
        "<p>Today I am going shopping for:</p>"
        "<ul><li><p>Milk</p></li><li><p>Eggs</p></li>"
        "<li><p>Cheese</p></li></ul>\n");
}

TEST_CASE("desugar emits template-free kernel json") {
  auto res = run_cli("desugar " + fixture("aba_template.json"));
  CHECK(res.code == 0);
  auto parsed = doccalc::io::json::parse(res.out);
  auto expr = doccalc::io::expr_from_json(parsed);
  CHECK_FALSE(doccalc::kernel::contains_template(expr));
  CHECK(res.out.find("tpl") == std::string::npos);
}

TEST_CASE("eval runs flowtpl programs through reforestation") {
  auto res = run_cli("eval " + fixture("reforest_doc.json") + " --out html");
  CHECK(res.out ==
        "<p>HelloWorld</p><figure></figure><p>Post-figure</p>\n");

  auto literal = run_cli("eval " + fixture("reforest_doc.json") +
                         " --literal-reforest --out html");
  CHECK(literal.out ==
        "<p>HelloWorld</p><p></p><figure><p></p></figure>"
        "<p>Post-figure</p>\n");
}

TEST_CASE("render resolves references or reports them") {
  auto res = run_cli("render " + fixture("sections_doc.json") + " --out html");
  CHECK(res.code == 0);
  CHECK(res.out.find("see 2.1") != std::string::npos);

  auto unrefd = run_cli("render " + fixture("hello_world.json") + " --out html");
  CHECK(unrefd.code == 0);
  CHECK(unrefd.out == "<p>Hello <strong>World</strong></p>\n");

  CHECK(run_cli("render " + fixture("dangling_ref.json")).code == 1);
  CHECK(run_cli("render " + fixture("duplicate_id.json")).code == 1);
}

TEST_CASE("react writes per-step articles and reports sections usage") {
  fs::path dir = fs::temp_directory_path() / "doccalc_react_steps";
  fs::remove_all(dir);

  auto simple = run_cli("react " + fixture("counter.json") + " --trace " +
                        fixture("counter_trace.jsonl") +
                        " --strategy simple --emit " + (dir / "s").string());
  CHECK(simple.code == 0);
  CHECK(simple.out.find("sections_invocations: 21\n") != std::string::npos);

  auto incr = run_cli("react " + fixture("counter.json") + " --trace " +
                      fixture("counter_trace.jsonl") +
                      " --strategy incr --emit " + (dir / "i").string());
  CHECK(incr.code == 0);
  CHECK(incr.out.find("sections_invocations: 1\n") != std::string::npos);

  for (int i = 0; i <= 20; ++i) {
    fs::path name = "article_" + std::to_string(i) + ".json";
    CHECK(slurp(dir / "s" / name) == slurp(dir / "i" / name));
  }

  // unknown instance ids in a trace are a semantic error
  fs::path bad_trace = fs::temp_directory_path() / "doccalc_bad_trace.jsonl";
  {
    std::ofstream out(bad_trace);
    out << R"({"signals": {"42": "click"}})" << "\n";
  }
  CHECK(run_cli("react " + fixture("counter.json") + " --trace " +
                bad_trace.string())
            .code == 1);
}

TEST_CASE("fuel exhaustion exits with the resource code") {
  fs::path spin = fs::temp_directory_path() / "doccalc_spin.json";
  {
    std::ofstream out(spin);
    out << R"({"version":"1","body":{"kind":"fix","name":"x",
      "annot":{"kind":"str"},
      "body":{"kind":"concat","lhs":{"kind":"var","name":"x"},
              "rhs":{"kind":"str","value":"a"}}}})";
  }
  CHECK(run_cli("eval " + spin.string() + " --fuel 1000").code == 3);
}

TEST_CASE("permissive mode downgrades unknown tags") {
  fs::path odd = fs::temp_directory_path() / "doccalc_odd_tag.json";
  {
    std::ofstream out(odd);
    out << R"({"version":"1","body":{"kind":"treetpl","template":[
      {"kind":"node","name":"aside","attrs":[],"children":[]}]}})";
  }
  auto strict = run_cli("eval " + odd.string());
  CHECK(strict.code == 0);  // eval serializes without validating
  auto permissive = run_cli("eval " + odd.string() + " --permissive");
  CHECK(permissive.code == 0);
  CHECK(permissive.out.find("aside") != std::string::npos);
}

TEST_CASE("surface templates load through --as") {
  auto res = run_cli("eval " + fixture("hello.tpl") + " --out html");
  CHECK(res.code == 0);
  CHECK(res.out == "<p>Hello <strong>World</strong></p>\n");

  auto checked = run_cli("check " + fixture("hello.tpl"));
  CHECK(checked.out == "NodeTy list\n");
}

}  // TEST_SUITE
