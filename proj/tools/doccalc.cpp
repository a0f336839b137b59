#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "doccalc/doc/bridge.hpp"
#include "doccalc/doc/node.hpp"
#include "doccalc/io/html.hpp"
#include "doccalc/io/json_ast.hpp"
#include "doccalc/io/surface.hpp"
#include "doccalc/kernel/eval.hpp"
#include "doccalc/kernel/stdlib.hpp"
#include "doccalc/kernel/typecheck.hpp"
#include "doccalc/reactive/reactive.hpp"
#include "doccalc/refs/refs.hpp"
#include "doccalc/template/desugar.hpp"

namespace {

namespace fs = std::filesystem;
using doccalc::io::json;
namespace kernel = doccalc::kernel;
namespace klib = doccalc::kernel::stdlib;
namespace tpl = doccalc::tpl;
namespace docm = doccalc::doc;
namespace reactive = doccalc::reactive;

constexpr int kExitOk = 0;
constexpr int kExitSemantic = 1;
constexpr int kExitParse = 2;
constexpr int kExitResource = 3;

struct CliError {
  int code;
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError{kExitParse, "cannot open file: " + path};
  std::ostringstream buffer;
  buffer << in.rdbuf();
  std::string text = buffer.str();
  // normalize CRLF before any "\n\n" matching
  std::string out;
  out.reserve(text.size());
  for (size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '\r' && i + 1 < text.size() && text[i + 1] == '\n') continue;
    out += text[i];
  }
  return out;
}

struct CommonOptions {
  std::string file;
  std::uint64_t fuel = kernel::kDefaultFuel;
  bool permissive = false;
  bool literal_reforest = false;
  std::string tree_strategy = "splice";  // splice | fragment
  std::string tpl_kind = "treetpl";      // wrapper for surface files
};

tpl::DesugarOptions desugar_options(const CommonOptions& opts) {
  tpl::DesugarOptions d;
  d.fragment_strategy = opts.tree_strategy == "fragment";
  d.literal_reforest = opts.literal_reforest;
  return d;
}

doccalc::io::ProgramFile load_program(const CommonOptions& opts) {
  std::string text = read_file(opts.file);
  if (fs::path(opts.file).extension() == ".tpl") {
    kernel::Template t = doccalc::io::parse_surface(text);
    auto kind = [&]() -> kernel::TplKind {
      if (opts.tpl_kind == "strtpl") return kernel::TplKind::StrTpl;
      if (opts.tpl_kind == "treetpl") return kernel::TplKind::TreeTpl;
      if (opts.tpl_kind == "fragtpl") return kernel::TplKind::FragTpl;
      if (opts.tpl_kind == "flowtpl") return kernel::TplKind::FlowTpl;
      if (opts.tpl_kind == "reacttpl") return kernel::TplKind::ReactTpl;
      throw CliError{kExitParse, "unknown template kind: " + opts.tpl_kind};
    }();
    return doccalc::io::ProgramFile{"1", kernel::Expr::tpl(kind, t), {}};
  }
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& err) {
    throw CliError{kExitParse, std::string("JSON parse error: ") + err.what()};
  }
  return doccalc::io::program_from_json(j);
}

kernel::Expr desugar_and_check(const doccalc::io::ProgramFile& program,
                               const CommonOptions& opts, kernel::Type& type) {
  kernel::Expr lowered = tpl::desugar(program.body, desugar_options(opts));
  type = kernel::typecheck(kernel::TyCtxt(), lowered);
  return lowered;
}

bool is_node_list(const kernel::Type& t) {
  return t == klib::list_type(klib::node_ty());
}

bool is_react(const kernel::Type& t) { return t == klib::react_node(); }
bool is_react_list(const kernel::Type& t) {
  return t == klib::list_type(klib::react_node());
}

void report_validation(const docm::NodeList& article, bool permissive) {
  if (!permissive) return;
  auto report = docm::validate_article(article, true);
  for (const auto& w : report.warnings) {
    std::cerr << "warning: " << w.message << " at "
              << docm::path_to_string(w.path) << "\n";
  }
  for (const auto& e : report.errors) {
    std::cerr << "warning: " << e.message << " at "
              << docm::path_to_string(e.path) << "\n";
  }
}

void write_document(const docm::NodeList& article, const std::string& out_format) {
  if (out_format == "html") {
    std::cout << doccalc::io::to_html(article) << "\n";
  } else {
    std::cout << doccalc::io::doc_to_json(article).dump(2) << "\n";
  }
}

int cmd_check(const CommonOptions& opts) {
  auto program = load_program(opts);
  kernel::Type type = kernel::typecheck(kernel::TyCtxt(), program.body);
  std::cout << klib::type_display_name(type) << "\n";
  return kExitOk;
}

int cmd_desugar(const CommonOptions& opts) {
  auto program = load_program(opts);
  kernel::Expr lowered = tpl::desugar(program.body, desugar_options(opts));
  std::cout << doccalc::io::expr_to_json(lowered).dump(2) << "\n";
  return kExitOk;
}

int cmd_eval(const CommonOptions& opts, const std::string& out_format) {
  auto program = load_program(opts);
  kernel::Type type = kernel::Type::str();
  kernel::Expr lowered = desugar_and_check(program, opts, type);
  kernel::Expr value = kernel::eval(lowered, opts.fuel);
  if (type == kernel::Type::str()) {
    std::cout << docm::decode_str(value) << "\n";
    return kExitOk;
  }
  if (is_node_list(type)) {
    docm::NodeList article = docm::decode_doc(value);
    report_validation(article, opts.permissive);
    write_document(article, out_format);
    return kExitOk;
  }
  if (is_react(type) || is_react_list(type)) {
    reactive::Runtime rt(reactive::builtin_registry());
    std::vector<reactive::ReactNode> roots =
        is_react(type)
            ? std::vector<reactive::ReactNode>{reactive::mount_value(rt, value)}
            : reactive::mount_list_value(rt, value);
    docm::NodeList article = reactive::doc_view(roots);
    report_validation(article, opts.permissive);
    write_document(article, out_format);
    return kExitOk;
  }
  throw CliError{kExitSemantic,
                 "program must have type Str, NodeTy list, or ReactNode; got " +
                     klib::type_display_name(type)};
}

int cmd_render(const CommonOptions& opts, const std::string& out_format) {
  auto program = load_program(opts);
  kernel::Type type = kernel::Type::str();
  kernel::Expr lowered = desugar_and_check(program, opts, type);
  if (!is_node_list(type)) {
    throw CliError{kExitSemantic, "render requires a program of type "
                                  "NodeTy list; got " +
                                      klib::type_display_name(type)};
  }
  kernel::Expr value = kernel::eval(lowered, opts.fuel);
  docm::NodeList article = docm::decode_doc(value);
  report_validation(article, opts.permissive);
  docm::NodeList rendered = doccalc::refs::render_refs(article);
  write_document(rendered, out_format);
  return kExitOk;
}

int cmd_react(const CommonOptions& opts, const std::string& trace_path,
              const std::string& strategy, const std::string& emit_dir) {
  auto program = load_program(opts);
  auto registry = reactive::builtin_registry();
  for (const auto& key : program.components) {
    if (!registry->count(key)) {
      throw CliError{kExitSemantic, "unknown component '" + key + "'"};
    }
  }
  kernel::Type type = kernel::Type::str();
  kernel::Expr lowered = desugar_and_check(program, opts, type);
  if (!is_react(type) && !is_react_list(type)) {
    throw CliError{kExitSemantic, "react requires a program of type "
                                  "ReactNode or ReactNode list; got " +
                                      klib::type_display_name(type)};
  }
  kernel::Expr value = kernel::eval(lowered, opts.fuel);

  reactive::Runtime rt(registry);
  std::vector<reactive::ReactNode> roots =
      is_react(type)
          ? std::vector<reactive::ReactNode>{reactive::mount_value(rt, value)}
          : reactive::mount_list_value(rt, value);

  std::vector<reactive::SignalMap> trace;
  if (!trace_path.empty()) {
    trace = doccalc::io::trace_from_jsonl(read_file(trace_path));
  }

  reactive::RunOptions run_options;
  run_options.validate_signal_ids = true;
  reactive::RunResult result =
      strategy == "incr"
          ? reactive::run_incr(rt, roots, trace, run_options)
          : reactive::run_simple(rt, roots, trace, run_options);

  if (!emit_dir.empty()) {
    fs::create_directories(emit_dir);
    for (size_t i = 0; i < result.outputs.size(); ++i) {
      fs::path path = fs::path(emit_dir) / ("article_" + std::to_string(i) +
                                            ".json");
      std::ofstream out(path);
      out << doccalc::io::doc_to_json(result.outputs[i]).dump(2) << "\n";
    }
  } else {
    json all = json::array();
    for (const auto& article : result.outputs)
      all.push_back(doccalc::io::doc_to_json(article));
    std::cout << all.dump(2) << "\n";
  }
  std::cout << "steps: " << trace.size() << "\n";
  std::cout << "sections_invocations: " << result.stats.sections_calls << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"doccalc: typed document templates, references, reforestation, "
               "and a reactive runtime"};
  app.require_subcommand(1);

  CommonOptions opts;
  std::string out_format = "json";
  std::string trace_path;
  std::string react_strategy = "simple";
  std::string emit_dir;

  auto add_common = [&](CLI::App* cmd, bool with_strategy = true) {
    cmd->add_option("file", opts.file, "program file (.json or .tpl)")
        ->required();
    cmd->add_option("--fuel", opts.fuel, "evaluation step limit");
    cmd->add_flag("--permissive", opts.permissive,
                  "downgrade unknown article tags to warnings");
    cmd->add_flag("--literal-reforest", opts.literal_reforest,
                  "keep empty paragraphs when reforesting");
    cmd->add_option("--as", opts.tpl_kind,
                    "template wrapper for .tpl files "
                    "(strtpl|treetpl|fragtpl|flowtpl|reacttpl)");
    if (with_strategy) {
      cmd->add_option("--strategy", opts.tree_strategy,
                      "tree template elaboration (splice|fragment)")
          ->check(CLI::IsMember({"splice", "fragment"}));
    }
  };

  CLI::App* check = app.add_subcommand("check", "typecheck a program");
  add_common(check);

  CLI::App* desugar = app.add_subcommand("desugar", "lower templates and "
                                                    "print the kernel AST");
  add_common(desugar);

  CLI::App* eval = app.add_subcommand("eval", "evaluate a program");
  add_common(eval);
  eval->add_option("--out", out_format, "output format (json|html)")
      ->check(CLI::IsMember({"json", "html"}));

  CLI::App* render = app.add_subcommand("render", "evaluate and resolve "
                                                  "section references");
  add_common(render);
  render->add_option("--out", out_format, "output format (json|html)")
      ->check(CLI::IsMember({"json", "html"}));

  CLI::App* react = app.add_subcommand("react", "run a reactive document "
                                                "over a signal trace");
  add_common(react, /*with_strategy=*/false);
  react->add_option("--trace", trace_path, "signal trace (JSON lines)");
  react->add_option("--strategy", react_strategy,
                    "reference rendering strategy (simple|incr)")
      ->check(CLI::IsMember({"simple", "incr"}));
  react->add_option("--emit", emit_dir, "directory for per-step articles");

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return cmd_check(opts);
    if (desugar->parsed()) return cmd_desugar(opts);
    if (eval->parsed()) return cmd_eval(opts, out_format);
    if (render->parsed()) return cmd_render(opts, out_format);
    if (react->parsed())
      return cmd_react(opts, trace_path, react_strategy, emit_dir);
  } catch (const CliError& err) {
    std::cerr << "error: " << err.message << "\n";
    return err.code;
  } catch (const doccalc::io::ParseError& err) {
    std::cerr << "parse error: " << err.what() << "\n";
    return kExitParse;
  } catch (const kernel::TypeError& err) {
    std::cerr << "type error: " << err.what() << "\n";
    return kExitSemantic;
  } catch (const tpl::DesugarError& err) {
    std::cerr << "desugar error: " << err.what() << "\n";
    return kExitSemantic;
  } catch (const kernel::EvalError& err) {
    std::cerr << "evaluation error: " << err.what() << "\n";
    return err.kind == kernel::EvalErrorKind::FuelExhausted ? kExitResource
                                                            : kExitSemantic;
  } catch (const doccalc::refs::RefsException& err) {
    std::cerr << "reference error: " << err.what() << "\n";
    return kExitSemantic;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitSemantic;
  }
  return kExitOk;
}
