#include "doccalc/reactive/reactive.hpp"

#include "doccalc/doc/bridge.hpp"
#include "doccalc/kernel/stdlib.hpp"
#include "doccalc/kernel/typecheck.hpp"
#include "doccalc/util/overloaded.hpp"

namespace doccalc::reactive {

namespace klib = kernel::stdlib;

// --- runtime -----------------------------------------------------------------

ReactNode Runtime::instantiate(const std::shared_ptr<const Component>& com,
                               Value props) {
  kernel::Type found = kernel::typecheck(kernel::TyCtxt(), props);
  if (found != com->prop_type) {
    throw PropTypeMismatch("component '" + com->key + "' expects props of type " +
                           klib::type_display_name(com->prop_type) +
                           ", got " + klib::type_display_name(found));
  }
  Value state = com->init(props);
  InstId id = next_id_++;
  ReactNode node = com->view(state, *this);
  auto inst = std::make_shared<const Instance>(
      Instance{id, com, std::move(props), std::move(state), std::move(node)});
  return ReactNode(RInst{std::move(inst)});
}

ReactNode Runtime::instantiate_key(const std::string& key, Value props) {
  auto it = registry_->find(key);
  if (it == registry_->end()) {
    throw UnknownComponent("unknown component '" + key + "'");
  }
  return instantiate(it->second, std::move(props));
}

// --- equality ------------------------------------------------------------------

bool operator==(const ReactNode& a, const ReactNode& b) {
  if (a.index() != b.index()) return false;
  return std::visit(
      overloaded{
          [&](const RText& x) { return x.text == std::get<RText>(b).text; },
          [&](const RNode& x) {
            const auto& y = std::get<RNode>(b);
            if (x.name != y.name || x.attrs != y.attrs ||
                x.children.size() != y.children.size())
              return false;
            for (size_t i = 0; i < x.children.size(); ++i)
              if (x.children[i] != y.children[i]) return false;
            return true;
          },
          [&](const RInst& x) {
            const auto& y = std::get<RInst>(b);
            if (x.inst == y.inst) return true;
            return x.inst->id == y.inst->id &&
                   x.inst->com->key == y.inst->com->key &&
                   x.inst->props == y.inst->props &&
                   x.inst->state == y.inst->state && x.inst->node == y.inst->node;
          },
      },
      a);
}

// --- stepping -------------------------------------------------------------------

ReactNode doc_step(Runtime& rt, const SignalMap& signals, const ReactNode& n) {
  return std::visit(
      overloaded{
          [&](const RText&) { return n; },
          [&](const RNode& x) {
            std::vector<ReactNode> children;
            children.reserve(x.children.size());
            for (const auto& c : x.children)
              children.push_back(doc_step(rt, signals, c));
            return ReactNode(RNode{x.name, x.attrs, std::move(children)});
          },
          [&](const RInst& x) {
            const Instance& inst = *x.inst;
            auto found = signals.find(inst.id);
            if (found == signals.end()) {
              auto updated = std::make_shared<const Instance>(
                  Instance{inst.id, inst.com, inst.props, inst.state,
                           doc_step(rt, signals, inst.node)});
              return ReactNode(RInst{std::move(updated)});
            }
            Value state = inst.com->update(found->second, inst.state);
            ReactNode fresh = inst.com->view(state, rt);
            ReactNode merged = reconcile(rt, signals, inst.node, fresh);
            auto updated = std::make_shared<const Instance>(Instance{
                inst.id, inst.com, inst.props, std::move(state),
                std::move(merged)});
            return ReactNode(RInst{std::move(updated)});
          },
      },
      n);
}

std::vector<ReactNode> doc_step(Runtime& rt, const SignalMap& signals,
                                const std::vector<ReactNode>& roots) {
  std::vector<ReactNode> out;
  out.reserve(roots.size());
  for (const auto& n : roots) out.push_back(doc_step(rt, signals, n));
  return out;
}

ReactNode reconcile(Runtime& rt, const SignalMap& signals,
                    const ReactNode& old_node, const ReactNode& new_node) {
  const auto* old_inst = std::get_if<RInst>(&old_node);
  const auto* new_inst = std::get_if<RInst>(&new_node);
  if (old_inst && new_inst) {
    if (old_inst->inst->com->key == new_inst->inst->com->key &&
        old_inst->inst->props == new_inst->inst->props) {
      // state persists: keep the old instance and step it
      return doc_step(rt, signals, old_node);
    }
    return new_node;
  }
  const auto* old_struct = std::get_if<RNode>(&old_node);
  const auto* new_struct = std::get_if<RNode>(&new_node);
  if (old_struct && new_struct && old_struct->name == new_struct->name) {
    std::vector<ReactNode> children;
    children.reserve(new_struct->children.size());
    for (size_t i = 0; i < new_struct->children.size(); ++i) {
      if (i < old_struct->children.size()) {
        children.push_back(reconcile(rt, signals, old_struct->children[i],
                                     new_struct->children[i]));
      } else {
        children.push_back(new_struct->children[i]);
      }
    }
    return ReactNode(RNode{new_struct->name, new_struct->attrs,
                           std::move(children)});
  }
  return new_node;
}

// --- viewing --------------------------------------------------------------------

doc::NodeList doc_view(const ReactNode& n) {
  return std::visit(
      overloaded{
          [&](const RText& x) { return doc::NodeList{doc::text(x.text)}; },
          [&](const RNode& x) {
            doc::NodeList children;
            for (const auto& c : x.children) {
              doc::NodeList sub = doc_view(c);
              children.insert(children.end(), sub.begin(), sub.end());
            }
            return doc::NodeList{doc::node(x.name, x.attrs, std::move(children))};
          },
          [&](const RInst& x) { return doc_view(x.inst->node); },
      },
      n);
}

doc::NodeList doc_view(const std::vector<ReactNode>& roots) {
  doc::NodeList out;
  for (const auto& n : roots) {
    doc::NodeList sub = doc_view(n);
    out.insert(out.end(), sub.begin(), sub.end());
  }
  return out;
}

// --- dirty check ----------------------------------------------------------------

namespace {

void descendents_into(const ReactNode& n, std::set<std::string>& out) {
  std::visit(overloaded{
                 [&](const RText&) {},
                 [&](const RNode& x) {
                   out.insert(x.name);
                   for (const auto& c : x.children) descendents_into(c, out);
                 },
                 [&](const RInst& x) { descendents_into(x.inst->node, out); },
             },
             n);
}

bool mentions_section(const ReactNode& n) {
  return std::visit(
      overloaded{
          [&](const RText&) { return false; },
          [&](const RNode& x) {
            if (x.name == "section") return true;
            for (const auto& c : x.children)
              if (mentions_section(c)) return true;
            return false;
          },
          [&](const RInst& x) { return mentions_section(x.inst->node); },
      },
      n);
}

}  // namespace

std::set<std::string> descendents(const ReactNode& n) {
  std::set<std::string> out;
  descendents_into(n, out);
  return out;
}

bool dirty(const ReactNode& old_node, const ReactNode& new_node) {
  if (old_node.index() != new_node.index()) {
    return mentions_section(old_node) || mentions_section(new_node);
  }
  return std::visit(
      overloaded{
          [&](const RText&) { return false; },
          [&](const RNode& x) {
            const auto& y = std::get<RNode>(new_node);
            if (x.name != y.name) {
              return mentions_section(old_node) || mentions_section(new_node);
            }
            size_t common = std::min(x.children.size(), y.children.size());
            for (size_t i = 0; i < common; ++i) {
              if (dirty(x.children[i], y.children[i])) return true;
            }
            for (size_t i = common; i < x.children.size(); ++i)
              if (mentions_section(x.children[i])) return true;
            for (size_t i = common; i < y.children.size(); ++i)
              if (mentions_section(y.children[i])) return true;
            return false;
          },
          [&](const RInst& x) {
            const auto& y = std::get<RInst>(new_node);
            const Instance& a = *x.inst;
            const Instance& b = *y.inst;
            bool stepped = !(a.id == b.id && a.com->key == b.com->key &&
                             a.props == b.props && a.state == b.state);
            if (stepped &&
                (mentions_section(a.node) || mentions_section(b.node))) {
              return true;
            }
            return dirty(a.node, b.node);
          },
      },
      old_node);
}

bool dirty(const std::vector<ReactNode>& old_roots,
           const std::vector<ReactNode>& new_roots) {
  size_t common = std::min(old_roots.size(), new_roots.size());
  for (size_t i = 0; i < common; ++i) {
    if (dirty(old_roots[i], new_roots[i])) return true;
  }
  for (size_t i = common; i < old_roots.size(); ++i)
    if (mentions_section(old_roots[i])) return true;
  for (size_t i = common; i < new_roots.size(); ++i)
    if (mentions_section(new_roots[i])) return true;
  return false;
}

namespace {

void collect_ids_into(const ReactNode& n, std::set<InstId>& out) {
  std::visit(overloaded{
                 [&](const RText&) {},
                 [&](const RNode& x) {
                   for (const auto& c : x.children) collect_ids_into(c, out);
                 },
                 [&](const RInst& x) {
                   out.insert(x.inst->id);
                   collect_ids_into(x.inst->node, out);
                 },
             },
             n);
}

}  // namespace

std::set<InstId> collect_instance_ids(const std::vector<ReactNode>& roots) {
  std::set<InstId> out;
  for (const auto& n : roots) collect_ids_into(n, out);
  return out;
}

// --- mounting -------------------------------------------------------------------

ReactNode mount_value(Runtime& rt, const Value& value) {
  const auto* fold = std::get_if<kernel::FoldE>(&value.node());
  if (!fold) throw doc::EncodingError("react node: expected a fold value");
  const auto* inj = std::get_if<kernel::InjectE>(&fold->value.node());
  if (!inj) throw doc::EncodingError("react node: expected an injection");
  if (inj->label == "text") {
    return ReactNode(RText{doc::decode_str(inj->value)});
  }
  if (inj->label == "node") {
    const auto* rec = std::get_if<kernel::RecordE>(&inj->value.node());
    if (!rec) throw doc::EncodingError("react node: expected a record");
    const kernel::Expr* name = nullptr;
    const kernel::Expr* attrs = nullptr;
    const kernel::Expr* children = nullptr;
    for (const auto& [l, f] : rec->fields) {
      if (l == "name") name = &f;
      else if (l == "attrs") attrs = &f;
      else if (l == "children") children = &f;
    }
    if (!name || !attrs || !children)
      throw doc::EncodingError("react node: malformed struct-node record");
    return ReactNode(RNode{doc::decode_str(*name), doc::decode_attrs(*attrs),
                           mount_list_value(rt, *children)});
  }
  if (inj->label == "inst") {
    const auto* pack = std::get_if<kernel::PackE>(&inj->value.node());
    if (!pack) throw doc::EncodingError("react instance: expected a pack value");
    const auto* rec = std::get_if<kernel::RecordE>(&pack->value.node());
    if (!rec) throw doc::EncodingError("react instance: expected a record");
    const kernel::Expr* com = nullptr;
    const kernel::Expr* props = nullptr;
    for (const auto& [l, f] : rec->fields) {
      if (l == "com") com = &f;
      else if (l == "props") props = &f;
    }
    if (!com || !props)
      throw doc::EncodingError("react instance: malformed record");
    return rt.instantiate_key(doc::decode_str(*com), *props);
  }
  throw doc::EncodingError("react node: unexpected variant '" + inj->label + "'");
}

std::vector<ReactNode> mount_list_value(Runtime& rt, const Value& value) {
  auto items = klib::list_to_values(value);
  if (!items) throw doc::EncodingError("react nodes: expected a list value");
  std::vector<ReactNode> out;
  out.reserve(items->size());
  for (const auto& item : *items) out.push_back(mount_value(rt, item));
  return out;
}

// --- reference-rendering runs ------------------------------------------------

namespace {

void check_signal_ids(const std::vector<ReactNode>& roots,
                      const SignalMap& signals) {
  auto ids = collect_instance_ids(roots);
  for (const auto& [id, sig] : signals) {
    if (!ids.count(id)) {
      throw UnknownInstance("signal addressed to unknown instance " +
                            std::to_string(id));
    }
  }
}

doc::NodeList render_with(const refs::IdCtxt& ctx, const doc::NodeList& article) {
  auto errors = refs::check_valid(ctx, article);
  if (!errors.empty()) throw refs::RefsException(std::move(errors));
  return refs::replace_refs(ctx, article);
}

}  // namespace

RunResult run_simple(Runtime rt, std::vector<ReactNode> roots,
                     const std::vector<SignalMap>& trace,
                     const RunOptions& options) {
  RunResult result;
  for (size_t i = 0;; ++i) {
    doc::NodeList article = doc_view(roots);
    refs::IdCtxt ctx = refs::sections(article);
    result.stats.sections_calls += 1;
    result.outputs.push_back(render_with(ctx, article));
    result.articles.push_back(std::move(article));
    if (i >= trace.size()) break;
    if (options.validate_signal_ids) check_signal_ids(roots, trace[i]);
    roots = doc_step(rt, trace[i], roots);
  }
  return result;
}

RunResult run_incr(Runtime rt, std::vector<ReactNode> roots,
                   const std::vector<SignalMap>& trace,
                   const RunOptions& options) {
  RunResult result;
  refs::IdCtxt cached;
  for (size_t i = 0;; ++i) {
    doc::NodeList article = doc_view(roots);
    if (i == 0) {
      cached = refs::sections(article);
      result.stats.sections_calls += 1;
    }
    result.outputs.push_back(render_with(cached, article));
    result.articles.push_back(std::move(article));
    if (i >= trace.size()) break;
    if (options.validate_signal_ids) check_signal_ids(roots, trace[i]);
    std::vector<ReactNode> next = doc_step(rt, trace[i], roots);
    bool flagged = dirty(roots, next);
    result.stats.dirty_steps.push_back(flagged);
    roots = std::move(next);
    if (flagged) {
      cached = refs::sections(doc_view(roots));
      result.stats.sections_calls += 1;
    }
  }
  return result;
}

RunResult run_simple(Runtime rt, const ReactNode& root,
                     const std::vector<SignalMap>& trace,
                     const RunOptions& options) {
  return run_simple(std::move(rt), std::vector<ReactNode>{root}, trace, options);
}

RunResult run_incr(Runtime rt, const ReactNode& root,
                   const std::vector<SignalMap>& trace,
                   const RunOptions& options) {
  return run_incr(std::move(rt), std::vector<ReactNode>{root}, trace, options);
}

// --- builtin components ---------------------------------------------------------

namespace {

using kernel::Expr;
using kernel::Type;

std::string value_str(const Value& v) { return doc::decode_str(v); }

const Value& value_field(const Value& v, const std::string& label) {
  const auto* rec = std::get_if<kernel::RecordE>(&v.node());
  if (!rec) throw doc::EncodingError("expected a record state");
  for (const auto& [l, f] : rec->fields) {
    if (l == label) return f;
  }
  throw doc::EncodingError("missing state field '" + label + "'");
}

std::shared_ptr<const Component> make_counter() {
  return std::make_shared<const Component>(Component{
      "counter", Type::str(),
      [](const Value& props) {
        return Expr::record({{"fst", props}, {"snd", Expr::str_lit("")}});
      },
      [](const Signal& sig, const Value& state) {
        if (sig != "click") return state;
        std::string mark = value_str(value_field(state, "fst"));
        std::string seen = value_str(value_field(state, "snd"));
        return Expr::record({{"fst", value_field(state, "fst")},
                             {"snd", Expr::str_lit(mark + seen)}});
      },
      [](const Value& state, Runtime&) {
        return ReactNode(RText{value_str(value_field(state, "snd"))});
      }});
}

std::shared_ptr<const Component> make_static_text() {
  return std::make_shared<const Component>(Component{
      "static-text", Type::str(),
      [](const Value& props) { return props; },
      [](const Signal&, const Value& state) { return state; },
      [](const Value& state, Runtime&) {
        return ReactNode(RText{value_str(state)});
      }});
}

std::shared_ptr<const Component> make_toggle_section() {
  return std::make_shared<const Component>(Component{
      "toggle-section", Type::str(),  // the section id
      [](const Value& props) {
        return Expr::record({{"id", props}, {"on", Expr::bool_lit(false)}});
      },
      [](const Signal& sig, const Value& state) {
        if (sig != "toggle") return state;
        const auto* on =
            std::get_if<kernel::BoolE>(&value_field(state, "on").node());
        bool now = on && on->value;
        return Expr::record(
            {{"id", value_field(state, "id")}, {"on", Expr::bool_lit(!now)}});
      },
      [](const Value& state, Runtime&) {
        const auto* on =
            std::get_if<kernel::BoolE>(&value_field(state, "on").node());
        if (on && on->value) {
          std::string id = value_str(value_field(state, "id"));
          return ReactNode(RNode{"section", {{"id", id}}, {}});
        }
        return ReactNode(RText{""});
      }});
}

std::shared_ptr<const Component> make_nest() {
  return std::make_shared<const Component>(Component{
      "nest",
      Type::record({{"child", Type::str()}, {"cprops", Type::str()}}),
      [](const Value& props) {
        return Expr::record({{"child", value_field(props, "child")},
                             {"cprops", value_field(props, "cprops")},
                             {"marks", Expr::str_lit("")}});
      },
      [](const Signal& sig, const Value& state) {
        if (sig != "ping") return state;
        std::string marks = value_str(value_field(state, "marks"));
        return Expr::record({{"child", value_field(state, "child")},
                             {"cprops", value_field(state, "cprops")},
                             {"marks", Expr::str_lit(marks + ".")}});
      },
      [](const Value& state, Runtime& rt) {
        std::string child = value_str(value_field(state, "child"));
        ReactNode inner = rt.instantiate_key(child, value_field(state, "cprops"));
        return ReactNode(
            RNode{"group",
                  {},
                  {ReactNode(RText{value_str(value_field(state, "marks"))}),
                   std::move(inner)}});
      }});
}

}  // namespace

std::shared_ptr<const Registry> builtin_registry() {
  auto registry = std::make_shared<Registry>();
  for (const auto& com :
       {make_counter(), make_static_text(), make_toggle_section(), make_nest()}) {
    registry->emplace(com->key, com);
  }
  return registry;
}

}  // namespace doccalc::reactive
