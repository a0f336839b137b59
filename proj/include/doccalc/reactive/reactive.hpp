#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "doccalc/doc/node.hpp"
#include "doccalc/kernel/ast.hpp"
#include "doccalc/refs/refs.hpp"

// Elm/React-hybrid reactive runtime: components own init/update/view, the
// runtime steps instances with signals, reconciles old and new views, and
// renders references with either the simple or the incremental strategy.
namespace doccalc::reactive {

using Signal = std::string;
using InstId = std::uint64_t;
using SignalMap = std::map<InstId, Signal>;

// Component props and state are kernel values.
using Value = kernel::Expr;

struct ReactNode;
struct Instance;
class Runtime;

struct RText {
  std::string text;
};
struct RNode {
  std::string name;
  doc::AttrList attrs;
  std::vector<ReactNode> children;
};
struct RInst {
  std::shared_ptr<const Instance> inst;
};

struct ReactNode : std::variant<RText, RNode, RInst> {
  using variant::variant;
};

// Components are host-level functions over kernel values, identified by a
// nominal registry key. update and view must be pure.
struct Component {
  std::string key;
  kernel::Type prop_type;
  std::function<Value(const Value& props)> init;
  std::function<Value(const Signal&, const Value& state)> update;
  std::function<ReactNode(const Value& state, Runtime&)> view;
};

struct Instance {
  InstId id;
  std::shared_ptr<const Component> com;
  Value props;
  Value state;
  ReactNode node;
};

using Registry = std::map<std::string, std::shared_ptr<const Component>>;

struct PropTypeMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnknownComponent : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnknownInstance : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Owns the instance-id counter and the component registry. Copying takes a
// snapshot, so two runs from the same snapshot assign identical ids.
class Runtime {
 public:
  explicit Runtime(std::shared_ptr<const Registry> registry)
      : registry_(std::move(registry)) {}

  ReactNode instantiate(const std::shared_ptr<const Component>& com,
                        Value props);
  ReactNode instantiate_key(const std::string& key, Value props);

  const Registry& registry() const { return *registry_; }
  std::shared_ptr<const Registry> registry_ptr() const { return registry_; }
  InstId next_id() const { return next_id_; }

 private:
  std::shared_ptr<const Registry> registry_;
  InstId next_id_ = 0;
};

bool operator==(const ReactNode& a, const ReactNode& b);
inline bool operator!=(const ReactNode& a, const ReactNode& b) {
  return !(a == b);
}

// Delivers at most one signal per instance; unsignalled instances keep
// their state and recurse.
ReactNode doc_step(Runtime& rt, const SignalMap& signals, const ReactNode& n);
std::vector<ReactNode> doc_step(Runtime& rt, const SignalMap& signals,
                                const std::vector<ReactNode>& roots);

// Merges an instance's old and new views so unrelated component state
// persists across steps.
ReactNode reconcile(Runtime& rt, const SignalMap& signals,
                    const ReactNode& old_node, const ReactNode& new_node);

// Replaces instances by their views; the result contains no instance.
doc::NodeList doc_view(const ReactNode& n);
doc::NodeList doc_view(const std::vector<ReactNode>& roots);

// Node names reachable from `n`, crossing instance boundaries.
std::set<std::string> descendents(const ReactNode& n);

// Conservative invalidation check between two successive runtime states:
// true iff a stepped instance's old or new subtree mentions "section".
bool dirty(const ReactNode& old_node, const ReactNode& new_node);
bool dirty(const std::vector<ReactNode>& old_roots,
           const std::vector<ReactNode>& new_roots);

std::set<InstId> collect_instance_ids(const std::vector<ReactNode>& roots);

// Builds a runtime tree from an evaluated kernel value of type ReactNode
// (or ReactNode list for the vector overload), instantiating components
// through the runtime's registry.
ReactNode mount_value(Runtime& rt, const Value& value);
std::vector<ReactNode> mount_list_value(Runtime& rt, const Value& value);

struct RunStats {
  std::size_t sections_calls = 0;
  std::vector<bool> dirty_steps;  // one entry per trace step (incremental)
};

struct RunResult {
  std::vector<doc::NodeList> outputs;   // reference-rendered articles
  std::vector<doc::NodeList> articles;  // raw doc_view articles a_i
  RunStats stats;
};

struct RunOptions {
  bool validate_signal_ids = false;
};

// Renders references from scratch on every article.
RunResult run_simple(Runtime rt, std::vector<ReactNode> roots,
                     const std::vector<SignalMap>& trace,
                     const RunOptions& options = {});
// Reuses the cached identifier context until the dirty check fires.
RunResult run_incr(Runtime rt, std::vector<ReactNode> roots,
                   const std::vector<SignalMap>& trace,
                   const RunOptions& options = {});

RunResult run_simple(Runtime rt, const ReactNode& root,
                     const std::vector<SignalMap>& trace,
                     const RunOptions& options = {});
RunResult run_incr(Runtime rt, const ReactNode& root,
                   const std::vector<SignalMap>& trace,
                   const RunOptions& options = {});

// Components available to programs: counter, static-text, toggle-section,
// nest.
std::shared_ptr<const Registry> builtin_registry();

}  // namespace doccalc::reactive
