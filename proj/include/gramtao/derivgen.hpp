#pragma once

#include <cstdint>
#include <deque>
#include <set>
#include <string>
#include <vector>

#include "gramtao/grammar_spec.hpp"
#include "gramtao/value.hpp"

namespace gramtao {

// First-child/next-sibling derivation tree node. Reduction splices swap the
// production and first_child link of a variable node, so detached subtrees
// stay alive in the owning tree's arena and can be restored.
struct DerivNode {
  Symbol label;
  const Production* production = nullptr;  // set iff label is a Variable
  int64_t value = 0;                       // instantiated symbolic-terminal value
  DerivNode* first_child = nullptr;
  DerivNode* next_sibling = nullptr;

  bool is_variable() const { return label.kind == SymbolKind::Variable; }
  std::vector<DerivNode*> children() const;
};

class DerivationTree {
 public:
  explicit DerivationTree(const GrammarSpec* spec) : spec_(spec) {}
  DerivationTree(DerivationTree&&) noexcept = default;
  DerivationTree& operator=(DerivationTree&&) noexcept = default;
  DerivationTree(const DerivationTree&) = delete;
  DerivationTree& operator=(const DerivationTree&) = delete;

  DerivNode* make(Symbol label);
  DerivNode* root() const { return root_; }
  void set_root(DerivNode* n) { root_ = n; }
  const GrammarSpec& spec() const { return *spec_; }

  DerivationTree clone() const;
  std::size_t node_count() const;

 private:
  const GrammarSpec* spec_;
  std::deque<DerivNode> arena_;
  DerivNode* root_ = nullptr;
};

struct GenConfig {
  uint64_t seed = 0;
  std::size_t count = 1;
  int depth_budget = 12;
  int max_attempts = 1000;
};

struct GenResult {
  std::vector<DerivationTree> trees;
  bool exhausted = false;  // max_attempts consecutive duplicates before count
};

// Builds up to cfg.count pairwise structurally distinct trees rooted at the
// start symbol. A coverage phase first constructs one tree per production,
// then a weighted-random phase (weight 1/(1+uses) per production) fills the
// rest; expansions past the depth budget always take the production with the
// smallest completion height. Pure function of (spec, cfg).
GenResult generate(const GrammarSpec& spec, const GenConfig& cfg);

// Preorder digest over (label kind, production ordinal); symbolic-terminal
// values and tag renderings are excluded, so trees that differ only in
// instantiated values collide on purpose.
uint64_t structural_hash(const DerivNode* root);

bool structural_equal(const DerivNode* a, const DerivNode* b);

// Deep-copies a subtree into another tree's arena and returns the new root.
DerivNode* clone_into(const DerivNode* src, DerivationTree& dst);

std::size_t subtree_size(const DerivNode* root);

std::vector<const DerivNode*> preorder(const DerivNode* root);

std::set<int> used_productions(const DerivNode* root);

// Left-to-right concatenation of leaf texts. A single space separates two
// leaves whose adjacent characters are both word characters ([A-Za-z0-9_]).
// Throws UnboundTagError when a $[N] leaf has no binding in scope.
std::string yield_text(const DerivNode* root, const TagEnv& tags);

// Same, but renders an out-of-scope tag as the placeholder "$[N]".
std::string yield_text_lenient(const DerivNode* root, const TagEnv& tags);

// Checks every node against the grammar: children match the production rhs
// symbol-for-symbol, symbolic values sit inside their class range. Throws
// std::runtime_error with a description on the first violation.
void verify_tree(const GrammarSpec& spec, const DerivNode* root);

// Deterministic structural dump including symbolic values; used for
// byte-identical determinism checks.
std::string dump_structure(const DerivNode* root);

}  // namespace gramtao
