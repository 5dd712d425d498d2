#include "gramtao/gdd.hpp"

#include <algorithm>
#include <deque>

#include "gramtao/errors.hpp"

namespace gramtao {

const char* failure_class_name(FailureClass c) {
  switch (c) {
    case FailureClass::None: return "pass";
    case FailureClass::OracleMismatch: return "mismatch";
    case FailureClass::SutCrash: return "crash";
    case FailureClass::SutTimeout: return "timeout";
  }
  return "?";
}

int ReductionReport::kept_steps() const {
  int n = 0;
  for (const ReductionStep& s : steps)
    if (s.kept) ++n;
  return n;
}

namespace {

// One proposed splice at a node. Donor-based candidates (direct/indirect
// recursion) adopt another node's production and child chain untouched;
// default-rule candidates rebuild the chain from matched children plus fresh
// terminal leaves, so their original sibling links need backing up.
struct Candidate {
  const Production* new_prod = nullptr;
  bool donor_based = false;
  DerivNode* donor_first_child = nullptr;
  std::vector<DerivNode*> reused;  // default: per rhs symbol, nullptr = fresh leaf
};

struct Backup {
  DerivNode* node = nullptr;
  const Production* production = nullptr;
  DerivNode* first_child = nullptr;
  std::vector<std::pair<DerivNode*, DerivNode*>> sibling_links;
};

std::vector<Candidate> candidates_for(const GrammarSpec& spec, const DerivNode* node,
                                      const ReductionStrategy& strategy) {
  std::vector<Candidate> out;
  if (!node->is_variable()) return out;
  const std::string& var = node->label.text;

  switch (strategy.kind) {
    case ReductionStrategy::Kind::Default: {
      const Production* def = spec.default_production(var);
      if (!def || def == node->production) return out;
      Candidate c;
      c.new_prod = def;
      std::vector<DerivNode*> kids = node->children();
      std::size_t cursor = 0;
      std::size_t kept_nodes = 0;
      for (const Symbol& sym : def->rhs) {
        DerivNode* match = nullptr;
        for (std::size_t i = cursor; i < kids.size(); ++i) {
          if (kids[i]->label == sym) {
            match = kids[i];
            cursor = i + 1;
            break;
          }
        }
        if (match) {
          c.reused.push_back(match);
          kept_nodes += subtree_size(match);
        } else if (sym.kind == SymbolKind::Variable || sym.kind == SymbolKind::Symbolic) {
          return out;  // a needed subtree is missing; not applicable
        } else {
          c.reused.push_back(nullptr);
          ++kept_nodes;
        }
      }
      if (1 + kept_nodes >= subtree_size(node)) return out;  // must strictly reduce
      out.push_back(std::move(c));
      return out;
    }

    case ReductionStrategy::Kind::DirectRec: {
      if (!node->production) return out;
      for (DerivNode* c = node->first_child; c; c = c->next_sibling) {
        if (c->is_variable() && c->label.text == var) {
          Candidate cand;
          cand.new_prod = c->production;
          cand.donor_based = true;
          cand.donor_first_child = c->first_child;
          out.push_back(cand);
        }
      }
      return out;
    }

    case ReductionStrategy::Kind::IndirectRec: {
      if (std::find(strategy.vars.begin(), strategy.vars.end(), var) == strategy.vars.end())
        return out;
      // Breadth-first: shallowest, then leftmost. Direct recursive children
      // belong to DirectRec and are skipped as candidates (not as paths).
      std::deque<std::pair<DerivNode*, int>> queue;
      for (DerivNode* c = node->first_child; c; c = c->next_sibling) queue.emplace_back(c, 1);
      while (!queue.empty()) {
        auto [n, depth] = queue.front();
        queue.pop_front();
        if (n->is_variable() && n->label.text == var && depth >= 2) {
          Candidate cand;
          cand.new_prod = n->production;
          cand.donor_based = true;
          cand.donor_first_child = n->first_child;
          out.push_back(cand);
        }
        for (DerivNode* c = n->first_child; c; c = c->next_sibling)
          queue.emplace_back(c, depth + 1);
      }
      return out;
    }
  }
  return out;
}

Backup splice(DerivationTree& tree, DerivNode* node, const Candidate& cand) {
  Backup b;
  b.node = node;
  b.production = node->production;
  b.first_child = node->first_child;

  if (cand.donor_based) {
    node->production = cand.new_prod;
    node->first_child = cand.donor_first_child;
    return b;
  }

  std::vector<DerivNode*> chain;
  for (std::size_t i = 0; i < cand.new_prod->rhs.size(); ++i) {
    DerivNode* child = cand.reused[i];
    if (child) {
      b.sibling_links.emplace_back(child, child->next_sibling);
    } else {
      child = tree.make(cand.new_prod->rhs[i]);
    }
    chain.push_back(child);
  }
  for (std::size_t i = 0; i < chain.size(); ++i)
    chain[i]->next_sibling = i + 1 < chain.size() ? chain[i + 1] : nullptr;
  node->production = cand.new_prod;
  node->first_child = chain.empty() ? nullptr : chain.front();
  return b;
}

void restore(const Backup& b) {
  b.node->production = b.production;
  b.node->first_child = b.first_child;
  for (const auto& [child, sibling] : b.sibling_links) child->next_sibling = sibling;
}

int preorder_index(const DerivNode* root, const DerivNode* target) {
  int i = 0;
  for (const DerivNode* n : preorder(root)) {
    if (n == target) return i;
    ++i;
  }
  return -1;
}

struct SavedState {
  std::string text;
  SemValue oracle;
  TagEnv tags;
};

struct Reducer {
  const GrammarSpec& spec;
  const Domain& domain;
  const FailureChecker& checker;
  FailureClass klass;
  const GddOptions& options;
  TestArtifact& art;
  std::vector<ReductionStep>& steps;

  // Algorithm: visit nodes top-down depth-first; at each applicable node try
  // candidates in order (store, splice, re-evaluate, check, keep or restore),
  // then recurse into the current children.
  bool apply(const ReductionStrategy& strategy, DerivNode* node) {
    bool changed = false;
    if (node->is_variable()) {
      for (const Candidate& cand : candidates_for(spec, node, strategy)) {
        SavedState saved{art.text, *art.oracle, art.tags};
        Backup backup = splice(art.tree, node, cand);

        ReductionStep step;
        step.strategy = strategy;
        step.node_path = preorder_index(art.tree.root(), node);
        step.before_text = saved.text;

        if (options.on_splice) options.on_splice(art.tree.root());

        bool ok = true;
        try {
          art.refresh(domain);
        } catch (const EvalError& e) {
          ok = false;
          step.note = std::string("eval-error: ") + e.what();
        } catch (const UnboundTagError& e) {
          ok = false;
          step.note = std::string("eval-error: ") + e.what();
        }

        if (ok) {
          step.after_text = art.text;
          step.oracle_after = art.oracle;
          CheckOutcome outcome = checker(art.text, *art.oracle);
          if (outcome.cls == klass) {
            step.kept = true;
            steps.push_back(std::move(step));
            changed = true;
            break;  // this node's candidate list is stale now; later passes revisit
          }
        }

        restore(backup);
        art.text = std::move(saved.text);
        art.oracle = std::move(saved.oracle);
        art.tags = std::move(saved.tags);
        steps.push_back(std::move(step));
      }
    }
    for (DerivNode* c = node->first_child; c; c = c->next_sibling)
      changed = apply(strategy, c) || changed;
    return changed;
  }
};

}  // namespace

bool reduce_by(const GrammarSpec& spec, const DerivNode* node, const ReductionStrategy& strategy) {
  return !candidates_for(spec, node, strategy).empty();
}

ReductionReport gdd(const GrammarSpec& spec, const Domain& domain, const TestArtifact& artifact,
                    const FailureChecker& checker, const GddOptions& options) {
  if (!artifact.has_oracle())
    throw std::invalid_argument("cannot reduce an artifact without an oracle");

  const std::vector<ReductionStrategy>& strategies =
      options.strategies.empty() ? spec.reduction_directives : options.strategies;

  TestArtifact work = artifact.clone(domain);
  CheckOutcome first = checker(work.text, *work.oracle);
  if (first.cls == FailureClass::None)
    throw NotFailingError("artifact is not failure-inducing: " + work.text);

  std::vector<ReductionStep> steps;
  Reducer reducer{spec, domain, checker, first.cls, options, work, steps};

  std::size_t bound = work.tree.node_count() + 2;
  for (std::size_t pass = 0; pass < bound; ++pass) {
    bool changed = false;
    for (const ReductionStrategy& s : strategies)
      changed = reducer.apply(s, work.tree.root()) || changed;
    if (!changed) break;
  }

  ReductionReport report{artifact.clone(domain), std::move(work), std::move(steps)};
  report.failure_class = first.cls;
  if (!report.original.text.empty())
    report.ratio = 1.0 - static_cast<double>(report.reduced.text.size()) /
                             static_cast<double>(report.original.text.size());
  return report;
}

std::vector<SpliceDescriptor> enumerate_splices(const GrammarSpec& spec, const DerivNode* root,
                                                const std::vector<ReductionStrategy>& strategies) {
  std::vector<SpliceDescriptor> out;
  std::vector<const DerivNode*> nodes = preorder(root);
  for (const ReductionStrategy& s : strategies) {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      std::size_t n = candidates_for(spec, nodes[i], s).size();
      for (std::size_t j = 0; j < n; ++j)
        out.push_back({s, static_cast<int>(i), static_cast<int>(j)});
    }
  }
  return out;
}

std::optional<TestArtifact> apply_splice_copy(const GrammarSpec& spec, const Domain& domain,
                                              const TestArtifact& artifact,
                                              const SpliceDescriptor& desc) {
  TestArtifact copy = artifact.clone(domain);
  std::vector<const DerivNode*> nodes = preorder(copy.tree.root());
  DerivNode* node = const_cast<DerivNode*>(nodes.at(desc.node_preorder));
  std::vector<Candidate> cands = candidates_for(spec, node, desc.strategy);
  splice(copy.tree, node, cands.at(desc.candidate));
  try {
    copy.refresh(domain);
  } catch (const EvalError&) {
    return std::nullopt;
  } catch (const UnboundTagError&) {
    return std::nullopt;
  }
  return copy;
}

}  // namespace gramtao
