#include "gramtao/derivgen.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "gramtao/errors.hpp"
#include "gramtao/rng.hpp"

namespace gramtao {

std::vector<DerivNode*> DerivNode::children() const {
  std::vector<DerivNode*> out;
  for (DerivNode* c = first_child; c; c = c->next_sibling) out.push_back(c);
  return out;
}

DerivNode* DerivationTree::make(Symbol label) {
  arena_.emplace_back();
  DerivNode* n = &arena_.back();
  n->label = std::move(label);
  return n;
}

namespace {

DerivNode* clone_rec(const DerivNode* src, DerivationTree& dst) {
  DerivNode* n = dst.make(src->label);
  n->production = src->production;
  n->value = src->value;
  DerivNode** link = &n->first_child;
  for (const DerivNode* c = src->first_child; c; c = c->next_sibling) {
    *link = clone_rec(c, dst);
    link = &(*link)->next_sibling;
  }
  return n;
}

}  // namespace

DerivationTree DerivationTree::clone() const {
  DerivationTree out(spec_);
  if (root_) out.set_root(clone_rec(root_, out));
  return out;
}

DerivNode* clone_into(const DerivNode* src, DerivationTree& dst) {
  return clone_rec(src, dst);
}

std::size_t DerivationTree::node_count() const { return root_ ? subtree_size(root_) : 0; }

std::size_t subtree_size(const DerivNode* root) {
  if (!root) return 0;
  std::size_t n = 1;
  for (const DerivNode* c = root->first_child; c; c = c->next_sibling) n += subtree_size(c);
  return n;
}

std::vector<const DerivNode*> preorder(const DerivNode* root) {
  std::vector<const DerivNode*> out;
  std::vector<const DerivNode*> stack{root};
  if (!root) return out;
  while (!stack.empty()) {
    const DerivNode* n = stack.back();
    stack.pop_back();
    out.push_back(n);
    std::vector<const DerivNode*> kids;
    for (const DerivNode* c = n->first_child; c; c = c->next_sibling) kids.push_back(c);
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
  }
  return out;
}

std::set<int> used_productions(const DerivNode* root) {
  std::set<int> out;
  for (const DerivNode* n : preorder(root))
    if (n->production) out.insert(n->production->ordinal);
  return out;
}

uint64_t structural_hash(const DerivNode* root) {
  uint64_t h = 1469598103934665603ull;
  auto mix = [&h](uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (i * 8)) & 0xff;
      h *= 1099511628211ull;
    }
  };
  for (const DerivNode* n : preorder(root)) {
    mix(static_cast<uint64_t>(n->label.kind) + 1);
    mix(n->production ? static_cast<uint64_t>(n->production->ordinal) + 1 : 0);
  }
  return h;
}

bool structural_equal(const DerivNode* a, const DerivNode* b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->label.kind != b->label.kind) return false;
  if (a->production != b->production) return false;
  if (!a->production && a->label.kind != b->label.kind) return false;
  const DerivNode* ca = a->first_child;
  const DerivNode* cb = b->first_child;
  while (ca && cb) {
    if (!structural_equal(ca, cb)) return false;
    ca = ca->next_sibling;
    cb = cb->next_sibling;
  }
  return !ca && !cb;
}

namespace {

bool word_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

void append_piece(std::string& out, const std::string& piece) {
  if (!out.empty() && !piece.empty() && word_char(out.back()) && word_char(piece.front()))
    out += ' ';
  out += piece;
}

struct YieldWalker {
  const TagEnv& tags;
  bool strict;
  std::string out;
  std::vector<std::pair<uint32_t, const SemValue*>> scope;

  void walk(const DerivNode* n) {
    std::size_t mark = scope.size();
    if (const auto* bindings = tags.at(n))
      for (const auto& [idx, v] : *bindings) scope.emplace_back(idx, &v);
    switch (n->label.kind) {
      case SymbolKind::Variable:
        for (const DerivNode* c = n->first_child; c; c = c->next_sibling) walk(c);
        break;
      case SymbolKind::Literal:
        append_piece(out, n->label.text);
        break;
      case SymbolKind::Symbolic:
        append_piece(out, std::to_string(n->value));
        break;
      case SymbolKind::TagRef: {
        const SemValue* found = nullptr;
        for (auto it = scope.rbegin(); it != scope.rend(); ++it) {
          if (it->first == n->label.tag) {
            found = it->second;
            break;
          }
        }
        if (found) {
          append_piece(out, found->to_text());
        } else if (strict) {
          throw UnboundTagError(n->label.tag);
        } else {
          append_piece(out, "$[" + std::to_string(n->label.tag) + "]");
        }
        break;
      }
    }
    scope.resize(mark);
  }
};

}  // namespace

std::string yield_text(const DerivNode* root, const TagEnv& tags) {
  YieldWalker w{tags, true, {}, {}};
  if (root) w.walk(root);
  return std::move(w.out);
}

std::string yield_text_lenient(const DerivNode* root, const TagEnv& tags) {
  YieldWalker w{tags, false, {}, {}};
  if (root) w.walk(root);
  return std::move(w.out);
}

void verify_tree(const GrammarSpec& spec, const DerivNode* root) {
  if (!root) throw std::runtime_error("tree has no root");
  for (const DerivNode* n : preorder(root)) {
    switch (n->label.kind) {
      case SymbolKind::Variable: {
        if (!n->production) throw std::runtime_error("variable node without a production");
        const Production& p = *n->production;
        if (p.lhs != n->label.text)
          throw std::runtime_error("node " + n->label.text + " expanded by a rule for " + p.lhs);
        std::vector<DerivNode*> kids = n->children();
        if (kids.size() != p.rhs.size())
          throw std::runtime_error("node " + n->label.text + " has " +
                                   std::to_string(kids.size()) + " children, rule wants " +
                                   std::to_string(p.rhs.size()));
        for (std::size_t i = 0; i < kids.size(); ++i)
          if (!(kids[i]->label == p.rhs[i]))
            throw std::runtime_error("child " + std::to_string(i) + " of " + n->label.text +
                                     " does not match the rule");
        break;
      }
      case SymbolKind::Symbolic: {
        const SymbolicClass* cls = spec.find_class(n->label.text);
        if (!cls) throw std::runtime_error("undefined terminal class " + n->label.text);
        if (n->value < cls->lo || n->value > cls->hi)
          throw std::runtime_error("value " + std::to_string(n->value) + " outside [" +
                                   std::to_string(cls->lo) + "," + std::to_string(cls->hi) +
                                   "] for [" + n->label.text + "]");
        if (n->first_child) throw std::runtime_error("terminal node with children");
        break;
      }
      default:
        if (n->first_child) throw std::runtime_error("terminal node with children");
        if (n->production) throw std::runtime_error("terminal node with a production");
        break;
    }
  }
}

std::string dump_structure(const DerivNode* root) {
  std::string out;
  auto rec = [&out](const DerivNode* n, auto&& self) -> void {
    switch (n->label.kind) {
      case SymbolKind::Variable: {
        out += "(" + std::to_string(n->production->ordinal);
        for (const DerivNode* c = n->first_child; c; c = c->next_sibling) self(c, self);
        out += ")";
        break;
      }
      case SymbolKind::Literal:
        out += "'";
        break;
      case SymbolKind::Symbolic:
        out += "#" + std::to_string(n->value);
        break;
      case SymbolKind::TagRef:
        out += "$" + std::to_string(n->label.tag);
        break;
    }
  };
  if (root) rec(root, rec);
  return out;
}

// --- generation -----------------------------------------------------------

namespace {

struct Generator {
  const GrammarSpec& spec;
  const GenConfig& cfg;
  std::map<std::string, int> heights;
  std::vector<int> prod_height;                 // by ordinal
  std::map<std::string, int> forced_choice;     // variable -> ordinal
  std::vector<uint64_t> uses;

  explicit Generator(const GrammarSpec& s, const GenConfig& c) : spec(s), cfg(c) {
    heights = min_height(spec);
    prod_height.resize(spec.productions.size());
    for (const Production& p : spec.productions)
      prod_height[p.ordinal] = production_min_height(p, heights);
    for (const auto& [var, ordinals] : spec.by_lhs) {
      int best = ordinals.front();
      for (int idx : ordinals)
        if (prod_height[idx] < prod_height[best]) best = idx;
      forced_choice[var] = best;
    }
    uses.assign(spec.productions.size(), 0);
  }

  DerivNode* make_leaf(DerivationTree& tree, const Symbol& sym, Rng& rng) {
    DerivNode* n = tree.make(sym);
    if (sym.kind == SymbolKind::Symbolic) {
      const SymbolicClass& cls = *spec.find_class(sym.text);
      n->value = rng.range(cls.lo, cls.hi);
    }
    return n;
  }

  void expand_with(DerivationTree& tree, DerivNode* node, const Production& p, Rng& rng,
                   int depth, bool forced) {
    node->production = &p;
    ++uses[p.ordinal];
    DerivNode** link = &node->first_child;
    for (const Symbol& sym : p.rhs) {
      DerivNode* child;
      if (sym.kind == SymbolKind::Variable) {
        child = tree.make(sym);
        expand(tree, child, rng, depth + 1, forced);
      } else {
        child = make_leaf(tree, sym, rng);
      }
      *link = child;
      link = &child->next_sibling;
    }
  }

  void expand(DerivationTree& tree, DerivNode* node, Rng& rng, int depth, bool forced) {
    const auto& ordinals = spec.by_lhs.at(node->label.text);
    int chosen;
    if (forced || depth >= cfg.depth_budget) {
      chosen = forced_choice.at(node->label.text);
      forced = true;
    } else {
      double total = 0;
      for (int idx : ordinals) total += 1.0 / (1.0 + static_cast<double>(uses[idx]));
      double r = rng.unit() * total;
      chosen = ordinals.back();
      for (int idx : ordinals) {
        r -= 1.0 / (1.0 + static_cast<double>(uses[idx]));
        if (r <= 0) {
          chosen = idx;
          break;
        }
      }
    }
    expand_with(tree, node, spec.productions[chosen], rng, depth, forced);
  }

  DerivationTree random_tree(uint64_t attempt) {
    Rng rng(Rng::mix(cfg.seed, attempt));
    DerivationTree tree(&spec);
    DerivNode* root = tree.make(sym_var(spec.start));
    tree.set_root(root);
    expand(tree, root, rng, 0, false);
    return tree;
  }

  // Shortest path (in expansion steps) from start to `target`, as the list
  // of (production ordinal, rhs position to follow). Lowest ordinal wins
  // ties via scan order.
  std::vector<std::pair<int, int>> path_to(const std::string& target) const {
    std::map<std::string, std::pair<int, int>> via;  // var -> (production, pos) used to reach it
    std::map<std::string, std::string> prev;
    std::vector<std::string> frontier{spec.start};
    std::set<std::string> seen{spec.start};
    while (!frontier.empty() && !seen.count(target)) {
      std::vector<std::string> next;
      for (const std::string& var : frontier) {
        for (int idx : spec.by_lhs.at(var)) {
          const Production& p = spec.productions[idx];
          for (std::size_t pos = 0; pos < p.rhs.size(); ++pos) {
            const Symbol& s = p.rhs[pos];
            if (s.kind != SymbolKind::Variable || seen.count(s.text)) continue;
            seen.insert(s.text);
            via[s.text] = {idx, static_cast<int>(pos)};
            prev[s.text] = var;
            next.push_back(s.text);
          }
        }
      }
      frontier = std::move(next);
    }
    std::vector<std::pair<int, int>> steps;
    std::string var = target;
    while (var != spec.start) {
      auto it = via.find(var);
      if (it == via.end()) return {};  // unreachable; caller checked properness
      steps.push_back(it->second);
      var = prev.at(var);
    }
    std::reverse(steps.begin(), steps.end());
    return steps;
  }

  DerivationTree covering_tree(const Production& target, uint64_t attempt) {
    Rng rng(Rng::mix(cfg.seed, attempt));
    DerivationTree tree(&spec);
    DerivNode* node = tree.make(sym_var(spec.start));
    tree.set_root(node);
    for (const auto& [prod_idx, pos] : path_to(target.lhs)) {
      const Production& p = spec.productions[prod_idx];
      node->production = &p;
      ++uses[p.ordinal];
      DerivNode* follow = nullptr;
      DerivNode** link = &node->first_child;
      for (std::size_t i = 0; i < p.rhs.size(); ++i) {
        const Symbol& sym = p.rhs[i];
        DerivNode* child;
        if (sym.kind == SymbolKind::Variable) {
          child = tree.make(sym);
          if (static_cast<int>(i) == pos)
            follow = child;
          else
            expand(tree, child, rng, 0, true);
        } else {
          child = make_leaf(tree, sym, rng);
        }
        *link = child;
        link = &child->next_sibling;
      }
      node = follow;
    }
    expand_with(tree, node, target, rng, 0, true);
    return tree;
  }
};

}  // namespace

GenResult generate(const GrammarSpec& spec, const GenConfig& cfg) {
  ValidationReport report = validate_properness(spec);
  if (!report.ok())
    throw std::invalid_argument("grammar rejected for generation:\n" + report.to_text());

  Generator gen(spec, cfg);
  for (const auto& [var, h] : gen.heights)
    if (cfg.depth_budget < h)
      throw std::invalid_argument("depth budget " + std::to_string(cfg.depth_budget) +
                                  " is below the minimal height of " + var);

  GenResult result;
  std::unordered_map<uint64_t, std::vector<std::size_t>> buckets;
  auto try_accept = [&](DerivationTree&& tree) {
    uint64_t h = structural_hash(tree.root());
    for (std::size_t idx : buckets[h])
      if (structural_equal(result.trees[idx].root(), tree.root())) return false;
    buckets[h].push_back(result.trees.size());
    result.trees.push_back(std::move(tree));
    return true;
  };

  uint64_t attempt = 0;
  for (const Production& p : spec.productions) {
    if (result.trees.size() >= cfg.count) break;
    try_accept(gen.covering_tree(p, attempt++));
  }

  int consecutive_dupes = 0;
  while (result.trees.size() < cfg.count) {
    if (consecutive_dupes >= cfg.max_attempts) {
      result.exhausted = true;
      break;
    }
    if (try_accept(gen.random_tree(attempt++)))
      consecutive_dupes = 0;
    else
      ++consecutive_dupes;
  }
  return result;
}

}  // namespace gramtao
