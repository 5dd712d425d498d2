#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gramtao/checker.hpp"
#include "gramtao/semantics.hpp"

namespace gramtao {

// One attempted splice, kept or restored. after_text always comes from a
// strictly smaller tree than before_text's.
struct ReductionStep {
  ReductionStrategy strategy;
  int node_path = 0;  // preorder index of the spliced node at attempt time
  std::string before_text;
  std::string after_text;
  std::optional<SemValue> oracle_after;
  bool kept = false;
  std::string note;  // "eval-error" when the splice broke evaluation
};

struct ReductionReport {
  TestArtifact original;
  TestArtifact reduced;
  std::vector<ReductionStep> steps;
  double ratio = 0.0;  // 1 - len(reduced.text)/len(original.text)
  FailureClass failure_class = FailureClass::None;

  int kept_steps() const;
};

struct GddOptions {
  // Overrides the grammar file's reduction directives when non-empty.
  std::vector<ReductionStrategy> strategies;
  // Test observer invoked right after every splice, before the verdict.
  std::function<void(const DerivNode* root)> on_splice;
};

// Grammar-directed delta debugging: applies each strategy in directive order
// over the whole tree (top-down, depth-first, store/restore per node) and
// repeats until a full pass keeps nothing. Splices are kept only when the
// checker still fails in the same failure class; a splice whose oracle can
// no longer be evaluated is restored. The result is 1-minimal with respect
// to the strategy set. Throws NotFailingError when the input already passes.
ReductionReport gdd(const GrammarSpec& spec, const Domain& domain, const TestArtifact& artifact,
                    const FailureChecker& checker, const GddOptions& options = {});

// Applicability probe for a single node (no mutation).
bool reduce_by(const GrammarSpec& spec, const DerivNode* node, const ReductionStrategy& strategy);

// Enumeration of every single splice the strategy set offers on a tree, for
// minimality audits: apply_splice_copy replays one descriptor on a cloned
// artifact and returns the result (nullopt when evaluation fails).
struct SpliceDescriptor {
  ReductionStrategy strategy;
  int node_preorder = 0;
  int candidate = 0;
};

std::vector<SpliceDescriptor> enumerate_splices(const GrammarSpec& spec, const DerivNode* root,
                                                const std::vector<ReductionStrategy>& strategies);

std::optional<TestArtifact> apply_splice_copy(const GrammarSpec& spec, const Domain& domain,
                                              const TestArtifact& artifact,
                                              const SpliceDescriptor& desc);

}  // namespace gramtao
