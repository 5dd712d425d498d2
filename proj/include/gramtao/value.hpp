#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace gramtao {

struct DerivNode;

// Dynamic semantic value. Wide shares the representation of Int but plays a
// distinct role (epoch milliseconds, durations), matching the long-typed
// quantities of the parking domain.
struct SemValue {
  enum class Kind { Int, Wide, Real, Text, Bool };

  Kind kind = Kind::Int;
  int64_t i = 0;
  double r = 0.0;
  std::string s;
  bool b = false;

  static SemValue make_int(int64_t v);
  static SemValue make_wide(int64_t v);
  static SemValue make_real(double v);
  static SemValue make_text(std::string v);
  static SemValue make_bool(bool v);

  // Total, deterministic rendering: Int/Wide decimal, Real shortest
  // round-trip decimal, Bool "true"/"false", Text verbatim.
  std::string to_text() const;

  bool operator==(const SemValue& o) const;
  bool operator!=(const SemValue& o) const { return !(*this == o); }
};

const char* kind_name(SemValue::Kind k);

// Tagging-variable bindings anchored at the derivation node that bound them.
// A $[N] leaf resolves to the nearest ancestor binding, which the renderer
// reconstructs while walking the tree.
class TagEnv {
 public:
  void bind(const DerivNode* anchor, uint32_t index, SemValue value);
  const std::vector<std::pair<uint32_t, SemValue>>* at(const DerivNode* anchor) const;
  void clear();
  std::size_t size() const { return count_; }

 private:
  std::unordered_map<const DerivNode*, std::vector<std::pair<uint32_t, SemValue>>> anchors_;
  std::size_t count_ = 0;
};

}  // namespace gramtao
