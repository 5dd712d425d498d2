#include "gramtao/value.hpp"

#include <charconv>
#include <cstdio>

namespace gramtao {

SemValue SemValue::make_int(int64_t v) {
  SemValue x;
  x.kind = Kind::Int;
  x.i = v;
  return x;
}

SemValue SemValue::make_wide(int64_t v) {
  SemValue x;
  x.kind = Kind::Wide;
  x.i = v;
  return x;
}

SemValue SemValue::make_real(double v) {
  SemValue x;
  x.kind = Kind::Real;
  x.r = v;
  return x;
}

SemValue SemValue::make_text(std::string v) {
  SemValue x;
  x.kind = Kind::Text;
  x.s = std::move(v);
  return x;
}

SemValue SemValue::make_bool(bool v) {
  SemValue x;
  x.kind = Kind::Bool;
  x.b = v;
  return x;
}

std::string SemValue::to_text() const {
  switch (kind) {
    case Kind::Int:
    case Kind::Wide:
      return std::to_string(i);
    case Kind::Real: {
      char buf[64];
      auto res = std::to_chars(buf, buf + sizeof(buf), r);
      return std::string(buf, res.ptr);
    }
    case Kind::Text:
      return s;
    case Kind::Bool:
      return b ? "true" : "false";
  }
  return {};
}

bool SemValue::operator==(const SemValue& o) const {
  if (kind != o.kind) return false;
  switch (kind) {
    case Kind::Int:
    case Kind::Wide:
      return i == o.i;
    case Kind::Real:
      return r == o.r;
    case Kind::Text:
      return s == o.s;
    case Kind::Bool:
      return b == o.b;
  }
  return false;
}

const char* kind_name(SemValue::Kind k) {
  switch (k) {
    case SemValue::Kind::Int: return "Int";
    case SemValue::Kind::Wide: return "Wide";
    case SemValue::Kind::Real: return "Real";
    case SemValue::Kind::Text: return "Text";
    case SemValue::Kind::Bool: return "Bool";
  }
  return "?";
}

void TagEnv::bind(const DerivNode* anchor, uint32_t index, SemValue value) {
  anchors_[anchor].emplace_back(index, std::move(value));
  ++count_;
}

const std::vector<std::pair<uint32_t, SemValue>>* TagEnv::at(const DerivNode* anchor) const {
  auto it = anchors_.find(anchor);
  return it == anchors_.end() ? nullptr : &it->second;
}

void TagEnv::clear() {
  anchors_.clear();
  count_ = 0;
}

}  // namespace gramtao
